//! Transverse wave packet: phase imprint and free spreading.
//!
//! Positions are in units of the initial width `Δx₀` and times in units of
//! the spreading time `t_s = MΔx₀²/ħ`, so free motion obeys
//! `i ∂ψ/∂t = −½ ∂²ψ/∂x²`. The initial packet is
//! `ψ₀(x) = π^{−1/4} e^{−x²/2}`, i.e. `|ψ₀|² ∝ e^{−x²}`, and the width of any
//! packet is reported in that convention.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::model::ZoneParameters;
use crate::par::{map_range, pairwise_sum, Execution};
use crate::phases::{eckart_geometric_phase, geometric_phase_quadrature};
use crate::quadrature::DEFAULT_TOL;
use crate::EnvelopeKind;

/// Smallest grid used by [`GridSpec::auto`].
pub const DEFAULT_POINTS: usize = 1 << 12;
/// Smallest half-width used by [`GridSpec::auto`], in units of `Δx₀`.
pub const DEFAULT_HALF_WIDTH: f64 = 10.0;
/// Spectral power allowed above 3/4 of the Nyquist wavenumber.
pub const ALIASING_LIMIT: f64 = 1e-12;
/// Edge-to-peak amplitude ratio tolerated before wraparound is reported.
pub const EDGE_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub width0: f64,
    pub b: f64,
    pub t_s: f64,
}

impl GaussianPacket {
    pub fn new(width0: f64, b: f64, t_s: f64) -> Result<Self> {
        if !(width0 > 0.0 && width0.is_finite()) {
            return Err(Error::domain("width0", "must be positive"));
        }
        if !(t_s > 0.0 && t_s.is_finite()) {
            return Err(Error::domain("t_s", "must be positive"));
        }
        if !b.is_finite() {
            return Err(Error::domain("b", "must be finite"));
        }
        Ok(Self { width0, b, t_s })
    }

    /// Packet in natural units, `Δx₀ = t_s = 1`.
    pub fn unit(b: f64) -> Self {
        Self { width0: 1.0, b, t_s: 1.0 }
    }
}

/// `Δx(t) = Δx₀ √((1 − b t/t_s)² + (t/t_s)²)`.
pub fn analytic_width(t: f64, packet: &GaussianPacket) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::domain("t", "must be non-negative"));
    }
    let s = t / packet.t_s;
    Ok(packet.width0 * (1.0 - packet.b * s).hypot(s))
}

/// `(Δx_min, t_min)`: `(Δx₀/√(1+b²), b t_s/(1+b²))` for `b > 0`; otherwise
/// the width never shrinks and the minimum is the initial one.
pub fn min_width(packet: &GaussianPacket) -> (f64, f64) {
    let b = packet.b;
    if b <= 0.0 {
        return (packet.width0, 0.0);
    }
    let q = 1.0 + b * b;
    (packet.width0 / q.sqrt(), b * packet.t_s / q)
}

/// Curvature `b` of the imprinted phase `γ(x) ≈ −(b/2)(x/Δx₀)²`:
/// `n_zones · ω_ατ · (Ω₀/|Δ|)² · (kΔx₀ cos α)²`.
///
/// `zone` is evaluated at an antinode, so its `a` is `Ω₀/|Δ|`.
pub fn quadratic_b(zone: &ZoneParameters, k_dx0: f64, alpha: f64, n_zones: u32) -> Result<f64> {
    if !(k_dx0 > 0.0 && k_dx0.is_finite()) {
        return Err(Error::domain("k_dx0", "must be positive"));
    }
    if !matches!(n_zones, 1 | 2) {
        return Err(Error::domain("n_zones", "must be 1 or 2"));
    }
    let q = k_dx0 * alpha.cos();
    Ok(n_zones as f64 * zone.omega_alpha_tau() * zone.a() * zone.a() * q * q)
}

/// Geometric phase of one zone: closed form for the Eckart envelope,
/// quadrature otherwise.
pub fn zone_geometric_phase(zone: &ZoneParameters) -> Result<f64> {
    match zone.envelope().kind() {
        EnvelopeKind::Eckart => eckart_geometric_phase(zone.a(), zone.omega_alpha_tau()),
        _ => Ok(geometric_phase_quadrature(zone, DEFAULT_TOL)?.value),
    }
}

/// Zone seen by an atom at `x` (units of `Δx₀`) in a standing wave whose
/// antinode zone is `peak`: `a(x) = a_peak |sin(kΔx₀ cos α · x)|`.
pub fn standing_wave_zone(peak: &ZoneParameters, k_dx0: f64, alpha: f64, x: f64) -> Result<ZoneParameters> {
    let s = (k_dx0 * alpha.cos() * x).sin().abs();
    ZoneParameters::from_rabi(
        peak.delta_tau(),
        peak.omega_alpha_tau(),
        peak.rabi_tau() * s,
        peak.envelope().clone(),
    )
}

/// `γ(x)` summed over `n_zones` identical zones, evaluated on `grid`.
pub fn berry_phase_profile<F>(family: F, grid: &[f64], n_zones: u32, exec: Execution) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<ZoneParameters> + Sync + Send,
{
    let n = n_zones as f64;
    map_range(grid.len(), exec, |i| Ok(n * zone_geometric_phase(&family(grid[i])?)?))
        .into_iter()
        .collect()
}

/// Eckart profile in closed form:
/// `γ(x) = −n_zones (ω_ατ/2) ln(1 + a_peak² sin²(kΔx₀ cos α · x))`.
pub fn eckart_profile(
    a_peak: f64,
    omega_alpha_tau: f64,
    k_dx0: f64,
    alpha: f64,
    n_zones: u32,
    grid: &[f64],
    exec: Execution,
) -> Vec<f64> {
    let q = k_dx0 * alpha.cos();
    let scale = -0.5 * n_zones as f64 * omega_alpha_tau;
    let a2 = a_peak * a_peak;
    map_range(grid.len(), exec, |i| {
        let s = (q * grid[i]).sin();
        scale * (a2 * s * s).ln_1p()
    })
}

/// Uniform grid `x_j = (j − (n−1)/2)·dx`, symmetric about the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    pub half_width: f64,
}

impl GridSpec {
    pub fn new(points: usize, half_width: f64) -> Result<Self> {
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::domain("points", "must be a power of two, at least 8"));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::domain("half_width", "must be positive"));
        }
        Ok(Self { points, half_width })
    }

    /// Grid able to carry a packet with focusing parameter `b` up to `t_max`:
    /// the half-width is at least 6.5 widths at the widest point and the
    /// spacing resolves the momentum spread `√(1+b²)` with room to spare.
    pub fn auto(b: f64, t_max: f64) -> Result<Self> {
        let widest = (1.0 - b * t_max).hypot(t_max).max(1.0);
        let half_width = DEFAULT_HALF_WIDTH.max(6.5 * widest);
        let dx_max = 0.75 * std::f64::consts::PI / (6.0 * b.hypot(1.0));
        let needed = (2.0 * half_width / dx_max).ceil() as usize;
        let points = needed.max(DEFAULT_POINTS).next_power_of_two();
        Self::new(points, half_width)
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / (self.points - 1) as f64
    }

    pub fn positions(&self) -> Vec<f64> {
        let dx = self.dx();
        let mid = 0.5 * (self.points - 1) as f64;
        (0..self.points).map(|j| (j as f64 - mid) * dx).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledPacket {
    pub grid: Vec<f64>,
    pub amps: Vec<Complex64>,
    pub dx: f64,
}

impl SampledPacket {
    /// The initial Gaussian `π^{−1/4} e^{−x²/2}` on `spec`.
    pub fn gaussian(spec: GridSpec) -> Self {
        let grid = spec.positions();
        let c = std::f64::consts::PI.powf(-0.25);
        let amps = grid.iter().map(|x| Complex64::new(c * (-0.5 * x * x).exp(), 0.0)).collect();
        Self { grid, amps, dx: spec.dx() }
    }

    /// Multiplies by `e^{iφ(x)}`.
    pub fn imprint(&self, phase: &[f64]) -> Result<Self> {
        if phase.len() != self.amps.len() {
            return Err(Error::domain("phase", "length must match the grid"));
        }
        let amps = self.amps.iter().zip(phase).map(|(a, p)| a * Complex64::cis(*p)).collect();
        Ok(Self { amps, ..self.clone() })
    }

    pub fn norm(&self) -> f64 {
        let d: Vec<f64> = self.amps.iter().map(|a| a.norm_sqr()).collect();
        pairwise_sum(&d) * self.dx
    }

    /// `|ψ|` at the outermost grid points relative to its maximum.
    pub fn edge_ratio(&self) -> f64 {
        let peak = self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let n = self.amps.len();
        self.amps[0].norm().max(self.amps[n - 1].norm()) / peak
    }
}

fn check_normalized(p: &SampledPacket) -> Result<f64> {
    let norm = p.norm();
    if !((norm - 1.0).abs() <= 1e-8) {
        return Err(Error::Unnormalized { norm });
    }
    Ok(norm)
}

/// Width in the `|ψ|² ∝ e^{−x²/Δx²}` convention: `√(2(⟨x²⟩ − ⟨x⟩²))`.
pub fn measure_width(p: &SampledPacket) -> Result<f64> {
    let norm = check_normalized(p)?;
    let w: Vec<f64> = p.amps.iter().map(|a| a.norm_sqr() * p.dx / norm).collect();
    let m1: Vec<f64> = w.iter().zip(&p.grid).map(|(w, x)| w * x).collect();
    let mean = pairwise_sum(&m1);
    let m2: Vec<f64> = w.iter().zip(&p.grid).map(|(w, x)| w * (x - mean) * (x - mean)).collect();
    Ok((2.0 * pairwise_sum(&m2)).sqrt())
}

fn wavenumbers(n: usize, dx: f64) -> Vec<f64> {
    let dk = 2.0 * std::f64::consts::PI / (n as f64 * dx);
    (0..n)
        .map(|j| if j < n / 2 { j as f64 * dk } else { (j as f64 - n as f64) * dk })
        .collect()
}

/// Reusable forward/inverse FFT pair for one grid size.
pub struct Propagator {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Propagator {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// Free evolution over `t` (units of `t_s`), exact for band-limited data:
    /// each plane wave picks up `e^{−ik²t/2}`.
    pub fn propagate(&self, packet: &SampledPacket, t: f64) -> Result<SampledPacket> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::domain("t", "must be non-negative"));
        }
        if packet.amps.len() != self.n {
            return Err(Error::domain("packet", "grid size differs from the plan"));
        }
        let n = self.n;
        let mut buf = packet.amps.clone();
        self.forward.process(&mut buf);
        let k = wavenumbers(n, packet.dx);

        let k_cut = 0.75 * k[n / 2 - 1].abs();
        let power: Vec<f64> = buf.iter().map(|c| c.norm_sqr()).collect();
        let high: Vec<f64> = power
            .iter()
            .zip(&k)
            .filter(|(_, k)| k.abs() > k_cut)
            .map(|(p, _)| *p)
            .collect();
        let total = pairwise_sum(&power);
        let fraction = if total > 0.0 { pairwise_sum(&high) / total } else { 0.0 };
        if fraction > ALIASING_LIMIT {
            return Err(Error::Aliasing { fraction });
        }

        for (c, k) in buf.iter_mut().zip(&k) {
            *c *= Complex64::cis(-0.5 * k * k * t);
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / n as f64;
        for c in &mut buf {
            *c *= scale;
        }
        let out = SampledPacket {
            amps: buf,
            ..packet.clone()
        };
        let ratio = out.edge_ratio();
        if ratio > EDGE_LIMIT {
            return Err(Error::Wraparound { ratio });
        }
        Ok(out)
    }
}

/// One-off spectral free evolution; see [`Propagator::propagate`].
pub fn propagate_free(packet: &SampledPacket, t: f64) -> Result<SampledPacket> {
    Propagator::new(packet.amps.len()).propagate(packet, t)
}

/// Free evolution by direct summation of the Fresnel kernel
/// `(2πit)^{−1/2} exp(i(x − x′)²/2t)` over the grid. `O(n²)`; a reference
/// for small grids and moderate `t`, where the kernel is resolved.
pub fn propagate_kernel_direct(packet: &SampledPacket, t: f64, exec: Execution) -> Result<SampledPacket> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain("t", "must be positive"));
    }
    let span = packet.grid[packet.grid.len() - 1] - packet.grid[0];
    if span * packet.dx / t >= std::f64::consts::PI {
        return Err(Error::domain("t", "kernel oscillates faster than the grid resolves"));
    }
    let pre = (Complex64::new(0.0, 2.0 * std::f64::consts::PI * t)).sqrt().inv() * packet.dx;
    let inv2t = 0.5 / t;
    let amps = map_range(packet.grid.len(), exec, |i| {
        let x = packet.grid[i];
        let mut re = Vec::with_capacity(packet.grid.len());
        let mut im = Vec::with_capacity(packet.grid.len());
        for (xp, a) in packet.grid.iter().zip(&packet.amps) {
            let d = x - xp;
            let v = Complex64::cis(d * d * inv2t) * a;
            re.push(v.re);
            im.push(v.im);
        }
        pre * Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
    });
    Ok(SampledPacket {
        amps,
        ..packet.clone()
    })
}

/// Analytic width curves `Δx(t)/Δx₀` for each `b` at the given times
/// (units of `t_s`).
pub fn width_curves(bs: &[f64], times: &[f64]) -> Result<Vec<Vec<f64>>> {
    bs.iter()
        .map(|&b| times.iter().map(|&t| analytic_width(t, &GaussianPacket::unit(b))).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::Envelope;
    use proptest::prelude::*;

    #[test]
    fn analytic_examples() {
        let p = GaussianPacket::unit(0.0);
        assert_eq!(analytic_width(0.0, &p).unwrap(), 1.0);
        assert!((analytic_width(1.0, &p).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let p5 = GaussianPacket::unit(5.0);
        let w = analytic_width(5.0 / 26.0, &p5).unwrap();
        assert!((w - 1.0 / 26f64.sqrt()).abs() < 1e-15);
        assert!((w - 0.196_12).abs() < 1e-5);
        let (wm, tm) = min_width(&p5);
        assert!((wm - 0.196_116_135_138_184_3).abs() < 1e-15);
        assert!((tm - 0.192_307_692_307_692_3).abs() < 1e-15);
        assert_eq!(min_width(&GaussianPacket::unit(0.0)), (1.0, 0.0));
        assert_eq!(min_width(&GaussianPacket::unit(-5.0)), (1.0, 0.0));
        assert!(analytic_width(-1.0, &p).is_err());
        let dim = GaussianPacket::new(2e-6, 5.0, 3e-3).unwrap();
        let (w, t) = min_width(&dim);
        assert!((analytic_width(t, &dim).unwrap() - w).abs() < 1e-20);
    }

    #[test]
    fn b_parameter_arithmetic() {
        let z = ZoneParameters::new(100.0, 4.0 * std::f64::consts::PI, 1.8, Envelope::eckart()).unwrap();
        let one = quadratic_b(&z, 0.25, 0.0, 1).unwrap();
        let two = quadratic_b(&z, 0.25, 0.0, 2).unwrap();
        assert!((one - 2.544_690_049_407_732).abs() < 1e-12, "{one}");
        assert!((two - 2.0 * one).abs() < 1e-15);
        let z0 = ZoneParameters::new(100.0, 1.0, 0.0, Envelope::eckart()).unwrap();
        assert_eq!(quadratic_b(&z0, 0.25, 0.0, 2).unwrap(), 0.0);
        assert!(quadratic_b(&z, 0.25, 0.0, 3).is_err());
    }

    #[test]
    fn profile_examples() {
        let peak = ZoneParameters::new(1e3, 3.0, 0.7, Envelope::eckart()).unwrap();
        let family = |x: f64| standing_wave_zone(&peak, 0.1, 0.2, x);
        let g = berry_phase_profile(family, &[0.0], 1, Execution::Sequential).unwrap();
        assert_eq!(g[0], 0.0);

        // kx cos α = 0.01: γ ≈ −½ω_ατ a² (0.01)².
        let x = 0.01 / (0.1 * 0.2f64.cos());
        let g = berry_phase_profile(family, &[x], 1, Execution::Sequential).unwrap()[0];
        let quad = -0.5 * 3.0 * 0.49 * 1e-4;
        assert!((g / quad - 1.0).abs() < 2e-4);

        let grid = GridSpec::new(256, 40.0).unwrap().positions();
        let closed = eckart_profile(0.7, 3.0, 0.1, 0.2, 2, &grid, Execution::Parallel);
        let general = berry_phase_profile(family, &grid, 2, Execution::Parallel).unwrap();
        for (a, b) in closed.iter().zip(&general) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn gaussian_packet_calibration() {
        let p = SampledPacket::gaussian(GridSpec::new(DEFAULT_POINTS, DEFAULT_HALF_WIDTH).unwrap());
        assert!((p.norm() - 1.0).abs() < 1e-10);
        assert!((measure_width(&p).unwrap() - 1.0).abs() < 1e-8);
        assert!(p.edge_ratio() < 1e-8);
        let zero = SampledPacket {
            amps: vec![Complex64::new(0.0, 0.0); p.amps.len()],
            ..p
        };
        assert!(matches!(measure_width(&zero), Err(Error::Unnormalized { .. })));
    }

    #[test]
    fn free_spreading() {
        let spec = GridSpec::auto(0.0, 1.0).unwrap();
        let p = SampledPacket::gaussian(spec);
        let same = propagate_free(&p, 0.0).unwrap();
        for (a, b) in same.amps.iter().zip(&p.amps) {
            assert!((a - b).norm() < 1e-15);
        }
        let q = propagate_free(&p, 1.0).unwrap();
        assert!((measure_width(&q).unwrap() / 2f64.sqrt() - 1.0).abs() < 1e-6);
        assert!((q.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn quadratic_imprint_follows_closed_form() {
        let b = 5.0;
        let spec = GridSpec::auto(b, 2.0).unwrap();
        let p = SampledPacket::gaussian(spec);
        let phase: Vec<f64> = p.grid.iter().map(|x| -0.5 * b * x * x).collect();
        let p = p.imprint(&phase).unwrap();
        let prop = Propagator::new(spec.points);
        for i in 0..20 {
            let t = 2.0 * i as f64 / 19.0;
            let w = measure_width(&prop.propagate(&p, t).unwrap()).unwrap();
            let exact = analytic_width(t, &GaussianPacket::unit(b)).unwrap();
            assert!((w / exact - 1.0).abs() < 1e-6, "t = {t}: {w} vs {exact}");
        }
    }

    #[test]
    fn kernel_matches_spectral() {
        let spec = GridSpec::new(512, 16.0).unwrap();
        let p = SampledPacket::gaussian(spec);
        let phase: Vec<f64> = p.grid.iter().map(|x| -0.5 * x * x).collect();
        let p = p.imprint(&phase).unwrap();
        let a = propagate_free(&p, 2.0).unwrap();
        let seq = propagate_kernel_direct(&p, 2.0, Execution::Sequential).unwrap();
        let par = propagate_kernel_direct(&p, 2.0, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        let worst = a.amps.iter().zip(&seq.amps).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(worst < 1e-9, "{worst:e}");
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let spec = GridSpec::new(64, 10.0).unwrap();
        let p = SampledPacket::gaussian(spec);
        let phase: Vec<f64> = p.grid.iter().map(|x| -5.0 * x * x).collect();
        let p = p.imprint(&phase).unwrap();
        assert!(matches!(propagate_free(&p, 0.1), Err(Error::Aliasing { .. })));

        let spec = GridSpec::new(1024, 10.0).unwrap();
        let p = SampledPacket::gaussian(spec);
        assert!(matches!(propagate_free(&p, 4.0), Err(Error::Wraparound { .. })));
    }

    #[test]
    fn full_profile_focuses_near_quadratic_prediction() {
        // r = Ω₀/|Δ| = 0.5, two zones, kΔx₀ = 0.05, b = 5.
        let (r, k, n) = (0.5, 0.05, 2);
        let omega = 5.0 / (n as f64 * r * r * k * k);
        let zone = ZoneParameters::new(1e6, omega, r, Envelope::eckart()).unwrap();
        let b = quadratic_b(&zone, k, 0.0, n).unwrap();
        assert!((b - 5.0).abs() < 1e-9);
        let spec = GridSpec::auto(b, 0.5).unwrap();
        let p = SampledPacket::gaussian(spec);
        let gamma = eckart_profile(r, omega, k, 0.0, n, &p.grid, Execution::default());
        let p = p.imprint(&gamma).unwrap();
        let (wm, tm) = min_width(&GaussianPacket::unit(b));
        let w = measure_width(&propagate_free(&p, tm).unwrap()).unwrap();
        assert!((w / wm - 1.0).abs() < 0.02, "{w} vs {wm}");
    }

    fn full_profile_deviation(k: f64) -> f64 {
        let (r, n, b) = (0.5, 2, 5.0);
        let omega = b / (n as f64 * r * r * k * k);
        let spec = GridSpec::auto(b, 0.5).unwrap();
        let p = SampledPacket::gaussian(spec);
        let gamma = eckart_profile(r, omega, k, 0.0, n, &p.grid, Execution::default());
        let (wm, tm) = min_width(&GaussianPacket::unit(b));
        let w = measure_width(&propagate_free(&p.imprint(&gamma).unwrap(), tm).unwrap()).unwrap();
        (w / wm - 1.0).abs()
    }

    #[test]
    fn quadratic_approximation_error_is_second_order() {
        // 0.1 -> 0.05 still carries sixth-order terms (ratio 4.7).
        let coarse = full_profile_deviation(0.05);
        let fine = full_profile_deviation(0.025);
        let ratio = coarse / fine;
        assert!((3.5..=4.5).contains(&ratio), "{coarse:e} / {fine:e} = {ratio}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn unitarity(t in 0.0f64..5.0, b in -3.0f64..3.0) {
            let spec = GridSpec::auto(b, 5.0).unwrap();
            let p = SampledPacket::gaussian(spec);
            let phase: Vec<f64> = p.grid.iter().map(|x| -0.5 * b * x * x).collect();
            let q = propagate_free(&p.imprint(&phase).unwrap(), t).unwrap();
            prop_assert!((q.norm() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn excited_state_spreads_faster(b in 0.1f64..10.0, t in 1e-3f64..3.0) {
            let free = analytic_width(t, &GaussianPacket::unit(0.0)).unwrap();
            let excited = analytic_width(t, &GaussianPacket::unit(-b)).unwrap();
            let later = analytic_width(t * 1.01, &GaussianPacket::unit(-b)).unwrap();
            prop_assert!(excited > free && later > excited);
            prop_assert_eq!(min_width(&GaussianPacket::unit(-b)), (1.0, 0.0));
        }

        #[test]
        fn min_width_consistent(b in 0.0f64..50.0) {
            let p = GaussianPacket::unit(b);
            let (w, t) = min_width(&p);
            prop_assert!((analytic_width(t, &p).unwrap() - w).abs() < 1e-14);
        }

        #[test]
        fn profile_even_and_periodic(x in -50.0f64..50.0, k in 0.01f64..1.0, alpha in 0.0f64..1.4) {
            let period = 2.0 * std::f64::consts::PI / (k * alpha.cos());
            let g = eckart_profile(1.2, 2.0, k, alpha, 1, &[x, -x, x + period], Execution::Sequential);
            prop_assert!((g[0] - g[1]).abs() < 1e-12);
            prop_assert!((g[0] - g[2]).abs() < 1e-9);
        }
    }
}
