//! Dynamical and geometric phases of one interaction zone.
//!
//! With `a = |Ω|/|Δ|` and `θ = t/τ` the two phases are
//!
//! ```text
//! γ = (ω_ατ/2) ∫ (1/√(1+a²f²) − 1) dθ        ≤ 0
//! β = (|Δ|τ/2) ∫ (√(1+a²f²) − 1) dθ          ≥ 0
//! ```
//!
//! over the envelope window. Both integrands are rewritten so that no
//! difference of nearly equal numbers appears at small `a f`.

use std::f64::consts::PI;

use crate::envelope::{Envelope, EnvelopeKind};
use crate::error::{Error, Result};
use crate::model::ZoneParameters;
use crate::quadrature::{integrate_with_breaks, QuadOptions, DEFAULT_TOL};

/// Above this field strength the weak-field formulas are only indicative.
pub const WEAK_FIELD_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Quadrature,
    ClosedForm,
    WeakField,
    WindingSum,
    Ode,
    Wkb,
    Perturbative,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Quadrature => "quadrature",
            Method::ClosedForm => "closed_form",
            Method::WeakField => "weak_field",
            Method::WindingSum => "winding_sum",
            Method::Ode => "ode",
            Method::Wkb => "wkb",
            Method::Perturbative => "perturbative",
        }
    }
}

/// A value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Phases of one zone or of a zone sequence, unwrapped.
///
/// `beta` and `gamma` are `None` when a method only yields the total phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseResult {
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub phi_g: f64,
    pub phi_e: f64,
    pub method: Method,
    pub est_error: f64,
}

impl PhaseResult {
    /// Assembles a result from β, γ and the sign of the detuning.
    pub fn from_parts(beta: f64, gamma: f64, delta_sign: f64, method: Method, est_error: f64) -> Self {
        let (phi_g, phi_e) = total_phases(beta, gamma, delta_sign);
        Self {
            beta: Some(beta),
            gamma: Some(gamma),
            phi_g,
            phi_e,
            method,
            est_error,
        }
    }

    /// Result for a method that only knows the total ground-state phase.
    pub fn total_only(phi_g: f64, delta_sign: f64, method: Method, est_error: f64) -> Self {
        Self {
            beta: None,
            gamma: None,
            phi_g,
            phi_e: excited_phase(phi_g, delta_sign),
            method,
            est_error,
        }
    }

    pub fn phi_g_wrapped(&self) -> f64 {
        wrap_phase(self.phi_g)
    }

    pub fn phi_e_wrapped(&self) -> f64 {
        wrap_phase(self.phi_e)
    }
}

/// Reduces a phase to `(-π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

fn excited_phase(phi_g: f64, delta_sign: f64) -> f64 {
    if delta_sign < 0.0 {
        -phi_g - PI
    } else {
        -phi_g
    }
}

/// `φ_g = β·sign Δ + γ` and `φ_e = −φ_g − π·Θ(−Δ)`.
pub fn total_phases(beta: f64, gamma: f64, delta_sign: f64) -> (f64, f64) {
    let phi_g = beta * delta_sign.signum() + gamma;
    (phi_g, excited_phase(phi_g, delta_sign))
}

/// `1/√(1+s) − 1` without cancellation.
#[inline]
pub(crate) fn geometric_kernel(s: f64) -> f64 {
    let r = (1.0 + s).sqrt();
    -s / (r * (1.0 + r))
}

/// `√(1+s) − 1` without cancellation.
#[inline]
pub(crate) fn dynamical_kernel(s: f64) -> f64 {
    s / (1.0 + (1.0 + s).sqrt())
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("tol", "tolerance must be positive"))
    }
}

/// `prefactor · ∫_{-T}^{T} kernel(a² f²) dθ`, integrated over the half window
/// and doubled by evenness. Requested accuracy is `tol·(1+|result|)`.
pub(crate) fn envelope_integral(
    envelope: &Envelope,
    a: f64,
    prefactor: f64,
    kernel: impl Fn(f64) -> f64,
    tol: f64,
) -> Result<Estimate> {
    check_tol(tol)?;
    let scale = 2.0 * prefactor;
    if a == 0.0 || scale == 0.0 {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let a2 = a * a;
    let opts = QuadOptions::new(0.5 * tol / scale.abs(), 0.5 * tol);
    let r = integrate_with_breaks(
        |x| {
            let f = envelope.value(x);
            kernel(a2 * f * f)
        },
        &envelope.breakpoints(),
        opts,
    )
    .map_err(|e| match e {
        Error::QuadratureNoConvergence {
            partial,
            estimate,
            subdivisions,
        } => Error::QuadratureNoConvergence {
            partial: partial * scale,
            estimate: estimate * scale.abs(),
            subdivisions,
        },
        other => other,
    })?;
    Ok(Estimate {
        value: scale * r.value,
        error: scale.abs() * r.error,
    })
}

/// γ by adaptive quadrature.
pub fn geometric_phase_quadrature(zone: &ZoneParameters, tol: f64) -> Result<Estimate> {
    envelope_integral(
        zone.envelope(),
        zone.a(),
        0.5 * zone.omega_alpha_tau(),
        geometric_kernel,
        tol,
    )
}

/// β by adaptive quadrature (uses `|Δ|`; the sign enters only in the totals).
pub fn dynamical_phase_quadrature(zone: &ZoneParameters, tol: f64) -> Result<Estimate> {
    envelope_integral(zone.envelope(), zone.a(), 0.5 * zone.delta_abs(), dynamical_kernel, tol)
}

fn check_a(a: f64) -> Result<()> {
    if a >= 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("a", "must be non-negative and finite"))
    }
}

/// Eckart envelope: `γ_E = −(ω_ατ/2) ln(1+a²)`.
pub fn eckart_geometric_phase(a: f64, omega_alpha_tau: f64) -> Result<f64> {
    check_a(a)?;
    Ok(-0.5 * omega_alpha_tau * (a * a).ln_1p())
}

/// `a·atan a − ½ ln(1+a²)`, by its power series for small `a`.
fn eckart_dynamical_shape(a: f64) -> f64 {
    if a < 0.1 {
        // Σ (−1)^{n+1} a^{2n} / (2n(2n−1))
        let a2 = a * a;
        let mut term = a2;
        let mut sum = 0.0;
        for n in 1..40 {
            let k = 2.0 * n as f64;
            let c = term / (k * (k - 1.0));
            sum += if n % 2 == 1 { c } else { -c };
            if c < 1e-18 * sum {
                break;
            }
            term *= a2;
        }
        sum
    } else {
        a * a.atan() - 0.5 * (a * a).ln_1p()
    }
}

/// Eckart envelope: `β_E = |Δ|τ [a·atan a − ½ ln(1+a²)]`.
pub fn eckart_dynamical_phase(a: f64, delta_tau_abs: f64) -> Result<f64> {
    check_a(a)?;
    if !(delta_tau_abs > 0.0) {
        return Err(Error::domain("delta_tau_abs", "must be positive"));
    }
    Ok(delta_tau_abs * eckart_dynamical_shape(a))
}

/// Weak-field limit `(β_wf, γ_wf) = (¼|Δ|τ, −¼ω_ατ)·a²∫f²dθ`.
pub fn weak_field_phases(zone: &ZoneParameters) -> Result<(f64, f64)> {
    if zone.a() >= WEAK_FIELD_LIMIT {
        log::warn!(
            "weak-field phases requested at a = {} (>= {WEAK_FIELD_LIMIT}); expect O(a^4) errors",
            zone.a()
        );
    }
    let s = 0.25 * zone.a() * zone.a() * zone.envelope().square_integral()?;
    Ok((zone.delta_abs() * s, -zone.omega_alpha_tau() * s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KramersKronig {
    /// γ by quadrature.
    pub lhs: f64,
    /// `ω_α ∂β/∂|Δ|` by central difference.
    pub rhs: f64,
    pub discrepancy: f64,
}

/// Checks `γ = ω_α ∂β/∂|Δ|` with a central difference of relative step `h`
/// in `|Δ|`, holding `|Ω|` fixed so that `a` follows `|Δ|`.
///
/// The two shifted integrands are differenced inside one quadrature, so the
/// discrepancy is the finite-difference truncation error, `O(h²)`.
pub fn kramers_kronig_check(zone: &ZoneParameters, h: f64) -> Result<KramersKronig> {
    if !(1e-6..=1e-2).contains(&h) {
        return Err(Error::domain("h", "step must lie in [1e-6, 1e-2]"));
    }
    let tol = 1e-13;
    let lhs = geometric_phase_quadrature(zone, tol)?.value;
    let d = zone.delta_abs();
    let step = h * d;
    let (dp, dm) = (d + step, d - step);
    let rabi = zone.rabi_tau();
    let omega = zone.omega_alpha_tau();
    let rhs = if rabi == 0.0 || omega == 0.0 {
        0.0
    } else {
        let env = zone.envelope();
        let (ap2, am2) = ((rabi / dp).powi(2), (rabi / dm).powi(2));
        let r = integrate_with_breaks(
            |x| {
                let f2 = env.value(x).powi(2);
                // (β₊ − β₋) integrand, each as (D/2)(√(1+a²f²) − 1).
                0.5 * (dp * dynamical_kernel(ap2 * f2) - dm * dynamical_kernel(am2 * f2))
            },
            &env.breakpoints(),
            QuadOptions::new(1e-16, 1e-13),
        )?;
        omega * 2.0 * r.value / (2.0 * step)
    };
    Ok(KramersKronig {
        lhs,
        rhs,
        discrepancy: (lhs - rhs).abs(),
    })
}

/// Phase recipe selectable per zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZoneMethod {
    Quadrature,
    ClosedForm,
    WeakField,
}

/// β, γ and the totals of one zone by the chosen method.
pub fn zone_phases(zone: &ZoneParameters, method: ZoneMethod, tol: f64) -> Result<PhaseResult> {
    let sign = zone.delta_sign();
    match method {
        ZoneMethod::Quadrature => {
            let g = geometric_phase_quadrature(zone, tol)?;
            let b = dynamical_phase_quadrature(zone, tol)?;
            Ok(PhaseResult::from_parts(b.value, g.value, sign, Method::Quadrature, g.error + b.error))
        }
        ZoneMethod::ClosedForm => {
            if zone.envelope().kind() != EnvelopeKind::Eckart {
                return Err(Error::domain("envelope", "closed forms exist only for the Eckart envelope"));
            }
            let g = eckart_geometric_phase(zone.a(), zone.omega_alpha_tau())?;
            let b = eckart_dynamical_phase(zone.a(), zone.delta_abs())?;
            Ok(PhaseResult::from_parts(b, g, sign, Method::ClosedForm, 0.0))
        }
        ZoneMethod::WeakField => {
            let (b, g) = weak_field_phases(zone)?;
            Ok(PhaseResult::from_parts(b, g, sign, Method::WeakField, 0.0))
        }
    }
}

/// Checks that two zones form a mirrored pair: opposite detunings, equal
/// Rabi products, equal envelopes.
pub fn check_mirrored(first: &ZoneParameters, second: &ZoneParameters) -> Result<()> {
    let (d1, d2) = (first.delta_tau(), second.delta_tau());
    if d1.signum() == d2.signum() {
        return Err(Error::ZoneMismatch(format!(
            "detunings {d1} and {d2} have the same sign"
        )));
    }
    if (d1 + d2).abs() > 1e-12 * d1.abs().max(d2.abs()) {
        return Err(Error::ZoneMismatch(format!("|Δτ| differs: {d1} vs {d2}")));
    }
    let (r1, r2) = (first.rabi_tau(), second.rabi_tau());
    if (r1 - r2).abs() > 1e-12 * r1.max(r2).max(1.0) {
        return Err(Error::ZoneMismatch(format!("Rabi products differ: {r1} vs {r2}")));
    }
    if first.envelope() != second.envelope() {
        return Err(Error::ZoneMismatch("envelopes differ".into()));
    }
    Ok(())
}

/// Ground-state phase after two mirrored zones: the dynamical phases cancel
/// and `φ_g = γ + γ′`.
pub fn two_zone_total(zone_blue: &ZoneParameters, zone_red: &ZoneParameters) -> Result<PhaseResult> {
    check_mirrored(zone_blue, zone_red)?;
    let g1 = geometric_phase_quadrature(zone_blue, DEFAULT_TOL)?;
    let g2 = geometric_phase_quadrature(zone_red, DEFAULT_TOL)?;
    let gamma = g1.value + g2.value;
    Ok(PhaseResult {
        beta: Some(0.0),
        gamma: Some(gamma),
        phi_g: gamma,
        // One of the two zones is red detuned.
        phi_e: -gamma - PI,
        method: Method::Quadrature,
        est_error: g1.error + g2.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GAMMA_E_1_1: f64 = -0.346_573_590_279_972_64;
    const BETA_E_1: f64 = 0.438_824_573_117_475_64;

    fn eckart(delta: f64, omega: f64, a: f64) -> ZoneParameters {
        ZoneParameters::new(delta, omega, a, Envelope::eckart()).unwrap()
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(eckart_geometric_phase(0.0, 3.0).unwrap(), 0.0);
        assert!((eckart_geometric_phase(1.0, 1.0).unwrap() - GAMMA_E_1_1).abs() < 1e-16);
        assert!((eckart_dynamical_phase(1.0, 1.0).unwrap() - BETA_E_1).abs() < 1e-16);
        assert_eq!(eckart_dynamical_phase(0.0, 1.0).unwrap(), 0.0);
        let b = eckart_dynamical_phase(0.1, 1.0).unwrap();
        assert!((b / 5e-3 - 1.0).abs() < 0.01);
        let g = eckart_geometric_phase(1e-3, 2.0).unwrap();
        assert!((g / -(1e-6) - 1.0).abs() < 1e-6);
        assert!(eckart_geometric_phase(-1.0, 1.0).is_err());
        assert!(eckart_dynamical_phase(1.0, 0.0).is_err());
    }

    #[test]
    fn series_branch_is_continuous() {
        // Either side of the switch, against 30-digit values.
        let below = eckart_dynamical_shape(0.1 - 1e-15);
        let above = eckart_dynamical_shape(0.1);
        assert!((below / 0.004_991_699_822_532_062_2 - 1.0).abs() < 2e-16);
        assert!((above / 0.004_991_699_822_532_161_9 - 1.0).abs() < 4e-16);
        // a·atan a − ½ln(1+a²) at a = 0.05, 30 digits: 1.2494796868...e-3
        let v = eckart_dynamical_shape(0.05);
        assert!((v - 0.001_249_479_686_803_538_6).abs() < 1e-19, "{v:e}");
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let z = eckart(1.0, 1.0, 1.0);
        let g = geometric_phase_quadrature(&z, 1e-12).unwrap();
        let b = dynamical_phase_quadrature(&z, 1e-12).unwrap();
        assert!((g.value - GAMMA_E_1_1).abs() < 1e-10, "{}", g.value);
        assert!((b.value - BETA_E_1).abs() < 1e-10, "{}", b.value);
        assert!(g.error <= 1e-11);
    }

    #[test]
    fn mesa_constant_integrand() {
        let t = 2.5;
        let z = ZoneParameters::new(4.0, 1.5, 3f64.sqrt(), Envelope::mesa(t).unwrap()).unwrap();
        let g = geometric_phase_quadrature(&z, 1e-12).unwrap().value;
        let b = dynamical_phase_quadrature(&z, 1e-12).unwrap().value;
        assert!((g + 1.5 * t / 2.0).abs() < 1e-12);
        assert!((b - 4.0 * t).abs() < 1e-12);
    }

    #[test]
    fn zero_field_gives_zero() {
        for env in [Envelope::eckart(), Envelope::gaussian(), Envelope::mesa(1.0).unwrap()] {
            let z = ZoneParameters::new(3.0, 2.0, 0.0, env).unwrap();
            assert_eq!(geometric_phase_quadrature(&z, 1e-10).unwrap().value, 0.0);
            assert_eq!(dynamical_phase_quadrature(&z, 1e-10).unwrap().value, 0.0);
            assert_eq!(weak_field_phases(&z).unwrap(), (0.0, 0.0));
            let kk = kramers_kronig_check(&z, 1e-4).unwrap();
            assert_eq!((kk.lhs, kk.rhs), (0.0, 0.0));
        }
    }

    #[test]
    fn weak_field_eckart_and_ratio() {
        let z = eckart(30.0, 5.416, 0.1);
        let (b, g) = weak_field_phases(&z).unwrap();
        assert!((b - 0.5 * 30.0 * 0.01).abs() < 1e-14);
        assert!((g.abs() / b - 5.416 / 30.0).abs() < 1e-15);
        assert!((g.abs() / b - 0.1805).abs() < 1e-4);
    }

    #[test]
    fn weak_field_ratio_eckart_gaussian() {
        for env in [Envelope::eckart(), Envelope::gaussian()] {
            let z = ZoneParameters::new(40.0, 2.0, 0.05, env).unwrap();
            let g = geometric_phase_quadrature(&z, 1e-13).unwrap().value;
            let b = dynamical_phase_quadrature(&z, 1e-13).unwrap().value;
            let dev = (g.abs() / b) / (2.0 / 40.0) - 1.0;
            assert!(dev.abs() < 1e-3, "{dev}");
        }
    }

    #[test]
    fn mesa_ratio_deviation_is_exactly_one_over_root() {
        // For a flat envelope |γ/β| = (ω_α/|Δ|)/√(1+a²) at every a.
        let a: f64 = 0.05;
        let z = ZoneParameters::new(40.0, 2.0, a, Envelope::mesa(3.0).unwrap()).unwrap();
        let g = geometric_phase_quadrature(&z, 1e-13).unwrap().value;
        let b = dynamical_phase_quadrature(&z, 1e-13).unwrap().value;
        let ratio = (g.abs() / b) / (2.0 / 40.0);
        assert!((ratio - 1.0 / (1.0 + a * a).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn kramers_kronig_second_order() {
        for env in [Envelope::eckart(), Envelope::gaussian(), Envelope::mesa(2.0).unwrap()] {
            let z = ZoneParameters::new(10.0, 1.0, 1.0, env).unwrap();
            let d1 = kramers_kronig_check(&z, 1e-3).unwrap().discrepancy;
            let d2 = kramers_kronig_check(&z, 5e-4).unwrap().discrepancy;
            let ratio = d1 / d2;
            assert!((3.5..=4.5).contains(&ratio), "{ratio}");
            assert!(kramers_kronig_check(&z, 1e-4).unwrap().discrepancy < 1e-7);
        }
        assert!(kramers_kronig_check(&eckart(1.0, 1.0, 1.0), 0.1).is_err());
    }

    #[test]
    fn totals() {
        assert_eq!(total_phases(1.0, -0.1, 1.0), (0.9, -0.9));
        let (g, e) = total_phases(1.0, -0.1, -1.0);
        assert!((g + 1.1).abs() < 1e-15 && (e - (1.1 - PI)).abs() < 1e-15);
        assert_eq!(total_phases(0.0, 0.0, 1.0), (0.0, 0.0));
        assert!((wrap_phase(9.1) - (9.1 - 2.0 * PI)).abs() < 1e-15);
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
    }

    #[test]
    fn two_zones() {
        let blue = eckart(10.0, 1.0, 1.0);
        let r = two_zone_total(&blue, &blue.mirrored()).unwrap();
        assert!((r.phi_g - 2.0 * GAMMA_E_1_1).abs() < 1e-9);
        assert_eq!(r.beta, Some(0.0));
        let zero = eckart(10.0, 1.0, 0.0);
        assert_eq!(two_zone_total(&zero, &zero.mirrored()).unwrap().phi_g, 0.0);
        assert!(matches!(two_zone_total(&blue, &blue), Err(Error::ZoneMismatch(_))));
        let off = eckart(-11.0, 1.0, 10.0 / 11.0);
        assert!(two_zone_total(&blue, &off).is_err());
        let other_rabi = eckart(-10.0, 1.0, 0.9);
        assert!(two_zone_total(&blue, &other_rabi).is_err());
    }

    #[test]
    fn zone_phases_methods() {
        let z = eckart(10.0, 1.0, 1.0);
        let c = zone_phases(&z, ZoneMethod::ClosedForm, 1e-10).unwrap();
        assert!((c.beta.unwrap() - 4.388_245_731_174_756).abs() < 1e-12);
        assert!((c.phi_g - 4.041_672).abs() < 1e-6);
        let q = zone_phases(&z, ZoneMethod::Quadrature, 1e-12).unwrap();
        assert!((q.phi_g - c.phi_g).abs() < 1e-10);
        let g = ZoneParameters::new(10.0, 1.0, 1.0, Envelope::gaussian()).unwrap();
        assert!(zone_phases(&g, ZoneMethod::ClosedForm, 1e-10).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn quadrature_agrees_with_closed_form(a in 0.0f64..5.0, w in 0.0f64..20.0, d in 1.0f64..50.0) {
            let z = eckart(d, w, a);
            let g = geometric_phase_quadrature(&z, 1e-12).unwrap().value;
            let b = dynamical_phase_quadrature(&z, 1e-12).unwrap().value;
            prop_assert!((g - eckart_geometric_phase(a, w).unwrap()).abs() <= 1e-10);
            prop_assert!((b - eckart_dynamical_phase(a, d).unwrap()).abs() <= 1e-10);
        }

        #[test]
        fn signs_and_monotonicity(a in 0.0f64..5.0, da in 0.01f64..1.0, w in 0.1f64..20.0, kind in 0usize..3) {
            let env = [Envelope::eckart(), Envelope::gaussian(), Envelope::mesa(1.5).unwrap()][kind].clone();
            let z1 = ZoneParameters::new(7.0, w, a, env.clone()).unwrap();
            let z2 = ZoneParameters::new(7.0, w, a + da, env).unwrap();
            let (g1, g2) = (geometric_phase_quadrature(&z1, 1e-12).unwrap().value, geometric_phase_quadrature(&z2, 1e-12).unwrap().value);
            let (b1, b2) = (dynamical_phase_quadrature(&z1, 1e-12).unwrap().value, dynamical_phase_quadrature(&z2, 1e-12).unwrap().value);
            prop_assert!(g1 <= 0.0 && g2 < g1);
            prop_assert!(b1 >= 0.0 && b2 > b1);
        }

        #[test]
        fn weak_field_ratio_within_0_1_percent(a in 1e-4f64..0.05, w in 0.1f64..10.0, d in 5.0f64..100.0, kind in 0usize..2) {
            let env = [Envelope::eckart(), Envelope::gaussian()][kind].clone();
            let z = ZoneParameters::new(d, w, a, env).unwrap();
            let g = geometric_phase_quadrature(&z, 1e-14).unwrap().value;
            let b = dynamical_phase_quadrature(&z, 1e-14).unwrap().value;
            prop_assert!(((g.abs() / b) / (w / d) - 1.0).abs() < 1e-3);
        }

        #[test]
        fn mirrored_pair_doubles_gamma(a in 0.0f64..3.0, w in 0.0f64..5.0, d in 1.0f64..50.0) {
            let z = eckart(d, w, a);
            let r = two_zone_total(&z, &z.mirrored()).unwrap();
            let g = geometric_phase_quadrature(&z, DEFAULT_TOL).unwrap().value;
            prop_assert!((r.phi_g - 2.0 * g).abs() <= 1e-14 * (1.0 + g.abs()));
        }

        #[test]
        fn excited_phase_relation(beta in 0.0f64..100.0, gamma in -10.0f64..0.0, s in prop_oneof![Just(1.0), Just(-1.0)]) {
            let r = PhaseResult::from_parts(beta, gamma, s, Method::Quadrature, 0.0);
            prop_assert_eq!(r.phi_g, beta * s + gamma);
            let theta = if s < 0.0 { PI } else { 0.0 };
            prop_assert!(wrap_phase(r.phi_e + r.phi_g + theta).abs() < 1e-12);
        }
    }
}
