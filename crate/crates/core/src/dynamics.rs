//! Direct integration of the two-level Schrödinger equation and the
//! approximate solutions it is checked against.
//!
//! Two frames are supported. In the lab frame
//!
//! ```text
//! i dA/dθ = ½ [[Δτ, Ωτ f e^{+iω_αθ}], [Ωτ f e^{−iω_αθ}, −Δτ]] A
//! ```
//!
//! and in the tilde frame, `Ã_e = A_e e^{−iω_αθ/2}`, `Ã_g = A_g e^{+iω_αθ/2}`,
//!
//! ```text
//! i dÃ/dθ = ½ [[Δ̃τ, Ωτ f], [Ωτ f, −Δ̃τ]] Ã,     Δ̃ = Δ + ω_α.
//! ```
//!
//! Amplitudes are ordered `(excited, ground)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ZoneParameters;
use crate::ode::{self, OdeOptions};
use crate::phases::{
    check_mirrored, dynamical_kernel, dynamical_phase_quadrature, envelope_integral,
    geometric_phase_quadrature, wrap_phase, Method, PhaseResult,
};
use crate::quadrature::DEFAULT_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Lab,
    Tilde,
}

impl Frame {
    pub fn name(self) -> &'static str {
        match self {
            Frame::Lab => "lab",
            Frame::Tilde => "tilde",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelState {
    pub amp_e: Complex64,
    pub amp_g: Complex64,
    pub frame: Frame,
    pub t: f64,
}

impl TwoLevelState {
    /// Ground state in the tilde frame at time `t`.
    pub fn ground(t: f64) -> Self {
        Self {
            amp_e: Complex64::new(0.0, 0.0),
            amp_g: Complex64::new(1.0, 0.0),
            frame: Frame::Tilde,
            t,
        }
    }

    pub fn population_e(&self) -> f64 {
        self.amp_e.norm_sqr()
    }

    pub fn population_g(&self) -> f64 {
        self.amp_g.norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.population_e() + self.population_g()
    }
}

/// Switches a state between lab and tilde frames. Applying it twice returns
/// the input.
pub fn frame_transform(state: &TwoLevelState, zone: &ZoneParameters) -> TwoLevelState {
    let half = 0.5 * zone.omega_alpha_tau() * state.t;
    let (frame, s) = match state.frame {
        Frame::Lab => (Frame::Tilde, 1.0),
        Frame::Tilde => (Frame::Lab, -1.0),
    };
    TwoLevelState {
        amp_e: state.amp_e * Complex64::cis(-s * half),
        amp_g: state.amp_g * Complex64::cis(s * half),
        frame,
        t: state.t,
    }
}

fn in_frame(state: &TwoLevelState, zone: &ZoneParameters, frame: Frame) -> TwoLevelState {
    if state.frame == frame {
        *state
    } else {
        frame_transform(state, zone)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolverStats {
    pub steps: usize,
    pub rejected: usize,
    pub evaluations: usize,
    /// Largest `| |A_e|² + |A_g|² − 1 |` over the samples.
    pub max_norm_drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoLevelTrajectory {
    pub states: Vec<TwoLevelState>,
    pub zone: ZoneParameters,
    pub frame: Frame,
    pub stats: SolverStats,
}

/// How the amplitudes are carried through the integrator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Picture {
    /// Integrate `c_e = A_e e^{+iδθ/2}`, `c_g = A_g e^{−iδθ/2}` with the
    /// frame's own detuning δ removed exactly. Both frames then share
    /// `i c_e' = ½Ωτ f e^{iΔ̃τθ} c_g`, `i c_g' = ½Ωτ f e^{−iΔ̃τθ} c_e`,
    /// free evolution costs nothing and the norm is kept far more tightly.
    Interaction,
    /// Integrate the frame's Schrödinger equation as written.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Number of uniformly spaced output samples over `[−T, T]`. `None`
    /// picks enough for phase unwrapping.
    pub samples: Option<usize>,
    pub max_steps: usize,
    pub picture: Picture,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            samples: None,
            max_steps: 5_000_000,
            picture: Picture::Interaction,
        }
    }
}

const MIN_SAMPLES: usize = 401;
const MAX_SAMPLES: usize = 1_000_000;

/// Upper bound on the rate of the de-rotated ground phase.
fn phase_rate_bound(zone: &ZoneParameters) -> f64 {
    0.5 * zone.rabi_tau()
}

/// Sample count that keeps the de-rotated ground phase moving by less than
/// π/4 between samples.
fn auto_samples(zone: &ZoneParameters) -> usize {
    let span = 2.0 * zone.envelope().half_window();
    let needed = (span * phase_rate_bound(zone) / (PI / 4.0)).ceil() as usize + 1;
    needed.clamp(MIN_SAMPLES, MAX_SAMPLES)
}

fn sample_times(zone: &ZoneParameters, n: usize) -> Vec<f64> {
    let half = zone.envelope().half_window();
    let step = 2.0 * half / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { half } else { -half + step * i as f64 })
        .collect()
}

/// Integrates one zone starting from the tilde-frame ground state at `−T`.
pub fn solve_two_level(zone: &ZoneParameters, frame: Frame, opts: &SolveOptions) -> Result<TwoLevelTrajectory> {
    let start = TwoLevelState::ground(-zone.envelope().half_window());
    solve_two_level_from(zone, frame, &start, opts)
}

/// Integrates one zone from an arbitrary state given at `t = −T`.
pub fn solve_two_level_from(
    zone: &ZoneParameters,
    frame: Frame,
    initial: &TwoLevelState,
    opts: &SolveOptions,
) -> Result<TwoLevelTrajectory> {
    let half = zone.envelope().half_window();
    if initial.t != -half {
        return Err(Error::domain("initial", "state must be given at the window start"));
    }
    let n = opts.samples.unwrap_or_else(|| auto_samples(zone));
    if n < 2 {
        return Err(Error::domain("samples", "need at least two samples"));
    }
    let start = in_frame(initial, zone, frame);
    let times = sample_times(zone, n);

    let env = zone.envelope().clone();
    let rabi = zone.rabi_tau();
    let omega = zone.omega_alpha_tau();
    let detuning = frame_detuning(zone, frame);
    let effective = zone.effective_delta_tau();
    let picture = opts.picture;
    let mi = Complex64::new(0.0, -0.5);
    let rhs = move |t: f64, y: &[f64; 4]| {
        let ae = Complex64::new(y[0], y[1]);
        let ag = Complex64::new(y[2], y[3]);
        let c = rabi * env.value(t);
        let (de, dg) = match picture {
            Picture::Interaction => {
                let rot = Complex64::cis(effective * t) * c;
                (mi * rot * ag, mi * rot.conj() * ae)
            }
            Picture::Direct => {
                let (up, down) = match frame {
                    Frame::Lab => {
                        let rot = Complex64::cis(omega * t) * c;
                        (rot, rot.conj())
                    }
                    Frame::Tilde => (Complex64::new(c, 0.0), Complex64::new(c, 0.0)),
                };
                (mi * (ae * detuning + up * ag), mi * (down * ae - ag * detuning))
            }
        };
        [de.re, de.im, dg.re, dg.im]
    };
    // Amplitudes of the integrated picture from frame amplitudes and back.
    let to_picture = |t: f64, ae: Complex64, ag: Complex64, sign: f64| match picture {
        Picture::Interaction => (
            ae * Complex64::cis(sign * 0.5 * detuning * t),
            ag * Complex64::cis(-sign * 0.5 * detuning * t),
        ),
        Picture::Direct => (ae, ag),
    };
    let (ce, cg) = to_picture(start.t, start.amp_e, start.amp_g, 1.0);
    let y0 = [ce.re, ce.im, cg.re, cg.im];
    // Local errors are held to a tenth of the request so that their sum over
    // the window stays within ten times it.
    let ode_opts = OdeOptions {
        rtol: 0.1 * opts.rtol,
        atol: 0.1 * opts.atol,
        max_steps: opts.max_steps,
        // The envelope varies on the scale of one τ; never step across it.
        max_step: 0.5,
        ..OdeOptions::default()
    };
    let (ys, st) = ode::solve(rhs, times[0], y0, &times, &ode_opts)?;
    let norm0 = start.norm_sqr();
    let mut drift: f64 = 0.0;
    let states: Vec<TwoLevelState> = times
        .iter()
        .zip(&ys)
        .map(|(&t, y)| {
            let (amp_e, amp_g) = to_picture(t, Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3]), -1.0);
            let s = TwoLevelState { amp_e, amp_g, frame, t };
            drift = drift.max((s.norm_sqr() - norm0).abs());
            s
        })
        .collect();
    Ok(TwoLevelTrajectory {
        states,
        zone: zone.clone(),
        frame,
        stats: SolverStats {
            steps: st.steps,
            rejected: st.rejected,
            evaluations: st.evaluations,
            max_norm_drift: drift,
        },
    })
}

/// Detuning whose free evolution `e^{+iδθ/2}` the ground amplitude carries in
/// a given frame.
fn frame_detuning(zone: &ZoneParameters, frame: Frame) -> f64 {
    match frame {
        Frame::Lab => zone.delta_tau(),
        Frame::Tilde => zone.effective_delta_tau(),
    }
}

/// Unwrapped ground-state phase at every sample, relative to the first one,
/// with the free evolution `δ(θ − θ₀)/2` of the frame removed. Both frames
/// yield the same series.
pub fn phase_series(traj: &TwoLevelTrajectory) -> Result<Vec<f64>> {
    let first = traj.states.first().ok_or_else(|| Error::domain("trajectory", "empty"))?;
    let delta = frame_detuning(&traj.zone, traj.frame);
    let t0 = first.t;
    let rate = phase_rate_bound(&traj.zone);
    for w in traj.states.windows(2) {
        let bound = rate * (w[1].t - w[0].t);
        if bound >= FRAC_PI_2 {
            return Err(Error::PhaseJump { t: w[1].t, jump: bound });
        }
    }
    let mut out = Vec::with_capacity(traj.states.len());
    let mut prev_raw = 0.0;
    let mut acc = 0.0;
    for (i, s) in traj.states.iter().enumerate() {
        let amp = s.amp_g.norm();
        if amp < 0.5 {
            return Err(Error::NearZeroAmplitude { t: s.t, amplitude: amp });
        }
        let raw = (s.amp_g * Complex64::cis(-0.5 * delta * (s.t - t0))).arg();
        if i == 0 {
            prev_raw = raw;
            out.push(0.0);
            continue;
        }
        let d = wrap_phase(raw - prev_raw);
        if d.abs() >= FRAC_PI_2 {
            return Err(Error::PhaseJump { t: s.t, jump: d });
        }
        acc += d;
        prev_raw = raw;
        out.push(acc);
    }
    Ok(out)
}

/// Total ground-state phase acquired across the trajectory, unwrapped.
pub fn extract_total_phase(traj: &TwoLevelTrajectory) -> Result<f64> {
    Ok(*phase_series(traj)?.last().expect("series has one entry per state"))
}

/// Phase of one zone from the ODE oracle.
pub fn ode_phase(zone: &ZoneParameters, frame: Frame, opts: &SolveOptions) -> Result<PhaseResult> {
    let traj = solve_two_level(zone, frame, opts)?;
    let phi = extract_total_phase(&traj)?;
    Ok(PhaseResult::total_only(phi, zone.delta_sign(), Method::Ode, opts.rtol * phi.abs().max(1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbPhase {
    /// `φ̃_g = sign Δ̃ (|Δ̃|τ/2) ∫ (√(1 + ã² f²) − 1) dθ`, `ã = |Ω|/|Δ̃|`.
    pub total: f64,
    /// `β·sign Δ`, the first term of the expansion in `ω_α/Δ`.
    pub beta_part: f64,
    /// `γ`, the second term.
    pub gamma_part: f64,
    pub est_error: f64,
}

pub fn wkb_phase(zone: &ZoneParameters) -> Result<WkbPhase> {
    let d = zone.effective_delta_tau();
    if d == 0.0 {
        return Err(Error::domain("delta_tau", "effective detuning Δ + ω_α vanishes"));
    }
    let rate = zone.envelope().tail_decay();
    let margin = zone.delta_abs() / rate.hypot(zone.omega_alpha_tau());
    if margin < 1.0 {
        log::warn!("WKB phase outside the adiabatic regime (margin {margin:.3})");
    }
    let a_tilde = zone.rabi_tau() / d.abs();
    let total = envelope_integral(zone.envelope(), a_tilde, 0.5 * d.abs(), dynamical_kernel, DEFAULT_TOL)?;
    let beta = dynamical_phase_quadrature(zone, DEFAULT_TOL)?;
    let gamma = geometric_phase_quadrature(zone, DEFAULT_TOL)?;
    Ok(WkbPhase {
        total: d.signum() * total.value,
        beta_part: zone.delta_sign() * beta.value,
        gamma_part: gamma.value,
        est_error: total.error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbativePhase {
    /// `(a²/4) (Δτ)²/(Δτ + ω_ατ) ∫f²dθ`.
    pub total: f64,
    /// `(a²/4) Δτ ∫f²dθ`.
    pub dynamical: f64,
    /// `−(a²/4) ω_ατ ∫f²dθ`.
    pub geometric: f64,
}

/// Second-order perturbation theory in the adiabatic limit.
pub fn perturbative_phase(zone: &ZoneParameters) -> Result<PerturbativePhase> {
    let d = zone.delta_tau();
    let dt = zone.effective_delta_tau();
    if dt == 0.0 {
        return Err(Error::domain("delta_tau", "effective detuning Δ + ω_α vanishes"));
    }
    if zone.a() >= crate::phases::WEAK_FIELD_LIMIT {
        log::warn!("perturbative phase requested at a = {}", zone.a());
    }
    let q = 0.25 * zone.a() * zone.a() * zone.envelope().square_integral()?;
    Ok(PerturbativePhase {
        total: q * d * d / dt,
        dynamical: q * d,
        geometric: -q * zone.omega_alpha_tau(),
    })
}

/// The full second-order term of the ground-state phase, without the
/// adiabatic approximation:
///
/// ```text
/// φ⁽²⁾ = (Ωτ)²/4 ∫ f(θ) Im K(θ) dθ,   K' = iΔ̃τ K + f,   K(−T) = 0.
/// ```
///
/// It differs from the ODE phase by `O(a⁴)` only.
pub fn second_order_phase(zone: &ZoneParameters, rtol: f64) -> Result<f64> {
    let half = zone.envelope().half_window();
    let env = zone.envelope().clone();
    let d = zone.effective_delta_tau();
    let rhs = move |t: f64, y: &[f64; 3]| {
        let f = env.value(t);
        [-d * y[1] + f, d * y[0], f * y[1]]
    };
    let opts = OdeOptions {
        rtol,
        atol: rtol * 1e-3,
        ..OdeOptions::default()
    };
    let (ys, _) = ode::solve(rhs, -half, [0.0; 3], &[half], &opts)?;
    Ok(0.25 * zone.rabi_tau().powi(2) * ys[0][2])
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoZoneOutcome {
    /// Total ground-state phase of the sequence.
    pub result: PhaseResult,
    /// Phase acquired in each zone.
    pub zone_phases: [f64; 2],
    /// `γ + γ′` by quadrature.
    pub geometric: f64,
    /// `total − (γ + γ′)`: what is left of the dynamical phases.
    pub residual: f64,
    pub trajectories: [TwoLevelTrajectory; 2],
}

/// Runs two mirrored zones back to back in the tilde frame.
///
/// Between zones the atom evolves freely, which after removal of the
/// free-evolution phases leaves the amplitudes unchanged; the state is
/// carried over in that de-rotated form.
pub fn simulate_two_zone(
    zone_blue: &ZoneParameters,
    zone_red: &ZoneParameters,
    gap: f64,
    opts: &SolveOptions,
) -> Result<TwoZoneOutcome> {
    check_mirrored(zone_blue, zone_red)?;
    if !(gap >= 0.0 && gap.is_finite()) {
        return Err(Error::domain("gap", "must be non-negative"));
    }
    if gap < 5.0 {
        log::warn!("zone separation {gap} is below five envelope times");
    }
    let frame = Frame::Tilde;
    let first = solve_two_level(zone_blue, frame, opts)?;
    let phase1 = extract_total_phase(&first)?;

    let end = first.states.last().expect("trajectory is non-empty");
    let half1 = zone_blue.envelope().half_window();
    let d1 = zone_blue.effective_delta_tau();
    // De-rotated amplitudes at the end of zone one.
    let c_e = end.amp_e * Complex64::cis(0.5 * d1 * half1);
    let c_g = end.amp_g * Complex64::cis(-0.5 * d1 * half1);
    let half2 = zone_red.envelope().half_window();
    let d2 = zone_red.effective_delta_tau();
    let start2 = TwoLevelState {
        amp_e: c_e * Complex64::cis(0.5 * d2 * half2),
        amp_g: c_g * Complex64::cis(-0.5 * d2 * half2),
        frame,
        t: -half2,
    };
    let second = solve_two_level_from(zone_red, frame, &start2, opts)?;
    let phase2 = extract_total_phase(&second)?;

    let total = phase1 + phase2;
    let g1 = geometric_phase_quadrature(zone_blue, DEFAULT_TOL)?.value;
    let g2 = geometric_phase_quadrature(zone_red, DEFAULT_TOL)?.value;
    let geometric = g1 + g2;
    let est = opts.rtol * (phase1.abs() + phase2.abs()).max(1.0);
    let mut result = PhaseResult::total_only(total, 1.0, Method::Ode, est);
    // One zone of the pair is red detuned.
    result.phi_e = -total - PI;
    Ok(TwoZoneOutcome {
        result,
        zone_phases: [phase1, phase2],
        geometric,
        residual: total - geometric,
        trajectories: [first, second],
    })
}
