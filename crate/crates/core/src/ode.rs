//! Dormand–Prince 5(4) integrator with adaptive step size.
//!
//! The state is a fixed-size real array; complex systems pass real and
//! imaginary parts side by side. Output is reported at caller-chosen times,
//! which the stepper hits exactly by shortening the step that would cross
//! them.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

// Fifth-order weights (also the last stage row, FSAL).
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// Fifth minus fourth order weights.
const E1: f64 = B1 - 5179.0 / 57600.0;
const E3: f64 = B3 - 7571.0 / 16695.0;
const E4: f64 = B4 - 393.0 / 640.0;
const E5: f64 = B5 - -92097.0 / 339200.0;
const E6: f64 = B6 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub max_step: f64,
    pub initial_step: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 5_000_000,
            max_step: f64::INFINITY,
            initial_step: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub steps: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        if *c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

fn error_norm<const N: usize>(err: &[f64; N], y0: &[f64; N], y1: &[f64; N], opts: &OdeOptions) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let sc = opts.atol + opts.rtol * y0[i].abs().max(y1[i].abs());
        acc += (err[i] / sc).powi(2);
    }
    (acc / N as f64).sqrt()
}

fn initial_step<const N: usize, F>(f: &mut F, t0: f64, y0: &[f64; N], f0: &[f64; N], opts: &OdeOptions) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    // Hairer–Nørsett–Wanner starting-step heuristic.
    let scale = |i: usize, y: &[f64; N]| opts.atol + opts.rtol * y[i].abs();
    let rms = |v: &[f64; N], y: &[f64; N]| ((0..N).map(|i| (v[i] / scale(i, y)).powi(2)).sum::<f64>() / N as f64).sqrt();
    let d0 = rms(y0, y0);
    let d1 = rms(f0, y0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = axpy(y0, h0, &[(1.0, f0)]);
    let f1 = f(t0 + h0, &y1);
    let diff: [f64; N] = std::array::from_fn(|i| f1[i] - f0[i]);
    let d2 = rms(&diff, y0) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(opts.max_step)
}

/// Integrates `y' = f(t, y)` from `(t0, y0)` and returns the state at each
/// entry of `times` (non-decreasing, all `>= t0`).
pub fn solve<const N: usize, F>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    times: &[f64],
    opts: &OdeOptions,
) -> Result<(Vec<[f64; N]>, OdeStats)>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(Error::domain("rtol/atol", "tolerances must be positive"));
    }
    if !(opts.max_step > 0.0) {
        return Err(Error::domain("max_step", "must be positive"));
    }
    if times.iter().any(|t| !t.is_finite() || *t < t0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("times", "must be finite, non-decreasing and not before t0"));
    }

    let mut stats = OdeStats::default();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    stats.evaluations += 1;
    let mut h = match opts.initial_step {
        Some(h) if h > 0.0 => h.min(opts.max_step),
        _ => {
            stats.evaluations += 1;
            initial_step(&mut f, t0, &y0, &k1, opts)
        }
    };
    let mut out = Vec::with_capacity(times.len());

    for &target in times {
        while t < target {
            if stats.steps + stats.rejected >= opts.max_steps {
                return Err(Error::TooManySteps { t, max_steps: opts.max_steps });
            }
            let remaining = target - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            if step <= 16.0 * f64::EPSILON * t.abs().max(1.0) && !last {
                return Err(Error::StepSizeUnderflow {
                    t,
                    h: step,
                    steps: stats.steps,
                    rejected: stats.rejected,
                });
            }

            let k2 = f(t + C2 * step, &axpy(&y, step, &[(A21, &k1)]));
            let k3 = f(t + C3 * step, &axpy(&y, step, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(t + C4 * step, &axpy(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(
                t + C5 * step,
                &axpy(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                t + step,
                &axpy(&y, step, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let t_new = if last { target } else { t + step };
            let y_new = axpy(&y, step, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let k7 = f(t_new, &y_new);
            stats.evaluations += 6;

            let err_vec: [f64; N] = std::array::from_fn(|i| {
                step * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
            });
            let err = error_norm(&err_vec, &y, &y_new, opts);

            if err <= 1.0 {
                stats.steps += 1;
                t = t_new;
                y = y_new;
                k1 = k7;
                let fac = if err == 0.0 {
                    FAC_MAX
                } else {
                    (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
                };
                // A step shortened to land on a sample time says nothing
                // about the next one; keep the longer proposal.
                let proposal = step * fac;
                h = if last { h.max(proposal) } else { proposal }.min(opts.max_step);
            } else {
                stats.rejected += 1;
                let fac = if err.is_finite() {
                    (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, 1.0)
                } else {
                    FAC_MIN
                };
                h = step * fac;
                if h <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
                    return Err(Error::StepSizeUnderflow {
                        t,
                        h,
                        steps: stats.steps,
                        rejected: stats.rejected,
                    });
                }
            }
        }
        out.push(y);
    }
    Ok((out, stats))
}
