//! The circuit traced in parameter space and the geometric phase as a flux.
//!
//! With `X + iY = V` and `Z = ħΔ`, all in units of `ħ|Δ|`, one zone draws
//! the curve `ρ = a f(t)`, `φ = ω_α t` in the plane `Z = sign Δ`. The Eckart
//! envelope winds infinitely often around the `Z` axis; the flux through
//! the `m`-th winding has a closed form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ZoneParameters;
use crate::par::{map_range, pairwise_sum, Execution};
use crate::phases::{geometric_kernel, Estimate};
use crate::quadrature::{integrate_with_breaks, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitSample {
    pub t: f64,
    pub phi: f64,
    pub rho: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// `n_samples` points of the circuit, uniform in `t` over the envelope window.
pub fn circuit_path(zone: &ZoneParameters, n_samples: usize) -> Result<Vec<CircuitSample>> {
    if n_samples < 2 {
        return Err(Error::domain("n_samples", "need at least two samples"));
    }
    let env = zone.envelope();
    let half = env.half_window();
    let step = 2.0 * half / (n_samples - 1) as f64;
    let z = zone.delta_sign();
    Ok((0..n_samples)
        .map(|i| {
            let t = if i == n_samples - 1 { half } else { -half + step * i as f64 };
            let phi = zone.omega_alpha_tau() * t;
            let rho = zone.a() * env.value(t);
            CircuitSample {
                t,
                phi,
                rho,
                x: rho * phi.cos(),
                y: -rho * phi.sin(),
                z,
            }
        })
        .collect())
}

/// Eigen-decomposition of `H = ½ [[Z, X − iY], [X + iY, −Z]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedDecomposition {
    pub eps_plus: f64,
    pub eps_minus: f64,
    /// Components `(excited, ground)`.
    pub state_plus: [Complex64; 2],
    pub state_minus: [Complex64; 2],
}

pub fn hamiltonian(x: f64, y: f64, z: f64) -> [[Complex64; 2]; 2] {
    [
        [Complex64::new(0.5 * z, 0.0), Complex64::new(0.5 * x, -0.5 * y)],
        [Complex64::new(0.5 * x, 0.5 * y), Complex64::new(-0.5 * z, 0.0)],
    ]
}

/// Dressed states in the phase convention
/// `Ψ± ∝ (Z ± R, X + iY)`, written in half-angle form so that both signs of
/// `Z` are free of cancellation. For `Z > 0` at `X = Y = 0` this gives
/// `Ψ+ = |e⟩, Ψ− = |g⟩`; for `Z < 0` it gives `Ψ+ = |g⟩, Ψ− = −|e⟩`.
pub fn dressed_states(x: f64, y: f64, z: f64) -> Result<DressedDecomposition> {
    if ![x, y, z].iter().all(|v| v.is_finite()) {
        return Err(Error::domain("X, Y, Z", "must be finite"));
    }
    let rho = x.hypot(y);
    let r = rho.hypot(z);
    if r == 0.0 {
        return Err(Error::LevelCrossing);
    }
    let (r_plus_z, r_minus_z) = if z >= 0.0 {
        let p = r + z;
        (p, rho * rho / p)
    } else {
        let m = r - z;
        (rho * rho / m, m)
    };
    let c_plus = (r_plus_z / (2.0 * r)).sqrt();
    let c_minus = (r_minus_z / (2.0 * r)).sqrt();
    let w = if rho == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(x / rho, y / rho)
    };
    Ok(DressedDecomposition {
        eps_plus: 0.5 * r,
        eps_minus: -0.5 * r,
        state_plus: [Complex64::new(c_plus, 0.0), w * c_minus],
        state_minus: [Complex64::new(-c_minus, 0.0), w * c_plus],
    })
}

/// `ln F(θ) − θ` with `F(θ) = sinh θ + √(cosh²θ + a²)`, evaluated as
/// `ln(1 + a² e / (S + (1+e)/2))`, `e = e^{−2θ}`, `S = √((1+e)²/4 + a² e)`.
/// Finite for every `θ ≥ 0` and free of cancellation.
fn log_f_minus_theta(theta: f64, a2: f64) -> f64 {
    let e = (-2.0 * theta).exp();
    let h = 0.5 * (1.0 + e);
    let s = (h * h + a2 * e).sqrt();
    (a2 * e / (s + h)).ln_1p()
}

fn check_winding(a: f64, omega_alpha_tau: f64) -> Result<()> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::domain("a", "must be non-negative and finite"));
    }
    if !(omega_alpha_tau > 0.0 && omega_alpha_tau.is_finite()) {
        return Err(Error::domain("omega_alpha_tau", "must be positive"));
    }
    Ok(())
}

fn theta_m(m: usize, omega_alpha_tau: f64) -> f64 {
    m as f64 * std::f64::consts::PI / omega_alpha_tau
}

/// Flux `γ^(m)` through the `m`-th winding of the Eckart circuit (`m ≥ 1`),
/// counting both halves `t < 0` and `t > 0`.
pub fn winding_phase(m: usize, a: f64, omega_alpha_tau: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("m", "winding index starts at 1"));
    }
    check_winding(a, omega_alpha_tau)?;
    let a2 = a * a;
    let g_hi = log_f_minus_theta(theta_m(m, omega_alpha_tau), a2);
    let g_lo = log_f_minus_theta(theta_m(m - 1, omega_alpha_tau), a2);
    Ok(omega_alpha_tau * (g_hi - g_lo))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingSum {
    pub terms: usize,
    /// `Σ_{m=1}^{N} γ^(m)`, summed pairwise.
    pub direct: f64,
    /// The same sum telescoped: `ω_ατ (ln F_N − ln F_0 − Nπ/ω_ατ)`.
    pub telescoped: f64,
    /// `N → ∞` limit, `−(ω_ατ/2) ln(1+a²)`.
    pub limit: f64,
}

/// Individual winding fluxes `γ^(1..=n)`.
pub fn winding_terms(n: usize, a: f64, omega_alpha_tau: f64, exec: Execution) -> Result<Vec<f64>> {
    check_winding(a, omega_alpha_tau)?;
    let a2 = a * a;
    Ok(map_range(n, exec, |i| {
        let hi = log_f_minus_theta(theta_m(i + 1, omega_alpha_tau), a2);
        let lo = log_f_minus_theta(theta_m(i, omega_alpha_tau), a2);
        omega_alpha_tau * (hi - lo)
    }))
}

/// Telescoped partial sum `Σ_{m=1}^{n} γ^(m) = ω_ατ (ln F_n − ln F_0 − nπ/ω_ατ)`
/// in constant time.
pub fn telescoped_partial_sum(n: usize, a: f64, omega_alpha_tau: f64) -> Result<f64> {
    check_winding(a, omega_alpha_tau)?;
    let a2 = a * a;
    let gn = log_f_minus_theta(theta_m(n, omega_alpha_tau), a2);
    Ok(omega_alpha_tau * (gn - log_f_minus_theta(0.0, a2)))
}

pub fn winding_sum(n: usize, a: f64, omega_alpha_tau: f64, exec: Execution) -> Result<WindingSum> {
    if n == 0 {
        return Err(Error::domain("N", "need at least one winding"));
    }
    let terms = winding_terms(n, a, omega_alpha_tau, exec)?;
    Ok(WindingSum {
        terms: n,
        direct: pairwise_sum(&terms),
        telescoped: telescoped_partial_sum(n, a, omega_alpha_tau)?,
        limit: -omega_alpha_tau * log_f_minus_theta(0.0, a * a),
    })
}

/// Geometric phase as the flux of `R/(2R³)` through the surface spanned by
/// the circuit: the radial integral is done in closed form,
/// `∫₀^ρ ρ'dρ'/(1+ρ'²)^{3/2} = 1 − 1/√(1+ρ²)`, the angular one adaptively.
pub fn surface_flux_quadrature(zone: &ZoneParameters, tol: f64) -> Result<Estimate> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain("tol", "tolerance must be positive"));
    }
    let omega = zone.omega_alpha_tau();
    let a2 = zone.a() * zone.a();
    if omega == 0.0 || a2 == 0.0 {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let env = zone.envelope();
    // Angular panels mirror the envelope's own breakpoints; by evenness
    // ρ(−φ) = ρ(φ) the integral is twice the half-circuit.
    let breaks: Vec<f64> = env.breakpoints().into_iter().map(|t| t * omega).collect();
    let r = integrate_with_breaks(
        |phi| {
            let f = env.value(phi / omega);
            geometric_kernel(a2 * f * f)
        },
        &breaks,
        QuadOptions::new(tol, tol),
    )?;
    Ok(Estimate {
        value: r.value,
        error: r.error,
    })
}
