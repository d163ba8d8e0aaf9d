//! Physical set-up of one interaction zone and its dimensionless form.
//!
//! Everything downstream works in units of the envelope time τ: detuning,
//! Doppler and Rabi frequencies enter only as the products `Δτ`, `ω_ατ`,
//! `|Ω(x)|τ`, and the field strength as `a = |Ω(x)|/|Δ|`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::envelope::Envelope;
use crate::error::{Error, Result};

/// Default margin required for a "much greater than" condition.
pub const DEFAULT_VALIDITY_THRESHOLD: f64 = 10.0;

/// Dimensional description of a standing-wave interaction zone (SI units).
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalSetup {
    /// Optical wavelength λ (m).
    pub wavelength: f64,
    /// Longitudinal atomic velocity v (m/s).
    pub velocity: f64,
    /// Half-angle α between each running wave and the standing-wave axis (rad).
    pub half_angle_alpha: f64,
    /// Signed detuning Δ = ω_e − ω_g − ω (1/s).
    pub detuning: f64,
    /// Peak Rabi frequency Ω₀ (1/s).
    pub rabi_peak: f64,
    /// Envelope time τ (s).
    pub envelope_time: f64,
    /// Spontaneous decay rate Γ (1/s), if known.
    pub spontaneous_rate: Option<f64>,
    /// Recoil frequency ħk²/2M (1/s), if known.
    pub recoil_frequency: Option<f64>,
}

impl PhysicalSetup {
    /// The argon 1s₅ → 2p₃ parameters (λ = 812 nm, Δ = 3·10⁷ s⁻¹, v = 700 m/s,
    /// α = 10⁻³) with τ = 1 µs and Ω₀ = 3·10⁶ s⁻¹.
    pub fn argon_example() -> Self {
        Self {
            wavelength: 812e-9,
            velocity: 700.0,
            half_angle_alpha: 1e-3,
            detuning: 3e7,
            rabi_peak: 3e6,
            envelope_time: 1e-6,
            spontaneous_rate: None,
            recoil_frequency: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.wavelength) {
            return Err(Error::domain("wavelength", "must be positive"));
        }
        if !positive(self.envelope_time) {
            return Err(Error::domain("envelope_time", "must be positive"));
        }
        if !(self.rabi_peak >= 0.0 && self.rabi_peak.is_finite()) {
            return Err(Error::domain("rabi_peak", "must be non-negative"));
        }
        if !(self.velocity >= 0.0 && self.velocity.is_finite()) {
            return Err(Error::domain("velocity", "must be non-negative"));
        }
        if !(self.half_angle_alpha > 0.0 && self.half_angle_alpha < FRAC_PI_2) {
            return Err(Error::domain("half_angle_alpha", "must lie in (0, π/2)"));
        }
        if !self.detuning.is_finite() {
            return Err(Error::domain("detuning", "must be finite"));
        }
        for (name, v) in [
            ("spontaneous_rate", self.spontaneous_rate),
            ("recoil_frequency", self.recoil_frequency),
        ] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::domain(name, "must be non-negative"));
                }
            }
        }
        Ok(())
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn doppler_frequency(&self) -> Result<f64> {
        doppler_frequency(self.wavenumber(), self.velocity, self.half_angle_alpha)
    }

    pub fn rabi_frequency(&self, x: f64) -> f64 {
        rabi_frequency(self.rabi_peak, self.wavenumber(), self.half_angle_alpha, x)
    }
}

/// Doppler frequency `ω_α = k v sin α`.
pub fn doppler_frequency(k: f64, v: f64, alpha: f64) -> Result<f64> {
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::domain("k", "wavenumber must be non-negative"));
    }
    if !(v >= 0.0 && v.is_finite()) {
        return Err(Error::domain("v", "speed must be non-negative"));
    }
    if !(0.0..=FRAC_PI_2).contains(&alpha) {
        return Err(Error::domain("alpha", "angle must lie in [0, π/2]"));
    }
    Ok(k * v * alpha.sin())
}

/// Position-dependent Rabi frequency `Ω(x) = Ω₀ sin(k x cos α)`, sign kept.
pub fn rabi_frequency(rabi_peak: f64, k: f64, alpha: f64, x: f64) -> f64 {
    rabi_peak * (k * x * alpha.cos()).sin()
}

/// One interaction zone in units of τ.
#[derive(Debug, Clone, PartialEq)]
pub struct ZoneParameters {
    delta_tau: f64,
    omega_alpha_tau: f64,
    rabi_tau: f64,
    a: f64,
    envelope: Envelope,
}

impl ZoneParameters {
    /// Zone with dimensionless field strength `a = |Ω|/|Δ|`.
    pub fn new(delta_tau: f64, omega_alpha_tau: f64, a: f64, envelope: Envelope) -> Result<Self> {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::domain("a", "must be non-negative and finite"));
        }
        Self::from_rabi(delta_tau, omega_alpha_tau, a * delta_tau.abs(), envelope)
    }

    /// Zone from the Rabi product `|Ω(x)|τ`.
    pub fn from_rabi(delta_tau: f64, omega_alpha_tau: f64, rabi_tau: f64, envelope: Envelope) -> Result<Self> {
        if !(delta_tau != 0.0 && delta_tau.is_finite()) {
            return Err(Error::domain("delta_tau", "detuning must be nonzero and finite"));
        }
        if !(omega_alpha_tau >= 0.0 && omega_alpha_tau.is_finite()) {
            return Err(Error::domain("omega_alpha_tau", "must be non-negative and finite"));
        }
        if !rabi_tau.is_finite() {
            return Err(Error::domain("rabi_tau", "must be finite"));
        }
        let rabi_tau = rabi_tau.abs();
        Ok(Self {
            delta_tau,
            omega_alpha_tau,
            rabi_tau,
            a: rabi_tau / delta_tau.abs(),
            envelope,
        })
    }

    pub fn delta_tau(&self) -> f64 {
        self.delta_tau
    }

    pub fn delta_abs(&self) -> f64 {
        self.delta_tau.abs()
    }

    /// `+1` for blue (Δ > 0), `-1` for red detuning.
    pub fn delta_sign(&self) -> f64 {
        self.delta_tau.signum()
    }

    pub fn omega_alpha_tau(&self) -> f64 {
        self.omega_alpha_tau
    }

    pub fn rabi_tau(&self) -> f64 {
        self.rabi_tau
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn envelope(&self) -> &Envelope {
        &self.envelope
    }

    /// Effective detuning `Δ̃τ = (Δ + ω_α)τ`.
    pub fn effective_delta_tau(&self) -> f64 {
        self.delta_tau + self.omega_alpha_tau
    }

    /// Same zone with a new detuning and the Rabi product held fixed, so `a`
    /// is recomputed.
    pub fn with_delta_tau(&self, delta_tau: f64) -> Result<Self> {
        Self::from_rabi(delta_tau, self.omega_alpha_tau, self.rabi_tau, self.envelope.clone())
    }

    pub fn with_omega_alpha_tau(&self, omega_alpha_tau: f64) -> Result<Self> {
        Self::from_rabi(self.delta_tau, omega_alpha_tau, self.rabi_tau, self.envelope.clone())
    }

    pub fn with_envelope(&self, envelope: Envelope) -> Self {
        Self {
            envelope,
            ..self.clone()
        }
    }

    /// The partner zone with opposite detuning.
    pub fn mirrored(&self) -> Self {
        Self {
            delta_tau: -self.delta_tau,
            ..self.clone()
        }
    }

    /// Back to SI: `(Δ, ω_α, |Ω(x)|)` for envelope time `tau`.
    pub fn to_physical(&self, tau: f64) -> (f64, f64, f64) {
        (self.delta_tau / tau, self.omega_alpha_tau / tau, self.rabi_tau / tau)
    }
}

/// Dimensionless zone parameters at transverse position `x`.
pub fn to_dimensionless(setup: &PhysicalSetup, envelope: Envelope, x: f64) -> Result<ZoneParameters> {
    setup.validate()?;
    if setup.detuning == 0.0 {
        return Err(Error::domain("detuning", "the detuning must not vanish"));
    }
    let tau = setup.envelope_time;
    let omega_alpha = setup.doppler_frequency()?;
    ZoneParameters::from_rabi(
        setup.detuning * tau,
        omega_alpha * tau,
        setup.rabi_frequency(x).abs() * tau,
        envelope,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidityReport {
    /// `|Δ|τ / sqrt(r² + (ω_ατ)²)` with `r` the envelope's tail decay rate.
    pub adiabatic_margin: f64,
    /// `1 / (ω_rec τ² Ω₀)`; `None` when ω_rec is unknown.
    pub raman_nath_margin: Option<f64>,
    /// `1 / (Γ τ (Ω₀/Δ)²)`; `None` when Γ is unknown.
    pub spontaneous_margin: Option<f64>,
    pub threshold: f64,
    pub adiabatic_ok: bool,
    pub raman_nath_ok: Option<bool>,
    pub spontaneous_ok: Option<bool>,
    /// Weak-field ratio `|γ/β| = ω_α/|Δ|`.
    pub weak_field_ratio: f64,
}

impl ValidityReport {
    pub fn all_evaluated_pass(&self) -> bool {
        self.adiabatic_ok && self.raman_nath_ok.unwrap_or(true) && self.spontaneous_ok.unwrap_or(true)
    }
}

fn ratio_margin(denominator: f64) -> f64 {
    if denominator == 0.0 {
        f64::INFINITY
    } else {
        1.0 / denominator
    }
}

/// Evaluates the adiabaticity, Raman–Nath and spontaneous-emission margins.
/// The report annotates a run; it never blocks one.
pub fn validity_report(setup: &PhysicalSetup, envelope: &Envelope, threshold: f64) -> Result<ValidityReport> {
    setup.validate()?;
    if !(threshold > 0.0) {
        return Err(Error::domain("threshold", "must be positive"));
    }
    let tau = setup.envelope_time;
    let omega_alpha = setup.doppler_frequency()?;
    let rate = envelope.tail_decay();
    let adiabatic_margin = if rate.is_infinite() {
        0.0
    } else {
        setup.detuning.abs() * tau / rate.hypot(omega_alpha * tau)
    };
    let raman_nath_margin = setup
        .recoil_frequency
        .map(|w| ratio_margin(w * tau * tau * setup.rabi_peak));
    let spontaneous_margin = setup.spontaneous_rate.map(|g| {
        let w = if setup.detuning == 0.0 {
            f64::INFINITY
        } else {
            (setup.rabi_peak / setup.detuning).powi(2)
        };
        ratio_margin(g * tau * w)
    });
    Ok(ValidityReport {
        adiabatic_margin,
        raman_nath_margin,
        spontaneous_margin,
        threshold,
        adiabatic_ok: adiabatic_margin > threshold,
        raman_nath_ok: raman_nath_margin.map(|m| m > threshold),
        spontaneous_ok: spontaneous_margin.map(|m| m > threshold),
        weak_field_ratio: omega_alpha / setup.detuning.abs(),
    })
}
