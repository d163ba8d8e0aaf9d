//! Longitudinal field envelopes `f(θ)`, θ = t/τ.
//!
//! Every envelope is even and peak-normalized (`max f = 1`); the field strength
//! lives in the Rabi frequency. Envelopes with infinite support are cut at
//! `half_window` (default 40, where `f²` has fallen below `e^-80`).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breaks, QuadOptions};

pub const DEFAULT_HALF_WINDOW: f64 = 40.0;

/// Level below which the envelope tail is ignored when estimating the
/// logarithmic decay rate used by the adiabaticity margin.
pub const TAIL_LEVEL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnvelopeKind {
    /// `1/cosh θ`
    Eckart,
    /// `1` on `|θ| <= T`, `0` outside.
    Mesa,
    /// `exp(-θ²)`
    Gaussian,
    /// Monotone cubic interpolation through user samples on `θ >= 0`.
    Tabulated,
}

impl EnvelopeKind {
    pub fn name(self) -> &'static str {
        match self {
            EnvelopeKind::Eckart => "eckart",
            EnvelopeKind::Mesa => "mesa",
            EnvelopeKind::Gaussian => "gaussian",
            EnvelopeKind::Tabulated => "tabulated",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Eckart,
    Mesa,
    Gaussian,
    Tabulated(Arc<MonotoneCubic>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    shape: Shape,
    half_window: f64,
}

impl Envelope {
    pub fn eckart() -> Self {
        Self {
            shape: Shape::Eckart,
            half_window: DEFAULT_HALF_WINDOW,
        }
    }

    pub fn gaussian() -> Self {
        Self {
            shape: Shape::Gaussian,
            half_window: DEFAULT_HALF_WINDOW,
        }
    }

    /// Flat-top pulse of half-width `half_width` (in units of τ).
    pub fn mesa(half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::domain("half_width", "mesa half-width must be positive and finite"));
        }
        Ok(Self {
            shape: Shape::Mesa,
            half_window: half_width,
        })
    }

    /// Envelope through samples `(theta[i], values[i])` on the half line,
    /// mirrored to negative θ. Values are rescaled so the peak is 1; the
    /// envelope is zero beyond the last sample.
    pub fn tabulated(theta: &[f64], values: &[f64]) -> Result<Self> {
        let spline = MonotoneCubic::new(theta, values)?;
        let half_window = *theta.last().expect("validated non-empty");
        Ok(Self {
            shape: Shape::Tabulated(Arc::new(spline)),
            half_window,
        })
    }

    /// Overrides the truncation window of an infinite-support envelope.
    pub fn with_half_window(mut self, half_window: f64) -> Result<Self> {
        if !(half_window > 0.0 && half_window.is_finite()) {
            return Err(Error::domain("half_window", "must be positive and finite"));
        }
        match self.shape {
            Shape::Eckart | Shape::Gaussian => {
                self.half_window = half_window;
                Ok(self)
            }
            _ => Err(Error::domain(
                "half_window",
                "only Eckart and Gaussian envelopes have an adjustable cutoff",
            )),
        }
    }

    pub fn kind(&self) -> EnvelopeKind {
        match self.shape {
            Shape::Eckart => EnvelopeKind::Eckart,
            Shape::Mesa => EnvelopeKind::Mesa,
            Shape::Gaussian => EnvelopeKind::Gaussian,
            Shape::Tabulated(_) => EnvelopeKind::Tabulated,
        }
    }

    pub fn half_window(&self) -> f64 {
        self.half_window
    }

    pub fn value(&self, theta: f64) -> f64 {
        let x = theta.abs();
        if x > self.half_window {
            return 0.0;
        }
        match &self.shape {
            Shape::Eckart => 1.0 / x.cosh(),
            Shape::Mesa => 1.0,
            Shape::Gaussian => (-x * x).exp(),
            Shape::Tabulated(s) => s.eval(x),
        }
    }

    /// `df/dθ` inside the window.
    pub fn derivative(&self, theta: f64) -> f64 {
        let x = theta.abs();
        if x > self.half_window {
            return 0.0;
        }
        let d = match &self.shape {
            Shape::Eckart => -x.tanh() / x.cosh(),
            Shape::Mesa => 0.0,
            Shape::Gaussian => -2.0 * x * (-x * x).exp(),
            Shape::Tabulated(s) => s.derivative(x),
        };
        d * theta.signum()
    }

    /// Smooth envelopes satisfy the adiabatic switching premise; the mesa does not.
    pub fn is_smooth(&self) -> bool {
        !matches!(self.shape, Shape::Mesa)
    }

    /// Largest `|d ln f / dθ|` over the region where `f >= TAIL_LEVEL`.
    /// Exactly 1 for the Eckart envelope, infinite for the mesa.
    pub fn tail_decay(&self) -> f64 {
        match &self.shape {
            Shape::Eckart => 1.0,
            Shape::Mesa => f64::INFINITY,
            Shape::Gaussian => {
                let edge = (1.0 / TAIL_LEVEL).ln().sqrt().min(self.half_window);
                2.0 * edge
            }
            Shape::Tabulated(s) => {
                let n = 4096;
                let top = self.half_window;
                (0..=n)
                    .map(|i| top * i as f64 / n as f64)
                    .filter(|&x| s.eval(x) >= TAIL_LEVEL)
                    .map(|x| (s.derivative(x) / s.eval(x)).abs())
                    .fold(0.0, f64::max)
            }
        }
    }

    /// Panel boundaries on `[0, half_window]` for quadrature of integrands
    /// built from this envelope.
    pub fn breakpoints(&self) -> Vec<f64> {
        let t = self.half_window;
        match &self.shape {
            Shape::Eckart | Shape::Gaussian => {
                let mut b = vec![0.0];
                b.extend(
                    [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
                        .into_iter()
                        .filter(|&x| x < t),
                );
                b.push(t);
                b
            }
            Shape::Mesa => vec![0.0, t],
            Shape::Tabulated(s) => s.knots.clone(),
        }
    }

    /// `∫ f² dθ` over the full window `[-T, T]`.
    pub fn square_integral(&self) -> Result<f64> {
        let t = self.half_window;
        match &self.shape {
            Shape::Eckart => Ok(2.0 * t.tanh()),
            Shape::Mesa => Ok(2.0 * t),
            _ => {
                let r = integrate_with_breaks(
                    |x| self.value(x).powi(2),
                    &self.breakpoints(),
                    QuadOptions::new(1e-14, 1e-13),
                )?;
                Ok(2.0 * r.value)
            }
        }
    }
}

/// Fritsch–Carlson monotone cubic Hermite interpolant on `[0, x_max]` with a
/// zero slope at the origin (so the even extension is C¹).
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    knots: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::domain("tabulated", "need at least two (θ, f) pairs of equal length"));
        }
        if x[0] != 0.0 {
            return Err(Error::domain("tabulated", "first sample must be at θ = 0"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("tabulated", "θ samples must be finite and strictly increasing"));
        }
        if y.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::domain("tabulated", "envelope samples must be finite and non-negative"));
        }
        let peak = y.iter().cloned().fold(0.0, f64::max);
        if peak <= 0.0 {
            return Err(Error::domain("tabulated", "envelope is identically zero"));
        }
        let values: Vec<f64> = y.iter().map(|v| v / peak).collect();

        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (values[i + 1] - values[i]) / h[i]).collect();
        let mut slopes = vec![0.0; n];
        for i in 1..n - 1 {
            let (d0, d1) = (delta[i - 1], delta[i]);
            if d0 * d1 > 0.0 {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                slopes[i] = (w1 + w2) / (w1 / d0 + w2 / d1);
            }
        }
        slopes[n - 1] = if n == 2 {
            delta[0]
        } else {
            let (h0, h1) = (h[n - 2], h[n - 3]);
            let (d0, d1) = (delta[n - 2], delta[n - 3]);
            let mut d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if d * d0 <= 0.0 {
                d = 0.0;
            } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
                d = 3.0 * d0;
            }
            d
        };
        Ok(Self {
            knots: x.to_vec(),
            values,
            slopes,
        })
    }

    fn locate(&self, x: f64) -> Option<usize> {
        let last = *self.knots.last()?;
        if x < 0.0 || x > last {
            return None;
        }
        let i = self.knots.partition_point(|&k| k <= x);
        Some(i.saturating_sub(1).min(self.knots.len() - 2))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let Some(i) = self.locate(x) else { return 0.0 };
        let h = self.knots[i + 1] - self.knots[i];
        let s = (x - self.knots[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let v = (2.0 * s3 - 3.0 * s2 + 1.0) * self.values[i]
            + (s3 - 2.0 * s2 + s) * h * self.slopes[i]
            + (-2.0 * s3 + 3.0 * s2) * self.values[i + 1]
            + (s3 - s2) * h * self.slopes[i + 1];
        v.clamp(0.0, 1.0)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let Some(i) = self.locate(x) else { return 0.0 };
        let h = self.knots[i + 1] - self.knots[i];
        let s = (x - self.knots[i]) / h;
        let s2 = s * s;
        ((6.0 * s2 - 6.0 * s) * self.values[i]
            + (3.0 * s2 - 4.0 * s + 1.0) * h * self.slopes[i]
            + (-6.0 * s2 + 6.0 * s) * self.values[i + 1]
            + (3.0 * s2 - 2.0 * s) * h * self.slopes[i + 1])
            / h
    }
}
