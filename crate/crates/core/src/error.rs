use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (partial value {partial:e}, error estimate {estimate:e})"
    )]
    QuadratureNoConvergence {
        partial: f64,
        estimate: f64,
        subdivisions: usize,
    },

    #[error("step size underflow at t = {t} (h = {h:e}, {steps} accepted, {rejected} rejected)")]
    StepSizeUnderflow {
        t: f64,
        h: f64,
        steps: usize,
        rejected: usize,
    },

    #[error("step budget of {max_steps} exhausted at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },

    #[error("dressed states are degenerate at the origin of parameter space")]
    LevelCrossing,

    #[error("ground-state amplitude dropped to {amplitude:.3e} at t = {t}; phase is ill-defined")]
    NearZeroAmplitude { t: f64, amplitude: f64 },

    #[error("phase jumped by {jump:.3} rad between samples at t = {t}; sampling too coarse")]
    PhaseJump { t: f64, jump: f64 },

    #[error("zones are not a mirrored pair: {0}")]
    ZoneMismatch(String),

    #[error("grid too coarse: spectral power {fraction:.3e} near the Nyquist limit")]
    Aliasing { fraction: f64 },

    #[error("packet reached the grid edge (edge/peak amplitude {ratio:.3e})")]
    Wraparound { ratio: f64 },

    #[error("packet norm is {norm:e}; expected a normalized packet")]
    Unnormalized { norm: f64 },

    #[error("numerical overflow evaluating {0}")]
    Overflow(&'static str),
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical method, as opposed to rejected input.
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::Domain { .. } | Error::ZoneMismatch(_) | Error::Unnormalized { .. }
        )
    }
}
