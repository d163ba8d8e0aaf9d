//! Run configuration: JSON file, defaults, and command-line overrides.

use std::fmt;
use std::path::Path;

use berryoptics::{Envelope, PhysicalSetup, ZoneParameters};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
/// Upper bound on the number of sweep grid points.
pub const SWEEP_BUDGET: usize = 1_000_000;

/// Rejected input; maps to exit status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn invalid(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Phases,
    Dynamics,
    Windings,
    Packet,
    Sweep,
    Validate,
    Circuit,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Phases => "phases",
            CommandKind::Dynamics => "dynamics",
            CommandKind::Windings => "windings",
            CommandKind::Packet => "packet",
            CommandKind::Sweep => "sweep",
            CommandKind::Validate => "validate",
            CommandKind::Circuit => "circuit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeName {
    Eckart,
    Gaussian,
    Mesa,
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FrameName {
    Lab,
    Tilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PictureName {
    Interaction,
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ProfileName {
    Quadratic,
    Full,
}

/// Phase routes selectable by `phases` and `sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum MethodName {
    Quadrature,
    #[serde(alias = "closed")]
    #[value(alias = "closed", alias = "closed-form")]
    ClosedForm,
    #[value(alias = "weak-field")]
    WeakField,
    #[value(alias = "winding-sum")]
    WindingSum,
    #[value(alias = "surface-flux")]
    SurfaceFlux,
    Ode,
    Wkb,
    Perturbative,
}

impl MethodName {
    pub fn name(self) -> &'static str {
        match self {
            MethodName::Quadrature => "quadrature",
            MethodName::ClosedForm => "closed_form",
            MethodName::WeakField => "weak_field",
            MethodName::WindingSum => "winding_sum",
            MethodName::SurfaceFlux => "surface_flux",
            MethodName::Ode => "ode",
            MethodName::Wkb => "wkb",
            MethodName::Perturbative => "perturbative",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tabulated {
    pub theta: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZoneConfig {
    pub envelope: EnvelopeName,
    /// Plateau half-width of the mesa envelope, in τ.
    pub mesa_half_width: f64,
    /// Integration window `[−T, T]`, in τ; `None` keeps the envelope default.
    pub half_window: Option<f64>,
    pub tabulated: Option<Tabulated>,
    pub a: f64,
    pub omega_alpha_tau: f64,
    pub delta_tau: f64,
    /// When set, the zone is derived from `setup` at this transverse
    /// position (m) instead of from `a`, `omega_alpha_tau`, `delta_tau`.
    pub position: Option<f64>,
}

impl Default for ZoneConfig {
    fn default() -> Self {
        Self {
            envelope: EnvelopeName::Eckart,
            mesa_half_width: 1.0,
            half_window: None,
            tabulated: None,
            a: 0.5,
            omega_alpha_tau: 1.0,
            delta_tau: 40.0,
            position: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SetupConfig {
    pub wavelength: f64,
    pub velocity: f64,
    pub half_angle_alpha: f64,
    pub detuning: f64,
    pub rabi_peak: f64,
    pub envelope_time: f64,
    pub spontaneous_rate: Option<f64>,
    pub recoil_frequency: Option<f64>,
}

impl Default for SetupConfig {
    fn default() -> Self {
        let s = PhysicalSetup::argon_example();
        Self {
            wavelength: s.wavelength,
            velocity: s.velocity,
            half_angle_alpha: s.half_angle_alpha,
            detuning: s.detuning,
            rabi_peak: s.rabi_peak,
            envelope_time: s.envelope_time,
            spontaneous_rate: s.spontaneous_rate,
            recoil_frequency: s.recoil_frequency,
        }
    }
}

impl SetupConfig {
    pub fn to_setup(&self) -> PhysicalSetup {
        PhysicalSetup {
            wavelength: self.wavelength,
            velocity: self.velocity,
            half_angle_alpha: self.half_angle_alpha,
            detuning: self.detuning,
            rabi_peak: self.rabi_peak,
            envelope_time: self.envelope_time,
            spontaneous_rate: self.spontaneous_rate,
            recoil_frequency: self.recoil_frequency,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    /// Absolute tolerance of the phase quadratures.
    pub tol: f64,
    pub rtol: f64,
    pub atol: f64,
    /// ODE output samples per zone; `None` chooses automatically.
    pub samples: Option<usize>,
    /// Terms of the winding sum; `None` uses `⌈10 ω_ατ⌉ + 20`.
    pub winding_terms: Option<usize>,
    /// Packet grid; `None` sizes it from `b` and `t_max`.
    pub grid_points: Option<usize>,
    pub grid_half_width: Option<f64>,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            rtol: 1e-10,
            atol: 1e-12,
            samples: None,
            winding_terms: None,
            grid_points: None,
            grid_half_width: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhasesConfig {
    /// Empty selects closed forms and quadrature for Eckart, quadrature otherwise.
    pub methods: Vec<MethodName>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsConfig {
    pub frame: FrameName,
    pub picture: PictureName,
    /// Follow the zone with its mirror image (opposite detuning).
    pub two_zone: bool,
    /// Free flight between the zones, in τ.
    pub gap: f64,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            frame: FrameName::Tilde,
            picture: PictureName::Interaction,
            two_zone: false,
            gap: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PacketConfig {
    pub k_dx0: f64,
    pub alpha: f64,
    pub n_zones: u32,
    /// Explicit focusing parameter; `None` derives it from the zone.
    pub b: Option<f64>,
    /// Phase imprinted for the numerical run.
    pub profile: ProfileName,
    /// End of the width curves, in t_s.
    pub t_max: f64,
    /// Number of points on each width curve.
    pub times: usize,
}

impl Default for PacketConfig {
    fn default() -> Self {
        Self {
            k_dx0: 0.05,
            alpha: 0.0,
            n_zones: 2,
            b: None,
            profile: ProfileName::Full,
            t_max: 1.0,
            times: 101,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Each axis defaults to the single zone value when `None`.
    pub a: Option<Vec<f64>>,
    pub omega_alpha_tau: Option<Vec<f64>>,
    pub delta_tau: Option<Vec<f64>>,
    pub k_dx0: Option<Vec<f64>>,
    pub methods: Vec<MethodName>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CircuitConfig {
    pub samples: usize,
}

impl Default for CircuitConfig {
    fn default() -> Self {
        Self { samples: 2001 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub command: Option<CommandKind>,
    #[serde(default)]
    pub zone: ZoneConfig,
    #[serde(default)]
    pub setup: SetupConfig,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub phases: PhasesConfig,
    #[serde(default)]
    pub dynamics: DynamicsConfig,
    #[serde(default)]
    pub packet: PacketConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub circuit: CircuitConfig,
    #[serde(default)]
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: None,
            zone: ZoneConfig::default(),
            setup: SetupConfig::default(),
            numerics: Numerics::default(),
            phases: PhasesConfig::default(),
            dynamics: DynamicsConfig::default(),
            packet: PacketConfig::default(),
            sweep: SweepConfig::default(),
            circuit: CircuitConfig::default(),
            out: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        if text.trim().is_empty() {
            return Err(invalid("config is empty"));
        }
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(invalid(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        let n = &self.numerics;
        for (name, v) in [("numerics.tol", n.tol), ("numerics.rtol", n.rtol), ("numerics.atol", n.atol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if self.zone.envelope == EnvelopeName::Tabulated && self.zone.tabulated.is_none() {
            return Err(invalid("zone.tabulated is required for the tabulated envelope"));
        }
        if self.packet.times < 2 {
            return Err(invalid("packet.times must be at least 2"));
        }
        if !(self.packet.t_max > 0.0 && self.packet.t_max.is_finite()) {
            return Err(invalid("packet.t_max must be positive"));
        }
        if self.circuit.samples < 2 {
            return Err(invalid("circuit.samples must be at least 2"));
        }
        let s = &self.sweep;
        for (name, axis) in [
            ("sweep.a", &s.a),
            ("sweep.omega_alpha_tau", &s.omega_alpha_tau),
            ("sweep.delta_tau", &s.delta_tau),
            ("sweep.k_dx0", &s.k_dx0),
        ] {
            if let Some(v) = axis {
                if v.is_empty() {
                    return Err(invalid(format!("{name} must not be empty")));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(invalid(format!("{name} must contain finite values")));
                }
            }
        }
        Ok(())
    }

    pub fn envelope(&self) -> anyhow::Result<Envelope> {
        let z = &self.zone;
        let env = match z.envelope {
            EnvelopeName::Eckart => Envelope::eckart(),
            EnvelopeName::Gaussian => Envelope::gaussian(),
            EnvelopeName::Mesa => Envelope::mesa(z.mesa_half_width).map_err(|e| invalid(e.to_string()))?,
            EnvelopeName::Tabulated => {
                let t = z.tabulated.as_ref().ok_or_else(|| invalid("zone.tabulated is missing"))?;
                Envelope::tabulated(&t.theta, &t.values).map_err(|e| invalid(e.to_string()))?
            }
        };
        match z.half_window {
            Some(h) => env.with_half_window(h).map_err(|e| invalid(e.to_string())),
            None => Ok(env),
        }
    }

    /// Zone with the given overrides of `a`, `ω_ατ` and `Δτ`.
    pub fn zone_with(&self, a: f64, omega_alpha_tau: f64, delta_tau: f64) -> anyhow::Result<ZoneParameters> {
        ZoneParameters::new(delta_tau, omega_alpha_tau, a, self.envelope()?).map_err(|e| invalid(e.to_string()))
    }

    pub fn zone(&self) -> anyhow::Result<ZoneParameters> {
        match self.zone.position {
            Some(x) => berryoptics::model::to_dimensionless(&self.setup.to_setup(), self.envelope()?, x)
                .map_err(|e| invalid(e.to_string())),
            None => self.zone_with(self.zone.a, self.zone.omega_alpha_tau, self.zone.delta_tau),
        }
    }

    pub fn sweep_axes(&self) -> [Vec<f64>; 3] {
        let s = &self.sweep;
        [
            s.a.clone().unwrap_or_else(|| vec![self.zone.a]),
            s.omega_alpha_tau.clone().unwrap_or_else(|| vec![self.zone.omega_alpha_tau]),
            s.delta_tau.clone().unwrap_or_else(|| vec![self.zone.delta_tau]),
        ]
    }
}
