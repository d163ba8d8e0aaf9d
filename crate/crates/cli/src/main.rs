//! `berryoptics <command> [flags] [--config file.json] [--out dir]`
//!
//! Exit status: 0 on success, 2 for rejected configuration, 3 when a
//! numerical method fails (partial results are still written).

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::{
    invalid, CommandKind, ConfigError, EnvelopeName, FrameName, MethodName, PictureName, ProfileName, RunConfig,
    Tabulated,
};
use output::{write_artifacts, Report};

const DEFAULT_OUT: &str = "berryoptics-out";

#[derive(Parser)]
#[command(name = "berryoptics", version, about = "Dynamical and geometric phases of atoms in shaped standing waves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// β, γ and the total phases of one zone by the selected methods.
    Phases(Overrides),
    /// Integrates the two-level equations through one zone or a mirrored pair.
    Dynamics(Overrides),
    /// Winding-by-winding flux decomposition of γ (Eckart envelope).
    Windings(Overrides),
    /// Focusing of a transverse Gaussian packet by the imprinted phase.
    Packet(Overrides),
    /// Phases over a lexicographic grid of zone parameters.
    Sweep(Overrides),
    /// Validity margins of a physical setup.
    Validate(Overrides),
    /// Parameter-space circuit samples.
    Circuit(Overrides),
}

impl Command {
    fn split(self) -> (CommandKind, Overrides) {
        match self {
            Command::Phases(o) => (CommandKind::Phases, o),
            Command::Dynamics(o) => (CommandKind::Dynamics, o),
            Command::Windings(o) => (CommandKind::Windings, o),
            Command::Packet(o) => (CommandKind::Packet, o),
            Command::Sweep(o) => (CommandKind::Sweep, o),
            Command::Validate(o) => (CommandKind::Validate, o),
            Command::Circuit(o) => (CommandKind::Circuit, o),
        }
    }
}

/// Flags override the corresponding config-file entries.
#[derive(Args, Default)]
struct Overrides {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock time in the summary (makes it non-reproducible).
    #[arg(long)]
    timing: bool,

    #[arg(long, value_enum)]
    envelope: Option<EnvelopeName>,
    #[arg(long = "a", allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega_alpha_tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    delta_tau: Option<f64>,
    #[arg(long)]
    mesa_half_width: Option<f64>,
    #[arg(long)]
    half_window: Option<f64>,
    /// Tabulated envelope as `θ:f` pairs on θ ≥ 0, mirrored to θ < 0,
    /// e.g. `0:1,1:0.6,3:0`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    table: Option<Vec<String>>,
    /// Derive the zone from the physical setup at this position (m).
    #[arg(long, allow_hyphen_values = true)]
    position: Option<f64>,

    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    atol: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    terms: Option<usize>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    grid_half_width: Option<f64>,

    /// Comma-separated phase methods.
    #[arg(long, value_enum, value_delimiter = ',')]
    methods: Option<Vec<MethodName>>,

    #[arg(long, value_enum)]
    frame: Option<FrameName>,
    #[arg(long, value_enum)]
    picture: Option<PictureName>,
    #[arg(long)]
    two_zone: bool,
    #[arg(long)]
    gap: Option<f64>,

    #[arg(long)]
    k_dx0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long)]
    n_zones: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, value_enum)]
    profile: Option<ProfileName>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    times: Option<usize>,

    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    sweep_a: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    sweep_omega_alpha_tau: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    sweep_delta_tau: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    sweep_k_dx0: Option<Vec<f64>>,

    #[arg(long)]
    circuit_samples: Option<usize>,

    #[arg(long)]
    wavelength: Option<f64>,
    #[arg(long)]
    velocity: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    half_angle_alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    detuning: Option<f64>,
    #[arg(long)]
    rabi_peak: Option<f64>,
    #[arg(long)]
    envelope_time: Option<f64>,
    #[arg(long)]
    spontaneous_rate: Option<f64>,
    #[arg(long)]
    recoil_frequency: Option<f64>,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn set_opt<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

fn parse_table(pairs: &[String]) -> anyhow::Result<Tabulated> {
    let mut theta = Vec::new();
    let mut values = Vec::new();
    for p in pairs {
        let (t, v) = p
            .split_once(':')
            .ok_or_else(|| invalid(format!("--table entry `{p}` is not `theta:value`")))?;
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| invalid(format!("--table entry `{p}`: {e}")));
        theta.push(parse(t)?);
        values.push(parse(v)?);
    }
    Ok(Tabulated { theta, values })
}

impl Overrides {
    fn apply(self, cfg: &mut RunConfig) -> anyhow::Result<()> {
        let z = &mut cfg.zone;
        set(&mut z.envelope, self.envelope);
        set(&mut z.a, self.a);
        set(&mut z.omega_alpha_tau, self.omega_alpha_tau);
        set(&mut z.delta_tau, self.delta_tau);
        set(&mut z.mesa_half_width, self.mesa_half_width);
        set_opt(&mut z.half_window, self.half_window);
        set_opt(&mut z.position, self.position);
        if let Some(t) = &self.table {
            z.tabulated = Some(parse_table(t)?);
        }

        let n = &mut cfg.numerics;
        set(&mut n.tol, self.tol);
        set(&mut n.rtol, self.rtol);
        set(&mut n.atol, self.atol);
        set_opt(&mut n.samples, self.samples);
        set_opt(&mut n.winding_terms, self.terms);
        set_opt(&mut n.grid_points, self.grid_points);
        set_opt(&mut n.grid_half_width, self.grid_half_width);

        if let Some(m) = self.methods {
            cfg.phases.methods = m.clone();
            cfg.sweep.methods = m;
        }

        let d = &mut cfg.dynamics;
        set(&mut d.frame, self.frame);
        set(&mut d.picture, self.picture);
        d.two_zone |= self.two_zone;
        set(&mut d.gap, self.gap);

        let p = &mut cfg.packet;
        set(&mut p.k_dx0, self.k_dx0);
        set(&mut p.alpha, self.alpha);
        set(&mut p.n_zones, self.n_zones);
        set_opt(&mut p.b, self.b);
        set(&mut p.profile, self.profile);
        set(&mut p.t_max, self.t_max);
        set(&mut p.times, self.times);

        let s = &mut cfg.sweep;
        set_opt(&mut s.a, self.sweep_a);
        set_opt(&mut s.omega_alpha_tau, self.sweep_omega_alpha_tau);
        set_opt(&mut s.delta_tau, self.sweep_delta_tau);
        set_opt(&mut s.k_dx0, self.sweep_k_dx0);

        set(&mut cfg.circuit.samples, self.circuit_samples);

        let u = &mut cfg.setup;
        set(&mut u.wavelength, self.wavelength);
        set(&mut u.velocity, self.velocity);
        set(&mut u.half_angle_alpha, self.half_angle_alpha);
        set(&mut u.detuning, self.detuning);
        set(&mut u.rabi_peak, self.rabi_peak);
        set(&mut u.envelope_time, self.envelope_time);
        set_opt(&mut u.spontaneous_rate, self.spontaneous_rate);
        set_opt(&mut u.recoil_frequency, self.recoil_frequency);

        if let Some(o) = self.out {
            cfg.out = Some(o.to_string_lossy().into_owned());
        }
        Ok(())
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("BERRYOPTICS_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| invalid(format!("BERRYOPTICS_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| invalid(format!("cannot size the thread pool: {e}")))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<berryoptics::Error>() {
        if e.is_numerical() {
            return 3;
        }
    }
    if err.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    // I/O and anything else unexpected: treat as a configuration problem
    // (unwritable output directory, unreadable input).
    2
}

fn resolve(kind: CommandKind, overrides: Overrides) -> anyhow::Result<(RunConfig, bool)> {
    let timing = overrides.timing;
    let mut cfg = match &overrides.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(c) = cfg.command {
        if c != kind {
            return Err(invalid(format!(
                "config is for `{}` but `{}` was requested",
                c.name(),
                kind.name()
            )));
        }
    }
    cfg.command = Some(kind);
    overrides.apply(&mut cfg)?;
    cfg.out.get_or_insert_with(|| DEFAULT_OUT.to_string());
    cfg.validate()?;
    Ok((cfg, timing))
}

fn dispatch(kind: CommandKind, cfg: &RunConfig) -> anyhow::Result<Report> {
    match kind {
        CommandKind::Phases => commands::phases(cfg),
        CommandKind::Dynamics => commands::dynamics(cfg),
        CommandKind::Windings => commands::windings(cfg),
        CommandKind::Packet => commands::packet(cfg),
        CommandKind::Sweep => commands::sweep(cfg),
        CommandKind::Validate => commands::validate(cfg),
        CommandKind::Circuit => commands::circuit(cfg),
    }
}

fn run(kind: CommandKind, overrides: Overrides) -> anyhow::Result<u8> {
    configure_threads()?;
    let (cfg, timing) = resolve(kind, overrides)?;
    let dir = PathBuf::from(cfg.out.as_deref().unwrap_or(DEFAULT_OUT));
    let start = Instant::now();
    let report = match dispatch(kind, &cfg) {
        Ok(r) => r,
        Err(e) if exit_code(&e) == 3 => Report {
            results: serde_json::Value::Null,
            tables: Vec::new(),
            failure: Some(e.to_string()),
        },
        Err(e) => return Err(e),
    };
    let elapsed = timing.then(|| start.elapsed().as_secs_f64());
    let summary = write_artifacts(&dir, kind.name(), &cfg, &report, elapsed)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    if let Some(msg) = &report.failure {
        eprintln!("error: numerical failure: {msg}");
        return Ok(3);
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (kind, overrides) = cli.command.split();
    match run(kind, overrides) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
