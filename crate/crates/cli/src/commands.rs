//! One function per subcommand. Each returns the JSON results and CSV
//! tables; writing them out is left to the caller.

use std::f64::consts::PI;

use berryoptics::circuit::{circuit_path, surface_flux_quadrature, telescoped_partial_sum, winding_sum, winding_terms};
use berryoptics::dynamics::{
    perturbative_phase, phase_series, simulate_two_zone, solve_two_level, wkb_phase, Frame, Picture,
    SolveOptions, TwoLevelTrajectory,
};
use berryoptics::model::{validity_report, DEFAULT_VALIDITY_THRESHOLD};
use berryoptics::par::map_range;
use berryoptics::phases::{wrap_phase, zone_phases, ZoneMethod};
use berryoptics::wavepacket::{
    analytic_width, berry_phase_profile, eckart_profile, measure_width, min_width, quadratic_b,
    standing_wave_zone, GaussianPacket, GridSpec, Propagator, SampledPacket,
};
use berryoptics::{EnvelopeKind, Error, Execution, Method, PhaseResult, ZoneParameters};
use serde_json::{json, Value};

use crate::config::{invalid, FrameName, MethodName, PictureName, ProfileName, RunConfig, SWEEP_BUDGET};
use crate::output::{num, Report, Table};

fn solve_options(cfg: &RunConfig) -> SolveOptions {
    SolveOptions {
        rtol: cfg.numerics.rtol,
        atol: cfg.numerics.atol,
        samples: cfg.numerics.samples,
        picture: match cfg.dynamics.picture {
            PictureName::Interaction => Picture::Interaction,
            PictureName::Direct => Picture::Direct,
        },
        ..SolveOptions::default()
    }
}

fn frame(cfg: &RunConfig) -> Frame {
    match cfg.dynamics.frame {
        FrameName::Lab => Frame::Lab,
        FrameName::Tilde => Frame::Tilde,
    }
}

fn default_winding_terms(omega_alpha_tau: f64) -> usize {
    (10.0 * omega_alpha_tau).ceil() as usize + 20
}

fn zone_json(zone: &ZoneParameters) -> Value {
    json!({
        "envelope": zone.envelope().kind().name(),
        "a": zone.a(),
        "omega_alpha_tau": zone.omega_alpha_tau(),
        "delta_tau": zone.delta_tau(),
        "rabi_tau": zone.rabi_tau(),
        "half_window": zone.envelope().half_window(),
    })
}

fn require_eckart(zone: &ZoneParameters, what: &str) -> Result<(), Error> {
    if zone.envelope().kind() != EnvelopeKind::Eckart {
        return Err(Error::Domain {
            name: "envelope",
            reason: format!("{what} is available only for the Eckart envelope"),
        });
    }
    Ok(())
}

/// One phase route applied to one zone.
pub fn eval_method(cfg: &RunConfig, zone: &ZoneParameters, method: MethodName) -> Result<PhaseResult, Error> {
    let tol = cfg.numerics.tol;
    let sign = zone.delta_sign();
    let gamma_only = |gamma: f64, m: Method, err: f64| PhaseResult {
        beta: None,
        gamma: Some(gamma),
        phi_g: f64::NAN,
        phi_e: f64::NAN,
        method: m,
        est_error: err,
    };
    match method {
        MethodName::Quadrature => zone_phases(zone, ZoneMethod::Quadrature, tol),
        MethodName::ClosedForm => zone_phases(zone, ZoneMethod::ClosedForm, tol),
        MethodName::WeakField => zone_phases(zone, ZoneMethod::WeakField, tol),
        MethodName::WindingSum => {
            require_eckart(zone, "the winding sum")?;
            if zone.omega_alpha_tau() == 0.0 {
                return Ok(gamma_only(0.0, Method::WindingSum, 0.0));
            }
            let n = cfg
                .numerics
                .winding_terms
                .unwrap_or_else(|| default_winding_terms(zone.omega_alpha_tau()));
            let s = winding_sum(n, zone.a(), zone.omega_alpha_tau(), Execution::default())?;
            Ok(gamma_only(s.direct, Method::WindingSum, (s.limit - s.direct).abs()))
        }
        MethodName::SurfaceFlux => {
            let e = surface_flux_quadrature(zone, tol)?;
            Ok(gamma_only(e.value, Method::Quadrature, e.error))
        }
        MethodName::Ode => {
            let traj = solve_two_level(zone, frame(cfg), &solve_options(cfg))?;
            let phi = *phase_series(&traj)?.last().expect("non-empty trajectory");
            Ok(PhaseResult::total_only(phi, sign, Method::Ode, cfg.numerics.rtol * phi.abs().max(1.0)))
        }
        MethodName::Wkb => {
            let w = wkb_phase(zone)?;
            let mut r = PhaseResult::total_only(w.total, sign, Method::Wkb, w.est_error);
            r.beta = Some(w.beta_part * sign);
            r.gamma = Some(w.gamma_part);
            Ok(r)
        }
        MethodName::Perturbative => {
            let p = perturbative_phase(zone)?;
            let mut r = PhaseResult::total_only(p.total, sign, Method::Perturbative, 0.0);
            r.beta = Some(p.dynamical * sign);
            r.gamma = Some(p.geometric);
            Ok(r)
        }
    }
}

fn default_methods(cfg: &RunConfig, requested: &[MethodName]) -> Vec<MethodName> {
    if !requested.is_empty() {
        return requested.to_vec();
    }
    if cfg.zone.envelope == crate::config::EnvelopeName::Eckart {
        vec![MethodName::ClosedForm, MethodName::Quadrature]
    } else {
        vec![MethodName::Quadrature]
    }
}

fn opt(v: Option<f64>) -> String {
    v.filter(|x| x.is_finite()).map(num).unwrap_or_default()
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Largest disagreement between methods over β, γ and φ_g.
fn max_abs_diff(results: &[PhaseResult]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, p) in results.iter().enumerate() {
        for q in &results[i + 1..] {
            let pairs = [(p.beta, q.beta), (p.gamma, q.gamma), (finite(p.phi_g), finite(q.phi_g))];
            for (x, y) in pairs {
                if let (Some(x), Some(y)) = (x, y) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
    }
    worst
}

fn result_json(name: &str, r: &PhaseResult) -> Value {
    json!({
        "method": name,
        "beta": r.beta,
        "gamma": r.gamma,
        "phi_g": finite(r.phi_g),
        "phi_e": finite(r.phi_e),
        "phi_g_wrapped": finite(r.phi_g).map(wrap_phase),
        "phi_e_wrapped": finite(r.phi_e).map(wrap_phase),
        "est_error": r.est_error,
    })
}

/// Splits errors into rejected input (returned) and numerical failures
/// (recorded as text).
fn triage<T>(r: Result<T, Error>) -> anyhow::Result<Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if e.is_numerical() => Ok(Err(e.to_string())),
        Err(e) => Err(invalid(e.to_string())),
    }
}

pub fn phases(cfg: &RunConfig) -> anyhow::Result<Report> {
    let zone = cfg.zone()?;
    let methods = default_methods(cfg, &cfg.phases.methods);
    let mut table = Table::new(
        "phases",
        &["method", "beta[rad]", "gamma[rad]", "phi_g[rad]", "phi_e[rad]", "est_error[rad]", "status"],
    );
    let mut rows = Vec::new();
    let mut ok = Vec::new();
    let mut failure = None;
    for m in &methods {
        match triage(eval_method(cfg, &zone, *m))? {
            Ok(r) => {
                table.rows.push(vec![
                    m.name().into(),
                    opt(r.beta),
                    opt(r.gamma),
                    opt(Some(r.phi_g)),
                    opt(Some(r.phi_e)),
                    num(r.est_error),
                    "ok".into(),
                ]);
                rows.push(result_json(m.name(), &r));
                ok.push(r);
            }
            Err(msg) => {
                table.rows.push(vec![m.name().into(), "".into(), "".into(), "".into(), "".into(), "".into(), msg.clone()]);
                rows.push(json!({ "method": m.name(), "error": msg }));
                failure.get_or_insert(msg);
            }
        }
    }
    let mut results = json!({
        "zone": zone_json(&zone),
        "methods": rows,
        "max_abs_diff": max_abs_diff(&ok),
    });
    if let Some(first) = ok.first() {
        results["beta"] = json!(first.beta);
        results["gamma"] = json!(first.gamma);
        results["phi_g"] = json!(finite(first.phi_g));
        results["phi_e"] = json!(finite(first.phi_e));
    }
    Ok(Report {
        results,
        tables: vec![table],
        failure,
    })
}

fn trajectory_table(name: &str, traj: &TwoLevelTrajectory) -> anyhow::Result<Table> {
    let phase = phase_series(traj)?;
    let mut t = Table::new(
        name,
        &["t[tau]", "re_amp_e", "im_amp_e", "re_amp_g", "im_amp_g", "pop_e", "pop_g", "phase_g[rad]"],
    );
    for (s, p) in traj.states.iter().zip(&phase) {
        t.push_numbers(&[s.t, s.amp_e.re, s.amp_e.im, s.amp_g.re, s.amp_g.im, s.population_e(), s.population_g(), *p]);
    }
    Ok(t)
}

fn stats_json(traj: &TwoLevelTrajectory) -> Value {
    let s = &traj.stats;
    json!({
        "steps": s.steps,
        "rejected": s.rejected,
        "evaluations": s.evaluations,
        "max_norm_drift": s.max_norm_drift,
        "samples": traj.states.len(),
    })
}

pub fn dynamics(cfg: &RunConfig) -> anyhow::Result<Report> {
    let zone = cfg.zone()?;
    let opts = solve_options(cfg);
    let adiabatic = zone_phases(&zone, ZoneMethod::Quadrature, cfg.numerics.tol)?;
    if cfg.dynamics.two_zone {
        let red = zone.mirrored();
        let out = simulate_two_zone(&zone, &red, cfg.dynamics.gap, &opts)?;
        let tables = vec![
            trajectory_table("trajectory_zone1", &out.trajectories[0])?,
            trajectory_table("trajectory_zone2", &out.trajectories[1])?,
        ];
        let beta = adiabatic.beta.expect("quadrature gives beta");
        let results = json!({
            "zone": zone_json(&zone),
            "gap": cfg.dynamics.gap,
            "total_phase": out.result.phi_g,
            "total_phase_wrapped": wrap_phase(out.result.phi_g),
            "zone_phases": out.zone_phases,
            "geometric": out.geometric,
            "residual": out.residual,
            "residual_over_beta": out.residual / beta,
            "final_population_e": out.trajectories[1].states.last().map(|s| s.population_e()),
            "stats": [stats_json(&out.trajectories[0]), stats_json(&out.trajectories[1])],
        });
        return Ok(Report::ok(results, tables));
    }
    let traj = solve_two_level(&zone, frame(cfg), &opts)?;
    let table = trajectory_table("trajectory", &traj)?;
    let phi = *phase_series(&traj)?.last().expect("non-empty trajectory");
    let last = traj.states.last().expect("non-empty trajectory");
    let wkb = wkb_phase(&zone).ok().map(|w| w.total);
    let results = json!({
        "zone": zone_json(&zone),
        "frame": traj.frame.name(),
        "phase": phi,
        "phase_wrapped": wrap_phase(phi),
        "final_amp_g_arg": last.amp_g.arg(),
        "final_population_e": last.population_e(),
        "adiabatic_phi_g": adiabatic.phi_g,
        "wkb_phi_g": wkb,
        "stats": stats_json(&traj),
    });
    Ok(Report::ok(results, vec![table]))
}

pub fn windings(cfg: &RunConfig) -> anyhow::Result<Report> {
    let zone = cfg.zone()?;
    require_eckart(&zone, "the winding decomposition")?;
    let (a, w) = (zone.a(), zone.omega_alpha_tau());
    let n = cfg.numerics.winding_terms.unwrap_or_else(|| default_winding_terms(w));
    let exec = Execution::default();
    let terms = winding_terms(n, a, w, exec)?;
    let partial_tel = map_range(n, exec, |i| telescoped_partial_sum(i + 1, a, w));
    let mut table = Table::new(
        "windings",
        &["m", "gamma_m[rad]", "partial_direct[rad]", "partial_telescoped[rad]"],
    );
    let mut running = 0.0;
    for (i, (t, p)) in terms.iter().zip(partial_tel).enumerate() {
        running += t;
        table.rows.push(vec![(i + 1).to_string(), num(*t), num(running), num(p?)]);
    }
    let s = winding_sum(n, a, w, exec)?;
    let results = json!({
        "zone": zone_json(&zone),
        "terms": n,
        "direct": s.direct,
        "telescoped": s.telescoped,
        "limit": s.limit,
        "direct_minus_limit": s.direct - s.limit,
        "direct_minus_telescoped": s.direct - s.telescoped,
    });
    Ok(Report::ok(results, vec![table]))
}

pub fn circuit(cfg: &RunConfig) -> anyhow::Result<Report> {
    let zone = cfg.zone()?;
    let path = circuit_path(&zone, cfg.circuit.samples)?;
    let mut table = Table::new("circuit", &["t[tau]", "phi[rad]", "rho[1]", "X[hbar|Delta|]", "Y[hbar|Delta|]", "Z[hbar|Delta|]"]);
    for s in &path {
        table.push_numbers(&[s.t, s.phi, s.rho, s.x, s.y, s.z]);
    }
    let flux = surface_flux_quadrature(&zone, cfg.numerics.tol)?;
    let half = zone.envelope().half_window();
    let results = json!({
        "zone": zone_json(&zone),
        "samples": path.len(),
        "max_rho": path.iter().map(|s| s.rho).fold(0.0, f64::max),
        "revolutions": zone.omega_alpha_tau() * 2.0 * half / (2.0 * PI),
        "enclosed_flux": flux.value,
    });
    Ok(Report::ok(results, vec![table]))
}

pub fn validate(cfg: &RunConfig) -> anyhow::Result<Report> {
    let setup = cfg.setup.to_setup();
    setup.validate().map_err(|e| invalid(e.to_string()))?;
    let env = cfg.envelope()?;
    let report = validity_report(&setup, &env, DEFAULT_VALIDITY_THRESHOLD)?;
    let antinode = PI / (2.0 * setup.wavenumber() * setup.half_angle_alpha.cos());
    let zone = berryoptics::model::to_dimensionless(&setup, env, antinode)?;
    let mut table = Table::new("validate", &["criterion", "margin", "threshold", "ok"]);
    let mut row = |name: &str, m: Option<f64>, ok: Option<bool>| {
        table.rows.push(vec![
            name.into(),
            opt(m),
            num(report.threshold),
            ok.map(|b| b.to_string()).unwrap_or_else(|| "not_evaluated".into()),
        ]);
    };
    row("adiabatic", Some(report.adiabatic_margin), Some(report.adiabatic_ok));
    row("raman_nath", report.raman_nath_margin, report.raman_nath_ok);
    row("spontaneous", report.spontaneous_margin, report.spontaneous_ok);
    let results = json!({
        "doppler_frequency": setup.doppler_frequency()?,
        "omega_alpha_over_delta": report.weak_field_ratio,
        "adiabatic_margin": report.adiabatic_margin,
        "adiabatic_ok": report.adiabatic_ok,
        "raman_nath_margin": report.raman_nath_margin,
        "raman_nath_ok": report.raman_nath_ok,
        "spontaneous_margin": report.spontaneous_margin,
        "spontaneous_ok": report.spontaneous_ok,
        "threshold": report.threshold,
        "all_evaluated_pass": report.all_evaluated_pass(),
        "antinode_zone": zone_json(&zone),
    });
    Ok(Report::ok(results, vec![table]))
}

pub fn packet(cfg: &RunConfig) -> anyhow::Result<Report> {
    let p = &cfg.packet;
    let zone = cfg.zone()?;
    let derived_b = |n| quadratic_b(&zone, p.k_dx0, p.alpha, n);
    let b = match p.b {
        Some(b) => b,
        None => derived_b(p.n_zones)?,
    };
    let times: Vec<f64> = (0..p.times)
        .map(|i| p.t_max * i as f64 / (p.times - 1) as f64)
        .collect();
    let ground = GaussianPacket::unit(b);
    let excited = GaussianPacket::unit(-b);
    let free = GaussianPacket::unit(0.0);
    let (w_min, t_min) = min_width(&ground);

    // The numerical run imprints either −(b/2)x² or the full γ(x).
    let spec = match (cfg.numerics.grid_points, cfg.numerics.grid_half_width) {
        (None, None) => GridSpec::auto(b, p.t_max.max(t_min))?,
        (n, h) => {
            let auto = GridSpec::auto(b, p.t_max.max(t_min))?;
            GridSpec::new(n.unwrap_or(auto.points), h.unwrap_or(auto.half_width))?
        }
    };
    let initial = SampledPacket::gaussian(spec);
    let exec = Execution::default();
    let mut omega_used = zone.omega_alpha_tau();
    let phase = match p.profile {
        ProfileName::Quadratic => initial.grid.iter().map(|x| -0.5 * b * x * x).collect(),
        ProfileName::Full => {
            let peak = if p.b.is_some() {
                // Choose ω_ατ so that the profile's curvature is the requested b.
                let per_unit = derived_b(p.n_zones)? / zone.omega_alpha_tau();
                if !(per_unit > 0.0) {
                    return Err(invalid("packet.b with the full profile needs a > 0 and ω_ατ > 0"));
                }
                omega_used = b / per_unit;
                zone.with_omega_alpha_tau(omega_used)?
            } else {
                zone.clone()
            };
            if peak.envelope().kind() == EnvelopeKind::Eckart {
                eckart_profile(peak.a(), peak.omega_alpha_tau(), p.k_dx0, p.alpha, p.n_zones, &initial.grid, exec)
            } else {
                berry_phase_profile(
                    |x| standing_wave_zone(&peak, p.k_dx0, p.alpha, x),
                    &initial.grid,
                    p.n_zones,
                    exec,
                )?
            }
        }
    };
    let imprinted = initial.imprint(&phase)?;
    let prop = Propagator::new(spec.points);

    let mut widths = Table::new(
        "widths",
        &["t[t_s]", "width_ground[dx0]", "width_excited[dx0]", "width_free[dx0]", "width_ground_numerical[dx0]"],
    );
    let mut failure = None;
    for &t in &times {
        let numerical = match triage(prop.propagate(&imprinted, t).and_then(|q| measure_width(&q)))? {
            Ok(w) => w,
            Err(msg) => {
                failure.get_or_insert(format!("t = {t}: {msg}"));
                f64::NAN
            }
        };
        widths.rows.push(vec![
            num(t),
            num(analytic_width(t, &ground)?),
            num(analytic_width(t, &excited)?),
            num(analytic_width(t, &free)?),
            opt(Some(numerical)),
        ]);
    }

    let t_probe = if b > 0.0 { t_min } else { p.t_max };
    let mut snapshot = Table::new("packet_snapshot", &["x[dx0]", "re_psi", "im_psi", "density[1/dx0]"]);
    let mut measured = None;
    match triage(prop.propagate(&imprinted, t_probe))? {
        Ok(q) => {
            for (x, a) in q.grid.iter().zip(&q.amps) {
                snapshot.push_numbers(&[*x, a.re, a.im, a.norm_sqr()]);
            }
            measured = Some(measure_width(&q)?);
        }
        Err(msg) => {
            failure.get_or_insert(msg);
        }
    }
    let predicted = analytic_width(t_probe, &ground)?;
    let results = json!({
        "b": b,
        "b_single_zone": derived_b(1)?,
        "b_two_zones": derived_b(2)?,
        "n_zones": p.n_zones,
        "profile": match p.profile { ProfileName::Quadratic => "quadratic", ProfileName::Full => "full" },
        "omega_alpha_tau_used": omega_used,
        "min_width": w_min,
        "t_min": t_min,
        "probe_time": t_probe,
        "predicted_width": predicted,
        "measured_width": measured,
        "relative_deviation": measured.map(|w| w / predicted - 1.0),
        "grid": { "points": spec.points, "half_width": spec.half_width },
    });
    Ok(Report {
        results,
        tables: vec![widths, snapshot],
        failure,
    })
}

pub fn sweep(cfg: &RunConfig) -> anyhow::Result<Report> {
    let [a_axis, w_axis, d_axis] = cfg.sweep_axes();
    let k_axis = cfg.sweep.k_dx0.clone();
    let k_len = k_axis.as_ref().map_or(1, Vec::len);
    let total = [a_axis.len(), w_axis.len(), d_axis.len(), k_len]
        .iter()
        .try_fold(1usize, |acc, n| acc.checked_mul(*n))
        .filter(|n| *n <= SWEEP_BUDGET)
        .ok_or_else(|| invalid(format!("sweep exceeds the budget of {SWEEP_BUDGET} points")))?;
    let methods = default_methods(cfg, &cfg.sweep.methods);

    // Lexicographic: a outermost, then ω_ατ, Δτ, kΔx₀.
    let point = |i: usize| {
        let k = i % k_len;
        let r = i / k_len;
        let d = r % d_axis.len();
        let r = r / d_axis.len();
        let w = r % w_axis.len();
        let a = r / w_axis.len();
        (a_axis[a], w_axis[w], d_axis[d], k_axis.as_ref().map(|v| v[k]))
    };
    let rows = map_range(total, Execution::default(), |i| -> Result<Vec<String>, Error> {
        let (a, w, d, k) = point(i);
        let zone = ZoneParameters::new(d, w, a, cfg.envelope().map_err(|e| Error::Domain {
            name: "envelope",
            reason: e.to_string(),
        })?)?;
        let mut row = vec![num(a), num(w), num(d)];
        if let Some(k) = k {
            row.push(num(k));
            row.push(num(quadratic_b(&zone, k, cfg.packet.alpha, cfg.packet.n_zones)?));
        }
        let mut ok = Vec::new();
        let mut status = "ok".to_string();
        for m in &methods {
            match eval_method(cfg, &zone, *m) {
                Ok(r) => {
                    row.extend([opt(r.beta), opt(r.gamma), opt(Some(r.phi_g))]);
                    ok.push(r);
                }
                Err(e) if e.is_numerical() => {
                    row.extend(["".into(), "".into(), "".into()]);
                    if status == "ok" {
                        status = format!("{}: {e}", m.name());
                    }
                }
                Err(e) => return Err(e),
            }
        }
        row.push(num(max_abs_diff(&ok)));
        row.push(status);
        Ok(row)
    });

    let mut header: Vec<String> = vec!["a[1]".into(), "omega_alpha_tau[1]".into(), "delta_tau[1]".into()];
    if k_axis.is_some() {
        header.push("k_dx0[1]".into());
        header.push("b[1]".into());
    }
    for m in &methods {
        for q in ["beta", "gamma", "phi_g"] {
            header.push(format!("{q}_{}[rad]", m.name()));
        }
    }
    header.push("max_abs_diff[rad]".into());
    header.push("status".into());
    let mut table = Table {
        name: "sweep".into(),
        header,
        rows: Vec::with_capacity(total),
    };
    let mut failed = 0usize;
    let mut first_failure = None;
    let mut worst: f64 = 0.0;
    let diff_col = table.header.len() - 2;
    for r in rows {
        let r = r.map_err(|e| invalid(e.to_string()))?;
        if r.last().map(String::as_str) != Some("ok") {
            failed += 1;
            first_failure.get_or_insert_with(|| r.last().cloned().unwrap_or_default());
        }
        if let Ok(v) = r[diff_col].parse::<f64>() {
            worst = worst.max(v);
        }
        table.rows.push(r);
    }
    let results = json!({
        "points": total,
        "methods": methods.iter().map(|m| m.name()).collect::<Vec<_>>(),
        "failed_points": failed,
        "max_abs_diff": worst,
    });
    Ok(Report {
        results,
        tables: vec![table],
        failure: first_failure,
    })
}
