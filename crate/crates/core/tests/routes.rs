use berryoptics::circuit::{surface_flux_quadrature, winding_sum};
use berryoptics::dynamics::{ode_phase, perturbative_phase, simulate_two_zone, wkb_phase, Frame, SolveOptions};
use berryoptics::model::to_dimensionless;
use berryoptics::phases::{
    eckart_dynamical_phase, eckart_geometric_phase, two_zone_total, zone_phases, ZoneMethod,
};
use berryoptics::wavepacket::{
    eckart_profile, measure_width, propagate_free, GridSpec, SampledPacket,
};
use berryoptics::{Envelope, Execution, PhysicalSetup, ZoneParameters};

#[test]
fn geometric_phase_by_four_routes() {
    for &(a, w) in &[(0.5, 1.0), (1.0, 4.0 * std::f64::consts::PI), (2.0, 0.5)] {
        let zone = ZoneParameters::new(40.0, w, a, Envelope::eckart()).unwrap();
        let closed = eckart_geometric_phase(a, w).unwrap();
        let quad = zone_phases(&zone, ZoneMethod::Quadrature, 1e-12).unwrap().gamma.unwrap();
        let flux = surface_flux_quadrature(&zone, 1e-12).unwrap().value;
        let n = (10.0 * w).ceil() as usize + 40;
        let sum = winding_sum(n, a, w, Execution::default()).unwrap();
        for v in [quad, flux, sum.direct, sum.telescoped, sum.limit] {
            assert!((v - closed).abs() < 1e-9, "a={a} w={w}: {v} vs {closed}");
        }
    }
}

#[test]
fn ode_exceeds_adiabatic_value_by_leading_correction() {
    let zone = ZoneParameters::new(40.0, 0.0, 0.5, Envelope::eckart()).unwrap();
    let ode = ode_phase(&zone, Frame::Tilde, &SolveOptions::default()).unwrap().phi_g;
    let wkb = wkb_phase(&zone).unwrap().total;
    let beta = eckart_dynamical_phase(0.5, 40.0).unwrap();
    assert!((wkb - beta).abs() < 1e-9);
    // Leading non-adiabatic correction a²/(6|Δ|τ(1+a²)).
    let excess = 0.25 / (6.0 * 40.0 * 1.25);
    assert!((ode - beta - excess).abs() < 2e-5, "{ode} {beta}");
}

#[test]
fn weak_field_routes_agree() {
    let zone = ZoneParameters::new(40.0, 1.0, 0.05, Envelope::eckart()).unwrap();
    let p = perturbative_phase(&zone).unwrap();
    let ode = ode_phase(&zone, Frame::Tilde, &SolveOptions::default()).unwrap();
    // Perturbative total is φ_g up to the sign of Δ.
    assert!((p.total - ode.phi_g).abs() < 1e-4);
}

#[test]
fn two_zone_sequence_keeps_only_geometry() {
    let blue = ZoneParameters::new(40.0, 1.0, 0.5, Envelope::eckart()).unwrap();
    let red = blue.mirrored();
    let closed = two_zone_total(&blue, &red).unwrap();
    let sim = simulate_two_zone(&blue, &red, 10.0, &SolveOptions::default()).unwrap();
    let gamma = 2.0 * eckart_geometric_phase(0.5, 1.0).unwrap();
    assert!((closed.phi_g - gamma).abs() < 1e-12);
    assert!((sim.result.phi_g / gamma - 1.0).abs() < 0.01);
}

#[test]
fn physical_setup_feeds_zone() {
    let setup = PhysicalSetup::argon_example();
    let zone = to_dimensionless(&setup, Envelope::eckart(), 0.25 * std::f64::consts::PI / setup.wavenumber()).unwrap();
    let r = zone.omega_alpha_tau() / zone.delta_abs();
    assert!((r - 0.180_551_271_838_565_7).abs() < 1e-12);
    let p = zone_phases(&zone, ZoneMethod::ClosedForm, 1e-10).unwrap();
    assert!(p.gamma.unwrap() <= 0.0);
}

#[test]
fn packet_pipeline_is_deterministic_across_execution_modes() {
    let spec = GridSpec::auto(5.0, 0.5).unwrap();
    let run = |exec| {
        let p = SampledPacket::gaussian(spec);
        let g = eckart_profile(0.5, 4000.0, 0.05, 0.0, 2, &p.grid, exec);
        propagate_free(&p.imprint(&g).unwrap(), 0.2).unwrap()
    };
    let a = run(Execution::Sequential);
    let b = run(Execution::Parallel);
    assert_eq!(a, b);
    assert!(measure_width(&a).unwrap() < 0.25);
}
