//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured worst-case discrepancy against its pinned bound.
//! Run with `cargo test -p absim-core --test acceptance -- --nocapture`
//! to see the lines.

use absim_core::constants::{
    ELEMENTARY_CHARGE, FLUX_QUANTUM_PAIR, FLUX_QUANTUM_SINGLE, PLANCK_H,
};
use absim_core::energy::{
    energy_direct, energy_gauge_breach, energy_of_current, energy_via_potential,
    CurrentDistribution,
};
use absim_core::fields::{
    b0_field, curl_fd, div_fd, loop_integral_a, vector_potential_analytic, GaugeFunction,
    VectorField,
};
use absim_core::interference::{
    ab_phase_from_flux, fringe_pattern, predict, FringeAlignment,
};
use absim_core::model::{
    BeamPath, Experiment, FluxSource, Hypothesis, PointCharge, Scenario, ShieldGeometry,
    ShieldSpec, SourceKind, WavePacketSpec,
};
use absim_core::quadrature::QuadratureConfig;
use absim_core::shielding::{pulse_report, resolve_transmission};
use absim_core::squid::critical_current;
use absim_core::Vec3;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

fn z_solenoid(kind: SourceKind, radius: f64, b0: f64) -> FluxSource {
    FluxSource {
        kind,
        center: Vec3::ZERO,
        axis: Z,
        radius,
        b0,
    }
}

fn rect_path(x_side: f64, r: f64) -> BeamPath {
    BeamPath::new(
        vec![
            Vec3::new(0.0, -6.0 * r, 0.0),
            Vec3::new(x_side, -6.0 * r, 0.0),
            Vec3::new(x_side, 6.0 * r, 0.0),
            Vec3::new(0.0, 6.0 * r, 0.0),
        ],
        2.0e8,
    )
}

fn two_path_scenario(flux: f64, charge_q: f64, shield: Option<ShieldSpec>) -> Scenario {
    let r = 0.01;
    let src = z_solenoid(SourceKind::InfiniteSolenoid, r, flux / (PI * r * r));
    Scenario {
        hypothesis: None,
        source: src,
        shield,
        experiment: Experiment::TwoPath {
            charge_q,
            path_c: rect_path(3.0 * r, r),
            path_d: rect_path(-3.0 * r, r),
        },
        quadrature: QuadratureConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-30,
            max_subdivisions: 1_000_000,
        },
        wave_packet: None,
    }
}

fn polygon(center: Vec3, radius: f64, sides: usize) -> BeamPath {
    let mut vertices: Vec<Vec3> = (0..sides)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / sides as f64;
            center + Vec3::new(radius * t.cos(), radius * t.sin(), 0.0)
        })
        .collect();
    vertices.push(vertices[0]);
    BeamPath::new(vertices, 1.0)
}

/// Criterion 1: the superimposed-energy identity W' = A·qv holds between
/// the direct-overlap and via-potential routes to 1e-4 relative over 20
/// random long-solenoid configurations, within a 60 s budget.
#[test]
fn acceptance_01_energy_identity_across_routes() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AB1);
    let r = 0.01;
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let b0 = rng.gen_range(0.5..2.0);
        let src = z_solenoid(SourceKind::FiniteSolenoid { length: 100.0 * r }, r, b0);
        let rho = rng.gen_range(2.0..10.0) * r;
        let angle = rng.gen_range(0.0..2.0 * PI);
        let zpos = rng.gen_range(-10.0..10.0) * r;
        let x = Vec3::new(rho * angle.cos(), rho * angle.sin(), zpos);
        // Dominantly tangential velocity with a random oblique tilt, so
        // W' stays bounded away from zero.
        let phi_hat = Vec3::new(-angle.sin(), angle.cos(), 0.0);
        let rho_hat = Vec3::new(angle.cos(), angle.sin(), 0.0);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let mix = phi_hat * sign + rho_hat * rng.gen_range(-0.5..0.5) + Z * rng.gen_range(-0.5..0.5);
        let v = mix.normalized().unwrap() * rng.gen_range(1.0e6..1.0e8);
        let charge = PointCharge::new(-ELEMENTARY_CHARGE, x, v);

        let direct = energy_direct(&src, &charge, None, &cfg).unwrap().value;
        let via = energy_via_potential(&src, &charge, true, &cfg).unwrap().value;
        worst = worst.max((direct - via).abs() / via.abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(worst <= 1e-4, "worst relative deviation {worst:.3e}");
    assert!(elapsed <= 60.0, "runtime {elapsed:.1} s exceeds 60 s");
    println!(
        "ACCEPTANCE 1 PASS: energy identity, worst rel dev {worst:.3e} \
         (bound 1e-4), runtime {elapsed:.1} s (bound 60 s)"
    );
}

/// Criterion 2: divergence and curl of the potential behave as the
/// Coulomb-gauge field of the confined flux (h = 1e-4 R), and a gauge
/// shift breaks the energy identity by exactly |q ∇χ·v|.
#[test]
fn acceptance_02_gauge_suite() {
    let r = 0.01;
    let b0 = 1.3;
    let h = 1e-4 * r;
    let bound = 1e-6 * b0;

    let ideal = z_solenoid(SourceKind::InfiniteSolenoid, r, b0);
    let analytic = VectorField::infinite_solenoid(&ideal).unwrap();

    let mut worst_div: f64 = 0.0;
    for x in [
        Vec3::new(0.004, 0.002, 0.0),
        Vec3::new(0.02, -0.01, 0.15),
        Vec3::new(-0.03, 0.025, -0.4),
    ] {
        worst_div = worst_div.max(div_fd(&analytic, x, h).unwrap().abs());
    }
    assert!(worst_div <= bound, "analytic divergence {worst_div:.3e}");

    let inside = Vec3::new(0.5 * r, 0.0, 0.0);
    let curl_in = curl_fd(&analytic, inside, h).unwrap();
    let curl_in_dev = (curl_in - b0_field(&ideal, inside)).norm();
    assert!(curl_in_dev <= bound, "curl inside dev {curl_in_dev:.3e}");

    let curl_out = curl_fd(&analytic, Vec3::new(2.0 * r, r, 0.1), h)
        .unwrap()
        .norm();
    assert!(curl_out <= bound, "curl outside {curl_out:.3e}");

    // Numeric potential: short solenoid, tight tolerance so the
    // integration error stays below the stencil scale.
    let finite = z_solenoid(SourceKind::FiniteSolenoid { length: 10.0 * r }, r, b0);
    let numeric = VectorField::numeric(&finite, QuadratureConfig::default().with_rel_tol(1e-8))
        .unwrap();
    let div_numeric = div_fd(&numeric, Vec3::new(3.0 * r, 0.0, 0.0), h)
        .unwrap()
        .abs();
    assert!(div_numeric <= bound, "numeric divergence {div_numeric:.3e}");

    // Gauge breach: χ = c·x with c·v ≠ 0 must shift A·qv by exactly
    // |q c·v| relative to the direct-route energy.
    let breach_src = z_solenoid(SourceKind::FiniteSolenoid { length: 20.0 * r }, r, 1.0);
    let charge = PointCharge::new(
        -ELEMENTARY_CHARGE,
        Vec3::new(3.0 * r, 0.0, 0.0),
        Vec3::new(0.0, 1.0e7, 0.0),
    );
    let a_scale = vector_potential_analytic(&breach_src.idealized(), charge.x)
        .unwrap()
        .norm();
    let c = Vec3::new(0.0, 10.0 * a_scale, 0.0);
    let cfg = QuadratureConfig {
        abs_tol: 0.0,
        ..QuadratureConfig::default()
    };
    let breach = energy_gauge_breach(&breach_src, &charge, &GaugeFunction::linear(c), &cfg)
        .unwrap();
    let expected = (charge.q * c.dot(charge.v)).abs();
    let rel = (breach.discrepancy - expected).abs() / expected;
    assert!(!breach.identity_holds);
    assert!(rel <= 1e-6, "breach magnitude off by {rel:.3e} relative");

    println!(
        "ACCEPTANCE 2 PASS: gauge suite, div(analytic) {worst_div:.2e}, \
         curl-in dev {curl_in_dev:.2e}, curl-out {curl_out:.2e}, \
         div(numeric) {div_numeric:.2e} (bounds {bound:.2e}); \
         gauge breach |q grad(chi)·v| matched to {rel:.2e} (bound 1e-6)"
    );
}

/// Criterion 3: loop integrals of A reproduce the enclosed flux —
/// 1e-9 relative for the closed form, 1e-3 for the quadrature potential
/// of an L = 100R solenoid (the end effect), zero for non-enclosing loops.
#[test]
fn acceptance_03_stokes_flux() {
    let r = 0.01;
    let src = z_solenoid(SourceKind::FiniteSolenoid { length: 100.0 * r }, r, 1.0);
    let flux = src.flux();
    let cfg = QuadratureConfig::default();

    let analytic = VectorField::infinite_solenoid(&src.idealized()).unwrap();
    let enclosing = polygon(Vec3::ZERO, 2.0 * r, 64);
    let a_res = loop_integral_a(&analytic, &enclosing, &cfg).unwrap();
    let rel_analytic = (a_res.value - flux).abs() / flux;
    assert!(rel_analytic <= 1e-9, "analytic loop rel {rel_analytic:.3e}");

    let beside = polygon(Vec3::new(3.0 * r, 0.0, 0.0), 0.4 * r, 64);
    let n_res = loop_integral_a(&analytic, &beside, &cfg).unwrap();
    assert!(
        n_res.value.abs() <= cfg.abs_tol,
        "non-enclosing loop {:.3e}",
        n_res.value
    );

    let numeric = VectorField::numeric(&src, QuadratureConfig::default().with_rel_tol(1e-5))
        .unwrap();
    let octagon = polygon(Vec3::ZERO, 2.0 * r, 8);
    let num_res = loop_integral_a(&numeric, &octagon, &cfg).unwrap();
    let rel_numeric = (num_res.value - flux).abs() / flux;
    assert!(rel_numeric <= 1e-3, "numeric loop rel {rel_numeric:.3e}");

    println!(
        "ACCEPTANCE 3 PASS: Stokes/flux, analytic rel {rel_analytic:.2e} \
         (bound 1e-9), numeric rel {rel_numeric:.2e} (bound 1e-3), \
         non-enclosing {:.2e} (bound {:.0e})",
        n_res.value.abs(),
        cfg.abs_tol
    );
}

/// Criterion 4: the mirror relations. A_C = −A_D and W'_C = −W'_D exactly
/// for the closed form; W'_C = −W'_D to 1e-6 relative for the quadrature
/// potential.
#[test]
fn acceptance_04_mirror_relations() {
    let r = 0.01;
    let ideal = z_solenoid(SourceKind::InfiniteSolenoid, r, 1.0);
    let c_point = Vec3::new(3.0 * r, 0.0, 0.0);
    let d_point = Vec3::new(-3.0 * r, 0.0, 0.0);

    let ac = vector_potential_analytic(&ideal, c_point).unwrap();
    let ad = vector_potential_analytic(&ideal, d_point).unwrap();
    assert_eq!(ac + ad, Vec3::ZERO);
    // The azimuthal (nonzero) component negates bitwise; the radial one
    // is a signed zero on the axis line, where == is the right comparison.
    assert_eq!(ac.y.to_bits(), (-ad.y).to_bits());
    assert_eq!(ac.x, -ad.x);

    let v = Vec3::new(0.0, 2.0e8, 0.0);
    let cfg = QuadratureConfig::default();
    let wc = energy_via_potential(&ideal, &PointCharge::new(-ELEMENTARY_CHARGE, c_point, v), false, &cfg)
        .unwrap()
        .value;
    let wd = energy_via_potential(&ideal, &PointCharge::new(-ELEMENTARY_CHARGE, d_point, v), false, &cfg)
        .unwrap()
        .value;
    assert_eq!(wc.to_bits(), (-wd).to_bits());
    assert!(wc != 0.0);

    let finite = z_solenoid(SourceKind::FiniteSolenoid { length: 20.0 * r }, r, 1.0);
    let nc = energy_via_potential(&finite, &PointCharge::new(-ELEMENTARY_CHARGE, c_point, v), true, &cfg)
        .unwrap()
        .value;
    let nd = energy_via_potential(&finite, &PointCharge::new(-ELEMENTARY_CHARGE, d_point, v), true, &cfg)
        .unwrap()
        .value;
    let rel_numeric = (nc + nd).abs() / nc.abs();
    assert!(rel_numeric <= 1e-6, "numeric mirror rel {rel_numeric:.3e}");

    println!(
        "ACCEPTANCE 4 PASS: mirror relations, analytic A and W' exact \
         (bitwise), numeric W' rel {rel_numeric:.2e} (bound 1e-6)"
    );
}

/// Criterion 5: unshielded, the energy-route phase equals the flux law to
/// 1e-3 relative at half-, one-, and one-and-a-half-quantum fluxes; the
/// half-quantum case classifies interleaved and the full quantum aligned.
#[test]
fn acceptance_05_phase_equivalence() {
    let half = FLUX_QUANTUM_PAIR;
    let mut worst: f64 = 0.0;
    for flux in [half, 2.0 * half, 3.0 * half] {
        let scenario = two_path_scenario(flux, ELEMENTARY_CHARGE, None);
        let vp = predict(&scenario, Hypothesis::VectorPotential).unwrap();
        let se = predict(&scenario, Hypothesis::SuperimposedEnergy).unwrap();
        worst = worst.max((vp.delta_phi - se.delta_phi).abs() / vp.delta_phi.abs());
    }
    assert!(worst <= 1e-3, "hypothesis disagreement {worst:.3e}");

    // The flux law itself is exact at the quanta.
    assert_eq!(ab_phase_from_flux(FLUX_QUANTUM_PAIR), PI);
    assert_eq!(ab_phase_from_flux(FLUX_QUANTUM_SINGLE), 2.0 * PI);

    let at_half = predict(
        &two_path_scenario(half, ELEMENTARY_CHARGE, None),
        Hypothesis::VectorPotential,
    )
    .unwrap();
    let pi_dev = (at_half.delta_phi - PI).abs() / PI;
    assert!(pi_dev <= 1e-9, "half-quantum phase off pi by {pi_dev:.3e}");
    assert_eq!(
        fringe_pattern(&at_half).alignment,
        FringeAlignment::Interleaved
    );

    let at_full = predict(
        &two_path_scenario(2.0 * half, ELEMENTARY_CHARGE, None),
        Hypothesis::VectorPotential,
    )
    .unwrap();
    let two_pi_dev = (at_full.delta_phi - 2.0 * PI).abs() / (2.0 * PI);
    assert!(two_pi_dev <= 1e-9);
    assert_eq!(fringe_pattern(&at_full).alignment, FringeAlignment::Aligned);

    println!(
        "ACCEPTANCE 5 PASS: phase equivalence, worst hypothesis gap \
         {worst:.2e} (bound 1e-3); h/2e -> pi ({pi_dev:.2e} off, interleaved), \
         h/e -> 2pi ({two_pi_dev:.2e} off, aligned)"
    );
}

/// Criterion 6: with a perfect low-frequency shield the energy hypothesis
/// predicts exactly zero while the flux hypothesis still predicts
/// 2πΦ/(h/e).
#[test]
fn acceptance_06_shield_dichotomy() {
    let shield = ShieldSpec {
        geometry: ShieldGeometry::FullCylinder,
        energy_gap: 3.0e-3,
        transmission: 0.0,
    };
    // A slow probe: the pulse spectrum sits far below the gap, so the
    // configured transmission applies in full.
    let slow_packet = WavePacketSpec {
        coherence_length: 1.0,
        speed: 1.0,
    };
    assert_eq!(resolve_transmission(&shield, Some(&slow_packet)), 0.0);

    let mut scenario = two_path_scenario(FLUX_QUANTUM_PAIR, ELEMENTARY_CHARGE, Some(shield));
    scenario.wave_packet = Some(slow_packet);

    let se = predict(&scenario, Hypothesis::SuperimposedEnergy).unwrap();
    assert_eq!(se.delta_phi, 0.0);

    let vp = predict(&scenario, Hypothesis::VectorPotential).unwrap();
    let expected = ab_phase_from_flux(vp.flux_used);
    assert_eq!(vp.delta_phi.to_bits(), expected.to_bits());
    assert!((vp.delta_phi - PI).abs() <= 1e-9 * PI);

    println!(
        "ACCEPTANCE 6 PASS: shield dichotomy, energy hypothesis 0 rad \
         (exact), flux hypothesis {:.6} rad = 2*pi*flux/(h/e)",
        vp.delta_phi
    );
}

/// Criterion 7: a z-symmetric loop/solenoid configuration under a perfect
/// half-space shield keeps exactly half the unshielded superimposed
/// energy (1e-6 relative).
#[test]
fn acceptance_07_half_shield_factor() {
    let r = 0.01;
    let src = z_solenoid(SourceKind::FiniteSolenoid { length: 20.0 * r }, r, 1.0);
    let cfg = QuadratureConfig::default();
    let loop_dist = CurrentDistribution::circular_loop(Vec3::ZERO, Z, 3.0 * r, 2.0e-3, 64);

    let transparent = ShieldSpec {
        geometry: ShieldGeometry::HalfSpaceCylinder,
        energy_gap: 3.0e-3,
        transmission: 1.0,
    };
    let blocked = ShieldSpec {
        transmission: 0.0,
        ..transparent
    };
    let full = energy_of_current(&src, &loop_dist, Some(&transparent), &cfg)
        .unwrap()
        .value;
    let half = energy_of_current(&src, &loop_dist, Some(&blocked), &cfg)
        .unwrap()
        .value;
    let rel = (half - 0.5 * full).abs() / (0.5 * full).abs();
    assert!(rel <= 1e-6, "half-shield ratio off by {rel:.3e}");

    // Cross-route check: the unshielded direct overlap agrees with the
    // potential route Σ A₀·J dl.
    let via = energy_of_current(&src, &loop_dist, None, &cfg).unwrap().value;
    let rel_route = (via - full).abs() / via.abs();
    assert!(rel_route <= 1e-4, "route disagreement {rel_route:.3e}");

    println!(
        "ACCEPTANCE 7 PASS: half shield keeps {:.12} of the unshielded \
         energy (1/2 to {rel:.2e}, bound 1e-6); routes agree to \
         {rel_route:.2e} (bound 1e-4)",
        half / full
    );
}

/// Criterion 8: the SQUID table — the flux law gives I₀ at {0, Φ₀, 2Φ₀},
/// the halved-energy law gives {I₀, 0, I₀}, all to 1e-12·I₀.
#[test]
fn acceptance_08_squid_table() {
    let i0 = 1.0e-6;
    let phi0 = FLUX_QUANTUM_PAIR;
    let tol = 1e-12 * i0;
    let cases = [
        (0.0, i0, i0),
        (phi0, i0, 0.0),
        (2.0 * phi0, i0, i0),
    ];
    let mut worst: f64 = 0.0;
    for (flux, expect_vp, expect_se) in cases {
        let vp = critical_current(flux, i0, Hypothesis::VectorPotential);
        let se = critical_current(flux, i0, Hypothesis::SuperimposedEnergy);
        worst = worst.max((vp - expect_vp).abs()).max((se - expect_se).abs());
        assert!((vp - expect_vp).abs() <= tol, "flux-law I_c off at {flux:e}");
        assert!((se - expect_se).abs() <= tol, "energy-law I_c off at {flux:e}");
    }
    println!(
        "ACCEPTANCE 8 PASS: SQUID table exact, worst abs dev {worst:.2e} A \
         (bound {tol:.0e} A)"
    );
}

/// Criterion 9: pulse report at the fast-packet parameters — Δt = 2e-14 s
/// and ν = 5e13 Hz to two significant figures, photon energy from the
/// constants (with the documented factor-10 discrepancy against the
/// often-quoted 2e-2 eV), not shielded by a 3e-3 eV gap.
#[test]
fn acceptance_09_pulse_report() {
    let wp = WavePacketSpec {
        coherence_length: 4.0e-6,
        speed: 2.0e8,
    };
    let gap = 3.0e-3;
    let report = pulse_report(&wp, gap);

    assert!((report.dt - 2.0e-14).abs() <= 0.05e-14, "dt = {:.3e}", report.dt);
    assert!((report.nu - 5.0e13).abs() <= 0.05e13, "nu = {:.3e}", report.nu);

    // Independent decimal-arithmetic value of h·(5e13 Hz)/e,
    // 0.206783384846192932308... eV, rounded to f64.
    let hand_value = 0.20678338484619293;
    let rel = (report.photon_energy - hand_value).abs() / hand_value;
    assert!(rel <= 1e-9, "photon energy off oracle by {rel:.3e}");

    // The often-quoted 2e-2 eV figure is an order of magnitude low; the
    // verdict does not depend on which figure one takes.
    let factor = report.photon_energy / 2.0e-2;
    assert!(factor > 2.0);
    assert!(report.photon_energy > gap && 2.0e-2 > gap);
    assert!(!report.shielded);

    // Sanity-check the consistency relation h·nu = e·photon_energy.
    let identity = (report.photon_energy * ELEMENTARY_CHARGE - PLANCK_H * report.nu).abs();
    assert!(identity <= 1e-12 * PLANCK_H * report.nu);

    println!(
        "ACCEPTANCE 9 PASS: pulse dt {:.3e} s, nu {:.3e} Hz, h*nu = \
         {:.6e} eV from constants ({factor:.1}x the often-quoted 2e-2 eV; \
         verdict unchanged), shielded = {}",
        report.dt, report.nu, report.photon_energy, report.shielded
    );
}
