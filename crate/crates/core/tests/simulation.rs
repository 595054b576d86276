use cnoidal::elliptic::Modulus;
use cnoidal::model::SystemKind;
use cnoidal::simulate::{
    conservation_probe, run_propagation, run_propagation_with_state, SpectralConfig,
};
use cnoidal::solutions::{
    catalog_len, cnoidal_params, figure_set, semi_trivial, AsTravelingWave, FreeParams, RSign,
    FIGURE_MODULUS,
};
use cnoidal::Error;

fn cnoidal_v(kind: SystemKind) -> cnoidal::solutions::SemiTrivialSolution {
    let (phys, sigma) = figure_set(kind);
    let free = FreeParams {
        h2: 1.0,
        m: 0.5,
        sigma,
        ..FreeParams::default()
    };
    semi_trivial(kind, &phys, &free, catalog_len(kind)).unwrap()
}

fn error(sol: &dyn AsTravelingWave, n: usize, dt: f64, t_end: f64) -> f64 {
    let tw = sol.traveling_wave();
    let cfg = SpectralConfig::for_solution(&tw, n, dt, t_end).unwrap();
    let rep = run_propagation(&tw, &cfg).unwrap();
    rep.linf_error_u.max(rep.linf_error_v)
}

#[test]
fn error_decays_spectrally_in_modes() {
    let kind = SystemKind::SchrodingerKdVKdV;
    let (phys, sigma) = figure_set(kind);
    let fig = cnoidal_params(
        kind,
        &phys,
        sigma,
        Modulus::new(FIGURE_MODULUS).unwrap(),
        RSign::Plus,
    )
    .unwrap();
    let sols: [&dyn AsTravelingWave; 2] = [&cnoidal_v(kind), &fig];
    for sol in sols {
        let coarse = error(sol, 16, 1e-3, 0.2);
        let fine = error(sol, 32, 1e-3, 0.2);
        assert!(fine / coarse < 1e-2, "{coarse:e} -> {fine:e}");
    }
}

#[test]
fn every_system_travels_with_small_error() {
    for kind in SystemKind::ALL {
        let (phys, sigma) = figure_set(kind);
        let fig = cnoidal_params(
            kind,
            &phys,
            sigma,
            Modulus::new(FIGURE_MODULUS).unwrap(),
            RSign::Plus,
        )
        .unwrap();
        let tw = fig.traveling_wave();
        let cfg = SpectralConfig::for_solution(&tw, 128, 1e-2, 0.5).unwrap();
        let rep = run_propagation(&tw, &cfg).unwrap();
        assert!(
            rep.linf_error_u.max(rep.linf_error_v) < 1e-8,
            "{kind}: {rep:?}"
        );
        assert!(rep.conserved_drift <= 1e-10, "{kind}");
    }
}

#[test]
fn gauge_matches_direct_evolution_when_the_carrier_is_periodic() {
    let kind = SystemKind::SchrodingerKdVKdV;
    let (phys, _) = figure_set(kind);
    for shift in [1.0, 2.0] {
        let free = FreeParams {
            h0: 0.5,
            d0: 0.8,
            shift,
            omega: 3.0,
            ..FreeParams::default()
        };
        let plane = semi_trivial(kind, &phys, &free, 2).unwrap();
        let base = SpectralConfig {
            n_modes: 32,
            domain_length: std::f64::consts::TAU,
            dt: 1e-3,
            t_end: 0.5,
            dealias: false,
            outputs: 5,
            gauge: None,
        };
        let (_, gauged) = run_propagation_with_state(&plane, &base).unwrap();
        let (_, direct) = run_propagation_with_state(
            &plane,
            &SpectralConfig {
                gauge: Some(0.0),
                ..base
            },
        )
        .unwrap();
        let gap = gauged
            .u
            .iter()
            .zip(&direct.u)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(gap < 1e-12, "B = {shift}: {gap:e}");
        let vgap = gauged
            .v
            .iter()
            .zip(&direct.v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(vgap < 1e-12);
    }
}

#[test]
fn mean_of_v_is_conserved() {
    let sol = cnoidal_v(SystemKind::SchrodingerBBMBBM);
    let cfg = SpectralConfig::for_solution(&sol, 64, 1e-2, 2.0).unwrap();
    let (rep, last) = run_propagation_with_state(&sol, &cfg).unwrap();
    assert!(rep.conserved_drift <= 1e-12);
    assert!(rep.mass_drift_over_time.iter().all(|d| *d <= 1e-12));
    assert_eq!(conservation_probe(&[last.v.clone(), last.v]), 0.0);
}

#[test]
fn oversized_steps_are_reported_as_instability() {
    let kind = SystemKind::SchrodingerKdVKdV;
    let (phys, sigma) = figure_set(kind);
    let fig = cnoidal_params(
        kind,
        &phys,
        sigma,
        Modulus::new(FIGURE_MODULUS).unwrap(),
        RSign::Plus,
    )
    .unwrap();
    let cfg = SpectralConfig {
        dealias: false,
        ..SpectralConfig::for_solution(&fig, 256, 2.0, 400.0).unwrap()
    };
    match run_propagation(&fig, &cfg) {
        Err(Error::Stability(_)) => {}
        other => panic!("expected a stability error, got {other:?}"),
    }
}

#[test]
fn csv_series_has_one_row_per_output() {
    let sol = cnoidal_v(SystemKind::SchrodingerKdVBBM);
    let cfg = SpectralConfig {
        outputs: 4,
        ..SpectralConfig::for_solution(&sol, 32, 1e-2, 0.4).unwrap()
    };
    let rep = run_propagation(&sol, &cfg).unwrap();
    let mut buf = Vec::new();
    rep.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,err_u_linf,err_v_linf,mass_drift");
    assert_eq!(lines.len(), rep.times.len() + 1);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 4));
}

#[test]
fn solitary_profiles_need_an_explicit_domain() {
    let kind = SystemKind::SchrodingerKdVKdV;
    let (phys, sigma) = figure_set(kind);
    let sol = cnoidal::solutions::solitary_limit(
        kind,
        &phys,
        sigma,
        cnoidal::solutions::SolitaryBranch::MR1,
    )
    .unwrap();
    assert!(matches!(
        SpectralConfig::for_solution(&sol, 64, 1e-2, 1.0),
        Err(Error::Config(_))
    ));
}
