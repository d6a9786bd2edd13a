use irs_ee::channel::{angles_from_geometry, sample_channel, FadingParams, ScenarioGeometry};

fn reference() -> (ScenarioGeometry, FadingParams) {
    let g = ScenarioGeometry::reference();
    let f = FadingParams::reference(&g).unwrap();
    (g, f)
}

#[test]
fn reference_angles() {
    let a = angles_from_geometry(&ScenarioGeometry::reference()).unwrap();
    assert_eq!(a.arrival_inclination, 1.387192316515978);
    assert_eq!(a.arrival_azimuth, 0.3805063771123649);
    assert_eq!(a.departure_inclination, 1.7544003370738153);
    assert_eq!(a.departure_azimuth, 5.902678930067221);
}

#[test]
fn reference_pathloss() {
    let (g, f) = reference();
    let pl = f.pathloss(&g);
    approx::assert_relative_eq!(pl.direct, 3.981071705534969e-13, max_relative = 1e-12);
    approx::assert_relative_eq!(pl.tx_irs, 1.4968098064418093e-7, max_relative = 1e-12);
    approx::assert_relative_eq!(pl.irs_rx, 1.4968098064418093e-7, max_relative = 1e-12);
}

#[test]
fn same_seed_same_channel() {
    let (g, f) = reference();
    let betas = vec![0.9; 16];
    let a = sample_channel(&g, &f, 16, &betas, 42).unwrap();
    let b = sample_channel(&g, &f, 16, &betas, 42).unwrap();
    let c = sample_channel(&g, &f, 16, &betas, 43).unwrap();
    assert_eq!(a.coeffs(), b.coeffs());
    assert_ne!(a.coeffs(), c.coeffs());
}

#[test]
fn prefix_stable_in_element_count() {
    // element draws are sequential, so a longer surface extends a shorter one
    let (g, f) = reference();
    let short = sample_channel(&g, &f, 5, &[0.9; 5], 9).unwrap();
    let long = sample_channel(&g, &f, 8, &[0.9; 8], 9).unwrap();
    assert_eq!(short.coeffs(), &long.coeffs()[..6]);
}

#[test]
fn average_gains_match_pathloss() {
    // unit-power fading: E|h_0|^2 = PL_0 and E|h_l|^2 = beta^2 PL_u PL_v
    let (g, f) = reference();
    let pl = f.pathloss(&g);
    let n = 20_000;
    let (mut direct, mut cascade) = (0.0, 0.0);
    for seed in 0..n {
        let ch = sample_channel(&g, &f, 1, &[0.9], seed).unwrap();
        direct += ch.coeffs()[0].norm_sqr();
        cascade += ch.coeffs()[1].norm_sqr();
    }
    let direct = direct / n as f64;
    let cascade = cascade / n as f64;
    assert!((direct / pl.direct - 1.0).abs() < 0.05, "{}", direct / pl.direct);
    let expected = 0.81 * pl.tx_irs * pl.irs_rx;
    assert!((cascade / expected - 1.0).abs() < 0.05, "{}", cascade / expected);
}

#[test]
fn magnitudes_and_phases_are_consistent() {
    let (g, f) = reference();
    let ch = sample_channel(&g, &f, 10, &[0.9; 10], 5).unwrap();
    for (c, (m, p)) in ch.coeffs().iter().zip(ch.magnitudes().iter().zip(ch.phases())) {
        approx::assert_relative_eq!(c.norm(), *m, max_relative = 1e-15);
        assert!((0.0..std::f64::consts::TAU).contains(p));
    }
    let min = ch.element_magnitudes().iter().copied().fold(f64::INFINITY, f64::min);
    assert_eq!(ch.alpha_min(), min.min(ch.direct_magnitude()));
}
