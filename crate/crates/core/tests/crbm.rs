mod common;

use irs_ee::channel::ChannelEstimate;
use irs_ee::crbm::{build_relaxation, round_and_select, solve_crbm, solve_relaxation, DEFAULT_TOLERANCE};
use irs_ee::exec::Execution;
use irs_ee::oracles::exhaustive_search;
use irs_ee::phase::PhaseResolution;
use irs_ee::worst_case::{ActivationVector, LinkModel, PowerModel, RobustProblem};
use irs_ee::SolveStatus;
use proptest::prelude::*;
use std::f64::consts::TAU;

fn arbitrary_problem() -> impl Strategy<Value = RobustProblem> {
    (1usize..=9)
        .prop_flat_map(|l| {
            (
                prop::collection::vec(0.05f64..1.0, l + 1),
                prop::collection::vec(0.0f64..TAU, l + 1),
                2u32..=6,
                0.0f64..=1.0,
                0.0f64..=1.0,
                prop::sample::select(vec![1e2, 1e4, 1e6]),
            )
        })
        .prop_map(|(m, p, bits, tau, nu, gb)| {
            let ch = ChannelEstimate::from_polar(m, p).unwrap();
            let link = LinkModel::new(ch, PhaseResolution::Bits(bits), gb).unwrap();
            let delta = tau * link.channel().alpha_min();
            let floor = nu * link.worst_case_snr(&ActivationVector::ones(link.elements()), delta).unwrap();
            let on = PowerModel::on_power_for_bits(bits);
            let pm = PowerModel::new(0.03, 0.8, 0.01, on, 3e-4).unwrap();
            RobustProblem::new(link, delta, floor, pm).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn sandwich(p in arbitrary_problem()) {
        let c = solve_crbm(&p).unwrap();
        let e = exhaustive_search(&p, Execution::Sequential).unwrap();
        prop_assert_eq!(c.is_feasible(), e.is_feasible());
        if let (Some(approx), Some(best)) = (c.ee.value(), e.ee.value()) {
            let upper = c.ee_upper.unwrap();
            prop_assert!(approx <= best);
            prop_assert!(best <= upper * (1.0 + 1e-12), "best {} upper {}", best, upper);
            prop_assert!(c.gap_bound >= 0.0);
            let x = c.x.as_ref().unwrap();
            prop_assert!(p.snr(x) >= p.gamma_min);
            prop_assert_eq!(p.ee(x), approx);
        }
    }

    #[test]
    fn relaxation_meets_its_floor(p in arbitrary_problem()) {
        let prob = build_relaxation(&p).unwrap();
        let rel = solve_relaxation(&prob, DEFAULT_TOLERANCE).unwrap();
        prop_assert!(rel.x_frac.iter().all(|v| (-1e-12..=1.0 + 1e-12).contains(v)));
        prop_assert!(prob.upper_bound_snr(&rel.x_frac) >= prob.gamma_min() * (1.0 - 1e-9));
        prop_assert!(rel.ee_upper >= rel.ee_rel - 1e-12 * rel.ee_rel.abs());
    }
}

#[test]
fn reference_sandwich_and_median_gap() {
    let mut gaps = Vec::new();
    for seed in 0..30 {
        for (tau, nu) in [(0.0, 0.0), (0.3, 0.7), (0.6, 0.7)] {
            let p = common::discrete(10, 4, tau, nu, seed);
            let c = solve_crbm(&p).unwrap();
            let e = exhaustive_search(&p, Execution::Parallel).unwrap();
            let (approx, best) = (c.ee.to_f64(), e.ee.to_f64());
            assert!(approx <= best && best <= c.ee_upper.unwrap(), "seed {seed}");
            gaps.push((best - approx) / best);
        }
    }
    gaps.sort_by(f64::total_cmp);
    assert!(gaps[gaps.len() / 2] <= 0.02);
}

#[test]
fn relaxation_bound_covers_every_binary_point() {
    let p = common::discrete(8, 3, 0.5, 0.5, 4);
    let prob = build_relaxation(&p).unwrap();
    let rel = solve_relaxation(&prob, DEFAULT_TOLERANCE).unwrap();
    for mask in 0..256u64 {
        let x = ActivationVector::from_mask(mask, 8);
        if let Some(ee) = p.objective(&x).value() {
            assert!(ee <= rel.ee_upper * (1.0 + 1e-12));
        }
    }
}

#[test]
fn rounding_keeps_the_sorted_prefix() {
    let p = common::discrete(12, 4, 0.2, 0.3, 8);
    let prob = build_relaxation(&p).unwrap();
    let rel = solve_relaxation(&prob, DEFAULT_TOLERANCE).unwrap();
    let s = round_and_select(&rel, &p).unwrap();
    let x = s.x.unwrap();
    let weakest_on = (0..12).filter(|&l| x.is_on(l)).map(|l| rel.x_frac[l]).fold(f64::INFINITY, f64::min);
    let strongest_off = (0..12).filter(|&l| !x.is_on(l)).map(|l| rel.x_frac[l]).fold(f64::NEG_INFINITY, f64::max);
    assert!(weakest_on >= strongest_off);
}

#[test]
fn unreachable_floor_is_infeasible() {
    let p = common::discrete(6, 4, 0.2, 0.0, 2);
    let all_on = p.snr(&ActivationVector::ones(6));
    let p = RobustProblem { gamma_min: 100.0 * all_on, ..p };
    let s = solve_crbm(&p).unwrap();
    assert_eq!(s.status, SolveStatus::Infeasible);
    assert!(s.x.is_none());
}

#[test]
fn deterministic() {
    let p = common::discrete(30, 4, 0.3, 0.7, 12);
    let a = solve_crbm(&p).unwrap();
    let b = solve_crbm(&p).unwrap();
    assert_eq!(a, b);
}

#[test]
fn larger_surfaces_converge() {
    for (seed, l) in [(1, 40), (2, 80), (3, 120)] {
        let p = common::discrete(l, 4, 0.3, 0.7, seed);
        let s = solve_crbm(&p).unwrap();
        assert!(s.is_feasible());
        assert!(s.gap_bound >= 0.0);
        let baseline = p.ee(&ActivationVector::ones(l));
        // the all-on vector is the longest prefix the rounding considers
        assert!(s.ee.to_f64() >= baseline * (1.0 - 1e-12));
    }
}
