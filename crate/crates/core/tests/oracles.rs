mod common;

use irs_ee::channel::ChannelEstimate;
use irs_ee::exec::Execution;
use irs_ee::oracles::{binomial, enumerate_subsets_eq_m, exhaustive_search, sampled_worst_snr, BallSampling};
use irs_ee::phase::PhaseResolution;
use irs_ee::worst_case::{ActivationVector, LinkModel, PowerModel, RobustProblem};

#[test]
fn best_fixed_count_is_the_global_optimum() {
    for seed in 0..10 {
        let p = common::discrete(9, 3, 0.4, 0.6, seed);
        let global = exhaustive_search(&p, Execution::Sequential).unwrap();
        let best = (0..=9)
            .map(|m| enumerate_subsets_eq_m(&p, m).unwrap().ee)
            .fold(irs_ee::worst_case::Efficiency::NegInfinity, |a, b| if b > a { b } else { a });
        assert_eq!(global.ee, best);
    }
}

#[test]
fn exhaustive_is_thread_independent() {
    let p = common::discrete(16, 4, 0.3, 0.7, 5);
    let a = exhaustive_search(&p, Execution::Sequential).unwrap();
    let b = exhaustive_search(&p, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn ties_go_to_the_lowest_mask() {
    // identical elements with flat power: every single-element activation ties
    let ch = ChannelEstimate::from_polar(vec![0.0, 1.0, 1.0, 1.0], vec![0.0; 4]).unwrap();
    let link = LinkModel::new(ch, PhaseResolution::Continuous, 1.0).unwrap();
    let pm = PowerModel::new(0.03, 0.8, 0.01, 0.5, 3e-4).unwrap();
    let p = RobustProblem::new(link, 0.0, 0.0, pm).unwrap();
    let s = exhaustive_search(&p, Execution::Parallel).unwrap();
    let x = s.x.unwrap();
    let best = (0..8u64)
        .filter(|&m| p.ee(&ActivationVector::from_mask(m, 3)) == p.ee(&x))
        .min()
        .unwrap();
    assert_eq!(x.to_mask(), Some(best));
}

#[test]
fn guards() {
    let p = common::continuous(26, 0.0, 0.0, 1);
    assert!(exhaustive_search(&p, Execution::Sequential).is_err());
    let p = common::continuous(40, 0.0, 0.0, 1);
    assert!(binomial(40, 20) > 1_000_000);
    assert!(enumerate_subsets_eq_m(&p, 20).is_err());
    assert!(enumerate_subsets_eq_m(&p, 1).is_ok());
}

#[test]
fn sampling_is_thread_independent_and_bounded() {
    let p = common::discrete(6, 4, 0.8, 0.0, 3);
    let x = ActivationVector::from_bools(vec![true, false, true, true, false, true]);
    let opts = BallSampling {
        samples: 5000,
        seed: 17,
        include_constructed: true,
    };
    let a = sampled_worst_snr(&p.link, &x, p.delta, opts, Execution::Sequential).unwrap();
    let b = sampled_worst_snr(&p.link, &x, p.delta, opts, Execution::Parallel).unwrap();
    assert_eq!(a, b);
    let closed = p.snr(&x);
    assert!((a - closed).abs() <= 1e-9 * closed.max(1.0));
}
