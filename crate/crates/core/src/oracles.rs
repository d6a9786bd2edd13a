//! Brute-force references: exhaustive activation search, Monte-Carlo
//! minimization of the SNR over the uncertainty ball, and fixed-cardinality
//! subset enumeration. Every candidate is evaluated from scratch.

use itertools::Itertools;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::exec::{map_reduce_chunks, Execution};
use crate::seed;
use crate::solution::Solution;
use crate::worst_case::{ActivationVector, Efficiency, LinkModel, RobustProblem};

pub const MAX_EXHAUSTIVE_ELEMENTS: usize = 25;
pub const MAX_SUBSETS: u128 = 1_000_000;
const MASK_CHUNK: u64 = 1 << 12;
const SAMPLE_CHUNK: u64 = 512;

/// Best (objective, mask) in a range of masks; ties keep the lowest mask.
fn best_in_range(problem: &RobustProblem, masks: std::ops::Range<u64>) -> (Efficiency, u64) {
    let mut x = ActivationVector::zeros(problem.elements());
    let mut best = (Efficiency::NegInfinity, u64::MAX);
    for mask in masks {
        x.fill_from_mask(mask);
        let v = problem.objective(&x);
        if v > best.0 {
            best = (v, mask);
        }
    }
    best
}

/// Exact optimum over all `2^L` activations (`L <= 25`).
pub fn exhaustive_search(problem: &RobustProblem, exec: Execution) -> Result<Solution> {
    let l = problem.elements();
    if l > MAX_EXHAUSTIVE_ELEMENTS {
        return Err(Error::GuardExceeded(format!(
            "exhaustive search limited to {MAX_EXHAUSTIVE_ELEMENTS} elements, got {l}"
        )));
    }
    let (best, mask) = map_reduce_chunks(
        exec,
        1u64 << l,
        MASK_CHUNK,
        (Efficiency::NegInfinity, u64::MAX),
        |r| best_in_range(problem, r),
        |a, b| if b.0 > a.0 { b } else { a },
    );
    match best {
        Efficiency::NegInfinity => Ok(Solution::infeasible()),
        Efficiency::Finite(ee) => Ok(Solution::exact(ActivationVector::from_mask(mask, l), ee)),
    }
}

/// Options for [`sampled_worst_snr`].
#[derive(Debug, Clone, Copy)]
pub struct BallSampling {
    pub samples: u64,
    pub seed: u64,
    /// Also evaluate the analytic minimizer from [`LinkModel::worst_case_error`].
    pub include_constructed: bool,
}

fn gaussian_direction<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// Minimum of the true SNR over random channel errors with `||h_tilde|| <= delta`.
///
/// Draws cycle through three kinds: uniform on the sphere of radius `delta`,
/// uniform in the ball, and small perturbations of the analytic minimizer
/// pulled back into the ball.
pub fn sampled_worst_snr(
    link: &LinkModel,
    x: &ActivationVector,
    delta: f64,
    opts: BallSampling,
    exec: Execution,
) -> Result<f64> {
    if opts.samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    let worst = link.worst_case_error(x, delta)?.coeffs();
    let dim = link.elements() + 1;
    let real_dim = 2 * dim;
    let sampled = map_reduce_chunks(
        exec,
        opts.samples,
        SAMPLE_CHUNK,
        f64::INFINITY,
        |range| {
            let mut rng = seed::sub_rng(opts.seed, &[range.start]);
            let mut best = f64::INFINITY;
            for i in range {
                let err: Vec<Complex64> = match i % 3 {
                    0 => gaussian_direction(&mut rng, dim).into_iter().map(|c| c * delta).collect(),
                    1 => {
                        let u: f64 = rng.random();
                        let r = delta * u.powf(1.0 / real_dim as f64);
                        gaussian_direction(&mut rng, dim).into_iter().map(|c| c * r).collect()
                    }
                    _ => {
                        let scale = delta * 10f64.powf(-rng.random_range(1.0..8.0));
                        let p: Vec<Complex64> = worst
                            .iter()
                            .zip(gaussian_direction(&mut rng, dim))
                            .map(|(w, d)| w + d * scale)
                            .collect();
                        let norm = p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                        if norm > delta {
                            p.into_iter().map(|c| c * (delta / norm)).collect()
                        } else {
                            p
                        }
                    }
                };
                best = best.min(link.snr_with_error(x, &err));
            }
            best
        },
        f64::min,
    );
    Ok(if opts.include_constructed {
        sampled.min(link.snr_with_error(x, &worst))
    } else {
        sampled
    })
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

/// Exact optimum over all activations with exactly `m` active elements,
/// enumerated in lexicographic order (first wins ties).
pub fn enumerate_subsets_eq_m(problem: &RobustProblem, m: usize) -> Result<Solution> {
    let l = problem.elements();
    if m > l {
        return Err(invalid(format!("cardinality {m} exceeds element count {l}")));
    }
    let count = binomial(l, m);
    if count > MAX_SUBSETS {
        return Err(Error::GuardExceeded(format!(
            "C({l}, {m}) = {count} subsets exceeds {MAX_SUBSETS}"
        )));
    }
    let mut best: Option<(f64, Vec<usize>)> = None;
    for subset in (0..l).combinations(m) {
        let mut x = ActivationVector::zeros(l);
        for &i in &subset {
            x.set(i, true);
        }
        if let Efficiency::Finite(v) = problem.objective(&x) {
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, subset));
            }
        }
    }
    Ok(match best {
        None => Solution::infeasible(),
        Some((ee, subset)) => {
            let mut x = ActivationVector::zeros(l);
            for i in subset {
                x.set(i, true);
            }
            Solution::exact(x, ee)
        }
    })
}
