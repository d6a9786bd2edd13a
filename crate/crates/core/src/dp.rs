//! Exact solver for continuous phase shifts.
//!
//! With continuous phases the worst-case SNR depends on `x` only through
//! `sum x_l a_l` and `sum x_l`, so for every cardinality `M` the best choice is
//! the `M` strongest elements. Sorting once and sweeping `M = 0..=L` finds the
//! global optimum in `O(L log L)`.

use crate::error::{invalid, Result};
use crate::phase::PhaseResolution;
use crate::solution::Solution;
use crate::worst_case::{energy_efficiency, g_count, ActivationVector, Efficiency, RobustProblem};

/// Relative distance below which running sums cannot be trusted to order two
/// values the same way as a from-scratch evaluation.
const TIE_TOLERANCE: f64 = 1e-12;

/// Integer key whose ascending order is the descending `total_cmp` order.
fn descending_key(v: f64) -> u64 {
    let bits = v.to_bits();
    let ascending = if bits >> 63 == 1 { !bits } else { bits | 1 << 63 };
    !ascending
}

fn from_descending_key(k: u64) -> f64 {
    let ascending = !k;
    f64::from_bits(if ascending >> 63 == 1 { ascending & !(1 << 63) } else { !ascending })
}

/// `(key, index)` pairs in descending value order, ties by ascending index.
fn sort_descending(values: &[f64]) -> Vec<(u64, usize)> {
    let mut keyed: Vec<(u64, usize)> = values.iter().map(|&v| descending_key(v)).zip(0..).collect();
    keyed.sort_unstable();
    keyed
}

/// Element indices by descending magnitude, ties by ascending index.
pub fn descending_order(values: &[f64]) -> Vec<usize> {
    sort_descending(values).into_iter().map(|(_, i)| i).collect()
}

fn require_continuous(problem: &RobustProblem) -> Result<()> {
    match problem.link.resolution() {
        PhaseResolution::Continuous => Ok(()),
        PhaseResolution::Bits(_) => Err(invalid(
            "the sorted-prefix solver is exact only for continuous phase shifts",
        )),
    }
}

fn prefix_activation(order: &[usize], len: usize, m: usize) -> ActivationVector {
    let mut x = ActivationVector::zeros(len);
    for &i in &order[..m] {
        x.set(i, true);
    }
    x
}

/// Global maximum of the worst-case EE over all activations (continuous phases).
///
/// The reported EE is re-evaluated from scratch on the returned activation.
pub fn solve_dp(problem: &RobustProblem) -> Result<Solution> {
    require_continuous(problem)?;
    let ch = problem.link.channel();
    let gamma_bar = problem.link.gamma_bar();
    let alphas = ch.element_magnitudes();
    let l = alphas.len();
    let keyed = sort_descending(alphas);
    let order: Vec<usize> = keyed.iter().map(|k| k.1).collect();

    let pm = &problem.power;
    let step = pm.on_w - pm.off_w;
    let a0 = ch.direct_magnitude();
    let base_power = pm.fixed() + l as f64 * pm.off_w;
    let sums = keyed.iter().scan((a0, base_power), |acc, &(k, _)| {
        acc.0 += from_descending_key(k);
        acc.1 += step;
        Some(*acc)
    });
    let running = std::iter::once((a0, base_power)).chain(sums).enumerate().map(|(m, (f, power))| {
        let d = f - g_count(m, problem.delta);
        (gamma_bar * d * d, power)
    });
    Ok(match best_prefix(problem, &order, running) {
        Some((ee, x)) => Solution::exact(x, ee),
        None => Solution::infeasible(),
    })
}

/// Best prefix of `order` given the running `(snr, power)` of every prefix
/// length `0..=L`. Running sums are trusted except within a relative tie
/// band, where the prefix is re-evaluated from scratch so the verdict matches
/// [`RobustProblem::objective`]. Ties go to the shorter prefix.
pub(crate) fn best_prefix(
    problem: &RobustProblem,
    order: &[usize],
    running: impl Iterator<Item = (f64, f64)>,
) -> Option<(f64, ActivationVector)> {
    let l = order.len();
    let band = |top: f64| top - TIE_TOLERANCE * top.abs();
    // prefixes whose running EE lies within the band of the running maximum
    let mut candidates: Vec<(f64, usize)> = Vec::new();
    let mut top = f64::NEG_INFINITY;
    for (m, (snr, power)) in running.enumerate() {
        let margin = TIE_TOLERANCE * snr.max(problem.gamma_min);
        let ok = if (snr - problem.gamma_min).abs() <= margin {
            problem.objective(&prefix_activation(order, l, m)).is_finite()
        } else {
            snr >= problem.gamma_min
        };
        if !ok {
            continue;
        }
        let ee = energy_efficiency(snr, power);
        if ee < band(top) {
            continue;
        }
        if ee > top {
            top = ee;
            candidates.retain(|c| c.0 >= band(top));
        }
        candidates.push((ee, m));
    }
    let mut best: Option<(f64, ActivationVector)> = None;
    for &(_, m) in &candidates {
        let x = prefix_activation(order, l, m);
        let exact = problem.ee(&x);
        if best.as_ref().is_none_or(|(b, _)| exact > *b) {
            best = Some((exact, x));
        }
    }
    best
}

/// Best activation with exactly `m` active elements (continuous phases).
///
/// Feasible iff `a_0 + (sum of the m largest a_l) >= sqrt(gamma_min / gamma_bar) + delta sqrt(1 + m)`,
/// checked on the prefix activation itself.
pub fn solve_subproblem_eq_m(problem: &RobustProblem, m: usize) -> Result<Solution> {
    require_continuous(problem)?;
    let l = problem.elements();
    if m > l {
        return Err(invalid(format!("cardinality {m} exceeds element count {l}")));
    }
    let ch = problem.link.channel();
    let alphas = ch.element_magnitudes();
    let order = descending_order(alphas);
    let x = prefix_activation(&order, l, m);
    match problem.objective(&x) {
        Efficiency::Finite(ee) => Ok(Solution::exact(x, ee)),
        Efficiency::NegInfinity => Ok(Solution::infeasible()),
    }
}
