//! Relaxation-and-rounding solver for quantized phase shifts.
//!
//! The binary problem is relaxed to `x in [0, 1]^L` with the SNR replaced by
//! its concave upper bound `gamma_hat(x)`. After the Charnes-Cooper change of
//! variables `t = 1 / P_tot(x)`, `y = t x` the relaxation becomes the concave
//! program
//!
//! ```text
//! maximize   t log2(1 + gamma_bar xi + u(y) / t)
//! subject to u(y) >= (gamma_min - gamma_bar xi) t,  0 <= y_l <= t,  t P_tot(y / t) = 1
//! ```
//!
//! which is solved by a log-barrier Newton method. The min terms in `u` are
//! replaced by epigraph variables `z_nm <= y_n, z_nm <= y_m`, and `t` is
//! eliminated through the power equality. The fractional optimum is then
//! rounded by activating its largest entries one at a time.

#![allow(clippy::needless_range_loop)]

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use std::f64::consts::LN_2;

use crate::dp::{best_prefix, descending_order};
use crate::error::{Error, Result};
use crate::solution::{SolveStatus, Solution};
use crate::worst_case::{energy_efficiency, Efficiency, ExpansionCoeffs, RobustProblem};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
const MAX_NEWTON_STEPS: usize = 500;
const INITIAL_BARRIER: f64 = 1.0;
const BARRIER_DECREASE: f64 = 10.0;
const NEWTON_TOLERANCE: f64 = 1e-10;

/// The concave-affine fractional relaxation of one robust problem.
#[derive(Debug, Clone)]
pub struct RelaxationProblem {
    coeffs: ExpansionCoeffs,
    gamma_bar: f64,
    gamma_min: f64,
    /// `P_fix + L P_off`.
    base_power: f64,
    /// `P_on - P_off`.
    power_step: f64,
    /// `gamma_bar zeta'`.
    linear: Vec<f64>,
    /// `(n, m, gamma_bar mu_nm)` for the pairs with `mu_nm > 0`.
    pairs: Vec<(usize, usize, f64)>,
    /// `1 + gamma_bar xi`.
    offset: f64,
    /// `gamma_min - gamma_bar xi`.
    floor: f64,
}

/// Build the relaxation. Fails if the problem is infeasible (all-on activation
/// misses the SNR floor) or if a pair coefficient is negative.
pub fn build_relaxation(problem: &RobustProblem) -> Result<RelaxationProblem> {
    let link = &problem.link;
    link.check_assumptions(problem.delta)?;
    let feas = problem.feasibility()?;
    if !feas.feasible {
        return Err(Error::Infeasible(
            "all-on activation does not meet the SNR floor".into(),
        ));
    }
    let coeffs = link.expansion(problem.delta)?;
    let gamma_bar = link.gamma_bar();
    let a = link.channel().element_magnitudes();
    let mut pairs = Vec::new();
    for (n, m, mu) in coeffs.pairs() {
        if mu > 0.0 {
            pairs.push((n, m, gamma_bar * mu));
        } else if mu < -1e-12 * 2.0 * a[n] * a[m] {
            return Err(Error::Degenerate(format!(
                "pair coefficient mu[{n},{m}] = {mu:e} is negative, the relaxation is not concave"
            )));
        }
        // pairs with mu <= 0 up to rounding are dropped, which can only raise the bound
    }
    let l = coeffs.elements();
    let pm = &problem.power;
    Ok(RelaxationProblem {
        linear: coeffs.zeta_prime.iter().map(|z| gamma_bar * z).collect(),
        offset: 1.0 + gamma_bar * coeffs.xi,
        floor: problem.gamma_min - gamma_bar * coeffs.xi,
        coeffs,
        gamma_bar,
        gamma_min: problem.gamma_min,
        base_power: pm.fixed() + l as f64 * pm.off_w,
        power_step: pm.on_w - pm.off_w,
        pairs,
    })
}

impl RelaxationProblem {
    pub fn elements(&self) -> usize {
        self.coeffs.elements()
    }

    pub fn coeffs(&self) -> &ExpansionCoeffs {
        &self.coeffs
    }

    pub fn gamma_bar(&self) -> f64 {
        self.gamma_bar
    }

    pub fn gamma_min(&self) -> f64 {
        self.gamma_min
    }

    pub fn total_power(&self, x: &[f64]) -> f64 {
        self.base_power + self.power_step * x.iter().sum::<f64>()
    }

    pub fn upper_bound_snr(&self, x: &[f64]) -> f64 {
        self.coeffs.upper_bound_snr(x, self.gamma_bar)
    }

    /// `log2(1 + gamma_hat(x)) / P_tot(x)`.
    pub fn fractional_objective(&self, x: &[f64]) -> f64 {
        energy_efficiency(self.upper_bound_snr(x), self.total_power(x))
    }

    /// `u(y) = gamma_bar (zeta' . y + sum mu_nm min(y_n, y_m))`.
    pub fn u(&self, y: &[f64]) -> f64 {
        self.gamma_bar * self.coeffs.linear_and_pairs(&self.coeffs.zeta_prime, y)
    }

    /// `-rel_entr(t, (1 + gamma_bar xi) t + w) / ln 2`.
    pub fn charnes_cooper_objective(&self, t: f64, w: f64) -> f64 {
        -t * (t / (self.offset * t + w)).ln() / LN_2
    }

    fn t_of(&self, sum_y: f64) -> f64 {
        (1.0 - self.power_step * sum_y) / self.base_power
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverStats {
    pub newton_steps: usize,
    pub barrier_rounds: usize,
    /// Final barrier weight.
    pub barrier: f64,
    /// Number of inequality constraints times the barrier weight, which bounds the
    /// distance of the objective to the relaxation optimum.
    pub duality_gap: f64,
    /// Newton decrement `lambda^2 / 2` at the last centering step.
    pub decrement: f64,
    /// Centering stopped making progress at working precision; the bound comes
    /// from the last completed round.
    pub stalled: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationSolution {
    pub y: Vec<f64>,
    pub t: f64,
    /// `u(y)`, the value of the eliminated auxiliary variable.
    pub w: f64,
    pub x_frac: Vec<f64>,
    /// Fractional objective at `x_frac`: a lower bound on the relaxation optimum.
    pub ee_rel: f64,
    /// Certified upper bound on the relaxation optimum.
    pub ee_upper: f64,
    pub stats: SolverStats,
}

impl RelaxationSolution {
    fn from_fraction(prob: &RelaxationProblem, x: Vec<f64>, upper: Option<f64>, stats: SolverStats) -> Self {
        let t = 1.0 / prob.total_power(&x);
        let y: Vec<f64> = x.iter().map(|v| v * t).collect();
        let ee_rel = prob.fractional_objective(&x);
        Self {
            w: prob.u(&y),
            y,
            t,
            ee_rel,
            ee_upper: upper.unwrap_or(ee_rel).max(ee_rel),
            x_frac: x,
            stats,
        }
    }
}

/// Cholesky factor of `a`, with a growing diagonal shift if rounding has made
/// the matrix numerically indefinite.
fn factor(a: DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    if let Some(c) = a.clone().cholesky() {
        return Some(c);
    }
    let scale = a.diagonal().amax();
    let mut shift = 1e-14 * scale;
    while shift <= 1e-8 * scale {
        let mut b = a.clone();
        for i in 0..b.nrows() {
            b[(i, i)] += shift;
        }
        if let Some(c) = b.cholesky() {
            return Some(c);
        }
        shift *= 10.0;
    }
    None
}

/// Iterate of the barrier method: `v = (y, z)` with one `z` per kept pair.
struct Barrier<'a> {
    prob: &'a RelaxationProblem,
    l: usize,
    /// `B / A`: the decrease of `t` per unit of `sum y`.
    beta: f64,
}

/// Slack values of all constraints at a point.
struct Slacks {
    lower: Vec<f64>,
    upper: Vec<f64>,
    pair_n: Vec<f64>,
    pair_m: Vec<f64>,
    snr: f64,
    t: f64,
    u: f64,
}

impl Slacks {
    fn all_positive(&self) -> bool {
        self.snr > 0.0
            && self.t > 0.0
            && [&self.lower, &self.upper, &self.pair_n, &self.pair_m]
                .iter()
                .all(|s| s.iter().all(|v| *v > 0.0))
    }

    fn log_sum(&self) -> f64 {
        let s = |v: &Vec<f64>| v.iter().map(|x| x.ln()).sum::<f64>();
        s(&self.lower) + s(&self.upper) + s(&self.pair_n) + s(&self.pair_m) + self.snr.ln()
    }
}

impl<'a> Barrier<'a> {
    fn new(prob: &'a RelaxationProblem) -> Self {
        Self {
            prob,
            l: prob.elements(),
            beta: prob.power_step / prob.base_power,
        }
    }

    fn constraints(&self) -> usize {
        2 * self.l + 2 * self.prob.pairs.len() + 1
    }

    /// Slacks at `v`. `t` and `u` are accumulated in double-double precision:
    /// near the bounds `t - y_l` and the SNR slack are tiny differences of
    /// O(1) numbers, and a rounded `t` would shift all of them by the same error.
    fn slacks(&self, v: &[f64]) -> Slacks {
        let (y, z) = v.split_at(self.l);
        let sum = y.iter().fold(Dd::ZERO, |acc, &yl| acc.add_f64(yl));
        let t = Dd::from(1.0)
            .add(sum.mul_f64(-self.prob.power_step))
            .div_f64(self.prob.base_power);
        let u = self.u_dd(v);
        Slacks {
            lower: y.to_vec(),
            upper: y.iter().map(|&yl| t.sub_f64(yl)).collect(),
            pair_n: self.prob.pairs.iter().zip(z).map(|(&(n, _, _), zp)| y[n] - zp).collect(),
            pair_m: self.prob.pairs.iter().zip(z).map(|(&(_, m, _), zp)| y[m] - zp).collect(),
            snr: u.add(t.mul_f64(-self.prob.floor)).to_f64(),
            t: t.to_f64(),
            u: u.to_f64(),
        }
    }

    fn u_dd(&self, v: &[f64]) -> Dd {
        let (y, z) = v.split_at(self.l);
        let lin = self
            .prob
            .linear
            .iter()
            .zip(y)
            .fold(Dd::ZERO, |acc, (&a, &b)| acc.add(Dd::prod(a, b)));
        self.prob
            .pairs
            .iter()
            .zip(z)
            .fold(lin, |acc, (&(_, _, mu), &zp)| acc.add(Dd::prod(mu, zp)))
    }

    /// `u` with the epigraph variables in place of the min terms.
    fn u_lin(&self, v: &[f64]) -> f64 {
        let (y, z) = v.split_at(self.l);
        let lin: f64 = self.prob.linear.iter().zip(y).map(|(a, b)| a * b).sum();
        let pair: f64 = self.prob.pairs.iter().zip(z).map(|(&(_, _, mu), zp)| mu * zp).sum();
        lin + pair
    }

    /// `t log2(c + u / t)`.
    fn objective(&self, s: &Slacks) -> f64 {
        s.t * (self.prob.offset + s.u / s.t).ln() / LN_2
    }

    fn merit(&self, s: &Slacks, barrier: f64) -> f64 {
        -self.objective(s) - barrier * s.log_sum()
    }

    /// Newton step for the barrier function at `v`. Returns `(step, lambda^2)`.
    fn newton_step(&self, v: &[f64], s: &Slacks, barrier: f64) -> Result<(Vec<f64>, f64)> {
        let l = self.l;
        let np = self.prob.pairs.len();
        let n = l + np;
        let beta = self.beta;
        let c = self.prob.offset;
        let r = s.u / s.t;
        let dpsi = 1.0 / ((c + r) * LN_2);
        let psi = (c + r).ln() / LN_2;
        let ddpsi = -dpsi / (c + r);

        // grad u, grad t (t only depends on y)
        let mut grad_u = vec![0.0; n];
        grad_u[..l].copy_from_slice(&self.prob.linear);
        for (k, &(_, _, mu)) in self.prob.pairs.iter().enumerate() {
            grad_u[l + k] = mu;
        }
        let dt = -beta;

        // gradient of the barrier function
        let mut grad = vec![0.0; n];
        let dfdt = psi - r * dpsi;
        for i in 0..l {
            grad[i] = -(dpsi * grad_u[i] + dfdt * dt);
        }
        for k in 0..np {
            grad[l + k] = -dpsi * grad_u[l + k];
        }
        let mut sum_upper_inv = 0.0;
        for i in 0..l {
            grad[i] -= barrier / s.lower[i];
            grad[i] += barrier / s.upper[i];
            sum_upper_inv += 1.0 / s.upper[i];
        }
        for g in grad[..l].iter_mut() {
            *g += barrier * beta * sum_upper_inv;
        }
        let mut q_snr = grad_u.clone();
        for qi in q_snr[..l].iter_mut() {
            *qi -= self.prob.floor * dt;
        }
        for (k, &(pn, pm, _)) in self.prob.pairs.iter().enumerate() {
            let a1 = barrier / s.pair_n[k];
            let a2 = barrier / s.pair_m[k];
            grad[pn] -= a1;
            grad[pm] -= a2;
            grad[l + k] += a1 + a2;
        }
        for (g, q) in grad.iter_mut().zip(&q_snr) {
            *g -= barrier * q / s.snr;
        }

        // Hessian = K + rho_obj q q^T + rho_snr q_snr q_snr^T with K block structured
        let mut q_obj = grad_u;
        for qi in q_obj[..l].iter_mut() {
            *qi -= r * dt;
        }
        let rho_obj = -ddpsi / s.t;
        let rho_snr = barrier / (s.snr * s.snr);

        let w_upper: Vec<f64> = s.upper.iter().map(|v| barrier / (v * v)).collect();
        let w_sum: f64 = w_upper.iter().sum();
        let mut schur = DMatrix::<f64>::zeros(l, l);
        for i in 0..l {
            for j in 0..l {
                schur[(i, j)] = beta * (w_upper[i] + w_upper[j]) + beta * beta * w_sum;
            }
            schur[(i, i)] += w_upper[i] + barrier / (s.lower[i] * s.lower[i]);
        }
        let mut zdiag = vec![0.0; np];
        let mut w1s = vec![0.0; np];
        let mut w2s = vec![0.0; np];
        for (k, &(pn, pm, _)) in self.prob.pairs.iter().enumerate() {
            let w1 = barrier / (s.pair_n[k] * s.pair_n[k]);
            let w2 = barrier / (s.pair_m[k] * s.pair_m[k]);
            let d = w1 + w2;
            let h = w1 * w2 / d;
            schur[(pn, pn)] += h;
            schur[(pm, pm)] += h;
            schur[(pn, pm)] -= h;
            schur[(pm, pn)] -= h;
            zdiag[k] = d;
            w1s[k] = w1;
            w2s[k] = w2;
        }
        let chol = factor(schur).ok_or_else(|| self.failure(v, 0, f64::NAN, barrier))?;
        let pairs = &self.prob.pairs;
        let solve_k = |rhs: &[f64]| -> Vec<f64> {
            let mut ry = DVector::from_column_slice(&rhs[..l]);
            for (k, &(pn, pm, _)) in pairs.iter().enumerate() {
                let rz = rhs[l + k] / zdiag[k];
                ry[pn] += w1s[k] * rz;
                ry[pm] += w2s[k] * rz;
            }
            let xy = chol.solve(&ry);
            let mut out = vec![0.0; n];
            out[..l].copy_from_slice(xy.as_slice());
            for (k, &(pn, pm, _)) in pairs.iter().enumerate() {
                out[l + k] = (rhs[l + k] + w1s[k] * xy[pn] + w2s[k] * xy[pm]) / zdiag[k];
            }
            out
        };
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

        let kg = solve_k(&grad);
        let kq = solve_k(&q_obj);
        let ks = solve_k(&q_snr);
        // push-through: (K + U C U^T)^-1 g = K^-1 g - K^-1 U (I + C U^T K^-1 U)^-1 C U^T K^-1 g
        let m11 = 1.0 + rho_obj * dot(&q_obj, &kq);
        let m12 = rho_obj * dot(&q_obj, &ks);
        let m21 = rho_snr * dot(&q_snr, &kq);
        let m22 = 1.0 + rho_snr * dot(&q_snr, &ks);
        let b1 = rho_obj * dot(&q_obj, &kg);
        let b2 = rho_snr * dot(&q_snr, &kg);
        let det = m11 * m22 - m12 * m21;
        let c1 = (b1 * m22 - b2 * m12) / det;
        let c2 = (m11 * b2 - m21 * b1) / det;
        let step: Vec<f64> = (0..n).map(|i| -(kg[i] - c1 * kq[i] - c2 * ks[i])).collect();
        let lambda_sq = -dot(&grad, &step);
        Ok((step, lambda_sq))
    }

    /// Largest `alpha` keeping every slack positive along `v + alpha d`.
    fn max_step(&self, s: &Slacks, d: &[f64]) -> f64 {
        let (dy, dz) = d.split_at(self.l);
        let dt = -self.beta * dy.iter().sum::<f64>();
        let mut alpha = f64::INFINITY;
        let mut limit = |slack: f64, rate: f64| {
            if rate < 0.0 {
                alpha = alpha.min(-slack / rate);
            }
        };
        for i in 0..self.l {
            limit(s.lower[i], dy[i]);
            limit(s.upper[i], dt - dy[i]);
        }
        for (k, &(pn, pm, _)) in self.prob.pairs.iter().enumerate() {
            limit(s.pair_n[k], dy[pn] - dz[k]);
            limit(s.pair_m[k], dy[pm] - dz[k]);
        }
        let du = self.u_lin(d);
        limit(s.snr, du - self.prob.floor * dt);
        alpha
    }

    fn fraction(&self, v: &[f64]) -> Vec<f64> {
        let y = &v[..self.l];
        let t = self.prob.t_of(y.iter().sum());
        y.iter().map(|yl| yl / t).collect()
    }

    fn failure(&self, v: &[f64], iterations: usize, decrement: f64, barrier: f64) -> Error {
        Error::SolverFailed {
            iterations,
            gap: self.constraints() as f64 * barrier,
            decrement,
            last_x: self.fraction(v),
        }
    }

    /// Strictly feasible point `x = theta 1`, `z = (1 - eta) min(y_n, y_m)`, or
    /// `None` if no interior point was found along that ray.
    fn start(&self) -> Option<Vec<f64>> {
        let mut eta = 0.5;
        while eta > 1e-12 {
            let theta = 1.0 - eta;
            let t = 1.0 / (self.prob.base_power + self.prob.power_step * self.l as f64 * theta);
            let mut v = vec![theta * t; self.l];
            v.extend(std::iter::repeat_n((1.0 - eta) * theta * t, self.prob.pairs.len()));
            if self.slacks(&v).all_positive() {
                return Some(v);
            }
            eta *= 0.5;
        }
        None
    }
}

/// Solve the relaxation to relative accuracy `tol` on the certified gap.
pub fn solve_relaxation(prob: &RelaxationProblem, tol: f64) -> Result<RelaxationSolution> {
    let l = prob.elements();
    let ones = vec![1.0; l];
    let idle = SolverStats {
        newton_steps: 0,
        barrier_rounds: 0,
        barrier: 0.0,
        duality_gap: 0.0,
        decrement: 0.0,
        stalled: false,
    };
    if l == 0 {
        return Ok(RelaxationSolution::from_fraction(prob, ones, None, idle));
    }
    let solver = Barrier::new(prob);
    let Some(mut v) = solver.start() else {
        // only (nearly) the all-on vector meets the floor
        let snr = prob.upper_bound_snr(&ones);
        if snr >= prob.gamma_min * (1.0 - 1e-9) {
            return Ok(RelaxationSolution::from_fraction(prob, ones, None, idle));
        }
        return Err(Error::Infeasible("relaxation has no feasible point".into()));
    };

    let m = solver.constraints() as f64;
    let mut barrier = INITIAL_BARRIER;
    let mut steps = 0usize;
    let mut rounds = 0usize;
    let mut slacks = solver.slacks(&v);
    let mut decrement;
    // objective and barrier weight of the last completed centering round
    let mut centered: Option<(f64, f64)> = None;
    loop {
        rounds += 1;
        // centering
        loop {
            let (d, lambda_sq) = match solver.newton_step(&v, &slacks, barrier) {
                Ok(step) => step,
                Err(e) => match centered {
                    Some(c) => return Ok(stalled(&solver, &v, c, steps, rounds, f64::NAN)),
                    None => return Err(e),
                },
            };
            decrement = lambda_sq / 2.0;
            let scale = solver.objective(&slacks).abs().max(1.0);
            if decrement <= NEWTON_TOLERANCE * scale {
                break;
            }
            steps += 1;
            if steps > MAX_NEWTON_STEPS {
                return Err(solver.failure(&v, steps, decrement, barrier));
            }
            let mut alpha = (0.99 * solver.max_step(&slacks, &d)).min(1.0);
            let current = solver.merit(&slacks, barrier);
            let accepted = loop {
                let trial: Vec<f64> = v.iter().zip(&d).map(|(a, b)| a + alpha * b).collect();
                let ts = solver.slacks(&trial);
                if ts.all_positive() && solver.merit(&ts, barrier) <= current - 0.25 * alpha * lambda_sq {
                    break Some((trial, ts));
                }
                alpha *= 0.5;
                if alpha < 1e-14 {
                    break None;
                }
            };
            match accepted {
                Some((trial, ts)) => {
                    v = trial;
                    slacks = ts;
                }
                // no further progress at working precision
                None if decrement <= 1e-6 * scale => break,
                None => match centered {
                    // the previous center still certifies a bound
                    Some(c) => return Ok(stalled(&solver, &v, c, steps, rounds, decrement)),
                    None => return Err(solver.failure(&v, steps, decrement, barrier)),
                },
            }
        }
        let objective = solver.objective(&slacks);
        if m * barrier <= tol * objective.abs().max(1.0) {
            let stats = SolverStats {
                newton_steps: steps,
                barrier_rounds: rounds,
                barrier,
                duality_gap: m * barrier,
                decrement,
                stalled: false,
            };
            let x = solver.fraction(&v);
            return Ok(RelaxationSolution::from_fraction(prob, x, Some(objective + m * barrier), stats));
        }
        centered = Some((objective, barrier));
        barrier /= BARRIER_DECREASE;
    }
}

/// Result at `v` when centering cannot continue, bounded through the last
/// completed center `(objective, barrier)`.
fn stalled(
    solver: &Barrier,
    v: &[f64],
    center: (f64, f64),
    steps: usize,
    rounds: usize,
    decrement: f64,
) -> RelaxationSolution {
    let (objective, weight) = center;
    let gap = solver.constraints() as f64 * weight;
    let stats = SolverStats {
        newton_steps: steps,
        barrier_rounds: rounds,
        barrier: weight,
        duality_gap: gap,
        decrement,
        stalled: true,
    };
    RelaxationSolution::from_fraction(solver.prob, solver.fraction(v), Some(objective + gap), stats)
}

/// Sorted successive activation of the fractional solution: activate the
/// largest entries of `x_frac` one at a time and keep the best feasible prefix.
pub fn round_and_select(rel: &RelaxationSolution, problem: &RobustProblem) -> Result<Solution> {
    problem.link.check_assumptions(problem.delta)?;
    let l = problem.elements();
    if rel.x_frac.len() != l {
        return Err(crate::error::invalid("relaxation solution has the wrong length"));
    }
    let order = descending_order(&rel.x_frac);
    let ch = problem.link.channel();
    let a = ch.element_magnitudes();
    let eps = &problem.link.phases().errors;
    let gamma_bar = problem.link.gamma_bar();
    let pm = &problem.power;
    let step = pm.on_w - pm.off_w;

    let a0 = ch.direct_magnitude();
    let base_power = pm.fixed() + l as f64 * pm.off_w;
    let sums = order.iter().scan((a0, 0.0, base_power), |acc, &i| {
        acc.0 += a[i] * eps[i].cos();
        acc.1 += a[i] * eps[i].sin();
        acc.2 += step;
        Some(*acc)
    });
    let running = std::iter::once((a0, 0.0, base_power)).chain(sums).enumerate().map(|(m, (re, im, power))| {
        let f = (re * re + im * im).sqrt();
        let d = f - problem.delta * ((1 + m) as f64).sqrt();
        (gamma_bar * d * d, power)
    });
    let Some((ee, x)) = best_prefix(problem, &order, running) else {
        return Ok(Solution::infeasible());
    };
    let m_max = x.count_on();
    Ok(Solution {
        status: SolveStatus::Feasible,
        ee: Efficiency::Finite(ee),
        m_star: m_max,
        x: Some(x),
        gap_bound: rel.ee_upper - ee,
        ee_upper: Some(rel.ee_upper),
    })
}

pub fn solve_crbm(problem: &RobustProblem) -> Result<Solution> {
    solve_crbm_with_tolerance(problem, DEFAULT_TOLERANCE)
}

pub fn solve_crbm_with_tolerance(problem: &RobustProblem, tol: f64) -> Result<Solution> {
    if !problem.feasibility()?.feasible {
        return Ok(Solution::infeasible());
    }
    let prob = build_relaxation(problem)?;
    let rel = solve_relaxation(&prob, tol)?;
    round_and_select(&rel, problem)
}

/// Unevaluated sum `hi + lo` of two doubles (about 32 significant digits).
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        Dd { hi: p, lo: a.mul_add(b, -p) }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        quick_two_sum(s, e + self.lo + o.lo)
    }

    fn add_f64(self, x: f64) -> Dd {
        let (s, e) = two_sum(self.hi, x);
        quick_two_sum(s, e + self.lo)
    }

    fn mul_f64(self, x: f64) -> Dd {
        let p = Dd::prod(self.hi, x);
        quick_two_sum(p.hi, p.lo + self.lo * x)
    }

    fn div_f64(self, x: f64) -> Dd {
        let q1 = self.hi / x;
        let r = self.add(Dd::prod(q1, x).mul_f64(-1.0));
        quick_two_sum(q1, r.hi / x)
    }

    /// `self - x` rounded to a double.
    fn sub_f64(self, x: f64) -> f64 {
        let (s, e) = two_sum(self.hi, -x);
        s + (e + self.lo)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelEstimate;
    use crate::phase::PhaseResolution;
    use crate::worst_case::{ActivationVector, LinkModel, PowerModel};

    fn problem(mags: Vec<f64>, phases: Vec<f64>, bits: u32, delta: f64, gamma_min: f64, on_w: f64) -> RobustProblem {
        let ch = ChannelEstimate::from_polar(mags, phases).unwrap();
        let link = LinkModel::new(ch, PhaseResolution::Bits(bits), 1.0).unwrap();
        let pm = PowerModel::new(0.04, 0.8, 0.01, on_w, 0.3e-3).unwrap();
        RobustProblem::new(link, delta, gamma_min, pm).unwrap()
    }

    fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let a = hi - g * (hi - lo);
            let b = lo + g * (hi - lo);
            if f(a) < f(b) {
                lo = a;
            } else {
                hi = b;
            }
        }
        f(0.5 * (lo + hi))
    }

    #[test]
    fn zero_radius_keeps_coefficients() {
        let p = problem(vec![1.0, 0.5, 0.7], vec![0.0, 0.3, 2.0], 3, 0.0, 0.0, 15e-3);
        let rel = build_relaxation(&p).unwrap();
        assert_eq!(rel.coeffs().xi, 1.0);
        assert_eq!(rel.coeffs().zeta_prime, rel.coeffs().zeta);
    }

    #[test]
    fn single_element_matches_line_search() {
        let p = problem(vec![1.0, 0.8], vec![0.2, 1.3], 4, 0.3, 0.5, 40e-3);
        let rel = build_relaxation(&p).unwrap();
        let sol = solve_relaxation(&rel, DEFAULT_TOLERANCE).unwrap();
        let snr_ok = |x: f64| rel.upper_bound_snr(&[x]) >= rel.gamma_min();
        let best = golden_section(
            |x| if snr_ok(x) { rel.fractional_objective(&[x]) } else { f64::NEG_INFINITY },
            0.0,
            1.0,
        );
        assert!((sol.ee_rel - best).abs() <= 1e-6 * best, "{} vs {best}", sol.ee_rel);
        assert!(sol.ee_upper >= best);
    }

    #[test]
    fn flat_power_fills_the_box() {
        let p = problem(vec![1.0, 0.5, 0.7, 0.6], vec![0.0, 0.1, 0.2, 0.3], 3, 0.2, 0.0, 0.3e-3);
        let rel = build_relaxation(&p).unwrap();
        let sol = solve_relaxation(&rel, DEFAULT_TOLERANCE).unwrap();
        assert!(sol.x_frac.iter().all(|x| *x > 1.0 - 1e-6), "{:?}", sol.x_frac);
        let crbm = solve_crbm(&p).unwrap();
        assert_eq!(crbm.x.unwrap(), ActivationVector::ones(3));
    }

    #[test]
    fn objective_forms_agree() {
        let p = problem(vec![1.0, 0.5, 0.7, 0.6], vec![0.0, 1.1, 2.2, 3.3], 2, 0.4, 0.1, 20e-3);
        let rel = build_relaxation(&p).unwrap();
        let sol = solve_relaxation(&rel, DEFAULT_TOLERANCE).unwrap();
        let cc = rel.charnes_cooper_objective(sol.t, sol.w);
        assert!((cc - sol.ee_rel).abs() <= 1e-10 * sol.ee_rel);
        assert!((sol.t * rel.total_power(&sol.x_frac) - 1.0).abs() < 1e-12);
        assert!(sol.y.iter().all(|y| *y >= 0.0 && *y <= sol.t));
        assert!(rel.upper_bound_snr(&sol.x_frac) >= rel.gamma_min());
    }

    #[test]
    fn infeasible_floor_short_circuits() {
        let p = problem(vec![1.0, 0.5], vec![0.0, 0.4], 3, 0.1, 100.0, 15e-3);
        assert!(!solve_crbm(&p).unwrap().is_feasible());
        assert!(matches!(build_relaxation(&p), Err(Error::Infeasible(_))));
    }
}
