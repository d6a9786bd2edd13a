use std::fmt;

use super::{run_algorithm, Algorithm, Scenario, TrialSpec};
use crate::error::Result;
use crate::exec::Execution;
use crate::solution::Solution;
use crate::worst_case::{ActivationVector, RobustProblem};

/// One solved instance with the quantities needed to audit it by hand.
#[derive(Debug, Clone)]
pub struct SingleReport {
    pub algorithm: Algorithm,
    pub spec: TrialSpec,
    pub seed: u64,
    pub gamma_bar: f64,
    pub delta: f64,
    pub gamma_min: f64,
    pub solution: Solution,
    /// `f_c(x)` or `f_d(x)` at the returned activation.
    pub amplitude: Option<f64>,
    pub worst_snr: Option<f64>,
    pub total_power_w: Option<f64>,
}

/// Draw the instance of trial 0 for `seed` and solve it.
pub fn solve_single(
    scenario: &Scenario,
    spec: &TrialSpec,
    seed: u64,
    algorithm: Algorithm,
    exec: Execution,
) -> Result<SingleReport> {
    let problem = scenario.instance(spec, Scenario::channel_seed(seed, 0, spec.elements))?;
    let solution = run_algorithm(algorithm, &problem, exec)?;
    let (amplitude, worst_snr, total_power_w) = match &solution.x {
        Some(x) => audit(&problem, x),
        None => (None, None, None),
    };
    Ok(SingleReport {
        algorithm,
        spec: *spec,
        seed,
        gamma_bar: problem.link.gamma_bar(),
        delta: problem.delta,
        gamma_min: problem.gamma_min,
        solution,
        amplitude,
        worst_snr,
        total_power_w,
    })
}

fn audit(problem: &RobustProblem, x: &ActivationVector) -> (Option<f64>, Option<f64>, Option<f64>) {
    (
        Some(problem.link.amplitude(x)),
        Some(problem.snr(x)),
        Some(problem.power.total(x)),
    )
}

fn num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.12e}")).unwrap_or_else(|| "-".into())
}

impl fmt::Display for SingleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.solution;
        let rows: Vec<(&str, String)> = vec![
            ("algorithm", self.algorithm.name().into()),
            ("mode", self.spec.mode.code().into()),
            ("bits", match self.spec.mode {
                super::Mode::Continuous => "-".into(),
                super::Mode::Discrete => self.spec.bits.to_string(),
            }),
            ("elements", self.spec.elements.to_string()),
            ("seed", self.seed.to_string()),
            ("tau", self.spec.tau.to_string()),
            ("nu", self.spec.nu.to_string()),
            ("gamma_bar", num(Some(self.gamma_bar))),
            ("delta", num(Some(self.delta))),
            ("gamma_min", num(Some(self.gamma_min))),
            ("status", s.status.as_str().into()),
            ("x", s.x.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "-".into())),
            ("active", s.m_star.to_string()),
            ("amplitude", num(self.amplitude)),
            ("worst_snr", num(self.worst_snr)),
            ("total_power_w", num(self.total_power_w)),
            ("ee", num(s.ee.value())),
            ("ee_upper", num(s.ee_upper)),
            ("gap_bound", num(s.is_feasible().then_some(s.gap_bound))),
        ];
        for (k, v) in rows {
            writeln!(f, "{k:<14}{v}")?;
        }
        Ok(())
    }
}
