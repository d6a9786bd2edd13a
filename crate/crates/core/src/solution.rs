use crate::worst_case::{ActivationVector, Efficiency};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Globally optimal activation.
    Optimal,
    /// Feasible activation without an optimality certificate.
    Feasible,
    Infeasible,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
        }
    }
}

/// Result of an activation solver.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub status: SolveStatus,
    pub ee: Efficiency,
    /// `None` when infeasible.
    pub x: Option<ActivationVector>,
    /// Number of active elements in `x`.
    pub m_star: usize,
    /// Certified `upper bound - ee`; zero for exact solvers.
    pub gap_bound: f64,
    /// Optimal value of the relaxation, when one was solved.
    pub ee_upper: Option<f64>,
}

impl Solution {
    pub fn infeasible() -> Self {
        Self {
            status: SolveStatus::Infeasible,
            ee: Efficiency::NegInfinity,
            x: None,
            m_star: 0,
            gap_bound: 0.0,
            ee_upper: None,
        }
    }

    pub fn exact(x: ActivationVector, ee: f64) -> Self {
        Self {
            status: SolveStatus::Optimal,
            ee: Efficiency::Finite(ee),
            m_star: x.count_on(),
            x: Some(x),
            gap_bound: 0.0,
            ee_upper: None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status != SolveStatus::Infeasible
    }
}
