#![allow(dead_code)]

use irs_ee::experiment::{Mode, Scenario, TrialSpec};
use irs_ee::worst_case::RobustProblem;

pub fn spec(elements: usize, mode: Mode, bits: u32, tau: f64, nu: f64) -> TrialSpec {
    TrialSpec {
        elements,
        mode,
        bits,
        tau,
        nu,
        power_dbm: 15.0,
    }
}

/// Random instance from the reference scenario.
pub fn instance(elements: usize, mode: Mode, bits: u32, tau: f64, nu: f64, seed: u64) -> RobustProblem {
    Scenario::reference()
        .instance(&spec(elements, mode, bits, tau, nu), seed)
        .expect("valid instance")
}

pub fn continuous(elements: usize, tau: f64, nu: f64, seed: u64) -> RobustProblem {
    instance(elements, Mode::Continuous, 4, tau, nu, seed)
}

pub fn discrete(elements: usize, bits: u32, tau: f64, nu: f64, seed: u64) -> RobustProblem {
    instance(elements, Mode::Discrete, bits, tau, nu, seed)
}
