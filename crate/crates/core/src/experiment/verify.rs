use rand::Rng;
use std::fmt;
use std::str::FromStr;

use super::{Mode, Scenario, TrialSpec};
use crate::crbm::solve_crbm;
use crate::dp::solve_dp;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::oracles::{exhaustive_search, sampled_worst_snr, BallSampling};
use crate::phase::PhaseGrid;
use crate::seed;
use crate::worst_case::ActivationVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Quantizer,
    WorstCase,
    Dp,
    Crbm,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quantizer" => Ok(Suite::Quantizer),
            "worstcase" => Ok(Suite::WorstCase),
            "dp" => Ok(Suite::Dp),
            "crbm" => Ok(Suite::Crbm),
            "all" => Ok(Suite::All),
            other => Err(Error::Config(format!("unknown verification suite {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, failures: usize, total: usize, note: String) {
        self.checks.push(CheckOutcome {
            name: name.into(),
            passed: failures == 0,
            detail: format!("{failures} failures in {total} cases{note}"),
        });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Run the oracle cross-checks with `instances` random cases each.
pub fn verify(suite: Suite, seed: u64, instances: u64, exec: Execution) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let scenario = Scenario::reference();
    let all = suite == Suite::All;
    if all || suite == Suite::Quantizer {
        quantizer(&mut report, seed, instances)?;
    }
    if all || suite == Suite::WorstCase {
        worst_case(&mut report, &scenario, seed, instances, exec)?;
    }
    if all || suite == Suite::Dp {
        dp(&mut report, &scenario, seed, instances, exec)?;
    }
    if all || suite == Suite::Crbm {
        crbm(&mut report, &scenario, seed, instances, exec)?;
    }
    Ok(report)
}

fn spec(elements: usize, mode: Mode, tau: f64, nu: f64) -> TrialSpec {
    TrialSpec {
        elements,
        mode,
        bits: 4,
        tau,
        nu,
        power_dbm: 15.0,
    }
}

fn quantizer(report: &mut VerifyReport, seed: u64, instances: u64) -> Result<()> {
    let phases = 100 * instances.max(1);
    let mut failures = 0;
    for bits in 1..=12 {
        let grid = PhaseGrid::new(bits)?;
        let mut rng = seed::sub_rng(seed, &[1, bits as u64]);
        for _ in 0..phases {
            let phi = rng.random_range(0.0..std::f64::consts::TAU);
            if grid.index_closed_form(phi) != grid.index_by_regions(phi) {
                failures += 1;
            }
        }
    }
    report.push("quantizer closed form = decision regions", failures, 12 * phases as usize, String::new());
    Ok(())
}

fn worst_case(report: &mut VerifyReport, scenario: &Scenario, seed: u64, instances: u64, exec: Execution) -> Result<()> {
    let mut below = 0;
    let mut attain = 0;
    let mut worst_rel = 0.0f64;
    for i in 0..instances {
        let mut rng = seed::sub_rng(seed, &[2, i]);
        let l = rng.random_range(1..=8);
        let mode = if i % 2 == 0 { Mode::Continuous } else { Mode::Discrete };
        let tau = [0.1, 0.5, 1.0][(i % 3) as usize];
        let p = scenario.instance(&spec(l, mode, tau, 0.0), seed::derive(seed, &[3, i]))?;
        let x = ActivationVector::from_bools((0..l).map(|_| rng.random_bool(0.5)).collect());
        let closed = p.snr(&x);
        let f = p.link.amplitude(&x);
        let scale = p.link.gamma_bar() * f * f;
        let opts = BallSampling {
            samples: 1000,
            seed: seed::derive(seed, &[4, i]),
            include_constructed: false,
        };
        let sampled = sampled_worst_snr(&p.link, &x, p.delta, opts, exec)?;
        if sampled < closed - 1e-9 * scale {
            below += 1;
        }
        let err = p.link.worst_case_error(&x, p.delta)?;
        let rel = (p.link.snr_with_error(&x, &err.coeffs()) - closed).abs() / scale;
        worst_rel = worst_rel.max(rel);
        if rel > 1e-9 {
            attain += 1;
        }
    }
    let n = instances as usize;
    report.push("sampled SNR >= closed-form worst case", below, n, String::new());
    report.push(
        "constructed error attains the worst case",
        attain,
        n,
        format!(", max relative deviation {worst_rel:.2e}"),
    );
    Ok(())
}

fn dp(report: &mut VerifyReport, scenario: &Scenario, seed: u64, instances: u64, exec: Execution) -> Result<()> {
    let mut failures = 0;
    for i in 0..instances {
        let l = [4, 8, 12][(i % 3) as usize];
        let tau = [0.0, 0.3, 0.6][((i / 3) % 3) as usize];
        let nu = if (i / 9) % 2 == 0 { 0.0 } else { 0.7 };
        let p = scenario.instance(&spec(l, Mode::Continuous, tau, nu), seed::derive(seed, &[5, i]))?;
        let a = solve_dp(&p)?;
        let b = exhaustive_search(&p, exec)?;
        if a.ee != b.ee {
            failures += 1;
        }
    }
    report.push("dp = exhaustive search", failures, instances as usize, String::new());
    Ok(())
}

fn crbm(report: &mut VerifyReport, scenario: &Scenario, seed: u64, instances: u64, exec: Execution) -> Result<()> {
    let mut failures = 0;
    let mut gaps = Vec::new();
    for i in 0..instances {
        let l = [4, 8, 10][(i % 3) as usize];
        let tau = [0.0, 0.3, 0.6][((i / 3) % 3) as usize];
        let nu = if (i / 9) % 2 == 0 { 0.0 } else { 0.7 };
        let p = scenario.instance(&spec(l, Mode::Discrete, tau, nu), seed::derive(seed, &[6, i]))?;
        let c = solve_crbm(&p)?;
        let e = exhaustive_search(&p, exec)?;
        match (c.ee.value(), e.ee.value(), c.ee_upper) {
            (Some(approx), Some(best), Some(upper)) if approx <= best && best <= upper => {
                gaps.push((best - approx) / best)
            }
            _ => failures += 1,
        }
    }
    gaps.sort_by(f64::total_cmp);
    let median = gaps.get(gaps.len() / 2).copied().unwrap_or(0.0);
    report.push(
        "crbm <= exhaustive <= relaxation bound",
        failures,
        instances as usize,
        format!(", median relative gap {median:.3e}"),
    );
    Ok(())
}
