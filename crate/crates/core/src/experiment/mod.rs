//! Monte-Carlo experiments: random instances drawn from the reference
//! scenario, solver dispatch with timing, sweeps, single-instance reports and
//! the oracle cross-check suites.

mod config;
mod report;
mod sweep;
mod verify;

pub use config::{parse_values, Axis, ExperimentConfig, SystemParams};
pub use report::{solve_single, SingleReport};
pub use sweep::{run_sweep, write_csv, SweepRecord, CSV_HEADER};
pub use verify::{verify, CheckOutcome, Suite, VerifyReport};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::channel::{sample_channel, FadingParams, ScenarioGeometry};
use crate::crbm::solve_crbm;
use crate::dp::solve_dp;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::oracles::exhaustive_search;
use crate::phase::PhaseResolution;
use crate::seed;
use crate::solution::{SolveStatus, Solution};
use crate::worst_case::{dbm_to_watts, ActivationVector, Efficiency, LinkModel, PowerModel, RobustProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Continuous,
    Discrete,
}

impl Mode {
    pub fn code(&self) -> &'static str {
        match self {
            Mode::Continuous => "c",
            Mode::Discrete => "d",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c" | "continuous" => Ok(Mode::Continuous),
            "d" | "discrete" => Ok(Mode::Discrete),
            other => Err(Error::Config(format!("unknown mode {other:?} (expected c or d)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dp,
    Crbm,
    Exhaustive,
    AllOn,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Dp => "dp",
            Algorithm::Crbm => "crbm",
            Algorithm::Exhaustive => "exhaustive",
            Algorithm::AllOn => "all_on",
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<Algorithm>> {
        let algos = s
            .split(',')
            .map(str::trim)
            .filter(|a| !a.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        if algos.is_empty() {
            return Err(Error::Config("empty algorithm list".into()));
        }
        Ok(algos)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dp" => Ok(Algorithm::Dp),
            "crbm" => Ok(Algorithm::Crbm),
            "exhaustive" => Ok(Algorithm::Exhaustive),
            "all_on" | "all-on" => Ok(Algorithm::AllOn),
            other => Err(Error::Config(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Everything needed to draw one random problem instance.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub geometry: ScenarioGeometry,
    pub fading: FadingParams,
    pub system: SystemParams,
}

/// Parameters of one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSpec {
    pub elements: usize,
    pub mode: Mode,
    pub bits: u32,
    pub tau: f64,
    pub nu: f64,
    pub power_dbm: f64,
}

impl Scenario {
    pub fn reference() -> Self {
        Self::new(SystemParams::default()).expect("reference scenario is valid")
    }

    pub fn new(system: SystemParams) -> Result<Self> {
        let geometry = ScenarioGeometry::reference();
        let fading = FadingParams::reference(&geometry)?.with_rician_db(system.rician_db, system.rician_db);
        Ok(Self {
            geometry,
            fading,
            system,
        })
    }

    /// Channel seed for a trial. Depends only on the base seed, the trial index
    /// and the element count, so rows that differ in tau, nu, power or bits see
    /// the same channels.
    pub fn channel_seed(base: u64, trial: u64, elements: usize) -> u64 {
        seed::derive(base, &[trial, elements as u64])
    }

    pub fn power_model(&self, spec: &TrialSpec) -> Result<PowerModel> {
        let s = &self.system;
        let on_w = match spec.mode {
            Mode::Continuous => s.on_mw * 1e-3,
            Mode::Discrete => PowerModel::on_power_for_bits(spec.bits),
        };
        PowerModel::new(
            dbm_to_watts(spec.power_dbm),
            s.amplifier_efficiency,
            s.static_mw * 1e-3,
            on_w,
            s.off_mw * 1e-3,
        )
    }

    /// Draw the channel and build the robust problem with
    /// `delta = tau * alpha_min` and `gamma_min = nu * gamma_worst(1; alpha_min)`.
    pub fn instance(&self, spec: &TrialSpec, channel_seed: u64) -> Result<RobustProblem> {
        let betas = vec![self.system.reflection; spec.elements];
        let ch = sample_channel(&self.geometry, &self.fading, spec.elements, &betas, channel_seed)?;
        let resolution = match spec.mode {
            Mode::Continuous => PhaseResolution::Continuous,
            Mode::Discrete => PhaseResolution::Bits(spec.bits),
        };
        let gamma_bar = dbm_to_watts(spec.power_dbm) / dbm_to_watts(self.system.noise_dbm);
        let link = LinkModel::new(ch, resolution, gamma_bar)?;
        let alpha_min = link.channel().alpha_min();
        let all_on = ActivationVector::ones(spec.elements);
        let gamma_min = spec.nu * link.worst_case_snr(&all_on, alpha_min)?;
        let delta = spec.tau * alpha_min;
        RobustProblem::new(link, delta, gamma_min, self.power_model(spec)?)
    }
}

/// The all-on baseline.
pub fn all_on(problem: &RobustProblem) -> Solution {
    let x = ActivationVector::ones(problem.elements());
    match problem.objective(&x) {
        Efficiency::NegInfinity => Solution::infeasible(),
        ee => Solution {
            status: SolveStatus::Feasible,
            ee,
            m_star: x.len(),
            x: Some(x),
            gap_bound: 0.0,
            ee_upper: None,
        },
    }
}

pub fn run_algorithm(algorithm: Algorithm, problem: &RobustProblem, exec: Execution) -> Result<Solution> {
    match algorithm {
        Algorithm::Dp => solve_dp(problem),
        Algorithm::Crbm => solve_crbm(problem),
        Algorithm::Exhaustive => exhaustive_search(problem, exec),
        Algorithm::AllOn => Ok(all_on(problem)),
    }
}

/// Run a solver and measure its wall time. Runs faster than a millisecond are
/// repeated and the median of five is reported.
pub fn timed<F>(mut f: F) -> (Result<Solution>, f64)
where
    F: FnMut() -> Result<Solution>,
{
    let start = Instant::now();
    let out = f();
    let first = start.elapsed().as_secs_f64();
    if first >= 1e-3 || out.is_err() {
        return (out, first);
    }
    let mut times = vec![first];
    for _ in 0..4 {
        let start = Instant::now();
        let _ = f();
        times.push(start.elapsed().as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    (out, times[2])
}
