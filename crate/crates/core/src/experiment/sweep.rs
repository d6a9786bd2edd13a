use std::io::Write;

use super::{run_algorithm, timed, Algorithm, Axis, ExperimentConfig, Mode, Scenario};
use crate::error::Result;
use crate::exec::{map_collect, Execution};

pub const CSV_HEADER: [&str; 13] = [
    "axis",
    "axis_value",
    "algorithm",
    "mode",
    "tau",
    "nu",
    "bits",
    "trials",
    "mean_ee",
    "std_ee",
    "mean_time_s",
    "feasible_rate",
    "mean_gap_bound",
];

/// Aggregate of one algorithm at one axis value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub axis: Axis,
    pub axis_value: f64,
    pub algorithm: Algorithm,
    pub mode: Mode,
    pub tau: f64,
    pub nu: f64,
    /// `None` for continuous phases.
    pub bits: Option<u32>,
    pub trials: u64,
    /// Mean and sample standard deviation of the EE over feasible trials.
    pub mean_ee: Option<f64>,
    pub std_ee: Option<f64>,
    pub mean_time_s: Option<f64>,
    pub feasible_rate: f64,
    /// Mean a-posteriori gap over feasible trials (relaxation solver only).
    pub mean_gap_bound: Option<f64>,
    /// Trials whose instance or solver returned an error.
    pub errors: u64,
    pub first_error: Option<String>,
}

#[derive(Debug, Clone)]
struct Outcome {
    ee: Option<f64>,
    gap: f64,
    time: f64,
    error: Option<String>,
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

fn sample_std(v: &[f64]) -> Option<f64> {
    let m = mean(v)?;
    if v.len() < 2 {
        return Some(0.0);
    }
    let ss: f64 = v.iter().map(|x| (x - m) * (x - m)).sum();
    Some((ss / (v.len() - 1) as f64).sqrt())
}

/// Run every (axis value, algorithm) cell of the sweep. Trials run in parallel
/// under `exec`; errors are counted per trial and do not stop the sweep.
pub fn run_sweep(cfg: &ExperimentConfig, exec: Execution) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let scenario = Scenario::new(cfg.system)?;
    let trial_ids: Vec<u64> = (0..cfg.trials).collect();
    let mut records = Vec::with_capacity(cfg.values.len() * cfg.algorithms.len());
    for &value in &cfg.values {
        let spec = cfg.spec_at(value);
        let outcomes: Vec<Vec<Outcome>> = map_collect(exec, &trial_ids, |&trial| {
            let seed = Scenario::channel_seed(cfg.seed, trial, spec.elements);
            let problem = match scenario.instance(&spec, seed) {
                Ok(p) => p,
                Err(e) => {
                    let failed = Outcome {
                        ee: None,
                        gap: 0.0,
                        time: 0.0,
                        error: Some(e.to_string()),
                    };
                    return vec![failed; cfg.algorithms.len()];
                }
            };
            cfg.algorithms
                .iter()
                .map(|&algo| {
                    let (res, time) = timed(|| run_algorithm(algo, &problem, exec));
                    match res {
                        Ok(sol) => Outcome {
                            ee: sol.ee.value(),
                            gap: sol.gap_bound,
                            time,
                            error: None,
                        },
                        Err(e) => Outcome {
                            ee: None,
                            gap: 0.0,
                            time,
                            error: Some(e.to_string()),
                        },
                    }
                })
                .collect()
        });

        for (k, &algorithm) in cfg.algorithms.iter().enumerate() {
            let cell: Vec<&Outcome> = outcomes.iter().map(|o| &o[k]).collect();
            let ees: Vec<f64> = cell.iter().filter_map(|o| o.ee).collect();
            let gaps: Vec<f64> = cell.iter().filter(|o| o.ee.is_some()).map(|o| o.gap).collect();
            let times: Vec<f64> = cell.iter().filter(|o| o.error.is_none()).map(|o| o.time).collect();
            let errors: Vec<&String> = cell.iter().filter_map(|o| o.error.as_ref()).collect();
            records.push(SweepRecord {
                axis: cfg.axis,
                axis_value: value,
                algorithm,
                mode: spec.mode,
                tau: spec.tau,
                nu: spec.nu,
                bits: (spec.mode == Mode::Discrete).then_some(spec.bits),
                trials: cfg.trials,
                mean_ee: mean(&ees),
                std_ee: sample_std(&ees),
                mean_time_s: mean(&times),
                feasible_rate: ees.len() as f64 / cfg.trials as f64,
                mean_gap_bound: if algorithm == Algorithm::Crbm { mean(&gaps) } else { None },
                errors: errors.len() as u64,
                first_error: errors.first().map(|s| s.to_string()),
            });
        }
    }
    Ok(records)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Write the records as CSV (comma separated, LF line endings). Empty cells
/// mark undefined values: no bits for continuous phases, no mean EE when no
/// trial was feasible, no gap for exact or baseline solvers.
pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.axis.name().to_string(),
            r.axis_value.to_string(),
            r.algorithm.name().to_string(),
            r.mode.code().to_string(),
            r.tau.to_string(),
            r.nu.to_string(),
            r.bits.map(|b| b.to_string()).unwrap_or_default(),
            r.trials.to_string(),
            opt(r.mean_ee),
            opt(r.std_ee),
            opt(r.mean_time_s),
            r.feasible_rate.to_string(),
            opt(r.mean_gap_bound),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statistics() {
        assert_eq!(mean(&[]), None);
        assert_eq!(sample_std(&[3.0]), Some(0.0));
        assert_eq!(sample_std(&[1.0, 3.0]), Some(2f64.sqrt()));
    }
}
