//! Continuous IRS phase alignment and its uniform b-bit quantization.
//!
//! Two quantizers are provided. [`quantize_closed_form`] rounds `phi / omega`
//! and reduces modulo `K = 2^b`; [`quantize_decision_regions`] scans the `K`
//! half-open decision regions one by one. They are required to agree on the
//! level index for every input in `[0, 2pi)`.

use std::f64::consts::{PI, TAU};

use crate::channel::ChannelEstimate;
use crate::error::{invalid, Result};

/// Largest supported resolution. Level indices are held in a `u64` and the
/// region scan is `O(2^b)`.
pub const MAX_BITS: u32 = 32;

/// Reduce an angle to `[0, 2pi)`.
pub fn wrap_two_pi(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can return exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduce an angle to `(-pi, pi]`.
pub fn wrap_pi(x: f64) -> f64 {
    let r = wrap_two_pi(x);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseResolution {
    Continuous,
    Bits(u32),
}

impl PhaseResolution {
    pub fn bits(&self) -> Option<u32> {
        match self {
            PhaseResolution::Continuous => None,
            PhaseResolution::Bits(b) => Some(*b),
        }
    }
}

/// Uniform grid `{0, omega, .., (K - 1) omega}` with `K = 2^b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGrid {
    bits: u32,
    levels: u64,
    step: f64,
}

impl PhaseGrid {
    pub fn new(bits: u32) -> Result<Self> {
        if !(1..=MAX_BITS).contains(&bits) {
            return Err(invalid(format!(
                "quantization bits must lie in 1..={MAX_BITS}, got {bits}"
            )));
        }
        let levels = 1u64 << bits;
        Ok(Self {
            bits,
            levels,
            step: TAU / levels as f64,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `K = 2^b`.
    pub fn levels(&self) -> u64 {
        self.levels
    }

    /// `omega = 2pi / K`.
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn phase(&self, index: u64) -> f64 {
        index as f64 * self.step
    }

    /// Level index by the closed form `round(phi / omega) mod K`.
    pub fn index_closed_form(&self, phase: f64) -> u64 {
        let r = phase / self.step;
        // round(r) = floor(r + 1/2), evaluated as floor(r) + [frac(r) >= 1/2]
        // because forming r + 0.5 rounds up for r just below one half.
        let whole = r.floor();
        let rounded = if r - whole >= 0.5 { whole + 1.0 } else { whole };
        (rounded as u64) % self.levels
    }

    /// Level index by inspecting the decision regions in order:
    /// `R_0 = [0, omega/2) u [2pi - omega/2, 2pi)` and
    /// `R_k = [k omega - omega/2, k omega + omega/2)`, all in units of omega.
    pub fn index_by_regions(&self, phase: f64) -> u64 {
        let r = phase / self.step;
        let top = self.levels as f64;
        if r < 0.5 || (r >= top - 0.5 && r < top) {
            return 0;
        }
        for k in 1..self.levels {
            let centre = k as f64;
            if r >= centre - 0.5 && r < centre + 0.5 {
                return k;
            }
        }
        unreachable!("phase {phase} outside [0, 2pi)")
    }
}

fn check_phases(phases: &[f64]) -> Result<()> {
    match phases.iter().find(|p| !(0.0..TAU).contains(*p)) {
        Some(p) => Err(invalid(format!("phase {p} outside [0, 2pi)"))),
        None => Ok(()),
    }
}

/// `phi*_l = (theta_0 - theta_l) mod 2pi`: aligns every cascaded path with the direct link.
pub fn optimal_continuous_phases(ch: &ChannelEstimate) -> Vec<f64> {
    let theta0 = ch.direct_phase();
    ch.element_phases()
        .iter()
        .map(|t| wrap_two_pi(theta0 - t))
        .collect()
}

pub fn quantize_indices_closed_form(phases: &[f64], bits: u32) -> Result<Vec<u64>> {
    let grid = PhaseGrid::new(bits)?;
    check_phases(phases)?;
    Ok(phases.iter().map(|&p| grid.index_closed_form(p)).collect())
}

pub fn quantize_indices_by_regions(phases: &[f64], bits: u32) -> Result<Vec<u64>> {
    let grid = PhaseGrid::new(bits)?;
    check_phases(phases)?;
    Ok(phases.iter().map(|&p| grid.index_by_regions(p)).collect())
}

pub fn quantize_closed_form(phases: &[f64], bits: u32) -> Result<Vec<f64>> {
    let grid = PhaseGrid::new(bits)?;
    Ok(quantize_indices_closed_form(phases, bits)?
        .into_iter()
        .map(|k| grid.phase(k))
        .collect())
}

pub fn quantize_decision_regions(phases: &[f64], bits: u32) -> Result<Vec<f64>> {
    let grid = PhaseGrid::new(bits)?;
    Ok(quantize_indices_by_regions(phases, bits)?
        .into_iter()
        .map(|k| grid.phase(k))
        .collect())
}

/// `eps_l = phi^d_l - phi*_l`, wrapped into `(-pi, pi]`; for grid-quantized
/// inputs this lands in `(-omega/2, omega/2]`.
pub fn quantization_errors(continuous: &[f64], discrete: &[f64]) -> Result<Vec<f64>> {
    if continuous.len() != discrete.len() {
        return Err(invalid("continuous and discrete phase arrays differ in length"));
    }
    Ok(continuous
        .iter()
        .zip(discrete)
        .map(|(c, d)| wrap_pi(d - c))
        .collect())
}

/// The phase configuration applied by the IRS together with its quantization errors.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftConfig {
    pub continuous: Vec<f64>,
    /// Phases actually applied; equal to `continuous` at infinite resolution.
    pub applied: Vec<f64>,
    pub errors: Vec<f64>,
    pub resolution: PhaseResolution,
}

impl PhaseShiftConfig {
    pub fn design(ch: &ChannelEstimate, resolution: PhaseResolution) -> Result<Self> {
        let continuous = optimal_continuous_phases(ch);
        match resolution {
            PhaseResolution::Continuous => Ok(Self {
                errors: vec![0.0; continuous.len()],
                applied: continuous.clone(),
                continuous,
                resolution,
            }),
            PhaseResolution::Bits(b) => {
                let applied = quantize_closed_form(&continuous, b)?;
                let errors = quantization_errors(&continuous, &applied)?;
                Ok(Self {
                    continuous,
                    applied,
                    errors,
                    resolution,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn aligned_channel_needs_no_shift() {
        let ch = ChannelEstimate::from_polar(vec![1.0, 0.5, 0.2], vec![1.1, 1.1, 1.1]).unwrap();
        assert_eq!(optimal_continuous_phases(&ch), vec![0.0, 0.0]);
    }

    #[test]
    fn continuous_phase_modulo() {
        let ch = ChannelEstimate::from_polar(vec![1.0, 0.5], vec![0.0, 1.5 * PI]).unwrap();
        let phi = optimal_continuous_phases(&ch);
        assert!((phi[0] - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn top_region_wraps_to_zero() {
        for b in 1..=12 {
            let w = TAU / (1u64 << b) as f64;
            let phi = [TAU - w / 4.0];
            assert_eq!(quantize_closed_form(&phi, b).unwrap(), vec![0.0]);
            assert_eq!(quantize_decision_regions(&phi, b).unwrap(), vec![0.0]);
        }
    }

    #[test]
    fn grid_points_are_fixed() {
        for b in 1..=10 {
            let grid = PhaseGrid::new(b).unwrap();
            let pts: Vec<f64> = (0..grid.levels()).map(|k| grid.phase(k)).collect();
            assert_eq!(quantize_closed_form(&pts, b).unwrap(), pts);
            assert_eq!(quantize_decision_regions(&pts, b).unwrap(), pts);
        }
    }

    #[test]
    fn left_endpoint_belongs_to_upper_region() {
        assert_eq!(quantize_closed_form(&[FRAC_PI_4], 2).unwrap(), vec![FRAC_PI_2]);
        assert_eq!(quantize_decision_regions(&[FRAC_PI_4], 2).unwrap(), vec![FRAC_PI_2]);
        let three_quarter = 3.0 * FRAC_PI_4;
        assert_eq!(quantize_decision_regions(&[three_quarter], 2).unwrap(), vec![PI]);
        assert_eq!(quantize_closed_form(&[three_quarter], 2).unwrap(), vec![PI]);
    }

    #[test]
    fn near_two_pi_with_three_bits() {
        let phi = [15.0 * PI / 8.0 + 1e-9];
        assert_eq!(quantize_decision_regions(&phi, 3).unwrap(), vec![0.0]);
        assert_eq!(quantize_closed_form(&phi, 3).unwrap(), vec![0.0]);
    }

    #[test]
    fn value_just_below_half_step_stays_in_region_zero() {
        let grid = PhaseGrid::new(3).unwrap();
        let below = (0.5f64).next_down() * grid.step();
        let r = below / grid.step();
        assert!(r < 0.5);
        assert_eq!(grid.index_closed_form(below), 0);
        assert_eq!(grid.index_by_regions(below), 0);
    }

    #[test]
    fn bad_inputs() {
        assert!(quantize_closed_form(&[0.1], 0).is_err());
        assert!(quantize_decision_regions(&[0.1], 0).is_err());
        assert!(quantize_closed_form(&[TAU], 2).is_err());
        assert!(quantize_closed_form(&[-0.1], 2).is_err());
        assert!(quantization_errors(&[0.0], &[]).is_err());
    }

    #[test]
    fn error_of_wrapped_value() {
        let b = 3;
        let w = TAU / 8.0;
        let c = [TAU - w / 4.0];
        let d = quantize_closed_form(&c, b).unwrap();
        let e = quantization_errors(&c, &d).unwrap();
        assert!((e[0] - w / 4.0).abs() < 1e-12);
        let grid_pts = [0.0, w, 3.0 * w];
        assert_eq!(
            quantization_errors(&grid_pts, &quantize_closed_form(&grid_pts, b).unwrap()).unwrap(),
            vec![0.0; 3]
        );
    }

    #[test]
    fn continuous_config_has_no_error() {
        let ch = ChannelEstimate::from_polar(vec![1.0, 0.5, 0.3], vec![0.2, 2.0, 5.0]).unwrap();
        let cfg = PhaseShiftConfig::design(&ch, PhaseResolution::Continuous).unwrap();
        assert_eq!(cfg.applied, cfg.continuous);
        assert!(cfg.errors.iter().all(|e| *e == 0.0));
    }

    fn phase() -> impl Strategy<Value = f64> {
        prop_oneof![
            0.0..TAU,
            // region boundaries and their float neighbours
            (1u32..=12, 0u64..4096, -2i32..=2).prop_map(|(b, k, nudge)| {
                let w = TAU / (1u64 << b) as f64;
                let mut v = ((k % (1u64 << b)) as f64 + 0.5) * w;
                for _ in 0..nudge.abs() {
                    v = if nudge > 0 { v.next_up() } else { v.next_down() };
                }
                v.clamp(0.0, TAU.next_down())
            }),
        ]
    }

    proptest! {
        #[test]
        fn quantizers_agree(p in phase(), b in 1u32..=12) {
            let grid = PhaseGrid::new(b).unwrap();
            prop_assert_eq!(grid.index_closed_form(p), grid.index_by_regions(p));
        }

        #[test]
        fn error_within_half_step(p in 0.0..TAU, b in 1u32..=12) {
            let d = quantize_closed_form(&[p], b).unwrap();
            let e = quantization_errors(&[p], &d).unwrap()[0];
            let half = PI / (1u64 << b) as f64;
            prop_assert!(e.abs() <= half * (1.0 + 1e-12));
        }

        #[test]
        fn quantization_is_idempotent(p in 0.0..TAU, b in 1u32..=12) {
            let once = quantize_closed_form(&[p], b).unwrap();
            let twice = quantize_closed_form(&once, b).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn error_bound_shrinks_with_bits(p in 0.0..TAU) {
            let mut prev_bound = f64::INFINITY;
            for b in 1..=16u32 {
                let d = quantize_closed_form(&[p], b).unwrap();
                let err = wrap_pi(d[0] - p).abs();
                let bound = PI / (1u64 << b) as f64;
                prop_assert!(err <= bound * (1.0 + 1e-12));
                prop_assert!(bound < prev_bound);
                prev_bound = bound;
            }
        }
    }
}
