//! Closed-form worst-case quantities under a bounded CSI error
//! `||h_tilde||_2 <= delta`.
//!
//! With the IRS phases aligned to the estimate, the received amplitude is
//! `f_c(x) = a_0 + sum x_l a_l` (continuous phases) or
//! `f_d(x) = |a_0 + sum x_l a_l e^{j eps_l}|` (quantized phases). An adversarial
//! error of radius `delta` can remove at most `g(x; delta) = delta sqrt(1 + sum x)`
//! from it, so the worst-case SNR is `gamma_bar (f - g)^2`.

use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::channel::ChannelEstimate;
use crate::error::{invalid, Assumption, Error, Result};
use crate::phase::{wrap_two_pi, PhaseResolution, PhaseShiftConfig};

/// Binary on/off states of the `L` IRS elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActivationVector(Vec<bool>);

impl ActivationVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![true; len])
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// Accepts only 0/1 entries.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(invalid(format!("activation entries must be 0 or 1, got {other}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Element `l` is on iff bit `l` of `mask` is set.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        let mut v = Self::zeros(len);
        v.fill_from_mask(mask);
        v
    }

    pub fn fill_from_mask(&mut self, mask: u64) {
        for (i, b) in self.0.iter_mut().enumerate() {
            *b = (mask >> i) & 1 == 1;
        }
    }

    pub fn to_mask(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        Some(
            self.0
                .iter()
                .enumerate()
                .fold(0u64, |m, (i, &b)| m | ((b as u64) << i)),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_on(&self, idx: usize) -> bool {
        self.0[idx]
    }

    pub fn set(&mut self, idx: usize, on: bool) {
        self.0[idx] = on;
    }

    pub fn count_on(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    }
}

impl fmt::Display for ActivationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

fn check_len(ch: &ChannelEstimate, x: &ActivationVector) -> Result<()> {
    if ch.elements() != x.len() {
        return Err(invalid(format!(
            "activation has {} entries, channel has {} elements",
            x.len(),
            ch.elements()
        )));
    }
    Ok(())
}

/// CSI uncertainty radius `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintySpec {
    delta: f64,
}

impl UncertaintySpec {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(invalid(format!("uncertainty radius must be finite and >= 0, got {delta}")));
        }
        Ok(Self { delta })
    }

    /// `delta = tau * alpha_min` for `tau` in `[0, 1]`.
    pub fn scaled(ch: &ChannelEstimate, tau: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(invalid(format!("tau must lie in [0, 1], got {tau}")));
        }
        Self::new(tau * ch.alpha_min())
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn check(&self, ch: &ChannelEstimate) -> Result<()> {
        check_radius(ch, self.delta)
    }
}

fn check_radius(ch: &ChannelEstimate, delta: f64) -> Result<()> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(invalid(format!("uncertainty radius must be finite and >= 0, got {delta}")));
    }
    if delta > ch.alpha_min() {
        return Err(Error::AssumptionViolated {
            assumption: Assumption::RadiusBelowMinMagnitude,
            detail: format!("delta = {delta:e} exceeds min |h_hat| = {:e}", ch.alpha_min()),
        });
    }
    Ok(())
}

fn check_bits(resolution: PhaseResolution) -> Result<()> {
    match resolution {
        PhaseResolution::Bits(b) if b < 2 => Err(Error::AssumptionViolated {
            assumption: Assumption::AtLeastTwoBits,
            detail: format!("worst-case closed forms need b >= 2, got b = {b}"),
        }),
        _ => Ok(()),
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Affine power consumption `P_fix + L P_off + (P_on - P_off) sum x`, watts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModel {
    pub transmit_w: f64,
    pub amplifier_efficiency: f64,
    pub static_w: f64,
    pub on_w: f64,
    pub off_w: f64,
}

impl PowerModel {
    pub fn new(
        transmit_w: f64,
        amplifier_efficiency: f64,
        static_w: f64,
        on_w: f64,
        off_w: f64,
    ) -> Result<Self> {
        let pm = Self {
            transmit_w,
            amplifier_efficiency,
            static_w,
            on_w,
            off_w,
        };
        pm.validate()?;
        Ok(pm)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.transmit_w > 0.0) || !self.transmit_w.is_finite() {
            return Err(invalid("transmit power must be positive"));
        }
        if !(self.amplifier_efficiency > 0.0 && self.amplifier_efficiency <= 1.0) {
            return Err(invalid("amplifier efficiency must lie in (0, 1]"));
        }
        if !(self.static_w > 0.0) {
            return Err(invalid("static power must be positive"));
        }
        if !(self.off_w > 0.0 && self.off_w <= self.on_w) || !self.on_w.is_finite() {
            return Err(invalid("need 0 < P_off <= P_on"));
        }
        Ok(())
    }

    /// Per-element on-power for `b`-bit phase shifters, `1.8 b - 3` mW.
    pub fn on_power_for_bits(bits: u32) -> f64 {
        (1.8 * bits as f64 - 3.0) * 1e-3
    }

    /// `P_fix = p / eta + P_static`.
    pub fn fixed(&self) -> f64 {
        self.transmit_w / self.amplifier_efficiency + self.static_w
    }

    pub fn total_for_count(&self, elements: usize, active: usize) -> f64 {
        self.fixed() + elements as f64 * self.off_w + (self.on_w - self.off_w) * active as f64
    }

    pub fn total(&self, x: &ActivationVector) -> f64 {
        self.total_for_count(x.len(), x.count_on())
    }
}

pub fn total_power(pm: &PowerModel, x: &ActivationVector) -> f64 {
    pm.total(x)
}

/// `log2(1 + snr) / power`.
pub fn energy_efficiency(snr: f64, power: f64) -> f64 {
    (snr.ln_1p() / LN_2) / power
}

/// Worst-case energy efficiency, or the `-inf` value of an infeasible problem.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum Efficiency {
    NegInfinity,
    Finite(f64),
}

impl Efficiency {
    pub fn value(&self) -> Option<f64> {
        match self {
            Efficiency::NegInfinity => None,
            Efficiency::Finite(v) => Some(*v),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value().unwrap_or(f64::NEG_INFINITY)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Efficiency::Finite(_))
    }
}

/// `f_c(x) = a_0 + sum_l x_l a_l`.
pub fn f_c(ch: &ChannelEstimate, x: &ActivationVector) -> f64 {
    debug_assert_eq!(ch.elements(), x.len());
    ch.element_magnitudes()
        .iter()
        .zip(x.as_slice())
        .filter(|(_, on)| **on)
        .fold(ch.direct_magnitude(), |acc, (a, _)| acc + a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdForm {
    /// `|a_0 + sum x_l a_l e^{j eps_l}|`.
    Magnitude,
    /// `sqrt(Re^2 + Im^2)` with the real and imaginary sums accumulated separately.
    Quadratic,
    /// `sqrt(a_0^2 + sum zeta_l x_l + sum_{n<m} mu_nm min(x_n, x_m))`.
    MinExpansion,
}

impl FromStr for FdForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "magnitude" => Ok(FdForm::Magnitude),
            "quadratic" => Ok(FdForm::Quadratic),
            "min-expansion" => Ok(FdForm::MinExpansion),
            other => Err(invalid(format!("unknown f_d form {other:?}"))),
        }
    }
}

/// Amplitude with quantized phases, by any of its three equivalent forms.
pub fn f_d(ch: &ChannelEstimate, x: &ActivationVector, errors: &[f64], form: FdForm) -> Result<f64> {
    check_len(ch, x)?;
    if errors.len() != x.len() {
        return Err(invalid("error array length differs from the activation length"));
    }
    let a0 = ch.direct_magnitude();
    let active = || {
        ch.element_magnitudes()
            .iter()
            .zip(errors)
            .zip(x.as_slice())
            .filter(|(_, on)| **on)
            .map(|(p, _)| p)
    };
    Ok(match form {
        FdForm::Magnitude => active()
            .fold(Complex64::new(a0, 0.0), |acc, (&a, &e)| {
                acc + Complex64::from_polar(a, e)
            })
            .norm(),
        FdForm::Quadratic => {
            let (re, im) = active().fold((a0, 0.0), |(re, im), (&a, &e)| {
                (re + a * e.cos(), im + a * e.sin())
            });
            (re * re + im * im).sqrt()
        }
        FdForm::MinExpansion => {
            let coeffs = ExpansionCoeffs::build(ch, errors, 0.0)?;
            coeffs.quadratic_form(&x.as_f64()).sqrt()
        }
    })
}

/// `g(x; delta) = delta sqrt(1 + sum x)`: the largest amplitude an error of
/// norm `delta` can remove from the active paths.
pub fn g(x: &ActivationVector, delta: f64) -> f64 {
    g_count(x.count_on(), delta)
}

pub fn g_count(active: usize, delta: f64) -> f64 {
    delta * ((1 + active) as f64).sqrt()
}

/// `Arg(a_0 + sum x_l a_l e^{j eps_l})` in `[0, 2pi)`.
pub fn vartheta(ch: &ChannelEstimate, x: &ActivationVector, errors: &[f64]) -> Result<f64> {
    check_len(ch, x)?;
    if errors.len() != x.len() {
        return Err(invalid("error array length differs from the activation length"));
    }
    let sum = ch
        .element_magnitudes()
        .iter()
        .zip(errors)
        .zip(x.as_slice())
        .filter(|(_, on)| **on)
        .fold(Complex64::new(ch.direct_magnitude(), 0.0), |acc, ((&a, &e), _)| {
            acc + Complex64::from_polar(a, e)
        });
    if sum.norm() == 0.0 {
        return Err(Error::Degenerate("aligned amplitude is zero, its argument is undefined".into()));
    }
    Ok(wrap_two_pi(sum.arg()))
}

/// Coefficients of `f_d(x)^2` as a quadratic in binary `x`, plus their
/// `delta`-shifted variants used by the SNR upper bound
/// `gamma_hat = gamma_bar (xi + sum zeta'_l x_l + sum_{n<m} mu_nm min(x_n, x_m))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCoeffs {
    pub alpha0_sq: f64,
    /// `zeta_l = a_l^2 + 2 a_0 a_l cos(eps_l)`.
    pub zeta: Vec<f64>,
    /// Packed strict upper triangle of `mu_nm = 2 a_n a_m cos(eps_n - eps_m)`.
    mu: Vec<f64>,
    /// `zeta_l - delta^2`.
    pub zeta_prime: Vec<f64>,
    /// `a_0^2 - delta^2`.
    pub xi: f64,
    pub delta: f64,
    elements: usize,
}

impl ExpansionCoeffs {
    pub fn build(ch: &ChannelEstimate, errors: &[f64], delta: f64) -> Result<Self> {
        let l = ch.elements();
        if errors.len() != l {
            return Err(invalid("error array length differs from the element count"));
        }
        let a0 = ch.direct_magnitude();
        let a = ch.element_magnitudes();
        let zeta: Vec<f64> = a
            .iter()
            .zip(errors)
            .map(|(&al, &e)| al * al + 2.0 * a0 * al * e.cos())
            .collect();
        let mut mu = Vec::with_capacity(l * l.saturating_sub(1) / 2);
        for n in 0..l {
            for m in n + 1..l {
                mu.push(2.0 * a[n] * a[m] * (errors[n] - errors[m]).cos());
            }
        }
        let d2 = delta * delta;
        Ok(Self {
            alpha0_sq: a0 * a0,
            zeta_prime: zeta.iter().map(|z| z - d2).collect(),
            zeta,
            mu,
            xi: a0 * a0 - d2,
            delta,
            elements: l,
        })
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    fn packed(&self, n: usize, m: usize) -> usize {
        debug_assert!(n < m && m < self.elements);
        n * self.elements - n * (n + 1) / 2 + (m - n - 1)
    }

    /// `mu_nm` for `n != m` (symmetric).
    pub fn mu(&self, n: usize, m: usize) -> f64 {
        let (n, m) = if n < m { (n, m) } else { (m, n) };
        self.mu[self.packed(n, m)]
    }

    /// `(n, m, mu_nm)` for every `n < m`, row-major.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let l = self.elements;
        (0..l)
            .flat_map(move |n| (n + 1..l).map(move |m| (n, m)))
            .zip(&self.mu)
            .map(|((n, m), &v)| (n, m, v))
    }

    pub fn min_mu(&self) -> f64 {
        self.mu.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `a_0^2 + sum zeta_l x_l + sum_{n<m} mu_nm min(x_n, x_m)`, i.e. `f_d^2` on binary `x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.alpha0_sq + self.linear_and_pairs(&self.zeta, x)
    }

    /// `sum w_l x_l + sum_{n<m} mu_nm min(x_n, x_m)` for a general `x`.
    pub fn linear_and_pairs(&self, weights: &[f64], x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.elements);
        let lin: f64 = weights.iter().zip(x).map(|(w, v)| w * v).sum();
        let pair: f64 = self.pairs().map(|(n, m, mu)| mu * x[n].min(x[m])).sum();
        lin + pair
    }

    /// `gamma_hat(x) = gamma_bar (xi + sum zeta' x + sum mu min(x_n, x_m))` on `[0, 1]^L`.
    pub fn upper_bound_snr(&self, x: &[f64], gamma_bar: f64) -> f64 {
        gamma_bar * (self.xi + self.linear_and_pairs(&self.zeta_prime, x))
    }
}

/// Upper bound `gamma_hat >= gamma_worst` for a binary activation.
pub fn upper_bound_snr(coeffs: &ExpansionCoeffs, x: &ActivationVector, gamma_bar: f64) -> f64 {
    coeffs.upper_bound_snr(&x.as_f64(), gamma_bar)
}

/// A minimizer of the SNR over the uncertainty ball, in polar form.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstCaseError {
    pub magnitudes: Vec<f64>,
    pub phases: Vec<f64>,
}

impl WorstCaseError {
    pub fn coeffs(&self) -> Vec<Complex64> {
        self.magnitudes
            .iter()
            .zip(&self.phases)
            .map(|(&a, &t)| Complex64::from_polar(a, t))
            .collect()
    }

    pub fn norm(&self) -> f64 {
        self.magnitudes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

/// Feasibility of the robust problem, decided on the all-on activation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Feasibility {
    pub feasible: bool,
    /// False when `b = 2`: there a passing all-on vector proves feasibility but
    /// a failing one does not prove infeasibility.
    pub exact: bool,
}

/// A channel estimate with its IRS phase configuration and SNR scale `gamma_bar = p / sigma^2`.
#[derive(Debug, Clone)]
pub struct LinkModel {
    channel: ChannelEstimate,
    phases: PhaseShiftConfig,
    gamma_bar: f64,
    /// `a_l e^{j eps_l}`, the element contributions after phase alignment.
    aligned: Vec<Complex64>,
}

impl LinkModel {
    pub fn new(channel: ChannelEstimate, resolution: PhaseResolution, gamma_bar: f64) -> Result<Self> {
        if !(gamma_bar > 0.0) || !gamma_bar.is_finite() {
            return Err(invalid("gamma_bar must be positive"));
        }
        let phases = PhaseShiftConfig::design(&channel, resolution)?;
        let aligned = channel
            .element_magnitudes()
            .iter()
            .zip(&phases.errors)
            .map(|(&a, &e)| Complex64::from_polar(a, e))
            .collect();
        Ok(Self {
            channel,
            phases,
            gamma_bar,
            aligned,
        })
    }

    pub fn channel(&self) -> &ChannelEstimate {
        &self.channel
    }

    pub fn phases(&self) -> &PhaseShiftConfig {
        &self.phases
    }

    pub fn resolution(&self) -> PhaseResolution {
        self.phases.resolution
    }

    pub fn gamma_bar(&self) -> f64 {
        self.gamma_bar
    }

    pub fn elements(&self) -> usize {
        self.channel.elements()
    }

    fn aligned_sum(&self, x: &ActivationVector) -> Complex64 {
        self.aligned
            .iter()
            .zip(x.as_slice())
            .filter(|(_, on)| **on)
            .fold(Complex64::new(self.channel.direct_magnitude(), 0.0), |acc, (w, _)| acc + w)
    }

    /// `f_c(x)` or `f_d(x)` according to the phase resolution.
    pub fn amplitude(&self, x: &ActivationVector) -> f64 {
        match self.resolution() {
            PhaseResolution::Continuous => f_c(&self.channel, x),
            PhaseResolution::Bits(_) => self.aligned_sum(x).norm(),
        }
    }

    /// `vartheta(x)`; identically zero for continuous phases.
    pub fn vartheta(&self, x: &ActivationVector) -> Result<f64> {
        match self.resolution() {
            PhaseResolution::Continuous => Ok(0.0),
            PhaseResolution::Bits(_) => {
                let s = self.aligned_sum(x);
                if s.norm() == 0.0 {
                    return Err(Error::Degenerate("aligned amplitude is zero".into()));
                }
                Ok(wrap_two_pi(s.arg()))
            }
        }
    }

    pub fn check_assumptions(&self, delta: f64) -> Result<()> {
        check_radius(&self.channel, delta)?;
        check_bits(self.resolution())
    }

    /// `gamma_bar (f(x) - g(x; delta))^2`.
    pub fn worst_case_snr(&self, x: &ActivationVector, delta: f64) -> Result<f64> {
        check_len(&self.channel, x)?;
        self.check_assumptions(delta)?;
        Ok(self.worst_case_snr_unchecked(x, delta))
    }

    pub(crate) fn worst_case_snr_unchecked(&self, x: &ActivationVector, delta: f64) -> f64 {
        let f = self.amplitude(x);
        let d = f - g(x, delta);
        debug_assert!(d >= -1e-12 * f.max(f64::MIN_POSITIVE), "f < g: {f} vs {}", g(x, delta));
        self.gamma_bar * d * d
    }

    pub fn worst_case_ee(&self, x: &ActivationVector, delta: f64, pm: &PowerModel) -> Result<f64> {
        let snr = self.worst_case_snr(x, delta)?;
        Ok(energy_efficiency(snr, pm.total(x)))
    }

    /// SNR for the true channel `h_hat + h_tilde` with the configured phases applied.
    pub fn snr_with_error(&self, x: &ActivationVector, error: &[Complex64]) -> f64 {
        debug_assert_eq!(error.len(), self.channel.elements() + 1);
        let h = self.channel.coeffs();
        let mut total = h[0] + error[0];
        for (l, &phi) in self.phases.applied.iter().enumerate() {
            if x.is_on(l) {
                total += (h[l + 1] + error[l + 1]) * Complex64::from_polar(1.0, phi);
            }
        }
        self.gamma_bar * total.norm_sqr()
    }

    /// An error vector on the ball boundary that attains the worst-case SNR.
    pub fn worst_case_error(&self, x: &ActivationVector, delta: f64) -> Result<WorstCaseError> {
        check_len(&self.channel, x)?;
        self.check_assumptions(delta)?;
        // with a zero amplitude every direction is equally bad
        let theta = match self.vartheta(x) {
            Ok(t) => t,
            Err(Error::Degenerate(_)) => 0.0,
            Err(e) => return Err(e),
        };
        let base = theta + self.channel.direct_phase() + PI;
        let lambda = delta / ((1 + x.count_on()) as f64).sqrt();
        let mut magnitudes = Vec::with_capacity(x.len() + 1);
        let mut phases = Vec::with_capacity(x.len() + 1);
        magnitudes.push(lambda);
        phases.push(wrap_two_pi(base));
        for (l, &phi) in self.phases.applied.iter().enumerate() {
            magnitudes.push(if x.is_on(l) { lambda } else { 0.0 });
            phases.push(wrap_two_pi(base - phi));
        }
        Ok(WorstCaseError { magnitudes, phases })
    }

    pub fn expansion(&self, delta: f64) -> Result<ExpansionCoeffs> {
        ExpansionCoeffs::build(&self.channel, &self.phases.errors, delta)
    }

    /// Whether the all-on activation meets `gamma_min`.
    pub fn feasibility(&self, delta: f64, gamma_min: f64) -> Result<Feasibility> {
        let all_on = ActivationVector::ones(self.elements());
        let snr = self.worst_case_snr(&all_on, delta)?;
        Ok(Feasibility {
            feasible: snr >= gamma_min,
            exact: !matches!(self.resolution(), PhaseResolution::Bits(2)),
        })
    }
}

/// One robust activation problem: maximize worst-case EE subject to
/// `gamma_worst(x; delta) >= gamma_min`.
#[derive(Debug, Clone)]
pub struct RobustProblem {
    pub link: LinkModel,
    pub delta: f64,
    pub gamma_min: f64,
    pub power: PowerModel,
}

impl RobustProblem {
    pub fn new(link: LinkModel, delta: f64, gamma_min: f64, power: PowerModel) -> Result<Self> {
        link.check_assumptions(delta)?;
        if !(gamma_min >= 0.0) || !gamma_min.is_finite() {
            return Err(invalid(format!("gamma_min must be finite and >= 0, got {gamma_min}")));
        }
        power.validate()?;
        Ok(Self {
            link,
            delta,
            gamma_min,
            power,
        })
    }

    pub fn elements(&self) -> usize {
        self.link.elements()
    }

    pub fn snr(&self, x: &ActivationVector) -> f64 {
        self.link.worst_case_snr_unchecked(x, self.delta)
    }

    pub fn ee(&self, x: &ActivationVector) -> f64 {
        energy_efficiency(self.snr(x), self.power.total(x))
    }

    /// EE if `x` meets the SNR floor, `-inf` otherwise.
    pub fn objective(&self, x: &ActivationVector) -> Efficiency {
        let snr = self.snr(x);
        if snr >= self.gamma_min {
            Efficiency::Finite(energy_efficiency(snr, self.power.total(x)))
        } else {
            Efficiency::NegInfinity
        }
    }

    pub fn feasibility(&self) -> Result<Feasibility> {
        self.link.feasibility(self.delta, self.gamma_min)
    }
}
