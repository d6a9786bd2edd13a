//! Random channel estimates for a single-antenna Tx/Rx pair assisted by a
//! uniform linear IRS, with distance-dependent path loss and Rician fading on
//! the two IRS hops.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::error::{invalid, Result};
use crate::phase::wrap_two_pi;
use crate::seed;

pub type Point3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioGeometry {
    pub tx: Point3,
    pub rx: Point3,
    pub irs: Point3,
    /// Element spacing `d` over carrier wavelength `lambda`.
    pub element_spacing_over_wavelength: f64,
}

/// One value per link: Tx-Rx direct, Tx-IRS, IRS-Rx.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerLink {
    pub direct: f64,
    pub tx_irs: f64,
    pub irs_rx: f64,
}

impl PerLink {
    pub const fn new(direct: f64, tx_irs: f64, irs_rx: f64) -> Self {
        Self {
            direct,
            tx_irs,
            irs_rx,
        }
    }

    fn all(&self, pred: impl Fn(f64) -> bool) -> bool {
        pred(self.direct) && pred(self.tx_irs) && pred(self.irs_rx)
    }
}

fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(v: Point3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

impl ScenarioGeometry {
    /// Tx at the origin, Rx 100 m down the x-axis, IRS at (50, 20, 10), half-wavelength spacing.
    pub fn reference() -> Self {
        Self {
            tx: [0.0, 0.0, 0.0],
            rx: [100.0, 0.0, 0.0],
            irs: [50.0, 20.0, 10.0],
            element_spacing_over_wavelength: 0.5,
        }
    }

    pub fn distances(&self) -> PerLink {
        PerLink {
            direct: norm(sub(self.rx, self.tx)),
            tx_irs: norm(sub(self.irs, self.tx)),
            irs_rx: norm(sub(self.rx, self.irs)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let coords = self.tx.iter().chain(&self.rx).chain(&self.irs);
        if !coords.into_iter().all(|c| c.is_finite()) {
            return Err(invalid("geometry coordinates must be finite"));
        }
        if !self.distances().all(|d| d > 0.0) {
            return Err(invalid("Tx, Rx and IRS positions must be pairwise distinct"));
        }
        if !(self.element_spacing_over_wavelength > 0.0)
            || !self.element_spacing_over_wavelength.is_finite()
        {
            return Err(invalid("element spacing over wavelength must be positive"));
        }
        Ok(())
    }
}

/// Angles of arrival (Tx to IRS) and departure (IRS to Rx), in radians.
///
/// Inclination is measured from the +z axis, in `[0, pi]`; azimuth is measured
/// from the +x axis in the xy-plane, in `[0, 2pi)`. Both are taken along the
/// propagation direction: `irs - tx` for arrival and `rx - irs` for departure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringAngles {
    pub arrival_inclination: f64,
    pub arrival_azimuth: f64,
    pub departure_inclination: f64,
    pub departure_azimuth: f64,
}

fn spherical(v: Point3) -> (f64, f64) {
    let r = norm(v);
    let inclination = (v[2] / r).clamp(-1.0, 1.0).acos();
    let azimuth = wrap_two_pi(v[1].atan2(v[0]));
    (inclination, azimuth)
}

pub fn angles_from_geometry(geom: &ScenarioGeometry) -> Result<SteeringAngles> {
    geom.validate()?;
    let (ai, aa) = spherical(sub(geom.irs, geom.tx));
    let (di, da) = spherical(sub(geom.rx, geom.irs));
    Ok(SteeringAngles {
        arrival_inclination: ai,
        arrival_azimuth: aa,
        departure_inclination: di,
        departure_azimuth: da,
    })
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingParams {
    /// Path loss at the reference distance (linear).
    pub ref_pathloss: PerLink,
    /// Reference distances in meters.
    pub ref_distance: PerLink,
    pub exponent: PerLink,
    /// Rician factors of the Tx-IRS and IRS-Rx hops, linear scale.
    pub rician_tx_irs: f64,
    pub rician_irs_rx: f64,
    pub angles: SteeringAngles,
}

impl FadingParams {
    /// Default large-scale parameters (c0 = 1e-5, cu = cv = 1e-3, 1 m reference,
    /// exponents 3.7 / 2.2 / 2.2, Rician factor 5 dB) with angles from `geom`.
    pub fn reference(geom: &ScenarioGeometry) -> Result<Self> {
        Ok(Self {
            ref_pathloss: PerLink::new(1e-5, 1e-3, 1e-3),
            ref_distance: PerLink::new(1.0, 1.0, 1.0),
            exponent: PerLink::new(3.7, 2.2, 2.2),
            rician_tx_irs: db_to_linear(5.0),
            rician_irs_rx: db_to_linear(5.0),
            angles: angles_from_geometry(geom)?,
        })
    }

    pub fn with_rician_db(mut self, tx_irs_db: f64, irs_rx_db: f64) -> Self {
        self.rician_tx_irs = db_to_linear(tx_irs_db);
        self.rician_irs_rx = db_to_linear(irs_rx_db);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.exponent.all(|a| a >= 1.0 && a.is_finite()) {
            return Err(invalid("path-loss exponents must be >= 1"));
        }
        if !self.ref_pathloss.all(|c| c > 0.0 && c.is_finite()) {
            return Err(invalid("reference path losses must be positive"));
        }
        if !self.ref_distance.all(|d| d > 0.0 && d.is_finite()) {
            return Err(invalid("reference distances must be positive"));
        }
        if !(self.rician_tx_irs >= 0.0 && self.rician_irs_rx >= 0.0) {
            return Err(invalid("Rician factors must be >= 0"));
        }
        Ok(())
    }

    /// Distance-dependent path loss `c * (d / d_ref)^(-a)` of each link.
    pub fn pathloss(&self, geom: &ScenarioGeometry) -> PerLink {
        let d = geom.distances();
        let pl = |c: f64, d: f64, dr: f64, a: f64| c * (d / dr).powf(-a);
        PerLink {
            direct: pl(
                self.ref_pathloss.direct,
                d.direct,
                self.ref_distance.direct,
                self.exponent.direct,
            ),
            tx_irs: pl(
                self.ref_pathloss.tx_irs,
                d.tx_irs,
                self.ref_distance.tx_irs,
                self.exponent.tx_irs,
            ),
            irs_rx: pl(
                self.ref_pathloss.irs_rx,
                d.irs_rx,
                self.ref_distance.irs_rx,
                self.exponent.irs_rx,
            ),
        }
    }
}

/// Estimated channel `h_hat = [h_0, h_1, .., h_L]` with its cached polar form.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEstimate {
    coeffs: Vec<Complex64>,
    magnitudes: Vec<f64>,
    phases: Vec<f64>,
    alpha_min: f64,
}

impl ChannelEstimate {
    /// Build from the direct coefficient followed by the `L` cascaded ones.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(invalid("a channel needs the direct link and at least one element"));
        }
        if !coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(invalid("channel coefficients must be finite"));
        }
        let magnitudes: Vec<f64> = coeffs.iter().map(|c| c.norm()).collect();
        let phases = coeffs.iter().map(|c| wrap_two_pi(c.arg())).collect();
        Ok(Self::assemble(coeffs, magnitudes, phases))
    }

    pub fn from_polar(magnitudes: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        if magnitudes.len() != phases.len() || magnitudes.len() < 2 {
            return Err(invalid("need matching magnitude/phase arrays of length L + 1 >= 2"));
        }
        if !magnitudes.iter().all(|a| *a >= 0.0 && a.is_finite()) {
            return Err(invalid("magnitudes must be finite and nonnegative"));
        }
        if !phases.iter().all(|p| p.is_finite()) {
            return Err(invalid("phases must be finite"));
        }
        let phases: Vec<f64> = phases.into_iter().map(wrap_two_pi).collect();
        let coeffs = magnitudes
            .iter()
            .zip(&phases)
            .map(|(&a, &t)| Complex64::from_polar(a, t))
            .collect();
        Ok(Self::assemble(coeffs, magnitudes, phases))
    }

    fn assemble(coeffs: Vec<Complex64>, magnitudes: Vec<f64>, phases: Vec<f64>) -> Self {
        let alpha_min = magnitudes.iter().copied().fold(f64::INFINITY, f64::min);
        Self {
            coeffs,
            magnitudes,
            phases,
            alpha_min,
        }
    }

    /// Number of IRS elements `L`.
    pub fn elements(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `alpha_hat_0 .. alpha_hat_L`.
    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// `theta_hat_0 .. theta_hat_L`, each in `[0, 2pi)`.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn direct_magnitude(&self) -> f64 {
        self.magnitudes[0]
    }

    pub fn direct_phase(&self) -> f64 {
        self.phases[0]
    }

    /// Cascaded magnitudes `alpha_hat_1 .. alpha_hat_L`.
    pub fn element_magnitudes(&self) -> &[f64] {
        &self.magnitudes[1..]
    }

    pub fn element_phases(&self) -> &[f64] {
        &self.phases[1..]
    }

    pub fn alpha_min(&self) -> f64 {
        self.alpha_min
    }
}

/// Raw small-scale draws behind one channel estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkSamples {
    pub direct: Complex64,
    pub tx_irs: Vec<Complex64>,
    pub irs_rx: Vec<Complex64>,
}

fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

fn rician_weights(k: f64) -> (f64, f64) {
    if k.is_infinite() {
        (1.0, 0.0)
    } else {
        ((k / (1.0 + k)).sqrt(), (1.0 / (1.0 + k)).sqrt())
    }
}

/// Draw the direct link and both hops of every element.
pub fn sample_links(
    geom: &ScenarioGeometry,
    fading: &FadingParams,
    elements: usize,
    seed: u64,
) -> Result<LinkSamples> {
    geom.validate()?;
    fading.validate()?;
    if elements == 0 {
        return Err(invalid("need at least one IRS element"));
    }
    let pl = fading.pathloss(geom);
    let mut rng = seed::rng(seed);
    let direct = complex_normal(&mut rng) * pl.direct.sqrt();

    let a = &fading.angles;
    let spacing = geom.element_spacing_over_wavelength;
    let arrival = TAU * spacing * a.arrival_inclination.sin() * a.arrival_azimuth.cos();
    let departure = TAU * spacing * a.departure_inclination.sin() * a.departure_azimuth.cos();
    let (u_los, u_nlos) = rician_weights(fading.rician_tx_irs);
    let (v_los, v_nlos) = rician_weights(fading.rician_irs_rx);

    let mut tx_irs = Vec::with_capacity(elements);
    let mut irs_rx = Vec::with_capacity(elements);
    for idx in 0..elements {
        let u_scatter = complex_normal(&mut rng);
        let v_scatter = complex_normal(&mut rng);
        let u = Complex64::from_polar(u_los, arrival * idx as f64) + u_scatter * u_nlos;
        let v = Complex64::from_polar(v_los, departure * idx as f64) + v_scatter * v_nlos;
        tx_irs.push(u * pl.tx_irs.sqrt());
        irs_rx.push(v * pl.irs_rx.sqrt());
    }
    Ok(LinkSamples {
        direct,
        tx_irs,
        irs_rx,
    })
}

/// Draw one channel estimate; cascaded coefficients are `beta_l * u_l * v_l`.
pub fn sample_channel(
    geom: &ScenarioGeometry,
    fading: &FadingParams,
    elements: usize,
    betas: &[f64],
    seed: u64,
) -> Result<ChannelEstimate> {
    if betas.len() != elements {
        return Err(invalid(format!(
            "expected {elements} amplitudes, got {}",
            betas.len()
        )));
    }
    if let Some(b) = betas.iter().find(|b| !(0.0..=1.0).contains(*b)) {
        return Err(invalid(format!("amplitude {b} outside [0, 1]")));
    }
    let links = sample_links(geom, fading, elements, seed)?;
    let mut coeffs = Vec::with_capacity(elements + 1);
    coeffs.push(links.direct);
    coeffs.extend(
        betas
            .iter()
            .zip(links.tx_irs.iter().zip(&links.irs_rx))
            .map(|(&b, (u, v))| u * v * b),
    );
    ChannelEstimate::from_coeffs(coeffs)
}
