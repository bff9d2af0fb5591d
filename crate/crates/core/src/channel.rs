//! Path loss, Poisson transmitter fields and Rician array channels.
//!
//! Devices carry a uniform linear array along the x-axis; angles are measured
//! from broadside (the +y direction), so a source straight "above" the array
//! arrives at `theta = 0`. The LoS phase reference is element 0.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::error::{ensure, Result};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position2D {
    pub x: f64,
    pub y: f64,
}

impl Position2D {
    pub const ORIGIN: Position2D = Position2D { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Position2D) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }

    pub fn distance_sqr(&self, other: &Position2D) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Log-distance path loss with a constant (distance independent) loss term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossParams {
    pub exponent: f64,
    pub fixed_loss_db: f64,
    /// Distances below this are clamped to it.
    pub reference_distance: f64,
}

impl Default for PathLossParams {
    /// Ambient-harvesting scenario: exponent 2.7, 40 dB fixed loss, 1 m reference.
    fn default() -> Self {
        Self {
            exponent: 2.7,
            fixed_loss_db: 40.0,
            reference_distance: 1.0,
        }
    }
}

impl PathLossParams {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.exponent > 0.0 && self.exponent.is_finite(),
            "pathloss.exponent",
            "must be positive and finite",
        )?;
        ensure(
            self.fixed_loss_db >= 0.0 && self.fixed_loss_db.is_finite(),
            "pathloss.fixed_loss_db",
            "must be non-negative and finite",
        )?;
        ensure(
            self.reference_distance > 0.0 && self.reference_distance.is_finite(),
            "pathloss.reference_distance",
            "must be positive and finite",
        )
    }

    /// Linear power gain at distance `d` meters.
    pub fn gain(&self, d: f64) -> f64 {
        let fixed = libm::pow(10.0, -self.fixed_loss_db / 10.0);
        let ratio = d.max(self.reference_distance) / self.reference_distance;
        fixed * libm::pow(ratio, -self.exponent)
    }
}

/// `10^(-L/10) * (max(d, d0)/d0)^(-alpha)`.
pub fn path_gain(d: f64, params: &PathLossParams) -> f64 {
    params.gain(d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicianParams {
    /// Linear LoS-to-scatter power ratio. Zero is Rayleigh.
    pub k_factor: f64,
}

impl Default for RicianParams {
    fn default() -> Self {
        Self { k_factor: 10.0 }
    }
}

impl RicianParams {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.k_factor >= 0.0 && !self.k_factor.is_nan(),
            "rician.k_factor",
            "must be non-negative",
        )
    }

    /// Amplitude weights `(sqrt(K/(K+1)), sqrt(1/(K+1)))` of the LoS and
    /// scattered parts.
    pub fn weights(&self) -> (f64, f64) {
        let k = self.k_factor;
        if k.is_infinite() {
            return (1.0, 0.0);
        }
        (libm::sqrt(k / (k + 1.0)), libm::sqrt(1.0 / (k + 1.0)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayConfig {
    pub n_antennas: usize,
    /// Element spacing in wavelengths.
    pub element_spacing: f64,
}

impl ArrayConfig {
    pub fn new(n_antennas: usize) -> Self {
        Self {
            n_antennas,
            element_spacing: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.n_antennas >= 1,
            "array.n_antennas",
            "must be at least 1",
        )?;
        ensure(
            self.element_spacing > 0.0 && self.element_spacing.is_finite(),
            "array.element_spacing",
            "must be positive and finite",
        )
    }
}

impl Default for ArrayConfig {
    fn default() -> Self {
        Self::new(1)
    }
}

/// A set of co-channel transmitters with equal power.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransmitterField {
    pub positions: Vec<Position2D>,
    pub tx_power: f64,
}

/// Samples a homogeneous Poisson point process of `density` points per m^2
/// on the disk of `radius` meters centred at the origin.
pub fn sample_hppp(density: f64, radius: f64, seed: u64) -> Vec<Position2D> {
    sample_hppp_with(density, radius, Position2D::ORIGIN, &mut seed::stream(seed))
}

pub fn sample_hppp_with<R: Rng + ?Sized>(
    density: f64,
    radius: f64,
    center: Position2D,
    rng: &mut R,
) -> Vec<Position2D> {
    let mean = density * PI * radius * radius;
    if !(mean > 0.0) {
        return Vec::new();
    }
    let count = match Poisson::new(mean) {
        Ok(p) => p.sample(rng) as usize,
        Err(_) => return Vec::new(),
    };
    (0..count)
        .map(|_| {
            let r = radius * libm::sqrt(rng.random::<f64>());
            let phi = 2.0 * PI * rng.random::<f64>();
            Position2D::new(center.x + r * libm::cos(phi), center.y + r * libm::sin(phi))
        })
        .collect()
}

/// ULA response: element `m` is `exp(j 2 pi s m sin(theta))`.
pub fn steering_vector(theta: f64, array: &ArrayConfig) -> Vec<Complex64> {
    let step = 2.0 * PI * array.element_spacing * libm::sin(theta);
    (0..array.n_antennas)
        .map(|m| Complex64::from_polar(1.0, step * m as f64))
        .collect()
}

/// Angle of arrival of `source` at an array located at `device`, measured
/// from broadside.
pub fn arrival_angle(source: &Position2D, device: &Position2D) -> f64 {
    libm::atan2(source.x - device.x, source.y - device.y)
}

/// Draws the amplitude channel between `source` and an array at `device`.
///
/// Antenna `m` consumes the `m`-th complex Gaussian of the stream, so the
/// channel of a smaller array is a prefix of the channel of a larger one
/// drawn with the same seed.
pub fn sample_channel(
    source: &Position2D,
    device: &Position2D,
    array: &ArrayConfig,
    rician: &RicianParams,
    pathloss: &PathLossParams,
    seed: u64,
) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(array.n_antennas);
    fill_channel(source, device, array, rician, pathloss, seed, &mut out);
    out
}

/// Like [`sample_channel`], appending into `out`.
pub(crate) fn fill_channel(
    source: &Position2D,
    device: &Position2D,
    array: &ArrayConfig,
    rician: &RicianParams,
    pathloss: &PathLossParams,
    seed: u64,
    out: &mut Vec<Complex64>,
) {
    let amplitude = libm::sqrt(pathloss.gain(source.distance(device)));
    let (los_w, nlos_w) = rician.weights();
    let theta = arrival_angle(source, device);
    let step = 2.0 * PI * array.element_spacing * libm::sin(theta);
    let mut rng = seed::stream(seed);
    let scatter_scale = core::f64::consts::FRAC_1_SQRT_2;
    for m in 0..array.n_antennas {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        let los = Complex64::from_polar(los_w, step * m as f64);
        let nlos = Complex64::new(re, im) * (nlos_w * scatter_scale);
        out.push((los + nlos) * amplitude);
    }
}
