//! Monte Carlo outage of ambient RF energy harvesting.
//!
//! A device sits at the centre of a disk. Ambient transmitters form a Poisson
//! field on the disk and each reaches the device over an independent Rician
//! channel. Powers from different transmitters add incoherently. A trial is
//! an outage when the harvested DC power falls below the target.
//!
//! Trial `i` is seeded with `derive(seed, [TRIAL, i])`; inside a trial the
//! transmitter positions and every transmitter's fading have their own
//! streams. Antenna `m` of a source always uses the same draws, so a
//! single-antenna receiver sees exactly antenna 0 of a larger array.

use alloc::vec::Vec;

use crate::channel::{
    fill_channel, sample_hppp, ArrayConfig, PathLossParams, Position2D, RicianParams,
};
use crate::error::{ensure, Error, Result};
use crate::harvest::{
    dft_codebook, harvest_architecture, harvest_dc, rf_combine, Architecture, ChannelSnapshot,
    Codebook, HarvesterCurve,
};
use crate::seed;

#[derive(Debug, Clone, PartialEq)]
pub struct OutageConfig {
    /// Transmitters per m^2.
    pub density: f64,
    pub disk_radius: f64,
    /// Per-transmitter power in watts.
    pub tx_power: f64,
    pub pathloss: PathLossParams,
    pub rician: RicianParams,
    /// Harvested power target in watts.
    pub target: f64,
    pub arch: Architecture,
    pub n_antennas: usize,
    pub element_spacing: f64,
    pub curve: HarvesterCurve,
    pub trials: usize,
    pub seed: u64,
}

impl Default for OutageConfig {
    fn default() -> Self {
        Self {
            density: 1.0,
            disk_radius: 10.0,
            tx_power: 1.0,
            pathloss: PathLossParams::default(),
            rician: RicianParams::default(),
            target: 1e-3,
            arch: Architecture::Single,
            n_antennas: 1,
            element_spacing: 0.5,
            curve: HarvesterCurve::default(),
            trials: 10_000,
            seed: 0,
        }
    }
}

impl OutageConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.density >= 0.0 && self.density.is_finite(),
            "density",
            "must be non-negative and finite",
        )?;
        ensure(
            self.disk_radius > 0.0 && self.disk_radius.is_finite(),
            "disk_radius",
            "must be positive and finite",
        )?;
        ensure(
            self.tx_power > 0.0 && self.tx_power.is_finite(),
            "tx_power",
            "must be positive and finite",
        )?;
        ensure(
            self.target > 0.0 && self.target.is_finite(),
            "target",
            "must be positive and finite",
        )?;
        ensure(self.trials >= 1, "trials", "must be at least 1")?;
        self.pathloss.validate()?;
        self.rician.validate()?;
        self.array().validate()
    }

    /// Array actually simulated: one antenna for the single architecture.
    pub fn array(&self) -> ArrayConfig {
        ArrayConfig {
            n_antennas: match self.arch {
                Architecture::Single => 1,
                _ => self.n_antennas,
            },
            element_spacing: self.element_spacing,
        }
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        seed::derive(self.seed, &[seed::LABEL_TRIAL, trial as u64])
    }
}

/// Draws the channel snapshot of one trial on an `array`-element receiver.
pub fn sample_snapshot(
    config: &OutageConfig,
    array: &ArrayConfig,
    trial_seed: u64,
) -> ChannelSnapshot {
    let sources = sample_hppp(
        config.density,
        config.disk_radius,
        seed::derive(trial_seed, &[seed::LABEL_POSITIONS]),
    );
    snapshot_for_sources(config, array, &sources, trial_seed)
}

/// Snapshot for an explicit set of transmitter positions around a device at
/// the origin.
pub fn snapshot_for_sources(
    config: &OutageConfig,
    array: &ArrayConfig,
    sources: &[Position2D],
    trial_seed: u64,
) -> ChannelSnapshot {
    let device = Position2D::ORIGIN;
    let mut snapshot = ChannelSnapshot::new(array.n_antennas);
    for (s, src) in sources.iter().enumerate() {
        let fading_seed = seed::derive(trial_seed, &[seed::LABEL_FADING, s as u64]);
        snapshot.push_with(config.tx_power, |out| {
            fill_channel(
                src,
                &device,
                array,
                &config.rician,
                &config.pathloss,
                fading_seed,
                out,
            )
        });
    }
    snapshot
}

/// Config plus the precomputed codebook; evaluates trials by index.
#[derive(Debug, Clone)]
pub struct OutageRunner<'a> {
    config: &'a OutageConfig,
    array: ArrayConfig,
    codebook: Codebook,
}

impl<'a> OutageRunner<'a> {
    pub fn new(config: &'a OutageConfig) -> Result<Self> {
        config.validate()?;
        let array = config.array();
        Ok(Self {
            config,
            array,
            codebook: dft_codebook(array.n_antennas),
        })
    }

    pub fn config(&self) -> &OutageConfig {
        self.config
    }

    /// Harvested power (W) in trial `trial`.
    pub fn harvested(&self, trial: usize) -> f64 {
        self.harvested_with_seed(self.config.trial_seed(trial))
    }

    pub fn harvested_with_seed(&self, trial_seed: u64) -> f64 {
        let snapshot = sample_snapshot(self.config, &self.array, trial_seed);
        harvest_architecture(
            &snapshot,
            self.config.arch,
            &self.config.curve,
            &self.codebook,
        )
        .expect("snapshot and codebook share the array size")
    }
}

/// Everything the three receivers see in one trial, on a common
/// `n_antennas` snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialBreakdown {
    pub antenna_powers: Vec<f64>,
    pub single_harvested: f64,
    pub dc_harvested: f64,
    /// Combined RF power of every codeword, in codebook order.
    pub codeword_powers: Vec<f64>,
    pub rf_best_index: usize,
    pub rf_input_power: f64,
    pub rf_harvested: f64,
}

/// Evaluates all three architectures on trial `trial` of `config`, using
/// `config.n_antennas` antennas regardless of `config.arch`.
pub fn trial_breakdown(config: &OutageConfig, trial: usize) -> Result<TrialBreakdown> {
    config.validate()?;
    let array = ArrayConfig {
        n_antennas: config.n_antennas,
        element_spacing: config.element_spacing,
    };
    let codebook = dft_codebook(array.n_antennas);
    let snapshot = sample_snapshot(config, &array, config.trial_seed(trial));
    let antenna_powers = snapshot.antenna_powers();
    let codeword_powers: Vec<f64> = codebook
        .codewords()
        .iter()
        .map(|w| snapshot.combined_power(w))
        .collect();
    let choice = rf_combine(&snapshot, &codebook)?;
    Ok(TrialBreakdown {
        single_harvested: config.curve.harvest(antenna_powers[0]),
        dc_harvested: harvest_dc(&antenna_powers, &config.curve),
        rf_best_index: choice.index,
        rf_input_power: choice.power,
        rf_harvested: config.curve.harvest(choice.power),
        antenna_powers,
        codeword_powers,
    })
}

/// Harvested power of a single trial with an explicit seed.
pub fn run_trial(config: &OutageConfig, trial_seed: u64) -> Result<f64> {
    Ok(OutageRunner::new(config)?.harvested_with_seed(trial_seed))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutageResult {
    pub density: f64,
    pub arch: Architecture,
    pub n_antennas: usize,
    pub outage_estimate: f64,
    /// `1.96 * sqrt(p (1 - p) / trials)`.
    pub ci95_halfwidth: f64,
    pub trials: usize,
    pub outages: usize,
    pub mean_harvested: f64,
}

impl OutageResult {
    /// Aggregates per-trial harvested powers, listed in trial order.
    pub fn from_samples(config: &OutageConfig, harvested: &[f64]) -> Self {
        let trials = harvested.len();
        let outages = harvested.iter().filter(|&&h| h < config.target).count();
        let p = if trials == 0 {
            0.0
        } else {
            outages as f64 / trials as f64
        };
        let ci = if trials == 0 {
            0.0
        } else {
            1.96 * libm::sqrt(p * (1.0 - p) / trials as f64)
        };
        let sum: f64 = harvested.iter().sum();
        Self {
            density: config.density,
            arch: config.arch,
            n_antennas: config.array().n_antennas,
            outage_estimate: p,
            ci95_halfwidth: ci,
            trials,
            outages,
            mean_harvested: if trials == 0 {
                0.0
            } else {
                sum / trials as f64
            },
        }
    }
}

/// Runs `config.trials` trials serially.
pub fn run_outage(config: &OutageConfig) -> Result<OutageResult> {
    let runner = OutageRunner::new(config)?;
    let samples: Vec<f64> = (0..config.trials).map(|i| runner.harvested(i)).collect();
    Ok(OutageResult::from_samples(config, &samples))
}

/// Sub-config for one density of a sweep. The seed depends on the density
/// value, so repeated densities give repeated results.
pub fn density_config(config: &OutageConfig, density: f64) -> OutageConfig {
    OutageConfig {
        density,
        seed: seed::derive(config.seed, &[seed::LABEL_DENSITY, density.to_bits()]),
        ..config.clone()
    }
}

pub fn sweep_density(config: &OutageConfig, densities: &[f64]) -> Result<Vec<OutageResult>> {
    if densities.is_empty() {
        return Err(Error::EmptyList("density"));
    }
    densities
        .iter()
        .map(|&d| run_outage(&density_config(config, d)))
        .collect()
}
