//! Rectenna transfer curve and the three receiver architectures: a single
//! antenna, DC combining (one rectifier per antenna, outputs summed) and RF
//! combining (a DFT codebook steers all antennas into one rectifier).

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::{LN_10, PI};
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::{ensure, Error, Result};
use crate::linalg;

/// Converts watts to dBm.
#[inline]
pub fn watts_to_dbm(p: f64) -> f64 {
    10.0 * libm::log10(p) + 30.0
}

/// Converts dBm to watts.
#[inline]
pub fn dbm_to_watts(dbm: f64) -> f64 {
    libm::pow(10.0, (dbm - 30.0) / 10.0)
}

/// Piecewise-linear (in dBm) conversion efficiency of a rectifier.
///
/// Inputs below the first breakpoint produce nothing. Above the last
/// breakpoint the output stays at its value there.
#[derive(Debug, Clone, PartialEq)]
pub struct HarvesterCurve {
    breakpoints: Vec<(f64, f64)>,
}

impl Default for HarvesterCurve {
    fn default() -> Self {
        Self {
            breakpoints: alloc::vec![
                (-30.0, 0.05),
                (-20.0, 0.15),
                (-10.0, 0.30),
                (0.0, 0.45),
                (10.0, 0.50),
            ],
        }
    }
}

impl HarvesterCurve {
    /// Builds a curve from `(input_dbm, efficiency)` pairs.
    ///
    /// The output power must not decrease anywhere on the interpolant, so a
    /// falling efficiency segment is accepted only while `eta * p` still grows.
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        ensure(
            breakpoints.len() >= 2,
            "curve.breakpoints",
            "needs at least 2 breakpoints",
        )?;
        for &(dbm, eta) in &breakpoints {
            ensure(
                dbm.is_finite(),
                "curve.breakpoints",
                "input power must be finite",
            )?;
            ensure(
                (0.0..=1.0).contains(&eta),
                "curve.breakpoints",
                "efficiency must lie in [0, 1]",
            )?;
        }
        for w in breakpoints.windows(2) {
            let ((x0, e0), (x1, e1)) = (w[0], w[1]);
            ensure(
                x1 > x0,
                "curve.breakpoints",
                "input powers must be strictly increasing",
            )?;
            // d(eta*p)/dx >= 0  <=>  eta >= -10 * slope / ln 10 on the segment;
            // eta is linear, so the right endpoint is the binding one.
            let slope = (e1 - e0) / (x1 - x0);
            if slope < 0.0 {
                ensure(
                    e1 >= -10.0 * slope / LN_10,
                    "curve.breakpoints",
                    "efficiency falls fast enough to make output power decrease",
                )?;
            }
        }
        Ok(Self { breakpoints })
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn sensitivity_dbm(&self) -> f64 {
        self.breakpoints[0].0
    }

    pub fn saturation_input_dbm(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1].0
    }

    /// Output power once the rectifier saturates.
    pub fn saturation_output(&self) -> f64 {
        let (dbm, eta) = self.breakpoints[self.breakpoints.len() - 1];
        eta * dbm_to_watts(dbm)
    }

    /// Efficiency at `dbm`, for `dbm` inside the breakpoint range.
    fn efficiency(&self, dbm: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&(x, _)| x <= dbm);
        if idx == 0 {
            return self.breakpoints[0].1;
        }
        if idx >= self.breakpoints.len() {
            return self.breakpoints[self.breakpoints.len() - 1].1;
        }
        let (x0, e0) = self.breakpoints[idx - 1];
        let (x1, e1) = self.breakpoints[idx];
        e0 + (e1 - e0) * (dbm - x0) / (x1 - x0)
    }

    /// DC output (W) for `p_in` W of incident RF power.
    pub fn harvest(&self, p_in: f64) -> f64 {
        if !(p_in > 0.0) {
            return 0.0;
        }
        let dbm = watts_to_dbm(p_in);
        if dbm < self.sensitivity_dbm() {
            return 0.0;
        }
        if dbm >= self.saturation_input_dbm() {
            return self.saturation_output();
        }
        // Clamp guards against rounding pushing the product past the plateau.
        (self.efficiency(dbm) * p_in).min(self.saturation_output())
    }
}

/// Shorthand for [`HarvesterCurve::harvest`].
pub fn harvest(p_in: f64, curve: &HarvesterCurve) -> f64 {
    curve.harvest(p_in)
}

/// Unit-norm combining vectors of a common length.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    codewords: Vec<Vec<Complex64>>,
}

impl Codebook {
    pub fn new(codewords: Vec<Vec<Complex64>>) -> Result<Self> {
        let first = codewords.first().ok_or(Error::EmptyCodebook)?;
        let m = first.len();
        ensure(m >= 1, "codebook", "codewords must be non-empty")?;
        for w in &codewords {
            if w.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    actual: w.len(),
                });
            }
            ensure(
                (linalg::norm_sqr(w) - 1.0).abs() < 1e-9,
                "codebook",
                "codewords must have unit norm",
            )?;
        }
        Ok(Self { codewords })
    }

    pub fn codewords(&self) -> &[Vec<Complex64>] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn n_antennas(&self) -> usize {
        self.codewords.first().map_or(0, Vec::len)
    }
}

/// `M` orthonormal DFT beams; beam `k` has element `m` equal to
/// `exp(j 2 pi k m / M) / sqrt(M)`.
pub fn dft_codebook(m: usize) -> Codebook {
    let m = m.max(1);
    let scale = 1.0 / libm::sqrt(m as f64);
    let codewords = (0..m)
        .map(|k| {
            (0..m)
                .map(|n| {
                    // Reduce k*n mod M before scaling to keep the phase exact.
                    let phase = 2.0 * PI * ((k * n) % m) as f64 / m as f64;
                    Complex64::from_polar(scale, phase)
                })
                .collect()
        })
        .collect();
    Codebook { codewords }
}

/// Per-source channels seen by one multi-antenna receiver.
///
/// `power` scales each source's channel; incident power at antenna `m` from
/// source `s` is `power_s * |h_s[m]|^2`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChannelSnapshot {
    n_antennas: usize,
    gains: Vec<Complex64>,
    powers: Vec<f64>,
}

impl ChannelSnapshot {
    pub fn new(n_antennas: usize) -> Self {
        Self {
            n_antennas,
            gains: Vec::new(),
            powers: Vec::new(),
        }
    }

    pub fn push(&mut self, channel: &[Complex64], power: f64) -> Result<()> {
        if channel.len() != self.n_antennas {
            return Err(Error::DimensionMismatch {
                expected: self.n_antennas,
                actual: channel.len(),
            });
        }
        self.gains.extend_from_slice(channel);
        self.powers.push(power);
        Ok(())
    }

    /// Appends a source whose channel is produced by `fill`.
    pub(crate) fn push_with(&mut self, power: f64, fill: impl FnOnce(&mut Vec<Complex64>)) {
        let before = self.gains.len();
        fill(&mut self.gains);
        debug_assert_eq!(self.gains.len() - before, self.n_antennas);
        self.powers.push(power);
    }

    pub fn n_antennas(&self) -> usize {
        self.n_antennas
    }

    pub fn n_sources(&self) -> usize {
        self.powers.len()
    }

    pub fn sources(&self) -> impl Iterator<Item = (&[Complex64], f64)> {
        self.gains
            .chunks_exact(self.n_antennas.max(1))
            .zip(self.powers.iter().copied())
    }

    /// Incident RF power at each antenna, summed incoherently over sources.
    pub fn antenna_powers(&self) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.n_antennas];
        for (h, p) in self.sources() {
            for (acc, z) in out.iter_mut().zip(h) {
                *acc += p * z.norm_sqr();
            }
        }
        out
    }

    /// `sum_s p_s |w^H h_s|^2` for one combining vector.
    pub fn combined_power(&self, w: &[Complex64]) -> f64 {
        self.sources()
            .map(|(h, p)| p * linalg::inner(w, h).norm_sqr())
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinerChoice {
    pub index: usize,
    pub power: f64,
}

/// Picks the codeword maximizing the combined RF power; ties go to the
/// lowest index.
pub fn rf_combine(snapshot: &ChannelSnapshot, codebook: &Codebook) -> Result<CombinerChoice> {
    if codebook.is_empty() {
        return Err(Error::EmptyCodebook);
    }
    if codebook.n_antennas() != snapshot.n_antennas() {
        return Err(Error::DimensionMismatch {
            expected: snapshot.n_antennas(),
            actual: codebook.n_antennas(),
        });
    }
    let mut best = CombinerChoice {
        index: 0,
        power: f64::NEG_INFINITY,
    };
    for (index, w) in codebook.codewords().iter().enumerate() {
        let power = snapshot.combined_power(w);
        if power > best.power {
            best = CombinerChoice { index, power };
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    Single,
    Dc,
    Rf,
}

impl Architecture {
    pub const ALL: [Architecture; 3] = [Architecture::Single, Architecture::Dc, Architecture::Rf];

    pub fn as_str(&self) -> &'static str {
        match self {
            Architecture::Single => "single",
            Architecture::Dc => "dc",
            Architecture::Rf => "rf",
        }
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Architecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Architecture::Single),
            "dc" => Ok(Architecture::Dc),
            "rf" => Ok(Architecture::Rf),
            other => Err(Error::Unknown {
                kind: "architecture",
                name: String::from(other),
            }),
        }
    }
}

/// DC combining over per-antenna incident powers.
pub fn harvest_dc(antenna_powers: &[f64], curve: &HarvesterCurve) -> f64 {
    antenna_powers.iter().map(|&p| curve.harvest(p)).sum()
}

/// Harvested DC power of a receiver architecture on one channel snapshot.
///
/// `single` uses antenna 0 only. Phase shifters of the RF combiner are
/// assumed lossless and free to drive.
pub fn harvest_architecture(
    snapshot: &ChannelSnapshot,
    arch: Architecture,
    curve: &HarvesterCurve,
    codebook: &Codebook,
) -> Result<f64> {
    if snapshot.n_antennas() == 0 {
        return Err(Error::invalid(
            "snapshot",
            "needs at least one antenna".to_string(),
        ));
    }
    match arch {
        Architecture::Single => {
            let p0: f64 = snapshot.sources().map(|(h, p)| p * h[0].norm_sqr()).sum();
            Ok(curve.harvest(p0))
        }
        Architecture::Dc => Ok(harvest_dc(&snapshot.antenna_powers(), curve)),
        Architecture::Rf => {
            let choice = rf_combine(snapshot, codebook)?;
            Ok(curve.harvest(choice.power))
        }
    }
}
