//! Minimum-power multicast energy beamforming and the power-beacon
//! consumption sweep over the number of RF chains.
//!
//! # Solver
//!
//! The precoder problem `min ||w||^2  s.t.  |h_i^H w|^2 >= gamma` is
//! non-convex. It is lifted to the semidefinite relaxation
//!
//! ```text
//! min tr(W)  s.t.  h_i^H W h_i >= gamma,  W >= 0
//! ```
//!
//! whose dual is `max gamma * sum(l)  s.t.  I - sum(l_i h_i h_i^H) >= 0, l >= 0`.
//! The dual has only `N` variables, so it is solved with a log-barrier
//! path-following Newton method. Along the central path `W = mu * S^-1`
//! (with `S = I - sum(l_i h_i h_i^H)`) is strictly primal feasible and the
//! duality gap is `mu * (M + N)`; the dual objective is a certified lower
//! bound on any precoder's power.
//!
//! A rank-one precoder is then extracted from `W` by Gaussian randomization
//! (`xi = W^{1/2} z`), together with the principal eigenvector and the
//! matched filters, each rescaled to feasibility. The best candidate is
//! polished by successive convex approximation, which keeps every iterate
//! feasible and never increases the power.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::{sample_channel, ArrayConfig, PathLossParams, Position2D, RicianParams};
use crate::error::{ensure, Error, Result};
use crate::linalg::{
    backward_solve_adjoint, cholesky_hermitian, forward_solve, inner, norm_sqr, solve_spd,
};
use crate::seed;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct MulticastProblem {
    /// One amplitude channel (length `M`) per device, path loss included.
    pub channels: Vec<Vec<Complex64>>,
    /// Required received RF power at every device, in watts.
    pub gamma: f64,
}

impl MulticastProblem {
    pub fn validate(&self) -> Result<()> {
        ensure(
            !self.channels.is_empty(),
            "channels",
            "need at least one device",
        )?;
        let m = self.channels[0].len();
        ensure(m >= 1, "channels", "need at least one antenna")?;
        for h in &self.channels {
            if h.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    actual: h.len(),
                });
            }
            ensure(
                h.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
                "channels",
                "entries must be finite",
            )?;
            ensure(norm_sqr(h) > 0.0, "channels", "all-zero channel")?;
        }
        ensure(
            self.gamma > 0.0 && self.gamma.is_finite(),
            "gamma",
            "must be positive and finite",
        )
    }

    pub fn n_antennas(&self) -> usize {
        self.channels[0].len()
    }

    /// `min_i |h_i^H w|^2`.
    pub fn min_received(&self, w: &[Complex64]) -> f64 {
        self.channels
            .iter()
            .map(|h| inner(h, w).norm_sqr())
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSolution {
    pub precoder: Vec<Complex64>,
    /// `||w||^2` in watts.
    pub tx_power: f64,
    pub feasible: bool,
    /// Relaxation (dual) value; no precoder can use less power.
    pub sdr_lower_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdrConfig {
    /// Relative feasibility tolerance reported in [`PrecoderSolution::feasible`].
    pub tol: f64,
    /// Gaussian randomization draws.
    pub randomizations: usize,
    /// Total Newton iterations allowed for the barrier method.
    pub max_newton_iters: usize,
    /// Stop the barrier method once `gap <= gap_tol * bound`.
    pub gap_tol: f64,
    /// Successive convex approximation passes on the best candidate.
    pub refine_iters: usize,
    pub seed: u64,
}

impl Default for SdrConfig {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            randomizations: 200,
            max_newton_iters: 2000,
            gap_tol: 1e-9,
            refine_iters: 200,
            seed: 0,
        }
    }
}

/// Barrier state on the normalized problem (`gamma = 1`, `max ||h|| = 1`).
struct Barrier<'a> {
    h: &'a [Vec<Complex64>],
    m: usize,
}

struct Point {
    lambda: Vec<f64>,
    chol: Vec<Complex64>,
    value: f64,
}

impl<'a> Barrier<'a> {
    fn chol_at(&self, lambda: &[f64]) -> Option<Vec<Complex64>> {
        let m = self.m;
        let mut s = vec![ZERO; m * m];
        for i in 0..m {
            s[i * m + i] = Complex64::new(1.0, 0.0);
        }
        for (h, &l) in self.h.iter().zip(lambda) {
            for r in 0..m {
                for c in 0..m {
                    s[r * m + c] -= h[r] * h[c].conj() * l;
                }
            }
        }
        cholesky_hermitian(&s, m)
    }

    fn value(&self, lambda: &[f64], chol: &[Complex64], mu: f64) -> f64 {
        let m = self.m;
        let logdet: f64 = (0..m).map(|j| 2.0 * libm::log(chol[j * m + j].re)).sum();
        let sum: f64 = lambda.iter().sum();
        let log_l: f64 = lambda.iter().map(|&l| libm::log(l)).sum();
        sum + mu * (logdet + log_l)
    }

    fn point(&self, lambda: Vec<f64>, mu: f64) -> Option<Point> {
        if lambda.iter().any(|&l| !(l > 0.0)) {
            return None;
        }
        let chol = self.chol_at(&lambda)?;
        let value = self.value(&lambda, &chol, mu);
        Some(Point {
            lambda,
            chol,
            value,
        })
    }

    /// `u_i = L^-1 h_i`, so that `h_i^H S^-1 h_j = u_i^H u_j`.
    fn whitened(&self, chol: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.h
            .iter()
            .map(|h| {
                let mut u = h.clone();
                forward_solve(chol, self.m, &mut u);
                u
            })
            .collect()
    }

    /// Newton direction and decrement^2 / mu at `p`.
    fn newton(&self, p: &Point, mu: f64) -> Option<(Vec<f64>, Vec<f64>, f64)> {
        let n = p.lambda.len();
        let u = self.whitened(&p.chol);
        let mut grad = vec![0.0; n];
        let mut neg_hess = vec![0.0; n * n];
        for i in 0..n {
            let qii = norm_sqr(&u[i]);
            grad[i] = 1.0 - mu * qii + mu / p.lambda[i];
            for j in 0..n {
                let q = if i == j {
                    qii * qii
                } else {
                    inner(&u[i], &u[j]).norm_sqr()
                };
                neg_hess[i * n + j] = mu * q;
            }
            neg_hess[i * n + i] += mu / (p.lambda[i] * p.lambda[i]);
        }
        let step = solve_spd(&neg_hess, n, &grad)?;
        let dec2 = grad.iter().zip(&step).map(|(g, s)| g * s).sum::<f64>() / mu;
        Some((grad, step, dec2))
    }
}

/// Central-path result on the normalized problem.
struct Central {
    lambda: Vec<f64>,
    chol: Vec<Complex64>,
    mu: f64,
    iterations: usize,
    converged: bool,
}

fn solve_barrier(h: &[Vec<Complex64>], cfg: &SdrConfig) -> Central {
    let n = h.len();
    let m = h[0].len();
    let barrier = Barrier { h, m };
    let mut mu = 1.0;
    // ||h_i|| <= 1, so sum(l_i h_i h_i^H) <= 1/2 I.
    let mut p = barrier
        .point(vec![0.5 / n as f64; n], mu)
        .expect("initial point is strictly feasible");
    let mut iterations = 0;
    let mut converged = false;

    'outer: loop {
        // Center for the current mu. Close to the boundary the Newton system
        // gets ill-conditioned and steps can creep; a stage gets at most 50.
        for _ in 0..50 {
            if iterations >= cfg.max_newton_iters {
                break 'outer;
            }
            iterations += 1;
            let Some((grad, step, dec2)) = barrier.newton(&p, mu) else {
                break 'outer;
            };
            if dec2 < 1e-9 {
                break;
            }
            let slope: f64 = grad.iter().zip(&step).map(|(g, s)| g * s).sum();
            let mut t = 1.0;
            let mut accepted = None;
            for _ in 0..60 {
                let trial: Vec<f64> = p.lambda.iter().zip(&step).map(|(l, s)| l + t * s).collect();
                if let Some(q) = barrier.point(trial, mu) {
                    if q.value >= p.value + 0.25 * t * slope {
                        accepted = Some(q);
                        break;
                    }
                }
                t *= 0.5;
            }
            match accepted {
                Some(q) if q.lambda != p.lambda => p = q,
                // No progress possible at machine precision: treat as centered.
                _ => break,
            }
        }
        let bound: f64 = p.lambda.iter().sum();
        if mu * (m + n) as f64 <= cfg.gap_tol * bound {
            converged = true;
            break;
        }
        mu *= 0.2;
        // Re-evaluate the barrier value at the new mu.
        let lambda = core::mem::take(&mut p.lambda);
        p = barrier
            .point(lambda, mu)
            .expect("point stays strictly feasible");
    }
    Central {
        lambda: p.lambda,
        chol: p.chol,
        mu,
        iterations,
        converged,
    }
}

/// Rescales `w` so the weakest constraint holds with equality; returns the power.
fn rescale(h: &[Vec<Complex64>], w: &mut [Complex64]) -> Option<f64> {
    let weakest = h
        .iter()
        .map(|hi| inner(hi, w).norm_sqr())
        .fold(f64::INFINITY, f64::min);
    if !(weakest > 0.0) || !weakest.is_finite() {
        return None;
    }
    let s = 1.0 / libm::sqrt(weakest);
    w.iter_mut().for_each(|z| *z *= s);
    Some(norm_sqr(w))
}

/// One successive convex approximation step from a feasible `w`
/// (weakest constraint equal to 1).
///
/// Solves `min ||v||^2 s.t. Re(a_i^H v) >= b_i` with `a_i = c_i h_i`,
/// `c_i = h_i^H w`, `b_i = (1 + |c_i|^2) / 2` through its dual by projected
/// coordinate ascent.
fn sca_step(h: &[Vec<Complex64>], w: &[Complex64]) -> Vec<Complex64> {
    let n = h.len();
    let m = w.len();
    let a: Vec<Vec<Complex64>> = h
        .iter()
        .map(|hi| {
            let c = inner(hi, w);
            hi.iter().map(|z| z * c).collect()
        })
        .collect();
    let b: Vec<f64> = h
        .iter()
        .map(|hi| 0.5 * (1.0 + inner(hi, w).norm_sqr()))
        .collect();
    let mut g = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            g[i * n + j] = 0.5 * inner(&a[i], &a[j]).re;
        }
    }
    let mut nu = vec![0.0; n];
    for _ in 0..5000 {
        let mut change: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..n {
            if g[i * n + i] <= 0.0 {
                continue;
            }
            let mut r = b[i];
            for j in 0..n {
                if j != i {
                    r -= g[i * n + j] * nu[j];
                }
            }
            let next = (r / g[i * n + i]).max(0.0);
            change = change.max((next - nu[i]).abs());
            scale = scale.max(next.abs());
            nu[i] = next;
        }
        if change <= 1e-15 * scale.max(1e-300) {
            break;
        }
    }
    let mut v = vec![ZERO; m];
    for (ai, &ni) in a.iter().zip(&nu) {
        for (vk, ak) in v.iter_mut().zip(ai) {
            *vk += ak * (0.5 * ni);
        }
    }
    v
}

fn principal_direction(chol: &[Complex64], m: usize, start: &[Complex64]) -> Vec<Complex64> {
    // Inverse iteration on S: the largest eigenvector of W = mu S^-1.
    let mut v = start.to_vec();
    if norm_sqr(&v) == 0.0 {
        v[0] = Complex64::new(1.0, 0.0);
    }
    for _ in 0..100 {
        forward_solve(chol, m, &mut v);
        backward_solve_adjoint(chol, m, &mut v);
        let nrm = libm::sqrt(norm_sqr(&v));
        if !(nrm > 0.0) || !nrm.is_finite() {
            break;
        }
        v.iter_mut().for_each(|z| *z /= nrm);
    }
    v
}

/// Minimum-power multicast precoder by SDR, randomization and SCA polishing.
pub fn min_power_precoder(problem: &MulticastProblem, cfg: &SdrConfig) -> Result<PrecoderSolution> {
    min_power_precoder_with(problem, cfg, &[])
}

/// Like [`min_power_precoder`], also trying the caller's `extra` candidates
/// (any nonzero vectors of length `M`) during rank-one extraction.
pub fn min_power_precoder_with(
    problem: &MulticastProblem,
    cfg: &SdrConfig,
    extra: &[Vec<Complex64>],
) -> Result<PrecoderSolution> {
    problem.validate()?;
    ensure(cfg.tol > 0.0, "sdr.tol", "must be positive")?;
    let m = problem.n_antennas();
    let gamma = problem.gamma;

    let scale2 = problem
        .channels
        .iter()
        .map(|h| norm_sqr(h))
        .fold(0.0, f64::max);
    let inv = 1.0 / libm::sqrt(scale2);
    let h: Vec<Vec<Complex64>> = problem
        .channels
        .iter()
        .map(|hi| hi.iter().map(|z| z * inv).collect())
        .collect();
    // Normalized powers map back through this factor.
    let to_watts = gamma / scale2;

    let central = solve_barrier(&h, cfg);
    let bound_hat: f64 = central.lambda.iter().sum();

    let mut best: Option<(Vec<Complex64>, f64)> = None;
    let consider = |mut w: Vec<Complex64>, best: &mut Option<(Vec<Complex64>, f64)>| {
        if let Some(p) = rescale(&h, &mut w) {
            if best.as_ref().map_or(true, |(_, bp)| p < *bp) {
                *best = Some((w, p));
            }
        }
    };

    let sum_h: Vec<Complex64> = (0..m).map(|k| h.iter().map(|hi| hi[k]).sum()).collect();
    consider(principal_direction(&central.chol, m, &sum_h), &mut best);
    for hi in &h {
        consider(hi.clone(), &mut best);
    }
    for w in extra {
        if w.len() == m {
            consider(w.clone(), &mut best);
        }
    }
    let mut rng = seed::stream(seed::derive(cfg.seed, &[seed::LABEL_RANDOMIZE]));
    let root_mu = libm::sqrt(central.mu);
    for _ in 0..cfg.randomizations {
        let mut xi: Vec<Complex64> = (0..m)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im) * (root_mu * core::f64::consts::FRAC_1_SQRT_2)
            })
            .collect();
        // W = mu S^-1 = (sqrt(mu) L^-H)(sqrt(mu) L^-H)^H.
        backward_solve_adjoint(&central.chol, m, &mut xi);
        consider(xi, &mut best);
    }

    let Some((mut w, mut power)) = best else {
        return Err(Error::InfeasiblePoint {
            m,
            reason: "no candidate reaches every device".into(),
        });
    };
    for _ in 0..cfg.refine_iters {
        let mut v = sca_step(&h, &w);
        match rescale(&h, &mut v) {
            Some(p) if p < power * (1.0 - 1e-13) => {
                w = v;
                power = p;
            }
            _ => break,
        }
    }

    // Back to physical units, then re-tighten in those units.
    let mut precoder: Vec<Complex64> = w.iter().map(|z| z * libm::sqrt(to_watts)).collect();
    let weakest = problem.min_received(&precoder);
    if weakest > 0.0 && weakest < gamma {
        let s = libm::sqrt(gamma / weakest);
        precoder.iter_mut().for_each(|z| *z *= s);
    }
    let tx_power = norm_sqr(&precoder);
    let feasible = problem.min_received(&precoder) >= gamma * (1.0 - cfg.tol);
    let solution = PrecoderSolution {
        precoder,
        tx_power,
        feasible,
        sdr_lower_bound: bound_hat * to_watts,
    };
    if !central.converged {
        return Err(Error::NotConverged {
            iterations: central.iterations,
            best: feasible.then(|| Box::new(solution)),
        });
    }
    Ok(solution)
}

/// Power amplifier efficiency and per-chain circuit power of a beacon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModel {
    pub pa_efficiency: f64,
    /// Watts per active RF chain.
    pub rf_chain_power: f64,
}

impl Default for PowerModel {
    fn default() -> Self {
        Self {
            pa_efficiency: 0.35,
            rf_chain_power: 0.5,
        }
    }
}

impl PowerModel {
    pub fn validate(&self) -> Result<()> {
        ensure(
            self.pa_efficiency > 0.0 && self.pa_efficiency <= 1.0,
            "power_model.pa_efficiency",
            "must lie in (0, 1]",
        )?;
        ensure(
            self.rf_chain_power >= 0.0 && self.rf_chain_power.is_finite(),
            "power_model.rf_chain_power",
            "must be non-negative and finite",
        )
    }
}

/// `tx / eta + n_rf * p_rf`.
pub fn consumption(tx_power: f64, n_rf: usize, model: &PowerModel) -> f64 {
    tx_power / model.pa_efficiency + n_rf as f64 * model.rf_chain_power
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsumptionPoint {
    pub n_rf: usize,
    pub tx_power: f64,
    pub total_consumption: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RfChainSweep {
    pub points: Vec<ConsumptionPoint>,
    pub solutions: Vec<PrecoderSolution>,
    /// Index into `points` of the least consumption (lowest `M` on ties).
    pub optimum: usize,
}

impl RfChainSweep {
    pub fn optimum_point(&self) -> &ConsumptionPoint {
        &self.points[self.optimum]
    }
}

/// Devices served by a beacon with a uniform linear array at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct RfChainScenario {
    pub n_devices: usize,
    pub radius: f64,
    pub pathloss: PathLossParams,
    pub rician: RicianParams,
    pub element_spacing: f64,
}

impl Default for RfChainScenario {
    fn default() -> Self {
        Self {
            n_devices: 4,
            radius: 10.0,
            pathloss: PathLossParams::default(),
            rician: RicianParams::default(),
            element_spacing: 0.5,
        }
    }
}

impl RfChainScenario {
    pub fn validate(&self) -> Result<()> {
        ensure(self.n_devices >= 1, "n_devices", "must be at least 1")?;
        ensure(
            self.radius > 0.0 && self.radius.is_finite(),
            "radius",
            "must be positive and finite",
        )?;
        self.pathloss.validate()?;
        self.rician.validate()?;
        ArrayConfig {
            n_antennas: 1,
            element_spacing: self.element_spacing,
        }
        .validate()
    }

    /// Devices uniform on the disk.
    pub fn devices(&self, seed: u64) -> Vec<Position2D> {
        use rand::Rng;
        let mut rng = seed::stream(seed::derive(seed, &[seed::LABEL_DEVICES]));
        (0..self.n_devices)
            .map(|_| {
                let r = self.radius * libm::sqrt(rng.random::<f64>());
                let phi = 2.0 * core::f64::consts::PI * rng.random::<f64>();
                Position2D::new(r * libm::cos(phi), r * libm::sin(phi))
            })
            .collect()
    }

    /// Channels from an `m_max`-element array at the origin to `devices`.
    /// Smaller arrays use the prefix of each channel.
    pub fn channels(&self, devices: &[Position2D], m_max: usize, seed: u64) -> Vec<Vec<Complex64>> {
        let array = ArrayConfig {
            n_antennas: m_max,
            element_spacing: self.element_spacing,
        };
        devices
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let s = seed::derive(seed, &[seed::LABEL_FADING, i as u64]);
                sample_channel(
                    d,
                    &Position2D::ORIGIN,
                    &array,
                    &self.rician,
                    &self.pathloss,
                    s,
                )
            })
            .collect()
    }
}

pub fn validate_m_values(m_values: &[usize], m_max: usize) -> Result<()> {
    if m_values.is_empty() {
        return Err(Error::EmptyList("m_values"));
    }
    ensure(m_values[0] >= 1, "m_values", "antenna counts start at 1")?;
    ensure(
        m_values.windows(2).all(|w| w[0] < w[1]),
        "m_values",
        "must be strictly increasing",
    )?;
    ensure(
        *m_values.last().unwrap() <= m_max,
        "m_values",
        "exceed the channel length",
    )
}

/// Solves the precoder for the first `m` antennas of `channels`.
/// Randomization draws depend on `(sdr.seed, m)` only.
pub fn solve_point(
    channels: &[Vec<Complex64>],
    m: usize,
    gamma: f64,
    sdr: &SdrConfig,
) -> Result<PrecoderSolution> {
    let problem = MulticastProblem {
        channels: channels.iter().map(|h| h[..m].to_vec()).collect(),
        gamma,
    };
    let cfg = SdrConfig {
        seed: seed::derive(sdr.seed, &[seed::LABEL_RANDOMIZE, m as u64]),
        ..*sdr
    };
    min_power_precoder(&problem, &cfg).map_err(|e| Error::InfeasiblePoint {
        m,
        reason: format!("{e}"),
    })
}

/// Builds the consumption curve from per-point solutions (in `m_values` order).
pub fn assemble_sweep(
    m_values: &[usize],
    solutions: Vec<PrecoderSolution>,
    model: &PowerModel,
) -> Result<RfChainSweep> {
    if m_values.is_empty() {
        return Err(Error::EmptyList("m_values"));
    }
    let mut points = Vec::with_capacity(m_values.len());
    for (&m, s) in m_values.iter().zip(&solutions) {
        if !s.feasible {
            return Err(Error::InfeasiblePoint {
                m,
                reason: "precoder violates the power requirement".into(),
            });
        }
        points.push(ConsumptionPoint {
            n_rf: m,
            tx_power: s.tx_power,
            total_consumption: consumption(s.tx_power, m, model),
        });
    }
    let mut optimum = 0;
    for (i, p) in points.iter().enumerate() {
        if p.total_consumption < points[optimum].total_consumption {
            optimum = i;
        }
    }
    Ok(RfChainSweep {
        points,
        solutions,
        optimum,
    })
}

/// Digital beamforming sweep: for each `M` in `m_values` the beacon drives
/// `M` antennas with `M` RF chains over the prefix of `channels`.
pub fn sweep_rf_chains(
    channels: &[Vec<Complex64>],
    gamma: f64,
    m_values: &[usize],
    model: &PowerModel,
    sdr: &SdrConfig,
) -> Result<RfChainSweep> {
    model.validate()?;
    let m_max = channels.first().map_or(0, Vec::len);
    validate_m_values(m_values, m_max)?;
    let solutions = m_values
        .iter()
        .map(|&m| solve_point(channels, m, gamma, sdr))
        .collect::<Result<Vec<_>>>()?;
    assemble_sweep(m_values, solutions, model)
}

/// Scenario form of [`sweep_rf_chains`]: draws devices and nested channels
/// from `seed`.
pub fn sweep_scenario(
    scenario: &RfChainScenario,
    gamma: f64,
    m_values: &[usize],
    model: &PowerModel,
    sdr: &SdrConfig,
    seed: u64,
) -> Result<RfChainSweep> {
    scenario.validate()?;
    let m_max = m_values
        .iter()
        .copied()
        .max()
        .ok_or(Error::EmptyList("m_values"))?;
    let devices = scenario.devices(seed);
    let channels = scenario.channels(&devices, m_max, seed);
    sweep_rf_chains(&channels, gamma, m_values, model, sdr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::steering_vector;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn consumption_examples() {
        let d = PowerModel::default();
        assert_eq!(consumption(0.0, 4, &d), 2.0);
        assert!((consumption(0.35, 1, &d) - 1.5).abs() < 1e-15);
        assert!((consumption(1.0, 8, &d) - (1.0 / 0.35 + 4.0)).abs() < 1e-12);
        assert!((consumption(1.0, 8, &d) - 6.857).abs() < 1e-3);
    }

    #[test]
    fn single_device_is_matched_filter() {
        let h = vec![c(0.3, -0.1), c(-0.2, 0.5), c(0.05, 0.05)];
        let p = MulticastProblem {
            channels: vec![h.clone()],
            gamma: 2.0,
        };
        let s = min_power_precoder(&p, &SdrConfig::default()).unwrap();
        let expected = 2.0 / norm_sqr(&h);
        assert!(((s.tx_power - expected) / expected).abs() < 1e-6);
        // w parallel to h: |h^H w|^2 = ||h||^2 ||w||^2.
        let align = inner(&h, &s.precoder).norm_sqr() / (norm_sqr(&h) * norm_sqr(&s.precoder));
        assert!((align - 1.0).abs() < 1e-9);
        assert!(s.feasible);
        assert!(s.sdr_lower_bound <= s.tx_power * (1.0 + 1e-9));
    }

    #[test]
    fn scalar_case() {
        let p = MulticastProblem {
            channels: vec![vec![c(0.1, 0.2)], vec![c(-0.3, 0.0)], vec![c(0.0, 0.05)]],
            gamma: 1e-3,
        };
        let s = min_power_precoder(&p, &SdrConfig::default()).unwrap();
        let expected = 1e-3 / 0.05f64.powi(2);
        assert!(((s.tx_power - expected) / expected).abs() < 1e-9);
    }

    #[test]
    fn los_single_device_uses_full_array_gain() {
        let a = steering_vector(0.4, &ArrayConfig::new(8));
        let gain = 1e-6;
        let h: Vec<Complex64> = a.iter().map(|z| z * libm::sqrt(gain)).collect();
        let p = MulticastProblem {
            channels: vec![h],
            gamma: 1e-5,
        };
        let s = min_power_precoder(&p, &SdrConfig::default()).unwrap();
        let expected = 1e-5 / (8.0 * gain);
        assert!(((s.tx_power - expected) / expected).abs() < 1e-6);
    }

    #[test]
    fn problem_validation() {
        let bad = MulticastProblem {
            channels: vec![vec![c(0.0, 0.0)]],
            gamma: 1.0,
        };
        assert!(min_power_precoder(&bad, &SdrConfig::default()).is_err());
        let ragged = MulticastProblem {
            channels: vec![vec![c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 1.0)]],
            gamma: 1.0,
        };
        assert!(matches!(
            ragged.validate(),
            Err(Error::DimensionMismatch { .. })
        ));
        let none = MulticastProblem {
            channels: vec![],
            gamma: 1.0,
        };
        assert!(none.validate().is_err());
    }

    #[test]
    fn tiny_newton_budget_reports_non_convergence() {
        let p = MulticastProblem {
            channels: vec![
                vec![c(1.0, 0.0), c(0.2, 0.1)],
                vec![c(0.1, -0.4), c(0.9, 0.0)],
            ],
            gamma: 1.0,
        };
        let cfg = SdrConfig {
            max_newton_iters: 2,
            ..SdrConfig::default()
        };
        match min_power_precoder(&p, &cfg) {
            Err(Error::NotConverged { best, .. }) => {
                let best = best.expect("randomization still finds a feasible precoder");
                assert!(best.feasible);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn m_values_validation() {
        assert_eq!(validate_m_values(&[], 4), Err(Error::EmptyList("m_values")));
        assert!(validate_m_values(&[2, 2], 4).is_err());
        assert!(validate_m_values(&[0, 2], 4).is_err());
        assert!(validate_m_values(&[1, 5], 4).is_err());
        assert!(validate_m_values(&[1, 2, 4], 4).is_ok());
    }

    #[test]
    fn vanishing_gamma_picks_smallest_array() {
        let sc = RfChainScenario::default();
        let ms: Vec<usize> = (2..=8).collect();
        let sweep = sweep_scenario(
            &sc,
            1e-15,
            &ms,
            &PowerModel::default(),
            &SdrConfig::default(),
            3,
        )
        .unwrap();
        assert_eq!(sweep.optimum_point().n_rf, 2);
    }
}
