//! Max-min placement of green power beacons (gPBs).
//!
//! Each beacon radiates whatever ambient power is available at its site, up to
//! a cap, omnidirectionally. Average incident powers from different beacons
//! add. The goal is to place `k` beacons so that the worst device receives as
//! much RF power as possible.
//!
//! [`optimize`] runs independent Nelder–Mead searches over the `2k` beacon
//! coordinates from a blend of starting points (device sites, ambient peaks
//! and uniform draws), then polishes the incumbent with shrinking simplex
//! restarts. [`grid_oracle`] enumerates every multiset of grid sites and is
//! used to check the optimizer.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::ambient::AmbientMap;
use crate::channel::{PathLossParams, Position2D};
use crate::error::{ensure, Error, Result};
use crate::nelder_mead::{self, NelderMeadOptions};
use crate::seed;

/// Largest number of beacon tuples [`grid_oracle`] will enumerate.
pub const GRID_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentProblem {
    pub devices: Vec<Position2D>,
    pub map: AmbientMap,
    pub k: usize,
    /// Per-beacon transmit power cap in watts.
    pub cap: f64,
    pub pathloss: PathLossParams,
}

impl DeploymentProblem {
    /// Path loss used for placement by default: exponent 3, no fixed loss.
    pub fn default_pathloss() -> PathLossParams {
        PathLossParams {
            exponent: 3.0,
            fixed_loss_db: 0.0,
            reference_distance: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.k >= 1, "k", "at least one power beacon is required")?;
        ensure(!self.devices.is_empty(), "devices", "must not be empty")?;
        ensure(
            self.cap > 0.0 && self.cap.is_finite(),
            "cap",
            "must be positive and finite",
        )?;
        self.pathloss.validate()?;
        self.map.area().validate()?;
        for d in &self.devices {
            if !self.map.area().contains(d) {
                return Err(Error::OutsideArea { x: d.x, y: d.y });
            }
        }
        Ok(())
    }

    /// Transmit power of a beacon at `pos` (clamped into the area).
    pub fn beacon_power(&self, pos: &Position2D) -> f64 {
        let p = self.map.area().clamp(*pos);
        self.map.power_unchecked(&p).min(self.cap)
    }
}

/// Average RF power incident on `device` from beacons at `pbs`.
pub fn received_power(device: &Position2D, pbs: &[Position2D], problem: &DeploymentProblem) -> f64 {
    pbs.iter()
        .map(|pb| problem.beacon_power(pb) * problem.pathloss.gain(device.distance(pb)))
        .sum()
}

/// Worst-device received power and that device's index (lowest on ties).
pub fn objective(pbs: &[Position2D], problem: &DeploymentProblem) -> (f64, usize) {
    let tx: Vec<f64> = pbs.iter().map(|pb| problem.beacon_power(pb)).collect();
    objective_with_powers(pbs, &tx, problem)
}

fn objective_with_powers(
    pbs: &[Position2D],
    tx: &[f64],
    problem: &DeploymentProblem,
) -> (f64, usize) {
    let mut worst = (f64::INFINITY, 0);
    for (i, dev) in problem.devices.iter().enumerate() {
        let p: f64 = pbs
            .iter()
            .zip(tx)
            .map(|(pb, &t)| t * problem.pathloss.gain(dev.distance(pb)))
            .sum();
        if p < worst.0 {
            worst = (p, i);
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentSolution {
    pub pb_positions: Vec<Position2D>,
    pub per_pb_tx_power: Vec<f64>,
    pub min_received_power: f64,
    pub worst_device_index: usize,
}

impl DeploymentSolution {
    pub fn from_positions(pb_positions: Vec<Position2D>, problem: &DeploymentProblem) -> Self {
        let per_pb_tx_power: Vec<f64> = pb_positions
            .iter()
            .map(|p| problem.beacon_power(p))
            .collect();
        let (min_received_power, worst_device_index) =
            objective_with_powers(&pb_positions, &per_pb_tx_power, problem);
        Self {
            pb_positions,
            per_pb_tx_power,
            min_received_power,
            worst_device_index,
        }
    }

    /// Received power at every device.
    pub fn device_powers(&self, problem: &DeploymentProblem) -> Vec<f64> {
        problem
            .devices
            .iter()
            .map(|d| received_power(d, &self.pb_positions, problem))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Independent multi-start runs.
    pub restarts: usize,
    /// Evaluation budget of one Nelder–Mead run.
    pub max_evals: usize,
    /// Initial simplex edge as a fraction of the larger area side.
    pub initial_step: f64,
    /// Shrinking restarts around the incumbent after the multi-start phase.
    pub polish_rounds: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            restarts: 24,
            max_evals: 3000,
            initial_step: 0.1,
            polish_rounds: 4,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(self.restarts >= 1, "solver.restarts", "must be at least 1")?;
        ensure(
            self.max_evals >= 1,
            "solver.max_evals",
            "must be at least 1",
        )?;
        ensure(
            self.initial_step > 0.0 && self.initial_step.is_finite(),
            "solver.initial_step",
            "must be positive and finite",
        )
    }
}

/// Best point found by one search.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub positions: Vec<Position2D>,
    pub objective: f64,
}

/// Keeps the best clamped point evaluated so far.
struct Tracker<'a> {
    problem: &'a DeploymentProblem,
    best: Candidate,
    scratch: Vec<Position2D>,
}

impl<'a> Tracker<'a> {
    fn new(problem: &'a DeploymentProblem) -> Self {
        Self {
            problem,
            best: Candidate {
                positions: Vec::new(),
                objective: f64::NEG_INFINITY,
            },
            scratch: Vec::with_capacity(problem.k),
        }
    }

    fn eval(&mut self, x: &[f64]) -> f64 {
        let area = self.problem.map.area();
        self.scratch.clear();
        self.scratch.extend(
            x.chunks_exact(2)
                .map(|c| area.clamp(Position2D::new(c[0], c[1]))),
        );
        let (value, _) = objective(&self.scratch, self.problem);
        if value > self.best.objective {
            self.best.objective = value;
            self.best.positions.clone_from(&self.scratch);
        }
        // Minimize the negated max-min objective; Nelder–Mead only compares.
        -value
    }
}

fn flatten(positions: &[Position2D]) -> Vec<f64> {
    positions.iter().flat_map(|p| [p.x, p.y]).collect()
}

fn starting_point<R: Rng>(
    problem: &DeploymentProblem,
    restart: usize,
    rng: &mut R,
) -> Vec<Position2D> {
    let area = problem.map.area();
    let peaks: Vec<Position2D> = problem
        .map
        .components()
        .iter()
        .filter(|c| c.weight > 0.0)
        .map(|c| area.clamp(c.center))
        .collect();
    let jitter = 0.05 * area.width().max(area.height());
    (0..problem.k)
        .map(|i| {
            if restart == 0 {
                // Deterministic seed: beacons on the devices, cycling.
                return problem.devices[i % problem.devices.len()];
            }
            let pick: f64 = rng.random();
            let base = if pick < 0.4 {
                let d = problem.devices[rng.random_range(0..problem.devices.len())];
                Position2D::new(
                    d.x + jitter * (rng.random::<f64>() - 0.5),
                    d.y + jitter * (rng.random::<f64>() - 0.5),
                )
            } else if pick < 0.6 && !peaks.is_empty() {
                peaks[rng.random_range(0..peaks.len())]
            } else {
                Position2D::new(
                    area.min.x + area.width() * rng.random::<f64>(),
                    area.min.y + area.height() * rng.random::<f64>(),
                )
            };
            area.clamp(base)
        })
        .collect()
}

fn search_from(
    problem: &DeploymentProblem,
    solver: &SolverConfig,
    start: &[Position2D],
    step: f64,
    tracker: &mut Tracker<'_>,
) {
    let x0 = flatten(start);
    let steps = vec![step; x0.len()];
    let opts = NelderMeadOptions {
        max_evals: solver.max_evals,
        f_tol: 1e-12,
        x_tol: 1e-6 * problem.map.area().width().max(problem.map.area().height()),
    };
    nelder_mead::minimize(|x| tracker.eval(x), &x0, &steps, &opts);
}

/// One independent multi-start run. Pure in `(problem, solver, seed, restart)`.
pub fn optimize_restart(
    problem: &DeploymentProblem,
    solver: &SolverConfig,
    seed: u64,
    restart: usize,
) -> Candidate {
    let mut rng = seed::stream(seed::derive(seed, &[seed::LABEL_RESTART, restart as u64]));
    let start = starting_point(problem, restart, &mut rng);
    let area = problem.map.area();
    let step = solver.initial_step * area.width().max(area.height());
    let mut tracker = Tracker::new(problem);
    tracker.eval(&flatten(&start));
    search_from(problem, solver, &start, step, &mut tracker);
    tracker.best
}

/// Picks the best candidate; ties keep the earliest (lowest restart index).
pub fn select_best(candidates: impl IntoIterator<Item = Candidate>) -> Option<Candidate> {
    candidates
        .into_iter()
        .fold(None, |best: Option<Candidate>, c| match best {
            Some(b) if b.objective >= c.objective => Some(b),
            _ => Some(c),
        })
}

/// Shrinking-step Nelder–Mead restarts around `incumbent`.
pub fn polish(
    problem: &DeploymentProblem,
    solver: &SolverConfig,
    incumbent: Candidate,
) -> Candidate {
    let area = problem.map.area();
    let mut step = 0.5 * solver.initial_step * area.width().max(area.height());
    let mut tracker = Tracker::new(problem);
    tracker.best = incumbent;
    for _ in 0..solver.polish_rounds {
        let start = tracker.best.positions.clone();
        search_from(problem, solver, &start, step, &mut tracker);
        step *= 0.25;
    }
    tracker.best
}

/// Max-min beacon placement. Reproducible for a given `seed`.
pub fn optimize(
    problem: &DeploymentProblem,
    solver: &SolverConfig,
    seed: u64,
) -> Result<DeploymentSolution> {
    problem.validate()?;
    solver.validate()?;
    let best =
        select_best((0..solver.restarts).map(|r| optimize_restart(problem, solver, seed, r)))
            .expect("at least one restart");
    Ok(finish(problem, solver, best))
}

/// Polishes the multi-start winner and packages it.
pub fn finish(
    problem: &DeploymentProblem,
    solver: &SolverConfig,
    best: Candidate,
) -> DeploymentSolution {
    let best = polish(problem, solver, best);
    DeploymentSolution::from_positions(best.positions, problem)
}

/// `k` beacons placed uniformly at random in the area; the baseline any
/// optimizer should beat.
pub fn random_placement(problem: &DeploymentProblem, seed: u64) -> Vec<Position2D> {
    let area = problem.map.area();
    let mut rng = seed::stream(seed::derive(seed, &[seed::LABEL_BASELINE]));
    (0..problem.k)
        .map(|_| {
            Position2D::new(
                area.min.x + area.width() * rng.random::<f64>(),
                area.min.y + area.height() * rng.random::<f64>(),
            )
        })
        .collect()
}

/// Grid sites with spacing `resolution`, row by row from the lower-left corner.
pub fn grid_sites(problem: &DeploymentProblem, resolution: f64) -> Result<Vec<Position2D>> {
    ensure(
        resolution > 0.0 && resolution.is_finite(),
        "resolution",
        "must be positive and finite",
    )?;
    let area = problem.map.area();
    let nx = (area.width() / resolution + 1e-9) as usize + 1;
    let ny = (area.height() / resolution + 1e-9) as usize + 1;
    let mut sites = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let p = Position2D::new(
                area.min.x + i as f64 * resolution,
                area.min.y + j as f64 * resolution,
            );
            sites.push(area.clamp(p));
        }
    }
    Ok(sites)
}

/// Multisets of size `k` drawn from `n` sites: `C(n + k - 1, k)`.
fn multiset_count(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc.saturating_mul(n as u128 + i) / (i + 1);
    }
    acc
}

/// Exhaustive max-min search over the grid. Beacons may share a site.
pub fn grid_oracle(problem: &DeploymentProblem, resolution: f64) -> Result<DeploymentSolution> {
    problem.validate()?;
    let sites = grid_sites(problem, resolution)?;
    let needed = multiset_count(sites.len(), problem.k);
    if needed > GRID_BUDGET {
        return Err(Error::BudgetExceeded {
            needed,
            budget: GRID_BUDGET,
        });
    }
    let n_dev = problem.devices.len();
    // contribution[s * n_dev + d]: power at device d from a beacon on site s.
    let mut contribution = Vec::with_capacity(sites.len() * n_dev);
    for s in &sites {
        let tx = problem.beacon_power(s);
        for d in &problem.devices {
            contribution.push(tx * problem.pathloss.gain(d.distance(s)));
        }
    }

    struct Search<'a> {
        contribution: &'a [f64],
        n_sites: usize,
        n_dev: usize,
        k: usize,
        chosen: Vec<usize>,
        partial: Vec<Vec<f64>>,
        best_value: f64,
        best: Vec<usize>,
    }

    impl Search<'_> {
        fn descend(&mut self, depth: usize, from: usize) {
            for s in from..self.n_sites {
                let row = &self.contribution[s * self.n_dev..(s + 1) * self.n_dev];
                let (prev, next) = self.partial.split_at_mut(depth + 1);
                for ((dst, src), c) in next[0].iter_mut().zip(&prev[depth]).zip(row) {
                    *dst = src + c;
                }
                self.chosen[depth] = s;
                if depth + 1 == self.k {
                    let v = next[0].iter().copied().fold(f64::INFINITY, f64::min);
                    if v > self.best_value {
                        self.best_value = v;
                        self.best.clone_from(&self.chosen);
                    }
                } else {
                    self.descend(depth + 1, s);
                }
            }
        }
    }

    let mut search = Search {
        contribution: &contribution,
        n_sites: sites.len(),
        n_dev,
        k: problem.k,
        chosen: vec![0; problem.k],
        partial: vec![vec![0.0; n_dev]; problem.k + 1],
        best_value: f64::NEG_INFINITY,
        best: vec![0; problem.k],
    };
    search.descend(0, 0);
    let positions = search.best.iter().map(|&s| sites[s]).collect();
    Ok(DeploymentSolution::from_positions(positions, problem))
}
