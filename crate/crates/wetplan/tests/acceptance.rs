//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! a failure status if any criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::Rng;
use wetplan::config::Experiment;
use wetplan::run::{run, verify, RunRequest};
use wetplan_core::ambient::{AmbientMap, GaussianComponent, Rect};
use wetplan_core::beam::{
    min_power_precoder, sweep_rf_chains, sweep_scenario, MulticastProblem, PowerModel,
    RfChainScenario, SdrConfig,
};
use wetplan_core::channel::{path_gain, steering_vector, ArrayConfig, PathLossParams, Position2D};
use wetplan_core::deploy::{
    grid_oracle, objective, optimize, random_placement, DeploymentProblem, SolverConfig,
};
use wetplan_core::econ::{crossover, scenario_cost, sweep_devices, Cents, CostParams, Scenario};
use wetplan_core::harvest::Architecture;
use wetplan_core::harvest::{dbm_to_watts, HarvesterCurve};
use wetplan_core::outage::{run_outage, trial_breakdown, OutageConfig};
use wetplan_core::seed::{derive, stream};
use wetplan_core::Complex64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1. Cost totals at N = 100, T = 15, L = 5.
fn cost_totals() -> Outcome {
    let p = CostParams::default();
    // Hand arithmetic in cents: 2 beacons serve 100 devices, 2000.00 of
    // device installs, 2 battery replacements at 10.00 per device.
    let devices = 100 * 2000;
    let expected = [
        (Scenario::Baseline, devices + 100 * 2 * 1000),
        (Scenario::GreenPb, devices + 2 * (32_000 + 7_296)),
        (Scenario::GridPb, devices + 2 * (30_000 + 19_710)),
        (Scenario::BatteryPb, devices + 2 * (37_000 + 166_500)),
    ];
    let mut got = Vec::new();
    for (sc, cents) in expected {
        let total = scenario_cost(sc, 100, &p)
            .map_err(|e| e.to_string())?
            .grand_total;
        ensure(total == Cents(cents), || {
            format!("{sc}: {total} != {}", Cents(cents))
        })?;
        got.push(total);
    }
    ensure(
        got[0].0 == 400_000 && got[1].0 == 278_592 && got[2].0 == 299_420 && got[3].0 == 607_000,
        || "reference totals differ".into(),
    )?;
    ensure(
        got[1] < got[2] && got[2] < got[0] && got[0] < got[3],
        || "ordering green < grid < baseline < battery violated".into(),
    )?;
    Ok(format!(
        "baseline {} green {} grid {} battery {}",
        got[0], got[1], got[2], got[3]
    ))
}

// 2. Green beacons undercut the baseline somewhere in [1, 100]; baseline is
// strictly cheapest at N = 5.
fn cost_crossover() -> Outcome {
    let p = CostParams::default();
    let n_star = crossover(&p, Scenario::GreenPb, 100)
        .map_err(|e| e.to_string())?
        .ok_or("no crossover in [1, 100]")?;
    // Independent sweep.
    let rows = sweep_devices(&p, &(1..=100).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
    let total = |n: u64, sc: Scenario| {
        rows.iter()
            .find(|r| r.n_devices == n && r.scenario == sc)
            .unwrap()
            .grand_total
    };
    let swept = (1..=100u64)
        .find(|&n| total(n, Scenario::GreenPb) < total(n, Scenario::Baseline))
        .ok_or("sweep finds no crossover")?;
    ensure(swept == n_star, || {
        format!("crossover {n_star} but sweep finds {swept}")
    })?;
    let base5 = total(5, Scenario::Baseline);
    for sc in [Scenario::GridPb, Scenario::BatteryPb, Scenario::GreenPb] {
        ensure(total(5, sc) > base5, || {
            format!("{sc} not above baseline at N = 5")
        })?;
    }
    Ok(format!(
        "N* = {n_star}, baseline cheapest at N = 5 ({base5})"
    ))
}

// 3. Deployment against the grid oracle and random placement.
fn deployment() -> Outcome {
    let map = AmbientMap::new(
        vec![
            GaussianComponent {
                weight: 3.7,
                center: Position2D::new(4.0, 15.0),
                width: 3.0,
            },
            GaussianComponent {
                weight: 2.0,
                center: Position2D::new(15.0, 4.0),
                width: 4.0,
            },
            GaussianComponent {
                weight: 0.8,
                center: Position2D::new(12.0, 14.0),
                width: 5.0,
            },
        ],
        Rect::new(0.0, 0.0, 20.0, 20.0),
    )
    .unwrap();
    let sets = [
        vec![Position2D::new(6.0, 6.0)],
        vec![Position2D::new(3.0, 3.0), Position2D::new(17.0, 17.0)],
        vec![
            Position2D::new(2.0, 10.0),
            Position2D::new(10.0, 18.0),
            Position2D::new(16.0, 9.0),
        ],
    ];
    let solver = SolverConfig::default();
    let mut worst_ratio = f64::INFINITY;
    for devices in &sets {
        for k in [1, 2] {
            let p = DeploymentProblem {
                devices: devices.clone(),
                map: map.clone(),
                k,
                cap: 1.0,
                pathloss: DeploymentProblem::default_pathloss(),
            };
            let grid = grid_oracle(&p, 0.5)
                .map_err(|e| e.to_string())?
                .min_received_power;
            for seed in 0..5 {
                let s = optimize(&p, &solver, seed).map_err(|e| e.to_string())?;
                let ratio = s.min_received_power / grid;
                worst_ratio = worst_ratio.min(ratio);
                ensure(ratio >= 0.98, || {
                    format!(
                        "{} devices, k = {k}, seed {seed}: ratio {ratio}",
                        devices.len()
                    )
                })?;
                ensure(s.per_pb_tx_power.iter().all(|&t| t <= 1.0), || {
                    "beacon power above 1 W".into()
                })?;
            }
            for seed in 0..10 {
                let s = optimize(&p, &solver, seed).map_err(|e| e.to_string())?;
                let (random, _) = objective(&random_placement(&p, seed), &p);
                ensure(s.min_received_power > random, || {
                    format!(
                        "{} devices, k = {k}: random placement wins on seed {seed}",
                        devices.len()
                    )
                })?;
            }
        }
    }
    Ok(format!(
        "worst optimizer/grid ratio {worst_ratio:.4}, random beaten 60/60"
    ))
}

// 4. Outage Monte Carlo.
fn outage() -> Outcome {
    let sweeps = [
        (Architecture::Single, [1.5, 2.0, 2.5]),
        (Architecture::Dc, [0.5, 0.75, 1.0]),
        (Architecture::Rf, [1.0, 1.5, 2.0]),
    ];
    let mut summary = Vec::new();
    for (arch, densities) in sweeps {
        let results: Vec<_> = densities
            .iter()
            .map(|&density| {
                run_outage(&OutageConfig {
                    density,
                    arch,
                    n_antennas: 4,
                    trials: 10_000,
                    seed: 1,
                    ..OutageConfig::default()
                })
            })
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for w in results.windows(2) {
            let drop = w[0].outage_estimate - w[1].outage_estimate;
            ensure(drop > w[0].ci95_halfwidth + w[1].ci95_halfwidth, || {
                format!(
                    "{arch}: {} -> {} not separated by the CIs",
                    w[0].outage_estimate, w[1].outage_estimate
                )
            })?;
        }
        summary.push(format!(
            "{arch} {:.3}/{:.3}/{:.3}",
            results[0].outage_estimate, results[1].outage_estimate, results[2].outage_estimate
        ));
    }
    let cfg = OutageConfig {
        density: 1.0,
        n_antennas: 4,
        seed: 2,
        ..OutageConfig::default()
    };
    for t in 0..10_000 {
        let b = trial_breakdown(&cfg, t).map_err(|e| e.to_string())?;
        ensure(b.dc_harvested >= b.single_harvested, || {
            format!("trial {t}: DC below antenna 0")
        })?;
        ensure(
            b.codeword_powers.iter().all(|&c| b.rf_input_power >= c),
            || format!("trial {t}: a codeword beats the RF choice"),
        )?;
    }
    Ok(format!(
        "{}; DC >= single and RF >= codewords on 10000/10000 trials",
        summary.join(", ")
    ))
}

// 5. Harvester properties over 10^4 random inputs.
fn harvester() -> Outcome {
    let curves = [
        HarvesterCurve::default(),
        HarvesterCurve::new(vec![(-25.0, 0.1), (-5.0, 0.6), (5.0, 0.55), (12.0, 0.5)]).unwrap(),
    ];
    let mut rng = stream(derive(5, &[]));
    for curve in &curves {
        let mut inputs: Vec<f64> = (0..10_000)
            .map(|_| dbm_to_watts(rng.random_range(-60.0..40.0)))
            .collect();
        inputs.sort_by(f64::total_cmp);
        let sens = dbm_to_watts(curve.sensitivity_dbm());
        let sat_in = dbm_to_watts(curve.saturation_input_dbm());
        let sat = curve.saturation_output();
        let mut prev = 0.0;
        for &p in &inputs {
            let h = curve.harvest(p);
            ensure(h >= prev, || format!("not monotone at {p} W"))?;
            ensure(h <= p, || format!("harvest {h} exceeds input {p}"))?;
            if p < sens {
                ensure(h == 0.0, || {
                    format!("non-zero output {h} below sensitivity")
                })?;
            }
            if p >= sat_in {
                ensure(h == sat, || {
                    format!("output {h} above saturation differs from {sat}")
                })?;
            }
            prev = h;
        }
    }
    Ok(
        "monotone, bounded, zero below sensitivity, flat above saturation on 2 x 10000 inputs"
            .into(),
    )
}

fn brute_force_two_antennas(channels: &[Vec<Complex64>], gamma: f64) -> f64 {
    let steps = 1000;
    let mut best = f64::INFINITY;
    for i in 0..steps {
        let (s, c) = (0.5 * PI * (i as f64 + 0.5) / steps as f64).sin_cos();
        for j in 0..steps {
            let w1 = Complex64::from_polar(s, 2.0 * PI * j as f64 / steps as f64);
            let worst = channels
                .iter()
                .map(|h| (h[0].conj() * c + h[1].conj() * w1).norm_sqr())
                .fold(f64::INFINITY, f64::min);
            best = best.min(gamma / worst);
        }
    }
    best
}

// 6. Beamforming power and RF-chain consumption.
fn beam() -> Outcome {
    let pl = PathLossParams::default();
    let gain = path_gain(7.0, &pl);
    let gamma = 1e-6;
    let h: Vec<Complex64> = steering_vector(-0.7, &ArrayConfig::new(32))
        .into_iter()
        .map(|z| z * gain.sqrt())
        .collect();
    let m_values: Vec<usize> = (1..=32).collect();
    let model = PowerModel::default();
    let sdr = SdrConfig::default();
    let los = sweep_rf_chains(&[h], gamma, &m_values, &model, &sdr).map_err(|e| e.to_string())?;
    for p in &los.points {
        let expected = gamma / (p.n_rf as f64 * gain);
        ensure(((p.tx_power - expected) / expected).abs() <= 1e-6, || {
            format!("LoS M = {}: {} vs {expected}", p.n_rf, p.tx_power)
        })?;
    }

    let mut worst_gap: f64 = 0.0;
    for seed in 0..3 {
        let mut rng = stream(derive(6, &[seed]));
        let channels: Vec<Vec<Complex64>> = (0..3)
            .map(|_| {
                (0..2)
                    .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                    .collect()
            })
            .collect();
        let s = min_power_precoder(
            &MulticastProblem {
                channels: channels.clone(),
                gamma: 1e-3,
            },
            &sdr,
        )
        .map_err(|e| e.to_string())?;
        let brute = brute_force_two_antennas(&channels, 1e-3);
        let gap = ((s.tx_power - brute) / brute).abs();
        worst_gap = worst_gap.max(gap);
        ensure(gap <= 0.02, || {
            format!("M = 2, N = 3 instance {seed}: {gap:.4} from brute force")
        })?;
    }

    let scenario = RfChainScenario::default();
    let mut optima = Vec::new();
    for seed in 0..5 {
        let base = sweep_scenario(&scenario, gamma, &m_values, &model, &sdr, seed)
            .map_err(|e| e.to_string())?;
        for w in base.points.windows(2) {
            ensure(w[1].tx_power <= 1.01 * w[0].tx_power, || {
                format!("seed {seed}: tx power rises at M = {}", w[1].n_rf)
            })?;
        }
        let raised = sweep_scenario(&scenario, 10.0 * gamma, &m_values, &model, &sdr, seed)
            .map_err(|e| e.to_string())?;
        let (a, b) = (base.optimum_point().n_rf, raised.optimum_point().n_rf);
        if seed == 0 {
            ensure(a > 1 && a < 32, || {
                format!("default scenario optimum M = {a} is not interior")
            })?;
        }
        ensure(b >= a, || {
            format!("seed {seed}: optimum falls from {a} to {b} when gamma is raised")
        })?;
        optima.push(format!("{a}->{b}"));
    }
    Ok(format!(
        "LoS exact, brute-force gap {:.2}%, optimum M per seed {}",
        100.0 * worst_gap,
        optima.join(" ")
    ))
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_wetplan"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!(
            "`wetplan {}` failed: {}",
            args.join(" "),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

// 7. Same seed, 1 vs 8 workers: identical bytes; manifests verify.
fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cases: [(Experiment, &[&str]); 4] = [
        (Experiment::Cost, &[]),
        (Experiment::Deploy, &[]),
        (Experiment::Outage, &["--trials", "500"]),
        (
            Experiment::RfChains,
            &["--set", "m_values=[1, 2, 3, 4, 5, 6, 7, 8]"],
        ),
    ];
    for (exp, extra) in cases {
        let mut bytes = Vec::new();
        for workers in ["1", "8"] {
            let dir = tmp.path().join(format!("{exp}-{workers}"));
            let dir_s = dir.to_str().unwrap();
            let mut args = vec![
                "--workers",
                workers,
                exp.as_str(),
                "--seed",
                "7",
                "--out",
                dir_s,
            ];
            args.extend_from_slice(extra);
            run_cli(&args)?;
            bytes.push(std::fs::read(dir.join(exp.csv_name())).map_err(|e| e.to_string())?);
            run_cli(&["verify", dir.join("manifest.txt").to_str().unwrap()])?;
        }
        ensure(bytes[0] == bytes[1], || {
            format!("{exp}: CSV differs between 1 and 8 workers")
        })?;
    }
    // Library path, plus tamper detection.
    let dir = tmp.path().join("tamper");
    let report = run(&RunRequest {
        experiment: Experiment::Cost,
        config_path: None,
        overrides: vec!["n_devices=[5, 500]".into()],
        seed: 0,
        out_dir: dir.clone(),
        workers: 2,
    })
    .map_err(|e| e.to_string())?;
    let checks = verify(&report.manifest_path, 1).map_err(|e| e.to_string())?;
    ensure(checks.iter().all(|c| c.ok()), || {
        "fresh manifest does not verify".into()
    })?;
    std::fs::write(&report.csv_path, b"tampered\n").map_err(|e| e.to_string())?;
    let checks = verify(&report.manifest_path, 1).map_err(|e| e.to_string())?;
    ensure(checks.iter().any(|c| !c.ok()), || {
        "tampered output still verifies".into()
    })?;
    ensure(Path::new(&report.csv_path).exists(), || {
        "csv missing".into()
    })?;
    Ok("cost, deploy, outage, rfchains byte-identical for 1 and 8 workers; digests verify".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 cost totals", cost_totals),
        ("2 cost crossover", cost_crossover),
        ("3 deployment", deployment),
        ("4 outage", outage),
        ("5 harvester", harvester),
        ("6 beam power", beam),
        ("7 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
