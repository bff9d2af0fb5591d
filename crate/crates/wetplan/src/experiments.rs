//! Experiment runners. Each one renders its CSV in memory; sweep points run
//! on a rayon pool and are reassembled in input order, so the bytes do not
//! depend on the number of workers.

use std::fmt::Write as _;

use rayon::prelude::*;
use rayon::ThreadPool;

use wetplan_core::beam::{assemble_sweep, solve_point};
use wetplan_core::deploy::{finish, optimize_restart, select_best};
use wetplan_core::econ::{scenario_cost, CostParams, Scenario};
use wetplan_core::outage::{density_config, OutageConfig, OutageResult, OutageRunner};

use crate::config::{CostFile, DeployFile, ExperimentConfig, OutageFile, RfChainsFile};
use crate::error::Result;

pub const COST_HEADER: &str =
    "scenario,n_devices,horizon,battery_life,device_install,device_maintenance,pb_install,pb_opex,total";
pub const DEPLOY_HEADER: &str = "kind,index,x,y,power_w";
pub const OUTAGE_HEADER: &str = "density,architecture,antennas,trials,outage,ci95";
pub const RFCHAINS_HEADER: &str = "m,tx_power_w,consumption_w,is_optimum";

/// Shortest decimal that reads back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn pool(workers: usize) -> Result<ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| crate::Error::Config(format!("workers: {e}")))
}

/// Runs the experiment and returns its CSV text.
pub fn execute(config: &ExperimentConfig, seed: u64, pool: &ThreadPool) -> Result<String> {
    match config {
        ExperimentConfig::Cost(c) => cost_csv(c),
        ExperimentConfig::Deploy(c) => deploy_csv(c, seed, pool),
        ExperimentConfig::Outage(c) => outage_csv(c, seed, pool),
        ExperimentConfig::RfChains(c) => rfchains_csv(c, seed, pool),
    }
}

fn cost_csv(c: &CostFile) -> Result<String> {
    let base = c.params();
    let mut out = format!("{COST_HEADER}\n");
    for &n in &c.n_devices {
        for &horizon in &c.horizons {
            for &life in &c.battery_lives {
                let params = CostParams {
                    horizon,
                    device_battery_life: life,
                    ..base
                };
                for sc in Scenario::ALL {
                    let b = scenario_cost(sc, n, &params)?;
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{}",
                        sc,
                        n,
                        horizon,
                        life,
                        b.device_install_total,
                        b.device_maintenance_total,
                        b.pb_install_total,
                        b.pb_opex_total,
                        b.grand_total
                    )
                    .unwrap();
                }
            }
        }
    }
    Ok(out)
}

fn deploy_csv(c: &DeployFile, seed: u64, pool: &ThreadPool) -> Result<String> {
    let problem = c.problem()?;
    let solver = c.solver()?;
    let candidates: Vec<_> = pool.install(|| {
        (0..solver.restarts)
            .into_par_iter()
            .map(|r| optimize_restart(&problem, &solver, seed, r))
            .collect()
    });
    let best = select_best(candidates).expect("at least one restart");
    let solution = finish(&problem, &solver, best);

    let mut out = format!("{DEPLOY_HEADER}\n");
    for (i, (p, tx)) in solution
        .pb_positions
        .iter()
        .zip(&solution.per_pb_tx_power)
        .enumerate()
    {
        writeln!(out, "pb,{i},{},{},{}", num(p.x), num(p.y), num(*tx)).unwrap();
    }
    for (i, (d, rx)) in problem
        .devices
        .iter()
        .zip(solution.device_powers(&problem))
        .enumerate()
    {
        writeln!(out, "device,{i},{},{},{}", num(d.x), num(d.y), num(rx)).unwrap();
    }
    let w = solution.worst_device_index;
    let d = problem.devices[w];
    writeln!(
        out,
        "min,{w},{},{},{}",
        num(d.x),
        num(d.y),
        num(solution.min_received_power)
    )
    .unwrap();
    Ok(out)
}

/// Outage at one density, trials spread over the pool. Samples come back in
/// trial order and are summed serially.
pub fn outage_point(config: &OutageConfig, pool: &ThreadPool) -> Result<OutageResult> {
    let runner = OutageRunner::new(config)?;
    let samples: Vec<f64> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|i| runner.harvested(i))
            .collect()
    });
    Ok(OutageResult::from_samples(config, &samples))
}

fn outage_csv(c: &OutageFile, seed: u64, pool: &ThreadPool) -> Result<String> {
    let base = c.base(seed)?;
    let mut out = format!("{OUTAGE_HEADER}\n");
    for arch in c.architectures()? {
        let with_arch = OutageConfig {
            arch,
            ..base.clone()
        };
        for &d in &c.densities {
            let r = outage_point(&density_config(&with_arch, d), pool)?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                num(r.density),
                r.arch,
                r.n_antennas,
                r.trials,
                num(r.outage_estimate),
                num(r.ci95_halfwidth)
            )
            .unwrap();
        }
    }
    Ok(out)
}

fn rfchains_csv(c: &RfChainsFile, seed: u64, pool: &ThreadPool) -> Result<String> {
    let scenario = c.scenario();
    scenario.validate()?;
    let m_max = c.m_values.iter().copied().max().unwrap_or(0);
    let devices = scenario.devices(seed);
    let channels = scenario.channels(&devices, m_max, seed);
    let sdr = c.sdr(seed);
    let solutions = pool.install(|| {
        c.m_values
            .par_iter()
            .map(|&m| solve_point(&channels, m, c.gamma_w, &sdr))
            .collect::<wetplan_core::Result<Vec<_>>>()
    })?;
    let sweep = assemble_sweep(&c.m_values, solutions, &c.power_model())?;
    let mut out = format!("{RFCHAINS_HEADER}\n");
    for (i, p) in sweep.points.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            p.n_rf,
            num(p.tx_power),
            num(p.total_consumption),
            u8::from(i == sweep.optimum)
        )
        .unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{resolve, Experiment};
    use wetplan_core::beam::sweep_scenario;
    use wetplan_core::deploy::optimize;
    use wetplan_core::outage::sweep_density;

    fn resolved(e: Experiment, overrides: &[&str]) -> ExperimentConfig {
        let o: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
        resolve(e, toml::Table::new(), &o).unwrap().config
    }

    #[test]
    fn default_cost_sweep_has_twelve_rows() {
        let csv = execute(&resolved(Experiment::Cost, &[]), 0, &pool(1).unwrap()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], COST_HEADER);
        assert_eq!(lines.len(), 13);
        assert!(csv.contains("green_pb,100,15,5,2000.00,0.00,640.00,145.92,2785.92\n"));
    }

    #[test]
    fn parallel_runners_match_serial_library_calls() {
        let p = pool(4).unwrap();
        let ExperimentConfig::Deploy(d) = resolved(Experiment::Deploy, &["solver.restarts=6"])
        else {
            panic!()
        };
        let csv = deploy_csv(&d, 3, &p).unwrap();
        let serial = optimize(&d.problem().unwrap(), &d.solver().unwrap(), 3).unwrap();
        assert!(csv.ends_with(&format!("{}\n", num(serial.min_received_power))));

        let ExperimentConfig::Outage(o) = resolved(
            Experiment::Outage,
            &["trials=200", "architectures=[\"dc\"]"],
        ) else {
            panic!()
        };
        let base = OutageConfig {
            arch: wetplan_core::harvest::Architecture::Dc,
            ..o.base(5).unwrap()
        };
        let serial = sweep_density(&base, &o.densities).unwrap();
        for (d, s) in o.densities.iter().zip(&serial) {
            assert_eq!(&outage_point(&density_config(&base, *d), &p).unwrap(), s);
        }

        let ExperimentConfig::RfChains(r) =
            resolved(Experiment::RfChains, &["m_values=[1, 2, 3, 4, 5, 6]"])
        else {
            panic!()
        };
        let csv = rfchains_csv(&r, 1, &p).unwrap();
        let serial = sweep_scenario(
            &r.scenario(),
            r.gamma_w,
            &r.m_values,
            &r.power_model(),
            &r.sdr(1),
            1,
        )
        .unwrap();
        for (line, pt) in csv.lines().skip(1).zip(&serial.points) {
            assert!(line.starts_with(&format!("{},{},", pt.n_rf, num(pt.tx_power))));
        }
    }

    #[test]
    fn number_format_round_trips() {
        for x in [0.0, 1.0, 1e-6, 2785.92, 1.0 / 3.0, 6.02e23] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(1e-6), "1e-6");
    }
}
