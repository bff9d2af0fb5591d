use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wetplan::config::{default_document, Experiment};
use wetplan::plot::emit_plot_data;
use wetplan::run::{run, verify, RunRequest};

#[derive(Parser)]
#[command(
    name = "wetplan",
    version,
    about = "Planning experiments for RF wireless energy transfer networks"
)]
struct Cli {
    /// Worker threads (0 = all cores). Results do not depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file; missing keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override one key, e.g. `--set pathloss.exponent=3`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output directory for the CSV and manifest.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Total cost of ownership of the four powering scenarios.
    Cost(RunArgs),
    /// Max-min placement of green power beacons.
    Deploy(RunArgs),
    /// Monte Carlo outage of ambient RF energy harvesting.
    Outage {
        #[command(flatten)]
        args: RunArgs,
        /// Trials per sweep point.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Beacon power consumption versus number of RF chains.
    Rfchains(RunArgs),
    /// Convert an experiment CSV into gnuplot data blocks.
    Plot {
        csv: PathBuf,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run a manifest and check the output digests.
    Verify { manifest: PathBuf },
    /// Print the default configuration of an experiment.
    Defaults {
        #[arg(value_parser = parse_experiment)]
        experiment: Experiment,
    },
}

fn parse_experiment(s: &str) -> Result<Experiment, String> {
    s.parse().map_err(|e: wetplan::Error| e.to_string())
}

fn request(
    experiment: Experiment,
    args: RunArgs,
    extra: Vec<String>,
    workers: usize,
) -> RunRequest {
    let mut overrides = args.set;
    overrides.extend(extra);
    RunRequest {
        experiment,
        config_path: args.config,
        overrides,
        seed: args.seed,
        out_dir: args.out,
        workers,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli.workers;
    let result = match cli.command {
        Command::Cost(a) => run_and_report(request(Experiment::Cost, a, vec![], workers)),
        Command::Deploy(a) => run_and_report(request(Experiment::Deploy, a, vec![], workers)),
        Command::Outage { args, trials } => {
            let extra = trials
                .map(|t| vec![format!("trials={t}")])
                .unwrap_or_default();
            run_and_report(request(Experiment::Outage, args, extra, workers))
        }
        Command::Rfchains(a) => run_and_report(request(Experiment::RfChains, a, vec![], workers)),
        Command::Plot { csv, out } => plot(&csv, out.as_deref()),
        Command::Verify { manifest } => verify_and_report(&manifest, workers),
        Command::Defaults { experiment } => {
            print!("{}", default_document(experiment));
            Ok(true)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run_and_report(req: RunRequest) -> wetplan::Result<bool> {
    let report = run(&req)?;
    println!("wrote {}", report.csv_path.display());
    println!("wrote {}", report.manifest_path.display());
    Ok(true)
}

fn plot(csv: &std::path::Path, out: Option<&std::path::Path>) -> wetplan::Result<bool> {
    let text = std::fs::read_to_string(csv).map_err(|e| wetplan::Error::Io {
        path: csv.to_path_buf(),
        source: e,
    })?;
    let data = emit_plot_data(&text)?;
    match out {
        Some(p) => std::fs::write(p, data).map_err(|e| wetplan::Error::Io {
            path: p.to_path_buf(),
            source: e,
        })?,
        None => print!("{data}"),
    }
    Ok(true)
}

fn verify_and_report(manifest: &std::path::Path, workers: usize) -> wetplan::Result<bool> {
    let checks = verify(manifest, workers)?;
    let mut all = true;
    for c in &checks {
        let status = if c.ok() { "ok" } else { "MISMATCH" };
        println!("{status} {}", c.name);
        if !c.ok() {
            println!("  recorded {}", c.recorded);
            if let Some(d) = &c.on_disk {
                println!("  on disk  {d}");
            }
            println!("  re-run   {}", c.rerun);
        }
        all &= c.ok();
    }
    Ok(all)
}
