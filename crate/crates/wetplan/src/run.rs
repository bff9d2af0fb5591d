use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::{self, Experiment, Resolved};
use crate::error::{Error, Result};
use crate::experiments;
use crate::manifest::{self, sha256_hex, Manifest};

#[derive(Debug, Clone)]
pub struct RunRequest {
    pub experiment: Experiment,
    pub config_path: Option<PathBuf>,
    pub overrides: Vec<String>,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub csv_path: PathBuf,
    pub manifest_path: PathBuf,
    pub manifest: Manifest,
}

/// Resolves the config, runs the experiment and writes `<experiment>.csv`
/// plus the manifest into the output directory. Nothing is left behind on
/// failure.
pub fn run(req: &RunRequest) -> Result<RunReport> {
    let resolved =
        config::parse_config(req.experiment, req.config_path.as_deref(), &req.overrides)?;
    let start = Instant::now();
    let pool = experiments::pool(req.workers)?;
    let csv = experiments::execute(&resolved.config, req.seed, &pool)?;
    let manifest = build_manifest(&resolved, req.seed, start.elapsed().as_secs_f64(), &csv);

    let csv_path = req.out_dir.join(req.experiment.csv_name());
    let manifest_path = req.out_dir.join(manifest::FILE_NAME);
    let mut written = Writer::new(&req.out_dir)?;
    written.write(&csv_path, csv.as_bytes())?;
    written.write(&manifest_path, manifest.render().as_bytes())?;
    written.commit();
    Ok(RunReport {
        csv_path,
        manifest_path,
        manifest,
    })
}

fn build_manifest(resolved: &Resolved, seed: u64, duration_s: f64, csv: &str) -> Manifest {
    let experiment = resolved.config.experiment();
    Manifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        experiment,
        seed,
        duration_s,
        overrides: resolved.overrides.clone(),
        config: resolved.tree.clone(),
        outputs: vec![(experiment.csv_name(), sha256_hex(csv.as_bytes()))],
    }
}

/// Tracks created files and removes them unless committed.
struct Writer {
    created_dir: Option<PathBuf>,
    files: Vec<PathBuf>,
    committed: bool,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self> {
        let created_dir = if dir.exists() {
            None
        } else {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            Some(dir.to_path_buf())
        };
        Ok(Self {
            created_dir,
            files: Vec::new(),
            committed: false,
        })
    }

    fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        self.files.push(path.to_path_buf());
        fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }

    fn commit(mut self) {
        self.committed = true;
    }
}

impl Drop for Writer {
    fn drop(&mut self) {
        if self.committed {
            return;
        }
        for f in &self.files {
            let _ = fs::remove_file(f);
        }
        if let Some(d) = &self.created_dir {
            let _ = fs::remove_dir(d);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FileCheck {
    pub name: String,
    pub recorded: String,
    /// Digest of the file next to the manifest, if present.
    pub on_disk: Option<String>,
    pub rerun: String,
}

impl FileCheck {
    pub fn ok(&self) -> bool {
        self.rerun == self.recorded && self.on_disk.as_deref().map_or(true, |d| d == self.recorded)
    }
}

/// Re-runs the manifest's resolved configuration and compares output
/// digests with the recorded ones and with the files beside the manifest.
pub fn verify(manifest_path: &Path, workers: usize) -> Result<Vec<FileCheck>> {
    let text = fs::read_to_string(manifest_path).map_err(|e| Error::io(manifest_path, e))?;
    let m = Manifest::parse(&text)?;
    if m.outputs.is_empty() {
        return Err(Error::Manifest("no outputs recorded".into()));
    }
    let resolved = config::resolve(m.experiment, m.config.clone(), &[])?;
    let pool = experiments::pool(workers)?;
    let csv = experiments::execute(&resolved.config, m.seed, &pool)?;
    let rerun = sha256_hex(csv.as_bytes());
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    Ok(m.outputs
        .iter()
        .map(|(name, recorded)| FileCheck {
            name: name.clone(),
            recorded: recorded.clone(),
            on_disk: fs::read(dir.join(name)).ok().map(|b| sha256_hex(&b)),
            rerun: if *name == m.experiment.csv_name() {
                rerun.clone()
            } else {
                String::new()
            },
        })
        .collect())
}
