//! Experiment configuration: TOML files layered over built-in defaults.
//!
//! The default tree of each experiment doubles as its schema. User files and
//! `--set key=value` overrides are merged key by key; a key missing from the
//! defaults is rejected with the closest existing sibling as a hint.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use wetplan_core::ambient::{AmbientMap, GaussianComponent, Rect};
use wetplan_core::beam::{PowerModel, RfChainScenario, SdrConfig};
use wetplan_core::channel::{PathLossParams, Position2D, RicianParams};
use wetplan_core::deploy::{DeploymentProblem, SolverConfig};
use wetplan_core::econ::CostParams;
use wetplan_core::harvest::{Architecture, HarvesterCurve};
use wetplan_core::outage::OutageConfig;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    Cost,
    Deploy,
    Outage,
    RfChains,
}

impl Experiment {
    pub const ALL: [Experiment; 4] = [
        Experiment::Cost,
        Experiment::Deploy,
        Experiment::Outage,
        Experiment::RfChains,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Experiment::Cost => "cost",
            Experiment::Deploy => "deploy",
            Experiment::Outage => "outage",
            Experiment::RfChains => "rfchains",
        }
    }

    pub fn csv_name(&self) -> String {
        format!("{}.csv", self.as_str())
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathLoss {
    pub exponent: f64,
    pub fixed_loss_db: f64,
    pub reference_distance: f64,
}

impl From<PathLossParams> for PathLoss {
    fn from(p: PathLossParams) -> Self {
        Self {
            exponent: p.exponent,
            fixed_loss_db: p.fixed_loss_db,
            reference_distance: p.reference_distance,
        }
    }
}

impl PathLoss {
    fn params(&self) -> PathLossParams {
        PathLossParams {
            exponent: self.exponent,
            fixed_loss_db: self.fixed_loss_db,
            reference_distance: self.reference_distance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rician {
    pub k_factor: f64,
}

impl Default for Rician {
    fn default() -> Self {
        Self {
            k_factor: RicianParams::default().k_factor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Harvester {
    /// `[input_dbm, efficiency]` pairs.
    pub breakpoints: Vec<[f64; 2]>,
}

impl Default for Harvester {
    fn default() -> Self {
        Self {
            breakpoints: HarvesterCurve::default()
                .breakpoints()
                .iter()
                .map(|&(x, e)| [x, e])
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostFile {
    pub n_devices: Vec<u64>,
    pub horizons: Vec<u32>,
    pub battery_lives: Vec<u32>,
    pub devices_per_pb: u64,
    pub install_grid_pb: f64,
    pub install_green_pb: f64,
    pub install_battery_pb: f64,
    pub device_install: f64,
    pub device_maintenance_fraction: f64,
    pub battery_pb_annual_fraction: f64,
    pub green_pb_replacement_fraction: f64,
    pub green_pb_replacement_period: f64,
    pub pb_avg_power_w: f64,
    pub hours_per_year: f64,
    pub grid_price_per_kwh: f64,
    pub replace_at_horizon_end: bool,
}

impl Default for CostFile {
    fn default() -> Self {
        let p = CostParams::default();
        Self {
            n_devices: vec![10, 50, 100],
            horizons: vec![p.horizon],
            battery_lives: vec![p.device_battery_life],
            devices_per_pb: p.devices_per_pb,
            install_grid_pb: p.install_grid_pb,
            install_green_pb: p.install_green_pb,
            install_battery_pb: p.install_battery_pb,
            device_install: p.device_install,
            device_maintenance_fraction: p.device_maintenance_fraction,
            battery_pb_annual_fraction: p.battery_pb_annual_fraction,
            green_pb_replacement_fraction: p.green_pb_replacement_fraction,
            green_pb_replacement_period: p.green_pb_replacement_period,
            pb_avg_power_w: p.pb_avg_power,
            hours_per_year: p.hours_per_year,
            grid_price_per_kwh: p.grid_price,
            replace_at_horizon_end: p.replace_at_horizon_end,
        }
    }
}

impl CostFile {
    pub fn params(&self) -> CostParams {
        CostParams {
            devices_per_pb: self.devices_per_pb,
            install_grid_pb: self.install_grid_pb,
            install_green_pb: self.install_green_pb,
            install_battery_pb: self.install_battery_pb,
            device_install: self.device_install,
            device_maintenance_fraction: self.device_maintenance_fraction,
            battery_pb_annual_fraction: self.battery_pb_annual_fraction,
            green_pb_replacement_fraction: self.green_pb_replacement_fraction,
            green_pb_replacement_period: self.green_pb_replacement_period,
            pb_avg_power: self.pb_avg_power_w,
            hours_per_year: self.hours_per_year,
            grid_price: self.grid_price_per_kwh,
            device_battery_life: self.battery_lives.first().copied().unwrap_or(1),
            horizon: self.horizons.first().copied().unwrap_or(1),
            replace_at_horizon_end: self.replace_at_horizon_end,
        }
    }

    fn validate(&self) -> Result<()> {
        non_empty("n_devices", &self.n_devices)?;
        non_empty("horizons", &self.horizons)?;
        non_empty("battery_lives", &self.battery_lives)?;
        check(
            self.n_devices.iter().all(|&n| n >= 1),
            "n_devices",
            "entries must be at least 1",
        )?;
        check(
            self.horizons.iter().all(|&n| n >= 1),
            "horizons",
            "entries must be at least 1",
        )?;
        check(
            self.battery_lives.iter().all(|&n| n >= 1),
            "battery_lives",
            "entries must be at least 1",
        )?;
        model(self.params().validate())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Area {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSource {
    /// Peak available power in watts.
    pub weight: f64,
    pub x: f64,
    pub y: f64,
    /// Gaussian width in meters.
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Solver {
    pub restarts: usize,
    pub max_evals: usize,
    pub initial_step: f64,
    pub polish_rounds: usize,
}

impl Default for Solver {
    fn default() -> Self {
        let s = SolverConfig::default();
        Self {
            restarts: s.restarts,
            max_evals: s.max_evals,
            initial_step: s.initial_step,
            polish_rounds: s.polish_rounds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeployFile {
    pub k: usize,
    pub cap_w: f64,
    pub area: Area,
    pub devices: Vec<[f64; 2]>,
    pub ambient: Vec<AmbientSource>,
    pub pathloss: PathLoss,
    pub solver: Solver,
}

impl Default for DeployFile {
    fn default() -> Self {
        Self {
            k: 2,
            cap_w: 1.0,
            area: Area {
                min_x: 0.0,
                min_y: 0.0,
                max_x: 20.0,
                max_y: 20.0,
            },
            devices: vec![[2.0, 10.0], [10.0, 18.0], [16.0, 9.0]],
            ambient: vec![
                AmbientSource {
                    weight: 3.7,
                    x: 4.0,
                    y: 15.0,
                    width: 3.0,
                },
                AmbientSource {
                    weight: 2.0,
                    x: 15.0,
                    y: 4.0,
                    width: 4.0,
                },
                AmbientSource {
                    weight: 0.8,
                    x: 12.0,
                    y: 14.0,
                    width: 5.0,
                },
            ],
            pathloss: DeploymentProblem::default_pathloss().into(),
            solver: Solver::default(),
        }
    }
}

impl DeployFile {
    pub fn problem(&self) -> Result<DeploymentProblem> {
        let area = Rect::new(
            self.area.min_x,
            self.area.min_y,
            self.area.max_x,
            self.area.max_y,
        );
        let components = self
            .ambient
            .iter()
            .map(|a| GaussianComponent {
                weight: a.weight,
                center: Position2D::new(a.x, a.y),
                width: a.width,
            })
            .collect();
        let map = model(AmbientMap::new(components, area))?;
        let devices: Vec<Position2D> = self
            .devices
            .iter()
            .map(|&[x, y]| Position2D::new(x, y))
            .collect();
        for (i, d) in devices.iter().enumerate() {
            check(
                d.is_finite() && area.contains(d),
                &format!("devices[{i}]"),
                "must lie inside the area",
            )?;
        }
        let problem = DeploymentProblem {
            devices,
            map,
            k: self.k,
            cap: self.cap_w,
            pathloss: self.pathloss.params(),
        };
        model(problem.validate())?;
        Ok(problem)
    }

    pub fn solver(&self) -> Result<SolverConfig> {
        let s = SolverConfig {
            restarts: self.solver.restarts,
            max_evals: self.solver.max_evals,
            initial_step: self.solver.initial_step,
            polish_rounds: self.solver.polish_rounds,
        };
        model(s.validate())?;
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutageFile {
    /// Transmitter densities in transmitters per square meter.
    pub densities: Vec<f64>,
    pub architectures: Vec<String>,
    pub antennas: usize,
    pub element_spacing: f64,
    pub radius: f64,
    pub tx_power_w: f64,
    pub target_w: f64,
    pub trials: usize,
    pub pathloss: PathLoss,
    pub rician: Rician,
    pub harvester: Harvester,
}

impl Default for OutageFile {
    fn default() -> Self {
        let c = OutageConfig::default();
        Self {
            densities: vec![0.5, 1.0, 2.0, 3.0, 4.0],
            architectures: Architecture::ALL
                .iter()
                .map(|a| a.as_str().to_string())
                .collect(),
            antennas: 4,
            element_spacing: c.element_spacing,
            radius: c.disk_radius,
            tx_power_w: c.tx_power,
            target_w: c.target,
            trials: c.trials,
            pathloss: c.pathloss.into(),
            rician: Rician::default(),
            harvester: Harvester::default(),
        }
    }
}

impl OutageFile {
    pub fn architectures(&self) -> Result<Vec<Architecture>> {
        non_empty("architectures", &self.architectures)?;
        self.architectures
            .iter()
            .enumerate()
            .map(|(i, a)| {
                a.parse::<Architecture>().map_err(|_| {
                    Error::Config(format!(
                        "architectures[{i}]: unknown architecture `{a}` (expected one of single, dc, rf)"
                    ))
                })
            })
            .collect()
    }

    /// Base simulation config; the sweep fills in density and architecture.
    pub fn base(&self, seed: u64) -> Result<OutageConfig> {
        let curve = model(HarvesterCurve::new(
            self.harvester
                .breakpoints
                .iter()
                .map(|&[x, e]| (x, e))
                .collect(),
        ))?;
        let c = OutageConfig {
            density: self.densities.first().copied().unwrap_or(0.0),
            disk_radius: self.radius,
            tx_power: self.tx_power_w,
            pathloss: self.pathloss.params(),
            rician: RicianParams {
                k_factor: self.rician.k_factor,
            },
            target: self.target_w,
            arch: Architecture::Dc,
            n_antennas: self.antennas,
            element_spacing: self.element_spacing,
            curve,
            trials: self.trials,
            seed,
        };
        model(c.validate())?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        non_empty("densities", &self.densities)?;
        for (i, d) in self.densities.iter().enumerate() {
            check(
                d.is_finite() && *d >= 0.0,
                &format!("densities[{i}]"),
                "must be non-negative and finite",
            )?;
        }
        self.architectures()?;
        self.base(0).map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Power {
    pub pa_efficiency: f64,
    pub rf_chain_power_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sdr {
    pub tol: f64,
    pub randomizations: usize,
    pub refine_iters: usize,
    pub max_newton_iters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RfChainsFile {
    /// Received RF power required at every device, in watts.
    pub gamma_w: f64,
    pub n_devices: usize,
    pub radius: f64,
    pub m_values: Vec<usize>,
    pub element_spacing: f64,
    pub pathloss: PathLoss,
    pub rician: Rician,
    pub power_model: Power,
    pub sdr: Sdr,
}

impl Default for RfChainsFile {
    fn default() -> Self {
        let s = RfChainScenario::default();
        let p = PowerModel::default();
        let sdr = SdrConfig::default();
        Self {
            gamma_w: 1e-6,
            n_devices: s.n_devices,
            radius: s.radius,
            m_values: (1..=32).collect(),
            element_spacing: s.element_spacing,
            pathloss: s.pathloss.into(),
            rician: Rician::default(),
            power_model: Power {
                pa_efficiency: p.pa_efficiency,
                rf_chain_power_w: p.rf_chain_power,
            },
            sdr: Sdr {
                tol: sdr.tol,
                randomizations: sdr.randomizations,
                refine_iters: sdr.refine_iters,
                max_newton_iters: sdr.max_newton_iters,
            },
        }
    }
}

impl RfChainsFile {
    pub fn scenario(&self) -> RfChainScenario {
        RfChainScenario {
            n_devices: self.n_devices,
            radius: self.radius,
            pathloss: self.pathloss.params(),
            rician: RicianParams {
                k_factor: self.rician.k_factor,
            },
            element_spacing: self.element_spacing,
        }
    }

    pub fn power_model(&self) -> PowerModel {
        PowerModel {
            pa_efficiency: self.power_model.pa_efficiency,
            rf_chain_power: self.power_model.rf_chain_power_w,
        }
    }

    pub fn sdr(&self, seed: u64) -> SdrConfig {
        SdrConfig {
            tol: self.sdr.tol,
            randomizations: self.sdr.randomizations,
            refine_iters: self.sdr.refine_iters,
            max_newton_iters: self.sdr.max_newton_iters,
            seed,
            ..SdrConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        check(
            self.gamma_w > 0.0 && self.gamma_w.is_finite(),
            "gamma_w",
            "must be positive and finite",
        )?;
        check(self.sdr.tol > 0.0, "sdr.tol", "must be positive")?;
        check(
            self.sdr.max_newton_iters >= 1,
            "sdr.max_newton_iters",
            "must be at least 1",
        )?;
        let m_max = self.m_values.iter().copied().max().unwrap_or(0);
        model(wetplan_core::beam::validate_m_values(&self.m_values, m_max))?;
        model(self.scenario().validate())?;
        model(self.power_model().validate())
    }
}

/// A fully resolved experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentConfig {
    Cost(CostFile),
    Deploy(DeployFile),
    Outage(OutageFile),
    RfChains(RfChainsFile),
}

impl ExperimentConfig {
    pub fn experiment(&self) -> Experiment {
        match self {
            ExperimentConfig::Cost(_) => Experiment::Cost,
            ExperimentConfig::Deploy(_) => Experiment::Deploy,
            ExperimentConfig::Outage(_) => Experiment::Outage,
            ExperimentConfig::RfChains(_) => Experiment::RfChains,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ExperimentConfig::Cost(c) => c.validate(),
            ExperimentConfig::Deploy(c) => {
                c.problem()?;
                c.solver().map(|_| ())
            }
            ExperimentConfig::Outage(c) => c.validate(),
            ExperimentConfig::RfChains(c) => c.validate(),
        }
    }
}

/// Configuration plus the expanded tree echoed into the manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub tree: Table,
    pub overrides: Vec<String>,
}

pub fn default_tree(experiment: Experiment) -> Table {
    let value = match experiment {
        Experiment::Cost => Value::try_from(CostFile::default()),
        Experiment::Deploy => Value::try_from(DeployFile::default()),
        Experiment::Outage => Value::try_from(OutageFile::default()),
        Experiment::RfChains => Value::try_from(RfChainsFile::default()),
    };
    match value.expect("defaults serialize") {
        Value::Table(t) => t,
        _ => unreachable!("config structs serialize to tables"),
    }
}

/// Default configuration as a TOML document.
pub fn default_document(experiment: Experiment) -> String {
    toml::to_string(&default_tree(experiment)).expect("defaults serialize")
}

/// Reads `path` (if any), applies `overrides` in order and validates.
pub fn parse_config(
    experiment: Experiment,
    path: Option<&Path>,
    overrides: &[String],
) -> Result<Resolved> {
    let user = match path {
        None => Table::new(),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("cannot read `{}`: {e}", p.display())))?;
            toml::from_str::<Table>(&text)
                .map_err(|e| Error::Config(format!("`{}`: {}", p.display(), e.message().trim())))?
        }
    };
    resolve(experiment, user, overrides)
}

/// Layers `user` and `overrides` over the defaults of `experiment`.
pub fn resolve(experiment: Experiment, user: Table, overrides: &[String]) -> Result<Resolved> {
    let mut tree = default_tree(experiment);
    merge(&mut tree, user, "")?;
    for o in overrides {
        apply_override(&mut tree, o)?;
    }
    let value = Value::Table(tree.clone());
    let config = match experiment {
        Experiment::Cost => ExperimentConfig::Cost(typed(value)?),
        Experiment::Deploy => ExperimentConfig::Deploy(typed(value)?),
        Experiment::Outage => ExperimentConfig::Outage(typed(value)?),
        Experiment::RfChains => ExperimentConfig::RfChains(typed(value)?),
    };
    config.validate()?;
    Ok(Resolved {
        config,
        tree,
        overrides: overrides.to_vec(),
    })
}

fn typed<T: serde::de::DeserializeOwned>(value: Value) -> Result<T> {
    value
        .try_into()
        .map_err(|e: toml::de::Error| Error::Config(e.message().trim().to_string()))
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn unknown_key(table: &Table, prefix: &str, key: &str) -> Error {
    let nearest = table
        .keys()
        .min_by_key(|k| strsim::levenshtein(k, key))
        .map(|k| format!("; did you mean `{}`?", join(prefix, k)))
        .unwrap_or_default();
    Error::Config(format!("{}: unknown key{nearest}", join(prefix, key)))
}

fn merge(dst: &mut Table, src: Table, prefix: &str) -> Result<()> {
    for (key, value) in src {
        let path = join(prefix, &key);
        let Some(slot) = dst.get_mut(&key) else {
            return Err(unknown_key(dst, prefix, &key));
        };
        match (slot, value) {
            (Value::Table(d), Value::Table(s)) => merge(d, s, &path)?,
            (slot, value) => *slot = conform(slot, value, &path)?,
        }
    }
    Ok(())
}

/// Checks `value` against the shape of the default `like`; integers are
/// accepted where floats are expected.
fn conform(like: &Value, value: Value, path: &str) -> Result<Value> {
    match (like, value) {
        (Value::Float(_), Value::Integer(i)) => Ok(Value::Float(i as f64)),
        (Value::Table(d), Value::Table(s)) => {
            let mut out = d.clone();
            merge(&mut out, s, path)?;
            Ok(Value::Table(out))
        }
        (Value::Array(d), Value::Array(items)) => {
            let Some(template) = d.first() else {
                return Ok(Value::Array(items));
            };
            items
                .into_iter()
                .enumerate()
                .map(|(i, item)| {
                    let item_path = format!("{path}[{i}]");
                    if let (Value::Table(t), Value::Table(s)) = (template, &item) {
                        if let Some(missing) = t.keys().find(|k| !s.contains_key(*k)) {
                            return Err(Error::Config(format!(
                                "{item_path}: missing key `{missing}`"
                            )));
                        }
                    }
                    conform(template, item, &item_path)
                })
                .collect::<Result<Vec<_>>>()
                .map(Value::Array)
        }
        (like, value) if like.same_type(&value) => Ok(value),
        (like, value) => Err(Error::Config(format!(
            "{path}: expected {}, found {}",
            like.type_str(),
            value.type_str()
        ))),
    }
}

/// Applies one `key.path=value` override. The value is read as a TOML value
/// and falls back to a bare string.
pub fn apply_override(tree: &mut Table, text: &str) -> Result<()> {
    let (key, raw) = text
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{text}`: expected key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = parse_value(raw).unwrap_or_else(|| Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!(
            "override `{text}`: empty key segment"
        )));
    }
    let mut table = tree;
    let mut prefix = String::new();
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        if !table.contains_key(*part) {
            return Err(unknown_key(table, &prefix, part));
        }
        let path = join(&prefix, part);
        if last {
            let slot = table.get_mut(*part).expect("checked above");
            *slot = conform(slot, value, &path)?;
            return Ok(());
        }
        table = match table.get_mut(*part) {
            Some(Value::Table(t)) => t,
            _ => return Err(Error::Config(format!("{path}: not a table"))),
        };
        prefix = path;
    }
    unreachable!("split yields at least one segment")
}

/// Parses a single TOML value such as `3`, `"dc"` or `[1.0, 2.0]`.
pub fn parse_value(raw: &str) -> Option<Value> {
    let mut t: Table = toml::from_str(&format!("v = {raw}")).ok()?;
    t.remove("v")
}

fn non_empty<T>(name: &str, v: &[T]) -> Result<()> {
    check(!v.is_empty(), name, "must not be empty")
}

fn check(ok: bool, path: &str, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!("{path}: {reason}")))
    }
}

/// Maps model validation errors onto config key paths.
fn model<T>(r: wetplan_core::Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        wetplan_core::Error::InvalidParameter { name, reason } => {
            let path = match name {
                "curve.breakpoints" => "harvester.breakpoints",
                "array.n_antennas" => "antennas",
                "array.element_spacing" => "element_spacing",
                "map.components" => "ambient",
                "map.components.weight" => "ambient.weight",
                "map.components.width" => "ambient.width",
                "map.components.center" => "ambient",
                "cap" => "cap_w",
                "power_model.rf_chain_power" => "power_model.rf_chain_power_w",
                "pb_avg_power" => "pb_avg_power_w",
                "grid_price" => "grid_price_per_kwh",
                other => other,
            };
            Error::Config(format!("{path}: {reason}"))
        }
        wetplan_core::Error::EmptyList(what) => Error::Config(format!("{what}: must not be empty")),
        other => Error::Config(other.to_string()),
    })
}
