//! Total cost of powering an IoT deployment over a planning horizon, for
//! battery-only devices and for three kinds of power beacon (PB).
//!
//! Money is kept in integer cents. Every line item is rounded to the cent
//! once, so a breakdown always sums exactly to its total.
//!
//! Cost model (horizon `T` years, `N` devices, `P = ceil(N / devices_per_pb)`
//! beacons):
//!
//! ```text
//! baseline    N * install + N * R(T, L) * install * maintenance_fraction
//!             R(T, L) = ceil(T / L) - 1   (no replacement in the final period)
//! grid PB     N * install + P * (pb_install + power * hours * T / 1000 * price)
//! battery PB  N * install + P * (pb_install + T * annual_fraction * pb_install)
//! green PB    N * install + P * (pb_install + T * fraction * pb_install / period)
//! ```
//!
//! WET-powered devices need no battery replacement over the horizon.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul};
use core::str::FromStr;

use crate::error::{ensure, Error, Result};

/// An amount of money in integer cents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cents(pub i64);

impl Cents {
    pub const ZERO: Cents = Cents(0);

    /// Rounds a dollar amount to the nearest cent (half away from zero).
    pub fn from_dollars(dollars: f64) -> Cents {
        Cents(libm::round(dollars * 100.0) as i64)
    }

    pub fn as_dollars(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl Add for Cents {
    type Output = Cents;
    fn add(self, rhs: Cents) -> Cents {
        Cents(self.0 + rhs.0)
    }
}

impl Mul<u64> for Cents {
    type Output = Cents;
    fn mul(self, rhs: u64) -> Cents {
        Cents(self.0 * rhs as i64)
    }
}

impl core::iter::Sum for Cents {
    fn sum<I: Iterator<Item = Cents>>(iter: I) -> Cents {
        iter.fold(Cents::ZERO, Add::add)
    }
}

impl fmt::Display for Cents {
    /// Plain decimal dollars, e.g. `2785.92`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:02}", abs / 100, abs % 100)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    Baseline,
    GridPb,
    BatteryPb,
    GreenPb,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::Baseline,
        Scenario::GridPb,
        Scenario::BatteryPb,
        Scenario::GreenPb,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::Baseline => "baseline",
            Scenario::GridPb => "grid_pb",
            Scenario::BatteryPb => "battery_pb",
            Scenario::GreenPb => "green_pb",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.as_str() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "scenario",
                name: String::from(s),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    pub devices_per_pb: u64,
    pub install_grid_pb: f64,
    pub install_green_pb: f64,
    pub install_battery_pb: f64,
    pub device_install: f64,
    /// A battery replacement costs this fraction of the device install cost.
    pub device_maintenance_fraction: f64,
    pub battery_pb_annual_fraction: f64,
    /// Fraction of the gPB install cost spent per replacement period.
    pub green_pb_replacement_fraction: f64,
    pub green_pb_replacement_period: f64,
    /// Average electrical draw of a grid PB in watts.
    pub pb_avg_power: f64,
    pub hours_per_year: f64,
    /// $/kWh.
    pub grid_price: f64,
    pub device_battery_life: u32,
    pub horizon: u32,
    /// Count a replacement at the very end of the horizon as well.
    pub replace_at_horizon_end: bool,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            devices_per_pb: 50,
            install_grid_pb: 300.0,
            install_green_pb: 320.0,
            install_battery_pb: 370.0,
            device_install: 20.0,
            device_maintenance_fraction: 0.5,
            battery_pb_annual_fraction: 0.30,
            green_pb_replacement_fraction: 0.38,
            green_pb_replacement_period: 25.0,
            pb_avg_power: 6.0,
            hours_per_year: 8760.0,
            grid_price: 0.25,
            device_battery_life: 5,
            horizon: 15,
            replace_at_horizon_end: false,
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<()> {
        let money = [
            ("install_grid_pb", self.install_grid_pb),
            ("install_green_pb", self.install_green_pb),
            ("install_battery_pb", self.install_battery_pb),
            ("device_install", self.device_install),
            (
                "device_maintenance_fraction",
                self.device_maintenance_fraction,
            ),
            (
                "battery_pb_annual_fraction",
                self.battery_pb_annual_fraction,
            ),
            (
                "green_pb_replacement_fraction",
                self.green_pb_replacement_fraction,
            ),
            ("pb_avg_power", self.pb_avg_power),
            ("hours_per_year", self.hours_per_year),
            ("grid_price", self.grid_price),
        ];
        for (name, v) in money {
            ensure(
                v >= 0.0 && v.is_finite(),
                name,
                "must be non-negative and finite",
            )?;
        }
        ensure(
            self.devices_per_pb >= 1,
            "devices_per_pb",
            "must be at least 1",
        )?;
        ensure(
            self.green_pb_replacement_period > 0.0 && self.green_pb_replacement_period.is_finite(),
            "green_pb_replacement_period",
            "must be positive",
        )?;
        ensure(
            self.device_battery_life >= 1,
            "device_battery_life",
            "must be at least 1 year",
        )?;
        ensure(self.horizon >= 1, "horizon", "must be at least 1 year")
    }

    /// Battery replacements per device over the horizon.
    pub fn replacements(&self) -> u64 {
        let (t, l) = (self.horizon as u64, self.device_battery_life as u64);
        let periods = t.div_ceil(l);
        if self.replace_at_horizon_end {
            periods
        } else {
            periods - 1
        }
    }

    pub fn pb_count(&self, n_devices: u64) -> u64 {
        n_devices.div_ceil(self.devices_per_pb)
    }

    fn pb_install(&self, scenario: Scenario) -> Cents {
        Cents::from_dollars(match scenario {
            Scenario::Baseline => 0.0,
            Scenario::GridPb => self.install_grid_pb,
            Scenario::BatteryPb => self.install_battery_pb,
            Scenario::GreenPb => self.install_green_pb,
        })
    }

    /// Operating cost of one PB over the whole horizon.
    fn pb_opex(&self, scenario: Scenario) -> Cents {
        let t = self.horizon as f64;
        Cents::from_dollars(match scenario {
            Scenario::Baseline => 0.0,
            Scenario::GridPb => {
                self.pb_avg_power * self.hours_per_year * t / 1000.0 * self.grid_price
            }
            Scenario::BatteryPb => t * self.battery_pb_annual_fraction * self.install_battery_pb,
            Scenario::GreenPb => {
                t * self.green_pb_replacement_fraction * self.install_green_pb
                    / self.green_pb_replacement_period
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostBreakdown {
    pub scenario: Scenario,
    pub n_devices: u64,
    pub horizon_years: u32,
    pub battery_life_years: u32,
    pub device_install_total: Cents,
    pub device_maintenance_total: Cents,
    pub pb_install_total: Cents,
    pub pb_opex_total: Cents,
    pub grand_total: Cents,
}

pub fn scenario_cost(
    scenario: Scenario,
    n_devices: u64,
    params: &CostParams,
) -> Result<CostBreakdown> {
    params.validate()?;
    ensure(n_devices >= 1, "n_devices", "must be at least 1")?;
    let install = Cents::from_dollars(params.device_install);
    let device_install_total = install * n_devices;
    let (device_maintenance_total, pb_install_total, pb_opex_total) = match scenario {
        Scenario::Baseline => {
            let per_event =
                Cents::from_dollars(params.device_install * params.device_maintenance_fraction);
            (
                per_event * (n_devices * params.replacements()),
                Cents::ZERO,
                Cents::ZERO,
            )
        }
        _ => {
            let pbs = params.pb_count(n_devices);
            (
                Cents::ZERO,
                params.pb_install(scenario) * pbs,
                params.pb_opex(scenario) * pbs,
            )
        }
    };
    Ok(CostBreakdown {
        scenario,
        n_devices,
        horizon_years: params.horizon,
        battery_life_years: params.device_battery_life,
        device_install_total,
        device_maintenance_total,
        pb_install_total,
        pb_opex_total,
        grand_total: device_install_total
            + device_maintenance_total
            + pb_install_total
            + pb_opex_total,
    })
}

/// All four scenarios for every device count, grouped by device count.
pub fn sweep_devices(params: &CostParams, n_list: &[u64]) -> Result<Vec<CostBreakdown>> {
    if n_list.is_empty() {
        return Err(Error::EmptyList("n_devices"));
    }
    let mut out = Vec::with_capacity(n_list.len() * Scenario::ALL.len());
    for &n in n_list {
        for sc in Scenario::ALL {
            out.push(scenario_cost(sc, n, params)?);
        }
    }
    Ok(out)
}

/// All four scenarios over a grid of horizons and battery lifetimes.
pub fn sweep_hardware_lifetime(
    params: &CostParams,
    horizons: &[u32],
    battery_lives: &[u32],
    n_devices: u64,
) -> Result<Vec<CostBreakdown>> {
    if horizons.is_empty() {
        return Err(Error::EmptyList("horizon"));
    }
    if battery_lives.is_empty() {
        return Err(Error::EmptyList("battery_life"));
    }
    ensure(
        battery_lives.iter().all(|&l| l > 0),
        "battery_life",
        "must be at least 1 year",
    )?;
    let mut out = Vec::with_capacity(horizons.len() * battery_lives.len() * 4);
    for &horizon in horizons {
        for &life in battery_lives {
            let p = CostParams {
                horizon,
                device_battery_life: life,
                ..*params
            };
            for sc in Scenario::ALL {
                out.push(scenario_cost(sc, n_devices, &p)?);
            }
        }
    }
    Ok(out)
}

/// Smallest device count in `1..=max_n` at which `scenario` is strictly
/// cheaper than the battery-only baseline.
pub fn crossover(params: &CostParams, scenario: Scenario, max_n: u64) -> Result<Option<u64>> {
    for n in 1..=max_n {
        let base = scenario_cost(Scenario::Baseline, n, params)?;
        let other = scenario_cost(scenario, n, params)?;
        if other.grand_total < base.grand_total {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(sc: Scenario, n: u64, p: &CostParams) -> Cents {
        scenario_cost(sc, n, p).unwrap().grand_total
    }

    #[test]
    fn baseline_examples() {
        let p = CostParams {
            horizon: 5,
            device_battery_life: 5,
            ..CostParams::default()
        };
        assert_eq!(total(Scenario::Baseline, 1, &p), Cents(2000));
        let p = CostParams::default();
        assert_eq!(total(Scenario::Baseline, 100, &p), Cents(400_000));
    }

    #[test]
    fn pb_examples_at_one_hundred_devices() {
        let p = CostParams::default();
        assert_eq!(total(Scenario::GreenPb, 100, &p), Cents(278_592));
        assert_eq!(total(Scenario::GridPb, 100, &p), Cents(299_420));
        assert_eq!(total(Scenario::BatteryPb, 100, &p), Cents(607_000));
    }

    #[test]
    fn replacement_counts() {
        let p = |l| CostParams {
            device_battery_life: l,
            ..CostParams::default()
        };
        assert_eq!(p(3).replacements(), 4);
        assert_eq!(p(5).replacements(), 2);
        assert_eq!(p(15).replacements(), 0);
        assert_eq!(p(40).replacements(), 0);
        let end = CostParams {
            replace_at_horizon_end: true,
            ..CostParams::default()
        };
        assert_eq!(end.replacements(), 3);
    }

    #[test]
    fn breakdown_sums() {
        for sc in Scenario::ALL {
            let b = scenario_cost(sc, 137, &CostParams::default()).unwrap();
            assert_eq!(
                b.grand_total,
                b.device_install_total
                    + b.device_maintenance_total
                    + b.pb_install_total
                    + b.pb_opex_total
            );
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            "solar_pb".parse::<Scenario>().map(|_| ()),
            Err(Error::Unknown {
                kind: "scenario",
                name: "solar_pb".into()
            })
        );
        assert_eq!("green_pb".parse::<Scenario>(), Ok(Scenario::GreenPb));
        assert!(sweep_devices(&CostParams::default(), &[]).is_err());
        assert!(sweep_hardware_lifetime(&CostParams::default(), &[15], &[0], 100).is_err());
        assert!(scenario_cost(Scenario::Baseline, 0, &CostParams::default()).is_err());
    }

    #[test]
    fn cents_display() {
        assert_eq!(alloc::format!("{}", Cents(278_592)), "2785.92");
        assert_eq!(alloc::format!("{}", Cents(5)), "0.05");
        assert_eq!(alloc::format!("{}", Cents(-150)), "-1.50");
    }
}
