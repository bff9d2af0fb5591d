//! Gnuplot-style data blocks from experiment CSV files.
//!
//! Blocks are separated by two blank lines so each series can be selected
//! with `index`. Every block starts with a `# series:` comment.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::experiments::{COST_HEADER, DEPLOY_HEADER, OUTAGE_HEADER, RFCHAINS_HEADER};

struct Rows<'a> {
    header: Vec<&'a str>,
    rows: Vec<Vec<&'a str>>,
}

impl<'a> Rows<'a> {
    fn parse(csv: &'a str) -> Result<Self> {
        let mut lines = csv.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| Error::Plot("CSV is empty".into()))?
            .split(',')
            .collect();
        let mut rows = Vec::new();
        for (i, l) in lines.enumerate() {
            let row: Vec<&str> = l.split(',').collect();
            if row.len() != header.len() {
                return Err(Error::Plot(format!(
                    "row {} has {} fields, expected {}",
                    i + 1,
                    row.len(),
                    header.len()
                )));
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Plot("CSV has no data rows".into()));
        }
        Ok(Self { header, rows })
    }

    fn col(&self, name: &str) -> usize {
        self.header
            .iter()
            .position(|h| *h == name)
            .expect("known schema")
    }

    /// Rows grouped by `key`, groups in first-appearance order.
    fn group_by(&self, key: impl Fn(&[&str]) -> String) -> Vec<(String, Vec<&Vec<&'a str>>)> {
        let mut groups: Vec<(String, Vec<&Vec<&str>>)> = Vec::new();
        for r in &self.rows {
            let k = key(r);
            match groups.iter_mut().find(|(g, _)| *g == k) {
                Some((_, v)) => v.push(r),
                None => groups.push((k, vec![r])),
            }
        }
        groups
    }
}

fn emit_blocks(out: &mut String, groups: &[(String, Vec<&Vec<&str>>)], columns: &[usize]) {
    for (i, (name, rows)) in groups.iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        writeln!(out, "# series: {name}").unwrap();
        for r in rows {
            let fields: Vec<&str> = columns.iter().map(|&c| r[c]).collect();
            writeln!(out, "{}", fields.join(" ")).unwrap();
        }
    }
}

/// Converts one experiment CSV into plot data. The schema is recognized
/// from the header line.
pub fn emit_plot_data(csv: &str) -> Result<String> {
    let t = Rows::parse(csv)?;
    let header = t.header.join(",");
    let mut out = String::new();
    match header.as_str() {
        COST_HEADER => {
            let (sc, n, h, l, total) = (
                t.col("scenario"),
                t.col("n_devices"),
                t.col("horizon"),
                t.col("battery_life"),
                t.col("total"),
            );
            let mut lifetimes: Vec<(&str, &str)> = t.rows.iter().map(|r| (r[h], r[l])).collect();
            lifetimes.sort_unstable();
            lifetimes.dedup();
            let single_lifetime = lifetimes.len() == 1;
            out.push_str("# figure: total cost of ownership\n");
            out.push_str("# x: number of devices\n# y: total cost over the horizon (USD)\n");
            out.push_str("# columns: n_devices total horizon_years battery_life_years\n");
            let groups = t.group_by(|r| {
                if single_lifetime {
                    r[sc].to_string()
                } else {
                    format!("{} horizon={} battery_life={}", r[sc], r[h], r[l])
                }
            });
            emit_blocks(&mut out, &groups, &[n, total, h, l]);
        }
        OUTAGE_HEADER => {
            let (d, a, m, p, ci) = (
                t.col("density"),
                t.col("architecture"),
                t.col("antennas"),
                t.col("outage"),
                t.col("ci95"),
            );
            out.push_str("# figure: energy harvesting outage\n");
            out.push_str("# x: transmitter density (per m^2)\n# y: outage probability\n");
            out.push_str("# columns: density outage ci95\n");
            let groups = t.group_by(|r| format!("{} M={}", r[a], r[m]));
            emit_blocks(&mut out, &groups, &[d, p, ci]);
        }
        RFCHAINS_HEADER => {
            let (m, tx, pc, opt) = (
                t.col("m"),
                t.col("tx_power_w"),
                t.col("consumption_w"),
                t.col("is_optimum"),
            );
            out.push_str("# figure: beacon power consumption versus RF chains\n");
            out.push_str("# x: number of RF chains\n# y: total consumption (W)\n");
            out.push_str("# columns: m consumption_w tx_power_w\n");
            let all = vec![("consumption".to_string(), t.rows.iter().collect::<Vec<_>>())];
            let best: Vec<_> = t.rows.iter().filter(|r| r[opt] == "1").collect();
            if best.len() != 1 {
                return Err(Error::Plot(format!(
                    "expected one optimum row, found {}",
                    best.len()
                )));
            }
            let mut groups = all;
            groups.push(("optimum".to_string(), best));
            emit_blocks(&mut out, &groups, &[m, pc, tx]);
        }
        DEPLOY_HEADER => {
            let (k, x, y, p) = (t.col("kind"), t.col("x"), t.col("y"), t.col("power_w"));
            out.push_str("# figure: power beacon deployment\n");
            out.push_str("# x: x position (m)\n# y: y position (m)\n");
            out.push_str("# columns: x y power_w\n");
            let groups = t.group_by(|r| r[k].to_string());
            emit_blocks(&mut out, &groups, &[x, y, p]);
        }
        other => return Err(Error::Plot(format!("unrecognized CSV header `{other}`"))),
    }
    Ok(out)
}
