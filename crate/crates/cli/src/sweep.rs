//! Cartesian parameter sweeps of the closed-form contrasts.

use std::io::Read;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sgphonon::contrast::{ln_contrast, ContrastOptions, ContrastReport, CONTRAST_CSV_HEADER};
use sgphonon::{
    CouplingChannel, DiaForm, GammaTreatment, MaterialModel, PhysicalConstants, SplitProtocol,
    Truncation,
};

use crate::error::{CliError, CliResult};

/// Default electric-field curvature for the `dipole` channel name, V/m².
pub const DEFAULT_ETA_E: f64 = 30.0;

/// An explicit list, or log spacing with a fixed number of points per decade.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Values(Vec<f64>),
    Log {
        from: f64,
        to: f64,
        per_decade: usize,
    },
}

impl Axis {
    pub fn values(&self) -> CliResult<Vec<f64>> {
        match self {
            Axis::Values(v) => Ok(v.clone()),
            &Axis::Log {
                from,
                to,
                per_decade,
            } => {
                if !(from > 0.0 && to >= from && to.is_finite()) || per_decade == 0 {
                    return Err(CliError::Config(format!(
                        "log axis needs 0 < from <= to and per_decade >= 1, got {from:e}..{to:e} / {per_decade}"
                    )));
                }
                let decades = (to / from).log10();
                let steps = (decades * per_decade as f64).round() as usize;
                let n = if to > from { steps.max(1) + 1 } else { 1 };
                if n > 100_000 {
                    return Err(CliError::Config(format!("log axis too long ({n} points)")));
                }
                Ok(sgphonon_oracle::log_space(from, to, n))
            }
        }
    }
}

fn one(v: f64) -> Axis {
    Axis::Values(vec![v])
}

fn default_flight() -> Axis {
    one(0.0)
}

fn default_eta_e() -> f64 {
    DEFAULT_ETA_E
}

/// Sweep grid file: axis arrays whose cartesian product is swept in the
/// order mass, temperature, separation, duration, flight fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    pub masses: Axis,
    pub temperatures: Axis,
    pub delta_xs: Axis,
    pub delta_ts: Axis,
    #[serde(default = "default_flight")]
    pub flight_fractions: Axis,
    #[serde(default)]
    pub gamma: GammaTreatment,
    #[serde(default)]
    pub truncation: Truncation,
    /// Used by the `dipole` channel.
    #[serde(default = "default_eta_e")]
    pub eta_e: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub mass: f64,
    pub temperature: f64,
    pub delta_x: f64,
    pub delta_t: f64,
    pub flight_fraction: f64,
}

impl std::fmt::Display for SweepPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "M={:e} T={:e} delta_x={:e} delta_t={:e} flight_fraction={:e}",
            self.mass, self.temperature, self.delta_x, self.delta_t, self.flight_fraction
        )
    }
}

impl SweepGrid {
    pub fn from_json(s: &str) -> CliResult<Self> {
        let g: SweepGrid = serde_json::from_str(s)?;
        g.points()?;
        Ok(g)
    }

    pub fn options(&self) -> ContrastOptions {
        ContrastOptions {
            truncation: self.truncation,
            gamma: self.gamma,
            keep_modes: false,
        }
    }

    /// Grid points in sweep order; every axis must be non-empty and finite.
    pub fn points(&self) -> CliResult<Vec<SweepPoint>> {
        let axes = [
            ("masses", self.masses.values()?),
            ("temperatures", self.temperatures.values()?),
            ("delta_xs", self.delta_xs.values()?),
            ("delta_ts", self.delta_ts.values()?),
            ("flight_fractions", self.flight_fractions.values()?),
        ];
        for (name, v) in &axes {
            if v.is_empty() {
                return Err(CliError::Config(format!("axis '{name}' is empty")));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(CliError::Config(format!(
                    "axis '{name}' has non-finite values"
                )));
            }
        }
        let [(_, ms), (_, ts), (_, xs), (_, dts), (_, ffs)] = axes;
        let total = [&ms, &ts, &xs, &dts, &ffs]
            .iter()
            .fold(1usize, |n, v| n.saturating_mul(v.len()));
        if total > 10_000_000 {
            return Err(CliError::Config(format!("grid has {total} points")));
        }
        let mut out = Vec::with_capacity(total);
        for &mass in &ms {
            for &temperature in &ts {
                for &delta_x in &xs {
                    for &delta_t in &dts {
                        for &flight_fraction in &ffs {
                            out.push(SweepPoint {
                                mass,
                                temperature,
                                delta_x,
                                delta_t,
                                flight_fraction,
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `spin`, `dia`, `dipole` (induced, with `eta_e`), or the full channel labels.
pub fn parse_channel(name: &str, eta_e: f64) -> CliResult<CouplingChannel> {
    let ch = match name.trim() {
        "spin" => CouplingChannel::SpinMagnetic,
        "dia" => CouplingChannel::Diamagnetic(DiaForm::Literal),
        "dipole" | "induced_dipole" => CouplingChannel::InducedDipole { e0: 0.0, eta_e },
        other => return Err(CliError::Config(format!("unknown channel '{other}'"))),
    };
    ch.validate()?;
    Ok(ch)
}

pub fn parse_channel_list(list: &str, eta_e: f64) -> CliResult<Vec<CouplingChannel>> {
    let chans = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_channel(s, eta_e))
        .collect::<CliResult<Vec<_>>>()?;
    if chans.is_empty() {
        return Err(CliError::Config("channel list is empty".into()));
    }
    Ok(chans)
}

/// One report per grid point per channel, points outermost. `jobs` worker
/// threads; the output does not depend on it.
pub fn sweep(
    grid: &SweepGrid,
    channels: &[CouplingChannel],
    material: &MaterialModel,
    c: &PhysicalConstants,
    jobs: usize,
) -> CliResult<Vec<ContrastReport>> {
    let points = grid.points()?;
    if channels.is_empty() {
        return Err(CliError::Config("no channels requested".into()));
    }
    let opts = grid.options();
    let tasks: Vec<(usize, SweepPoint, CouplingChannel)> = points
        .iter()
        .enumerate()
        .flat_map(|(i, pt)| channels.iter().map(move |&ch| (i, *pt, ch)))
        .collect();
    let run = || {
        tasks
            .par_iter()
            .map(|&(i, pt, ch)| {
                let eval = || {
                    let p = SplitProtocol::from_target(
                        pt.mass,
                        pt.delta_x,
                        pt.delta_t,
                        pt.flight_fraction,
                    )?;
                    ln_contrast(ch, &p, material, c, pt.temperature, &opts)
                };
                eval().map_err(|source| CliError::Point {
                    index: i,
                    point: format!("{} {pt}", ch.label()),
                    source,
                })
            })
            .collect::<CliResult<Vec<_>>>()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(run)
}

pub fn contrast_csv(reports: &[ContrastReport]) -> String {
    let mut s = String::with_capacity(96 * (reports.len() + 1));
    s.push_str(CONTRAST_CSV_HEADER);
    s.push('\n');
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// A parsed row of a contrast CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastRow {
    pub channel: String,
    #[serde(rename = "M")]
    pub mass: f64,
    pub delta_x: f64,
    pub delta_t: f64,
    pub flight_fraction: f64,
    #[serde(rename = "T")]
    pub temperature: f64,
    pub neg_ln_c: f64,
    pub contrast: f64,
    pub modes_used: usize,
    pub fidelity: String,
}

impl From<&ContrastReport> for ContrastRow {
    fn from(r: &ContrastReport) -> Self {
        ContrastRow {
            channel: r.channel.clone(),
            mass: r.mass,
            delta_x: r.delta_x,
            delta_t: r.delta_t,
            flight_fraction: r.flight_fraction,
            temperature: r.temperature,
            neg_ln_c: r.neg_ln_contrast(),
            contrast: r.contrast,
            modes_used: r.modes_used,
            fidelity: r.fidelity_label(),
        }
    }
}

pub fn read_contrast_csv<R: Read>(r: R) -> CliResult<Vec<ContrastRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Config(format!("contrast CSV: {e}")))?
        .clone();
    let expected: Vec<&str> = CONTRAST_CSV_HEADER.split(',').collect();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(CliError::Config(format!(
            "contrast CSV header must be '{CONTRAST_CSV_HEADER}'"
        )));
    }
    rdr.deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| CliError::Config(format!("contrast CSV row {}: {e}", i + 1)))
        })
        .collect()
}

pub fn parse_contrast_csv(s: &str) -> CliResult<Vec<ContrastRow>> {
    read_contrast_csv(s.as_bytes())
}
