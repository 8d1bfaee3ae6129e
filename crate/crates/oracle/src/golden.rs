//! Oracle-built reference values of `-ln C` for regression checks.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sgphonon::contrast::{ln_contrast, mode_ln_contrast, ContrastOptions};
use sgphonon::materials::Truncation;
use sgphonon::numerics::{relative_error, NeumaierSum};
use sgphonon::{
    mode_force, CouplingChannel, DiaForm, Error, MaterialModel, Origin, PhysicalConstants, Result,
    SplitProtocol,
};

pub const GOLDEN_HEADER: &str =
    "channel,M,delta_x,delta_t,flight_fraction,T,neg_ln_c,rel_err,method";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenRow {
    pub channel: String,
    #[serde(rename = "M")]
    pub mass: f64,
    pub delta_x: f64,
    pub delta_t: f64,
    pub flight_fraction: f64,
    #[serde(rename = "T")]
    pub temperature: f64,
    pub neg_ln_c: f64,
    /// Oracle against the closed form at build time.
    pub rel_err: f64,
    pub method: String,
}

/// Axes of a golden grid; rows are the cartesian product in the order
/// channel, mass, temperature, separation, duration, flight fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenGrid {
    pub channels: Vec<String>,
    pub masses: Vec<f64>,
    pub temperatures: Vec<f64>,
    pub delta_xs: Vec<f64>,
    pub delta_ts: Vec<f64>,
    pub flight_fractions: Vec<f64>,
}

/// `n` points log-spaced over `[lo, hi]`, end points included exactly.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            (0..n)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i + 1 == n {
                        hi
                    } else {
                        10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)
                    }
                })
                .collect()
        }
    }
}

impl GoldenGrid {
    /// Two masses, two temperatures, 16 separations from 1 µm to 1 mm, one-second runs.
    pub fn contrast_curves() -> Self {
        GoldenGrid {
            channels: vec!["spin".into(), "dia".into()],
            masses: vec![1e-14, 1e-18],
            temperatures: vec![4.0, 300.0],
            delta_xs: log_space(1e-6, 1e-3, 16),
            delta_ts: vec![1.0],
            flight_fractions: vec![0.0],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn len(&self) -> usize {
        self.channels.len()
            * self.masses.len()
            * self.temperatures.len()
            * self.delta_xs.len()
            * self.delta_ts.len()
            * self.flight_fractions.len()
    }

    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::with_capacity(self.len());
        for ch in &self.channels {
            for &mass in &self.masses {
                for &temperature in &self.temperatures {
                    for &delta_x in &self.delta_xs {
                        for &delta_t in &self.delta_ts {
                            for &flight_fraction in &self.flight_fractions {
                                out.push(GridPoint {
                                    channel: ch.clone(),
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
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub channel: String,
    pub mass: f64,
    pub temperature: f64,
    pub delta_x: f64,
    pub delta_t: f64,
    pub flight_fraction: f64,
}

fn channel_named(name: &str) -> Result<CouplingChannel> {
    match name {
        "spin" => Ok(CouplingChannel::SpinMagnetic),
        "dia" => Ok(CouplingChannel::Diamagnetic(DiaForm::Literal)),
        other => Err(Error::Parse(format!(
            "golden tables cover spin and dia only, got '{other}'"
        ))),
    }
}

/// Oracle `-ln C` for one grid point: per-mode transfer functions from the
/// exact segment integrals of the time-domain drive, summed over the same
/// number of modes the closed-form report used.
pub fn oracle_row(
    point: &GridPoint,
    material: &MaterialModel,
    c: &PhysicalConstants,
) -> Result<GoldenRow> {
    let channel = channel_named(&point.channel)?;
    let p = SplitProtocol::from_target(
        point.mass,
        point.delta_x,
        point.delta_t,
        point.flight_fraction,
    )?;
    let opts = ContrastOptions {
        keep_modes: false,
        ..Default::default()
    };
    let analytic = ln_contrast(channel, &p, material, c, point.temperature, &opts)?;
    let n = analytic.modes_used;
    let force = mode_force(channel, &p, material, c)?;
    let knots = force
        .delta_knots(Origin::MaxSeparation)
        .ok_or_else(|| Error::Domain("drive has no exact form".into()))?;
    let omega_0 = material.fundamental_tone(p.mass())?;
    let mut sum = NeumaierSum::default();
    for q in 1..=n {
        let w = q as f64 * omega_0;
        sum.add(mode_ln_contrast(
            knots.fourier_sq(w),
            w,
            point.temperature,
            c,
        )?);
    }
    let neg = -sum.value();
    Ok(GoldenRow {
        channel: point.channel.clone(),
        mass: point.mass,
        delta_x: point.delta_x,
        delta_t: point.delta_t,
        flight_fraction: point.flight_fraction,
        temperature: point.temperature,
        neg_ln_c: neg,
        rel_err: relative_error(neg, analytic.neg_ln_contrast()),
        method: format!("exact_segments;modes={n}"),
    })
}

/// Build every row of `grid`, in grid order.
pub fn golden_table_build(
    grid: &GoldenGrid,
    material: &MaterialModel,
    c: &PhysicalConstants,
) -> Result<Vec<GoldenRow>> {
    grid.points()
        .par_iter()
        .map(|pt| oracle_row(pt, material, c))
        .collect()
}

fn csv_err(e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Parse(format!("{other:?}")),
        }
    } else {
        Error::Parse(e.to_string())
    }
}

pub fn write_golden<W: Write>(rows: &[GoldenRow], mut w: W) -> Result<()> {
    writeln!(w, "{GOLDEN_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{}",
            r.channel,
            r.mass,
            r.delta_x,
            r.delta_t,
            r.flight_fraction,
            r.temperature,
            r.neg_ln_c,
            r.rel_err,
            r.method
        )?;
    }
    Ok(())
}

pub fn golden_to_string(rows: &[GoldenRow]) -> String {
    let mut buf = Vec::new();
    write_golden(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn read_golden<R: Read>(r: R) -> Result<Vec<GoldenRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let expected: Vec<&str> = GOLDEN_HEADER.split(',').collect();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Parse(format!(
            "golden header must be '{GOLDEN_HEADER}'"
        )));
    }
    rdr.deserialize().map(|row| row.map_err(csv_err)).collect()
}

pub fn parse_golden(s: &str) -> Result<Vec<GoldenRow>> {
    read_golden(s.as_bytes())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenDrift {
    pub row: usize,
    pub golden: f64,
    pub current: f64,
    pub rel_err: f64,
}

/// Recompute each golden row with the closed forms and report the relative drift.
pub fn check_golden(
    rows: &[GoldenRow],
    material: &MaterialModel,
    c: &PhysicalConstants,
) -> Result<Vec<GoldenDrift>> {
    rows.par_iter()
        .enumerate()
        .map(|(i, r)| {
            let channel = channel_named(&r.channel)?;
            let p = SplitProtocol::from_target(r.mass, r.delta_x, r.delta_t, r.flight_fraction)?;
            let modes = r
                .method
                .split(';')
                .find_map(|f| f.strip_prefix("modes="))
                .and_then(|n| n.parse::<usize>().ok());
            let truncation = match modes {
                Some(m) => Truncation::Fixed { modes: m },
                None => Truncation::default(),
            };
            let opts = ContrastOptions {
                truncation,
                keep_modes: false,
                ..Default::default()
            };
            let rep = ln_contrast(channel, &p, material, c, r.temperature, &opts)?;
            let current = rep.neg_ln_contrast();
            Ok(GoldenDrift {
                row: i,
                golden: r.neg_ln_c,
                current,
                rel_err: relative_error(current, r.neg_ln_c),
            })
        })
        .collect()
}
