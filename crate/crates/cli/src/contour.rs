//! Threshold contours of contrast maps and the gradient-cap curve.

use std::collections::BTreeMap;

use crate::error::{CliError, CliResult};

/// Values on a rectangular grid, `values[j * xs.len() + i]` at `(xs[i], ys[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
    /// Interpolate in `log10` of the coordinate along each axis.
    pub log_x: bool,
    pub log_y: bool,
    /// Interpolate in `log10` of the value.
    pub log_values: bool,
}

impl Raster {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, values: Vec<f64>) -> CliResult<Self> {
        if xs.len() < 2 || ys.len() < 2 {
            return Err(CliError::Config("raster needs at least 2x2 points".into()));
        }
        if values.len() != xs.len() * ys.len() {
            return Err(CliError::Config(format!(
                "raster has {} values for a {}x{} grid",
                values.len(),
                xs.len(),
                ys.len()
            )));
        }
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
        if !increasing(&xs) || !increasing(&ys) {
            return Err(CliError::Config(
                "raster axes must increase strictly".into(),
            ));
        }
        Ok(Raster {
            xs,
            ys,
            values,
            log_x: false,
            log_y: false,
            log_values: false,
        })
    }

    pub fn with_log_axes(mut self, log_x: bool, log_y: bool, log_values: bool) -> Self {
        self.log_x = log_x;
        self.log_y = log_y;
        self.log_values = log_values;
        self
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.xs.len() + i]
    }

    fn value_t(&self, v: f64) -> f64 {
        if self.log_values {
            v.log10()
        } else {
            v
        }
    }

    fn coord_t(log: bool, v: f64) -> f64 {
        if log {
            v.log10()
        } else {
            v
        }
    }

    fn coord_back(log: bool, v: f64) -> f64 {
        if log {
            10f64.powf(v)
        } else {
            v
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Contour {
    pub threshold: f64,
    pub polylines: Vec<Vec<(f64, f64)>>,
    /// Set when the threshold lies outside the data range.
    pub notice: Option<String>,
}

impl Contour {
    pub fn is_empty(&self) -> bool {
        self.polylines.is_empty()
    }

    /// `polyline,<x_name>,<y_name>` rows.
    pub fn to_csv(&self, x_name: &str, y_name: &str) -> String {
        let mut s = format!("polyline,{x_name},{y_name}\n");
        for (k, line) in self.polylines.iter().enumerate() {
            for &(x, y) in line {
                s.push_str(&format!("{k},{x:e},{y:e}\n"));
            }
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EdgeId {
    /// Between `(i, j)` and `(i + 1, j)`.
    H(usize, usize),
    /// Between `(i, j)` and `(i, j + 1)`.
    V(usize, usize),
}

/// Marching-squares contour at `threshold`; saddle cells are resolved by the cell mean.
pub fn marching_squares(r: &Raster, threshold: f64) -> Contour {
    let finite: Vec<f64> = r.values.iter().copied().filter(|v| v.is_finite()).collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if finite.is_empty() || threshold < lo || threshold > hi || lo == hi {
        return Contour {
            threshold,
            polylines: vec![],
            notice: Some(format!(
                "threshold {threshold:e} outside data range [{lo:e}, {hi:e}]"
            )),
        };
    }
    let usable = |v: f64| v.is_finite() && (!r.log_values || v > 0.0);
    let thr_t = if r.log_values {
        if threshold > 0.0 {
            threshold.log10()
        } else {
            return Contour {
                threshold,
                polylines: vec![],
                notice: Some("non-positive threshold on a log-valued raster".into()),
            };
        }
    } else {
        threshold
    };
    let (nx, ny) = (r.xs.len(), r.ys.len());
    let mut points: BTreeMap<EdgeId, (f64, f64)> = BTreeMap::new();
    let mut edge_point = |e: EdgeId| -> (f64, f64) {
        *points.entry(e).or_insert_with(|| {
            let ((i0, j0), (i1, j1)) = match e {
                EdgeId::H(i, j) => ((i, j), (i + 1, j)),
                EdgeId::V(i, j) => ((i, j), (i, j + 1)),
            };
            let (v0, v1) = (r.value_t(r.at(i0, j0)), r.value_t(r.at(i1, j1)));
            let s = if v1 == v0 {
                0.5
            } else {
                (thr_t - v0) / (v1 - v0)
            };
            let x0 = Raster::coord_t(r.log_x, r.xs[i0]);
            let x1 = Raster::coord_t(r.log_x, r.xs[i1]);
            let y0 = Raster::coord_t(r.log_y, r.ys[j0]);
            let y1 = Raster::coord_t(r.log_y, r.ys[j1]);
            (
                Raster::coord_back(r.log_x, x0 + s * (x1 - x0)),
                Raster::coord_back(r.log_y, y0 + s * (y1 - y0)),
            )
        })
    };
    let mut segments: Vec<(EdgeId, EdgeId)> = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let c = [
                r.at(i, j),
                r.at(i + 1, j),
                r.at(i + 1, j + 1),
                r.at(i, j + 1),
            ];
            if !c.iter().all(|&v| usable(v)) {
                continue;
            }
            let above = |v: f64| r.value_t(v) >= thr_t;
            let case = (above(c[0]) as u8)
                | (above(c[1]) as u8) << 1
                | (above(c[2]) as u8) << 2
                | (above(c[3]) as u8) << 3;
            let bottom = EdgeId::H(i, j);
            let right = EdgeId::V(i + 1, j);
            let top = EdgeId::H(i, j + 1);
            let left = EdgeId::V(i, j);
            let centre_above = || {
                let m = c.iter().map(|&v| r.value_t(v)).sum::<f64>() / 4.0;
                m >= thr_t
            };
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((left, top)),
                5 => {
                    if centre_above() {
                        segments.push((bottom, right));
                        segments.push((left, top));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                10 => {
                    if centre_above() {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    } else {
                        segments.push((bottom, right));
                        segments.push((left, top));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    let chains = stitch(&segments);
    let polylines = chains
        .into_iter()
        .map(|ch| ch.into_iter().map(&mut edge_point).collect())
        .collect();
    Contour {
        threshold,
        polylines,
        notice: None,
    }
}

/// Join segments sharing an edge into maximal chains.
fn stitch(segments: &[(EdgeId, EdgeId)]) -> Vec<Vec<EdgeId>> {
    let mut at: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        at.entry(a).or_default().push(k);
        at.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let next = |e: EdgeId, used: &[bool]| at[&e].iter().copied().find(|&k| !used[k]);
    let mut chains = Vec::new();
    // open chains start at edges touched once, then closed loops
    let starts: Vec<usize> = at
        .values()
        .filter(|v| v.len() == 1)
        .map(|v| v[0])
        .chain(0..segments.len())
        .collect();
    for s in starts {
        if used[s] {
            continue;
        }
        used[s] = true;
        let (a, b) = segments[s];
        let (first, mut cur) = if at[&a].len() == 1 {
            (a, b)
        } else if at[&b].len() == 1 {
            (b, a)
        } else {
            (a, b)
        };
        let mut chain = vec![first, cur];
        while let Some(k) = next(cur, &used) {
            used[k] = true;
            let (p, q) = segments[k];
            cur = if p == cur { q } else { p };
            chain.push(cur);
        }
        chains.push(chain);
    }
    chains
}

/// `ΔX_m` reachable at gradient `eta_cap` for each run duration, mass fixed.
pub fn cap_separation(eta_cap: f64, mass: f64, mu: f64, flight_fraction: f64, delta_t: f64) -> f64 {
    let tau_a = 0.25 * delta_t * (1.0 - flight_fraction);
    2.0 * eta_cap * mu * tau_a * tau_a / mass
}

/// Mass that reaches `delta_x` at gradient `eta_cap` for each run duration.
pub fn cap_mass(eta_cap: f64, delta_x: f64, mu: f64, flight_fraction: f64, delta_t: f64) -> f64 {
    let tau_a = 0.25 * delta_t * (1.0 - flight_fraction);
    2.0 * eta_cap * mu * tau_a * tau_a / delta_x
}
