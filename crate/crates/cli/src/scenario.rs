//! Scenario execution: compute everything, then write every output file.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use sgphonon::contrast::{
    induced_dipole_factor, ln_contrast_induced_dipole, ContrastOptions, ContrastReport,
};
use sgphonon::dynamics::{arm_history, ArmHistory};
use sgphonon::{
    mode_force, GammaTreatment, MaterialModel, PhysicalConstants, SplitProtocol, Truncation,
};

use crate::config::{
    DipoleParams, MapParams, Scenario, ScenarioConfig, SweepParams, Trace, TraceParams,
};
use crate::contour::{cap_mass, cap_separation, marching_squares, Raster};
use crate::error::{CliError, CliResult};
use crate::sweep::{contrast_csv, parse_channel, parse_channel_list, sweep, Axis, SweepGrid};

pub const PHASE_SPACE_HEADER: &str = "t,q_L,p_L,q_R,p_R";
pub const DIPOLE_HEADER: &str = "eta_e,factor,neg_ln_c,neg_ln_c_unit_gamma";
pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub scenario: String,
    pub material: MaterialModel,
    pub output_dir: PathBuf,
    pub files: Vec<String>,
    pub wall_time_s: f64,
    pub jobs: usize,
    pub parameters: serde_json::Value,
    pub fidelity_flags: Vec<String>,
    pub non_converged: usize,
    pub notices: Vec<String>,
    pub details: serde_json::Value,
}

/// Files and metadata produced by a scenario, not yet written.
#[derive(Debug, Clone, Default)]
pub struct ScenarioOutput {
    pub files: Vec<(String, String)>,
    pub fidelity_flags: Vec<String>,
    pub non_converged: usize,
    pub notices: Vec<String>,
    pub details: serde_json::Value,
}

impl ScenarioOutput {
    fn absorb(&mut self, reports: &[ContrastReport]) {
        for r in reports {
            let f = r.fidelity_label();
            if !self.fidelity_flags.contains(&f) {
                self.fidelity_flags.push(f);
            }
            if !r.converged {
                self.non_converged += 1;
            }
        }
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s.as_str())
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Replaces the configured material.
    pub material: Option<MaterialModel>,
    /// Replaces the configured worker count.
    pub jobs: Option<usize>,
    /// Directory that relative paths in the config resolve against.
    pub base_dir: PathBuf,
}

pub fn default_jobs() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn ensure_writable(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let probe = dir.join(".sgphonon-write-probe");
    std::fs::write(&probe, b"").map_err(|e| CliError::io(&probe, e))?;
    std::fs::remove_file(&probe).map_err(|e| CliError::io(&probe, e))
}

/// Validate, check the output directory, compute, then write outputs and `summary.json`.
pub fn run_scenario(config: &ScenarioConfig, opts: &RunOptions) -> CliResult<RunSummary> {
    let scenario = config.scenario()?;
    let material = match &opts.material {
        Some(m) => m.clone(),
        None => config.material.resolve(&opts.base_dir)?,
    };
    let jobs = opts
        .jobs
        .or(config.jobs)
        .unwrap_or_else(default_jobs)
        .max(1);
    let out_dir = opts.base_dir.join(&config.output_dir);
    ensure_writable(&out_dir)?;
    let start = Instant::now();
    let c = PhysicalConstants::default();
    let out = compute_scenario(&scenario, &material, &c, jobs)?;
    for (name, body) in &out.files {
        let path = out_dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
    }
    let summary = RunSummary {
        scenario: config.scenario.label().into(),
        material,
        output_dir: out_dir.clone(),
        files: out.files.iter().map(|(n, _)| n.clone()).collect(),
        wall_time_s: start.elapsed().as_secs_f64(),
        jobs,
        parameters: scenario_parameters(&scenario),
        fidelity_flags: out.fidelity_flags,
        non_converged: out.non_converged,
        notices: out.notices,
        details: out.details,
    };
    let path = out_dir.join(SUMMARY_FILE);
    let body = serde_json::to_string_pretty(&summary)?;
    std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
    Ok(summary)
}

fn scenario_parameters(s: &Scenario) -> serde_json::Value {
    let v = match s {
        Scenario::Occupation(p) | Scenario::PhaseSpace(p) => serde_json::to_value(p),
        Scenario::ContrastCurves(p) | Scenario::CustomSweep(p) => serde_json::to_value(p),
        Scenario::ContrastMaps(p) => serde_json::to_value(p),
        Scenario::DipoleEstimate(p) => serde_json::to_value(p),
    };
    v.unwrap_or(serde_json::Value::Null)
}

/// The pure part of a run: output file bodies keyed by file name.
pub fn compute_scenario(
    scenario: &Scenario,
    material: &MaterialModel,
    c: &PhysicalConstants,
    jobs: usize,
) -> CliResult<ScenarioOutput> {
    match scenario {
        Scenario::Occupation(p) => traces(p, material, c, false),
        Scenario::PhaseSpace(p) => traces(p, material, c, true),
        Scenario::ContrastCurves(p) => sweep_scenario("contrast_curves.csv", p, material, c, jobs),
        Scenario::CustomSweep(p) => sweep_scenario("custom_sweep.csv", p, material, c, jobs),
        Scenario::ContrastMaps(p) => maps(p, material, c, jobs),
        Scenario::DipoleEstimate(p) => dipole(p, material, c),
    }
}

pub fn trace_history(
    tr: &Trace,
    material: &MaterialModel,
    c: &PhysicalConstants,
) -> CliResult<(SplitProtocol, ArmHistory)> {
    let ch = parse_channel(&tr.channel, 0.0)?;
    let p = SplitProtocol::from_target(tr.mass, tr.delta_x, tr.delta_t, tr.flight_fraction)?
        .with_b0(tr.b0);
    let force = mode_force(ch, &p, material, c)?;
    let t_end = tr.t_end.unwrap_or(1.25 * p.delta_t());
    Ok((
        p,
        arm_history(&force, tr.omega, tr.temperature, t_end, tr.samples)?,
    ))
}

pub fn phase_space_csv(h: &ArmHistory) -> String {
    let (su, sv) = (h.thermal.sigma_u, h.thermal.sigma_udot);
    let mut s = String::from(PHASE_SPACE_HEADER);
    s.push('\n');
    for r in &h.rows {
        s.push_str(&format!(
            "{:e},{:e},{:e},{:e},{:e}\n",
            r.t,
            r.left.u / su,
            r.left.udot / sv,
            r.right.u / su,
            r.right.udot / sv
        ));
    }
    s
}

fn traces(
    params: &TraceParams,
    material: &MaterialModel,
    c: &PhysicalConstants,
    phase_space: bool,
) -> CliResult<ScenarioOutput> {
    let mut out = ScenarioOutput::default();
    let mut details = Vec::new();
    for tr in &params.traces {
        let (p, h) = trace_history(tr, material, c)?;
        if h.below_fundamental {
            out.notices.push(format!(
                "trace '{}': omega {:e} rad/s lies below the fundamental tone of the diamond",
                tr.label, tr.omega
            ));
        }
        let last = h.rows.last().expect("at least one sample");
        details.push(json!({
            "label": tr.label,
            "n0": h.thermal.n0,
            "sigma_u": h.thermal.sigma_u,
            "sigma_udot": h.thermal.sigma_udot,
            "delta_t": p.delta_t(),
            "eta_b": p.eta_b(),
            "final_n_left": last.n_left,
            "final_n_right": last.n_right,
        }));
        if phase_space {
            out.files
                .push((format!("phase_space_{}.csv", tr.label), phase_space_csv(&h)));
        } else {
            out.files
                .push((format!("occupation_{}.csv", tr.label), h.to_csv()));
        }
    }
    out.details = json!({ "traces": details });
    Ok(out)
}

fn sweep_scenario(
    file: &str,
    params: &SweepParams,
    material: &MaterialModel,
    c: &PhysicalConstants,
    jobs: usize,
) -> CliResult<ScenarioOutput> {
    let channels = parse_channel_list(&params.channels.join(","), params.grid.eta_e)?;
    let reports = sweep(&params.grid, &channels, material, c, jobs)?;
    let mut out = ScenarioOutput::default();
    out.absorb(&reports);
    out.details = json!({ "rows": reports.len() });
    out.files.push((file.into(), contrast_csv(&reports)));
    Ok(out)
}

/// One contrast map: reports in grid order plus the raster of `-ln C`.
pub struct MapResult {
    pub reports: Vec<ContrastReport>,
    pub raster: Raster,
}

#[allow(clippy::too_many_arguments)]
fn map_for(
    xs: Vec<f64>,
    ys: Vec<f64>,
    grid: SweepGrid,
    channel: &str,
    material: &MaterialModel,
    c: &PhysicalConstants,
    jobs: usize,
) -> CliResult<MapResult> {
    let ch = parse_channel(channel, 1.0)?;
    let reports = sweep(&grid, &[ch], material, c, jobs)?;
    let (nx, ny) = (xs.len(), ys.len());
    // sweep order is x outer, y inner
    let mut values = vec![0.0; nx * ny];
    for (k, r) in reports.iter().enumerate() {
        let (i, j) = (k / ny, k % ny);
        values[j * nx + i] = r.neg_ln_contrast();
    }
    let raster = Raster::new(xs, ys, values)?.with_log_axes(true, true, true);
    Ok(MapResult { reports, raster })
}

pub fn map_a(
    m: &MapParams,
    channel: &str,
    material: &MaterialModel,
    c: &PhysicalConstants,
    jobs: usize,
) -> CliResult<MapResult> {
    let grid = SweepGrid {
        masses: Axis::Values(vec![m.grid_a.mass]),
        temperatures: Axis::Values(vec![m.temperature]),
        delta_xs: m.grid_a.delta_xs.clone(),
        delta_ts: m.grid_a.delta_ts.clone(),
        flight_fractions: Axis::Values(vec![m.flight_fraction]),
        gamma: m.gamma,
        truncation: m.truncation,
        eta_e: 1.0,
    };
    map_for(
        m.grid_a.delta_xs.values()?,
        m.grid_a.delta_ts.values()?,
        grid,
        channel,
        material,
        c,
        jobs,
    )
}

pub fn map_b(
    m: &MapParams,
    channel: &str,
    material: &MaterialModel,
    c: &PhysicalConstants,
    jobs: usize,
) -> CliResult<MapResult> {
    let grid = SweepGrid {
        masses: m.grid_b.masses.clone(),
        temperatures: Axis::Values(vec![m.temperature]),
        delta_xs: Axis::Values(vec![m.grid_b.delta_x]),
        delta_ts: m.grid_b.delta_ts.clone(),
        flight_fractions: Axis::Values(vec![m.flight_fraction]),
        gamma: m.gamma,
        truncation: m.truncation,
        eta_e: 1.0,
    };
    map_for(
        m.grid_b.masses.values()?,
        m.grid_b.delta_ts.values()?,
        grid,
        channel,
        material,
        c,
        jobs,
    )
}

fn curve_csv(x_name: &str, y_name: &str, pts: &[(f64, f64)]) -> String {
    let mut s = format!("{x_name},{y_name}\n");
    for &(x, y) in pts {
        s.push_str(&format!("{x:e},{y:e}\n"));
    }
    s
}

fn maps(
    m: &MapParams,
    material: &MaterialModel,
    c: &PhysicalConstants,
    jobs: usize,
) -> CliResult<ScenarioOutput> {
    let mut out = ScenarioOutput::default();
    let mut details = serde_json::Map::new();
    let mu = c.mu();
    for (tag, x_name) in [("a", "delta_x"), ("b", "M")] {
        for ch in &m.channels {
            let res = if tag == "a" {
                map_a(m, ch, material, c, jobs)?
            } else {
                map_b(m, ch, material, c, jobs)?
            };
            out.absorb(&res.reports);
            let contour = marching_squares(&res.raster, m.threshold);
            if let Some(n) = &contour.notice {
                out.notices.push(format!("map {tag} {ch}: {n}"));
            }
            details.insert(
                format!("{tag}_{ch}"),
                json!({
                    "points": res.reports.len(),
                    "contour_polylines": contour.polylines.len(),
                    "contour_points": contour.polylines.iter().map(Vec::len).sum::<usize>(),
                }),
            );
            out.files
                .push((format!("map_{tag}_{ch}.csv"), contrast_csv(&res.reports)));
            out.files.push((
                format!("contour_{tag}_{ch}.csv"),
                contour.to_csv(x_name, "delta_t"),
            ));
        }
        let dts = if tag == "a" {
            m.grid_a.delta_ts.values()?
        } else {
            m.grid_b.delta_ts.values()?
        };
        let cap: Vec<(f64, f64)> = dts
            .iter()
            .map(|&dt| {
                let x = if tag == "a" {
                    cap_separation(m.eta_cap, m.grid_a.mass, mu, m.flight_fraction, dt)
                } else {
                    cap_mass(m.eta_cap, m.grid_b.delta_x, mu, m.flight_fraction, dt)
                };
                (x, dt)
            })
            .collect();
        out.files
            .push((format!("cap_{tag}.csv"), curve_csv(x_name, "delta_t", &cap)));
    }
    out.details = serde_json::Value::Object(details);
    Ok(out)
}

/// Least-squares slope of `log10 y` against `log10 x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.log10()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.log10()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DipoleRow {
    pub eta_e: f64,
    /// Squared magnitude at the fundamental tone with `Γ² → 1`.
    pub factor: f64,
    pub neg_ln_c: f64,
    pub neg_ln_c_unit_gamma: f64,
}

pub fn dipole_rows(
    d: &DipoleParams,
    etas: &[f64],
    material: &MaterialModel,
    c: &PhysicalConstants,
) -> CliResult<Vec<DipoleRow>> {
    let p = SplitProtocol::from_target(d.mass, d.delta_x, d.delta_t, 0.0)?;
    let w0 = material.fundamental_tone(p.mass())?;
    let opts = |gamma| ContrastOptions {
        truncation: Truncation::default(),
        gamma,
        keep_modes: false,
    };
    etas.iter()
        .map(|&eta| {
            let exact = ln_contrast_induced_dipole(
                &p,
                material,
                c,
                d.temperature,
                eta,
                &opts(GammaTreatment::Exact),
            )?;
            let unit = ln_contrast_induced_dipole(
                &p,
                material,
                c,
                d.temperature,
                eta,
                &opts(GammaTreatment::Unit),
            )?;
            Ok(DipoleRow {
                eta_e: eta,
                factor: induced_dipole_factor(&p, material, c, eta, w0),
                neg_ln_c: exact.neg_ln_contrast(),
                neg_ln_c_unit_gamma: unit.neg_ln_contrast(),
            })
        })
        .collect()
}

fn dipole(
    d: &DipoleParams,
    material: &MaterialModel,
    c: &PhysicalConstants,
) -> CliResult<ScenarioOutput> {
    let etas = d.eta_es.values()?;
    let rows = dipole_rows(d, &etas, material, c)?;
    let probe = dipole_rows(d, &[1.0, d.probe_eta_e], material, c)?;
    let slope = log_log_slope(&etas, &rows.iter().map(|r| r.factor).collect::<Vec<_>>());
    let mut csv = String::from(DIPOLE_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&format!(
            "{:e},{:e},{:e},{:e}\n",
            r.eta_e, r.factor, r.neg_ln_c, r.neg_ln_c_unit_gamma
        ));
    }
    let mut out = ScenarioOutput {
        fidelity_flags: vec!["verbatim_formula".into()],
        ..Default::default()
    };
    out.details = json!({
        "eta_e_exponent": slope,
        "factor_at_unit_eta_e": probe[0].factor,
        "probe_eta_e": d.probe_eta_e,
        "neg_ln_c_at_probe": probe[1].neg_ln_c,
        "neg_ln_c_unit_gamma_at_probe": probe[1].neg_ln_c_unit_gamma,
    });
    out.files.push(("dipole_estimate.csv".into(), csv));
    Ok(out)
}
