//! Scenario configuration documents.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use sgphonon::{GammaTreatment, MaterialModel, Truncation};

use crate::error::{CliError, CliResult};
use crate::sweep::{Axis, SweepGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioName {
    Occupation,
    PhaseSpace,
    ContrastCurves,
    ContrastMaps,
    DipoleEstimate,
    CustomSweep,
}

impl ScenarioName {
    pub fn label(self) -> &'static str {
        match self {
            ScenarioName::Occupation => "occupation",
            ScenarioName::PhaseSpace => "phase_space",
            ScenarioName::ContrastCurves => "contrast_curves",
            ScenarioName::ContrastMaps => "contrast_maps",
            ScenarioName::DipoleEstimate => "dipole_estimate",
            ScenarioName::CustomSweep => "custom_sweep",
        }
    }
}

/// A preset name or JSON file path, or an inline material document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaterialSel {
    Named(String),
    Inline(MaterialModel),
}

impl Default for MaterialSel {
    fn default() -> Self {
        MaterialSel::Named("diamond".into())
    }
}

impl MaterialSel {
    /// Presets win over files; relative paths resolve against `base`.
    pub fn resolve(&self, base: &Path) -> CliResult<MaterialModel> {
        match self {
            MaterialSel::Inline(m) => {
                m.validate()?;
                Ok(m.clone())
            }
            MaterialSel::Named(name) => {
                if let Some(m) = MaterialModel::preset(name) {
                    return Ok(m);
                }
                let path = base.join(name);
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    CliError::Config(format!(
                        "material '{name}' is neither a preset nor a readable file ({e})"
                    ))
                })?;
                Ok(MaterialModel::from_json(&text)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioName,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub material: MaterialSel,
    /// Worker threads; defaults to the available parallelism.
    #[serde(default)]
    pub jobs: Option<usize>,
    /// Scenario parameters; omitted fields take the scenario defaults.
    #[serde(default)]
    pub params: Option<serde_json::Value>,
}

/// A single-mode illustration of both arms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Trace {
    pub label: String,
    pub channel: String,
    pub mass: f64,
    pub delta_x: f64,
    pub delta_t: f64,
    #[serde(default)]
    pub flight_fraction: f64,
    /// Bias field, T.
    #[serde(default)]
    pub b0: f64,
    /// Mode angular frequency, rad/s.
    pub omega: f64,
    pub temperature: f64,
    pub samples: usize,
    /// End of the sampled window after the start of the run; defaults to `1.25 Δt`.
    #[serde(default)]
    pub t_end: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceParams {
    pub traces: Vec<Trace>,
}

impl Default for TraceParams {
    fn default() -> Self {
        let two_pi = 2.0 * std::f64::consts::PI;
        let spin_omega = two_pi * 2.0e6;
        let dia_omega = two_pi * 42.0e3;
        TraceParams {
            traces: vec![
                Trace {
                    label: "spin".into(),
                    channel: "spin".into(),
                    mass: 1e-14,
                    delta_x: 5e-7,
                    delta_t: 50.0 / spin_omega,
                    flight_fraction: 0.0,
                    b0: 0.0,
                    omega: spin_omega,
                    temperature: 4.0,
                    samples: 2000,
                    t_end: None,
                },
                Trace {
                    label: "dia".into(),
                    channel: "dia".into(),
                    mass: 1e-14,
                    delta_x: 1e-10,
                    delta_t: 50.0 / dia_omega,
                    flight_fraction: 0.0,
                    b0: 1.0,
                    omega: dia_omega,
                    temperature: 4.0,
                    samples: 2000,
                    t_end: None,
                },
            ],
        }
    }
}

fn default_channels() -> Vec<String> {
    vec!["spin".into(), "dia".into()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    pub grid: SweepGrid,
    #[serde(default = "default_channels")]
    pub channels: Vec<String>,
}

impl SweepParams {
    /// Two masses, two temperatures, separations 1 µm to 1 mm, one-second runs.
    pub fn contrast_curves() -> Self {
        SweepParams {
            grid: SweepGrid {
                masses: Axis::Values(vec![1e-14, 1e-18]),
                temperatures: Axis::Values(vec![4.0, 300.0]),
                delta_xs: Axis::Log {
                    from: 1e-6,
                    to: 1e-3,
                    per_decade: 16,
                },
                delta_ts: Axis::Values(vec![1.0]),
                flight_fractions: Axis::Values(vec![0.0]),
                gamma: GammaTreatment::Exact,
                truncation: Truncation::default(),
                eta_e: crate::sweep::DEFAULT_ETA_E,
            },
            channels: default_channels(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapA {
    pub mass: f64,
    pub delta_xs: Axis,
    pub delta_ts: Axis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapB {
    pub delta_x: f64,
    pub masses: Axis,
    pub delta_ts: Axis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MapParams {
    pub temperature: f64,
    pub flight_fraction: f64,
    pub gamma: GammaTreatment,
    pub truncation: Truncation,
    pub channels: Vec<String>,
    /// Contour level of `-ln C`.
    pub threshold: f64,
    /// Gradient cap, T/m.
    pub eta_cap: f64,
    pub grid_a: MapA,
    pub grid_b: MapB,
}

impl Default for MapParams {
    fn default() -> Self {
        let dts = Axis::Log {
            from: 1e-4,
            to: 1.0,
            per_decade: 16,
        };
        MapParams {
            temperature: 300.0,
            flight_fraction: 0.0,
            gamma: GammaTreatment::Unit,
            truncation: Truncation::Adaptive {
                rel_tol: 1e-6,
                max_modes: 100_000,
            },
            channels: default_channels(),
            threshold: 0.01,
            eta_cap: 1e6,
            grid_a: MapA {
                mass: 2.25e-14,
                delta_xs: Axis::Log {
                    from: 1e-6,
                    to: 1e-2,
                    per_decade: 16,
                },
                delta_ts: dts.clone(),
            },
            grid_b: MapB {
                delta_x: 1e-4,
                masses: Axis::Log {
                    from: 1e-18,
                    to: 1e-12,
                    per_decade: 16,
                },
                delta_ts: dts,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DipoleParams {
    pub mass: f64,
    pub delta_x: f64,
    pub delta_t: f64,
    pub temperature: f64,
    pub eta_es: Axis,
    /// Curvature at which `-ln C` is reported, V/m².
    pub probe_eta_e: f64,
}

impl Default for DipoleParams {
    fn default() -> Self {
        DipoleParams {
            mass: 1e-14,
            delta_x: 1e-4,
            delta_t: 2.0,
            temperature: 4.0,
            eta_es: Axis::Log {
                from: 1.0,
                to: 1e10,
                per_decade: 4,
            },
            probe_eta_e: 30.0,
        }
    }
}

/// A configuration with its parameters parsed and checked.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Occupation(TraceParams),
    PhaseSpace(TraceParams),
    ContrastCurves(SweepParams),
    ContrastMaps(MapParams),
    DipoleEstimate(DipoleParams),
    CustomSweep(SweepParams),
}

fn params_or<T>(v: &Option<serde_json::Value>, default: impl FnOnce() -> T) -> CliResult<T>
where
    T: for<'de> Deserialize<'de>,
{
    match v {
        None => Ok(default()),
        Some(v) => {
            serde_json::from_value(v.clone()).map_err(|e| CliError::Config(format!("params: {e}")))
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(s: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    /// Parse `params` for the named scenario and check every grid.
    pub fn scenario(&self) -> CliResult<Scenario> {
        let s = match self.scenario {
            ScenarioName::Occupation => {
                Scenario::Occupation(params_or(&self.params, TraceParams::default)?)
            }
            ScenarioName::PhaseSpace => {
                Scenario::PhaseSpace(params_or(&self.params, TraceParams::default)?)
            }
            ScenarioName::ContrastCurves => {
                Scenario::ContrastCurves(params_or(&self.params, SweepParams::contrast_curves)?)
            }
            ScenarioName::ContrastMaps => {
                Scenario::ContrastMaps(params_or(&self.params, MapParams::default)?)
            }
            ScenarioName::DipoleEstimate => {
                Scenario::DipoleEstimate(params_or(&self.params, DipoleParams::default)?)
            }
            ScenarioName::CustomSweep => match &self.params {
                None => {
                    return Err(CliError::Config(
                        "custom_sweep needs params with a grid".into(),
                    ))
                }
                Some(_) => Scenario::CustomSweep(params_or(&self.params, || unreachable!())?),
            },
        };
        s.validate()?;
        Ok(s)
    }
}

fn non_empty(name: &str, axis: &Axis) -> CliResult<Vec<f64>> {
    let v = axis.values()?;
    if v.is_empty() {
        return Err(CliError::Config(format!("axis '{name}' is empty")));
    }
    if v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(CliError::Config(format!(
            "axis '{name}' must hold positive finite values"
        )));
    }
    Ok(v)
}

fn increasing(name: &str, v: &[f64]) -> CliResult<()> {
    if v.len() < 2 || v.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(CliError::Config(format!(
            "map axis '{name}' needs at least two strictly increasing values"
        )));
    }
    Ok(())
}

impl Scenario {
    pub fn validate(&self) -> CliResult<()> {
        match self {
            Scenario::Occupation(t) | Scenario::PhaseSpace(t) => {
                if t.traces.is_empty() {
                    return Err(CliError::Config("no traces requested".into()));
                }
                for tr in &t.traces {
                    if tr.samples == 0 || tr.samples > 1_000_000 {
                        return Err(CliError::Config(format!(
                            "trace '{}': samples must lie in 1..=1000000",
                            tr.label
                        )));
                    }
                    if !matches!(tr.channel.as_str(), "spin" | "dia") {
                        return Err(CliError::Config(format!(
                            "trace '{}': channel must be spin or dia",
                            tr.label
                        )));
                    }
                    if !(tr.omega > 0.0 && tr.omega.is_finite()) {
                        return Err(CliError::Config(format!(
                            "trace '{}': omega must be positive",
                            tr.label
                        )));
                    }
                    if tr.label.is_empty()
                        || !tr
                            .label
                            .chars()
                            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
                    {
                        return Err(CliError::Config(format!(
                            "trace label '{}' must be a plain file-name stem",
                            tr.label
                        )));
                    }
                }
                let mut labels: Vec<&str> = t.traces.iter().map(|t| t.label.as_str()).collect();
                labels.sort_unstable();
                if labels.windows(2).any(|w| w[0] == w[1]) {
                    return Err(CliError::Config("trace labels must be unique".into()));
                }
                Ok(())
            }
            Scenario::ContrastCurves(s) | Scenario::CustomSweep(s) => {
                s.grid.points()?;
                crate::sweep::parse_channel_list(&s.channels.join(","), s.grid.eta_e)?;
                Ok(())
            }
            Scenario::ContrastMaps(m) => {
                crate::sweep::parse_channel_list(&m.channels.join(","), 1.0)?;
                for (name, v) in [
                    (
                        "grid_a.delta_xs",
                        non_empty("grid_a.delta_xs", &m.grid_a.delta_xs)?,
                    ),
                    (
                        "grid_a.delta_ts",
                        non_empty("grid_a.delta_ts", &m.grid_a.delta_ts)?,
                    ),
                    (
                        "grid_b.masses",
                        non_empty("grid_b.masses", &m.grid_b.masses)?,
                    ),
                    (
                        "grid_b.delta_ts",
                        non_empty("grid_b.delta_ts", &m.grid_b.delta_ts)?,
                    ),
                ] {
                    increasing(name, &v)?;
                }
                if !(m.threshold > 0.0) || !(m.eta_cap > 0.0) {
                    return Err(CliError::Config(
                        "threshold and eta_cap must be positive".into(),
                    ));
                }
                Ok(())
            }
            Scenario::DipoleEstimate(d) => {
                let v = non_empty("eta_es", &d.eta_es)?;
                if v.len() < 2 {
                    return Err(CliError::Config("eta_es needs at least two values".into()));
                }
                Ok(())
            }
        }
    }
}
