//! Run configuration: a TOML file layered over the scenario defaults.
//!
//! ```toml
//! scenario = "seawall"
//!
//! [physics]
//! alpha = 1.159
//!
//! [mesh]
//! nx = 500
//! ny = 8
//!
//! [scheme]
//! k = 1
//!
//! [output]
//! dir = "out/seawall"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};
use crate::scenario::{self, Scenario, StepRule};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: String,
    #[serde(default)]
    pub physics: PhysicsSection,
    #[serde(default)]
    pub mesh: MeshSection,
    #[serde(default)]
    pub scheme: SchemeSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nx: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ny: Option<usize>,
    /// Square cells of this size; excludes `nx` and `ny`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dx: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cfl: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_over_dx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tvb: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tvb_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positivity: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub well_balanced: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// `[x, y]` pairs; replaces the scenario's gauges.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauges: Option<Vec<[f64; 2]>>,
    /// Record gauges every this many steps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauge_every: Option<usize>,
    /// Snapshot interval in simulated time; initial and final states are always written.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<f64>,
    /// Added to the time column of the gauge file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_offset: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    Adaptive,
    Fixed(f64),
    PerDx(f64),
}

/// Fully resolved and validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: String,
    pub g: f64,
    pub alpha: f64,
    pub nx: usize,
    pub ny: usize,
    pub k: usize,
    pub cfl: f64,
    pub time_step: TimeStep,
    /// TVB constant, `None` when the slope limiter is off.
    pub tvb: Option<f64>,
    pub positivity: bool,
    pub well_balanced: bool,
    pub t_final: f64,
    pub gauges: Vec<(f64, f64)>,
    pub gauge_every: usize,
    pub snapshot_every: Option<f64>,
    pub time_offset: f64,
    pub out_dir: PathBuf,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub alpha: Option<f64>,
    pub k: Option<usize>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub t_final: Option<f64>,
}

pub const DEFAULT_G: f64 = 9.81;
pub const DEFAULT_TVB_M: f64 = 10.0;

impl ConfigFile {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start].matches('\n').count() + 1).unwrap_or(1);
            AppError::Parse { path: origin.to_string(), line, message: e.message().trim().to_string() }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config sections are plain tables")
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = &o.out {
            self.output.dir = Some(v.clone());
        }
        if let Some(v) = o.alpha {
            self.physics.alpha = Some(v);
        }
        if let Some(v) = o.k {
            self.scheme.k = Some(v);
        }
        if o.nx.is_some() || o.ny.is_some() {
            self.mesh.dx = None;
        }
        if let Some(v) = o.nx {
            self.mesh.nx = Some(v);
        }
        if let Some(v) = o.ny {
            self.mesh.ny = Some(v);
        }
        if let Some(v) = o.t_final {
            self.run.t_final = Some(v);
        }
    }

    pub fn resolve(&self) -> Result<RunConfig> {
        let sc = scenario::lookup(&self.scenario).ok_or_else(|| AppError::UnknownScenario(self.scenario.clone()))?;
        let positive = |field, v: Option<f64>, default: f64| -> Result<f64> {
            let v = v.unwrap_or(default);
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(AppError::invalid(field, format!("{v} must be positive")))
            }
        };
        let g = positive("physics.g", self.physics.g, DEFAULT_G)?;
        let alpha = positive("physics.alpha", self.physics.alpha, 1.0)?;
        let (nx, ny) = self.mesh_size(&sc)?;
        let k = self.scheme.k.unwrap_or(2);
        if !(k == 1 || k == 2) {
            return Err(AppError::invalid("scheme.k", format!("degree {k} is not 1 or 2")));
        }
        let cfl = positive("scheme.cfl", self.scheme.cfl, 0.3)?;
        let time_step = match (self.scheme.fixed_dt, self.scheme.dt_over_dx) {
            (Some(_), Some(_)) => {
                return Err(AppError::invalid("scheme.fixed_dt", "cannot be combined with scheme.dt_over_dx"))
            }
            (Some(dt), None) => TimeStep::Fixed(positive("scheme.fixed_dt", Some(dt), 0.0)?),
            (None, Some(f)) => TimeStep::PerDx(positive("scheme.dt_over_dx", Some(f), 0.0)?),
            (None, None) => match sc.step {
                StepRule::Adaptive => TimeStep::Adaptive,
                StepRule::PerDx(f) => TimeStep::PerDx(f),
            },
        };
        let tvb = if self.scheme.tvb.unwrap_or(sc.tvb) {
            let m = self.scheme.tvb_m.unwrap_or(DEFAULT_TVB_M);
            if !(m >= 0.0 && m.is_finite()) {
                return Err(AppError::invalid("scheme.tvb_m", format!("{m} must be non-negative")));
            }
            Some(m)
        } else {
            None
        };
        let t_final = positive("run.t_final", self.run.t_final, sc.t_final)?;
        let gauges: Vec<(f64, f64)> = match &self.output.gauges {
            Some(list) => list.iter().map(|p| (p[0], p[1])).collect(),
            None => sc.gauges.to_vec(),
        };
        let [x0, x1, y0, y1] = sc.domain;
        if let Some(&(x, y)) = gauges.iter().find(|&&(x, y)| !(x >= x0 && x <= x1 && y >= y0 && y <= y1)) {
            return Err(AppError::invalid("output.gauges", format!("({x}, {y}) lies outside [{x0}, {x1}] x [{y0}, {y1}]")));
        }
        let gauge_every = self.output.gauge_every.unwrap_or(1);
        if gauge_every == 0 {
            return Err(AppError::invalid("output.gauge_every", "must be at least 1"));
        }
        let snapshot_every = match self.output.snapshot_every {
            Some(v) => Some(positive("output.snapshot_every", Some(v), 0.0)?),
            None => None,
        };
        let time_offset = self.output.time_offset.unwrap_or(0.0);
        if !time_offset.is_finite() {
            return Err(AppError::invalid("output.time_offset", "must be finite"));
        }
        Ok(RunConfig {
            scenario: sc.name.to_string(),
            g,
            alpha,
            nx,
            ny,
            k,
            cfl,
            time_step,
            tvb,
            positivity: self.scheme.positivity.unwrap_or(sc.positivity),
            well_balanced: self.scheme.well_balanced.unwrap_or(true),
            t_final,
            gauges,
            gauge_every,
            snapshot_every,
            time_offset,
            out_dir: self.output.dir.clone().unwrap_or_else(|| PathBuf::from("out").join(sc.name)),
        })
    }

    fn mesh_size(&self, sc: &Scenario) -> Result<(usize, usize)> {
        let m = &self.mesh;
        if let Some(dx) = m.dx {
            if m.nx.is_some() || m.ny.is_some() {
                return Err(AppError::invalid("mesh.dx", "cannot be combined with mesh.nx or mesh.ny"));
            }
            if !(dx > 0.0 && dx.is_finite()) {
                return Err(AppError::invalid("mesh.dx", format!("{dx} must be positive")));
            }
            let count = |len: f64| {
                let n = (len / dx).round();
                if n >= 1.0 && (n * dx - len).abs() <= 1e-9 * len {
                    Ok(n as usize)
                } else {
                    Err(AppError::invalid("mesh.dx", format!("{dx} does not divide the domain length {len}")))
                }
            };
            let [x0, x1, y0, y1] = sc.domain;
            return Ok((count(x1 - x0)?, count(y1 - y0)?));
        }
        let nx = m.nx.unwrap_or(sc.nx);
        let ny = m.ny.unwrap_or(sc.ny);
        if nx == 0 {
            return Err(AppError::invalid("mesh.nx", "must be at least 1"));
        }
        if ny == 0 {
            return Err(AppError::invalid("mesh.ny", "must be at least 1"));
        }
        Ok((nx, ny))
    }
}

impl RunConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        let mut file = ConfigFile::parse(&text, &path.display().to_string())?;
        file.apply(overrides);
        file.resolve()
    }

    /// Scenario defaults with no file.
    pub fn for_scenario(name: &str) -> Result<Self> {
        ConfigFile { scenario: name.to_string(), ..Default::default() }.resolve()
    }

    pub fn scenario(&self) -> Scenario {
        scenario::lookup(&self.scenario).expect("resolved configs name a catalog scenario")
    }

    pub fn dx(&self) -> f64 {
        let d = self.scenario().domain;
        (d[1] - d[0]) / self.nx as f64
    }

    /// Fixed step length, if any.
    pub fn fixed_dt(&self) -> Option<f64> {
        match self.time_step {
            TimeStep::Adaptive => None,
            TimeStep::Fixed(dt) => Some(dt),
            TimeStep::PerDx(f) => Some(f * self.dx()),
        }
    }

    /// Explicit file form: every field spelled out.
    pub fn to_file(&self) -> ConfigFile {
        let (fixed_dt, dt_over_dx) = match self.time_step {
            TimeStep::Adaptive => (None, None),
            TimeStep::Fixed(dt) => (Some(dt), None),
            TimeStep::PerDx(f) => (None, Some(f)),
        };
        ConfigFile {
            scenario: self.scenario.clone(),
            physics: PhysicsSection { g: Some(self.g), alpha: Some(self.alpha) },
            mesh: MeshSection { nx: Some(self.nx), ny: Some(self.ny), dx: None },
            scheme: SchemeSection {
                k: Some(self.k),
                cfl: Some(self.cfl),
                fixed_dt,
                dt_over_dx,
                tvb: Some(self.tvb.is_some()),
                tvb_m: Some(self.tvb.unwrap_or(DEFAULT_TVB_M)),
                positivity: Some(self.positivity),
                well_balanced: Some(self.well_balanced),
            },
            run: RunSection { t_final: Some(self.t_final) },
            output: OutputSection {
                dir: Some(self.out_dir.clone()),
                gauges: Some(self.gauges.iter().map(|&(x, y)| [x, y]).collect()),
                gauge_every: Some(self.gauge_every),
                snapshot_every: self.snapshot_every,
                time_offset: Some(self.time_offset),
            },
        }
    }
}
