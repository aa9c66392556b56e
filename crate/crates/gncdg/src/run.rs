//! Scenario execution.

use std::path::PathBuf;
use std::time::Instant;

use gncdg_core::fe::InflowVelocity;
use gncdg_core::model::waves::{SolitaryWave, StokesWave};
use gncdg_core::{Domain, InitialCondition, PhysParams, Problem, SchemeOptions, Simulation, StepReport};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{AppError, Result};
use crate::gauges::{record_all, GaugeSeries};
use crate::output::{write_gauges, write_json, write_vtk};
use crate::scenario::Initial;

/// Machine-readable outcome of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub scenario: String,
    pub k: usize,
    pub nx: usize,
    pub ny: usize,
    pub alpha: f64,
    pub steps: usize,
    pub t_final: f64,
    /// Smallest cell-average depth over all stages of all steps, both meshes.
    pub min_mean_depth: f64,
    /// Smallest depth at the positivity points; absent when positivity limiting is off.
    pub min_point_depth: Option<f64>,
    pub initial_mass: f64,
    pub final_mass: f64,
    /// `(final - initial) / initial`.
    pub mass_drift: f64,
    pub retries: usize,
    pub tvb_limited: usize,
    pub positivity_limited: usize,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub gauges: Vec<GaugeSeries>,
    /// Files written, in order.
    pub files: Vec<PathBuf>,
}

pub fn build_problem(cfg: &RunConfig) -> Result<Problem> {
    let sc = cfg.scenario();
    let core = |field: &'static str| move |e: gncdg_core::Error| AppError::invalid(field, e.to_string());
    let [x0, x1, y0, y1] = sc.domain;
    let phys = PhysParams::new(cfg.g, cfg.alpha).map_err(core("physics"))?;
    let initial = match sc.initial {
        Initial::Still { eta } => InitialCondition::StillWater { eta },
        Initial::Solitary { h1, h2, x0 } => {
            InitialCondition::Solitary(SolitaryWave::new(h1, h2, cfg.g, x0).map_err(core("scenario"))?)
        }
    };
    let inflow = match sc.incident {
        Some(w) => Some(InflowVelocity {
            wave: StokesWave::new(w.period, w.amplitude, w.wavelength).map_err(core("scenario"))?,
            h0: -sc.bathymetry.value(x0, 0.5 * (y0 + y1)),
            g: cfg.g,
        }),
        None => None,
    };
    Ok(Problem {
        domain: Domain::new(x0, x1, y0, y1).map_err(core("scenario"))?,
        nx: cfg.nx,
        ny: cfg.ny,
        bc: sc.bc,
        phys,
        bathymetry: sc.bathymetry,
        initial,
        inflow,
        options: SchemeOptions {
            k: cfg.k,
            well_balanced: cfg.well_balanced,
            positivity: cfg.positivity,
            tvb: cfg.tvb,
            cfl: cfg.cfl,
            fixed_dt: cfg.fixed_dt(),
        },
    })
}

/// Run to `t_final`. With `write` the gauge file, VTK snapshots and the JSON
/// summary go to the configured output directory. `progress` sees every step.
pub fn run(cfg: &RunConfig, write: bool, mut progress: impl FnMut(&StepReport)) -> Result<RunOutput> {
    let start = Instant::now();
    let problem = build_problem(cfg)?;
    let mut sim = Simulation::new(&problem).map_err(|source| AppError::Numerical { step: 0, t: 0.0, source })?;
    let mut gauges: Vec<GaugeSeries> = cfg.gauges.iter().map(|&(x, y)| GaugeSeries::new(x, y)).collect();
    let mut files = Vec::new();
    if write {
        std::fs::create_dir_all(&cfg.out_dir).map_err(|e| AppError::io(&cfg.out_dir, e))?;
    }
    let mut snap = 0usize;
    let mut snapshot = |sim: &Simulation, files: &mut Vec<PathBuf>| -> Result<()> {
        if write {
            let p = cfg.out_dir.join(format!("snapshot_{snap:04}.vtk"));
            write_vtk(&p, sim, &format!("{} t={}", cfg.scenario, sim.t))?;
            files.push(p);
        }
        snap += 1;
        Ok(())
    };
    record_all(&mut gauges, &sim)?;
    snapshot(&sim, &mut files)?;

    let mut s = RunSummary {
        scenario: cfg.scenario.clone(),
        k: cfg.k,
        nx: cfg.nx,
        ny: cfg.ny,
        alpha: cfg.alpha,
        steps: 0,
        t_final: cfg.t_final,
        min_mean_depth: f64::INFINITY,
        min_point_depth: None,
        initial_mass: sim.mass(),
        final_mass: 0.0,
        mass_drift: 0.0,
        retries: 0,
        tvb_limited: 0,
        positivity_limited: 0,
        wall_time_s: 0.0,
    };
    let mut next_snapshot = cfg.snapshot_every;
    while sim.t < cfg.t_final {
        let target = next_snapshot.map_or(cfg.t_final, |t| t.min(cfg.t_final));
        let r = sim.step(target).map_err(|source| AppError::Numerical { step: sim.steps + 1, t: sim.t, source })?;
        s.retries += r.retries;
        s.tvb_limited += r.stats.tvb_limited;
        s.positivity_limited += r.stats.positivity_limited;
        s.min_mean_depth = s.min_mean_depth.min(r.stats.min_mean_depth);
        if cfg.positivity {
            s.min_point_depth = Some(s.min_point_depth.unwrap_or(f64::INFINITY).min(r.stats.min_point_depth));
        }
        if sim.steps % cfg.gauge_every == 0 || sim.t >= cfg.t_final {
            record_all(&mut gauges, &sim)?;
        }
        if let (Some(every), Some(t)) = (cfg.snapshot_every, next_snapshot) {
            if sim.t >= t && sim.t < cfg.t_final {
                snapshot(&sim, &mut files)?;
                next_snapshot = Some(t + every);
            }
        }
        progress(&r);
    }
    snapshot(&sim, &mut files)?;
    s.steps = sim.steps;
    s.final_mass = sim.mass();
    s.mass_drift = (s.final_mass - s.initial_mass) / s.initial_mass;
    s.wall_time_s = start.elapsed().as_secs_f64();
    if write {
        let p = cfg.out_dir.join("gauges.csv");
        if write_gauges(&p, &gauges, cfg.time_offset)? {
            files.push(p);
        }
        let p = cfg.out_dir.join("summary.json");
        write_json(&p, &s)?;
        files.push(p);
    }
    Ok(RunOutput { summary: s, gauges, files })
}
