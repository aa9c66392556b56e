//! Convergence and dispersion tables.

use gncdg_core::model::dispersion::{airy_deviation_l2, airy_omega, dispersion_omega};
use gncdg_core::model::waves::SolitaryWave;
use gncdg_core::{PhysParams, Simulation};
use serde::Serialize;

use crate::config::{RunConfig, TimeStep};
use crate::error::{AppError, Result};
use crate::run::build_problem;
use crate::scenario::Initial;

/// Mesh sequence of the solitary-wave accuracy study.
pub const ACCURACY_DX: [f64; 4] = [1.0, 0.5, 0.25, 0.125];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub dx: f64,
    pub nx: usize,
    pub ny: usize,
    pub steps: usize,
    pub l2_h: f64,
    pub l2_u: f64,
    /// `log2(e_coarse / e_fine)` against the previous row, scaled by the mesh ratio.
    pub order_h: Option<f64>,
    pub order_u: Option<f64>,
}

/// Run `base` on square cells of each size in `dxs` and measure `L2` errors of
/// `(h, u)` against the exact solitary wave at `t_final`.
pub fn convergence(base: &RunConfig, dxs: &[f64]) -> Result<Vec<ConvergenceRow>> {
    let sc = base.scenario();
    let Initial::Solitary { h1, h2, x0 } = sc.initial else {
        return Err(AppError::invalid("scenario", format!("{} has no exact solution", sc.name)));
    };
    if !sc.bathymetry.is_flat() {
        return Err(AppError::invalid("scenario", format!("{} has no exact solution", sc.name)));
    }
    let wave = SolitaryWave::new(h1, h2, base.g, x0).map_err(|e| AppError::invalid("scenario", e.to_string()))?;
    let [xa, xb, ya, yb] = sc.domain;
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &dx in dxs {
        let mut cfg = base.clone();
        cfg.nx = ((xb - xa) / dx).round() as usize;
        cfg.ny = ((yb - ya) / dx).round() as usize;
        if cfg.nx == 0 || cfg.ny == 0 || ((xb - xa) / cfg.nx as f64 - dx).abs() > 1e-9 * dx {
            return Err(AppError::invalid("mesh.dx", format!("{dx} does not divide the domain")));
        }
        if let TimeStep::Fixed(_) = cfg.time_step {
            return Err(AppError::invalid("scheme.fixed_dt", "a refinement study needs scheme.dt_over_dx"));
        }
        let mut sim = Simulation::new(&build_problem(&cfg)?).map_err(|source| AppError::Numerical { step: 0, t: 0.0, source })?;
        while sim.t < cfg.t_final {
            sim.step(cfg.t_final).map_err(|source| AppError::Numerical { step: sim.steps + 1, t: sim.t, source })?;
        }
        let t = sim.t;
        let (l2_h, l2_u) = sim
            .l2_errors(|x, _| {
                let (h, u, _) = wave.eval(x, t);
                (h, u)
            })
            .map_err(|source| AppError::Numerical { step: sim.steps, t, source })?;
        let (order_h, order_u) = match rows.last() {
            Some(p) => {
                let r = (p.dx / dx).log2();
                (Some((p.l2_h / l2_h).log2() / r), Some((p.l2_u / l2_u).log2() / r))
            }
            None => (None, None),
        };
        rows.push(ConvergenceRow { dx, nx: cfg.nx, ny: cfg.ny, steps: sim.steps, l2_h, l2_u, order_h, order_u });
    }
    Ok(rows)
}

pub fn convergence_table(rows: &[ConvergenceRow]) -> (Vec<String>, Vec<Vec<f64>>) {
    let header = ["dx", "nx", "ny", "l2_h", "order_h", "l2_u", "order_u"].map(String::from).to_vec();
    let data = rows
        .iter()
        .map(|r| {
            vec![r.dx, r.nx as f64, r.ny as f64, r.l2_h, r.order_h.unwrap_or(f64::NAN), r.l2_u, r.order_u.unwrap_or(f64::NAN)]
        })
        .collect();
    (header, data)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionTable {
    pub alphas: Vec<f64>,
    pub k: Vec<f64>,
    /// `omega[a][n]` for `alphas[a]` at `k[n]`.
    pub omega: Vec<Vec<f64>>,
    pub airy: Vec<f64>,
    /// `L2` deviation of `omega / omega_airy` from 1 over `(0, k_max]`, per alpha.
    pub deviation: Vec<f64>,
}

/// Model and Airy frequencies on `n + 1` evenly spaced wavenumbers in `[0, k_max]`.
pub fn dispersion(alphas: &[f64], h0: f64, g: f64, k_max: f64, n: usize) -> Result<DispersionTable> {
    if !(h0 > 0.0 && g > 0.0 && k_max > 0.0 && n > 0) {
        return Err(AppError::invalid("dispersion", "h0, g, k_max and the sample count must be positive"));
    }
    let k: Vec<f64> = (0..=n).map(|i| k_max * i as f64 / n as f64).collect();
    let mut omega = Vec::new();
    let mut deviation = Vec::new();
    for &alpha in alphas {
        let p = PhysParams::new(g, alpha).map_err(|e| AppError::invalid("alpha", e.to_string()))?;
        omega.push(k.iter().map(|&kk| dispersion_omega(kk, h0, &p)).collect());
        deviation.push(airy_deviation_l2(alpha, h0, g, k_max, 4000));
    }
    let airy = k.iter().map(|&kk| airy_omega(kk, h0, g)).collect();
    Ok(DispersionTable { alphas: alphas.to_vec(), k, omega, airy, deviation })
}

impl DispersionTable {
    /// Columns `k`, `airy`, then `omega` and `omega/airy - 1` for every alpha.
    pub fn csv(&self) -> (Vec<String>, Vec<Vec<f64>>) {
        let mut header = vec!["k".to_string(), "omega_airy".to_string()];
        for a in &self.alphas {
            header.push(format!("omega_alpha={a}"));
            header.push(format!("rel_dev_alpha={a}"));
        }
        let rows = (0..self.k.len())
            .map(|n| {
                let mut row = vec![self.k[n], self.airy[n]];
                for w in &self.omega {
                    let rel = if self.airy[n] > 0.0 { w[n] / self.airy[n] - 1.0 } else { 0.0 };
                    row.push(w[n]);
                    row.push(rel);
                }
                row
            })
            .collect();
        (header, rows)
    }
}
