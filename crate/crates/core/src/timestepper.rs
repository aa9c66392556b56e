//! Third-order SSP Runge-Kutta stepping of the coupled two-mesh system.

use alloc::vec::Vec;

use crate::basis::{DgField, PkBasis};
use crate::boundary::{fill_ghosts, fill_inflow_ghosts};
use crate::cdg::{euler_stage, StageInputs, StageTables, StepSize};
use crate::error::{Error, Result};
use crate::fe::{FeSolver, InflowVelocity, VelocityField};
use crate::limiters::{min_point_depth, positivity_limit, tvb_limit, PositivityPoints};
use crate::mesh::{MeshKind, MeshPair};
use crate::model::PhysParams;

/// Switches and constants of the discretization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeOptions {
    /// Polynomial degree, 1 or 2.
    pub k: usize,
    pub well_balanced: bool,
    pub positivity: bool,
    /// TVB constant `M`; `None` disables slope limiting.
    pub tvb: Option<f64>,
    pub cfl: f64,
    pub fixed_dt: Option<f64>,
}

impl Default for SchemeOptions {
    fn default() -> Self {
        SchemeOptions { k: 2, well_balanced: true, positivity: true, tvb: Some(10.0), cfl: 0.3, fixed_dt: None }
    }
}

/// Conserved variables and recovered velocities on both meshes (primal first).
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionState {
    pub u: [DgField; 2],
    pub vel: [VelocityField; 2],
}

/// Static data of a run: meshes, tables, projected bottoms.
#[derive(Debug, Clone)]
pub struct Scheme {
    pub mesh: MeshPair,
    pub basis: PkBasis,
    pub tables: StageTables,
    pub points: PositivityPoints,
    pub phys: PhysParams,
    pub options: SchemeOptions,
    pub inflow: Option<InflowVelocity>,
    pub bottom: [DgField; 2],
}

/// Limiter activity and depth extrema of one step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StageStats {
    pub tvb_limited: usize,
    pub positivity_limited: usize,
    /// Smallest cell-average depth after limiting, both meshes, all stages.
    pub min_mean_depth: f64,
    /// Smallest depth over the positivity points after limiting.
    pub min_point_depth: f64,
    pub fe_iterations: usize,
}

const KINDS: [MeshKind; 2] = [MeshKind::Primal, MeshKind::Dual];

impl Scheme {
    /// Forward-Euler central DG update of both meshes (no limiting).
    pub fn euler_stages(&self, s: &SolutionState, dt: f64, theta: f64) -> Result<[DgField; 2]> {
        let stage = |m: usize| {
            let (o, kind) = (1 - m, KINDS[m]);
            let inp = StageInputs {
                target: self.mesh.grid(kind),
                opposite: self.mesh.grid(kind.other()),
                own: &s.u[m],
                opp: &s.u[o],
                opp_vel: &s.vel[o],
                own_bottom: &self.bottom[m],
                opp_bottom: &self.bottom[o],
                dt,
                theta,
            };
            euler_stage(&self.tables, &inp, &self.phys, self.options.well_balanced)
        };
        Ok([stage(0)?, stage(1)?])
    }

    /// Ghost fill, then the TVB and positivity limiters, then a final ghost fill.
    pub fn limit(&self, u: &mut [DgField; 2], t: f64, stats: &mut StageStats) -> Result<()> {
        for m in 0..2 {
            let grid = self.mesh.grid(KINDS[m]);
            self.fill(&mut u[m], m, t);
            if let Some(mc) = self.options.tvb {
                stats.tvb_limited += tvb_limit(&mut u[m], &self.bottom[m], grid, &self.basis, mc);
            }
            if self.options.positivity {
                stats.positivity_limited += positivity_limit(&mut u[m], grid, &self.points)?;
                stats.min_point_depth = stats.min_point_depth.min(min_point_depth(&u[m], grid, &self.points));
            }
            let mean_min = grid.interior().map(|(i, j)| u[m].mean(grid.idx(i, j), 0)).fold(f64::INFINITY, f64::min);
            stats.min_mean_depth = stats.min_mean_depth.min(mean_min);
            self.fill(&mut u[m], m, t);
        }
        Ok(())
    }

    pub fn fill(&self, u: &mut DgField, m: usize, t: f64) {
        let grid = self.mesh.grid(KINDS[m]);
        fill_ghosts(u, grid, &self.basis, &self.mesh.bc);
        if let Some(inf) = &self.inflow {
            fill_inflow_ghosts(u, &self.bottom[m], grid, &self.basis, inf, t);
        }
    }

    /// Velocity recovery on both meshes.
    pub fn recover(
        &self,
        solvers: &mut [FeSolver; 2],
        u: [DgField; 2],
        t: f64,
        guess: Option<&[VelocityField; 2]>,
        stats: &mut StageStats,
    ) -> Result<SolutionState> {
        let mut vel: Vec<VelocityField> = Vec::with_capacity(2);
        for m in 0..2 {
            let g = guess.map(|g| &g[m]);
            vel.push(solvers[m].recover_velocity(&u[m], &self.bottom[m], &self.phys, t, self.inflow.as_ref(), g)?);
            stats.fe_iterations += solvers[m].last_stats.iterations;
        }
        let v1 = vel.pop().expect("two meshes");
        let v0 = vel.pop().expect("two meshes");
        Ok(SolutionState { u, vel: [v0, v1] })
    }

    /// One SSP-RK3 step from time `t`. Every stage is limited after its convex
    /// combination and followed by velocity recovery.
    pub fn ssp_rk3_step(
        &self,
        solvers: &mut [FeSolver; 2],
        s0: &SolutionState,
        step: StepSize,
        t: f64,
    ) -> Result<(SolutionState, StageStats)> {
        let mut stats = StageStats { min_mean_depth: f64::INFINITY, min_point_depth: f64::INFINITY, ..Default::default() };
        let (dt, theta) = (step.dt, step.theta);
        let mut s = s0.clone();
        for (a, c) in [(0.0, 1.0), (0.75, 0.5), (1.0 / 3.0, 1.0)] {
            let mut w = self.euler_stages(&s, dt, theta)?;
            if a > 0.0 {
                for m in 0..2 {
                    for (x, y) in w[m].data.iter_mut().zip(&s0.u[m].data) {
                        // equal inputs give back the old value bit for bit
                        *x = y + (1.0 - a) * (*x - y);
                    }
                }
            }
            let ts = t + c * dt;
            self.limit(&mut w, ts, &mut stats)?;
            s = self.recover(solvers, w, ts, Some(&s.vel), &mut stats)?;
        }
        Ok((s, stats))
    }

    /// Error on the first non-finite coefficient.
    pub fn check_finite(&self, s: &SolutionState) -> Result<()> {
        for m in 0..2 {
            let grid = self.mesh.grid(KINDS[m]);
            for (i, j) in grid.interior() {
                if s.u[m].cell(grid.idx(i, j)).iter().any(|v| !v.is_finite()) {
                    return Err(Error::BlowUp { mesh: KINDS[m], i, j });
                }
            }
        }
        Ok(())
    }
}
