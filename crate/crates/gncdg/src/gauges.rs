//! Surface-elevation probes.

use gncdg_core::Simulation;

use crate::error::{AppError, Result};

/// Time series of the free surface `h + b` at one point of the primal mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeSeries {
    pub x: f64,
    pub y: f64,
    pub times: Vec<f64>,
    pub eta: Vec<f64>,
}

impl GaugeSeries {
    pub fn new(x: f64, y: f64) -> Self {
        GaugeSeries { x, y, times: Vec::new(), eta: Vec::new() }
    }

    /// Append a sample; a time not after the last one is ignored.
    pub fn record(&mut self, sim: &Simulation) -> Result<()> {
        if self.times.last().is_some_and(|&t| sim.t <= t) {
            return Ok(());
        }
        let eta = sim.surface_at(self.x, self.y).map_err(|source| AppError::Numerical { step: sim.steps, t: sim.t, source })?;
        self.times.push(sim.t);
        self.eta.push(eta);
        Ok(())
    }

    pub fn label(&self) -> String {
        format!("eta({},{})", self.x, self.y)
    }
}

pub fn record_all(series: &mut [GaugeSeries], sim: &Simulation) -> Result<()> {
    series.iter_mut().try_for_each(|g| g.record(sim))
}
