//! Time-step selection: gravity-wave stability bound and the positivity bound.

use alloc::vec::Vec;

use super::tensor;
use crate::basis::{dot, DgField, PkBasis};
use crate::error::{Error, Result};
use crate::fe::space::Lagrange1d;
use crate::fe::VelocityField;
use crate::mesh::quadrature::{gauss_rule, lobatto_rule};
use crate::mesh::Grid;

/// Endpoint weight of the Lobatto rule used by the positivity argument
/// (normalized to the unit interval).
pub fn omega1_hat(k: usize) -> f64 {
    lobatto_rule(k).weights[0]
}

/// Maxima over the Gauss points of one mesh.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TimestepBounds {
    /// `max |u|`, `max |v|`.
    pub ax: f64,
    pub ay: f64,
    /// `max (|u| + sqrt(g h))`, `max (|v| + sqrt(g h))`.
    pub sx: f64,
    pub sy: f64,
}

impl TimestepBounds {
    pub fn merge(self, o: TimestepBounds) -> TimestepBounds {
        TimestepBounds { ax: self.ax.max(o.ax), ay: self.ay.max(o.ay), sx: self.sx.max(o.sx), sy: self.sy.max(o.sy) }
    }

    /// Scan every interior cell of `grid` at the `(k+1)^2` Gauss points.
    pub fn scan(grid: &Grid, k: usize, state: &DgField, vel: &VelocityField, g: f64) -> Result<Self> {
        let basis = PkBasis::new(k);
        let lag = Lagrange1d::new(k);
        let rule = gauss_rule(k);
        let mut pts: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
        for &a in &rule.points {
            for &b in &rule.points {
                pts.push((basis.values(a, b), tensor(&lag, a, b).0));
            }
        }
        let nl = (k + 1) * (k + 1);
        let mut r = TimestepBounds::default();
        for (i, j) in grid.interior() {
            let idx = grid.idx(i, j);
            let hc = state.comp(idx, 0);
            let vc = vel.cell(idx, nl);
            for (phi, psi) in &pts {
                let h = dot(hc, phi);
                let u = dot(&vc[..nl], psi).abs();
                let v = dot(&vc[nl..], psi).abs();
                let c = libm::sqrt(g * h.max(0.0));
                if !(u.is_finite() && v.is_finite() && c.is_finite()) {
                    return Err(Error::BlowUp { mesh: grid.kind, i, j });
                }
                r.ax = r.ax.max(u);
                r.ay = r.ay.max(v);
                r.sx = r.sx.max(u + c);
                r.sy = r.sy.max(v + c);
            }
        }
        Ok(r)
    }
}

/// Chosen step, relaxation `theta = min(1, dt / tau)` and the limit `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSize {
    pub dt: f64,
    pub theta: f64,
    pub tau: f64,
}

impl StepSize {
    /// Same limit with a smaller step.
    pub fn with_dt(self, dt: f64) -> StepSize {
        let theta = if self.tau.is_finite() { (dt / self.tau).min(1.0) } else { 1.0 };
        StepSize { dt, theta, tau: self.tau }
    }
}

/// Step size and relaxation `theta`.
///
/// `tau` is the stability limit `cfl / (sx/dx + sy/dy)`, lowered to the
/// positivity limit `omega1 / (4 (ax/dx + ay/dy))` when positivity is enforced;
/// with `theta = min(1, dt/tau)` the positivity condition
/// `dt (ax/dx + ay/dy) <= theta omega1 / 4` then holds for every `dt <= tau`.
pub fn max_timestep(
    b: &TimestepBounds,
    dx: f64,
    dy: f64,
    cfl: f64,
    omega1: f64,
    positivity: bool,
    fixed_dt: Option<f64>,
) -> Result<StepSize> {
    let rate = b.sx / dx + b.sy / dy;
    let mut tau = if rate > 0.0 { cfl / rate } else { f64::INFINITY };
    let mut dt = fixed_dt.unwrap_or(tau);
    if positivity {
        let a = b.ax / dx + b.ay / dy;
        if a > 0.0 {
            tau = tau.min(omega1 / (4.0 * a));
        }
        dt = dt.min(tau);
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Stagnation { t: f64::NAN });
    }
    Ok(StepSize { dt, theta: 1.0, tau }.with_dt(dt))
}
