//! Slope limiting, positivity scaling of the depth and the constrained bottom projection.

pub mod bottom;

use alloc::vec::Vec;

use crate::basis::{dot, DgField, PkBasis};
use crate::error::{Error, Result};
use crate::mesh::points::positivity_points;
use crate::mesh::Grid;

pub use bottom::{constraint_residual, modify_bathymetry};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Cell averages below this are treated as round-off around a dry state.
pub const NEGATIVE_MEAN_TOL: f64 = 1e-13;

pub fn minmod(a: f64, b: f64, c: f64) -> f64 {
    if a > 0.0 && b > 0.0 && c > 0.0 {
        a.min(b).min(c)
    } else if a < 0.0 && b < 0.0 && c < 0.0 {
        a.max(b).max(c)
    } else {
        0.0
    }
}

/// TVB-corrected minmod: `a` is kept when `|a| <= bound`.
pub fn tvb_minmod(a: f64, b: f64, c: f64, bound: f64) -> f64 {
    if a.abs() <= bound {
        a
    } else {
        minmod(a, b, c)
    }
}

/// TVB minmod limiter on `(h + b, hP, hQ)`, direction by direction on the linear
/// part; limited cells lose their higher modes. Needs filled ghosts in both
/// `state` and `bottom`. Returns the number of limited cell components.
pub fn tvb_limit(state: &mut DgField, bottom: &DgField, grid: &Grid, basis: &PkBasis, m: f64) -> usize {
    let nb = basis.len();
    if nb < 3 {
        return 0;
    }
    let (bx, by) = (m * grid.dx * grid.dx, m * grid.dy * grid.dy);
    let mean = |c: usize, idx: usize| {
        let v = state.mean(idx, c);
        if c == 0 {
            v + bottom.mean(idx, 0)
        } else {
            v
        }
    };
    // decisions are made on the unlimited field, then applied
    let mut updates: Vec<(usize, usize, f64, f64)> = Vec::new();
    for (i, j) in grid.interior() {
        let idx = grid.idx(i, j);
        let (l, r, d, u) = (grid.idx(i - 1, j), grid.idx(i + 1, j), grid.idx(i, j - 1), grid.idx(i, j + 1));
        for c in 0..3 {
            let coef = state.comp(idx, c);
            let (mut sx, mut sy) = (coef[1], coef[2]);
            if c == 0 {
                let bc = bottom.comp(idx, 0);
                sx += bc[1];
                sy += bc[2];
            }
            let m0 = mean(c, idx);
            let dx_ = SQRT3 * sx;
            let dy_ = SQRT3 * sy;
            let lx = tvb_minmod(dx_, mean(c, r) - m0, m0 - mean(c, l), bx);
            let ly = tvb_minmod(dy_, mean(c, u) - m0, m0 - mean(c, d), by);
            if lx != dx_ || ly != dy_ {
                updates.push((idx, c, lx / SQRT3, ly / SQRT3));
            }
        }
    }
    for &(idx, c, sx, sy) in &updates {
        let b: Vec<f64> = bottom.comp(idx, 0).to_vec();
        let coef = state.comp_mut(idx, c);
        coef[1] = sx;
        coef[2] = sy;
        coef[3..].iter_mut().for_each(|v| *v = 0.0);
        if c == 0 {
            // the surface is limited; the depth follows as eta - b
            for a in 1..nb {
                coef[a] -= b[a];
            }
        }
    }
    updates.len()
}

/// Deduplicated positivity points of one cell with the basis values there.
#[derive(Debug, Clone)]
pub struct PositivityPoints {
    pub points: Vec<(f64, f64)>,
    pub phi: Vec<Vec<f64>>,
}

impl PositivityPoints {
    pub fn new(basis: &PkBasis) -> Self {
        let mut points: Vec<(f64, f64)> = Vec::new();
        for p in positivity_points(basis.k) {
            if !points.iter().any(|q| (q.0 - p.0).abs() < 1e-14 && (q.1 - p.1).abs() < 1e-14) {
                points.push(p);
            }
        }
        let phi = points.iter().map(|&(x, y)| basis.values(x, y)).collect();
        PositivityPoints { points, phi }
    }
}

/// Scaling factor pulling `h` toward its mean until it is non-negative at every point.
pub fn positivity_alpha(h: &[f64], pts: &PositivityPoints) -> f64 {
    let mean = h[0];
    let mut alpha: f64 = 1.0;
    for phi in &pts.phi {
        let v = dot(h, phi);
        if v < 0.0 {
            let r = (mean / (mean - v)).abs();
            alpha = alpha.min(r);
        }
    }
    alpha
}

/// Apply the positivity limiter to the depth of every interior cell.
/// Returns the number of modified cells.
pub fn positivity_limit(state: &mut DgField, grid: &Grid, pts: &PositivityPoints) -> Result<usize> {
    let mut count = 0;
    for (i, j) in grid.interior() {
        let idx = grid.idx(i, j);
        let h = state.comp_mut(idx, 0);
        if h[0] < 0.0 {
            if h[0] < -NEGATIVE_MEAN_TOL {
                return Err(Error::NegativeAverage { mesh: grid.kind, i, j, value: h[0] });
            }
            h.iter_mut().for_each(|v| *v = 0.0);
            count += 1;
            continue;
        }
        let alpha = positivity_alpha(h, pts);
        if alpha < 1.0 {
            h[1..].iter_mut().for_each(|v| *v *= alpha);
            count += 1;
        }
    }
    Ok(count)
}

/// Smallest depth over the positivity points of every interior cell.
pub fn min_point_depth(state: &DgField, grid: &Grid, pts: &PositivityPoints) -> f64 {
    grid.interior()
        .flat_map(|(i, j)| {
            let h = state.comp(grid.idx(i, j), 0);
            pts.phi.iter().map(move |phi| dot(h, phi))
        })
        .fold(f64::INFINITY, f64::min)
}
