//! Ghost-layer fill for DG fields.
//!
//! Periodic sides wrap. Outgoing sides use the even reflection of the interior
//! polynomial about the boundary, walls additionally flip the normal momentum,
//! and the inflow side projects the incident wave onto the ghost cells.

use alloc::vec::Vec;

use crate::basis::{dot, DgField, PkBasis};
use crate::fe::InflowVelocity;
use crate::mesh::quadrature::gauss_legendre;
use crate::mesh::{mirror_index, wrap, Boundary, BoundarySet, Grid};

#[derive(Clone, Copy, PartialEq)]
enum Axis {
    X,
    Y,
}

fn copy_cell(field: &mut DgField, basis: &PkBasis, dst: usize, src: usize, flip: Option<Axis>, negate: Option<usize>) {
    let n = field.nb * field.ncomp;
    for c in 0..field.ncomp {
        for a in 0..field.nb {
            let mut s = match flip {
                Some(Axis::X) => basis.mirror_sign(a, true, false),
                Some(Axis::Y) => basis.mirror_sign(a, false, true),
                None => 1.0,
            };
            if negate == Some(c) {
                s = -s;
            }
            field.data[dst * n + c * field.nb + a] = s * field.data[src * n + c * field.nb + a];
        }
    }
}

/// Component flipped by a wall normal to `axis`, for a `(h, hP, hQ)` field.
fn wall_component(field: &DgField, axis: Axis) -> Option<usize> {
    if field.ncomp != 3 {
        return None;
    }
    Some(if axis == Axis::X { 1 } else { 2 })
}

fn fill_side(field: &mut DgField, grid: &Grid, basis: &PkBasis, side: Boundary, axis: Axis, ghost: isize, other: isize) {
    let n = if axis == Axis::X { grid.nx } else { grid.ny };
    let src = match side {
        Boundary::Periodic => wrap(ghost, n),
        _ => mirror_index(grid.kind, ghost, n),
    };
    let (dst, from) = match axis {
        Axis::X => (grid.idx(ghost, other), grid.idx(src, other)),
        Axis::Y => (grid.idx(other, ghost), grid.idx(other, src)),
    };
    match side {
        Boundary::Periodic => copy_cell(field, basis, dst, from, None, None),
        Boundary::Wall => copy_cell(field, basis, dst, from, Some(axis), wall_component(field, axis)),
        Boundary::Outgoing | Boundary::Inflow => copy_cell(field, basis, dst, from, Some(axis), None),
    }
}

/// Fill the ghost layer of `field` from its interior. Inflow sides are treated
/// as outgoing here; [`fill_inflow_ghosts`] overwrites them afterwards.
pub fn fill_ghosts(field: &mut DgField, grid: &Grid, basis: &PkBasis, bc: &BoundarySet) {
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    for j in 0..ny {
        fill_side(field, grid, basis, bc.left, Axis::X, -1, j);
        fill_side(field, grid, basis, bc.right, Axis::X, nx, j);
    }
    // the y pass includes the ghost columns, which fills the corners
    for i in -1..=nx {
        fill_side(field, grid, basis, bc.bottom, Axis::Y, -1, i);
        fill_side(field, grid, basis, bc.top, Axis::Y, ny, i);
    }
}

/// Project the incident wave onto the left ghost column of a `(h, hP, hQ)` field:
/// `h = eta_inc - b`, `hP = h u_inc`, `hQ = 0`, with `b` the ghost bottom polynomial.
pub fn fill_inflow_ghosts(
    state: &mut DgField,
    bottom: &DgField,
    grid: &Grid,
    basis: &PkBasis,
    inflow: &InflowVelocity,
    t: f64,
) {
    let rule = gauss_legendre(basis.k + 2).expect("valid rule size");
    let nb = basis.len();
    let mut pts: Vec<(f64, f64, f64, Vec<f64>)> = Vec::new();
    for (&xi, &wx) in rule.points.iter().zip(&rule.weights) {
        for (&eta, &wy) in rule.points.iter().zip(&rule.weights) {
            pts.push((xi, eta, wx * wy, basis.values(xi, eta)));
        }
    }
    let jr = if grid.periodic_y { 0..grid.ny as isize } else { -1..grid.ny as isize + 1 };
    for j in jr {
        let idx = grid.idx(-1, j);
        let mut out = [alloc::vec![0.0; nb], alloc::vec![0.0; nb]];
        for (xi, eta, w, phi) in &pts {
            let (x, _) = grid.to_physical(-1, j, *xi, *eta);
            let h = inflow.eta(x, t) - dot(bottom.comp(idx, 0), phi);
            let hp = h * inflow.u(x, t);
            for a in 0..nb {
                out[0][a] += w * h * phi[a];
                out[1][a] += w * hp * phi[a];
            }
        }
        state.comp_mut(idx, 0).copy_from_slice(&out[0]);
        state.comp_mut(idx, 1).copy_from_slice(&out[1]);
        state.comp_mut(idx, 2).iter_mut().for_each(|v| *v = 0.0);
    }
    if grid.periodic_y {
        let ny = grid.ny as isize;
        let n = state.nb * state.ncomp;
        for (g, s) in [(-1, ny - 1), (ny, 0)] {
            let (d, f) = (grid.idx(-1, g), grid.idx(-1, s));
            let tmp = state.data[f * n..(f + 1) * n].to_vec();
            state.data[d * n..(d + 1) * n].copy_from_slice(&tmp);
        }
    }
}
