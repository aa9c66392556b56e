//! Least-squares modification of the projected bottoms so that each cell mean
//! on one mesh equals the mean of the other mesh's bottom over that cell.

use alloc::vec;
use alloc::vec::Vec;

use crate::basis::{DgField, PkBasis};
use crate::boundary::fill_ghosts;
use crate::error::{Error, Result};
use crate::mesh::points::quarter_coord;
use crate::mesh::quadrature::gauss_rule;
use crate::mesh::{mirror_index, wrap, BoundarySet, Grid, MeshKind, MeshPair};

/// `q[l][m][a]`: integral of basis function `a` over quarter `(l, m)` of the reference cell.
fn quarter_integrals(basis: &PkBasis) -> [[Vec<f64>; 2]; 2] {
    let rule = gauss_rule(basis.k);
    let mut q: [[Vec<f64>; 2]; 2] = Default::default();
    for l in 0..2 {
        for m in 0..2 {
            let mut acc = vec![0.0; basis.len()];
            for (&a, &wa) in rule.points.iter().zip(&rule.weights) {
                for (&b, &wb) in rule.points.iter().zip(&rule.weights) {
                    let phi = basis.values(quarter_coord(l, a), quarter_coord(m, b));
                    for (s, p) in acc.iter_mut().zip(phi) {
                        *s += 0.25 * wa * wb * p;
                    }
                }
            }
            q[l][m] = acc;
        }
    }
    q
}

/// Interior cell standing in for `(i, j)` and the reflections applied.
fn resolve(grid: &Grid, i: isize, j: isize) -> (usize, usize, bool, bool) {
    let fix = |i: isize, n: usize, periodic: bool| -> (isize, bool) {
        if i >= 0 && i < n as isize {
            (i, false)
        } else if periodic {
            (wrap(i, n), false)
        } else {
            (mirror_index(grid.kind, i, n), true)
        }
    };
    let (ii, fx) = fix(i, grid.nx, grid.periodic_x);
    let (jj, fy) = fix(j, grid.ny, grid.periodic_y);
    (ii as usize, jj as usize, fx, fy)
}

/// Sparse constraint rows over the stacked interior coefficients (primal first).
struct Constraints {
    rows: Vec<Vec<(usize, f64)>>,
    ncols: usize,
}

impl Constraints {
    fn build(mesh: &MeshPair, basis: &PkBasis) -> Self {
        let nb = basis.len();
        let q = quarter_integrals(basis);
        let (p, d) = (&mesh.primal, &mesh.dual);
        let offset = |kind: MeshKind| if kind == MeshKind::Primal { 0 } else { p.n_interior() * nb };
        let mut rows = Vec::new();
        for (t, o) in [(p, d), (d, p)] {
            for (i, j) in t.interior() {
                let mut row = vec![(offset(t.kind) + (i as usize * t.ny + j as usize) * nb, 1.0)];
                for l in 0..2 {
                    for m in 0..2 {
                        let oi = MeshPair::opposite_index(t.kind, i, l);
                        let oj = MeshPair::opposite_index(t.kind, j, m);
                        let (ri, rj, fx, fy) = resolve(o, oi, oj);
                        let base = offset(o.kind) + (ri * o.ny + rj) * nb;
                        // target quarter (l, m) is quarter (1 - l, 1 - m) of the opposite cell
                        for a in 0..nb {
                            let w = q[1 - l][1 - m][a] * basis.mirror_sign(a, fx, fy);
                            if w != 0.0 {
                                row.push((base + a, -w));
                            }
                        }
                    }
                }
                rows.push(row);
            }
        }
        Constraints { rows, ncols: (p.n_interior() + d.n_interior()) * nb }
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = row.iter().map(|&(c, w)| w * x[c]).sum();
        }
    }

    fn apply_t(&self, y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (yi, row) in y.iter().zip(&self.rows) {
            for &(c, w) in row {
                out[c] += w * yi;
            }
        }
    }
}

fn gather(mesh: &MeshPair, b: [&DgField; 2], nb: usize) -> Vec<f64> {
    let mut x = Vec::with_capacity((mesh.primal.n_interior() + mesh.dual.n_interior()) * nb);
    for (g, f) in [(&mesh.primal, b[0]), (&mesh.dual, b[1])] {
        for (i, j) in g.interior() {
            x.extend_from_slice(f.comp(g.idx(i, j), 0));
        }
    }
    x
}

/// Largest violation of the mean constraints on either mesh.
pub fn constraint_residual(mesh: &MeshPair, basis: &PkBasis, bottoms: [&DgField; 2]) -> f64 {
    let c = Constraints::build(mesh, basis);
    let x = gather(mesh, bottoms, basis.len());
    let mut r = vec![0.0; c.rows.len()];
    c.apply(&x, &mut r);
    r.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Replace both projected bottoms by the closest pair (in the coefficient norm)
/// satisfying the mean constraints, then refill the ghost layers.
/// Returns the final constraint residual.
pub fn modify_bathymetry(
    mesh: &MeshPair,
    basis: &PkBasis,
    bc: &BoundarySet,
    primal: &mut DgField,
    dual: &mut DgField,
) -> Result<f64> {
    let nb = basis.len();
    let c = Constraints::build(mesh, basis);
    let mut x = gather(mesh, [primal, dual], nb);
    let n = c.rows.len();
    let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut r = vec![0.0; n];
    c.apply(&x, &mut r);
    // conjugate gradients on A A^T lambda = A x; the system is singular but consistent
    // on periodic meshes, where CG stays in the range
    let mut lambda = vec![0.0; n];
    let mut p = r.clone();
    let mut rr: f64 = r.iter().map(|v| v * v).sum();
    let mut tmp = vec![0.0; c.ncols];
    let mut ap = vec![0.0; n];
    let tol = 1e-30 * scale * scale * n as f64;
    let mut it = 0;
    while rr > tol && it < 20 * n + 100 {
        c.apply_t(&p, &mut tmp);
        c.apply(&tmp, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            break;
        }
        let alpha = rr / pap;
        for k in 0..n {
            lambda[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        let rr_new: f64 = r.iter().map(|v| v * v).sum();
        let beta = rr_new / rr;
        rr = rr_new;
        for k in 0..n {
            p[k] = r[k] + beta * p[k];
        }
        it += 1;
    }
    c.apply_t(&lambda, &mut tmp);
    for (xi, t) in x.iter_mut().zip(&tmp) {
        *xi -= t;
    }
    c.apply(&x, &mut r);
    let res = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(res <= 1e-13 * scale) {
        return Err(Error::Constraint { residual: res });
    }
    let mut off = 0;
    for (g, f) in [(&mesh.primal, primal), (&mesh.dual, dual)] {
        for (i, j) in g.interior() {
            f.comp_mut(g.idx(i, j), 0).copy_from_slice(&x[off..off + nb]);
            off += nb;
        }
        fill_ghosts(f, g, basis, bc);
    }
    Ok(res)
}
