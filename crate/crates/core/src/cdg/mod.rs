//! Central DG update of one mesh from the overlapping one.
//!
//! A target cell is covered by four quarters, each lying in one cell of the
//! opposite mesh, where the opposite solution is smooth. Volume integrals use a
//! Gauss rule on every quarter; face integrals use it on every half-face, which
//! runs along the centre line of an opposite cell.

pub mod timestep;

use alloc::vec;
use alloc::vec::Vec;

use crate::basis::{DgField, PkBasis};
use crate::error::{Error, Result};
use crate::fe::space::Lagrange1d;
use crate::fe::VelocityField;
use crate::mesh::points::{opposite_coord, quarter_coord};
use crate::mesh::quadrature::gauss_rule;
use crate::mesh::{Grid, MeshPair};
use crate::model::{flux_f_scaled, flux_g_scaled, source_rest_raw, BottomSlopes, LocalState, PhysParams};

pub use timestep::{max_timestep, omega1_hat, StepSize, TimestepBounds};

/// One evaluation point of a stage, in the reference frames of both cells.
#[derive(Debug, Clone)]
struct StagePoint {
    /// Opposite cell offset `(l, m)` within the target.
    l: usize,
    m: usize,
    w: f64,
    /// Target test functions: values and reference gradients.
    phi: Vec<f64>,
    phi_x: Vec<f64>,
    phi_y: Vec<f64>,
    /// Opposite basis jets.
    jets: Vec<[f64; 6]>,
    /// Opposite FE tensor basis: values and reference gradients.
    psi: Vec<f64>,
    psi_x: Vec<f64>,
    psi_y: Vec<f64>,
}

/// Precomputed point sets of the stage for a given degree.
#[derive(Debug, Clone)]
pub struct StageTables {
    pub basis: PkBasis,
    volume: Vec<StagePoint>,
    /// Faces normal to x; `sign` is +1 on the right face.
    xfaces: Vec<(f64, StagePoint)>,
    yfaces: Vec<(f64, StagePoint)>,
    /// Opposite basis values at the opposite cell centre.
    centre_phi: Vec<f64>,
}

fn tensor(lag: &Lagrange1d, x: f64, y: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let (vx, dx) = lag.eval(x);
    let (vy, dy) = lag.eval(y);
    let n = lag.len();
    let mut v = vec![0.0; n * n];
    let mut gx = vec![0.0; n * n];
    let mut gy = vec![0.0; n * n];
    for p in 0..n {
        for q in 0..n {
            v[p * n + q] = vx[p] * vy[q];
            gx[p * n + q] = dx[p] * vy[q];
            gy[p * n + q] = vx[p] * dy[q];
        }
    }
    (v, gx, gy)
}

impl StageTables {
    pub fn new(k: usize) -> Self {
        let basis = PkBasis::new(k);
        let lag = Lagrange1d::new(k);
        let rule = gauss_rule(k);
        let point = |l: usize, m: usize, w: f64, xt: f64, yt: f64, xs: f64, ys: f64| {
            let jt = basis.eval_jets(xt, yt);
            let (psi, psi_x, psi_y) = tensor(&lag, xs, ys);
            StagePoint {
                l,
                m,
                w,
                phi: jt.iter().map(|j| j[0]).collect(),
                phi_x: jt.iter().map(|j| j[1]).collect(),
                phi_y: jt.iter().map(|j| j[2]).collect(),
                jets: basis.eval_jets(xs, ys),
                psi,
                psi_x,
                psi_y,
            }
        };
        let mut volume = Vec::new();
        for l in 0..2 {
            for m in 0..2 {
                for (&a, &wa) in rule.points.iter().zip(&rule.weights) {
                    for (&b, &wb) in rule.points.iter().zip(&rule.weights) {
                        volume.push(point(
                            l,
                            m,
                            0.25 * wa * wb,
                            quarter_coord(l, a),
                            quarter_coord(m, b),
                            opposite_coord(l, a),
                            opposite_coord(m, b),
                        ));
                    }
                }
            }
        }
        let mut xfaces = Vec::new();
        let mut yfaces = Vec::new();
        for l in 0..2 {
            let sign = if l == 1 { 1.0 } else { -1.0 };
            for m in 0..2 {
                for (&b, &wb) in rule.points.iter().zip(&rule.weights) {
                    let w = 0.5 * wb;
                    let (t, s) = (quarter_coord(m, b), opposite_coord(m, b));
                    xfaces.push((sign, point(l, m, w, 0.5 * sign, t, 0.0, s)));
                    yfaces.push((sign, point(m, l, w, t, 0.5 * sign, s, 0.0)));
                }
            }
        }
        let centre_phi = basis.values(0.0, 0.0);
        StageTables { basis, volume, xfaces, yfaces, centre_phi }
    }

    pub fn k(&self) -> usize {
        self.basis.k
    }
}

/// Read-only inputs of one stage on a target mesh.
#[derive(Debug, Clone, Copy)]
pub struct StageInputs<'a> {
    pub target: &'a Grid,
    pub opposite: &'a Grid,
    /// Target state at the start of the stage.
    pub own: &'a DgField,
    /// Opposite state with filled ghosts.
    pub opp: &'a DgField,
    pub opp_vel: &'a VelocityField,
    pub own_bottom: &'a DgField,
    pub opp_bottom: &'a DgField,
    pub dt: f64,
    pub theta: f64,
}

/// Average of the four corner values of the opposite surface.
pub fn compute_gamma(eta: [f64; 4]) -> f64 {
    0.25 * ((eta[0] + eta[1]) + (eta[2] + eta[3]))
}

/// Surface level `gamma` of every interior target cell, from the opposite surface
/// at the target corners (the opposite cell centres).
pub fn gamma_table(tables: &StageTables, inp: &StageInputs) -> Vec<f64> {
    let (t, o) = (inp.target, inp.opposite);
    let shift = t.kind.shift();
    let mut out = Vec::with_capacity(t.n_interior());
    for (i, j) in t.interior() {
        let mut eta = [0.0; 4];
        for (c, e) in eta.iter_mut().enumerate() {
            let oi = MeshPair::opposite_index(t.kind, i, c / 2);
            let oj = j + shift + (c % 2) as isize;
            let idx = o.idx(oi, oj);
            *e = crate::basis::dot(inp.opp.comp(idx, 0), &tables.centre_phi)
                + crate::basis::dot(inp.opp_bottom.comp(idx, 0), &tables.centre_phi);
        }
        out.push(compute_gamma(eta));
    }
    out
}

/// State and bottom of the opposite solution at one stage point.
struct Sample {
    s: LocalState,
    b: BottomSlopes,
    bval: f64,
    eta: f64,
}

#[inline]
fn sample(pt: &StagePoint, u: &[f64], b: &[f64], vel: &[f64], nb: usize, nl: usize, dx: f64, dy: f64) -> Sample {
    let mut h = [0.0f64; 6];
    let mut bj = [0.0f64; 6];
    // surface summed per coefficient so that a resting state cancels exactly
    let mut e = [0.0f64; 6];
    let (mut hp, mut hq) = (0.0, 0.0);
    for a in 0..nb {
        let j = &pt.jets[a];
        let (ch, cb) = (u[a], b[a]);
        let ce = ch + cb;
        for r in 0..6 {
            h[r] += ch * j[r];
            bj[r] += cb * j[r];
            e[r] += ce * j[r];
        }
        hp += u[nb + a] * j[0];
        hq += u[2 * nb + a] * j[0];
    }
    let (mut uu, mut ux, mut uy, mut vv, mut vx, mut vy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for l in 0..nl {
        let (cu, cv) = (vel[l], vel[nl + l]);
        uu += cu * pt.psi[l];
        ux += cu * pt.psi_x[l];
        uy += cu * pt.psi_y[l];
        vv += cv * pt.psi[l];
        vx += cv * pt.psi_x[l];
        vy += cv * pt.psi_y[l];
    }
    let s = LocalState {
        h: h[0],
        hp,
        hq,
        u: uu,
        v: vv,
        ux: ux / dx,
        uy: uy / dy,
        vx: vx / dx,
        vy: vy / dy,
        eta_x: e[1] / dx,
        eta_y: e[2] / dy,
        eta_xx: e[3] / (dx * dx),
        eta_yy: e[5] / (dy * dy),
    };
    let b = BottomSlopes {
        bx: bj[1] / dx,
        by: bj[2] / dy,
        bxx: bj[3] / (dx * dx),
        bxy: bj[4] / (dx * dy),
        byy: bj[5] / (dy * dy),
    };
    Sample { s, b, bval: bj[0], eta: e[0] }
}

/// One forward-Euler central DG stage on the target mesh. With `well_balanced`
/// the hydrostatic source is split around the local surface level so that still
/// water is reproduced exactly. Ghost cells of the result are left at zero.
pub fn euler_stage(
    tables: &StageTables,
    inp: &StageInputs,
    p: &PhysParams,
    well_balanced: bool,
) -> Result<DgField> {
    let (t, o) = (inp.target, inp.opposite);
    let nb = tables.basis.len();
    let nl = (tables.k() + 1) * (tables.k() + 1);
    let (dx, dy) = (t.dx, t.dy);
    let (dt, theta) = (inp.dt, inp.theta);
    let g = p.g;
    let gammas = if well_balanced { gamma_table(tables, inp) } else { Vec::new() };
    let mut out = DgField::zeros(t, nb, 3);
    let shift = t.kind.shift();
    let mut acc = vec![0.0; 3 * nb];
    let hydro = if well_balanced { 0.0 } else { 1.0 };
    for (cell, (i, j)) in t.interior().enumerate() {
        let gamma = if well_balanced { gammas[cell] } else { 0.0 };
        let opp_idx = |l: usize, m: usize| o.idx(i + shift + l as isize, j + shift + m as isize);
        acc.iter_mut().for_each(|v| *v = 0.0);
        // g h^2 / 2 - (g b^2 / 2 - g gamma b) less the constant g gamma^2 / 2
        let split = |smp: &Sample| 0.5 * g * (smp.s.h - smp.bval + gamma) * (smp.eta - gamma);
        for pt in &tables.volume {
            let oi = opp_idx(pt.l, pt.m);
            let smp = sample(pt, inp.opp.cell(oi), inp.opp_bottom.comp(oi, 0), inp.opp_vel.cell(oi, nl), nb, nl, o.dx, o.dy);
            let mut f = flux_f_scaled(&smp.s, &smp.b, p, hydro);
            let mut gg = flux_g_scaled(&smp.s, &smp.b, p, hydro);
            let mut src = source_rest_raw(&smp.s, &smp.b, p);
            let mut uval = [smp.s.h, smp.s.hp, smp.s.hq];
            if well_balanced {
                let fs = split(&smp);
                f[1] += fs;
                gg[2] += fs;
                let e = smp.eta - gamma;
                src[1] -= g * e * smp.b.bx;
                src[2] -= g * e * smp.b.by;
                // gamma and the own bottom are added below
                uval[0] = e;
            } else {
                src[1] -= g * smp.s.h * smp.b.bx;
                src[2] -= g * smp.s.h * smp.b.by;
            }
            let w = pt.w;
            for c in 0..3 {
                let (th, fd, gd, sd) = (theta * uval[c] * w, dt * f[c] * w / dx, dt * gg[c] * w / dy, dt * src[c] * w);
                let row = &mut acc[c * nb..(c + 1) * nb];
                for a in 0..nb {
                    row[a] += (th + sd) * pt.phi[a] + fd * pt.phi_x[a] + gd * pt.phi_y[a];
                }
            }
        }
        for (faces, along_x) in [(&tables.xfaces, true), (&tables.yfaces, false)] {
            for (sign, pt) in faces.iter() {
                let oi = opp_idx(pt.l, pt.m);
                let smp =
                    sample(pt, inp.opp.cell(oi), inp.opp_bottom.comp(oi, 0), inp.opp_vel.cell(oi, nl), nb, nl, o.dx, o.dy);
                let mut fl = if along_x {
                    flux_f_scaled(&smp.s, &smp.b, p, hydro)
                } else {
                    flux_g_scaled(&smp.s, &smp.b, p, hydro)
                };
                if well_balanced {
                    fl[if along_x { 1 } else { 2 }] += split(&smp);
                }
                let scale = dt * sign * pt.w / if along_x { dx } else { dy };
                for c in 0..3 {
                    let fc = scale * fl[c];
                    let row = &mut acc[c * nb..(c + 1) * nb];
                    for a in 0..nb {
                        row[a] -= fc * pt.phi[a];
                    }
                }
            }
        }
        if well_balanced {
            acc[0] += theta * gamma;
        }
        let idx = t.idx(i, j);
        let own = inp.own.cell(idx);
        let dst = out.cell_mut(idx);
        for c in 0..3 {
            for a in 0..nb {
                dst[c * nb + a] = (1.0 - theta) * own[c * nb + a] + acc[c * nb + a];
            }
        }
        if well_balanced {
            let bt = inp.own_bottom.comp(idx, 0);
            for a in 0..nb {
                dst[a] -= theta * bt[a];
            }
        }
        if dst.iter().any(|v| !v.is_finite()) {
            return Err(Error::BlowUp { mesh: t.kind, i, j });
        }
    }
    Ok(out)
}
