//! Assembly and solution of the coupled velocity system.

use alloc::vec;
use alloc::vec::Vec;

use super::space::FeSpace;
use super::sparse::{self, BandLu, SolveStats};
use crate::basis::{DgField, PkBasis};
use crate::error::{Error, Result};
use crate::mesh::quadrature::gauss_legendre;
use crate::mesh::{BoundarySet, Grid, MeshKind};
use crate::model::PhysParams;

/// Relative residual required from the linear solver.
pub const SOLVER_TOL: f64 = 1e-10;

/// Iteration count above which the banded factorization is refreshed.
const REFACTOR_ITERS: usize = 12;

/// Continuous velocity on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField {
    pub kind: MeshKind,
    pub k: usize,
    /// Nodal values, one per global node.
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// Per cell (ghosts included): `n_local` u-values followed by `n_local` v-values.
    pub local: Vec<f64>,
}

impl VelocityField {
    pub fn zeros(space: &FeSpace) -> Self {
        let nl = space.n_local();
        VelocityField {
            kind: space.grid.kind,
            k: space.k,
            u: vec![0.0; space.n_nodes()],
            v: vec![0.0; space.n_nodes()],
            local: vec![0.0; space.grid.n_total() * 2 * nl],
        }
    }

    #[inline]
    pub fn cell(&self, idx: usize, nl: usize) -> &[f64] {
        &self.local[idx * 2 * nl..(idx + 1) * 2 * nl]
    }

    /// `(u, v)` at a physical point of an interior cell.
    pub fn eval_at(&self, space: &FeSpace, x: f64, y: f64) -> Result<(f64, f64)> {
        let (i, j, xi, eta) = space.grid.locate(x, y)?;
        let (psi, _, _) = space.tensor_eval(xi, eta);
        let nl = space.n_local();
        let c = self.cell(space.grid.idx(i, j), nl);
        let u = psi.iter().zip(&c[..nl]).map(|(a, b)| a * b).sum();
        let v = psi.iter().zip(&c[nl..]).map(|(a, b)| a * b).sum();
        Ok((u, v))
    }

    pub fn max_abs(&self) -> (f64, f64) {
        let mu = self.u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mv = self.v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        (mu, mv)
    }
}

/// Reusable FE machinery for one grid: tables, matrix storage, preconditioner.
#[derive(Debug, Clone)]
pub struct FeSolver {
    pub space: FeSpace,
    pub basis: PkBasis,
    pub(crate) matrix: sparse::Csr,
    pub(crate) rhs: Vec<f64>,
    /// Factorization of a recent matrix, reused as preconditioner.
    lu: Option<BandLu>,
    ordering: Vec<usize>,
    /// Quadrature: reference weights and basis tables.
    qw: Vec<f64>,
    psi: Vec<Vec<f64>>,
    psi_x: Vec<Vec<f64>>,
    psi_y: Vec<Vec<f64>>,
    dg_jets: Vec<Vec<[f64; 6]>>,
    /// DG values at the Gauss points used by the wet test.
    pub(crate) wet_phi: Vec<Vec<f64>>,
    /// DG jets at local FE nodes.
    pub(crate) node_jets: Vec<Vec<[f64; 6]>>,
    pub last_stats: SolveStats,
}

impl FeSolver {
    pub fn new(grid: &Grid, k: usize, bc: BoundarySet) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("velocity space needs k >= 1"));
        }
        let space = FeSpace::new(grid, k, bc);
        let basis = PkBasis::new(k);
        // exact to degree 3k + 2 per direction
        let nq = (3 * k + 4) / 2;
        let rule = gauss_legendre(nq)?;
        let mut qw = Vec::new();
        let (mut psi, mut psi_x, mut psi_y, mut dg_jets) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (&x, &wx) in rule.points.iter().zip(&rule.weights) {
            for (&y, &wy) in rule.points.iter().zip(&rule.weights) {
                qw.push(wx * wy);
                let (v, gx, gy) = space.tensor_eval(x, y);
                psi.push(v);
                psi_x.push(gx);
                psi_y.push(gy);
                dg_jets.push(basis.eval_jets(x, y));
            }
        }
        let g = crate::mesh::quadrature::gauss_rule(k);
        let wet_phi = g
            .points
            .iter()
            .flat_map(|&x| g.points.iter().map(move |&y| (x, y)))
            .map(|(x, y)| basis.values(x, y))
            .collect();
        let node_jets = (0..space.n_local())
            .map(|l| {
                let (x, y) = space.local_node_ref(l);
                basis.eval_jets(x, y)
            })
            .collect();
        let matrix = space.pattern.clone();
        let ordering = space.band_ordering();
        let n = matrix.n;
        Ok(FeSolver {
            space,
            basis,
            matrix,
            rhs: vec![0.0; n],
            lu: None,
            ordering,
            qw,
            psi,
            psi_x,
            psi_y,
            dg_jets,
            wet_phi,
            node_jets,
            last_stats: SolveStats { iterations: 0, residual: 0.0 },
        })
    }

    /// Assemble the bilinear form over the elements flagged in `active`
    /// (all elements when `None`) and the moments of `(hP, hQ)`.
    pub fn assemble(
        &mut self,
        state: &DgField,
        bottom: &DgField,
        p: &PhysParams,
        active: Option<&[bool]>,
    ) -> Result<()> {
        let a = p.alpha;
        let grid = &self.space.grid;
        let (dx, dy) = (grid.dx, grid.dy);
        let area = dx * dy;
        let nl = self.space.n_local();
        let nd = 2 * nl;
        let nb = self.basis.len();
        self.matrix.clear_values();
        self.rhs.iter_mut().for_each(|v| *v = 0.0);
        let mut local = vec![0.0; nd * nd];
        // (u,u), (u,v), (v,u), (v,v) couplings, row-major over local nodes
        let mut blocks = [vec![0.0; nl * nl], vec![0.0; nl * nl], vec![0.0; nl * nl], vec![0.0; nl * nl]];
        let mut lrhs = vec![0.0; nd];
        let mut px = vec![0.0; nl];
        let mut py = vec![0.0; nl];
        for i in 0..grid.nx {
            for j in 0..grid.ny {
                let e = self.space.elem_index(i, j);
                if let Some(act) = active {
                    if !act[e] {
                        continue;
                    }
                }
                let idx = grid.idx(i as isize, j as isize);
                let hc = state.comp(idx, 0);
                let pc = state.comp(idx, 1);
                let qc = state.comp(idx, 2);
                let bc = bottom.comp(idx, 0);
                blocks.iter_mut().for_each(|b| b.iter_mut().for_each(|v| *v = 0.0));
                lrhs.iter_mut().for_each(|v| *v = 0.0);
                for (q, &wq) in self.qw.iter().enumerate() {
                    let jets = &self.dg_jets[q];
                    let mut s = [0.0f64; 11];
                    for bidx in 0..nb {
                        let jb = &jets[bidx];
                        s[0] += hc[bidx] * jb[0];
                        s[1] += hc[bidx] * jb[1];
                        s[2] += hc[bidx] * jb[2];
                        s[3] += pc[bidx] * jb[0];
                        s[4] += qc[bidx] * jb[0];
                        s[5] += bc[bidx] * jb[1];
                        s[6] += bc[bidx] * jb[2];
                        s[7] += bc[bidx] * jb[3];
                        s[8] += bc[bidx] * jb[4];
                        s[9] += bc[bidx] * jb[5];
                    }
                    let h = s[0];
                    let (hx, hy) = (s[1] / dx, s[2] / dy);
                    let (hp, hq) = (s[3], s[4]);
                    let (bx, by) = (s[5] / dx, s[6] / dy);
                    let (bxx, bxy, byy) = (s[7] / (dx * dx), s[8] / (dx * dy), s[9] / (dy * dy));
                    let w = wq * area;
                    let c_div = a / 3.0 * h * h * h;
                    let c_by = 0.5 * a * h * h * by;
                    let c_bx = 0.5 * a * h * h * bx;
                    let f_u = h * (1.0 + a * hx * bx + 0.5 * a * h * bxx + a * bx * bx);
                    let f_v = h * (a * hy * bx + 0.5 * a * h * bxy + a * bx * by);
                    let g_u = h * (a * hx * by + 0.5 * a * h * bxy + a * bx * by);
                    let g_v = h * (1.0 + a * hy * by + 0.5 * a * h * byy + a * by * by);
                    if ![c_div, f_u, f_v, g_u, g_v, hp, hq].iter().all(|v| v.is_finite()) {
                        return Err(Error::BlowUp { mesh: grid.kind, i: i as isize, j: j as isize });
                    }
                    let psi = &self.psi[q];
                    for l in 0..nl {
                        px[l] = self.psi_x[q][l] / dx;
                        py[l] = self.psi_y[q][l] / dy;
                    }
                    for ti in 0..nl {
                        let (vi, xi, yi) = (psi[ti] * w, px[ti] * w, py[ti] * w);
                        lrhs[2 * ti] += hp * vi;
                        lrhs[2 * ti + 1] += hq * vi;
                        // row coefficients multiplying the trial derivative and value
                        let (ux, uvv) = (c_div * xi, f_u * vi);
                        let (vy, vvv) = (c_div * yi, g_v * vi);
                        let uv_v = -c_by * xi + c_bx * yi + f_v * vi;
                        let vu_v = -c_bx * yi + c_by * xi + g_u * vi;
                        let r = ti * nl..(ti + 1) * nl;
                        let [b0, b1, b2, b3] = &mut blocks;
                        let (buu, buv, bvu, bvv) = (&mut b0[r.clone()], &mut b1[r.clone()], &mut b2[r.clone()], &mut b3[r]);
                        let trial = psi[..nl].iter().zip(&px[..nl]).zip(&py[..nl]);
                        let dst = buu.iter_mut().zip(buv.iter_mut()).zip(bvu.iter_mut()).zip(bvv.iter_mut());
                        for ((((a, b), c), d), ((&vj, &xj), &yj)) in dst.zip(trial) {
                            *a += ux * xj + uvv * vj;
                            *b += ux * yj + uv_v * vj;
                            *c += vy * xj + vu_v * vj;
                            *d += vy * yj + vvv * vj;
                        }
                    }
                }
                for ti in 0..nl {
                    for tj in 0..nl {
                        let b = ti * nl + tj;
                        local[2 * ti * nd + 2 * tj] = blocks[0][b];
                        local[2 * ti * nd + 2 * tj + 1] = blocks[1][b];
                        local[(2 * ti + 1) * nd + 2 * tj] = blocks[2][b];
                        local[(2 * ti + 1) * nd + 2 * tj + 1] = blocks[3][b];
                    }
                }
                let pos = &self.space.elem_pos[e * nd * nd..(e + 1) * nd * nd];
                for (pp, lv) in pos.iter().zip(&local) {
                    self.matrix.vals[*pp as usize] += lv;
                }
                let nodes = &self.space.elem_nodes[e * nl..(e + 1) * nl];
                for (l, &n) in nodes.iter().enumerate() {
                    self.rhs[2 * n] += lrhs[2 * l];
                    self.rhs[2 * n + 1] += lrhs[2 * l + 1];
                }
            }
        }
        Ok(())
    }

    /// Replace the rows of the listed nodes by `u = value_u`, `v = value_v`.
    pub fn constrain(&mut self, node: usize, value_u: f64, value_v: f64) {
        self.matrix.set_identity_row(2 * node);
        self.matrix.set_identity_row(2 * node + 1);
        self.rhs[2 * node] = value_u;
        self.rhs[2 * node + 1] = value_v;
    }

    /// Solve the assembled system; `x` is the interleaved initial guess and result.
    pub fn solve(&mut self, x: &mut [f64]) -> Result<SolveStats> {
        let x0 = x.to_vec();
        if let Some(lu) = &self.lu {
            match sparse::bicgstab(&self.matrix, lu, &self.rhs, x, SOLVER_TOL, 4 * REFACTOR_ITERS) {
                Ok(s) if s.iterations <= REFACTOR_ITERS => {
                    self.last_stats = s;
                    return Ok(s);
                }
                Ok(_) => {}
                Err(_) => x.copy_from_slice(&x0),
            }
        }
        let lu = self.lu.insert(BandLu::factor(&self.matrix, &self.ordering)?);
        let s = match sparse::bicgstab(&self.matrix, lu, &self.rhs, x, SOLVER_TOL, 200) {
            Ok(s) => s,
            Err(_) => {
                x.copy_from_slice(&x0);
                sparse::gmres(&self.matrix, lu, &self.rhs, x, SOLVER_TOL, 60, 2000)?
            }
        };
        self.last_stats = s;
        Ok(s)
    }

    pub fn matrix(&self) -> &sparse::Csr {
        &self.matrix
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }
}
