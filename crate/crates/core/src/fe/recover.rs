//! Velocity recovery with the near-dry fallback and ghost-cell nodal data.

use alloc::vec;
use alloc::vec::Vec;

use super::assemble::{FeSolver, VelocityField};
use crate::basis::DgField;
use crate::error::{Error, Result};
use crate::mesh::{mirror_index, wrap, Boundary};
use crate::model::waves::StokesWave;
use crate::model::PhysParams;

/// Incident wave entering through the left boundary, with long-wave velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InflowVelocity {
    pub wave: StokesWave,
    /// Still-water depth at the inflow boundary.
    pub h0: f64,
    pub g: f64,
}

impl InflowVelocity {
    pub fn eta(&self, x: f64, t: f64) -> f64 {
        self.wave.eta(x, t)
    }

    pub fn u(&self, x: f64, t: f64) -> f64 {
        self.eta(x, t) * libm::sqrt(self.g / self.h0)
    }
}

/// Regularized algebraic velocity used where the depth is too small for the FE solve.
pub fn dry_fallback_velocity(h: f64, hp: f64, hq: f64, bx: f64, by: f64, alpha: f64, eps: f64) -> (f64, f64) {
    let h4 = h * h * h * h;
    let den = libm::sqrt(h4 + h4.max(eps));
    if den == 0.0 {
        return (0.0, 0.0);
    }
    let pt = core::f64::consts::SQRT_2 * h * hp / den;
    let qt = core::f64::consts::SQRT_2 * h * hq / den;
    let d = 1.0 + alpha * bx * bx + alpha * by * by;
    let cross = alpha * bx * by / d;
    let u = (1.0 + alpha * by * by) / d * pt - cross * qt;
    let v = (1.0 + alpha * bx * bx) / d * qt - cross * pt;
    (u, v)
}

impl FeSolver {
    /// Depth threshold separating FE-solved cells from fallback cells.
    pub fn wet_threshold(&self) -> f64 {
        let g = &self.space.grid;
        let e = (self.space.k + 1) as f64;
        libm::pow(g.dx, e).max(libm::pow(g.dy, e))
    }

    fn regularization(&self) -> f64 {
        let g = &self.space.grid;
        libm::pow(g.dx, 4.0).min(libm::pow(g.dy, 4.0))
    }

    /// Per-element wet flags: minimum depth over the Gauss points at least the threshold.
    pub fn wet_cells(&self, state: &DgField) -> Vec<bool> {
        let grid = &self.space.grid;
        let h0 = self.wet_threshold();
        let mut wet = vec![false; grid.nx * grid.ny];
        for i in 0..grid.nx {
            for j in 0..grid.ny {
                let hc = state.comp(grid.idx(i as isize, j as isize), 0);
                let min = self
                    .wet_phi
                    .iter()
                    .map(|phi| crate::basis::dot(hc, phi))
                    .fold(f64::INFINITY, f64::min);
                wet[self.space.elem_index(i, j)] = min >= h0;
            }
        }
        wet
    }

    /// Solve for `(u, v)` given the conserved state on this grid.
    pub fn recover_velocity(
        &mut self,
        state: &DgField,
        bottom: &DgField,
        p: &PhysParams,
        t: f64,
        inflow: Option<&InflowVelocity>,
        guess: Option<&VelocityField>,
    ) -> Result<VelocityField> {
        let wet = self.wet_cells(state);
        let all_wet = wet.iter().all(|&w| w);
        let nn = self.space.n_nodes();
        let nl = self.space.n_local();
        let grid = self.space.grid.clone();
        let (dx, dy) = (grid.dx, grid.dy);

        // fallback values on nodes touching near-dry cells
        let mut fb_sum = vec![0.0; 2 * nn];
        let mut fb_cnt = vec![0u32; nn];
        if !all_wet {
            let eps = self.regularization();
            for i in 0..grid.nx {
                for j in 0..grid.ny {
                    let e = self.space.elem_index(i, j);
                    if wet[e] {
                        continue;
                    }
                    let idx = grid.idx(i as isize, j as isize);
                    let (hc, pc, qc, bc) =
                        (state.comp(idx, 0), state.comp(idx, 1), state.comp(idx, 2), bottom.comp(idx, 0));
                    for l in 0..nl {
                        let jets = &self.node_jets[l];
                        let (mut h, mut hp, mut hq, mut bx, mut by) = (0.0, 0.0, 0.0, 0.0, 0.0);
                        for (b, jb) in jets.iter().enumerate() {
                            h += hc[b] * jb[0];
                            hp += pc[b] * jb[0];
                            hq += qc[b] * jb[0];
                            bx += bc[b] * jb[1];
                            by += bc[b] * jb[2];
                        }
                        let (u, v) = dry_fallback_velocity(h.max(0.0), hp, hq, bx / dx, by / dy, p.alpha, eps);
                        let n = self.space.elem_nodes[e * nl + l];
                        fb_sum[2 * n] += u;
                        fb_sum[2 * n + 1] += v;
                        fb_cnt[n] += 1;
                    }
                }
            }
        }

        self.assemble(state, bottom, p, if all_wet { None } else { Some(&wet) })?;
        let mut x = vec![0.0; 2 * nn];
        if let Some(g) = guess {
            for n in 0..nn {
                x[2 * n] = g.u[n];
                x[2 * n + 1] = g.v[n];
            }
        }
        for n in 0..nn {
            if fb_cnt[n] > 0 {
                let c = fb_cnt[n] as f64;
                let (u, v) = (fb_sum[2 * n] / c, fb_sum[2 * n + 1] / c);
                self.constrain(n, u, v);
                x[2 * n] = u;
                x[2 * n + 1] = v;
            }
        }
        if let Some(inf) = inflow {
            for k in 0..self.space.inflow_nodes.len() {
                let n = self.space.inflow_nodes[k];
                let (xn, _) = self.space.node_position(n);
                let u = inf.u(xn, t);
                self.constrain(n, u, 0.0);
                x[2 * n] = u;
                x[2 * n + 1] = 0.0;
            }
        }
        self.solve(&mut x)?;
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::Solver { iterations: self.last_stats.iterations, residual: f64::NAN });
        }
        let mut field = VelocityField::zeros(&self.space);
        for n in 0..nn {
            field.u[n] = x[2 * n];
            field.v[n] = x[2 * n + 1];
        }
        self.fill_local(&mut field, inflow, t);
        Ok(field)
    }

    /// Gather per-cell nodal values, including the ghost ring.
    pub fn fill_local(&self, field: &mut VelocityField, inflow: Option<&InflowVelocity>, t: f64) {
        let sp = &self.space;
        let grid = &sp.grid;
        let bc = sp.bc;
        let k = sp.k;
        let k1 = k + 1;
        let nl = sp.n_local();
        let (nx, ny) = (grid.nx, grid.ny);
        for (i, j) in grid.all_cells().collect::<Vec<_>>() {
            let dst = grid.idx(i, j) * 2 * nl;
            let (mut si, mut sj) = (i, j);
            let (mut fx, mut fy) = (false, false);
            let (mut su, mut sv) = (1.0, 1.0);
            let mut from_inflow = false;
            if i < 0 || i >= nx as isize {
                let side = if i < 0 { bc.left } else { bc.right };
                match side {
                    Boundary::Periodic => si = wrap(i, nx),
                    Boundary::Inflow if inflow.is_some() => from_inflow = true,
                    Boundary::Wall => {
                        si = mirror_index(grid.kind, i, nx);
                        fx = true;
                        su = -1.0;
                    }
                    _ => {
                        si = mirror_index(grid.kind, i, nx);
                        fx = true;
                    }
                }
            }
            if j < 0 || j >= ny as isize {
                let side = if j < 0 { bc.bottom } else { bc.top };
                match side {
                    Boundary::Periodic => sj = wrap(j, ny),
                    Boundary::Wall => {
                        sj = mirror_index(grid.kind, j, ny);
                        fy = true;
                        sv = -1.0;
                    }
                    _ => {
                        sj = mirror_index(grid.kind, j, ny);
                        fy = true;
                    }
                }
            }
            if from_inflow {
                let inf = inflow.expect("checked above");
                for p in 0..k1 {
                    let (xr, _) = sp.local_node_ref(p * k1);
                    let (x, _) = grid.to_physical(i, j, xr, 0.0);
                    let u = inf.u(x, t);
                    for q in 0..k1 {
                        field.local[dst + p * k1 + q] = u;
                        field.local[dst + nl + p * k1 + q] = 0.0;
                    }
                }
                continue;
            }
            let e = sp.elem_index(si as usize, sj as usize);
            for p in 0..k1 {
                for q in 0..k1 {
                    let sp_ = if fx { k - p } else { p };
                    let sq = if fy { k - q } else { q };
                    let n = sp.elem_nodes[e * nl + sp_ * k1 + sq];
                    field.local[dst + p * k1 + q] = su * field.u[n];
                    field.local[dst + nl + p * k1 + q] = sv * field.v[n];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::PkBasis;
    use crate::mesh::{build_overlapping_meshes, BoundarySet, Domain};
    use crate::model::bathymetry::Bathymetry;
    use crate::model::momentum::momentum_from_jets;
    use crate::model::ScalarJet;

    #[test]
    fn fallback_cases() {
        assert_eq!(dry_fallback_velocity(0.0, 1.0, 1.0, 0.3, 0.1, 1.0, 1e-4), (0.0, 0.0));
        // h^4 >= eps: plain hP / h over a flat bottom
        let (u, v) = dry_fallback_velocity(0.5, 0.2, -0.1, 0.0, 0.0, 1.159, 1e-4);
        assert!((u - 0.4).abs() < 1e-15 && (v + 0.2).abs() < 1e-15);
        // damped below the threshold: h = eps^{1/4} / 2
        let eps = 1e-4;
        let h = 0.5 * libm::pow(eps, 0.25);
        let (u, _) = dry_fallback_velocity(h, 0.01, 0.0, 0.0, 0.0, 1.0, eps);
        let expect = core::f64::consts::SQRT_2 * h * 0.01 / libm::sqrt(h * h * h * h + eps);
        assert!((u - expect).abs() < 1e-15);
        assert!(u < 0.01 / h);
        // sloped bottom: inverts the algebraic relation exactly for large h
        let (a, bx, by, hh) = (1.2, 0.3, -0.2, 1.0);
        let (u0, v0) = (0.7, -0.4);
        let hp = hh * (1.0 + a * bx * bx) * u0 + a * hh * bx * by * v0;
        let hq = a * hh * bx * by * u0 + hh * (1.0 + a * by * by) * v0;
        let (u, v) = dry_fallback_velocity(hh, hp, hq, bx, by, a, 1e-8);
        assert!((u - u0).abs() < 1e-14 && (v - v0).abs() < 1e-14);
    }

    fn setup(k: usize, n: usize, bc: BoundarySet) -> (crate::mesh::MeshPair, FeSolver, PkBasis) {
        let m = build_overlapping_meshes(Domain::new(-1.0, 1.0, -1.0, 1.0).unwrap(), n, n, bc).unwrap();
        let s = FeSolver::new(&m.primal, k, bc).unwrap();
        (m, s, PkBasis::new(k))
    }

    #[test]
    fn uniform_flow_flat_bottom() {
        let (m, mut s, basis) = setup(1, 6, BoundarySet::periodic());
        let p = PhysParams { g: 9.81, alpha: 1.0 };
        let state = DgField::project(&m.primal, &basis, 3, true, |_, _, o| {
            o[0] = 1.0;
            o[1] = 0.7;
            o[2] = 0.0;
        })
        .unwrap();
        let bottom = DgField::zeros(&m.primal, basis.len(), 1);
        let f = s.recover_velocity(&state, &bottom, &p, 0.0, None, None).unwrap();
        assert!(f.u.iter().all(|u| (u - 0.7).abs() < 1e-9));
        assert!(f.v.iter().all(|v| v.abs() < 1e-9));
        // zero data gives exactly zero
        let zero = DgField::project(&m.primal, &basis, 3, true, |_, _, o| {
            o[0] = 1.0;
            o[1] = 0.0;
            o[2] = 0.0;
        })
        .unwrap();
        let f = s.recover_velocity(&zero, &bottom, &p, 0.0, None, Some(&f)).unwrap();
        assert!(f.u.iter().chain(&f.v).all(|&x| x == 0.0));
    }

    #[test]
    fn dry_domain_gives_zero_velocity() {
        let (m, mut s, basis) = setup(2, 4, BoundarySet::uniform(Boundary::Outgoing));
        let state = DgField::zeros(&m.primal, basis.len(), 3);
        let bottom = DgField::zeros(&m.primal, basis.len(), 1);
        let f = s.recover_velocity(&state, &bottom, &PhysParams::default(), 0.0, None, None).unwrap();
        assert!(f.u.iter().chain(&f.v).chain(&f.local).all(|&x| x == 0.0));
    }

    /// Manufactured smooth solution over a smooth bottom; returns max nodal error.
    /// Max nodal velocity error for a smooth periodic solution over a bottom plane
    /// of slope `bs`; `planar` restricts the data to functions of `x` with `v = 0`.
    fn manufactured_error(k: usize, n: usize, planar: bool, bs: f64) -> f64 {
        let ha = 0.2;
        let (m, mut s, basis) = setup(k, n, BoundarySet::periodic());
        let p = PhysParams { g: 9.81, alpha: 1.159 };
        let pi = core::f64::consts::PI;
        let w = if planar { 0.0 } else { 1.0 };
        let hj = move |x: f64, y: f64| {
            let (sx, cx) = (libm::sin(pi * x), libm::cos(pi * x));
            let (sy, cy) = (w * libm::sin(pi * y), libm::cos(w * pi * y));
            ScalarJet {
                v: 1.0 + ha * sx * cy,
                x: ha * pi * cx * cy,
                y: -ha * w * pi * sx * sy,
                xx: -ha * pi * pi * sx * cy,
                xy: -ha * w * pi * pi * cx * sy,
                yy: -ha * w * w * pi * pi * sx * cy,
            }
        };
        let uj = move |x: f64, y: f64| {
            let (sx, cx) = (libm::sin(pi * x), libm::cos(pi * x));
            let (sy, cy) = (w * libm::sin(pi * y), libm::cos(w * pi * y));
            ScalarJet {
                v: 0.5 + 0.3 * cx * cy,
                x: -0.3 * pi * sx * cy,
                y: -0.3 * w * pi * cx * sy,
                xx: -0.3 * pi * pi * cx * cy,
                xy: 0.3 * w * pi * pi * sx * sy,
                yy: -0.3 * w * w * pi * pi * cx * cy,
            }
        };
        let vj = move |x: f64, y: f64| if planar { ScalarJet::constant(0.0) } else { uj(y, x).swapped() };
        // a sloping plane: its slopes are continuous across the periodic seam
        let bj = move |x: f64, y: f64| ScalarJet { v: -0.5 + bs * x - 0.5 * bs * y, x: bs, y: -0.5 * bs, ..ScalarJet::constant(0.0) };
        let state = DgField::project(&m.primal, &basis, 3, true, |x, y, o| {
            let (hp, hq) = momentum_from_jets(&hj(x, y), &uj(x, y), &vj(x, y), &bj(x, y), &p);
            o[0] = hj(x, y).v;
            o[1] = hp;
            o[2] = hq;
        })
        .unwrap();
        let bottom = DgField::project(&m.primal, &basis, 1, true, |x, y, o| o[0] = bj(x, y).v).unwrap();
        let f = s.recover_velocity(&state, &bottom, &p, 0.0, None, None).unwrap();
        let mut err = 0.0f64;
        for nidx in 0..s.space.n_nodes() {
            let (x, y) = s.space.node_position(nidx);
            err = err.max((f.u[nidx] - uj(x, y).v).abs()).max((f.v[nidx] - vj(x, y).v).abs());
        }
        err
    }

    #[test]
    fn manufactured_convergence() {
        let rate = |k, n, planar, bs| {
            let e1 = manufactured_error(k, n, planar, bs);
            let e2 = manufactured_error(k, 2 * n, planar, bs);
            libm::log2(e1 / e2)
        };
        for k in [1, 2] {
            let r = rate(k, 8, true, 0.0);
            assert!(r > k as f64 + 0.7, "planar k={k}: rate {r}");
            // bottom slope terms tie v to u_x and the grad-div term controls only
            // the divergence: second order for both degrees
            let r = rate(k, 8, true, 0.1);
            assert!(r > 1.7, "sloped k={k}: rate {r}");
            let r = rate(k, 16, false, 0.1);
            assert!(r > 1.7, "2D k={k}: rate {r}");
        }
    }

    #[test]
    fn mirror_ghosts_and_inflow() {
        let bc = BoundarySet {
            left: Boundary::Inflow,
            right: Boundary::Wall,
            bottom: Boundary::Periodic,
            top: Boundary::Periodic,
        };
        let (m, mut s, basis) = setup(1, 4, bc);
        let state = DgField::project(&m.primal, &basis, 3, true, |x, _, o| {
            o[0] = 1.0;
            o[1] = 0.1 * (x + 1.0);
            o[2] = 0.0;
        })
        .unwrap();
        let bottom = DgField::zeros(&m.primal, basis.len(), 1);
        let inflow = InflowVelocity { wave: StokesWave::new(2.0, 0.01, 3.0).unwrap(), h0: 1.0, g: 9.81 };
        let f = s.recover_velocity(&state, &bottom, &PhysParams::default(), 0.3, Some(&inflow), None).unwrap();
        // boundary nodes carry the incident velocity
        let n0 = 0;
        assert!((f.u[n0] - inflow.u(-1.0, 0.3)).abs() < 1e-14);
        // wall ghost: u odd, v even about x = 1
        let nl = s.space.n_local();
        let g = m.primal.idx(4, 1);
        let inner = m.primal.idx(3, 1);
        let (gc, ic) = (f.cell(g, nl).to_vec(), f.cell(inner, nl).to_vec());
        // local node (0, q) of the ghost mirrors node (1, q) of the interior cell
        assert_eq!(gc[0], -ic[2]);
        assert_eq!(gc[nl], ic[nl + 2]);
        // inflow ghost
        let gl = f.cell(m.primal.idx(-1, 0), nl);
        assert!((gl[0] - inflow.u(-1.5, 0.3)).abs() < 1e-14);
    }

    #[test]
    fn coercive_on_flat_bottom() {
        // symmetric matrix with positive diagonal and positive Rayleigh quotients
        let (m, mut s, basis) = setup(1, 4, BoundarySet::periodic());
        let state = DgField::project(&m.primal, &basis, 3, true, |x, y, o| {
            o[0] = 1.0 + 0.3 * libm::sin(x + y);
            o[1] = 0.0;
            o[2] = 0.0;
        })
        .unwrap();
        let bottom = DgField::project(&m.primal, &basis, 1, true, |_, _, o| o[0] = -0.3).unwrap();
        s.assemble(&state, &bottom, &PhysParams { g: 9.81, alpha: 1.159 }, None).unwrap();
        let d = s.matrix().to_dense();
        let n = d.len();
        for i in 0..n {
            for j in 0..n {
                assert!((d[i][j] - d[j][i]).abs() < 1e-13);
            }
        }
        let mat = nalgebra::DMatrix::from_fn(n, n, |i, j| d[i][j]);
        assert!(mat.cholesky().is_some());
        let _ = Bathymetry::Flat { level: 0.0 };
    }
}
