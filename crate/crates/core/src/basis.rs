//! Orthonormal P^k modal basis on the reference cell `[-1/2, 1/2]^2` and the
//! cell-wise polynomial field built on it.
//!
//! Mode `(p, q)` is `L_p(xi) L_q(eta)` with `L_p = sqrt(2p+1) P_p(2 xi)`, for
//! `p + q <= k`, ordered by total degree and then by decreasing `p`. The first
//! coefficient of a cell is its mean value.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mesh::quadrature::{gauss_legendre, Rule};
use crate::mesh::{Grid, MeshKind};

/// Scaled Legendre polynomial on `[-1/2, 1/2]` with first and second derivatives.
pub fn legendre_jet(p: usize, x: f64) -> (f64, f64, f64) {
    let t = 2.0 * x;
    // P, P', P'' at t via the three-term recurrences
    let (mut p0, mut d0, mut s0) = (1.0, 0.0, 0.0);
    if p > 0 {
        let (mut p1, mut d1, mut s1) = (t, 1.0, 0.0);
        for n in 1..p {
            let nf = n as f64;
            let p2 = ((2.0 * nf + 1.0) * t * p1 - nf * p0) / (nf + 1.0);
            let d2 = d0 + (2.0 * nf + 1.0) * p1;
            let s2 = s0 + (2.0 * nf + 1.0) * d1;
            (p0, d0, s0) = (p1, d1, s1);
            (p1, d1, s1) = (p2, d2, s2);
        }
        (p0, d0, s0) = (p1, d1, s1);
    }
    let c = libm::sqrt(2.0 * p as f64 + 1.0);
    (c * p0, 2.0 * c * d0, 4.0 * c * s0)
}

/// Value and reference derivatives `[v, xi, eta, xixi, xieta, etaeta]`.
pub type Jet = [f64; 6];

#[derive(Debug, Clone, PartialEq)]
pub struct PkBasis {
    pub k: usize,
    pub modes: Vec<(usize, usize)>,
}

impl PkBasis {
    pub fn new(k: usize) -> Self {
        let mut modes = Vec::new();
        for d in 0..=k {
            for q in 0..=d {
                modes.push((d - q, q));
            }
        }
        PkBasis { k, modes }
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn eval(&self, xi: f64, eta: f64, out: &mut [f64]) {
        for (o, &(p, q)) in out.iter_mut().zip(&self.modes) {
            *o = legendre_jet(p, xi).0 * legendre_jet(q, eta).0;
        }
    }

    pub fn values(&self, xi: f64, eta: f64) -> Vec<f64> {
        let mut v = vec![0.0; self.len()];
        self.eval(xi, eta, &mut v);
        v
    }

    pub fn eval_jets(&self, xi: f64, eta: f64) -> Vec<Jet> {
        self.modes
            .iter()
            .map(|&(p, q)| {
                let (a, da, sa) = legendre_jet(p, xi);
                let (b, db, sb) = legendre_jet(q, eta);
                [a * b, da * b, a * db, sa * b, da * db, a * sb]
            })
            .collect()
    }

    /// L2 projection of `f(xi, eta)` onto the basis using `rule` in each direction.
    pub fn project(&self, rule: &Rule, mut f: impl FnMut(f64, f64) -> f64) -> Vec<f64> {
        let mut c = vec![0.0; self.len()];
        let mut phi = vec![0.0; self.len()];
        for (&x, &wx) in rule.points.iter().zip(&rule.weights) {
            for (&y, &wy) in rule.points.iter().zip(&rule.weights) {
                let v = f(x, y);
                self.eval(x, y, &mut phi);
                for (ca, pa) in c.iter_mut().zip(&phi) {
                    *ca += wx * wy * v * pa;
                }
            }
        }
        c
    }

    /// Coefficient sign under `xi -> -xi` (`sx`) and `eta -> -eta` (`sy`) reflection.
    pub fn mirror_sign(&self, a: usize, sx: bool, sy: bool) -> f64 {
        let (p, q) = self.modes[a];
        let mut s = 1.0;
        if sx && p % 2 == 1 {
            s = -s;
        }
        if sy && q % 2 == 1 {
            s = -s;
        }
        s
    }
}

/// Dot product of coefficients with basis values.
#[inline]
pub fn dot(c: &[f64], phi: &[f64]) -> f64 {
    c.iter().zip(phi).map(|(a, b)| a * b).sum()
}

/// Piecewise polynomial field with `ncomp` components on a grid, ghosts included.
#[derive(Debug, Clone, PartialEq)]
pub struct DgField {
    pub kind: MeshKind,
    pub nb: usize,
    pub ncomp: usize,
    pub data: Vec<f64>,
}

impl DgField {
    pub fn zeros(grid: &Grid, nb: usize, ncomp: usize) -> Self {
        DgField { kind: grid.kind, nb, ncomp, data: vec![0.0; grid.n_total() * nb * ncomp] }
    }

    #[inline]
    pub fn cell(&self, idx: usize) -> &[f64] {
        let n = self.nb * self.ncomp;
        &self.data[idx * n..(idx + 1) * n]
    }

    #[inline]
    pub fn cell_mut(&mut self, idx: usize) -> &mut [f64] {
        let n = self.nb * self.ncomp;
        &mut self.data[idx * n..(idx + 1) * n]
    }

    #[inline]
    pub fn comp(&self, idx: usize, c: usize) -> &[f64] {
        let s = (idx * self.ncomp + c) * self.nb;
        &self.data[s..s + self.nb]
    }

    #[inline]
    pub fn comp_mut(&mut self, idx: usize, c: usize) -> &mut [f64] {
        let s = (idx * self.ncomp + c) * self.nb;
        &mut self.data[s..s + self.nb]
    }

    #[inline]
    pub fn mean(&self, idx: usize, c: usize) -> f64 {
        self.data[(idx * self.ncomp + c) * self.nb]
    }

    /// Project a vector-valued function of physical coordinates onto every
    /// interior cell (and the ghost ring when `with_ghosts`).
    pub fn project(
        grid: &Grid,
        basis: &PkBasis,
        ncomp: usize,
        with_ghosts: bool,
        mut f: impl FnMut(f64, f64, &mut [f64]),
    ) -> Result<Self> {
        let mut field = DgField::zeros(grid, basis.len(), ncomp);
        let rule = gauss_legendre(basis.k + 2)?;
        let nq = rule.len();
        let mut vals = vec![0.0; nq * nq * ncomp];
        let phis: Vec<Vec<f64>> = rule
            .points
            .iter()
            .flat_map(|&x| rule.points.iter().map(move |&y| (x, y)))
            .map(|(x, y)| basis.values(x, y))
            .collect();
        let cells: Vec<(isize, isize)> =
            if with_ghosts { grid.all_cells().collect() } else { grid.interior().collect() };
        for (i, j) in cells {
            for (a, &xi) in rule.points.iter().enumerate() {
                for (b, &eta) in rule.points.iter().enumerate() {
                    let (x, y) = grid.to_physical(i, j, xi, eta);
                    let v = &mut vals[(a * nq + b) * ncomp..(a * nq + b + 1) * ncomp];
                    f(x, y, v);
                    if v.iter().any(|z| !z.is_finite()) {
                        return Err(Error::Projection { x, y });
                    }
                }
            }
            let idx = grid.idx(i, j);
            for c in 0..ncomp {
                let out = field.comp_mut(idx, c);
                for (a, &wa) in rule.weights.iter().enumerate() {
                    for (b, &wb) in rule.weights.iter().enumerate() {
                        let q = a * nq + b;
                        let w = wa * wb * vals[q * ncomp + c];
                        for (o, p) in out.iter_mut().zip(&phis[q]) {
                            *o += w * p;
                        }
                    }
                }
            }
        }
        Ok(field)
    }

    /// Value of component `c` at a physical point (interior cells only).
    pub fn eval_at(&self, grid: &Grid, basis: &PkBasis, c: usize, x: f64, y: f64) -> Result<f64> {
        let (i, j, xi, eta) = grid.locate(x, y)?;
        Ok(dot(self.comp(grid.idx(i, j), c), &basis.values(xi, eta)))
    }

    /// Sum over interior cells of `dx dy` times the mean of component `c`.
    pub fn integral(&self, grid: &Grid, c: usize) -> f64 {
        grid.interior().map(|(i, j)| self.mean(grid.idx(i, j), c)).sum::<f64>() * grid.cell_area()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}
