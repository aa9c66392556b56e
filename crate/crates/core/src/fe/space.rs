//! Continuous tensor-product Lagrange space on one grid.
//!
//! Node `(a, b)` sits at `(x_left + a dx / k, y_bottom + b dy / k)` where
//! `x_left` is the left edge of cell 0. Node ids are `a * nny + b`; the two
//! velocity unknowns of node `n` are dofs `2n` (u) and `2n + 1` (v).

use alloc::vec;
use alloc::vec::Vec;

use super::sparse::Csr;
use crate::mesh::{Boundary, BoundarySet, Grid};

/// Degree-k Lagrange polynomials on equispaced nodes of `[-1/2, 1/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lagrange1d {
    pub nodes: Vec<f64>,
}

impl Lagrange1d {
    pub fn new(k: usize) -> Self {
        let nodes = (0..=k).map(|p| -0.5 + p as f64 / k as f64).collect();
        Lagrange1d { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Values and first derivatives of every basis polynomial at `t`.
    pub fn eval(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.nodes.len();
        let mut val = vec![0.0; n];
        let mut der = vec![0.0; n];
        for p in 0..n {
            let mut v = 1.0;
            let mut d = 0.0;
            for q in 0..n {
                if q == p {
                    continue;
                }
                let den = self.nodes[p] - self.nodes[q];
                // product rule accumulated alongside the value
                d = d * (t - self.nodes[q]) / den + v / den;
                v *= (t - self.nodes[q]) / den;
            }
            val[p] = v;
            der[p] = d;
        }
        (val, der)
    }
}

/// Node numbering, connectivity and matrix pattern of the Q^k space on a grid.
#[derive(Debug, Clone)]
pub struct FeSpace {
    pub k: usize,
    pub grid: Grid,
    pub bc: BoundarySet,
    pub nnx: usize,
    pub nny: usize,
    pub lagrange: Lagrange1d,
    /// Global node ids of each interior element, local node `p * (k+1) + q`.
    pub elem_nodes: Vec<usize>,
    /// Nodes carrying an inflow condition.
    pub inflow_nodes: Vec<usize>,
    pub pattern: Csr,
    /// For each element, CSR positions of its `(2n)^2` local entries.
    pub elem_pos: Vec<u32>,
}

impl FeSpace {
    pub fn new(grid: &Grid, k: usize, bc: BoundarySet) -> Self {
        let (nx, ny) = (grid.nx, grid.ny);
        let nnx = if grid.periodic_x { nx * k } else { nx * k + 1 };
        let nny = if grid.periodic_y { ny * k } else { ny * k + 1 };
        let nl = (k + 1) * (k + 1);
        let mut elem_nodes = Vec::with_capacity(nx * ny * nl);
        for i in 0..nx {
            for j in 0..ny {
                for p in 0..=k {
                    for q in 0..=k {
                        let a = (i * k + p) % nnx;
                        let b = (j * k + q) % nny;
                        elem_nodes.push(a * nny + b);
                    }
                }
            }
        }
        let nnodes = nnx * nny;
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); 2 * nnodes];
        for e in 0..nx * ny {
            let en = &elem_nodes[e * nl..(e + 1) * nl];
            for &a in en {
                for &b in en {
                    for ca in 0..2 {
                        for cb in 0..2 {
                            rows[2 * a + ca].push((2 * b + cb) as u32);
                        }
                    }
                }
            }
        }
        let pattern = Csr::from_rows(rows);
        let nd = 2 * nl;
        let mut elem_pos = Vec::with_capacity(nx * ny * nd * nd);
        for e in 0..nx * ny {
            let en = &elem_nodes[e * nl..(e + 1) * nl];
            for r in 0..nd {
                for c in 0..nd {
                    let gr = 2 * en[r / 2] + r % 2;
                    let gc = 2 * en[c / 2] + c % 2;
                    elem_pos.push(pattern.position(gr, gc).expect("entry in pattern") as u32);
                }
            }
        }
        let mut inflow_nodes = Vec::new();
        if bc.left == Boundary::Inflow && !grid.periodic_x {
            inflow_nodes.extend(0..nny);
        }
        FeSpace {
            k,
            grid: grid.clone(),
            bc,
            nnx,
            nny,
            lagrange: Lagrange1d::new(k),
            elem_nodes,
            inflow_nodes,
            pattern,
            elem_pos,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.nnx * self.nny
    }

    pub fn n_local(&self) -> usize {
        (self.k + 1) * (self.k + 1)
    }

    pub fn elem_index(&self, i: usize, j: usize) -> usize {
        i * self.grid.ny + j
    }

    pub fn nodes_of(&self, e: usize) -> &[usize] {
        let nl = self.n_local();
        &self.elem_nodes[e * nl..(e + 1) * nl]
    }

    pub fn node_position(&self, node: usize) -> (f64, f64) {
        let (a, b) = (node / self.nny, node % self.nny);
        let g = &self.grid;
        (
            g.x0 - 0.5 * g.dx + a as f64 * g.dx / self.k as f64,
            g.y0 - 0.5 * g.dy + b as f64 * g.dy / self.k as f64,
        )
    }

    /// Reference coordinates of local node `l`.
    pub fn local_node_ref(&self, l: usize) -> (f64, f64) {
        let k1 = self.k + 1;
        (self.lagrange.nodes[l / k1], self.lagrange.nodes[l % k1])
    }

    /// Position of every dof in a narrow-band ordering: nodes run fastest along the
    /// direction with fewer nodes, and a periodic slow direction is folded so the
    /// wrap-around neighbors stay close.
    pub fn band_ordering(&self) -> Vec<usize> {
        let x_slow = self.nnx >= self.nny;
        let (ns, nf, periodic) =
            if x_slow { (self.nnx, self.nny, self.grid.periodic_x) } else { (self.nny, self.nnx, self.grid.periodic_y) };
        let fold = |a: usize| {
            if !periodic {
                a
            } else if a < ns.div_ceil(2) {
                2 * a
            } else {
                2 * (ns - 1 - a) + 1
            }
        };
        let mut perm = vec![0; 2 * self.n_nodes()];
        for a in 0..self.nnx {
            for b in 0..self.nny {
                let n = a * self.nny + b;
                let (s, f) = if x_slow { (a, b) } else { (b, a) };
                let pos = fold(s) * nf + f;
                perm[2 * n] = 2 * pos;
                perm[2 * n + 1] = 2 * pos + 1;
            }
        }
        perm
    }

    /// Values and reference derivatives of the `(k+1)^2` tensor basis at `(xi, eta)`.
    pub fn tensor_eval(&self, xi: f64, eta: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let (vx, dx) = self.lagrange.eval(xi);
        let (vy, dy) = self.lagrange.eval(eta);
        let k1 = self.k + 1;
        let mut v = vec![0.0; k1 * k1];
        let mut gx = vec![0.0; k1 * k1];
        let mut gy = vec![0.0; k1 * k1];
        for p in 0..k1 {
            for q in 0..k1 {
                v[p * k1 + q] = vx[p] * vy[q];
                gx[p * k1 + q] = dx[p] * vy[q];
                gy[p * k1 + q] = vx[p] * dy[q];
            }
        }
        (v, gx, gy)
    }
}
