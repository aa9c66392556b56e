//! Compressed sparse row matrices, banded LU and Krylov solvers.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<u32>,
    pub vals: Vec<f64>,
}

impl Csr {
    /// Build the pattern from per-row column lists (sorted and deduplicated here).
    pub fn from_rows(mut rows: Vec<Vec<u32>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        for r in rows.iter_mut() {
            r.sort_unstable();
            r.dedup();
            cols.extend_from_slice(r);
            row_ptr.push(cols.len());
        }
        let nnz = cols.len();
        Csr { n, row_ptr, cols, vals: vec![0.0; nnz] }
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    /// Position of entry `(i, j)` in `vals`.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        let s = self.row_ptr[i];
        let e = self.row_ptr[i + 1];
        self.cols[s..e].binary_search(&(j as u32)).ok().map(|p| s + p)
    }

    pub fn clear_values(&mut self) {
        self.vals.iter_mut().for_each(|v| *v = 0.0);
    }

    pub fn set_identity_row(&mut self, i: usize) {
        for p in self.row_ptr[i]..self.row_ptr[i + 1] {
            self.vals[p] = if self.cols[p] as usize == i { 1.0 } else { 0.0 };
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            let mut s = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[p] * x[self.cols[p] as usize];
            }
            *yi = s;
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, row) in d.iter_mut().enumerate() {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                row[self.cols[p] as usize] += self.vals[p];
            }
        }
        d
    }
}

/// Action of an approximate inverse.
pub trait Preconditioner {
    fn apply(&self, r: &[f64], z: &mut [f64]);
}

/// No preconditioning.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl Preconditioner for Identity {
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
    }
}

/// Banded LU without pivoting, in a caller-supplied ordering.
///
/// `perm[i]` is the position of unknown `i` in the banded ordering.
#[derive(Debug, Clone, Default)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    perm: Vec<usize>,
    data: Vec<f64>,
}

impl BandLu {
    pub fn factor(a: &Csr, perm: &[usize]) -> Result<Self> {
        let n = a.n;
        if perm.len() != n {
            return Err(Error::InvalidInput("ordering length differs from the matrix size"));
        }
        let (mut kl, mut ku) = (0usize, 0usize);
        for i in 0..n {
            let pi = perm[i];
            for p in a.row_ptr[i]..a.row_ptr[i + 1] {
                let pj = perm[a.cols[p] as usize];
                if pj < pi {
                    kl = kl.max(pi - pj);
                } else {
                    ku = ku.max(pj - pi);
                }
            }
        }
        let w = kl + ku + 1;
        let mut data = vec![0.0; n * w];
        for i in 0..n {
            let pi = perm[i];
            for p in a.row_ptr[i]..a.row_ptr[i + 1] {
                let pj = perm[a.cols[p] as usize];
                data[pi * w + pj + kl - pi] += a.vals[p];
            }
        }
        for k in 0..n {
            let piv = data[k * w + kl];
            if piv == 0.0 || !piv.is_finite() {
                return Err(Error::Solver { iterations: 0, residual: f64::INFINITY });
            }
            let jmax = (k + ku + 1).min(n);
            for i in k + 1..(k + kl + 1).min(n) {
                let pos = i * w + k + kl - i;
                if data[pos] == 0.0 {
                    continue;
                }
                let l = data[pos] / piv;
                data[pos] = l;
                // row k entries k+1..jmax against row i entries at the same columns
                let (head, tail) = data.split_at_mut(i * w);
                let rk = &head[k * w + kl + 1..k * w + kl + 1 + (jmax - k - 1)];
                let off = k + 1 + kl - i;
                let ri = &mut tail[off..off + (jmax - k - 1)];
                for (x, y) in ri.iter_mut().zip(rk) {
                    *x -= l * y;
                }
            }
        }
        Ok(BandLu { n, kl, ku, perm: perm.to_vec(), data })
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }
}

impl Preconditioner for BandLu {
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let w = kl + ku + 1;
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[self.perm[i]] = r[i];
        }
        for i in 0..n {
            let j0 = i.saturating_sub(kl);
            let row = &self.data[i * w..];
            let mut s = y[i];
            for j in j0..i {
                s -= row[j + kl - i] * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let j1 = (i + ku + 1).min(n);
            let row = &self.data[i * w..];
            let mut s = y[i];
            for j in i + 1..j1 {
                s -= row[j + kl - i] * y[j];
            }
            y[i] = s / row[kl];
        }
        for i in 0..n {
            z[i] = y[self.perm[i]];
        }
    }
}

fn dotp(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dotp(a, a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub residual: f64,
}

/// Right-preconditioned BiCGSTAB. `x` holds the initial guess on entry.
pub fn bicgstab(a: &Csr, m: &impl Preconditioner, b: &[f64], x: &mut [f64], tol: f64, max_iter: usize) -> Result<SolveStats> {
    let n = a.n;
    let bn = norm(b);
    if bn == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(SolveStats { iterations: 0, residual: 0.0 });
    }
    let mut r = vec![0.0; n];
    a.matvec(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let mut res = norm(&r) / bn;
    if res <= tol {
        return Ok(SolveStats { iterations: 0, residual: res });
    }
    let mut r0 = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut p = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut phat = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut shat = vec![0.0; n];
    let mut t = vec![0.0; n];
    for it in 1..=max_iter {
        let rho_new = dotp(&r0, &r);
        if rho_new == 0.0 || !rho_new.is_finite() {
            return Err(Error::Solver { iterations: it, residual: res });
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        m.apply(&p, &mut phat);
        a.matvec(&phat, &mut v);
        let r0v = dotp(&r0, &v);
        if r0v == 0.0 {
            return Err(Error::Solver { iterations: it, residual: res });
        }
        alpha = rho / r0v;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm(&s) / bn <= tol {
            for i in 0..n {
                x[i] += alpha * phat[i];
            }
            let tr = true_residual(a, b, x, bn);
            if tr <= tol {
                return Ok(SolveStats { iterations: it, residual: tr });
            }
            a.matvec(x, &mut r);
            for i in 0..n {
                r[i] = b[i] - r[i];
            }
            r0.copy_from_slice(&r);
            (rho, alpha, omega) = (1.0, 1.0, 1.0);
            p.iter_mut().for_each(|z| *z = 0.0);
            v.iter_mut().for_each(|z| *z = 0.0);
            continue;
        }
        m.apply(&s, &mut shat);
        a.matvec(&shat, &mut t);
        let tt = dotp(&t, &t);
        omega = if tt > 0.0 { dotp(&t, &s) / tt } else { 0.0 };
        for i in 0..n {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        res = norm(&r) / bn;
        if !res.is_finite() {
            return Err(Error::Solver { iterations: it, residual: res });
        }
        if res <= tol {
            // guard against drift of the recursive residual
            let tr = true_residual(a, b, x, bn);
            if tr <= tol {
                return Ok(SolveStats { iterations: it, residual: tr });
            }
            // restart from the true residual
            a.matvec(x, &mut r);
            for i in 0..n {
                r[i] = b[i] - r[i];
            }
            r0.copy_from_slice(&r);
            (rho, alpha, omega) = (1.0, 1.0, 1.0);
            p.iter_mut().for_each(|z| *z = 0.0);
            v.iter_mut().for_each(|z| *z = 0.0);
            continue;
        }
        if omega == 0.0 {
            return Err(Error::Solver { iterations: it, residual: res });
        }
    }
    Err(Error::Solver { iterations: max_iter, residual: res })
}

fn true_residual(a: &Csr, b: &[f64], x: &[f64], bn: f64) -> f64 {
    let mut r = vec![0.0; a.n];
    a.matvec(x, &mut r);
    let s: f64 = r.iter().zip(b).map(|(ri, bi)| (bi - ri) * (bi - ri)).sum();
    libm::sqrt(s) / bn
}

/// Restarted, right-preconditioned GMRES.
pub fn gmres(
    a: &Csr,
    m: &impl Preconditioner,
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    restart: usize,
    max_iter: usize,
) -> Result<SolveStats> {
    let n = a.n;
    let bn = norm(b);
    if bn == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(SolveStats { iterations: 0, residual: 0.0 });
    }
    let mut r = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut total = 0;
    let mut res;
    loop {
        a.matvec(x, &mut r);
        for i in 0..n {
            r[i] = b[i] - r[i];
        }
        let beta = norm(&r);
        res = beta / bn;
        if res <= tol {
            return Ok(SolveStats { iterations: total, residual: res });
        }
        if total >= max_iter {
            return Err(Error::Solver { iterations: total, residual: res });
        }
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(restart + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        let mut hmat = vec![vec![0.0; restart]; restart + 1];
        let (mut cs, mut sn) = (vec![0.0; restart], vec![0.0; restart]);
        let mut gvec = vec![0.0; restart + 1];
        gvec[0] = beta;
        let mut used = 0;
        for j in 0..restart {
            m.apply(&basis[j], &mut z);
            a.matvec(&z, &mut w);
            for (i, vi) in basis.iter().enumerate() {
                let hij = dotp(&w, vi);
                hmat[i][j] = hij;
                for (wk, vk) in w.iter_mut().zip(vi) {
                    *wk -= hij * vk;
                }
            }
            let hn = norm(&w);
            hmat[j + 1][j] = hn;
            for i in 0..j {
                let tmp = cs[i] * hmat[i][j] + sn[i] * hmat[i + 1][j];
                hmat[i + 1][j] = -sn[i] * hmat[i][j] + cs[i] * hmat[i + 1][j];
                hmat[i][j] = tmp;
            }
            let d = libm::hypot(hmat[j][j], hmat[j + 1][j]);
            if d == 0.0 {
                break;
            }
            cs[j] = hmat[j][j] / d;
            sn[j] = hmat[j + 1][j] / d;
            hmat[j][j] = d;
            hmat[j + 1][j] = 0.0;
            gvec[j + 1] = -sn[j] * gvec[j];
            gvec[j] *= cs[j];
            used = j + 1;
            total += 1;
            if hn > 0.0 {
                basis.push(w.iter().map(|v| v / hn).collect());
            }
            if gvec[j + 1].abs() / bn <= tol || hn == 0.0 || total >= max_iter {
                break;
            }
        }
        // back substitution and update
        let mut yv = vec![0.0; used];
        for i in (0..used).rev() {
            let mut s = gvec[i];
            for k in i + 1..used {
                s -= hmat[i][k] * yv[k];
            }
            yv[i] = s / hmat[i][i];
        }
        let mut upd = vec![0.0; n];
        for (k, yk) in yv.iter().enumerate() {
            for (u, vk) in upd.iter_mut().zip(&basis[k]) {
                *u += yk * vk;
            }
        }
        m.apply(&upd, &mut z);
        for i in 0..n {
            x[i] += z[i];
        }
        if used == 0 {
            return Err(Error::Solver { iterations: total, residual: res });
        }
    }
}
