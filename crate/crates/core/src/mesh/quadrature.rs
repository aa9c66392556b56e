//! One-dimensional quadrature rules on the reference interval `[-1/2, 1/2]`.

use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Legendre polynomial `P_n` and its derivative on `[-1, 1]`.
pub(crate) fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for m in 1..n {
        let m = m as f64;
        let p2 = ((2.0 * m + 1.0) * x * p1 - m * p0) / (m + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        // endpoint value of P_n'
        let s = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        s * nf * (nf + 1.0) / 2.0
    } else {
        nf * (p0 - x * p1) / (1.0 - x * x)
    };
    (p1, dp)
}

/// Gauss-Legendre rule with `n` points, exact for degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> Result<Rule> {
    if n == 0 {
        return Err(Error::InvalidInput("quadrature needs at least one point"));
    }
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        let mut x = -libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5));
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        points.push(0.5 * x);
        weights.push(1.0 / ((1.0 - x * x) * dp * dp));
    }
    symmetrize(&mut points, &mut weights);
    Ok(Rule { points, weights })
}

/// Gauss-Lobatto rule with `n >= 2` points, exact for degree `2n - 3`.
pub fn gauss_lobatto(n: usize) -> Result<Rule> {
    if n < 2 {
        return Err(Error::InvalidInput("Lobatto rule needs at least two points"));
    }
    let m = n - 1;
    let mf = m as f64;
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let w_end = 1.0 / (mf * (mf + 1.0));
    points.push(-0.5);
    weights.push(w_end);
    for i in 1..m {
        // interior nodes are the roots of P_m'
        let mut x = -libm::cos(core::f64::consts::PI * i as f64 / mf);
        for _ in 0..100 {
            let (p, dp) = legendre(m, x);
            // P_m'' from the Legendre ODE
            let d2p = (2.0 * x * dp - mf * (mf + 1.0) * p) / (1.0 - x * x);
            let dx = dp / d2p;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (p, _) = legendre(m, x);
        points.push(0.5 * x);
        weights.push(1.0 / (mf * (mf + 1.0) * p * p));
    }
    points.push(0.5);
    weights.push(w_end);
    symmetrize(&mut points, &mut weights);
    Ok(Rule { points, weights })
}

fn symmetrize(points: &mut [f64], weights: &mut [f64]) {
    let n = points.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (points[j] - points[i]);
        points[i] = -x;
        points[j] = x;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.0;
    }
}

/// Gauss rule used by the DG scheme of degree `k`: `k + 1` points.
pub fn gauss_rule(k: usize) -> Rule {
    gauss_legendre(k + 1).expect("k + 1 >= 1")
}

/// Smallest Lobatto rule exact for degree `k` (`2n - 3 >= k`).
pub fn lobatto_rule(k: usize) -> Rule {
    let mut n = 2;
    while 2 * n < k + 3 {
        n += 1;
    }
    gauss_lobatto(n).expect("n >= 2")
}
