//! Reference point sets shared by both meshes.

use alloc::vec::Vec;

use super::quadrature::{gauss_rule, lobatto_rule};

/// Reference coordinate of a point `s` of quarter `l` (0 = lower half).
#[inline]
pub fn quarter_coord(l: usize, s: f64) -> f64 {
    0.5 * l as f64 - 0.25 + 0.5 * s
}

/// Coordinate of the same physical point inside the opposite cell covering quarter `l`.
#[inline]
pub fn opposite_coord(l: usize, s: f64) -> f64 {
    0.25 - 0.5 * l as f64 + 0.5 * s
}

/// Points at which the depth must stay non-negative for the positivity
/// argument: per quarter, Gauss x Lobatto and Lobatto x Gauss tensor grids.
pub fn positivity_points(k: usize) -> Vec<(f64, f64)> {
    let g = gauss_rule(k);
    let lo = lobatto_rule(k);
    let mut pts = Vec::new();
    for l in 0..2 {
        for m in 0..2 {
            for &a in &g.points {
                for &b in &lo.points {
                    pts.push((quarter_coord(l, a), quarter_coord(m, b)));
                }
            }
            for &a in &lo.points {
                for &b in &g.points {
                    pts.push((quarter_coord(l, a), quarter_coord(m, b)));
                }
            }
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_and_range() {
        let p = positivity_points(1);
        assert_eq!(p.len(), 32);
        assert!(p.iter().all(|&(x, y)| x.abs() <= 0.5 && y.abs() <= 0.5));
        // quarter boundaries and cell edges are included
        assert!(p.iter().any(|&(x, _)| x == 0.0));
        assert!(p.iter().any(|&(x, _)| x == 0.5));
        assert_eq!(positivity_points(2).len(), 4 * 2 * 9);
    }

    #[test]
    fn coordinate_maps_agree() {
        // a point at quarter coordinate s sits half a cell away from the opposite centre
        for l in 0..2 {
            for s in [-0.5, -0.1, 0.3, 0.5] {
                let d = quarter_coord(l, s) - opposite_coord(l, s);
                assert!((d - (l as f64 - 0.5)).abs() < 1e-15);
            }
        }
    }
}
