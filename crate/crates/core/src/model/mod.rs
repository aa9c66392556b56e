//! Green-Naghdi physics: balance-law fluxes and source, auxiliary momenta,
//! dispersion relations, exact and incident waves, bathymetry catalog.

pub mod bathymetry;
pub mod dispersion;
pub mod momentum;
pub mod waves;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub g: f64,
    pub alpha: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams { g: 9.81, alpha: 1.0 }
    }
}

impl PhysParams {
    pub fn new(g: f64, alpha: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) || !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidInput("g and alpha must be positive"));
        }
        Ok(PhysParams { g, alpha })
    }
}

/// Value and physical first/second derivatives of a scalar field.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ScalarJet {
    pub v: f64,
    pub x: f64,
    pub y: f64,
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl ScalarJet {
    pub fn constant(v: f64) -> Self {
        ScalarJet { v, ..Default::default() }
    }

    /// Exchange the roles of x and y.
    pub fn swapped(self) -> Self {
        ScalarJet { v: self.v, x: self.y, y: self.x, xx: self.yy, xy: self.xy, yy: self.xx }
    }

    pub fn is_finite(&self) -> bool {
        [self.v, self.x, self.y, self.xx, self.xy, self.yy].iter().all(|c| c.is_finite())
    }
}

/// Bottom derivatives entering the fluxes and the source.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BottomSlopes {
    pub bx: f64,
    pub by: f64,
    pub bxx: f64,
    pub bxy: f64,
    pub byy: f64,
}

impl BottomSlopes {
    pub fn from_jet(b: &ScalarJet) -> Self {
        BottomSlopes { bx: b.x, by: b.y, bxx: b.xx, bxy: b.xy, byy: b.yy }
    }

    pub fn swapped(self) -> Self {
        BottomSlopes { bx: self.by, by: self.bx, bxx: self.byy, bxy: self.bxy, byy: self.bxx }
    }

    fn is_finite(&self) -> bool {
        [self.bx, self.by, self.bxx, self.bxy, self.byy].iter().all(|c| c.is_finite())
    }
}

/// Pointwise state: every symbol appearing in `F`, `G` and `S`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LocalState {
    pub h: f64,
    pub hp: f64,
    pub hq: f64,
    pub u: f64,
    pub v: f64,
    pub ux: f64,
    pub uy: f64,
    pub vx: f64,
    pub vy: f64,
    pub eta_x: f64,
    pub eta_y: f64,
    pub eta_xx: f64,
    pub eta_yy: f64,
}

impl LocalState {
    pub fn swapped(self) -> Self {
        LocalState {
            h: self.h,
            hp: self.hq,
            hq: self.hp,
            u: self.v,
            v: self.u,
            ux: self.vy,
            uy: self.vx,
            vx: self.uy,
            vy: self.ux,
            eta_x: self.eta_y,
            eta_y: self.eta_x,
            eta_xx: self.eta_yy,
            eta_yy: self.eta_xx,
        }
    }

    fn is_finite(&self) -> bool {
        [
            self.h, self.hp, self.hq, self.u, self.v, self.ux, self.uy, self.vx, self.vy, self.eta_x, self.eta_y,
            self.eta_xx, self.eta_yy,
        ]
        .iter()
        .all(|c| c.is_finite())
    }
}

fn check(s: &LocalState, b: &BottomSlopes) -> Result<()> {
    if s.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(Error::Evaluation)
    }
}

#[inline]
pub(crate) fn flux_f_raw(s: &LocalState, b: &BottomSlopes, p: &PhysParams) -> [f64; 3] {
    flux_f_scaled(s, b, p, 1.0)
}

/// Flux with the hydrostatic `g h^2 / 2` term multiplied by `hydro`.
#[inline]
pub(crate) fn flux_f_scaled(s: &LocalState, b: &BottomSlopes, p: &PhysParams, hydro: f64) -> [f64; 3] {
    let (g, a) = (p.g, p.alpha);
    let LocalState { h, hp, hq, u, v, ux, uy, vx, vy, eta_x, eta_y, eta_xx, eta_yy } = *s;
    let BottomSlopes { bx, by, bxx, bxy, byy } = *b;
    let h2 = h * h;
    let h3 = h2 * h;
    let div = ux + vy;
    let f2 = hp * u + hq * v + 0.5 * g * h2 * hydro - a * h * u * v * bx * by
        + 0.5 * (1.0 - a) * h2 * (u * u * bxx + v * v * byy)
        - h * v * v * (1.0 + a * by * by)
        - ((4.0 * a - 2.0) / 3.0 * h3 * ux * ux
            + (6.0 * a - 2.0) / 3.0 * h3 * ux * vy
            + (4.0 * a - 2.0) / 3.0 * h3 * vy * vy)
        + a * h2 * u * div * bx
        + 1.5 * a * h2 * v * div * by
        - 2.0 / 3.0 * (a - 1.0) * h3 * uy * vx
        + (1.0 - a) * h2 * u * v * bxy
        - (a - 1.0) / 3.0 * g * h3 * (eta_xx + eta_yy)
        + 0.5 * (a - 1.0) * g * h2 * (bx * eta_x + by * eta_y);
    let f3 = h * u * v * (1.0 + a * by * by) + a * h * u * u * bx * by - 0.5 * a * h2 * u * div * by;
    [h * u, f2, f3]
}

#[inline]
pub(crate) fn flux_g_raw(s: &LocalState, b: &BottomSlopes, p: &PhysParams) -> [f64; 3] {
    flux_g_scaled(s, b, p, 1.0)
}

/// Flux with the hydrostatic `g h^2 / 2` term multiplied by `hydro`.
#[inline]
pub(crate) fn flux_g_scaled(s: &LocalState, b: &BottomSlopes, p: &PhysParams, hydro: f64) -> [f64; 3] {
    let (g, a) = (p.g, p.alpha);
    let LocalState { h, hp, hq, u, v, ux, uy, vx, vy, eta_x, eta_y, eta_xx, eta_yy } = *s;
    let BottomSlopes { bx, by, bxx, bxy, byy } = *b;
    let h2 = h * h;
    let h3 = h2 * h;
    let div = ux + vy;
    let g2 = h * u * v * (1.0 + a * bx * bx) + a * h * v * v * bx * by - 0.5 * a * h2 * v * div * bx;
    let g3 = hp * u + hq * v + 0.5 * g * h2 * hydro - a * h * u * v * bx * by
        + 0.5 * (1.0 - a) * h2 * (u * u * bxx + v * v * byy)
        - h * u * u * (1.0 + a * bx * bx)
        - ((4.0 * a - 2.0) / 3.0 * h3 * ux * ux
            + (6.0 * a - 2.0) / 3.0 * h3 * ux * vy
            + (4.0 * a - 2.0) / 3.0 * h3 * vy * vy)
        + 1.5 * a * h2 * u * div * bx
        + a * h2 * v * div * by
        - 2.0 / 3.0 * (a - 1.0) * h3 * uy * vx
        + (1.0 - a) * h2 * u * v * bxy
        - (a - 1.0) / 3.0 * g * h3 * (eta_xx + eta_yy)
        + 0.5 * (a - 1.0) * g * h2 * (bx * eta_x + by * eta_y);
    [h * v, g2, g3]
}

/// Source without the hydrostatic `-g h grad b` part.
#[inline]
pub(crate) fn source_rest_raw(s: &LocalState, b: &BottomSlopes, p: &PhysParams) -> [f64; 3] {
    let (g, a) = (p.g, p.alpha);
    let LocalState { h, u, v, ux, uy, vx, vy, eta_x, eta_y, eta_xx, eta_yy, .. } = *s;
    let BottomSlopes { bx, by, bxx, bxy, byy } = *b;
    let h2 = h * h;
    let div = ux + vy;
    let quad = ux * ux + ux * vy + uy * vx + vy * vy;
    let lap_eta = eta_xx + eta_yy;
    let s2 = -0.5 * a * h2 * u * div * bxx - 0.5 * a * h2 * v * div * bxy
        + (2.0 * a - 1.0) * h * u * u * bx * bxx
        + h * u * v * ((3.0 * a - 2.0) * bx * bxy + a * bxx * by)
        + (a - 1.0) * h2 * quad * bx
        + a * h * v * v * bxy * by
        + (a - 1.0) * h * v * v * bx * byy
        + 0.5 * (a - 1.0) * g * h2 * lap_eta * bx
        - (a - 1.0) * g * h * (bx * bx * eta_x + bx * by * eta_y);
    let s3 = -0.5 * a * h2 * u * div * bxy - 0.5 * a * h2 * v * div * byy
        + (2.0 * a - 1.0) * h * v * v * by * byy
        + h * u * v * ((3.0 * a - 2.0) * bxy * by + a * bx * byy)
        + (a - 1.0) * h2 * quad * by
        + a * h * u * u * bx * bxy
        + (a - 1.0) * h * u * u * bxx * by
        + 0.5 * (a - 1.0) * g * h2 * lap_eta * by
        - (a - 1.0) * g * h * (bx * by * eta_x + by * by * eta_y);
    [0.0, s2, s3]
}

pub fn flux_f(s: &LocalState, b: &BottomSlopes, p: &PhysParams) -> Result<[f64; 3]> {
    check(s, b)?;
    Ok(flux_f_raw(s, b, p))
}

pub fn flux_g(s: &LocalState, b: &BottomSlopes, p: &PhysParams) -> Result<[f64; 3]> {
    check(s, b)?;
    Ok(flux_g_raw(s, b, p))
}

pub fn source_s(s: &LocalState, b: &BottomSlopes, p: &PhysParams) -> Result<[f64; 3]> {
    check(s, b)?;
    let mut r = source_rest_raw(s, b, p);
    r[1] -= p.g * s.h * b.bx;
    r[2] -= p.g * s.h * b.by;
    Ok(r)
}

/// Source minus its hydrostatic part; the well-balanced scheme treats that part separately.
pub fn source_s_nonhydrostatic(s: &LocalState, b: &BottomSlopes, p: &PhysParams) -> Result<[f64; 3]> {
    check(s, b)?;
    Ok(source_rest_raw(s, b, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, scale: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + scale)
    }

    fn state_strategy() -> impl Strategy<Value = (LocalState, BottomSlopes, f64)> {
        let v = || -2.0f64..2.0;
        (
            (0.0f64..3.0, v(), v(), v(), v(), v(), v(), v(), v()),
            (v(), v(), v(), v(), v(), v(), v(), v(), v()),
            0.5f64..2.0,
        )
            .prop_map(|((h, hp, hq, u, v, ux, uy, vx, vy), (ex, ey, exx, eyy, bx, by, bxx, bxy, byy), a)| {
                (
                    LocalState { h, hp, hq, u, v, ux, uy, vx, vy, eta_x: ex, eta_y: ey, eta_xx: exx, eta_yy: eyy },
                    BottomSlopes { bx, by, bxx, bxy, byy },
                    a,
                )
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn swap_symmetry((s, b, a) in state_strategy()) {
            let p = PhysParams { g: 9.81, alpha: a };
            let f = flux_f(&s, &b, &p).unwrap();
            let g = flux_g(&s.swapped(), &b.swapped(), &p).unwrap();
            let scale = f.iter().chain(&g).fold(0.0f64, |m, x| m.max(x.abs()));
            prop_assert!(close(f[0], g[0], scale));
            prop_assert!(close(f[1], g[2], scale));
            prop_assert!(close(f[2], g[1], scale));
            let s1 = source_s(&s, &b, &p).unwrap();
            let s2 = source_s(&s.swapped(), &b.swapped(), &p).unwrap();
            let scale = s1.iter().chain(&s2).fold(0.0f64, |m, x| m.max(x.abs()));
            prop_assert_eq!(s1[0], 0.0);
            prop_assert!(close(s1[1], s2[2], scale));
            prop_assert!(close(s1[2], s2[1], scale));
        }
    }

    #[test]
    fn still_water() {
        let p = PhysParams { g: 9.81, alpha: 1.159 };
        let s = LocalState { h: 0.7, ..Default::default() };
        let b = BottomSlopes { bx: 0.3, by: -0.2, bxx: 1.0, bxy: 0.5, byy: -2.0 };
        let f = flux_f(&s, &b, &p).unwrap();
        assert_eq!(f, [0.0, 0.5 * 9.81 * 0.49, 0.0]);
        let g = flux_g(&s, &b, &p).unwrap();
        assert_eq!(g, [0.0, 0.0, 0.5 * 9.81 * 0.49]);
        let src = source_s(&s, &b, &p).unwrap();
        assert_eq!(src, [0.0, -9.81 * 0.7 * 0.3, 9.81 * 0.7 * 0.2]);
    }

    #[test]
    fn flat_bottom_one_dimensional_reduction() {
        let p = PhysParams { g: 2.0, alpha: 1.0 };
        let (h, u, ux, hp) = (1.3, 0.4, -0.7, 0.9);
        let s = LocalState { h, hp, u, ux, eta_x: 0.2, eta_xx: 0.5, ..Default::default() };
        let f = flux_f(&s, &BottomSlopes::default(), &p).unwrap();
        let expect = hp * u + 0.5 * 2.0 * h * h - 2.0 / 3.0 * h * h * h * ux * ux;
        assert!((f[0] - h * u).abs() < 1e-15);
        assert!((f[1] - expect).abs() < 1e-14);
        assert_eq!(f[2], 0.0);
        assert_eq!(source_s(&s, &BottomSlopes::default(), &p).unwrap(), [0.0; 3]);
    }

    #[test]
    fn dry_point_has_zero_flux() {
        let p = PhysParams::default();
        let s = LocalState { h: 0.0, u: 1.0, v: 2.0, ux: 3.0, ..Default::default() };
        let b = BottomSlopes { bx: 1.0, by: 1.0, ..Default::default() };
        assert_eq!(flux_g(&s, &b, &p).unwrap(), [0.0; 3]);
    }

    #[test]
    fn non_finite_rejected() {
        let s = LocalState { h: f64::NAN, ..Default::default() };
        assert_eq!(flux_f(&s, &BottomSlopes::default(), &PhysParams::default()), Err(Error::Evaluation));
        assert!(PhysParams::new(-1.0, 1.0).is_err());
    }
}
