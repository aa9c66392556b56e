//! Bottom topographies used by the scenarios.
//!
//! `b` is the bottom elevation; the free surface is `eta = h + b`.
//! At slope breaks the derivative of the branch selected by the first matching
//! condition is returned; the scheme only consumes projected bottoms.

use super::ScalarJet;
use crate::error::{Error, Result};

/// Geometry of the seawall profile: flat bed, plane slope, trapezoidal wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeawallParams {
    pub depth: f64,
    pub slope_start: f64,
    pub slope: f64,
    pub crest_start: f64,
    pub crest_end: f64,
    pub crest_height: f64,
    /// Horizontal extent of each wall face.
    pub face_width: f64,
}

impl Default for SeawallParams {
    fn default() -> Self {
        SeawallParams {
            depth: 0.2,
            slope_start: 6.0,
            slope: 1.0 / 20.0,
            crest_start: 10.4,
            crest_end: 10.8,
            crest_height: 0.056,
            face_width: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bathymetry {
    Flat { level: f64 },
    /// Smooth Gaussian mound `base + amp exp(-((x-x0)^2 + (y-y0)^2) / w^2)`.
    Gaussian { base: f64, amp: f64, x0: f64, y0: f64, width: f64 },
    CaseABump,
    CaseBBlock,
    Seawall(SeawallParams),
    TrapezoidBar,
    EllipticBar,
    CompositeBeach { depth: f64 },
}

pub const CATALOG: [&str; 7] =
    ["flat", "caseA_bump", "caseB_block", "seawall", "trapezoid_bar", "elliptic_bar", "composite_beach"];

/// Catalog lookup with default parameters.
pub fn bathymetry_catalog(name: &str) -> Result<Bathymetry> {
    Ok(match name {
        "flat" => Bathymetry::Flat { level: 0.0 },
        "caseA_bump" => Bathymetry::CaseABump,
        "caseB_block" => Bathymetry::CaseBBlock,
        "seawall" => Bathymetry::Seawall(SeawallParams::default()),
        "trapezoid_bar" => Bathymetry::TrapezoidBar,
        "elliptic_bar" => Bathymetry::EllipticBar,
        "composite_beach" => Bathymetry::CompositeBeach { depth: 0.22 },
        _ => return Err(Error::InvalidInput("unknown bathymetry")),
    })
}

fn linear(v: f64, s: f64) -> ScalarJet {
    ScalarJet { v, x: s, ..Default::default() }
}

impl Bathymetry {
    pub fn eval(&self, x: f64, y: f64) -> ScalarJet {
        match *self {
            Bathymetry::Flat { level } => ScalarJet::constant(level),
            Bathymetry::Gaussian { base, amp, x0, y0, width } => {
                let (dx, dy) = (x - x0, y - y0);
                let w2 = width * width;
                let e = amp * libm::exp(-(dx * dx + dy * dy) / w2);
                let (gx, gy) = (-2.0 * dx / w2, -2.0 * dy / w2);
                ScalarJet {
                    v: base + e,
                    x: e * gx,
                    y: e * gy,
                    xx: e * (gx * gx - 2.0 / w2),
                    xy: e * gx * gy,
                    yy: e * (gy * gy - 2.0 / w2),
                }
            }
            Bathymetry::CaseABump => {
                let r = libm::sqrt(x * x + y * y);
                if r <= 0.3 {
                    ScalarJet::constant(0.2)
                } else if r <= 0.5 {
                    let r3 = r * r * r;
                    ScalarJet { v: 0.5 - r, x: -x / r, y: -y / r, xx: -y * y / r3, xy: x * y / r3, yy: -x * x / r3 }
                } else {
                    ScalarJet::constant(0.0)
                }
            }
            Bathymetry::CaseBBlock => {
                if x.abs() <= 0.5 && y.abs() <= 0.5 {
                    ScalarJet::constant(0.5)
                } else {
                    ScalarJet::constant(0.0)
                }
            }
            Bathymetry::Seawall(s) => {
                let slope_line = if x <= s.slope_start {
                    linear(-s.depth, 0.0)
                } else {
                    linear(-s.depth + s.slope * (x - s.slope_start), s.slope)
                };
                let rise_start = s.crest_start - s.face_width;
                let fall_end = s.crest_end + s.face_width;
                let wall = if x < rise_start || x > fall_end {
                    None
                } else if x < s.crest_start {
                    let base = -s.depth + s.slope * (rise_start - s.slope_start);
                    let m = (s.crest_height - base) / s.face_width;
                    Some(linear(base + m * (x - rise_start), m))
                } else if x <= s.crest_end {
                    Some(linear(s.crest_height, 0.0))
                } else {
                    let base = -s.depth + s.slope * (fall_end - s.slope_start);
                    let m = (base - s.crest_height) / s.face_width;
                    Some(linear(s.crest_height + m * (x - s.crest_end), m))
                };
                match wall {
                    Some(w) if w.v > slope_line.v => w,
                    _ => slope_line,
                }
            }
            Bathymetry::TrapezoidBar => {
                if (6.0..=12.0).contains(&x) {
                    linear(-0.4 + 0.05 * (x - 6.0), 0.05)
                } else if (12.0..=14.0).contains(&x) {
                    linear(-0.1, 0.0)
                } else if (14.0..=17.0).contains(&x) {
                    linear(-0.1 - 0.1 * (x - 14.0), -0.1)
                } else {
                    linear(-0.4, 0.0)
                }
            }
            Bathymetry::EllipticBar => {
                let dx = x - 12.5;
                let r = dx * dx / 100.0 + y * y / 16.0;
                if r < 47.0 / 576.0 {
                    ScalarJet::constant(-0.1)
                } else if r <= 287.0 / 576.0 {
                    let s = libm::sqrt(1.0 - r);
                    let (rx, ry) = (dx / 50.0, y / 8.0);
                    let (rxx, ryy) = (1.0 / 50.0, 1.0 / 8.0);
                    let d1 = -0.6 / s;
                    let d2 = -0.3 / (s * s * s);
                    ScalarJet {
                        v: 1.2 * s - 1.25,
                        x: d1 * rx,
                        y: d1 * ry,
                        xx: d2 * rx * rx + d1 * rxx,
                        xy: d2 * rx * ry,
                        yy: d2 * ry * ry + d1 * ryy,
                    }
                } else {
                    ScalarJet::constant(-0.4)
                }
            }
            Bathymetry::CompositeBeach { depth } => {
                let (x1, x2, x3) = (15.04, 19.4, 22.33);
                let (s1, s2, s3) = (1.0 / 53.0, 1.0 / 150.0, 1.0 / 13.0);
                if x <= x1 {
                    linear(-depth, 0.0)
                } else if x <= x2 {
                    linear(-depth + s1 * (x - x1), s1)
                } else if x <= x3 {
                    linear(-depth + s1 * (x2 - x1) + s2 * (x - x2), s2)
                } else {
                    linear(-depth + s1 * (x2 - x1) + s2 * (x3 - x2) + s3 * (x - x3), s3)
                }
            }
        }
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.eval(x, y).v
    }

    pub fn is_flat(&self) -> bool {
        matches!(self, Bathymetry::Flat { .. })
    }
}
