//! Exact solitary wave and incident Stokes wave.

use core::f64::consts::PI;

use super::ScalarJet;
use crate::error::{Error, Result};

/// Travelling solitary wave over a flat bottom, exact for the standard model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitaryWave {
    pub h1: f64,
    pub h2: f64,
    pub g: f64,
    /// Crest position at `t = 0`.
    pub x0: f64,
}

impl SolitaryWave {
    pub fn new(h1: f64, h2: f64, g: f64, x0: f64) -> Result<Self> {
        if !(h1 > 0.0 && h2 > h1 && g > 0.0) {
            return Err(Error::InvalidInput("solitary wave needs h2 > h1 > 0 and g > 0"));
        }
        Ok(SolitaryWave { h1, h2, g, x0 })
    }

    pub fn speed(&self) -> f64 {
        libm::sqrt(self.g * self.h2)
    }

    fn kappa(&self) -> f64 {
        let a = self.h2 - self.h1;
        0.5 * libm::sqrt(3.0 * a / (self.h2 * self.h1 * self.h1))
    }

    /// `(h, u, v)` at `(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> (f64, f64, f64) {
        let h = self.depth_jet(x, t).v;
        (h, self.speed() * (1.0 - self.h1 / h), 0.0)
    }

    /// Depth with x-derivatives.
    pub fn depth_jet(&self, x: f64, t: f64) -> ScalarJet {
        let a = self.h2 - self.h1;
        let k = self.kappa();
        let z = k * (x - self.x0 - self.speed() * t);
        let s = 1.0 / libm::cosh(z);
        let th = libm::tanh(z);
        let s2 = s * s;
        ScalarJet {
            v: self.h1 + a * s2,
            x: -2.0 * a * k * s2 * th,
            xx: a * k * k * (4.0 * s2 * th * th - 2.0 * s2 * s2),
            ..Default::default()
        }
    }

    /// Velocity `u = D (1 - h1 / h)` with x-derivatives.
    pub fn velocity_jet(&self, x: f64, t: f64) -> ScalarJet {
        let h = self.depth_jet(x, t);
        let c = self.speed() * self.h1;
        ScalarJet {
            v: self.speed() - c / h.v,
            x: c * h.x / (h.v * h.v),
            xx: c * (h.xx / (h.v * h.v) - 2.0 * h.x * h.x / (h.v * h.v * h.v)),
            ..Default::default()
        }
    }
}

/// Third-order Stokes wave used as incident signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesWave {
    pub period: f64,
    pub amplitude: f64,
    pub wavelength: f64,
}

impl StokesWave {
    pub fn new(period: f64, amplitude: f64, wavelength: f64) -> Result<Self> {
        if !(period > 0.0 && amplitude >= 0.0 && wavelength > 0.0) {
            return Err(Error::InvalidInput("Stokes wave needs positive period and wavelength"));
        }
        Ok(StokesWave { period, amplitude, wavelength })
    }

    pub fn eta(&self, x: f64, t: f64) -> f64 {
        stokes_incident_eta(x, t, self.period, self.amplitude, self.wavelength)
    }
}

pub fn stokes_incident_eta(x: f64, t: f64, t0: f64, a0: f64, lambda: f64) -> f64 {
    let phi = 2.0 * PI * (x / lambda - t / t0);
    a0 * libm::cos(phi) + PI * a0 * a0 / lambda * libm::cos(2.0 * phi)
        - PI * PI * a0 * a0 * a0 / (2.0 * lambda * lambda) * (libm::cos(phi) - libm::cos(3.0 * phi))
}
