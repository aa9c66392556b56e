//! Catalog of the benchmark scenarios.

use gncdg_core::model::bathymetry::{Bathymetry, SeawallParams};
use gncdg_core::{Boundary, BoundarySet};

/// How the initial state is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initial {
    /// Flat surface at rest.
    Still { eta: f64 },
    /// Solitary wave with crest at `x0`, depth `h1` and crest depth `h2`.
    Solitary { h1: f64, h2: f64, x0: f64 },
}

/// Third-order Stokes wave entering through the left boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Incident {
    pub period: f64,
    pub amplitude: f64,
    pub wavelength: f64,
}

/// Default time-step rule of a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// CFL-limited adaptive steps.
    Adaptive,
    /// `dt = factor * dx`.
    PerDx(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: &'static str,
    pub summary: &'static str,
    /// `[x_min, x_max, y_min, y_max]`.
    pub domain: [f64; 4],
    pub nx: usize,
    pub ny: usize,
    pub bc: BoundarySet,
    pub bathymetry: Bathymetry,
    pub initial: Initial,
    pub incident: Option<Incident>,
    pub t_final: f64,
    pub gauges: &'static [(f64, f64)],
    pub step: StepRule,
    pub tvb: bool,
    pub positivity: bool,
}

const OUT_X_PERIODIC_Y: BoundarySet =
    BoundarySet { left: Boundary::Outgoing, right: Boundary::Outgoing, bottom: Boundary::Periodic, top: Boundary::Periodic };

pub const NAMES: [&str; 9] = [
    "solitary_accuracy",
    "still_water_a",
    "still_water_b",
    "seawall",
    "trapezoid_bar",
    "elliptic_bar",
    "composite_beach",
    "periodic_solitary",
    "flat_rest",
];

pub fn lookup(name: &str) -> Option<Scenario> {
    let sc = match name {
        "solitary_accuracy" => Scenario {
            name: "solitary_accuracy",
            summary: "solitary wave over a flat bottom, exact solution for error studies",
            domain: [-30.0, 50.0, -1.0, 1.0],
            nx: 160,
            ny: 4,
            bc: OUT_X_PERIODIC_Y,
            bathymetry: Bathymetry::Flat { level: -1.0 },
            initial: Initial::Solitary { h1: 1.0, h2: 2.25, x0: 0.0 },
            incident: None,
            t_final: 1.0,
            gauges: &[],
            step: StepRule::PerDx(0.1),
            tvb: false,
            positivity: false,
        },
        "still_water_a" => still("still_water_a", "still water over a smooth bump", Bathymetry::CaseABump),
        "still_water_b" => still("still_water_b", "still water over an emerging block", Bathymetry::CaseBBlock),
        "seawall" => Scenario {
            name: "seawall",
            summary: "solitary wave overtopping a seawall",
            domain: [-5.0, 20.0, -0.2, 0.2],
            nx: 500,
            ny: 8,
            bc: OUT_X_PERIODIC_Y,
            bathymetry: Bathymetry::Seawall(SeawallParams::default()),
            initial: Initial::Solitary { h1: 0.2, h2: 0.27, x0: 0.0 },
            incident: None,
            t_final: 20.0,
            gauges: &[(5.9, 0.0), (7.6, 0.0), (9.644, 0.0), (10.462, 0.0), (10.732, 0.0), (11.12, 0.0)],
            step: StepRule::Adaptive,
            tvb: true,
            positivity: true,
        },
        "trapezoid_bar" => Scenario {
            name: "trapezoid_bar",
            summary: "periodic Stokes waves over a submerged trapezoidal bar",
            domain: [0.0, 25.0, -0.2, 0.2],
            nx: 500,
            ny: 8,
            bc: BoundarySet { left: Boundary::Inflow, ..OUT_X_PERIODIC_Y },
            bathymetry: Bathymetry::TrapezoidBar,
            initial: Initial::Still { eta: 0.0 },
            incident: Some(Incident { period: 2.02, amplitude: 0.01, wavelength: 3.73 }),
            t_final: 40.0,
            gauges: &[
                (2.0, 0.0),
                (4.0, 0.0),
                (10.5, 0.0),
                (12.5, 0.0),
                (13.5, 0.0),
                (14.5, 0.0),
                (15.7, 0.0),
                (17.3, 0.0),
                (19.0, 0.0),
                (21.0, 0.0),
            ],
            step: StepRule::Adaptive,
            tvb: true,
            positivity: true,
        },
        "elliptic_bar" => Scenario {
            name: "elliptic_bar",
            summary: "periodic Stokes waves over a submerged bar with elliptic slope",
            domain: [0.0, 25.0, -1.0, 1.0],
            nx: 125,
            ny: 20,
            bc: BoundarySet { left: Boundary::Inflow, right: Boundary::Outgoing, bottom: Boundary::Wall, top: Boundary::Wall },
            bathymetry: Bathymetry::EllipticBar,
            initial: Initial::Still { eta: 0.0 },
            incident: Some(Incident { period: 3.0, amplitude: 0.01, wavelength: 3.73 }),
            t_final: 30.0,
            gauges: &[(8.0, 0.0), (9.0, 0.5), (21.0, 0.0), (18.0, 0.0), (19.0, 0.5), (22.0, 0.5)],
            step: StepRule::Adaptive,
            tvb: true,
            positivity: true,
        },
        "composite_beach" => Scenario {
            name: "composite_beach",
            summary: "solitary wave climbing a composite beach and reflecting from a wall",
            domain: [-5.0, 23.23, -0.2, 0.2],
            nx: 500,
            ny: 8,
            bc: BoundarySet { right: Boundary::Wall, ..OUT_X_PERIODIC_Y },
            bathymetry: Bathymetry::CompositeBeach { depth: 0.22 },
            initial: Initial::Solitary { h1: 0.22, h2: 1.73 * 0.22, x0: 0.0 },
            incident: None,
            t_final: 25.0,
            gauges: &[(15.04, 0.0), (19.4, 0.0), (22.33, 0.0)],
            step: StepRule::Adaptive,
            tvb: true,
            positivity: true,
        },
        "periodic_solitary" => Scenario {
            name: "periodic_solitary",
            summary: "solitary wave in a doubly periodic box, for conservation checks",
            domain: [-20.0, 20.0, -1.0, 1.0],
            nx: 80,
            ny: 4,
            bc: BoundarySet::periodic(),
            bathymetry: Bathymetry::Flat { level: -1.0 },
            initial: Initial::Solitary { h1: 1.0, h2: 1.2, x0: 0.0 },
            incident: None,
            t_final: 10.0,
            gauges: &[(0.0, 0.0), (10.0, 0.0)],
            step: StepRule::Adaptive,
            tvb: true,
            positivity: true,
        },
        "flat_rest" => Scenario {
            name: "flat_rest",
            summary: "still water over a flat bottom",
            domain: [0.0, 1.0, 0.0, 1.0],
            nx: 8,
            ny: 8,
            bc: BoundarySet::uniform(Boundary::Wall),
            bathymetry: Bathymetry::Flat { level: -0.5 },
            initial: Initial::Still { eta: 0.0 },
            incident: None,
            t_final: 0.5,
            gauges: &[(0.5, 0.5)],
            step: StepRule::Adaptive,
            tvb: true,
            positivity: true,
        },
        _ => return None,
    };
    Some(sc)
}

fn still(name: &'static str, summary: &'static str, bathymetry: Bathymetry) -> Scenario {
    Scenario {
        name,
        summary,
        domain: [-1.0, 1.0, -1.0, 1.0],
        nx: 20,
        ny: 20,
        bc: BoundarySet::uniform(Boundary::Outgoing),
        bathymetry,
        initial: Initial::Still { eta: 0.50001 },
        incident: None,
        t_final: 10.0,
        gauges: &[],
        step: StepRule::Adaptive,
        tvb: true,
        positivity: true,
    }
}
