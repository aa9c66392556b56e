//! Problem description, initialization and the time loop.

use alloc::vec::Vec;

use crate::basis::{dot, DgField, PkBasis};
use crate::boundary::fill_ghosts;
use crate::cdg::{max_timestep, omega1_hat, StageTables, StepSize, TimestepBounds};
use crate::error::{Error, Result};
use crate::fe::{FeSolver, InflowVelocity};
use crate::limiters::{modify_bathymetry, positivity_limit, PositivityPoints};
use crate::mesh::quadrature::gauss_legendre;
use crate::mesh::{build_overlapping_meshes, Boundary, BoundarySet, Domain, Grid, MeshKind};
use crate::model::bathymetry::Bathymetry;
use crate::model::momentum::momentum_from_jets;
use crate::model::waves::SolitaryWave;
use crate::model::{PhysParams, ScalarJet};

pub use crate::timestepper::{SchemeOptions, SolutionState, StageStats};
use crate::timestepper::Scheme;

/// Halvings of a step allowed after a negative cell-average depth.
const MAX_RETRIES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    /// Flat surface at rest; dry wherever the bottom is above it.
    StillWater { eta: f64 },
    /// Solitary wave travelling in +x. The surface is the wave's elevation above
    /// the rest level 0 (`eta = h_wave - h1`); the wave velocity is used where wet.
    Solitary(SolitaryWave),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub domain: Domain,
    pub nx: usize,
    pub ny: usize,
    pub bc: BoundarySet,
    pub phys: PhysParams,
    pub bathymetry: Bathymetry,
    pub initial: InitialCondition,
    pub inflow: Option<InflowVelocity>,
    pub options: SchemeOptions,
}

/// Outcome of one accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub step: usize,
    /// Time at the end of the step.
    pub t: f64,
    pub dt: f64,
    pub theta: f64,
    pub retries: usize,
    pub stats: StageStats,
}

pub struct Simulation {
    pub scheme: Scheme,
    pub state: SolutionState,
    solvers: [FeSolver; 2],
    pub t: f64,
    pub steps: usize,
    pub initial_mass: f64,
}

/// Map a point outside the domain back inside: wrap periodic directions and
/// reflect the others.
fn fold_into(domain: &Domain, bc: &BoundarySet, x: f64, y: f64) -> (f64, f64) {
    let fold = |v: f64, lo: f64, hi: f64, periodic: bool| {
        if periodic {
            let l = hi - lo;
            let r = libm::fmod(v - lo, l);
            lo + if r < 0.0 { r + l } else { r }
        } else if v < lo {
            2.0 * lo - v
        } else if v > hi {
            2.0 * hi - v
        } else {
            v
        }
    };
    (
        fold(x, domain.x_min, domain.x_max, bc.periodic_x()),
        fold(y, domain.y_min, domain.y_max, bc.periodic_y()),
    )
}

impl InitialCondition {
    /// `(eta, h jet, u jet, v jet)` at a point with bottom jet `b`.
    fn eval(&self, x: f64, b: &ScalarJet) -> (f64, ScalarJet, ScalarJet, ScalarJet) {
        match self {
            InitialCondition::StillWater { eta } => {
                let h = (eta - b.v).max(0.0);
                (b.v + h, ScalarJet::constant(h), ScalarJet::default(), ScalarJet::default())
            }
            InitialCondition::Solitary(w) => {
                let hw = w.depth_jet(x, 0.0);
                let eta = hw.v - w.h1;
                if eta - b.v <= 0.0 {
                    return (b.v, ScalarJet::default(), ScalarJet::default(), ScalarJet::default());
                }
                let h = ScalarJet {
                    v: eta - b.v,
                    x: hw.x - b.x,
                    y: -b.y,
                    xx: hw.xx - b.xx,
                    xy: -b.xy,
                    yy: -b.yy,
                };
                (eta, h, w.velocity_jet(x, 0.0), ScalarJet::default())
            }
        }
    }
}

impl Simulation {
    pub fn new(problem: &Problem) -> Result<Self> {
        let opts = problem.options;
        if !(opts.k == 1 || opts.k == 2) {
            return Err(Error::InvalidInput("degree must be 1 or 2"));
        }
        if !(opts.cfl > 0.0 && opts.cfl.is_finite()) {
            return Err(Error::InvalidInput("cfl must be positive"));
        }
        if problem.bc.left == Boundary::Inflow && problem.inflow.is_none() {
            return Err(Error::InvalidInput("inflow boundary needs an incident wave"));
        }
        let mesh = build_overlapping_meshes(problem.domain, problem.nx, problem.ny, problem.bc)?;
        let basis = PkBasis::new(opts.k);
        let bc = problem.bc;
        let dom = problem.domain;
        let bathy = problem.bathymetry;

        let project_bottom = |g: &Grid| -> Result<DgField> {
            let mut b = DgField::project(g, &basis, 1, false, |x, y, v| {
                let (xf, yf) = fold_into(&dom, &bc, x, y);
                v[0] = bathy.value(xf, yf);
            })?;
            fill_ghosts(&mut b, g, &basis, &bc);
            Ok(b)
        };
        let mut bottom = [project_bottom(&mesh.primal)?, project_bottom(&mesh.dual)?];
        if opts.positivity {
            let [p, d] = &mut bottom;
            modify_bathymetry(&mesh, &basis, &bc, p, d)?;
        }

        let phys = problem.phys;
        let init = problem.initial;
        let mut fields: Vec<DgField> = Vec::new();
        for (m, g) in [&mesh.primal, &mesh.dual].into_iter().enumerate() {
            // surface and momenta are projected; the depth is surface minus the discrete bottom
            let mut u = DgField::project(g, &basis, 3, false, |x, y, v| {
                let (xf, yf) = fold_into(&dom, &bc, x, y);
                let b = bathy.eval(xf, yf);
                let (eta, h, uu, vv) = init.eval(xf, &b);
                let (hp, hq) = if h.v > 0.0 { momentum_from_jets(&h, &uu, &vv, &b, &phys) } else { (0.0, 0.0) };
                v[0] = eta;
                v[1] = hp;
                v[2] = hq;
            })?;
            for (i, j) in g.interior() {
                let idx = g.idx(i, j);
                let b = bottom[m].comp(idx, 0).to_vec();
                for (h, bb) in u.comp_mut(idx, 0).iter_mut().zip(&b) {
                    *h -= bb;
                }
                // the modified bottom can rise above the surface: the cell starts dry
                if u.comp(idx, 0)[0] < 0.0 {
                    u.cell_mut(idx).iter_mut().for_each(|c| *c = 0.0);
                }
            }
            fields.push(u);
        }
        let d = fields.pop().expect("dual");
        let p = fields.pop().expect("primal");
        let scheme = Scheme {
            tables: StageTables::new(opts.k),
            points: PositivityPoints::new(&basis),
            basis,
            phys,
            options: opts,
            inflow: problem.inflow,
            bottom,
            mesh,
        };
        let mut u = [p, d];
        for (m, kind) in [MeshKind::Primal, MeshKind::Dual].into_iter().enumerate() {
            if opts.positivity {
                positivity_limit(&mut u[m], scheme.mesh.grid(kind), &scheme.points)?;
            }
            scheme.fill(&mut u[m], m, 0.0);
        }
        let mut solvers =
            [FeSolver::new(&scheme.mesh.primal, opts.k, bc)?, FeSolver::new(&scheme.mesh.dual, opts.k, bc)?];
        let mut stats = StageStats::default();
        let state = scheme.recover(&mut solvers, u, 0.0, None, &mut stats)?;
        let mut sim = Simulation { scheme, state, solvers, t: 0.0, steps: 0, initial_mass: 0.0 };
        sim.initial_mass = sim.mass();
        Ok(sim)
    }

    pub fn grid(&self, kind: MeshKind) -> &Grid {
        self.scheme.mesh.grid(kind)
    }

    /// Water volume, the mean of the two meshes' volumes. Each stage moves one
    /// mesh's volume toward the other's, so only the mean is invariant.
    pub fn mass(&self) -> f64 {
        0.5 * (self.state.u[0].integral(&self.scheme.mesh.primal, 0) + self.state.u[1].integral(&self.scheme.mesh.dual, 0))
    }

    /// Admissible step for the current state.
    pub fn step_size(&self) -> Result<StepSize> {
        let k = self.scheme.options.k;
        let g = self.scheme.phys.g;
        let mut b = TimestepBounds::default();
        for (m, kind) in [MeshKind::Primal, MeshKind::Dual].into_iter().enumerate() {
            b = b.merge(TimestepBounds::scan(self.grid(kind), k, &self.state.u[m], &self.state.vel[m], g)?);
        }
        let o = &self.scheme.options;
        let mesh = &self.scheme.mesh;
        max_timestep(&b, mesh.dx(), mesh.dy(), o.cfl, omega1_hat(k), o.positivity, o.fixed_dt)
            .map_err(|_| Error::Stagnation { t: self.t })
    }

    /// Advance one step, not past `t_end`.
    pub fn step(&mut self, t_end: f64) -> Result<StepReport> {
        let mut size = self.step_size()?;
        // a remainder below round-off is absorbed instead of left as a sliver step
        if self.t + size.dt * (1.0 + 1e-10) >= t_end {
            size = size.with_dt(t_end - self.t);
        }
        let mut retries = 0;
        loop {
            if !(size.dt > 0.0) || size.dt < 1e-14 * (1.0 + self.t.abs()) {
                return Err(Error::Stagnation { t: self.t });
            }
            match self.scheme.ssp_rk3_step(&mut self.solvers, &self.state, size, self.t) {
                Ok((s, stats)) => {
                    self.scheme.check_finite(&s)?;
                    self.state = s;
                    self.t = if self.t + size.dt >= t_end { t_end } else { self.t + size.dt };
                    self.steps += 1;
                    return Ok(StepReport {
                        step: self.steps,
                        t: self.t,
                        dt: size.dt,
                        theta: size.theta,
                        retries,
                        stats,
                    });
                }
                Err(Error::NegativeAverage { .. }) if retries < MAX_RETRIES => {
                    retries += 1;
                    size = size.with_dt(0.5 * size.dt);
                }
                Err(e) => return Err(e),
            }
        }
    }

    /// Step until `t_final`, calling `observe` after every step.
    pub fn run_until(&mut self, t_final: f64, mut observe: impl FnMut(&Simulation, &StepReport)) -> Result<()> {
        while self.t < t_final {
            let r = self.step(t_final)?;
            observe(self, &r);
        }
        Ok(())
    }

    /// Free surface `h + b` on the primal mesh.
    pub fn surface_at(&self, x: f64, y: f64) -> Result<f64> {
        let g = &self.scheme.mesh.primal;
        let (i, j, xi, eta) = g.locate(x, y)?;
        let idx = g.idx(i, j);
        let phi = self.scheme.basis.values(xi, eta);
        Ok(dot(self.state.u[0].comp(idx, 0), &phi) + dot(self.scheme.bottom[0].comp(idx, 0), &phi))
    }

    pub fn depth_at(&self, x: f64, y: f64) -> Result<f64> {
        self.state.u[0].eval_at(&self.scheme.mesh.primal, &self.scheme.basis, 0, x, y)
    }

    pub fn velocity_at(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        self.state.vel[0].eval_at(&self.solvers[0].space, x, y)
    }

    /// `L2` errors of `(h, u)` on the primal mesh against `exact(x, y) = (h, u)`.
    pub fn l2_errors(&self, exact: impl Fn(f64, f64) -> (f64, f64)) -> Result<(f64, f64)> {
        let g = &self.scheme.mesh.primal;
        let rule = gauss_legendre(self.scheme.options.k + 3)?;
        let sp = &self.solvers[0].space;
        let nl = sp.n_local();
        let mut tables = Vec::new();
        for (&a, &wa) in rule.points.iter().zip(&rule.weights) {
            for (&b, &wb) in rule.points.iter().zip(&rule.weights) {
                tables.push((a, b, wa * wb, self.scheme.basis.values(a, b), sp.tensor_eval(a, b).0));
            }
        }
        let (mut eh, mut eu) = (0.0, 0.0);
        for (i, j) in g.interior() {
            let idx = g.idx(i, j);
            let hc = self.state.u[0].comp(idx, 0);
            let vc = self.state.vel[0].cell(idx, nl);
            for (a, b, w, phi, psi) in &tables {
                let (x, y) = g.to_physical(i, j, *a, *b);
                let (he, ue) = exact(x, y);
                let dh = dot(hc, phi) - he;
                let du = dot(&vc[..nl], psi) - ue;
                eh += w * dh * dh;
                eu += w * du * du;
            }
        }
        let area = g.cell_area();
        Ok((libm::sqrt(eh * area), libm::sqrt(eu * area)))
    }

    /// Largest deviation of `h + b`, `u`, `v` from still water at level `eta` on both meshes,
    /// sampled at the Gauss points of every interior cell.
    pub fn still_water_error(&self, eta: f64) -> (f64, f64, f64) {
        let k = self.scheme.options.k;
        let rule = crate::mesh::quadrature::gauss_rule(k);
        let (mut e_eta, mut e_u, mut e_v) = (0.0f64, 0.0f64, 0.0f64);
        for (m, kind) in [MeshKind::Primal, MeshKind::Dual].into_iter().enumerate() {
            let g = self.grid(kind);
            let sp = &self.solvers[m].space;
            let nl = sp.n_local();
            for (i, j) in g.interior() {
                let idx = g.idx(i, j);
                let (hc, bc) = (self.state.u[m].comp(idx, 0), self.scheme.bottom[m].comp(idx, 0));
                let vc = self.state.vel[m].cell(idx, nl);
                for &a in &rule.points {
                    for &b in &rule.points {
                        let phi = self.scheme.basis.values(a, b);
                        let psi = sp.tensor_eval(a, b).0;
                        e_eta = e_eta.max((dot(hc, &phi) + dot(bc, &phi) - eta).abs());
                        e_u = e_u.max(dot(&vc[..nl], &psi).abs());
                        e_v = e_v.max(dot(&vc[nl..], &psi).abs());
                    }
                }
            }
        }
        (e_eta, e_u, e_v)
    }

    pub fn solver(&self, kind: MeshKind) -> &FeSolver {
        match kind {
            MeshKind::Primal => &self.solvers[0],
            MeshKind::Dual => &self.solvers[1],
        }
    }
}

#[cfg(test)]
mod tests;
