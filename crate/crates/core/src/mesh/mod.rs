//! Overlapping primal/dual Cartesian meshes.
//!
//! Primal cell `(i, j)` covers `[x_min + i dx, x_min + (i+1) dx] x [...]`.
//! Dual cell `(i, j)` is centred on the primal vertex `(x_min + i dx, y_min + j dy)`.
//! In a periodic direction both meshes have `n` cells; otherwise the dual mesh
//! has `n + 1` full-size cells, the outermost ones straddling the boundary.
//! Every grid carries one ghost layer, so valid indices are `-1..=n`.

pub mod points;
pub mod quadrature;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeshKind {
    Primal,
    Dual,
}

impl MeshKind {
    pub fn other(self) -> MeshKind {
        match self {
            MeshKind::Primal => MeshKind::Dual,
            MeshKind::Dual => MeshKind::Primal,
        }
    }

    /// Offset of the opposite-cell map: the cell of the other mesh that covers
    /// quarter `l` of target cell `i` is `i + shift + l`.
    pub fn shift(self) -> isize {
        match self {
            MeshKind::Primal => 0,
            MeshKind::Dual => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    /// Zero-gradient (even reflection) outflow.
    Outgoing,
    /// Reflective solid wall.
    Wall,
    /// Incident wave imposed from outside (left side only).
    Inflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundarySet {
    pub left: Boundary,
    pub right: Boundary,
    pub bottom: Boundary,
    pub top: Boundary,
}

impl BoundarySet {
    pub fn periodic() -> Self {
        Self::uniform(Boundary::Periodic)
    }

    pub fn uniform(b: Boundary) -> Self {
        BoundarySet { left: b, right: b, bottom: b, top: b }
    }

    pub fn periodic_x(&self) -> bool {
        self.left == Boundary::Periodic
    }

    pub fn periodic_y(&self) -> bool {
        self.bottom == Boundary::Periodic
    }

    pub fn validate(&self) -> Result<()> {
        if (self.left == Boundary::Periodic) != (self.right == Boundary::Periodic)
            || (self.bottom == Boundary::Periodic) != (self.top == Boundary::Periodic)
        {
            return Err(Error::InvalidInput("periodic boundaries must come in pairs"));
        }
        if self.right == Boundary::Inflow || self.bottom == Boundary::Inflow || self.top == Boundary::Inflow
        {
            return Err(Error::InvalidInput("inflow is only supported on the left boundary"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Domain {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let ok = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !ok || x_max <= x_min || y_max <= y_min {
            return Err(Error::InvalidInput("domain bounds must be finite and increasing"));
        }
        Ok(Domain { x_min, x_max, y_min, y_max })
    }

    pub fn lx(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn ly(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.lx() * self.ly()
    }
}

/// One uniform Cartesian grid with a single ghost layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub kind: MeshKind,
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    /// Centre of cell `(0, 0)`.
    pub x0: f64,
    pub y0: f64,
    pub periodic_x: bool,
    pub periodic_y: bool,
    pub domain: Domain,
}

impl Grid {
    pub fn stride(&self) -> usize {
        self.ny + 2
    }

    pub fn n_total(&self) -> usize {
        (self.nx + 2) * (self.ny + 2)
    }

    pub fn n_interior(&self) -> usize {
        self.nx * self.ny
    }

    /// Storage index of cell `(i, j)`, ghosts included.
    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        debug_assert!(i >= -1 && i <= self.nx as isize && j >= -1 && j <= self.ny as isize);
        (i + 1) as usize * (self.ny + 2) + (j + 1) as usize
    }

    pub fn center(&self, i: isize, j: isize) -> (f64, f64) {
        (self.x0 + i as f64 * self.dx, self.y0 + j as f64 * self.dy)
    }

    pub fn to_physical(&self, i: isize, j: isize, xi: f64, eta: f64) -> (f64, f64) {
        let (xc, yc) = self.center(i, j);
        (xc + xi * self.dx, yc + eta * self.dy)
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    pub fn is_interior(&self, i: isize, j: isize) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.nx && (j as usize) < self.ny
    }

    pub fn interior(&self) -> impl Iterator<Item = (isize, isize)> + '_ {
        let ny = self.ny as isize;
        (0..self.nx as isize).flat_map(move |i| (0..ny).map(move |j| (i, j)))
    }

    /// All cells including the ghost ring.
    pub fn all_cells(&self) -> impl Iterator<Item = (isize, isize)> + '_ {
        let ny = self.ny as isize;
        (-1..=self.nx as isize).flat_map(move |i| (-1..=ny).map(move |j| (i, j)))
    }

    fn locate_1d(x: f64, x0: f64, d: f64, n: usize, period: Option<(f64, f64)>) -> Option<(isize, f64)> {
        let mut x = x;
        if let Some((lo, len)) = period {
            let r = libm::fmod(x - lo, len);
            x = lo + if r < 0.0 { r + len } else { r };
        }
        let s = (x - x0) / d + 0.5;
        let tol = 1e-12;
        if s < -tol || s > n as f64 + tol {
            return None;
        }
        let i = (libm::floor(s) as isize).clamp(0, n as isize - 1);
        let xi = (s - i as f64 - 0.5).clamp(-0.5, 0.5);
        Some((i, xi))
    }

    /// Interior cell containing `(x, y)` and the reference coordinates there.
    pub fn locate(&self, x: f64, y: f64) -> Result<(isize, isize, f64, f64)> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::Evaluation);
        }
        // periodic wrap into the span covered by this grid's cells
        let px = self.periodic_x.then(|| (self.x0 - 0.5 * self.dx, self.domain.lx()));
        let py = self.periodic_y.then(|| (self.y0 - 0.5 * self.dy, self.domain.ly()));
        let (i, xi) = Self::locate_1d(x, self.x0, self.dx, self.nx, px).ok_or(Error::Lookup { x, y })?;
        let (j, eta) = Self::locate_1d(y, self.y0, self.dy, self.ny, py).ok_or(Error::Lookup { x, y })?;
        Ok((i, j, xi, eta))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshPair {
    pub domain: Domain,
    pub bc: BoundarySet,
    pub primal: Grid,
    pub dual: Grid,
}

impl MeshPair {
    pub fn grid(&self, kind: MeshKind) -> &Grid {
        match kind {
            MeshKind::Primal => &self.primal,
            MeshKind::Dual => &self.dual,
        }
    }

    pub fn dx(&self) -> f64 {
        self.primal.dx
    }

    pub fn dy(&self) -> f64 {
        self.primal.dy
    }

    /// Index in the other mesh of the cell covering quarter `l` of target cell `i`.
    pub fn opposite_index(target: MeshKind, i: isize, l: usize) -> isize {
        i + target.shift() + l as isize
    }
}

pub fn build_overlapping_meshes(domain: Domain, nx: usize, ny: usize, bc: BoundarySet) -> Result<MeshPair> {
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidInput("mesh needs at least two cells per direction"));
    }
    bc.validate()?;
    let domain = Domain::new(domain.x_min, domain.x_max, domain.y_min, domain.y_max)?;
    let dx = domain.lx() / nx as f64;
    let dy = domain.ly() / ny as f64;
    let (px, py) = (bc.periodic_x(), bc.periodic_y());
    let primal = Grid {
        kind: MeshKind::Primal,
        nx,
        ny,
        dx,
        dy,
        x0: domain.x_min + 0.5 * dx,
        y0: domain.y_min + 0.5 * dy,
        periodic_x: px,
        periodic_y: py,
        domain,
    };
    let dual = Grid {
        kind: MeshKind::Dual,
        nx: if px { nx } else { nx + 1 },
        ny: if py { ny } else { ny + 1 },
        dx,
        dy,
        x0: domain.x_min,
        y0: domain.y_min,
        periodic_x: px,
        periodic_y: py,
        domain,
    };
    Ok(MeshPair { domain, bc, primal, dual })
}

/// Index helper for periodic wrap of a ghost index.
pub(crate) fn wrap(i: isize, n: usize) -> isize {
    i.rem_euclid(n as isize)
}

/// Mirror partner of an out-of-range index for a non-periodic grid: the interior
/// cell whose centre is the reflection of cell `i` about the nearest boundary.
pub(crate) fn mirror_index(grid_kind: MeshKind, i: isize, n: usize) -> isize {
    let n = n as isize;
    match grid_kind {
        // primal centres are at (i + 1/2) dx, so -1 <-> 0 and n <-> n - 1
        MeshKind::Primal => {
            if i < 0 {
                -1 - i
            } else {
                2 * n - 1 - i
            }
        }
        // dual centres are at i dx and the boundary sits at centre 0 / n - 1
        MeshKind::Dual => {
            if i < 0 {
                -i
            } else {
                2 * (n - 1) - i
            }
        }
    }
}
