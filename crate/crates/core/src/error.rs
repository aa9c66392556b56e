use core::fmt;

use crate::mesh::MeshKind;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Invalid construction parameters (mesh size, degree, bounds, ...).
    InvalidInput(&'static str),
    /// A function handed to a projection returned a non-finite value.
    Projection { x: f64, y: f64 },
    /// Non-finite input to a pointwise evaluation.
    Evaluation,
    /// Physical point outside the mesh.
    Lookup { x: f64, y: f64 },
    /// Non-finite value produced during a time stage.
    BlowUp { mesh: MeshKind, i: isize, j: isize },
    /// A cell average of the water depth went negative.
    NegativeAverage { mesh: MeshKind, i: isize, j: isize, value: f64 },
    /// Linear solver did not reach the requested tolerance.
    Solver { iterations: usize, residual: f64 },
    /// Bottom-modification constraint system could not be solved.
    Constraint { residual: f64 },
    /// Time step collapsed to zero or non-finite.
    Stagnation { t: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Projection { x, y } => {
                write!(f, "projection: non-finite function value at ({x}, {y})")
            }
            Error::Evaluation => write!(f, "evaluation: non-finite input"),
            Error::Lookup { x, y } => write!(f, "point ({x}, {y}) lies outside the mesh"),
            Error::BlowUp { mesh, i, j } => {
                write!(f, "non-finite value on {mesh:?} cell ({i}, {j})")
            }
            Error::NegativeAverage { mesh, i, j, value } => {
                write!(f, "negative mean depth {value:e} on {mesh:?} cell ({i}, {j})")
            }
            Error::Solver { iterations, residual } => write!(
                f,
                "linear solver stalled after {iterations} iterations (relative residual {residual:e})"
            ),
            Error::Constraint { residual } => {
                write!(f, "bottom constraint solve failed (residual {residual:e})")
            }
            Error::Stagnation { t } => write!(f, "time step collapsed at t = {t}"),
        }
    }
}

impl core::error::Error for Error {}
