//! Exact integer linear algebra and integer points of rational polyhedra.

mod matrix;
mod polyhedron;
mod smith;

pub use matrix::{rank_mod2, IntMatrix};
pub use polyhedron::{
    coordinate_bounds, count_lattice_points, lattice_points, Constraint, LatticeCount,
    LatticePoints, RationalPolyhedron, Sense,
};
pub use smith::{cokernel_presentation, smith_normal_form, CokernelPresentation, SmithDecomposition};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("constraint normal has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the constraint system has no rational solution")]
    Infeasible,
}
