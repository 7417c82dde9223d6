//! Real linear algebra over labeled, truncated Fock spaces.

mod eigen;
mod matrix;
mod measures;
mod state;

use std::fmt;

pub use eigen::{
    connected_components, jacobi_eigenvalues, symmetric_eigenvalues, tridiagonal_ql_eigenvalues,
    Eigenvalues, JACOBI_MAX_DIM, JACOBI_MAX_SWEEPS, JACOBI_REL_TOL, SYMMETRY_TOL,
};
pub use matrix::Matrix;
pub use measures::{
    entropy_of_spectrum, negativity, spectrum, von_neumann_entropy, SpectrumResult,
    NEGATIVE_EIGEN_TOL, POSITIVITY_TOL,
};
pub use state::{
    density_from_state, partial_trace, partial_transpose, tensor, BasisLabel, DensityMatrix,
    Factor, Layout, StateVector,
};

/// Name of a tensor factor, e.g. `"A"` or `"I+"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsystemId(pub &'static str);

impl fmt::Display for SubsystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}
