use super::{partial_transpose, symmetric_eigenvalues, DensityMatrix, Matrix, SubsystemId};
use crate::error::{Error, Result};

/// Eigenvalues above `−NEGATIVE_EIGEN_TOL` count as zero for negativity.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-12;
/// Entropy rejects spectra with an eigenvalue below `−POSITIVITY_TOL`.
pub const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `−Σ λ` over `λ < −1e−12`.
    pub negativity: f64,
    /// `Σ |λ|`.
    pub trace_norm: f64,
    pub iterations: usize,
}

impl SpectrumResult {
    /// `(‖m‖₁ − Tr m)/2`, the trace-norm form of the negativity.
    pub fn negativity_from_trace_norm(&self) -> f64 {
        let tr: f64 = self.eigenvalues.iter().sum();
        0.5 * (self.trace_norm - tr)
    }
}

/// Spectrum and negativity of an arbitrary symmetric matrix.
pub fn spectrum(m: &Matrix) -> Result<SpectrumResult> {
    let ev = symmetric_eigenvalues(m)?;
    let negativity = -ev
        .values
        .iter()
        .filter(|&&l| l < -NEGATIVE_EIGEN_TOL)
        .sum::<f64>();
    let trace_norm = ev.values.iter().map(|l| l.abs()).sum();
    Ok(SpectrumResult {
        eigenvalues: ev.values,
        negativity,
        trace_norm,
        iterations: ev.iterations,
    })
}

/// Negativity of `rho` with respect to the cut at `over`.
pub fn negativity(rho: &DensityMatrix, over: SubsystemId) -> Result<SpectrumResult> {
    let pt = partial_transpose(rho, over)?;
    spectrum(pt.matrix())
}

/// `−Σ λ log₂ λ`, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let ev = symmetric_eigenvalues(rho.matrix())?;
    entropy_of_spectrum(&ev.values)
}

pub fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &l in values {
        if l < -POSITIVITY_TOL {
            return Err(Error::NotPositive(l));
        }
        if l > 0.0 {
            s -= l * l.log2();
        }
    }
    Ok(s)
}
