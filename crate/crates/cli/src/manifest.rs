use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use dsrqi_core::channels::{DEFAULT_SERIES_TOL, TERM_TOL};
use dsrqi_core::fermionic::CHSH_IMAGINARY_TOL;
use dsrqi_core::linalg::{JACOBI_MAX_DIM, JACOBI_MAX_SWEEPS, JACOBI_REL_TOL, NEGATIVE_EIGEN_TOL, SYMMETRY_TOL};

use crate::args::Settings;
use crate::commands::Diag;
use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub tail_tol: f64,
    pub series_tol: f64,
    pub default_series_tol: f64,
    pub series_term_tol: f64,
    pub jacobi_rel_tol: f64,
    pub jacobi_max_sweeps: usize,
    pub jacobi_max_dim: usize,
    pub symmetry_tol: f64,
    pub negative_eigen_tol: f64,
    pub chsh_imaginary_tol: f64,
}

impl Tolerances {
    pub fn of(s: &Settings) -> Self {
        Tolerances {
            tail_tol: s.tail_tol,
            series_tol: s.series_tol,
            default_series_tol: DEFAULT_SERIES_TOL,
            series_term_tol: TERM_TOL,
            jacobi_rel_tol: JACOBI_REL_TOL,
            jacobi_max_sweeps: JACOBI_MAX_SWEEPS,
            jacobi_max_dim: JACOBI_MAX_DIM,
            symmetry_tol: SYMMETRY_TOL,
            negative_eigen_tol: NEGATIVE_EIGEN_TOL,
            chsh_imaginary_tol: CHSH_IMAGINARY_TOL,
        }
    }
}

/// Everything needed to trace and rerun a dataset. `parameters` uses the
/// config-file keys, so the manifest itself is a valid `--config`.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub version: String,
    pub tolerances: Tolerances,
    pub jobs: usize,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
    pub diagnostics: Vec<Diag>,
}

impl RunManifest {
    pub fn new(command: &str, s: &Settings, extra: &[(&str, String)]) -> Self {
        let mut parameters = s.parameters();
        for (k, v) in extra {
            parameters.insert(k.to_string(), v.clone());
        }
        RunManifest {
            command: command.to_string(),
            parameters,
            version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances: Tolerances::of(s),
            jobs: s.jobs,
            wall_time_s: 0.0,
            outputs: Vec::new(),
            warnings: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serialises");
        text.push('\n');
        fs::write(path, text).map_err(|e| CliError::io(path, e))
    }
}
