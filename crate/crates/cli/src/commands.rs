use rayon::prelude::*;
use serde::Serialize;

use dsrqi_core::bosonic::{self, Truncation, UnruhWeight};
use dsrqi_core::channels::{self, CapacityResult};
use dsrqi_core::fermionic;
use dsrqi_core::params::critical_point;
use dsrqi_core::{Alpha, ModeParams, Scale};

use crate::args::{Channel, Field, Kind, Method, Settings};
use crate::error::CliError;
use crate::sweep::Point;
use crate::table::{fmt_num, Cell, Table};

pub const NEGATIVITY_COLUMNS: &[&str] =
    &["curve", "sweep_var", "x", "alpha", "q_r", "negativity", "method", "tail_deficit"];
pub const CAPACITY_COLUMNS: &[&str] =
    &["curve", "sweep_var", "x", "alpha", "d", "capacity_bits", "raw_value", "terms_used", "tail_bound"];
pub const CHSH_COLUMNS: &[&str] =
    &["curve", "sweep_var", "x", "alpha", "q_r", "b_max_numeric", "b_max_closed_form", "violates"];
pub const HC_COLUMNS: &[&str] = &["alpha", "x_c", "r_tilde_c", "H_c/|k|", "Q_zero_x", "|x_c-Q_zero_x|"];

/// Per-point solver diagnostics recorded in the manifest.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diag {
    pub curve: String,
    pub index: usize,
    pub x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_deficit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigen_iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bisection_iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub table: Table,
    /// Columns kept per curve in the wide layout.
    pub wide_values: &'static [&'static str],
    pub diagnostics: Vec<Diag>,
}

impl RunOutput {
    /// Notes on points whose Fock truncation missed `tail_tol`.
    pub fn warnings(&self, tail_tol: f64) -> Vec<String> {
        let over: Vec<f64> = self
            .diagnostics
            .iter()
            .filter_map(|d| d.tail_deficit)
            .filter(|&t| t > tail_tol)
            .collect();
        if over.is_empty() {
            return Vec::new();
        }
        let worst = over.iter().cloned().fold(0.0, f64::max);
        vec![format!(
            "{} of {} points exceed tail-tol {tail_tol:e} at the Fock cutoff (largest tail deficit {})",
            over.len(),
            self.diagnostics.len(),
            fmt_num(worst)
        )]
    }

    pub fn render(&self, wide: bool, format: crate::args::Format) -> String {
        let t = if wide && !self.wide_values.is_empty() {
            self.table.widen("curve", &["sweep_var", "x"], self.wide_values)
        } else {
            self.table.clone()
        };
        match format {
            crate::args::Format::Csv => t.to_csv(),
            crate::args::Format::Json => t.to_json(),
        }
    }
}

/// One plotted line: an `α` with an optional Unruh weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curve {
    pub alpha: Alpha,
    pub q_r: Option<f64>,
    pub d: Option<usize>,
}

impl Curve {
    pub fn label(&self) -> String {
        let mut s = format!("alpha={}", self.alpha);
        if let Some(q) = self.q_r {
            s.push_str(&format!(" q_r={q}"));
        }
        if let Some(d) = self.d {
            s.push_str(&format!(" d={d}"));
        }
        s
    }

    fn weight(&self) -> UnruhWeight {
        UnruhWeight::new(self.q_r.unwrap_or(1.0)).expect("validated weight")
    }
}

fn alpha_cell(a: Alpha) -> Cell {
    Cell::Text(a.to_string())
}

/// Evaluates `f` on every (curve, point) pair in the current rayon pool.
/// Results come back in input order; the first failure in that order is
/// reported.
fn evaluate<T, F>(curves: &[Curve], points: &[Point], f: F) -> Result<Vec<(usize, usize, T)>, CliError>
where
    T: Send,
    F: Fn(&Curve, ModeParams) -> dsrqi_core::Result<T> + Sync,
{
    let jobs: Vec<(usize, usize)> = (0..curves.len())
        .flat_map(|c| (0..points.len()).map(move |p| (c, p)))
        .collect();
    let results: Vec<dsrqi_core::Result<T>> = jobs
        .par_iter()
        .map(|&(c, p)| f(&curves[c], ModeParams::new(curves[c].alpha, points[p].scale)))
        .collect();
    jobs.into_iter()
        .zip(results)
        .map(|((c, p), r)| {
            r.map(|v| (c, p, v)).map_err(|source| CliError::Numerical {
                point: format!("{} x={}", curves[c].label(), fmt_num(points[p].scale.x())),
                source,
            })
        })
        .collect()
}

fn curves(s: &Settings, with_q: bool, d: Option<usize>) -> Vec<Curve> {
    let mut out = Vec::new();
    for &alpha in &s.alphas {
        if with_q {
            for &q in &s.qrs {
                out.push(Curve { alpha, q_r: Some(q), d });
            }
        } else {
            out.push(Curve { alpha, q_r: None, d });
        }
    }
    out
}

fn grid_points(s: &Settings) -> Result<Vec<Point>, CliError> {
    s.require_alphas()?;
    s.require_grid()?.points(s.k).map_err(CliError::usage)
}

struct NegPoint {
    value: f64,
    method: &'static str,
    tail_deficit: f64,
    n_max: Option<usize>,
    iterations: Option<usize>,
}

pub fn negativity(s: &Settings, field: Field, method: Method) -> Result<RunOutput, CliError> {
    let points = grid_points(s)?;
    if method == Method::Analytic && s.qrs.iter().any(|&q| q != 1.0) {
        return Err(CliError::Usage("the analytic negativity needs q_r = 1".into()));
    }
    let curves = curves(s, true, None);
    let trunc = Truncation {
        n_max: s.nmax,
        tail_tol: s.tail_tol,
    };
    let results = evaluate(&curves, &points, |c, p| {
        let analytic = match method {
            Method::Analytic => true,
            Method::Numeric => false,
            Method::Auto => c.q_r == Some(1.0),
        };
        Ok(match (field, analytic) {
            (Field::Boson, true) => NegPoint {
                value: bosonic::negativity_sma(p, s.tail_tol)?,
                method: "analytic",
                tail_deficit: 0.0,
                n_max: None,
                iterations: None,
            },
            (Field::Boson, false) => {
                let n = bosonic::negativity_numeric(p, c.weight(), trunc)?;
                NegPoint {
                    value: n.value(),
                    method: "numeric",
                    tail_deficit: n.tail_deficit,
                    n_max: Some(n.n_max),
                    iterations: Some(n.spectrum.iterations),
                }
            }
            (Field::Fermion, true) => NegPoint {
                value: fermionic::fermion_negativity_sma(p)?,
                method: "analytic",
                tail_deficit: 0.0,
                n_max: None,
                iterations: None,
            },
            (Field::Fermion, false) => {
                let n = fermionic::fermion_negativity(p, c.weight())?;
                NegPoint {
                    value: n.negativity,
                    method: "numeric",
                    tail_deficit: 0.0,
                    n_max: None,
                    iterations: Some(n.iterations),
                }
            }
        })
    })?;

    let mut table = Table::new(NEGATIVITY_COLUMNS);
    let mut diagnostics = Vec::with_capacity(results.len());
    for (c, i, r) in results {
        let (curve, point) = (&curves[c], &points[i]);
        table.push(vec![
            Cell::text(curve.label()),
            Cell::Num(point.value),
            Cell::Num(point.scale.x()),
            alpha_cell(curve.alpha),
            Cell::Num(curve.q_r.unwrap_or(1.0)),
            Cell::Num(r.value),
            Cell::text(r.method),
            Cell::Num(r.tail_deficit),
        ]);
        diagnostics.push(Diag {
            curve: curve.label(),
            index: i,
            x: point.scale.x(),
            n_max: r.n_max,
            tail_deficit: r.n_max.map(|_| r.tail_deficit),
            eigen_iterations: r.iterations,
            ..Diag::default()
        });
    }
    Ok(RunOutput {
        table,
        wide_values: &["negativity"],
        diagnostics,
    })
}

pub fn capacity(s: &Settings, channel: Channel, kind: Kind, d: usize) -> Result<RunOutput, CliError> {
    let points = grid_points(s)?;
    if channel == Channel::Unruh && kind == Kind::Classical {
        return Err(CliError::Usage("the classical capacity is only available for the grassmann channel".into()));
    }
    if d < 2 {
        return Err(CliError::Usage(format!("--d must be at least 2, got {d}")));
    }
    let curves = curves(s, false, Some(d));
    let results = evaluate(&curves, &points, |_, p| -> dsrqi_core::Result<CapacityResult> {
        match (channel, kind) {
            (Channel::Unruh, _) => channels::unruh_quantum_capacity(p, d, s.series_tol),
            (Channel::Grassmann, Kind::Quantum) => channels::grassmann_quantum_capacity(p, d),
            (Channel::Grassmann, Kind::Classical) => channels::grassmann_classical_capacity(p, d),
        }
    })?;

    let mut table = Table::new(CAPACITY_COLUMNS);
    let mut diagnostics = Vec::with_capacity(results.len());
    for (c, i, r) in results {
        let (curve, point) = (&curves[c], &points[i]);
        table.push(vec![
            Cell::text(curve.label()),
            Cell::Num(point.value),
            Cell::Num(point.scale.x()),
            alpha_cell(curve.alpha),
            Cell::Int(d as u64),
            Cell::Num(r.value),
            Cell::Num(r.raw_value),
            Cell::Int(r.terms_used as u64),
            Cell::Num(r.tail_bound),
        ]);
        diagnostics.push(Diag {
            curve: curve.label(),
            index: i,
            x: point.scale.x(),
            terms_used: Some(r.terms_used),
            ..Diag::default()
        });
    }
    Ok(RunOutput {
        table,
        wide_values: &["capacity_bits"],
        diagnostics,
    })
}

pub fn chsh(s: &Settings) -> Result<RunOutput, CliError> {
    let points = grid_points(s)?;
    let curves = curves(s, true, None);
    let results = evaluate(&curves, &points, |c, p| fermionic::chsh_max(p, c.weight()))?;

    let mut table = Table::new(CHSH_COLUMNS);
    let mut diagnostics = Vec::with_capacity(results.len());
    for (c, i, r) in results {
        let (curve, point) = (&curves[c], &points[i]);
        table.push(vec![
            Cell::text(curve.label()),
            Cell::Num(point.value),
            Cell::Num(point.scale.x()),
            alpha_cell(curve.alpha),
            Cell::Num(curve.q_r.unwrap_or(1.0)),
            Cell::Num(r.b_max),
            Cell::Num(r.b_max_closed_form),
            Cell::Bool(r.violates()),
        ]);
        diagnostics.push(Diag {
            curve: curve.label(),
            index: i,
            x: point.scale.x(),
            ..Diag::default()
        });
    }
    Ok(RunOutput {
        table,
        wide_values: &["b_max_numeric"],
        diagnostics,
    })
}

pub fn hc(s: &Settings) -> Result<RunOutput, CliError> {
    s.require_alphas()?;
    let results: Vec<dsrqi_core::Result<_>> = s
        .alphas
        .par_iter()
        .map(|&a| Ok((critical_point(a), channels::quantum_capacity_zero(a)?)))
        .collect();

    let mut table = Table::new(HC_COLUMNS);
    let mut diagnostics = Vec::new();
    for (&alpha, r) in s.alphas.iter().zip(results) {
        let (cp, zero) = r.map_err(|source| CliError::Numerical {
            point: format!("alpha={alpha}"),
            source,
        })?;
        // Bunch–Davies: the curves meet only at infinite curvature
        let (x_c, r_tilde_c) = cp.map_or((0.0, std::f64::consts::FRAC_PI_4), |c| (c.x_c, c.r_tilde_c));
        let hc_over_k = Scale::from_x(x_c).map_or(f64::INFINITY, |sc| sc.hubble_over_k());
        table.push(vec![
            alpha_cell(alpha),
            Cell::Num(x_c),
            Cell::Num(r_tilde_c),
            Cell::Num(hc_over_k),
            Cell::Num(zero.x),
            Cell::Num((x_c - zero.x).abs()),
        ]);
        diagnostics.push(Diag {
            curve: format!("alpha={alpha}"),
            x: zero.x,
            bisection_iterations: Some(zero.iterations),
            ..Diag::default()
        });
    }
    Ok(RunOutput {
        table,
        wide_values: &[],
        diagnostics,
    })
}
