//! Bosonic α-vacuum and one-particle states seen by a static observer,
//! the Alice–Rob system built from them, and its correlations.
//!
//! Rob's mode is a two-mode squeezed state over regions I and IV with
//! effective parameter `t = tanh r · Δ`. The Fock spaces are truncated at
//! `n_max`; the discarded weight is always reported, never renormalised.

use crate::error::{domain, Error, Result};
use crate::linalg::{
    density_from_state, entropy_of_spectrum, negativity, symmetric_eigenvalues,
    von_neumann_entropy, DensityMatrix, Layout, Matrix, SpectrumResult, StateVector, SubsystemId,
};
use crate::params::{boson_squeeze, Alpha, ModeParams, Scale};

pub const ALICE: SubsystemId = SubsystemId("A");
pub const REGION_I: SubsystemId = SubsystemId("I");
pub const REGION_IV: SubsystemId = SubsystemId("IV");
pub const MINKOWSKI: SubsystemId = SubsystemId("M");

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
pub const N_MAX_FLOOR: usize = 16;
pub const N_MAX_CAP: usize = 128;

/// Weights of the right and left Unruh modes, `q_R² + q_L² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnruhWeight {
    pub q_r: f64,
    pub q_l: f64,
}

impl UnruhWeight {
    pub fn new(q_r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q_r) {
            return domain(format!("q_R must lie in [0, 1], got {q_r}"));
        }
        Ok(UnruhWeight {
            q_r,
            q_l: (1.0 - q_r * q_r).sqrt(),
        })
    }

    /// Single-mode approximation, `q_R = 1`.
    pub fn sma() -> Self {
        UnruhWeight { q_r: 1.0, q_l: 0.0 }
    }
}

/// Fock cutoff policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    /// `None` picks the smallest cutoff meeting `tail_tol`, within
    /// `[N_MAX_FLOOR, N_MAX_CAP]`.
    pub n_max: Option<usize>,
    pub tail_tol: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            n_max: None,
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }
}

impl Truncation {
    pub fn fixed(n_max: usize) -> Self {
        Truncation {
            n_max: Some(n_max),
            ..Truncation::default()
        }
    }

    pub fn resolve(&self, t: f64) -> usize {
        self.n_max
            .unwrap_or_else(|| adaptive_n_max(t, self.tail_tol))
    }
}

/// A truncated ket and the norm² it is missing.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated {
    pub state: StateVector,
    pub deficit: f64,
}

fn t_eff(p: ModeParams) -> Result<f64> {
    let t = boson_squeeze(p)?.t_eff;
    if t >= 1.0 {
        return domain(format!("effective squeezing {t} is not below 1"));
    }
    Ok(t)
}

fn check_n_max(n_max: usize) -> Result<()> {
    if n_max == 0 {
        return domain("n_max must be at least 1");
    }
    Ok(())
}

fn rob_layout(n_max: usize) -> Layout {
    Layout::of(&[(REGION_I.0, n_max + 1), (REGION_IV.0, n_max + 1)]).expect("distinct ids")
}

/// Norm² lost by the vacuum at cutoff `n_max`.
pub fn vacuum_deficit(t: f64, n_max: usize) -> f64 {
    (t * t).powi(n_max as i32 + 1)
}

/// Norm² lost by the one-particle state at cutoff `n_max`.
pub fn one_particle_deficit(t: f64, n_max: usize) -> f64 {
    let u = t * t;
    let m = (n_max + 1) as f64;
    u.powi(n_max as i32 + 1) * ((m + 1.0) - m * u)
}

/// Norm² lost by the Alice–Rob pure state at cutoff `n_max`.
pub fn tail_deficit(t: f64, n_max: usize) -> f64 {
    0.5 * (vacuum_deficit(t, n_max) + one_particle_deficit(t, n_max))
}

pub fn adaptive_n_max(t: f64, tail_tol: f64) -> usize {
    (N_MAX_FLOOR..=N_MAX_CAP)
        .find(|&n| tail_deficit(t, n) < tail_tol)
        .unwrap_or(N_MAX_CAP)
}

/// `√(1−t²) Σ tⁿ |n⟩_I |n⟩_IV` for `n ≤ n_max`.
pub fn alpha_vacuum_state(p: ModeParams, n_max: usize) -> Result<Truncated> {
    check_n_max(n_max)?;
    let t = t_eff(p)?;
    let norm = (1.0 - t * t).sqrt();
    let mut state = StateVector::zero(rob_layout(n_max));
    let mut tn = 1.0;
    for n in 0..=n_max {
        state.add(&[n, n], norm * tn)?;
        tn *= t;
    }
    Ok(Truncated {
        state,
        deficit: vacuum_deficit(t, n_max),
    })
}

/// `(1−t²) Σ tⁿ √(n+1) (q_L |n⟩|n+1⟩ + q_R |n+1⟩|n⟩)` for `n ≤ n_max`.
pub fn one_particle_state(p: ModeParams, w: UnruhWeight, n_max: usize) -> Result<Truncated> {
    check_n_max(n_max)?;
    let t = t_eff(p)?;
    let norm = 1.0 - t * t;
    let mut state = StateVector::zero(rob_layout(n_max));
    let mut tn = 1.0;
    for n in 0..=n_max {
        let c = norm * tn * ((n + 1) as f64).sqrt();
        if w.q_l != 0.0 {
            state.add(&[n, n + 1], w.q_l * c)?;
        }
        if w.q_r != 0.0 {
            state.add(&[n + 1, n], w.q_r * c)?;
        }
        tn *= t;
    }
    Ok(Truncated {
        state,
        deficit: one_particle_deficit(t, n_max),
    })
}

/// `(|0⟩_A |0^α⟩ + |1⟩_A |1^α⟩)/√2` over Alice, I and IV.
pub fn tripartite_state(p: ModeParams, w: UnruhWeight, n_max: usize) -> Result<Truncated> {
    let vac = alpha_vacuum_state(p, n_max)?;
    let one = one_particle_state(p, w, n_max)?;
    let layout = Layout::of(&[(ALICE.0, 1)])?.concat(vac.state.layout())?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut state = StateVector::zero(layout);
    for (a, part) in [(0usize, &vac.state), (1, &one.state)] {
        for (occ, amp) in part.iter() {
            state.add(&[a, occ[0], occ[1]], h * amp)?;
        }
    }
    Ok(Truncated {
        state,
        deficit: 0.5 * (vac.deficit + one.deficit),
    })
}

/// Alice qubit ⊗ region-I Fock space after tracing region IV.
#[derive(Debug, Clone, PartialEq)]
pub struct BosonAliceRob {
    pub rho: DensityMatrix,
    pub params: ModeParams,
    pub weight: UnruhWeight,
    pub n_max: usize,
    pub tail_deficit: f64,
}

/// Closed-form `ρ_{A,I}`; fails if the cutoff misses `trunc.tail_tol`.
pub fn alice_rob_density(p: ModeParams, w: UnruhWeight, trunc: Truncation) -> Result<BosonAliceRob> {
    let out = alice_rob_density_lenient(p, w, trunc)?;
    if !(out.tail_deficit < trunc.tail_tol) {
        return Err(Error::TruncationUnreachable {
            n_max: out.n_max,
            deficit: out.tail_deficit,
            tol: trunc.tail_tol,
        });
    }
    Ok(out)
}

/// Closed-form `ρ_{A,I}` with whatever tail the cutoff leaves.
pub fn alice_rob_density_lenient(
    p: ModeParams,
    w: UnruhWeight,
    trunc: Truncation,
) -> Result<BosonAliceRob> {
    let t = t_eff(p)?;
    let n_max = trunc.resolve(t);
    check_n_max(n_max)?;
    let u = t * t;
    let v = 1.0 - u;
    let layout = Layout::of(&[(ALICE.0, 1), (REGION_I.0, n_max + 1)])?;
    let mut m = Matrix::zeros(layout.dim());
    let idx = |a: usize, n: usize| layout.index(&[a, n]);
    let mut sym = |i: usize, j: usize, val: f64| {
        m[(i, j)] += val;
        if i != j {
            m[(j, i)] += val;
        }
    };
    let mut un = 1.0;
    for n in 0..=n_max {
        let wgt = 0.5 * un * v;
        let nf = n as f64;
        sym(idx(0, n), idx(0, n), wgt);
        sym(idx(1, n + 1), idx(0, n), wgt * ((nf + 1.0) * v).sqrt() * w.q_r);
        sym(idx(1, n + 1), idx(1, n + 1), wgt * (nf + 1.0) * v * w.q_r * w.q_r);
        sym(idx(1, n), idx(1, n), wgt * (nf + 1.0) * v * w.q_l * w.q_l);
        if n < n_max {
            sym(idx(1, n), idx(0, n + 1), wgt * ((nf + 1.0) * v).sqrt() * w.q_l * t);
            sym(
                idx(1, n + 2),
                idx(1, n),
                wgt * ((nf + 1.0) * (nf + 2.0)).sqrt() * v * t * w.q_r * w.q_l,
            );
        }
        un *= u;
    }
    Ok(BosonAliceRob {
        rho: DensityMatrix::new(layout, m)?,
        params: p,
        weight: w,
        n_max,
        tail_deficit: tail_deficit(t, n_max),
    })
}

/// `ρ_{A,I}` obtained by building the tripartite state and tracing IV.
pub fn alice_rob_density_by_trace(p: ModeParams, w: UnruhWeight, n_max: usize) -> Result<DensityMatrix> {
    tripartite_state(p, w, n_max)?
        .state
        .reduced_density(&[ALICE, REGION_I])
}

/// Partial sum (`n < n_terms`) of the single-mode negativity series.
pub fn negativity_sma_analytic(p: ModeParams, n_terms: usize) -> Result<f64> {
    if p.scale == Scale::InfiniteCurvature {
        return Ok(0.0);
    }
    let t = t_eff(p)?;
    Ok(sma_series(t * t, n_terms))
}

/// Single-mode negativity series summed until the remaining terms are
/// bounded by `tail_tol`.
pub fn negativity_sma(p: ModeParams, tail_tol: f64) -> Result<f64> {
    if p.scale == Scale::InfiniteCurvature {
        return Ok(0.0);
    }
    let t = t_eff(p)?;
    Ok(sma_series(t * t, sma_terms(t * t, tail_tol)))
}

/// Each term is at most `½ uⁿ (1−u)`, so the tail after `n` terms is at
/// most `½ uⁿ`.
fn sma_terms(u: f64, tail_tol: f64) -> usize {
    if u == 0.0 {
        return 1;
    }
    ((2.0 * tail_tol).ln() / u.ln()).ceil().max(1.0) as usize
}

fn sma_series(u: f64, n_terms: usize) -> f64 {
    let v = 1.0 - u;
    let mut sum = 0.0;
    let mut un = 1.0;
    for n in 0..n_terms {
        if un == 0.0 {
            break;
        }
        let s = if n == 0 { u } else { u + n as f64 * (v / u) };
        let c = 4.0 * v;
        // √(s²+c) − s without cancellation
        let bracket = c / ((s * s + c).sqrt() + s);
        sum += 0.25 * un * v * bracket;
        un *= u;
    }
    sum
}

#[derive(Debug, Clone, PartialEq)]
pub struct BosonNegativity {
    pub spectrum: SpectrumResult,
    pub n_max: usize,
    pub tail_deficit: f64,
}

impl BosonNegativity {
    pub fn value(&self) -> f64 {
        self.spectrum.negativity
    }
}

/// Negativity of `ρ_{A,I}` from the spectrum of its partial transpose.
/// At infinite curvature the exact limit 0 is returned.
pub fn negativity_numeric(p: ModeParams, w: UnruhWeight, trunc: Truncation) -> Result<BosonNegativity> {
    if p.scale == Scale::InfiniteCurvature {
        return Ok(BosonNegativity {
            spectrum: SpectrumResult {
                eigenvalues: Vec::new(),
                negativity: 0.0,
                trace_norm: 1.0,
                iterations: 0,
            },
            n_max: 0,
            tail_deficit: 0.0,
        });
    }
    let ar = alice_rob_density_lenient(p, w, trunc)?;
    Ok(BosonNegativity {
        spectrum: negativity(&ar.rho, ALICE)?,
        n_max: ar.n_max,
        tail_deficit: ar.tail_deficit,
    })
}

/// Flat-space (`x → ∞`) limit of the single-mode Alice–I negativity,
/// where `t → e^α`.
pub fn asymptotic_negativity(alpha: Alpha) -> Result<f64> {
    negativity_sma(ModeParams::new(alpha, Scale::Flat), DEFAULT_TAIL_TOL)
}

/// Negativity of Alice's qubit entangled with the α-mode written as a
/// single-mode squeezed state over the Minkowski vacuum. The state is
/// pure with two equal Schmidt weights.
pub fn squeezed_minkowski_negativity(alpha: Alpha, n_max: usize) -> Result<f64> {
    check_n_max(n_max)?;
    let e = alpha.exp();
    let cap = 2 * n_max + 1;
    let layout = Layout::of(&[(ALICE.0, 1), (MINKOWSKI.0, cap)])?;
    let mut psi = StateVector::zero(layout);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let g = 1.0 - e * e;
    // c_n = √((2n)!)/(2ⁿ n!) · e^{nα}
    let mut c = 1.0;
    let (mut norm0, mut norm1) = (0.0, 0.0);
    for n in 0..=n_max {
        if n > 0 {
            c *= ((2 * n - 1) as f64 / (2 * n) as f64).sqrt() * e;
        }
        let a0 = g.powf(0.25) * c;
        let a1 = g.powf(0.75) * c * ((2 * n + 1) as f64).sqrt();
        norm0 += a0 * a0;
        norm1 += a1 * a1;
        psi.add(&[0, 2 * n], h * a0)?;
        psi.add(&[1, 2 * n + 1], h * a1)?;
    }
    let deficit = 1.0 - 0.5 * (norm0 + norm1);
    if deficit > DEFAULT_TAIL_TOL {
        return Err(Error::TruncationUnreachable {
            n_max,
            deficit,
            tol: DEFAULT_TAIL_TOL,
        });
    }
    let rho = density_from_state(&psi)?;
    Ok(negativity(&rho, ALICE)?.negativity)
}

/// Partial sum (`n < n_terms`) of the single-mode mutual information
/// series for `ρ_{A,I}`, in bits.
pub fn mutual_info_sma(p: ModeParams, n_terms: usize) -> Result<f64> {
    let t = t_eff(p)?;
    let u = t * t;
    if u == 0.0 {
        return Ok(2.0);
    }
    let v = 1.0 - u;
    let xlog = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    let mut sum = 0.0;
    let mut un = 1.0;
    for n in 0..n_terms {
        let nf = n as f64;
        // uⁿ·f log f with f = 1 − n + n/u, folded to avoid 1/u
        let first = if n == 0 {
            0.0
        } else {
            let f = 1.0 - nf + nf / u;
            un / u * (u * (1.0 - nf) + nf) * f.log2()
        };
        let second = un * xlog(nf + 2.0 - (nf + 1.0) * u);
        sum += first - second;
        un *= u;
        if un < 1e-300 {
            break;
        }
    }
    Ok(1.0 - 0.5 * u.log2() - 0.5 * v * sum)
}

/// Mutual information series summed with an adaptive number of terms.
pub fn mutual_info_sma_auto(p: ModeParams, tail_tol: f64) -> Result<f64> {
    let t = t_eff(p)?;
    let u = t * t;
    let n = if u == 0.0 {
        1
    } else {
        // terms decay like n log n · uⁿ; pad the geometric estimate
        ((tail_tol.ln() / u.ln()) * 1.5 + 64.0) as usize
    };
    mutual_info_sma(p, n)
}

/// `I(A:I)` and `I(A:IV)` from the tripartite pure state, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInfo {
    pub a_i: f64,
    pub a_iv: f64,
    pub n_max: usize,
    pub tail_deficit: f64,
}

pub fn mutual_info_numeric(p: ModeParams, w: UnruhWeight, trunc: Truncation) -> Result<MutualInfo> {
    let t = t_eff(p)?;
    let n_max = trunc.resolve(t);
    let psi = tripartite_state(p, w, n_max)?;
    let s = |keep: &[SubsystemId]| -> Result<f64> {
        let rho = psi.state.reduced_density(keep)?;
        von_neumann_entropy(&rho)
    };
    let s_a = s(&[ALICE])?;
    let s_i = s(&[REGION_I])?;
    let s_iv = s(&[REGION_IV])?;
    let s_ai = s(&[ALICE, REGION_I])?;
    let s_aiv = s(&[ALICE, REGION_IV])?;
    Ok(MutualInfo {
        a_i: s_a + s_i - s_ai,
        a_iv: s_a + s_iv - s_aiv,
        n_max,
        tail_deficit: psi.deficit,
    })
}

/// `S(A) + S(I) − S(A,I)` of a given `ρ_{A,I}`.
pub fn mutual_info_of(rho: &DensityMatrix) -> Result<f64> {
    let ra = crate::linalg::partial_trace(rho, &[ALICE])?;
    let ri = crate::linalg::partial_trace(rho, &[REGION_I])?;
    let joint = symmetric_eigenvalues(rho.matrix())?;
    Ok(von_neumann_entropy(&ra)? + von_neumann_entropy(&ri)? - entropy_of_spectrum(&joint.values)?)
}
