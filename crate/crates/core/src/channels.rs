//! Quantum and classical capacities of the Unruh (bosonic) and Grassmann
//! (fermionic) channels for a maximally mixed qudit input, in bits.

use std::fmt;

use crate::bosonic::Truncated;
use crate::error::{domain, Error, Result};
use crate::linalg::{Layout, StateVector};
use crate::params::{boson_squeeze, critical_point, fermion_squeeze, Alpha, ModeParams, Scale};

pub const DEFAULT_SERIES_TOL: f64 = 1e-12;
/// Series terms below this are treated as negligible once the tail bound
/// also meets the tolerance.
pub const TERM_TOL: f64 = 1e-15;
pub const MAX_SERIES_TERMS: usize = 10_000_000;

pub const ZERO_SEARCH_LO: f64 = 1e-6;
pub const ZERO_SEARCH_HI: f64 = 50.0;
pub const ZERO_SEARCH_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityKind {
    QuantumUnruh,
    QuantumGrassmann,
    ClassicalGrassmann,
}

impl fmt::Display for CapacityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CapacityKind::QuantumUnruh => "quantum_unruh",
            CapacityKind::QuantumGrassmann => "quantum_grassmann",
            CapacityKind::ClassicalGrassmann => "classical_grassmann",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult {
    /// `max(raw_value, 0)`.
    pub value: f64,
    pub raw_value: f64,
    pub d: usize,
    pub terms_used: usize,
    /// Bound on the neglected series tail; 0 for finite sums.
    pub tail_bound: f64,
    pub kind: CapacityKind,
}

impl CapacityResult {
    fn finite(raw: f64, d: usize, terms: usize, kind: CapacityKind) -> Self {
        CapacityResult {
            value: raw.max(0.0),
            raw_value: raw,
            d,
            terms_used: terms,
            tail_bound: 0.0,
            kind,
        }
    }
}

/// Effective squeezing argument and the normalisation it comes with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParam {
    pub t_eff: f64,
    pub prefactor: f64,
}

/// `t = (tanh r + e^α)/(1 + e^α tanh r)`, prefactor
/// `(1 − e^{2α})/(cosh r + e^α sinh r)²`.
pub fn unruh_channel_param(p: ModeParams) -> Result<ChannelParam> {
    let sq = boson_squeeze(p)?;
    let e = p.alpha.exp();
    let (ch, sh) = (sq.r.cosh(), sq.r.sinh());
    Ok(ChannelParam {
        t_eff: sq.t_eff,
        prefactor: (1.0 - e * e) / (ch + e * sh).powi(2),
    })
}

/// `t = s/c`, prefactor `c² = Ñ²(cos r̃ − e^α sin r̃)²`.
pub fn grassmann_channel_param(p: ModeParams) -> Result<ChannelParam> {
    let f = fermion_squeeze(p)?;
    Ok(ChannelParam {
        t_eff: f.t_eff,
        prefactor: f.c * f.c,
    })
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return domain(format!("qudit dimension must be at least 2, got {d}"));
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Q(U_d) = (1−t²)^{d+1}/d · Σ_{k≥1} k C(d+k−1, k) log₂((d+k−1)/k) t^{2(k−1)}`.
///
/// Summation stops once a term drops below `TERM_TOL` and the geometric
/// majorant of the tail, with ratio `t²(1+1/k)^d`, is below `series_tol`.
pub fn unruh_quantum_capacity(p: ModeParams, d: usize, series_tol: f64) -> Result<CapacityResult> {
    check_d(d)?;
    let kind = CapacityKind::QuantumUnruh;
    if p.scale == Scale::InfiniteCurvature {
        return Ok(CapacityResult::finite(0.0, d, 0, kind));
    }
    let t = unruh_channel_param(p)?.t_eff;
    let u = t * t;
    if u >= 1.0 {
        return Err(Error::SeriesDivergence(format!("t_eff² = {u} is not below 1")));
    }
    let df = d as f64;
    let pre = (1.0 - u).powi(d as i32 + 1) / df;
    let mut sum = 0.0;
    let mut binom = 1.0; // C(d+k−1, k) at k = 0
    let mut uk = 1.0; // u^{k−1}
    for k in 1..=MAX_SERIES_TERMS {
        let kf = k as f64;
        binom *= (df + kf - 1.0) / kf;
        let term = pre * kf * binom * ((df + kf - 1.0) / kf).log2() * uk;
        sum += term;
        let ratio = u * (1.0 + 1.0 / kf).powi(d as i32);
        if ratio < 1.0 {
            let tail = term * ratio / (1.0 - ratio);
            if (term < TERM_TOL || u == 0.0) && tail < series_tol {
                return Ok(CapacityResult {
                    value: sum.max(0.0),
                    raw_value: sum,
                    d,
                    terms_used: k,
                    tail_bound: tail,
                    kind,
                });
            }
        }
        uk *= u;
    }
    Err(Error::SeriesDivergence(format!(
        "Q(U_{d}) not converged after {MAX_SERIES_TERMS} terms"
    )))
}

/// `Q(G_d) = c^{2(d−1)}/d · Σ_k k C(d,k) log₂k [t^{2(d−k)} − t^{2(k−1)}]`,
/// evaluated as `c^{2(k−1)}s^{2(d−k)} − c^{2(d−k)}s^{2(k−1)}` so it stays
/// finite for any `t`. Negative below the critical point; the public value
/// is clamped at zero.
pub fn grassmann_quantum_capacity(p: ModeParams, d: usize) -> Result<CapacityResult> {
    check_d(d)?;
    let f = fermion_squeeze(p)?;
    let (c2, s2) = (f.c * f.c, f.s * f.s);
    let mut sum = 0.0;
    for k in 2..=d {
        let bracket = c2.powi(k as i32 - 1) * s2.powi((d - k) as i32)
            - c2.powi((d - k) as i32) * s2.powi(k as i32 - 1);
        sum += k as f64 * binomial(d, k) * (k as f64).log2() * bracket;
    }
    Ok(CapacityResult::finite(sum / d as f64, d, d, CapacityKind::QuantumGrassmann))
}

/// `C(G_d) = log₂d − c^{2(d−1)} Σ_k C(d−1,k−1) t^{2(k−1)} log₂k`.
pub fn grassmann_classical_capacity(p: ModeParams, d: usize) -> Result<CapacityResult> {
    check_d(d)?;
    let f = fermion_squeeze(p)?;
    let (c2, s2) = (f.c * f.c, f.s * f.s);
    let mut sum = 0.0;
    for k in 2..=d {
        sum += binomial(d - 1, k - 1)
            * c2.powi((d - k) as i32)
            * s2.powi(k as i32 - 1)
            * (k as f64).log2();
    }
    let raw = (d as f64).log2() - sum;
    Ok(CapacityResult::finite(raw, d, d, CapacityKind::ClassicalGrassmann))
}

/// Root of the unclamped `Q(G_2)` in `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityZero {
    /// `0` for Bunch–Davies, where the root sits at infinite curvature.
    pub x: f64,
    pub r_tilde: f64,
    pub iterations: usize,
}

impl CapacityZero {
    /// `H/|k| = π/x`.
    pub fn hubble_over_k(&self) -> f64 {
        std::f64::consts::PI / self.x
    }
}

/// Bisection on `x ∈ [1e−6, 50]` for the sign change of the unclamped
/// two-dimensional Grassmann quantum capacity.
pub fn quantum_capacity_zero(alpha: Alpha) -> Result<CapacityZero> {
    if alpha.is_bunch_davies() {
        return Ok(CapacityZero {
            x: 0.0,
            r_tilde: std::f64::consts::FRAC_PI_4,
            iterations: 0,
        });
    }
    let q = |x: f64| -> Result<f64> {
        Ok(grassmann_quantum_capacity(ModeParams::new(alpha, Scale::from_x(x)?), 2)?.raw_value)
    };
    let (mut lo, mut hi) = (ZERO_SEARCH_LO, ZERO_SEARCH_HI);
    let (f_lo, f_hi) = (q(lo)?, q(hi)?);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return domain(format!(
            "no sign change of Q(G_2) on [{lo}, {hi}] for alpha = {alpha}"
        ));
    }
    let mut iterations = 0;
    while iterations < ZERO_SEARCH_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let f = q(mid)?;
        if f == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok(CapacityZero {
        x,
        r_tilde: (-x).exp().atan(),
        iterations,
    })
}

/// Absolute gap between the bisection root and the closed-form critical
/// point; `None` for Bunch–Davies.
pub fn zero_vs_critical(alpha: Alpha) -> Result<Option<(CapacityZero, f64)>> {
    let z = quantum_capacity_zero(alpha)?;
    Ok(critical_point(alpha).map(|cp| (z, (z.x - cp.x_c).abs())))
}

/// `U|n⟩_A|0⟩_C = Σ_m (1−t²)^{(n+1)/2} √C(n+m, n) t^m |n+m⟩_A|m⟩_C`,
/// `m ≤ n_max`.
pub fn unruh_state_action(p: ModeParams, n: usize, n_max: usize) -> Result<Truncated> {
    let t = unruh_channel_param(p)?.t_eff;
    if t >= 1.0 {
        return domain("Unruh channel needs t_eff < 1");
    }
    let layout = Layout::of(&[("A", n + n_max), ("C", n_max)])?;
    let mut psi = StateVector::zero(layout);
    let pre = (1.0 - t * t).powf((n as f64 + 1.0) / 2.0);
    let mut tm = 1.0;
    for m in 0..=n_max {
        psi.add(&[n + m, m], pre * binomial(n + m, n).sqrt() * tm)?;
        tm *= t;
    }
    let deficit = (1.0 - psi.norm_sqr()).max(0.0);
    Ok(Truncated { state: psi, deficit })
}

const RAIL_IDS_A: [&str; 3] = ["A1", "A2", "A3"];
const RAIL_IDS_C: [&str; 3] = ["C1", "C2", "C3"];

fn rail_layout(d: usize) -> Result<Layout> {
    if !(1..=3).contains(&d) {
        return domain(format!("multi-rail states are available for d in 1..=3, got {d}"));
    }
    let mut f: Vec<(&'static str, usize)> = RAIL_IDS_A[..d].iter().map(|&id| (id, 1)).collect();
    f.extend(RAIL_IDS_C[..d].iter().map(|&id| (id, 1)));
    Layout::of(&f)
}

/// Sum over occupied-rail subsets `S` of rails `0..d` except `skip`:
/// `(1+t²)^{−m/2} (−1)^{k(k−1)/2} t^k |1_S⟩_A |1_S⟩_C`, `k = |S|`,
/// `m` the number of rails summed over, basis order `A1..Ad C1..Cd`.
fn grassmann_subsets(d: usize, t: f64, skip: Option<usize>) -> Vec<(Vec<usize>, f64)> {
    let rails: Vec<usize> = (0..d).filter(|&i| Some(i) != skip).collect();
    let norm = (1.0 + t * t).powf(-(rails.len() as f64) / 2.0);
    let mut out = Vec::new();
    for mask in 0u32..(1 << rails.len()) {
        let mut occ = vec![0usize; 2 * d];
        let mut k = 0usize;
        for (b, &r) in rails.iter().enumerate() {
            if mask & (1 << b) != 0 {
                occ[r] = 1;
                occ[d + r] = 1;
                k += 1;
            }
        }
        let sign = if (k * k.saturating_sub(1) / 2) % 2 == 1 { -1.0 } else { 1.0 };
        out.push((occ, norm * sign * t.powi(k as i32)));
    }
    out
}

/// Grassmann-channel unitary acting on `d` empty rails.
pub fn grassmann_state_action(p: ModeParams, d: usize) -> Result<StateVector> {
    let layout = rail_layout(d)?;
    let t = grassmann_channel_param(p)?.t_eff;
    let mut psi = StateVector::zero(layout);
    for (occ, amp) in grassmann_subsets(d, t, None) {
        psi.add(&occ, amp)?;
    }
    Ok(psi)
}

/// Output for the input excitation on rail `i`: `a†_{A_i}` applied to the
/// vacuum action on the remaining rails, with the Jordan–Wigner sign
/// `(−1)^{Σ_{j<i} n_{A_j}}`.
pub fn grassmann_rail_output(p: ModeParams, d: usize, i: usize) -> Result<StateVector> {
    let layout = rail_layout(d)?;
    if i >= d {
        return domain(format!("rail {i} out of range for d = {d}"));
    }
    let t = grassmann_channel_param(p)?.t_eff;
    let mut psi = StateVector::zero(layout);
    for (mut occ, amp) in grassmann_subsets(d, t, Some(i)) {
        let before: usize = occ[..i].iter().sum();
        occ[i] = 1;
        let sign = if before % 2 == 1 { -1.0 } else { 1.0 };
        psi.add(&occ, sign * amp)?;
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(alpha: f64, x: f64) -> ModeParams {
        ModeParams::from_values(alpha, x).unwrap()
    }

    #[test]
    fn flat_bunch_davies_capacities() {
        let p = ModeParams::new(Alpha::BunchDavies, Scale::Flat);
        let q = unruh_quantum_capacity(p, 2, 1e-12).unwrap();
        assert_eq!(q.value, 1.0);
        assert_eq!(q.terms_used, 1);
        assert_eq!(grassmann_quantum_capacity(p, 2).unwrap().value, 1.0);
        assert_eq!(grassmann_classical_capacity(p, 2).unwrap().value, 1.0);
        for d in 3..6 {
            let q = unruh_quantum_capacity(p, d, 1e-12).unwrap().value;
            assert!((q - (d as f64).log2()).abs() < 1e-14);
        }
    }

    #[test]
    fn two_dimensional_closed_forms() {
        for (a, x) in [(-1.0, 0.3), (-2.0, 1.0), (-0.5, 3.0)] {
            let p = mp(a, x);
            let f = fermion_squeeze(p).unwrap();
            let q = grassmann_quantum_capacity(p, 2).unwrap();
            assert!((q.raw_value - f.c * f.c * (1.0 - f.t_eff * f.t_eff)).abs() < 1e-14);
            let c = grassmann_classical_capacity(p, 2).unwrap();
            assert!((c.value - f.c * f.c).abs() < 1e-14);
        }
    }

    #[test]
    fn unruh_prefactor_is_one_minus_t_squared() {
        for (a, x) in [(-1.0, 0.3), (-4.0, 2.0)] {
            let cp = unruh_channel_param(mp(a, x)).unwrap();
            assert!((cp.prefactor - (1.0 - cp.t_eff * cp.t_eff)).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_small_dimension() {
        let p = mp(-1.0, 1.0);
        assert!(grassmann_quantum_capacity(p, 1).is_err());
        assert!(unruh_quantum_capacity(p, 0, 1e-12).is_err());
        assert!(grassmann_state_action(p, 4).is_err());
    }

    #[test]
    fn bunch_davies_zero_sits_at_infinite_curvature() {
        let bd = quantum_capacity_zero(Alpha::BunchDavies).unwrap();
        assert_eq!(bd.x, 0.0);
        assert_eq!(bd.hubble_over_k(), f64::INFINITY);
    }
}
