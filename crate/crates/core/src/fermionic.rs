//! Grassmann-scalar fermion modes: α-vacuum and one-particle states over
//! regions I and IV, the 8-dimensional Alice–Rob density matrix, and its
//! negativity, mutual information and CHSH violation.
//!
//! Each region carries a particle (`+`) and an antiparticle (`−`) mode with
//! occupation 0 or 1. Kets are built as products of the right- and
//! left-moving Unruh factors and then moved to the physical ordering, in
//! which every region-I operator stands left of every region-IV operator.

use crate::error::{domain, Result};
use crate::linalg::{
    negativity, partial_trace, symmetric_eigenvalues, von_neumann_entropy, DensityMatrix, Layout,
    Matrix, SpectrumResult, StateVector, SubsystemId,
};
use crate::params::{fermion_squeeze, Alpha, ModeParams};

pub use crate::bosonic::UnruhWeight;

pub const ALICE: SubsystemId = SubsystemId("A");
pub const I_PLUS: SubsystemId = SubsystemId("I+");
pub const I_MINUS: SubsystemId = SubsystemId("I-");
pub const IV_PLUS: SubsystemId = SubsystemId("IV+");
pub const IV_MINUS: SubsystemId = SubsystemId("IV-");

/// Operator ordering of the four Rob modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// `(I+, I−, IV−, IV+)`: region I first. The only ordering giving
    /// physically meaningful bipartite measures.
    Physical,
    /// `(I+, IV−, I−, IV+)`: the order in which the kets factorise.
    /// Non-physical; exposed to show ordering dependence.
    Notation,
}

fn notation_layout() -> Layout {
    Layout::of(&[(I_PLUS.0, 1), (IV_MINUS.0, 1), (I_MINUS.0, 1), (IV_PLUS.0, 1)]).expect("distinct ids")
}

fn physical_layout() -> Layout {
    Layout::of(&[(I_PLUS.0, 1), (I_MINUS.0, 1), (IV_MINUS.0, 1), (IV_PLUS.0, 1)]).expect("distinct ids")
}

/// `c²|0000⟩ − cs|0011⟩ + cs|1100⟩ − s²|1111⟩` in notation ordering.
pub fn fermion_vacuum_state(p: ModeParams) -> Result<StateVector> {
    let f = fermion_squeeze(p)?;
    let (c, s) = (f.c, f.s);
    let mut psi = StateVector::zero(notation_layout());
    psi.add(&[0, 0, 0, 0], c * c)?;
    psi.add(&[0, 0, 1, 1], -c * s)?;
    psi.add(&[1, 1, 0, 0], c * s)?;
    psi.add(&[1, 1, 1, 1], -s * s)?;
    Ok(psi)
}

/// `q_R(c|1000⟩ − s|1011⟩) + q_L(s|1101⟩ + c|0001⟩)` in notation ordering.
pub fn fermion_one_particle_state(p: ModeParams, w: UnruhWeight) -> Result<StateVector> {
    let f = fermion_squeeze(p)?;
    let (c, s) = (f.c, f.s);
    let mut psi = StateVector::zero(notation_layout());
    psi.add(&[1, 0, 0, 0], w.q_r * c)?;
    psi.add(&[1, 0, 1, 1], -w.q_r * s)?;
    psi.add(&[1, 1, 0, 1], w.q_l * s)?;
    psi.add(&[0, 0, 0, 1], w.q_l * c)?;
    Ok(psi)
}

/// Moves a notation-ordered ket to the physical ordering. Passing the
/// `I−` creator to the left of the `IV−` creator costs a sign when both
/// are occupied.
pub fn to_physical_ordering(psi: &StateVector) -> Result<StateVector> {
    if psi.layout() != &notation_layout() {
        return domain("expected a ket in notation ordering");
    }
    psi.relabel(physical_layout(), |o| {
        let sign = if o[1] == 1 && o[2] == 1 { -1.0 } else { 1.0 };
        (vec![o[0], o[2], o[1], o[3]], sign)
    })
}

/// `(|0⟩_A|0^α⟩ + |1⟩_A|1^α⟩)/√2` over Alice and the four Rob modes.
pub fn fermion_tripartite_state(p: ModeParams, w: UnruhWeight, ordering: Ordering) -> Result<StateVector> {
    let mut vac = fermion_vacuum_state(p)?;
    let mut one = fermion_one_particle_state(p, w)?;
    if ordering == Ordering::Physical {
        vac = to_physical_ordering(&vac)?;
        one = to_physical_ordering(&one)?;
    }
    let layout = Layout::of(&[(ALICE.0, 1)])?.concat(vac.layout())?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut psi = StateVector::zero(layout);
    for (a, part) in [(0usize, &vac), (1, &one)] {
        for (occ, amp) in part.iter() {
            let mut full = vec![a];
            full.extend_from_slice(occ);
            psi.add(&full, h * amp)?;
        }
    }
    Ok(psi)
}

/// Basis `|n⟩_A |m⟩_{I+} |p⟩_{I−}`, index `4n + 2m + p`.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionAliceRob {
    pub rho: DensityMatrix,
    pub params: ModeParams,
    pub weight: UnruhWeight,
}

fn alice_rob_layout() -> Layout {
    Layout::of(&[(ALICE.0, 1), (I_PLUS.0, 1), (I_MINUS.0, 1)]).expect("distinct ids")
}

/// Closed-form Alice–I density matrix.
pub fn fermion_alice_rob_density(p: ModeParams, w: UnruhWeight) -> Result<FermionAliceRob> {
    let f = fermion_squeeze(p)?;
    let (c, s) = (f.c, f.s);
    let (qr, ql) = (w.q_r, w.q_l);
    let (c2, s2) = (c * c, s * s);
    let mut m = Matrix::zeros(8);
    let diag = [
        (0b000, c2 * c2),
        (0b010, s2 * c2),
        (0b001, s2 * c2),
        (0b011, s2 * s2),
        (0b110, qr * qr * c2 + ql * ql * s2),
        (0b111, qr * qr * s2),
        (0b100, ql * ql * c2),
    ];
    for (i, v) in diag {
        m[(i, i)] = 0.5 * v;
    }
    let off = [
        (0b000, 0b110, qr * c2 * c),
        (0b001, 0b111, qr * s2 * c),
        (0b001, 0b100, -ql * c2 * s),
        (0b011, 0b110, ql * s2 * s),
        (0b111, 0b100, -qr * ql * s * c),
    ];
    for (i, j, v) in off {
        m[(i, j)] = 0.5 * v;
        m[(j, i)] = 0.5 * v;
    }
    Ok(FermionAliceRob {
        rho: DensityMatrix::new(alice_rob_layout(), m)?,
        params: p,
        weight: w,
    })
}

/// Alice–I density matrix obtained by tracing region IV out of the
/// tripartite ket built in the given ordering.
pub fn fermion_alice_rob_density_by_trace(
    p: ModeParams,
    w: UnruhWeight,
    ordering: Ordering,
) -> Result<DensityMatrix> {
    let rho = fermion_tripartite_state(p, w, ordering)?.reduced_density(&[ALICE, I_PLUS, I_MINUS])?;
    // reorder factors to (A, I+, I−) regardless of the source ordering
    if rho.layout() == &alice_rob_layout() {
        return Ok(rho);
    }
    let src = rho.layout().clone();
    let dst = alice_rob_layout();
    let mut m = Matrix::zeros(8);
    let remap = |i: usize| {
        let o = src.occupations(i);
        let get = |id: SubsystemId| o[src.position(id).expect("present")];
        dst.index(&[get(ALICE), get(I_PLUS), get(I_MINUS)])
    };
    for i in 0..8 {
        for j in 0..8 {
            m[(remap(i), remap(j))] = rho.matrix()[(i, j)];
        }
    }
    DensityMatrix::new(dst, m)
}

/// Negativity of the physical Alice–I state, transposing Alice.
pub fn fermion_negativity(p: ModeParams, w: UnruhWeight) -> Result<SpectrumResult> {
    negativity(&fermion_alice_rob_density(p, w)?.rho, ALICE)
}

/// Negativity computed in an arbitrary ordering.
pub fn fermion_negativity_with_ordering(
    p: ModeParams,
    w: UnruhWeight,
    ordering: Ordering,
) -> Result<SpectrumResult> {
    negativity(&fermion_alice_rob_density_by_trace(p, w, ordering)?, ALICE)
}

/// Single-mode negativity `½ (t² + 1)⁻¹`.
pub fn fermion_negativity_sma(p: ModeParams) -> Result<f64> {
    let t = fermion_squeeze(p)?.t_eff;
    Ok(0.5 / (t * t + 1.0))
}

/// Flat-space negativity `1/(2 + 2e^{2α})`.
pub fn fermion_asymptotic_negativity(alpha: Alpha) -> f64 {
    let e = alpha.exp();
    1.0 / (2.0 + 2.0 * e * e)
}

/// Flat-space Alice–Rob particle-sector state from the squeezed-vacuum
/// form `|0^α⟩ = (|0⁺0⁻⟩ + e^α|1⁺1⁻⟩)/√(1+e^{2α})`, `|1^α⟩ = |1⁺0⁻⟩`.
pub fn fermion_asymptotic_density(alpha: Alpha) -> Result<DensityMatrix> {
    let e = alpha.exp();
    let n = 1.0 / (1.0 + e * e).sqrt();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let layout = Layout::of(&[(ALICE.0, 1), (I_PLUS.0, 1), (I_MINUS.0, 1)])?;
    let mut psi = StateVector::zero(layout);
    psi.add(&[0, 0, 0], h * n)?;
    psi.add(&[0, 1, 1], h * n * e)?;
    psi.add(&[1, 1, 0], h)?;
    psi.reduced_density(&[ALICE, I_PLUS])
}

pub fn fermion_asymptotic_negativity_numeric(alpha: Alpha) -> Result<f64> {
    Ok(negativity(&fermion_asymptotic_density(alpha)?, ALICE)?.negativity)
}

/// Single-mode mutual information `I(A:I)` in closed form, in bits.
pub fn fermion_mutual_info(p: ModeParams) -> Result<f64> {
    let f = fermion_squeeze(p)?;
    let tau = f.t_eff * f.t_eff;
    let xlog = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    let bracket = xlog(tau + 2.0) - xlog(2.0 * tau + 1.0) + xlog(tau);
    Ok(1.0 + 0.5 * f.c * f.c * bracket)
}

/// `I(A:I)` and `I(A:IV)` from entropies of the tripartite pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermionMutualInfo {
    pub a_i: f64,
    pub a_iv: f64,
}

pub fn fermion_mutual_info_numeric(p: ModeParams, w: UnruhWeight) -> Result<FermionMutualInfo> {
    let psi = fermion_tripartite_state(p, w, Ordering::Physical)?;
    let s = |keep: &[SubsystemId]| von_neumann_entropy(&psi.reduced_density(keep)?);
    let s_a = s(&[ALICE])?;
    Ok(FermionMutualInfo {
        a_i: s_a + s(&[I_PLUS, I_MINUS])? - s(&[ALICE, I_PLUS, I_MINUS])?,
        a_iv: s_a + s(&[IV_MINUS, IV_PLUS])? - s(&[ALICE, IV_MINUS, IV_PLUS])?,
    })
}

/// Largest CHSH expectation over all measurement settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ChshResult {
    /// `t_ij = Tr[ρ σ_i ⊗ σ_j]`, `i, j ∈ {x, y, z}`.
    pub correlation: [[f64; 3]; 3],
    /// Two largest eigenvalues of `TᵀT`, `mu1 ≥ mu2`.
    pub mu1: f64,
    pub mu2: f64,
    pub b_max: f64,
    pub b_max_closed_form: f64,
}

impl ChshResult {
    pub fn violates(&self) -> bool {
        self.b_max > 2.0
    }
}

/// Entries of `T` pairing `σ_y` with `σ_x` or `σ_z` must vanish for a
/// real state; larger residues are reported as an error.
pub const CHSH_IMAGINARY_TOL: f64 = 1e-12;

/// Horodecki criterion on the particle sector: trace out `I−`, build the
/// correlation matrix, and take `2√(μ₁+μ₂)`.
pub fn chsh_max(p: ModeParams, w: UnruhWeight) -> Result<ChshResult> {
    let ar = fermion_alice_rob_density(p, w)?;
    let rho = partial_trace(&ar.rho, &[ALICE, I_PLUS])?;
    let rho = rho.matrix();
    // σ_y = i·J with J real antisymmetric
    let sx = [[0.0, 1.0], [1.0, 0.0]];
    let j = [[0.0, -1.0], [1.0, 0.0]];
    let sz = [[1.0, 0.0], [0.0, -1.0]];
    let kron_trace = |a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]| {
        let mut t = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                // Tr[ρ (a⊗b)] = Σ ρ_{rc} (a⊗b)_{cr}
                t += rho[(r, c)] * a[c / 2][r / 2] * b[c % 2][r % 2];
            }
        }
        t
    };
    let mut corr = [[0.0; 3]; 3];
    let mut imaginary: f64 = 0.0;
    for (i, a) in [sx, j, sz].iter().enumerate() {
        for (k, b) in [sx, j, sz].iter().enumerate() {
            let v = kron_trace(a, b);
            match (i == 1, k == 1) {
                (true, true) => corr[i][k] = -v,
                (false, false) => corr[i][k] = v,
                _ => imaginary = imaginary.max(v.abs()),
            }
        }
    }
    if imaginary > CHSH_IMAGINARY_TOL {
        return domain(format!("correlation matrix has imaginary part {imaginary:e}"));
    }
    let mut u = Matrix::zeros(3);
    for a in 0..3 {
        for b in 0..3 {
            u[(a, b)] = (0..3).map(|k| corr[k][a] * corr[k][b]).sum();
        }
    }
    let ev = symmetric_eigenvalues(&u)?.values;
    let (mu1, mu2) = (ev[2], ev[1]);
    let f = fermion_squeeze(p)?;
    Ok(ChshResult {
        correlation: corr,
        mu1,
        mu2,
        b_max: 2.0 * (mu1 + mu2).max(0.0).sqrt(),
        b_max_closed_form: 2.0 * std::f64::consts::SQRT_2 * w.q_r * f.c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Scale;

    #[test]
    fn flat_bunch_davies_kets() {
        let p = ModeParams::new(Alpha::BunchDavies, Scale::Flat);
        assert_eq!(fermion_vacuum_state(p).unwrap().amplitude(&[0, 0, 0, 0]), 1.0);
        let r = fermion_one_particle_state(p, UnruhWeight::sma()).unwrap();
        assert_eq!(r.amplitude(&[1, 0, 0, 0]), 1.0);
        let l = fermion_one_particle_state(p, UnruhWeight::new(0.0).unwrap()).unwrap();
        assert_eq!(l.amplitude(&[0, 0, 0, 1]), 1.0);
    }

    #[test]
    fn reordering_sign() {
        let p = ModeParams::from_values(-1.0, 0.7).unwrap();
        let v = fermion_vacuum_state(p).unwrap();
        let phys = to_physical_ordering(&v).unwrap();
        assert_eq!(phys.amplitude(&[1, 1, 1, 1]), -v.amplitude(&[1, 1, 1, 1]));
        assert_eq!(phys.amplitude(&[0, 1, 0, 1]), v.amplitude(&[0, 0, 1, 1]));
        assert!(to_physical_ordering(&phys).is_err());
    }

    #[test]
    fn tsirelson_bound_in_flat_space() {
        let p = ModeParams::new(Alpha::BunchDavies, Scale::Flat);
        let r = chsh_max(p, UnruhWeight::sma()).unwrap();
        assert!((r.b_max - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(r.violates());
    }
}
