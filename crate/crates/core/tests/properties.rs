use dsrqi_core::bosonic::{negativity_numeric, Truncation, UnruhWeight};
use dsrqi_core::linalg::*;
use dsrqi_core::params::*;
use proptest::prelude::*;

fn symmetric(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let x = v[i * n + j];
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
        m
    })
}

fn diagonal_density(id: &'static str, weights: Vec<f64>) -> DensityMatrix {
    let total: f64 = weights.iter().sum();
    let mut m = Matrix::zeros(weights.len());
    for (i, w) in weights.iter().enumerate() {
        m[(i, i)] = w / total;
    }
    DensityMatrix::new(Layout::of(&[(id, weights.len() - 1)]).unwrap(), m).unwrap()
}

fn random_state() -> impl Strategy<Value = StateVector> {
    prop::collection::vec(-1.0f64..1.0, 2 * 3 * 2).prop_filter_map("nonzero", |v| {
        let layout = Layout::of(&[("a", 1), ("b", 2), ("c", 1)]).unwrap();
        let mut s = StateVector::zero(layout.clone());
        for (i, x) in v.iter().enumerate() {
            s.add(&layout.occupations(i), *x).unwrap();
        }
        let n = s.norm();
        if n < 1e-3 {
            return None;
        }
        s.scale(1.0 / n);
        Some(s)
    })
}

proptest! {
    #[test]
    fn boson_squeeze_invariants(alpha in -20.0f64..-1e-3, x in 1e-3f64..40.0) {
        let p = ModeParams::from_values(alpha, x).unwrap();
        let b = boson_squeeze(p).unwrap();
        prop_assert!(b.t_eff >= 0.0 && b.t_eff < 1.0);
        prop_assert!(b.delta >= 1.0);
        prop_assert!((b.r.tanh() - (-x).exp()).abs() < 1e-14);
    }

    #[test]
    fn fermion_squeeze_invariants(alpha in -20.0f64..-1e-3, x in 1e-3f64..40.0) {
        let p = ModeParams::from_values(alpha, x).unwrap();
        let f = fermion_squeeze(p).unwrap();
        prop_assert!((f.c * f.c + f.s * f.s - 1.0).abs() < 1e-14);
        prop_assert!((f.r_tilde.tan() - (-x).exp()).abs() < 1e-14);
        prop_assert!(f.c > 0.0);
        prop_assert!((f.t_eff - f.s / f.c).abs() < 1e-12 * f.t_eff.max(1.0));
    }

    #[test]
    fn occupation_forms_agree(alpha in -12.0f64..-0.05, x in 0.05f64..20.0) {
        let p = ModeParams::from_values(alpha, x).unwrap();
        let (a, b) = (occupation_boson(p).unwrap(), occupation_boson_thermal_form(p).unwrap());
        prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1e-300));
        let (a, b) = (occupation_fermion(p).unwrap(), occupation_fermion_thermal_form(p).unwrap());
        prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1e-300));
    }

    #[test]
    fn eigen_trace_identities(m in symmetric(8)) {
        let ev = symmetric_eigenvalues(&m).unwrap().values;
        let sum: f64 = ev.iter().sum();
        let sq: f64 = ev.iter().map(|l| l * l).sum();
        prop_assert!((sum - m.trace()).abs() < 1e-11);
        prop_assert!((sq - m.frobenius_norm().powi(2)).abs() < 1e-11);
        prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn jacobi_and_ql_agree(m in symmetric(20)) {
        let a = jacobi_eigenvalues(&m).unwrap().values;
        let b = tridiagonal_ql_eigenvalues(&m).unwrap().values;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-11);
        }
    }

    #[test]
    fn product_states_have_zero_negativity(
        wa in prop::collection::vec(0.01f64..1.0, 2..4),
        wb in prop::collection::vec(0.01f64..1.0, 2..5),
    ) {
        let a = diagonal_density("a", wa);
        let b = diagonal_density("b", wb);
        let layout = a.layout().concat(b.layout()).unwrap();
        let (na, nb) = (a.dim(), b.dim());
        let mut m = Matrix::zeros(na * nb);
        for i in 0..na {
            for j in 0..nb {
                m[(i * nb + j, i * nb + j)] = a.matrix()[(i, i)] * b.matrix()[(j, j)];
            }
        }
        let rho = DensityMatrix::new(layout, m).unwrap();
        prop_assert_eq!(negativity(&rho, SubsystemId("a")).unwrap().negativity, 0.0);
    }

    #[test]
    fn partial_transpose_properties(psi in random_state()) {
        let rho = density_from_state(&psi).unwrap();
        let pt = partial_transpose(&rho, SubsystemId("b")).unwrap();
        prop_assert!((pt.trace() - rho.trace()).abs() < 1e-14);
        prop_assert!(pt.matrix().max_asymmetry() < 1e-15);
        let back = partial_transpose(&pt, SubsystemId("b")).unwrap();
        prop_assert!(back.matrix().max_abs_diff(rho.matrix()) == 0.0);
        let s = spectrum(pt.matrix()).unwrap();
        prop_assert!((s.negativity - s.negativity_from_trace_norm()).abs() < 1e-10);
    }

    #[test]
    fn partial_trace_composes(psi in random_state()) {
        let rho = density_from_state(&psi).unwrap();
        let ab = partial_trace(&rho, &[SubsystemId("a"), SubsystemId("b")]).unwrap();
        let a_two_step = partial_trace(&ab, &[SubsystemId("a")]).unwrap();
        let a_direct = partial_trace(&rho, &[SubsystemId("a")]).unwrap();
        prop_assert!(a_two_step.matrix().max_abs_diff(a_direct.matrix()) < 1e-15);
        prop_assert!((a_direct.trace() - 1.0).abs() < 1e-14);
        let fast = psi.reduced_density(&[SubsystemId("a"), SubsystemId("c")]).unwrap();
        let slow = partial_trace(&rho, &[SubsystemId("a"), SubsystemId("c")]).unwrap();
        prop_assert!(fast.matrix().max_abs_diff(slow.matrix()) < 1e-15);
    }

    #[test]
    fn tensor_norm_is_multiplicative(psi in random_state(), x in 0.1f64..2.0) {
        let mut other = StateVector::zero(Layout::of(&[("d", 2)]).unwrap());
        other.add(&[0], x).unwrap();
        other.add(&[2], 1.0).unwrap();
        let t = tensor(&psi, &other).unwrap();
        prop_assert!((t.norm() - psi.norm() * other.norm()).abs() < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn boson_negativity_in_range(alpha in -8.0f64..-0.5, x in 0.3f64..6.0, q in 0.5f64..=1.0) {
        let p = ModeParams::from_values(alpha, x).unwrap();
        let n = negativity_numeric(p, UnruhWeight::new(q).unwrap(), Truncation::default()).unwrap();
        prop_assert!(n.value() >= 0.0 && n.value() <= 0.5);
    }
}
