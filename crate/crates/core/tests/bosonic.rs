use dsrqi_core::bosonic::*;
use dsrqi_core::linalg::{density_from_state, partial_trace, partial_transpose, spectrum};
use dsrqi_core::params::{boson_squeeze, Alpha, ModeParams, Scale};

fn mp(alpha: f64, x: f64) -> ModeParams {
    ModeParams::from_values(alpha, x).unwrap()
}

const GRID_ALPHA: [f64; 3] = [-6.0, -3.0, -1.5];
const GRID_X: [f64; 3] = [0.5, 1.0, 2.0];

#[test]
fn closed_form_matches_trace_of_tripartite_state() {
    for &a in &GRID_ALPHA {
        for &x in &GRID_X {
            for q in [1.0, 0.8] {
                let p = mp(a, x);
                let w = UnruhWeight::new(q).unwrap();
                let closed = alice_rob_density(p, w, Truncation::default()).unwrap();
                let traced = alice_rob_density_by_trace(p, w, closed.n_max).unwrap();
                assert_eq!(closed.rho.layout(), traced.layout());
                let diff = closed.rho.matrix().max_abs_diff(traced.matrix());
                assert!(diff < 1e-12, "alpha={a} x={x} q={q}: {diff:e}");
                let tr = closed.rho.trace();
                assert!((tr + closed.tail_deficit - 1.0).abs() < 1e-13);
            }
        }
    }
}

#[test]
fn sparse_trace_matches_dense_trace() {
    // small cutoff so the full tripartite density matrix stays small
    let p = mp(-1.5, 1.0);
    let w = UnruhWeight::new(0.7).unwrap();
    let psi = tripartite_state(p, w, 6).unwrap();
    let dense = partial_trace(&density_from_state(&psi.state).unwrap(), &[ALICE, REGION_I]).unwrap();
    let sparse = alice_rob_density_by_trace(p, w, 6).unwrap();
    assert!(dense.matrix().max_abs_diff(sparse.matrix()) < 1e-15);
    let closed = alice_rob_density_lenient(p, w, Truncation::fixed(6)).unwrap();
    assert!(dense.matrix().max_abs_diff(closed.rho.matrix()) < 1e-15);
}

#[test]
fn sma_series_matches_eigensolver() {
    for &a in &GRID_ALPHA {
        for &x in &GRID_X {
            let p = mp(a, x);
            let analytic = negativity_sma(p, 1e-14).unwrap();
            let numeric = negativity_numeric(p, UnruhWeight::sma(), Truncation::default())
                .unwrap()
                .value();
            assert!((analytic - numeric).abs() < 1e-6, "alpha={a} x={x}: {analytic} vs {numeric}");
        }
    }
}

#[test]
fn negativity_two_formulas_agree() {
    for q in [1.0, 0.9, 0.7] {
        let r = negativity_numeric(mp(-3.0, 0.7), UnruhWeight::new(q).unwrap(), Truncation::default()).unwrap();
        assert!((r.spectrum.negativity - r.spectrum.negativity_from_trace_norm()).abs() < 1e-10);
    }
}

#[test]
fn transpose_side_does_not_matter() {
    let ar = alice_rob_density(mp(-3.0, 1.0), UnruhWeight::new(0.8).unwrap(), Truncation::default()).unwrap();
    let a = spectrum(partial_transpose(&ar.rho, ALICE).unwrap().matrix()).unwrap();
    let b = spectrum(partial_transpose(&ar.rho, REGION_I).unwrap().matrix()).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn flat_bunch_davies_is_bell_state() {
    let p = ModeParams::new(Alpha::BunchDavies, Scale::Flat);
    let n = negativity_numeric(p, UnruhWeight::sma(), Truncation::fixed(64)).unwrap();
    assert!((n.value() - 0.5).abs() < 1e-12);
    assert!((mutual_info_sma(p, 10).unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn flat_bunch_davies_with_left_weight() {
    // the left excitation lands in region IV even without squeezing
    let p = ModeParams::new(Alpha::BunchDavies, Scale::Flat);
    for q in [0.9, 0.7] {
        let w = UnruhWeight::new(q).unwrap();
        let n = negativity_numeric(p, w, Truncation::default()).unwrap().value();
        let expected = 0.25 * ((w.q_l.powi(4) + 4.0 * q * q).sqrt() - w.q_l * w.q_l);
        assert!((n - expected).abs() < 1e-12, "{n} vs {expected}");
    }
}

#[test]
fn infinite_curvature_limit_is_zero() {
    let p = ModeParams::new(Alpha::BunchDavies, Scale::InfiniteCurvature);
    assert_eq!(negativity_numeric(p, UnruhWeight::sma(), Truncation::default()).unwrap().value(), 0.0);
    assert_eq!(negativity_sma(p, 1e-12).unwrap(), 0.0);
    // approach from finite x: the converged series is already tiny
    let near = negativity_sma(mp(f64::NEG_INFINITY, 1e-6), 1e-12).unwrap();
    assert!(near < 1e-6, "{near}");
    // decay is linear in x; the eigensolver follows it down to the cutoff
    let mut prev = f64::INFINITY;
    for x in [0.2, 0.1, 0.05] {
        let p = mp(f64::NEG_INFINITY, x);
        let r = negativity_numeric(p, UnruhWeight::sma(), Truncation::fixed(128)).unwrap();
        let series = negativity_sma(p, 1e-14).unwrap();
        assert!((r.value() - series).abs() < 10.0 * r.tail_deficit.max(1e-12), "x={x}");
        assert!(series < 0.7 * x && series < prev);
        prev = series;
    }
}

#[test]
fn negativity_bounded_and_monotone_in_x() {
    for a in [-6.0, -3.0] {
        for q in [1.0, 0.9, 0.8, 0.7] {
            let w = UnruhWeight::new(q).unwrap();
            let mut prev = f64::INFINITY;
            for i in 0..25 {
                let x = 4.0 * (0.9f64).powi(i);
                let n = negativity_numeric(mp(a, x), w, Truncation::default()).unwrap().value();
                assert!((0.0..=0.5).contains(&n));
                assert!(n <= prev + 1e-12, "a={a} q={q} x={x}");
                prev = n;
            }
        }
    }
}

#[test]
fn larger_unruh_weight_gives_more_negativity() {
    for a in [-6.0, -3.0] {
        for x in [0.5, 1.0, 3.0] {
            let vals: Vec<f64> = [1.0, 0.9, 0.8, 0.7]
                .iter()
                .map(|&q| {
                    negativity_numeric(mp(a, x), UnruhWeight::new(q).unwrap(), Truncation::default())
                        .unwrap()
                        .value()
                })
                .collect();
            assert!(vals.windows(2).all(|w| w[0] > w[1]), "{vals:?}");
        }
    }
}

#[test]
fn doubling_cutoff_is_stable() {
    let p = mp(-3.0, 1.0);
    let w = UnruhWeight::new(0.8).unwrap();
    let base = negativity_numeric(p, w, Truncation::default()).unwrap();
    let doubled = negativity_numeric(p, w, Truncation::fixed(2 * base.n_max)).unwrap();
    assert!((base.value() - doubled.value()).abs() < 1e-8);
}

#[test]
fn asymptotic_negativity_limits() {
    assert_eq!(asymptotic_negativity(Alpha::BunchDavies).unwrap(), 0.5);
    let near_zero = asymptotic_negativity(Alpha::new(-1e-6).unwrap()).unwrap();
    assert!(near_zero < 1e-5, "{near_zero}");
    // agrees with the eigensolver deep in the flat regime
    let a = -3.0;
    let limit = asymptotic_negativity(Alpha::new(a).unwrap()).unwrap();
    let far = negativity_numeric(mp(a, 40.0), UnruhWeight::sma(), Truncation::default())
        .unwrap()
        .value();
    assert!((limit - far).abs() < 1e-4);
    assert!((limit - 0.49753).abs() < 1e-5, "{limit}");
}

#[test]
fn squeezed_minkowski_state_is_maximally_entangled() {
    for a in [-3.0, -1.0] {
        let n = squeezed_minkowski_negativity(Alpha::new(a).unwrap(), 40).unwrap();
        assert!((n - 0.5).abs() < 1e-10, "{n}");
    }
    assert!(squeezed_minkowski_negativity(Alpha::new(-0.01).unwrap(), 20).is_err());
}

#[test]
fn mutual_information_series_matches_entropies() {
    for &a in &GRID_ALPHA {
        for &x in &GRID_X {
            let p = mp(a, x);
            let analytic = mutual_info_sma_auto(p, 1e-15).unwrap();
            let numeric = mutual_info_numeric(p, UnruhWeight::sma(), Truncation::default()).unwrap();
            assert!((analytic - numeric.a_i).abs() < 1e-6, "a={a} x={x}: {analytic} vs {}", numeric.a_i);
            let closed = alice_rob_density(p, UnruhWeight::sma(), Truncation::default()).unwrap();
            assert!((mutual_info_of(&closed.rho).unwrap() - numeric.a_i).abs() < 1e-8);
        }
    }
}

#[test]
fn mutual_information_is_conserved() {
    for &a in &GRID_ALPHA {
        for &x in &GRID_X {
            for q in [1.0, 0.8] {
                let m = mutual_info_numeric(mp(a, x), UnruhWeight::new(q).unwrap(), Truncation::default()).unwrap();
                assert!((m.a_i + m.a_iv - 2.0).abs() < 1e-8, "a={a} x={x} q={q}: {}", m.a_i + m.a_iv);
            }
        }
    }
}

#[test]
fn one_particle_norm_converges() {
    let p = mp(-2.0, 0.8);
    let t = boson_squeeze(p).unwrap().t_eff;
    for n_max in [5, 20, 60] {
        let s = one_particle_state(p, UnruhWeight::new(0.6).unwrap(), n_max).unwrap();
        // Σ (n+1) t^{2n} = (1−t²)^{−2}
        let partial: f64 = (0..=n_max).map(|n| (n + 1) as f64 * t.powi(2 * n as i32)).sum();
        let expected = partial * (1.0 - t * t).powi(2);
        assert!((s.state.norm_sqr() - expected).abs() < 1e-14);
        assert!((s.state.norm_sqr() + s.deficit - 1.0).abs() < 1e-13);
    }
}
