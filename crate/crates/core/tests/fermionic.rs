use dsrqi_core::fermionic::*;
use dsrqi_core::linalg::symmetric_eigenvalues;
use dsrqi_core::params::{critical_point, fermion_squeeze, Alpha, ModeParams, Scale};

fn mp(alpha: f64, x: f64) -> ModeParams {
    ModeParams::from_values(alpha, x).unwrap()
}

fn at_critical(alpha: f64) -> ModeParams {
    let cp = critical_point(Alpha::new(alpha).unwrap()).unwrap();
    mp(alpha, cp.x_c)
}

const QS: [f64; 4] = [1.0, 0.9, 0.8, 0.7];

#[test]
fn kets_are_normalised() {
    for a in [f64::NEG_INFINITY, -6.0, -1.0, -0.1] {
        for x in [0.01, 0.5, 3.0, f64::INFINITY] {
            let p = mp(a, x);
            assert!((fermion_vacuum_state(p).unwrap().norm_sqr() - 1.0).abs() < 1e-14);
            let w = UnruhWeight::new(0.6).unwrap();
            assert!((fermion_one_particle_state(p, w).unwrap().norm_sqr() - 1.0).abs() < 1e-14);
        }
    }
}

#[test]
fn infinite_curvature_vacuum_pattern() {
    let p = ModeParams::new(Alpha::BunchDavies, Scale::InfiniteCurvature);
    let v = fermion_vacuum_state(p).unwrap();
    for (occ, expected) in [([0, 0, 0, 0], 0.5), ([0, 0, 1, 1], -0.5), ([1, 1, 0, 0], 0.5), ([1, 1, 1, 1], -0.5)] {
        assert!((v.amplitude(&occ) - expected).abs() < 1e-15);
    }
}

#[test]
fn closed_form_matches_trace() {
    for a in [-6.0, -3.0, -1.5] {
        for x in [0.5, 1.0, 2.0] {
            for q in [1.0, 0.8] {
                let p = mp(a, x);
                let w = UnruhWeight::new(q).unwrap();
                let closed = fermion_alice_rob_density(p, w).unwrap();
                let traced = fermion_alice_rob_density_by_trace(p, w, Ordering::Physical).unwrap();
                let diff = closed.rho.matrix().max_abs_diff(traced.matrix());
                assert!(diff < 1e-13, "a={a} x={x} q={q}: {diff:e}");
                assert!((closed.rho.trace() - 1.0).abs() < 1e-14);
                let ev = symmetric_eigenvalues(closed.rho.matrix()).unwrap();
                assert!(ev.values[0] > -1e-14);
            }
        }
    }
}

#[test]
fn notation_ordering_gives_a_different_state() {
    let p = mp(-1.5, 1.0);
    let w = UnruhWeight::new(0.8).unwrap();
    let phys = fermion_negativity_with_ordering(p, w, Ordering::Physical).unwrap();
    let other = fermion_negativity_with_ordering(p, w, Ordering::Notation).unwrap();
    assert!((phys.negativity - fermion_negativity(p, w).unwrap().negativity).abs() < 1e-14);
    assert!((phys.negativity - other.negativity).abs() > 1e-3);
}

#[test]
fn flat_bunch_davies_is_bell_state() {
    let p = ModeParams::new(Alpha::BunchDavies, Scale::Flat);
    let r = fermion_negativity(p, UnruhWeight::sma()).unwrap();
    assert!((r.negativity - 0.5).abs() < 1e-14);
    assert!((fermion_mutual_info(p).unwrap() - 2.0).abs() < 1e-14);
}

#[test]
fn sma_negativity_closed_form() {
    for a in [-6.0, -1.5, -0.5] {
        for x in [0.1, 0.5, 1.0, 4.0] {
            let p = mp(a, x);
            let numeric = fermion_negativity(p, UnruhWeight::sma()).unwrap();
            let analytic = fermion_negativity_sma(p).unwrap();
            assert!((numeric.negativity - analytic).abs() < 1e-13);
            assert!((numeric.negativity - numeric.negativity_from_trace_norm()).abs() < 1e-10);
        }
    }
    let p = ModeParams::new(Alpha::BunchDavies, Scale::InfiniteCurvature);
    assert_eq!(fermion_negativity_sma(p).unwrap(), 0.25);
}

#[test]
fn curves_meet_at_critical_point() {
    for a in [-0.5, -1.0, -1.5, -2.0, -3.0, -6.0] {
        let p = at_critical(a);
        assert!((fermion_squeeze(p).unwrap().t_eff - 1.0).abs() < 1e-12);
        for q in QS {
            let n = fermion_negativity(p, UnruhWeight::new(q).unwrap()).unwrap().negativity;
            assert!((n - 0.25).abs() < 1e-6, "a={a} q={q}: {n}");
        }
    }
}

#[test]
fn ordering_in_unruh_weight_reverses_at_critical_point() {
    for a in [-6.0, -1.5] {
        let xc = critical_point(Alpha::new(a).unwrap()).unwrap().x_c;
        let vals = |x: f64| -> Vec<f64> {
            QS.iter()
                .map(|&q| fermion_negativity(mp(a, x), UnruhWeight::new(q).unwrap()).unwrap().negativity)
                .collect()
        };
        let above = vals(1.5 * xc);
        assert!(above.windows(2).all(|w| w[0] > w[1]), "{above:?}");
        let below = vals(0.5 * xc);
        assert!(below.windows(2).all(|w| w[0] < w[1]), "{below:?}");
    }
}

#[test]
fn asymptotic_negativity_matches_reconstruction() {
    for a in [-0.25, -1.0, -4.0] {
        let alpha = Alpha::new(a).unwrap();
        let closed = fermion_asymptotic_negativity(alpha);
        let numeric = fermion_asymptotic_negativity_numeric(alpha).unwrap();
        assert!((closed - numeric).abs() < 1e-12);
        assert!((fermion_asymptotic_density(alpha).unwrap().trace() - 1.0).abs() < 1e-15);
    }
    assert_eq!(fermion_asymptotic_negativity(Alpha::BunchDavies), 0.5);
    assert!((fermion_asymptotic_negativity(Alpha::new(-1e-12).unwrap()) - 0.25).abs() < 1e-11);
    // same limit as the Alice–I state at x → ∞ with q_R = 1
    let flat = fermion_negativity(ModeParams::new(Alpha::new(-1.0).unwrap(), Scale::Flat), UnruhWeight::sma())
        .unwrap()
        .negativity;
    assert!((flat - fermion_asymptotic_negativity(Alpha::new(-1.0).unwrap())).abs() < 1e-13);
}

#[test]
fn mutual_information_closed_form_and_conservation() {
    for a in [-6.0, -3.0, -1.5] {
        for x in [0.5, 1.0, 2.0] {
            let p = mp(a, x);
            let sma = fermion_mutual_info_numeric(p, UnruhWeight::sma()).unwrap();
            assert!((fermion_mutual_info(p).unwrap() - sma.a_i).abs() < 1e-8);
            for q in [1.0, 0.8] {
                let m = fermion_mutual_info_numeric(p, UnruhWeight::new(q).unwrap()).unwrap();
                assert!((m.a_i + m.a_iv - 2.0).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn chsh_numeric_matches_closed_form() {
    for a in [-6.0, -2.0, -1.5, -1.0, -0.5] {
        for x in [0.05, 0.3, 1.0, 3.0] {
            for q in QS {
                let r = chsh_max(mp(a, x), UnruhWeight::new(q).unwrap()).unwrap();
                assert!((r.b_max - r.b_max_closed_form).abs() < 1e-10, "a={a} x={x} q={q}");
                assert!(r.b_max <= 2.0 * std::f64::consts::SQRT_2 + 1e-12);
                assert!(r.mu1 >= r.mu2);
            }
        }
    }
}

#[test]
fn chsh_boundary_at_critical_point() {
    for a in [-0.5, -1.0, -1.5, -2.0] {
        let xc = critical_point(Alpha::new(a).unwrap()).unwrap().x_c;
        let w = UnruhWeight::sma();
        let r = chsh_max(mp(a, xc), w).unwrap();
        assert!((r.b_max - 2.0).abs() < 1e-10, "{}", r.b_max);
        assert!(chsh_max(mp(a, 0.8 * xc), w).unwrap().b_max < 2.0);
        assert!(chsh_max(mp(a, 1.2 * xc), w).unwrap().violates());
    }
    for x in [0.1, 1.0, 5.0] {
        assert!(chsh_max(mp(-1.0, x), UnruhWeight::new(0.5).unwrap()).unwrap().b_max < 2.0);
    }
}

#[test]
fn chsh_monotone_in_x() {
    for a in [-6.0, -1.0] {
        let mut prev = f64::INFINITY;
        for i in 0..30 {
            let x = 5.0 * 0.85f64.powi(i);
            let b = chsh_max(mp(a, x), UnruhWeight::sma()).unwrap().b_max;
            assert!(b < prev);
            prev = b;
        }
    }
}
