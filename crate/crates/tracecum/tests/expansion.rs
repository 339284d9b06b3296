mod common;

use num_complex::Complex64;
use tracecum::expansion::{
    bruteforce_cumulant_oracle, exact_cumulant, exact_cumulant_gaussian, polynomial_cumulant, s_pi_eq, verify_bounds,
    BoundCase, Budget, DeterministicSet, EntryCumulantModel, PolynomialSpec, TraceWord,
};
use tracecum::partitions::{GroundSet, SetPartition};
use tracecum::randmat::{builtin_set, Ensemble, EnsembleTag};

fn rel_close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1e-12)
}

#[test]
fn expansion_matches_oracle_on_small_grid() {
    let b = Budget::default();
    for (label, w) in common::words(4, 3) {
        for (mname, model) in common::models() {
            for dname in common::DETS {
                let det = common::det(dname, 3);
                let e = exact_cumulant(&w, &model, &det, &b).unwrap().value;
                let o = bruteforce_cumulant_oracle(&w, &model, &det, &b).unwrap();
                assert!(rel_close(e, o, 1e-9), "{label} {mname} {dname}: {e} vs {o}");
            }
        }
    }
}

#[test]
fn gaussian_path_matches_general_path() {
    let b = Budget::default();
    let mut grid: Vec<(String, TraceWord)> = common::words(4, 3).into_iter().filter(|(_, w)| w.m() % 2 == 0).collect();
    for words in [&["X0 D0 X0^T X0 D0 X0 X0 X0"][..], &["X0 D0 X1 X0", "X1 X0"][..], &["X0 D0", "X0 X0 D0", "X0 X0 X0"][..]] {
        grid.push((format!("{words:?}"), TraceWord::parse(words).unwrap()));
    }
    for (label, w) in grid {
        let det = common::det("random-unit-norm:11", 2);
        for (tag, model) in [(EnsembleTag::Gue, EntryCumulantModel::gue()), (EnsembleTag::Goe, EntryCumulantModel::goe())] {
            let g = exact_cumulant_gaussian(&w, &det, tag, &b).unwrap().value;
            let e = exact_cumulant(&w, &model, &det, &b).unwrap().value;
            assert!(rel_close(g, e, 1e-9), "{label} {tag:?}: {g} vs {e}");
        }
    }
}

#[test]
fn gue_trace_of_square() {
    let b = Budget::default();
    let one = TraceWord::parse(&["X0 X0"]).unwrap();
    let two = TraceWord::parse(&["X0 X0", "X0 X0"]).unwrap();
    for n in 1..=8 {
        let det = DeterministicSet::new(n);
        let k1 = exact_cumulant(&one, &EntryCumulantModel::gue(), &det, &b).unwrap().value;
        let k2 = exact_cumulant(&two, &EntryCumulantModel::gue(), &det, &b).unwrap().value;
        assert!((k1 - n as f64).norm() < 1e-9);
        assert!((k2 - 2.0).norm() < 1e-9);
    }
}

/// Tr(XD) with bidiagonal D is N^{-1/2} times a sum of 2N − 1 independent
/// uniform entries, so K_r = (2N − 1) N^{−r/2} κ_r.
fn wigner_xd_oracle(n: usize, r: usize) -> f64 {
    let kappa = match r {
        2 => 1.0 / 12.0,
        4 => -1.0 / 120.0,
        6 => 1.0 / 252.0,
        _ => 0.0,
    };
    (2.0 * n as f64 - 1.0) * (n as f64).powf(-(r as f64) / 2.0) * kappa
}

#[test]
fn wigner_xd_values_and_slope() {
    let b = Budget::default();
    let model = EntryCumulantModel::from_ensemble(&Ensemble::uniform_wigner(), 6).unwrap();
    for r in [2usize, 4] {
        let w = TraceWord::repeated(&"X0 D0".parse().unwrap(), r).unwrap();
        let ns = [4usize, 8, 16, 32];
        let mut pts = Vec::new();
        for &n in &ns {
            let det = builtin_set(&["upper-bidiagonal-ones"], n).unwrap();
            let v = exact_cumulant(&w, &model, &det, &b).unwrap().value;
            assert!((v.re - wigner_xd_oracle(n, r)).abs() <= 1e-9 * v.norm(), "r={r} N={n}: {v}");
            pts.push(((n as f64).ln(), v.norm().ln()));
        }
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / 4.0;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / 4.0;
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        assert!((slope - (1.0 - r as f64 / 2.0)).abs() <= 0.1, "r={r} slope {slope}");
    }
}

#[test]
fn worked_wigner_pi_values() {
    let det = builtin_set(&["upper-bidiagonal-ones"], 7).unwrap();
    let w = TraceWord::parse(&["X0 D0", "X0 D0"]).unwrap();
    let b = Budget::default();
    let one = SetPartition::one_block(GroundSet::signed(2));
    let split = SetPartition::from_blocks(GroundSet::signed(2), vec![vec![1, 2], vec![-1, -2]]).unwrap();
    assert_eq!(s_pi_eq(&w, &one, &det, &b).unwrap().re, 7.0);
    assert_eq!(s_pi_eq(&w, &split, &det, &b).unwrap().re, 6.0);
}

#[test]
fn self_adjoint_cumulants_are_real() {
    // hermitian D keeps Tr(X D X D) real
    let b = Budget::default();
    let det = builtin_set(&["diag-alternating-signs"], 4).unwrap();
    for words in [&["X0 D0 X0 D0", "X0 D0 X0 D0"][..], &["X0 X0 D0", "X0 D0 X0"][..], &["X0 D0", "X0 X0", "X0"][..]] {
        let w = TraceWord::parse(words).unwrap();
        for (_, model) in common::models() {
            let v = exact_cumulant(&w, &model, &det, &b).unwrap().value;
            assert!(v.im.abs() <= 1e-10 * v.norm().max(1e-300), "{words:?}: {v}");
        }
    }
}

#[test]
fn gue_scaled_cumulants_stay_bounded() {
    let b = Budget::default();
    let dets: Vec<_> = (2..=8).map(|n| builtin_set(&["random-unit-norm:3"], n).unwrap()).collect();
    let mut cases = Vec::new();
    for r in 2..=3 {
        for (label, mono) in [("XD", "X0 D0"), ("XX", "X0 X0"), ("XDX", "X0 D0 X0 D0")] {
            let word = TraceWord::repeated(&mono.parse().unwrap(), r).unwrap();
            if word.m() <= 6 {
                cases.push(BoundCase { label: format!("{label} r={r}"), word, model: EntryCumulantModel::gue() });
            }
        }
    }
    let verdicts = verify_bounds(&cases, &dets, &b).unwrap();
    assert!(verdicts.iter().all(|v| v.passed), "{verdicts:#?}");
}

#[test]
fn polynomial_variance_of_x_plus_x_squared() {
    let b = Budget::default();
    let p = PolynomialSpec::parse(&["X0", "X0 X0"]).unwrap();
    let det = DeterministicSet::new(5);
    let model = EntryCumulantModel::gue();
    let v = polynomial_cumulant(&p, 2, |w| Ok(exact_cumulant(w, &model, &det, &b)?.value)).unwrap();
    // Var Tr X = 1, Var Tr X² = 2, Cov = 0
    assert!((v - 3.0).norm() < 1e-9);
}
