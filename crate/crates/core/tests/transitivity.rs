mod common;

use common::cfg;
use proptest::prelude::*;
use regrich::linalg::{identity, span_basis, ComplexMatrix, MatrixSpace};
use regrich::linalg::exact::{ExactMatrix, GaussRat};
use regrich::random;
use regrich::transitivity::*;

fn random_space(seed: u64, t: usize, s: usize, k: usize) -> MatrixSpace {
    let mut rng = random::rng(seed);
    let mats: Vec<ComplexMatrix> = (0..k).map(|_| random::complex_matrix(&mut rng, t, s)).collect();
    span_basis(&mats, &cfg()).unwrap()
}

fn check_witness(space: &MatrixSpace, v: &TransitivityVerdict) {
    if v.kind == VerdictKind::NotTransitive {
        let w = v.witness.as_ref().expect("NotTransitive carries a witness");
        for l in &space.basis {
            assert!(w.w.dotc(&(l * &w.v)).norm() <= 1e-8 * l.norm().max(1e-300));
        }
    }
}

#[test]
fn full_and_zero_spaces() {
    let c = cfg();
    assert!(is_transitive(&MatrixSpace::full(3, 2, 1e-9), &c).is_transitive());
    assert_eq!(is_transitive(&MatrixSpace::zero(3, 2, 1e-9), &c).kind, VerdictKind::NotTransitive);
}

#[test]
fn toeplitz_hankel_certified() {
    for d in 2..=5 {
        let t = toeplitz_space(d, &cfg());
        assert_eq!(t.dim(), 2 * d - 1);
        assert!(generalized_toeplitz_check(&t, &cfg()) || structural_certificate(&t, &cfg()).is_some());
        assert!(is_transitive(&hankel_space(d, &cfg()), &cfg()).is_transitive());
    }
}

#[test]
fn scalars_plus_rank_one() {
    // span{Id, E_12}: v = e_1 only reaches e_1
    let s = span_basis(&[identity(2), e(2, 0, 1)], &cfg()).unwrap();
    let v = is_transitive(&s, &cfg());
    assert_eq!(v.kind, VerdictKind::NotTransitive);
    check_witness(&s, &v);
}

#[test]
fn exact_oracle_examples() {
    // all t x 2 with t = 1: {(a, b)} is transitive
    let full = vec![
        ExactMatrix::from_int_rows(&[&[1, 0]]),
        ExactMatrix::from_int_rows(&[&[0, 1]]),
    ];
    assert!(exact_oracle_source2(&full).unwrap());
    // diagonal 2x2: kills e_1 via E_22 only
    let diag = vec![ExactMatrix::from_int_rows(&[&[1, 0], &[0, 0]]), ExactMatrix::from_int_rows(&[&[0, 0], &[0, 1]])];
    assert!(!exact_oracle_source2(&diag).unwrap());
}

#[test]
fn sudoku_on_block_diagonal_identity() {
    // identity-block cells are not transitive on their own
    let s = span_basis(&[identity(2)], &cfg()).unwrap();
    let parts = [0..1, 1..2];
    assert_ne!(sudoku_transitive(&s, &parts, &parts, &cfg()).unwrap(), Some(true));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn equivalence_invariance(seed in any::<u64>(), t in 2usize..4, s in 2usize..4, extra in 0usize..3) {
        let k = s + t - 2 + extra;
        let space = random_space(seed, t, s, k);
        let mut rng = random::rng(seed ^ 0xabc);
        let p = random::well_conditioned(&mut rng, t);
        let q = random::well_conditioned(&mut rng, s);
        let moved = space.transform(&p, &q, &cfg()).unwrap();
        let (a, b) = (is_transitive(&space, &cfg()), is_transitive(&moved, &cfg()));
        prop_assert_eq!(a.kind, b.kind);
        check_witness(&space, &a);
        check_witness(&moved, &b);
    }

    #[test]
    fn transitive_needs_dimension(seed in any::<u64>(), t in 1usize..4, s in 1usize..4, k in 1usize..9) {
        let k = k.min(s * t);
        let space = random_space(seed, t, s, k);
        let v = is_transitive(&space, &cfg());
        if v.kind == VerdictKind::Transitive {
            prop_assert!(space.dim() >= s + t - 1);
        }
        check_witness(&space, &v);
    }

    #[test]
    fn toeplitz_check_implies_transitive(seed in any::<u64>(), d in 2usize..4) {
        let mut rng = random::rng(seed);
        let p = random::well_conditioned(&mut rng, d);
        let q = random::well_conditioned(&mut rng, d);
        let s = toeplitz_space(d, &cfg()).transform(&p, &q, &cfg()).unwrap();
        if generalized_toeplitz_check(&s, &cfg()) {
            prop_assert!(is_transitive(&s, &cfg()).is_transitive());
        }
    }

    #[test]
    fn numeric_matches_exact_across_tolerances(seed in any::<u64>(), t in 1usize..4, planted in any::<bool>()) {
        let mut rng = random::rng(seed);
        let k = t + 1;
        let mut basis = Vec::new();
        for _ in 0..k {
            let vals: Vec<i64> = (0..2 * t).map(|_| rand::Rng::random_range(&mut rng, -3i64..=3)).collect();
            let mut m = ExactMatrix::from_fn(t, 2, |i, j| GaussRat::from_ints(vals[2 * i + j], 0));
            if planted {
                // common kernel vector (1, 1)
                for i in 0..t {
                    let v = m.at(i, 1).clone();
                    *m.at_mut(i, 0) = &GaussRat::zero() - &v;
                }
            }
            basis.push(m);
        }
        let truth = exact_oracle_source2(&basis).unwrap();
        for tol in [1e-12, 1e-9, 1e-6] {
            let c = cfg().with_rank_tol(tol);
            let space = space_from_exact(&basis, &c).unwrap();
            let v = is_transitive(&space, &c);
            prop_assert_eq!(v.kind == VerdictKind::Transitive, truth, "tol {}", tol);
            prop_assert_ne!(v.kind, VerdictKind::Inconclusive);
        }
    }
}
