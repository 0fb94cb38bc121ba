mod common;

use common::cfg;
use proptest::prelude::*;
use regrich::linalg::exact::{ExactMatrix, GaussRat};
use regrich::linalg::*;
use regrich::random;

#[test]
fn column_major_adjoint_convention() {
    let mut rng = random::rng(1);
    let a = random::well_conditioned(&mut rng, 3);
    let x = random::complex_matrix(&mut rng, 3, 3);
    let op = adjoint_operator(&a, &cfg()).unwrap();
    let direct = vectorize(&(&a * &x * inverse(&a, &cfg()).unwrap()));
    assert!((&op.matrix * vectorize(&x) - direct).norm() < 1e-12);
    // kron(A^{-T}, A) under column-major vec
    let k = kron(&inverse(&a, &cfg()).unwrap().transpose(), &a);
    assert!((&k - &op.matrix).norm() < 1e-12);
}

#[test]
fn krylov_of_diagonal() {
    // Ad_D on E_12 scales by 2: the reach of {Id, E_12} is 2-dimensional
    let a = real_diag(&[2.0, 1.0]);
    let h = adjoint_operator(&a, &cfg()).unwrap();
    let r = krylov_reach_detailed(&h, &[identity(2), unit_matrix(2, 2, 0, 1)], None, &cfg()).unwrap();
    assert_eq!(r.space.dim(), 2);
    assert!(r.stabilized);
}

#[test]
fn exact_rank_and_inverse() {
    let m = ExactMatrix::from_int_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
    assert_eq!(m.rank(), 2);
    assert!(m.inverse().is_err());
    let m = ExactMatrix::from_int_rows(&[&[2, 1], &[1, 1]]);
    let p = m.mul(&m.inverse().unwrap()).unwrap();
    assert_eq!(p, ExactMatrix::identity(2));
    assert_eq!(m.determinant().unwrap(), GaussRat::from_ints(1, 0));
}

#[test]
fn singular_inverse_errors() {
    let m = from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
    assert!(matches!(inverse(&m, &cfg()), Err(regrich::Error::SingularMatrix(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn krylov_nondecreasing_and_stable(seed in any::<u64>(), d in 2usize..4) {
        let mut rng = random::rng(seed);
        let a = random::well_conditioned(&mut rng, d);
        let b = random::complex_matrix(&mut rng, d, d);
        let h = adjoint_operator(&a, &cfg()).unwrap();
        let seeds = [identity(d), b];
        let mut prev = 0;
        for n in 1..=d * d + 1 {
            let dim = krylov_reach(&h, &seeds, n, &cfg()).unwrap().dim();
            prop_assert!(dim >= prev);
            prev = dim;
        }
        let full = krylov_reach_detailed(&h, &seeds, None, &cfg()).unwrap();
        prop_assert_eq!(full.space.dim(), prev);
        prop_assert!(full.stabilization_n <= d * d);
    }

    #[test]
    fn span_basis_idempotent(seed in any::<u64>(), k in 1usize..6) {
        let mut rng = random::rng(seed);
        let mut mats: Vec<ComplexMatrix> = (0..k).map(|_| random::complex_matrix(&mut rng, 3, 2)).collect();
        mats.push(&mats[0] * cr(2.0) - &mats[k - 1]);
        let s = span_basis(&mats, &cfg()).unwrap();
        let again = span_basis(&s.basis, &cfg()).unwrap();
        prop_assert_eq!(s.dim(), again.dim());
        prop_assert_eq!(s.dim(), k.min(6));
    }

    #[test]
    fn adjoint_inverse_composes_to_identity(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = random::rng(seed);
        let a = random::well_conditioned(&mut rng, d);
        let ai = inverse(&a, &cfg()).unwrap();
        let h = adjoint_operator(&a, &cfg()).unwrap();
        let hi = adjoint_operator(&ai, &cfg()).unwrap();
        let x = vectorize(&random::complex_matrix(&mut rng, d, d));
        prop_assert!((&h.matrix * (&hi.matrix * &x) - &x).norm() <= 1e-6 * x.norm());
    }

    #[test]
    fn space_action_recombination_invariant(seed in any::<u64>(), k in 1usize..5) {
        let mut rng = random::rng(seed);
        let mats: Vec<ComplexMatrix> = (0..k).map(|_| random::complex_matrix(&mut rng, 3, 3)).collect();
        let q = random::well_conditioned(&mut rng, k);
        let mixed: Vec<ComplexMatrix> = (0..k)
            .map(|i| (0..k).fold(ComplexMatrix::zeros(3, 3), |acc, j| acc + &mats[j] * q[(i, j)]))
            .collect();
        let v = random::unit_vector(&mut rng, 3);
        let s1 = span_basis(&mats, &cfg()).unwrap();
        let s2 = span_basis(&mixed, &cfg()).unwrap();
        prop_assert_eq!(space_action(&s1, &v, &cfg()).unwrap().0, space_action(&s2, &v, &cfg()).unwrap().0);
    }

    #[test]
    fn exact_rank_matches_numeric(entries in proptest::collection::vec(-3i64..=3, 12)) {
        let rows: Vec<&[i64]> = entries.chunks(4).collect();
        let m = ExactMatrix::from_int_rows(&rows);
        prop_assert_eq!(m.rank(), rank(&m.to_complex(), 1e-9));
    }
}
