mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use regrich::constraints::*;
use regrich::linalg::{block_diag, cr, jordan_block, real_diag, ComplexMatrix};
use regrich::random;
use regrich::richness::{is_rich, Datum};
use regrich::transitivity::VerdictKind;

fn family(k: usize) -> ComplexMatrix {
    match k % 6 {
        0 => real_diag(&[1.0, 2.0, 4.0]),
        1 => real_diag(&[1.0, 2.0, 3.0, 6.0]),
        2 => real_diag(&[1.0, -1.0, 3.0]),
        3 => block_diag(&[jordan_block(2, cr(2.0)), real_diag(&[5.0])]),
        4 => real_diag(&[2.0, 3.0, 7.0]),
        _ => toroidal(),
    }
}

#[test]
fn kinds_of_examples() {
    let c = cfg();
    assert_eq!(classify(&real_diag(&[2.0, 3.0, 7.0]), &c).unwrap().kind, ClassKind::Unconstrained);
    assert_eq!(classify(&real_diag(&[1.0, 2.0, 4.0]), &c).unwrap().kind, ClassKind::IConstrained(1));
    assert_eq!(classify(&toroidal(), &c).unwrap().kind, ClassKind::Multiconstrained);
    let t3 = classify(&real_diag(&[1.0, -1.0]), &c).unwrap();
    assert_eq!(t3.kind, ClassKind::IConstrained(3));
}

#[test]
fn shortcut_soundness() {
    let c = cfg();
    let mut rng = random::rng(77);
    let mut hits = 0;
    for k in 0..200 {
        let a0 = family(k);
        let d = a0.nrows();
        let a = conjugated(&mut rng, &a0);
        let mut b = random::complex_matrix(&mut rng, d, d);
        if rng.random_bool(0.3) {
            let (i, j) = (rng.random_range(0..d), rng.random_range(0..d));
            b[(i, j)] = cr(0.0);
        }
        match rich_pair_shortcut(&a, &b, &c) {
            Ok(Some(true)) => {
                hits += 1;
                let v = is_rich(&Datum::new(a, vec![b], &c).unwrap(), &c).unwrap();
                assert_eq!(v.kind, VerdictKind::Transitive, "case {}", k);
            }
            Ok(_) | Err(regrich::Error::UnsupportedClass(_)) => {}
            Err(e) => panic!("case {}: {}", k, e),
        }
    }
    assert!(hits > 50, "only {} shortcut hits", hits);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classify_conjugation_invariant(seed in any::<u64>(), k in 0usize..6) {
        let mut rng = random::rng(seed);
        let a = family(k);
        let b = conjugated(&mut rng, &a);
        let (ca, cb) = (classify(&a, &cfg()).unwrap(), classify(&b, &cfg()).unwrap());
        prop_assert_eq!(ca.kind, cb.kind);
        prop_assert_eq!(ca.constraints.len(), cb.constraints.len());
    }
}
