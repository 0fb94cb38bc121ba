use proptest::prelude::*;
use regrich::schubert::*;

fn shapes() -> Vec<(usize, usize)> {
    (2..=8).flat_map(|n| (1..n).map(move |k| (k, n))).collect()
}

// Opposite flags meet iff j_i(λ) + j_{k+1−i}(μ) ≥ n + 1 for all i.
fn cup_by_jumps(l: &YoungDiagram, m: &YoungDiagram) -> bool {
    let (a, b) = (jumps_from_diagram(l).unwrap(), jumps_from_diagram(m).unwrap());
    let k = l.k;
    (0..k).all(|i| a.jumps[i] + b.jumps[k - 1 - i] >= l.n + 1)
}

#[test]
fn round_trip() {
    for (k, n) in shapes() {
        let all = YoungDiagram::all(k, n).unwrap();
        let binom = (1..=k).fold(1usize, |acc, i| acc * (n - k + i) / i);
        assert_eq!(all.len(), binom);
        for y in all {
            let rt = jumps_from_diagram(&y).unwrap();
            assert_eq!(diagram_from_jumps(&rt).unwrap(), y);
        }
    }
}

#[test]
fn cup_against_jump_oracle() {
    for (k, n) in shapes().into_iter().filter(|&(_, n)| n <= 7) {
        let all = YoungDiagram::all(k, n).unwrap();
        for l in &all {
            for m in &all {
                let c = cup_nonzero(l, m).unwrap();
                assert_eq!(c, cup_by_jumps(l, m));
                assert_eq!(c, cup_nonzero(m, l).unwrap());
            }
        }
    }
}

#[test]
fn cup_with_point_class() {
    for (k, n) in shapes() {
        let full = YoungDiagram::full(k, n).unwrap();
        for y in YoungDiagram::all(k, n).unwrap() {
            assert_eq!(cup_nonzero(&full, &y).unwrap(), y.area() == 0);
        }
    }
}

#[test]
fn min_partner_brute_force() {
    for (k, n) in shapes() {
        let all = YoungDiagram::all(k, n).unwrap();
        for l in &all {
            let brute = all.iter().filter(|m| !cup_nonzero(l, m).unwrap()).map(|m| m.area()).min();
            match min_area_partner(l) {
                None => assert!(brute.is_none() && l.area() == 0),
                Some((m, a)) => {
                    assert_eq!(Some(a), brute, "{:?}", l.rows);
                    assert_eq!(m.area(), a);
                    assert!(!cup_nonzero(l, &m).unwrap());
                }
            }
        }
    }
}

#[test]
fn rejects_bad_input() {
    assert!(YoungDiagram::new(2, 5, vec![1, 2]).is_err());
    assert!(YoungDiagram::new(2, 5, vec![4, 0]).is_err());
    assert!(RankTable::new(2, 5, vec![3, 3]).is_err());
    assert!(RankTable::new(2, 5, vec![0, 3]).is_err());
    let a = YoungDiagram::empty(2, 5).unwrap();
    let b = YoungDiagram::empty(2, 6).unwrap();
    assert!(cup_nonzero(&a, &b).is_err());
}

proptest! {
    #[test]
    fn cup_monotone(n in 2usize..=8, kk in 0usize..7, i in 0usize..400, j in 0usize..400, r in 0usize..8) {
        let k = 1 + kk % (n - 1);
        let all = YoungDiagram::all(k, n).unwrap();
        let l = &all[i % all.len()];
        let m = &all[j % all.len()];
        // shrink μ by one box in row r if possible
        let mut rows = m.rows.clone();
        let r = r % k;
        if rows[r] > 0 && (r + 1 == k || rows[r + 1] < rows[r]) {
            rows[r] -= 1;
            let smaller = YoungDiagram::new(k, n, rows).unwrap();
            if cup_nonzero(l, m).unwrap() {
                prop_assert!(cup_nonzero(l, &smaller).unwrap());
            }
        }
    }
}
