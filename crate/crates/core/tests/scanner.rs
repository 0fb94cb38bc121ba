mod common;

use common::*;
use proptest::prelude::*;
use regrich::linalg::{cr, real_diag, ComplexMatrix};
use regrich::richness::is_rich;
use regrich::scanner::*;
use regrich::transitivity::VerdictKind;

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

// p(u - s) for a univariate coefficient list
fn shift(coefs: &[f64], s: f64) -> Vec<f64> {
    let mut out = vec![0.0; coefs.len()];
    for (n, &c) in coefs.iter().enumerate() {
        for k in 0..=n {
            out[k] += c * binom(n, k) * (-s).powi((n - k) as i32);
        }
    }
    out
}

const S: f64 = 0.0137;

fn shifted_f() -> ParamSystem {
    let p = |c: &[f64]| Polynomial::univariate(&shift(c, S));
    ParamSystem {
        d: 2,
        m: 1,
        entries: vec![
            vec![p(&[2.0, 0.0, 0.0, -1.0]), p(&[0.0, -1.0])],
            vec![p(&[0.0, 0.0, 1.0]), p(&[1.0, 0.0, 0.0, -2.0])],
        ],
        domain: vec![[-0.5 + S, 0.5 + S]],
    }
}

fn poly2(terms: &[(u32, u32, f64, f64)]) -> Polynomial {
    Polynomial { monomials: terms.iter().map(|&(a, b, re, im)| Monomial { exps: vec![a, b], coef: [re, im] }).collect() }
}

#[test]
fn cubic_example() {
    let r = scan(&ParamSystem::cubic_example(), &[101], &cfg()).unwrap();
    assert_eq!(r.refined_roots.len(), 1);
    let root = &r.refined_roots[0];
    assert!(root.u[0].abs() <= 1e-8);
    assert_eq!(root.corank, 1);
}

#[test]
fn off_grid_root() {
    let sys = shifted_f();
    for n in [100, 199] {
        let r = scan(&sys, &[n], &cfg()).unwrap();
        assert_eq!(r.refined_roots.len(), 1, "grid {}: {:?}", n, r.refined_roots);
        let root = &r.refined_roots[0];
        assert!((root.u[0] - S).abs() <= 1e-8, "grid {}: u* = {}", n, root.u[0]);
        assert_eq!(root.corank, 1);
        let dir = &root.failing_direction;
        assert!((dir[0][0].hypot(dir[0][1]) - 1.0).abs() < 1e-6);
        let v = is_rich(&eval_system(&sys, &root.u, &cfg()).unwrap(), &cfg()).unwrap();
        let residual = v.witness.as_ref().map_or(f64::INFINITY, |w| w.residual);
        assert!(v.kind == VerdictKind::NotTransitive || residual <= 1e-8, "{:?}", v.kind);
    }
}

#[test]
fn exponential_taylor() {
    let coefs: Vec<f64> = (0..14).scan(1.0, |f, k| {
        let v = 1.0 / *f;
        *f *= (k + 1) as f64;
        Some(v)
    }).collect();
    let sys = ParamSystem {
        d: 2,
        m: 1,
        entries: vec![
            vec![Polynomial::univariate(&coefs), Polynomial::constant(0.0)],
            vec![Polynomial::constant(0.0), Polynomial::constant(1.0)],
        ],
        domain: vec![[-1.0, 1.0]],
    };
    let d = eval_system(&sys, &[0.0], &cfg()).unwrap();
    assert!((&d.b[0] - real_diag(&[1.0, 0.0])).norm() < 1e-14);
    let d = eval_system(&sys, &[0.7], &cfg()).unwrap();
    assert!((&d.b[0] - real_diag(&[1.0, 0.0])).norm() < 1e-9);
}

#[test]
fn constant_system() {
    let sys = ParamSystem::constant(&real_diag(&[1.0, 2.0]), 1, vec![[0.0, 1.0]]);
    let r = scan(&sys, &[7], &cfg()).unwrap();
    assert!(r.identically_singular);
    assert_eq!(r.poor_candidates.len(), 7);
}

#[test]
fn rich_everywhere() {
    // A(u) = Diag(2,3,5) + u·ones; B = ones·A⁻¹ keeps all off-diagonal entries in the eigenbasis
    let ones = |diag: f64| Polynomial::univariate(&[diag, 1.0]);
    let entries = (0..3)
        .map(|i| (0..3).map(|j| if i == j { ones([2.0, 3.0, 5.0][i]) } else { ones(0.0) }).collect())
        .collect();
    let sys = ParamSystem { d: 3, m: 1, entries, domain: vec![[-0.1, 0.1]] };
    let r = scan(&sys, &[41], &cfg()).unwrap();
    assert!(!r.identically_singular);
    assert!(r.poor_candidates.is_empty(), "{:?}", r.poor_candidates);
    assert!(r.refined_roots.is_empty());
}

#[test]
fn singular_point_reported() {
    let sys = ParamSystem {
        d: 2,
        m: 1,
        entries: vec![
            vec![Polynomial::univariate(&[0.0, 1.0]), Polynomial::constant(0.0)],
            vec![Polynomial::constant(0.0), Polynomial::constant(1.0)],
        ],
        domain: vec![[-1.0, 1.0]],
    };
    assert!(matches!(eval_system(&sys, &[0.0], &cfg()), Err(regrich::Error::SingularMatrix(_))));
}

#[test]
fn deterministic() {
    let sys = shifted_f();
    let a = serde_json::to_string(&scan(&sys, &[60], &cfg()).unwrap()).unwrap();
    let b = serde_json::to_string(&scan(&sys, &[60], &cfg()).unwrap()).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn derivative_matches_differences(
        c in prop::collection::vec((0u32..4, 0u32..4, -2.0f64..2.0, -2.0f64..2.0), 1..6),
        u in -1.0f64..1.0, v in -1.0f64..1.0, k in 0usize..2,
    ) {
        let p = poly2(&c);
        let h = 1e-5;
        let mut up = [u, v];
        let mut dn = [u, v];
        up[k] += h;
        dn[k] -= h;
        let fd = (p.eval(&up) - p.eval(&dn)) / cr(2.0 * h);
        let exact = p.derivative(k).eval(&[u, v]);
        let scale = c.iter().map(|t| t.2.hypot(t.3)).sum::<f64>() * 4.0 + 1.0;
        prop_assert!((fd - exact).norm() <= 1e-6 * scale, "{} vs {}", fd, exact);
    }

    #[test]
    fn b_is_log_derivative(u in -0.5f64..0.5) {
        let sys = ParamSystem::cubic_example();
        let d = eval_system(&sys, &[u], &cfg()).unwrap();
        let lhs: ComplexMatrix = &d.b[0] * &d.a;
        prop_assert!((lhs - sys.da(0, &[u])).norm() < 1e-12);
    }
}
