//! Elementary eigenvalue constraints, adapted bases and the good-match test for `m = 1`.
//!
//! Indices refer to the eigenvalue list counted with multiplicity, in the order of
//! [`JordanType`] (each distinct eigenvalue repeated by its multiplicity), 0-based.

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::linalg::exact::GaussRat;
use crate::linalg::{cr, cx, inverse, max_abs, ComplexMatrix};
use crate::spectral::{jordan_basis, jordan_type, JordanType};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

/// One elementary constraint in canonical index order:
/// type 1 `[a,b,c]`: `λa λc = λb²`; type 2 `[a,b,c,d]`: `λa λd = λb λc`;
/// type 3 `[a,b]`: `λa = -λb`; type 4 `[a,b]`: `λa = λb`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintRecord {
    pub ctype: u8,
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassKind {
    Unconstrained,
    IConstrained(u8),
    Multiconstrained,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub kind: ClassKind,
    pub constraints: Vec<ConstraintRecord>,
    pub derogatory: bool,
    /// Eigenvalues with multiplicity; constraint indices point here.
    #[serde(skip)]
    pub eigenvalues: Vec<Complex64>,
    #[serde(skip)]
    pub jordan: JordanType,
}

/// `x ≈ y` compared in log-polar form, falling back to an absolute test near zero.
fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
    let (nx, ny) = (x.norm(), y.norm());
    if nx < 1e-300 || ny < 1e-300 {
        return (x - y).norm() <= tol;
    }
    if (nx.ln() - ny.ln()).abs() > tol {
        return false;
    }
    let dt = (x.arg() - y.arg()).rem_euclid(TAU);
    dt.min(TAU - dt) <= tol
}

pub fn expanded_eigenvalues(jt: &JordanType) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(jt.total);
    for (k, &l) in jt.eigenvalues.iter().enumerate() {
        out.extend(std::iter::repeat_n(l, jt.multiplicity(k)));
    }
    out
}

/// All elementary constraints satisfied by the eigenvalues of `jt`, each listed once.
pub fn elementary_constraints(jt: &JordanType, cfg: &ToleranceConfig) -> Vec<ConstraintRecord> {
    let l = expanded_eigenvalues(jt);
    let d = l.len();
    let tol = cfg.cluster_tol_rel;
    let mut out = Vec::new();
    // a type-4 relation between equal clusters is exact; avoid tolerance games there
    for a in 0..d {
        for b in a + 1..d {
            if close(l[a], l[b], tol) {
                out.push(ConstraintRecord { ctype: 4, indices: vec![a, b] });
            }
            if close(l[a], -l[b], tol) {
                out.push(ConstraintRecord { ctype: 3, indices: vec![a, b] });
            }
        }
    }
    // type 1: unordered outer pair {a, c}, middle b distinct from both
    for b in 0..d {
        let sq = l[b] * l[b];
        for a in 0..d {
            for c in a + 1..d {
                if a != b && c != b && close(l[a] * l[c], sq, tol) {
                    out.push(ConstraintRecord { ctype: 1, indices: vec![a, b, c] });
                }
            }
        }
    }
    // type 2: two disjoint unordered pairs, the pair containing the smallest index first
    for a in 0..d {
        for dd in a + 1..d {
            let p = l[a] * l[dd];
            for b in a + 1..d {
                for c in b + 1..d {
                    if b == dd || c == dd {
                        continue;
                    }
                    if close(p, l[b] * l[c], tol) {
                        out.push(ConstraintRecord { ctype: 2, indices: vec![a, b, c, dd] });
                    }
                }
            }
        }
    }
    out
}

pub fn classify(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Classification> {
    let jt = jordan_type(a, cfg)?;
    Ok(classify_type(&jt, cfg))
}

pub fn classify_type(jt: &JordanType, cfg: &ToleranceConfig) -> Classification {
    let constraints = elementary_constraints(jt, cfg);
    let derogatory = jt.is_derogatory();
    let kind = if derogatory || constraints.len() >= 2 {
        ClassKind::Multiconstrained
    } else if let Some(c) = constraints.first() {
        // a lone type-4 constraint without derogation means a single 2-block
        ClassKind::IConstrained(c.ctype)
    } else {
        ClassKind::Unconstrained
    };
    Classification { kind, constraints, derogatory, eigenvalues: expanded_eigenvalues(jt), jordan: jt.clone() }
}

/// Scale a column so its largest entry is exactly 1.
fn unit_lead(v: &mut [Complex64]) -> Complex64 {
    let mut k = 0;
    for i in 0..v.len() {
        if v[i].norm() > v[k].norm() * (1.0 + 1e-12) {
            k = i;
        }
    }
    let s = v[k];
    for z in v.iter_mut() {
        *z /= s;
    }
    s
}

/// Eigenvector basis for simple-spectrum `A`, each column scaled to a unit leading entry and
/// columns sorted by the position of that entry (so diagonal `A` gives `P = Id`).
pub fn eigenbasis(a: &ComplexMatrix, jt: &JordanType, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    if jt.eigenvalues.len() != a.nrows() {
        return Err(Error::UnsupportedClass("eigenbasis needs simple spectrum".into()));
    }
    let q = jordan_basis(a, jt, cfg)?;
    let d = a.nrows();
    let mut cols: Vec<(usize, Vec<Complex64>)> = (0..d)
        .map(|j| {
            let mut c: Vec<Complex64> = q.column(j).iter().copied().collect();
            unit_lead(&mut c);
            let lead = c.iter().position(|z| *z == cr(1.0)).unwrap_or(0);
            (lead, c)
        })
        .collect();
    cols.sort_by_key(|c| c.0);
    Ok(ComplexMatrix::from_fn(d, d, |i, j| cols[j].1[i]))
}

/// Exact test that Gaussian-rational eigenvalues satisfy no elementary constraint.
pub fn exact_unconstrained(l: &[GaussRat]) -> bool {
    let d = l.len();
    let prod = |a: usize, b: usize| &l[a] * &l[b];
    for a in 0..d {
        for b in a + 1..d {
            if l[a] == l[b] || l[a] == -&l[b] {
                return false;
            }
        }
    }
    for b in 0..d {
        let sq = prod(b, b);
        for a in 0..d {
            for c in a + 1..d {
                if a != b && c != b && prod(a, c) == sq {
                    return false;
                }
            }
        }
    }
    for a in 0..d {
        for dd in a + 1..d {
            let p = prod(a, dd);
            for b in a + 1..d {
                for c in b + 1..d {
                    if b != dd && c != dd && prod(b, c) == p {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Basis `P` with `P⁻¹AP` diagonal in canonical order, or in modified Jordan form for type 4.
pub fn adapted_basis(a: &ComplexMatrix, cl: &Classification, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    if cl.kind == ClassKind::Multiconstrained {
        return Err(Error::UnsupportedClass("multiconstrained matrices have no adapted basis".into()));
    }
    let d = a.nrows();
    if cl.kind == ClassKind::Unconstrained {
        return eigenbasis(a, &cl.jordan, cfg);
    }
    let q = jordan_basis(a, &cl.jordan, cfg)?;
    let lead: Vec<usize> = match cl.kind {
        ClassKind::IConstrained(_) => cl.constraints[0].indices.clone(),
        _ => vec![],
    };
    let mut order = lead.clone();
    order.extend((0..d).filter(|i| !lead.contains(i)));
    let mut p = ComplexMatrix::zeros(d, d);
    for (new, &old) in order.iter().enumerate() {
        p.set_column(new, &q.column(old));
    }
    if cl.kind == ClassKind::IConstrained(4) {
        // q's 2-block reads [A-λ]q2 = q1; the modified form wants (A-λ)p2 = λ p1
        let lam = cl.eigenvalues[lead[0]];
        let mut c1: Vec<Complex64> = p.column(0).iter().copied().collect();
        let s = unit_lead(&mut c1);
        let c2: Vec<Complex64> = p.column(1).iter().map(|z| z / s).collect();
        for i in 0..d {
            p[(i, 0)] = c1[i] / lam;
            p[(i, 1)] = c2[i];
        }
        for j in 2..d {
            let mut c: Vec<Complex64> = p.column(j).iter().copied().collect();
            unit_lead(&mut c);
            p.set_column(j, &nalgebra::DVector::from_vec(c));
        }
    } else {
        for j in 0..d {
            let mut c: Vec<Complex64> = p.column(j).iter().copied().collect();
            unit_lead(&mut c);
            p.set_column(j, &nalgebra::DVector::from_vec(c));
        }
    }
    Ok(p)
}

fn off_diagonal_nonzero(b: &ComplexMatrix, thr: f64) -> bool {
    let d = b.nrows();
    (0..d).all(|i| (0..d).all(|j| i == j || b[(i, j)].norm() > thr))
}

fn match_in_basis(b: &ComplexMatrix, p: &ComplexMatrix, kind: ClassKind, cfg: &ToleranceConfig) -> Result<bool> {
    let bp = inverse(p, cfg)? * b * p;
    let scale = max_abs(&bp);
    if scale == 0.0 {
        return Ok(false);
    }
    let thr = cfg.zero_tol_abs * scale;
    let mut ok = off_diagonal_nonzero(&bp, thr);
    if kind == ClassKind::IConstrained(3) {
        ok &= (bp[(0, 0)] - bp[(1, 1)]).norm() > thr;
    }
    Ok(ok)
}

/// Good match: some adapted basis shows all off-diagonal entries of `B` nonzero
/// (and `b11 ≠ b22` for type 3).
pub fn good_match(a: &ComplexMatrix, b: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<bool> {
    let cl = classify(a, cfg)?;
    good_match_with(a, &cl, b, cfg)
}

pub fn good_match_with(a: &ComplexMatrix, cl: &Classification, b: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<bool> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension("A and B must have the same shape".into()));
    }
    let p = adapted_basis(a, cl, cfg)?;
    if match_in_basis(b, &p, cl.kind, cfg)? {
        return Ok(true);
    }
    if cl.kind != ClassKind::IConstrained(4) {
        // other adapted bases only rescale or permute within the canonical form
        return Ok(false);
    }
    // the 2-block's commutant [[1, β], [0, 1]] moves entries of row 1 and column 2
    for beta in [cr(1.0), cr(-0.5), cx(0.37, 0.61), Complex64::from_polar(1.3, PI / 7.0)] {
        let mut q = p.clone();
        let c0 = q.column(0).into_owned();
        let mut c1 = q.column_mut(1);
        c1 += c0 * beta;
        if match_in_basis(b, &q, cl.kind, cfg)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Sufficient test for richness of `(A, B)`: not multiconstrained and `B` a good match.
/// `None` means no conclusion.
pub fn rich_pair_shortcut(a: &ComplexMatrix, b: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Option<bool>> {
    let cl = classify(a, cfg)?;
    if cl.kind == ClassKind::Multiconstrained {
        return Ok(None);
    }
    Ok(good_match_with(a, &cl, b, cfg)?.then_some(true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{block_diag, diag, jordan_block, real_diag};
    use crate::random;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn ones(d: usize) -> ComplexMatrix {
        ComplexMatrix::from_element(d, d, cr(1.0))
    }

    #[test]
    fn enumeration_examples() {
        let c = classify(&real_diag(&[1.0, 2.0, 4.0]), &cfg()).unwrap();
        assert_eq!(c.constraints.len(), 1);
        assert_eq!(c.constraints[0].ctype, 1);
        assert_eq!(c.kind, ClassKind::IConstrained(1));
        let l = &c.eigenvalues;
        let ix = &c.constraints[0].indices;
        assert!((l[ix[0]] * l[ix[2]] - l[ix[1]] * l[ix[1]]).norm() < 1e-9);

        assert_eq!(classify(&real_diag(&[1.0, 2.0, 3.0]), &cfg()).unwrap().kind, ClassKind::Unconstrained);
        let c = classify(&real_diag(&[2.0, -2.0, 5.0]), &cfg()).unwrap();
        assert_eq!(c.kind, ClassKind::IConstrained(3));
        assert_eq!(c.constraints[0].indices.len(), 2);
    }

    #[test]
    fn type2_and_type4() {
        let c = classify(&real_diag(&[1.0, 2.0, 3.0, 6.0]), &cfg()).unwrap();
        assert_eq!(c.kind, ClassKind::IConstrained(2));
        let a = block_diag(&[jordan_block(2, cr(1.0)), real_diag(&[3.0])]);
        assert_eq!(classify(&a, &cfg()).unwrap().kind, ClassKind::IConstrained(4));
        let c = classify(&real_diag(&[1.0, 1.0, 3.0]), &cfg()).unwrap();
        assert_eq!(c.kind, ClassKind::Multiconstrained);
        assert!(c.derogatory);
    }

    #[test]
    fn adapted_basis_orders() {
        let a = real_diag(&[4.0, 1.0, 2.0]);
        let cl = classify(&a, &cfg()).unwrap();
        let p = adapted_basis(&a, &cl, &cfg()).unwrap();
        let m = inverse(&p, &cfg()).unwrap() * &a * &p;
        let (l1, l2, l3) = (m[(0, 0)], m[(1, 1)], m[(2, 2)]);
        assert!((l1 * l3 - l2 * l2).norm() < 1e-9);
        // a permutation matrix
        assert!(p.iter().all(|z| (z.norm() < 1e-12) || (z - cr(1.0)).norm() < 1e-12));
    }

    #[test]
    fn modified_jordan_form() {
        let mut rng = random::rng(3);
        let j = block_diag(&[jordan_block(2, cr(5.0)), real_diag(&[7.0])]);
        let p0 = random::well_conditioned(&mut rng, 3);
        let a = &p0 * &j * inverse(&p0, &cfg()).unwrap();
        let cl = classify(&a, &cfg()).unwrap();
        assert_eq!(cl.kind, ClassKind::IConstrained(4));
        let p = adapted_basis(&a, &cl, &cfg()).unwrap();
        let m = inverse(&p, &cfg()).unwrap() * &a * &p;
        let want = block_diag(&[
            ComplexMatrix::from_row_slice(2, 2, &[cr(5.0), cr(5.0), cr(0.0), cr(5.0)]),
            real_diag(&[7.0]),
        ]);
        assert!((m - want).norm() < 1e-6);
    }

    #[test]
    fn good_match_examples() {
        for a in [real_diag(&[1.0, 2.0, 3.0]), real_diag(&[1.0, 2.0, 4.0])] {
            assert!(good_match(&a, &ones(3), &cfg()).unwrap());
        }
        assert!(!good_match(&real_diag(&[2.0, -2.0, 5.0]), &ones(3), &cfg()).unwrap());
        let mut b = ones(3);
        b[(0, 2)] = cr(0.0);
        assert!(!good_match(&real_diag(&[1.0, 2.0, 3.0]), &b, &cfg()).unwrap());
        let a = real_diag(&[1.0, 1.0, 3.0]);
        assert!(matches!(good_match(&a, &ones(3), &cfg()), Err(Error::UnsupportedClass(_))));
    }

    #[test]
    fn type4_good_match_uses_commutant() {
        // in the modified basis b12 = 0 but b11 != b22, so a shear fixes it
        let a = block_diag(&[ComplexMatrix::from_row_slice(2, 2, &[cr(5.0), cr(5.0), cr(0.0), cr(5.0)]), real_diag(&[7.0])]);
        let mut b = ones(3);
        b[(0, 1)] = cr(0.0);
        b[(0, 0)] = cr(2.0);
        assert!(good_match(&a, &b, &cfg()).unwrap());
    }

    #[test]
    fn shortcut_cases() {
        assert_eq!(rich_pair_shortcut(&real_diag(&[1.0, 2.0, 4.0]), &ones(3), &cfg()).unwrap(), Some(true));
        let b = ComplexMatrix::from_row_slice(2, 2, &[cr(0.0), cr(-1.0), cr(0.0), cr(0.0)]);
        assert_eq!(rich_pair_shortcut(&real_diag(&[2.0, 1.0]), &b, &cfg()).unwrap(), None);
        assert_eq!(rich_pair_shortcut(&diag(&[cr(1.0), cr(1.0)]), &ones(2), &cfg()).unwrap(), None);
    }
}
