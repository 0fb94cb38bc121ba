//! Richness of data `(A, B₁, …, B_m)`: the space `Λ(𝐀)`, regularity ranks, singular states.

use crate::config::ToleranceConfig;
use crate::constraints::{classify, eigenbasis, exact_unconstrained, ClassKind};
use crate::error::{Error, Result};
use crate::linalg::exact::{exact_adjoint_reach, ExactMatrix};
use crate::linalg::{
    adjoint_operator, identity, inverse, krylov_reach_detailed, max_abs, normalize_phase, space_action,
    ComplexMatrix, ComplexVector, KrylovResult, MatrixSpace,
};
use crate::spectral::jordan_type;
use crate::transitivity::{
    is_transitive, is_transitive_with_exact, probe_margin, space_from_exact, witness_residual, witness_search,
    Certificate, TransitivityVerdict, VerdictKind, Witness,
};
use serde::Serialize;

/// Matrix datum `𝐀 = (A, B₁, …, B_m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Datum {
    pub a: ComplexMatrix,
    pub b: Vec<ComplexMatrix>,
}

impl Datum {
    pub fn new(a: ComplexMatrix, b: Vec<ComplexMatrix>, cfg: &ToleranceConfig) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!("A must be square, got {:?}", a.shape())));
        }
        if let Some(bad) = b.iter().find(|m| m.shape() != a.shape()) {
            return Err(Error::Dimension(format!("B has shape {:?}, A has {:?}", bad.shape(), a.shape())));
        }
        if !crate::linalg::is_finite(&a) || !b.iter().all(crate::linalg::is_finite) {
            return Err(Error::Format("non-finite entries".into()));
        }
        inverse(&a, cfg)?;
        Ok(Datum { a, b })
    }

    pub fn d(&self) -> usize {
        self.a.nrows()
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    pub fn is_real(&self) -> bool {
        let tol = 1e-14 * max_abs(&self.a).max(1.0);
        crate::linalg::is_real(&self.a, tol) && self.b.iter().all(|m| crate::linalg::is_real(m, tol))
    }

    /// `(P⁻¹AP, P⁻¹B_kP)`.
    pub fn conjugate(&self, p: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Datum> {
        let pi = inverse(p, cfg)?;
        Ok(Datum { a: &pi * &self.a * p, b: self.b.iter().map(|m| &pi * m * p).collect() })
    }

    /// `B'_i = Σ_j q_ij B_j`.
    pub fn recombine(&self, q: &ComplexMatrix) -> Result<Datum> {
        if q.ncols() != self.m() {
            return Err(Error::Dimension("recombination matrix must have m columns".into()));
        }
        let d = self.d();
        let b = (0..q.nrows())
            .map(|i| {
                let mut acc = ComplexMatrix::zeros(d, d);
                for (j, bj) in self.b.iter().enumerate() {
                    acc += bj * q[(i, j)];
                }
                acc
            })
            .collect();
        Ok(Datum { a: self.a.clone(), b })
    }

    fn seeds(&self) -> Vec<ComplexMatrix> {
        let mut s = vec![identity(self.d())];
        s.extend(self.b.iter().cloned());
        s
    }
}

/// `Λ_N(𝐀)`, or `Λ(𝐀)` when `n` is `None`, with the step count at stabilization.
pub fn lambda_space_detailed(datum: &Datum, n: Option<usize>, cfg: &ToleranceConfig) -> Result<KrylovResult> {
    if n == Some(0) {
        return Err(Error::Format("N must be at least 1".into()));
    }
    let h = adjoint_operator(&datum.a, cfg)?;
    krylov_reach_detailed(&h, &datum.seeds(), n, cfg)
}

pub fn lambda_space(datum: &Datum, n: Option<usize>, cfg: &ToleranceConfig) -> Result<MatrixSpace> {
    Ok(lambda_space_detailed(datum, n, cfg)?.space)
}

/// Diagonalizing basis and the off-diagonal positions where every `P⁻¹B_kP` vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct Conspicuous {
    pub p: ComplexMatrix,
    /// 0-based `(i, j)`.
    pub positions: Vec<(usize, usize)>,
}

/// Common off-diagonal zeros of the `B_k` in an eigenbasis of `A`; `None` unless `A` has simple spectrum.
pub fn conspicuous_poor_check(datum: &Datum, cfg: &ToleranceConfig) -> Result<Option<Conspicuous>> {
    let jt = jordan_type(&datum.a, cfg)?;
    if jt.eigenvalues.len() != datum.d() {
        return Ok(None);
    }
    let p = eigenbasis(&datum.a, &jt, cfg)?;
    let pi = inverse(&p, cfg)?;
    let conj: Vec<ComplexMatrix> = datum.b.iter().map(|m| &pi * m * &p).collect();
    let scale = conj.iter().map(max_abs).fold(0.0, f64::max);
    let thr = cfg.zero_tol_abs * scale;
    let d = datum.d();
    let mut positions = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j && conj.iter().all(|m| m[(i, j)].norm() <= thr) {
                positions.push((i, j));
            }
        }
    }
    Ok(Some(Conspicuous { p, positions }))
}

/// Dual pair `(P e_j, P^{-*} e_i)` for a common zero at `(i, j)`.
fn conspicuous_witness(c: &Conspicuous, (i, j): (usize, usize), cfg: &ToleranceConfig) -> Result<(ComplexVector, ComplexVector)> {
    let pi = inverse(&c.p, cfg)?;
    let v = c.p.column(j).into_owned();
    let w = pi.row(i).adjoint();
    Ok((normalize_phase(&v), normalize_phase(&w)))
}

/// Transitivity of `Λ(𝐀)`. Simple-spectrum `A` goes through the conspicuous test first;
/// for unconstrained `A` that test decides richness outright.
pub fn is_rich(datum: &Datum, cfg: &ToleranceConfig) -> Result<TransitivityVerdict> {
    let lam = lambda_space(datum, None, cfg)?;
    if let Some(c) = conspicuous_poor_check(datum, cfg)? {
        if let Some(&pos) = c.positions.first() {
            let (v, w) = conspicuous_witness(&c, pos, cfg)?;
            let residual = witness_residual(&lam, &v, &w);
            if residual <= cfg.zero_tol_abs {
                return Ok(TransitivityVerdict {
                    kind: VerdictKind::NotTransitive,
                    margin: residual,
                    witness: Some(Witness { v, w, residual }),
                    certificate: Some(Certificate::Conspicuous),
                });
            }
        } else if classify(&datum.a, cfg)?.kind == ClassKind::Unconstrained {
            return Ok(TransitivityVerdict {
                kind: VerdictKind::Transitive,
                margin: probe_margin(&lam, cfg),
                witness: None,
                certificate: Some(Certificate::GeneralizedToeplitz),
            });
        }
    }
    Ok(is_transitive(&lam, cfg))
}

/// Richness for exact data. Diagonal unconstrained `A` is settled by the zero pattern,
/// `d = 2` by the exact oracle on an exact basis of `Λ(𝐀)`; otherwise the numeric path runs
/// on the exactly computed `Λ(𝐀)`.
pub fn is_rich_exact(a: &ExactMatrix, b: &[ExactMatrix], cfg: &ToleranceConfig) -> Result<TransitivityVerdict> {
    let d = a.rows;
    if a.cols != d || b.iter().any(|m| (m.rows, m.cols) != (d, d)) {
        return Err(Error::Dimension("exact datum must be square and of one size".into()));
    }
    let mut seeds = vec![ExactMatrix::identity(d)];
    seeds.extend(b.iter().cloned());
    let (basis, _) = exact_adjoint_reach(a, &seeds)?;
    let lam = space_from_exact(&basis, cfg)?;
    if a.is_diagonal() {
        let eig: Vec<_> = (0..d).map(|i| a.at(i, i).clone()).collect();
        if exact_unconstrained(&eig) {
            let zero = (0..d)
                .flat_map(|i| (0..d).map(move |j| (i, j)))
                .find(|&(i, j)| i != j && b.iter().all(|m| m.at(i, j).is_zero()));
            return Ok(match zero {
                Some((i, j)) => {
                    let v = crate::linalg::unit_vector(d, j);
                    let w = crate::linalg::unit_vector(d, i);
                    let residual = witness_residual(&lam, &v, &w);
                    TransitivityVerdict {
                        kind: VerdictKind::NotTransitive,
                        margin: residual,
                        witness: Some(Witness { v, w, residual }),
                        certificate: Some(Certificate::ExactOracle),
                    }
                }
                None => TransitivityVerdict {
                    kind: VerdictKind::Transitive,
                    margin: probe_margin(&lam, cfg),
                    witness: None,
                    certificate: Some(Certificate::ExactOracle),
                },
            });
        }
    }
    Ok(is_transitive_with_exact(&lam, if d == 2 { Some(&basis) } else { None }, cfg))
}

/// `dim(Λ_N · A^N x₀) − 1`.
pub fn regularity_rank(datum: &Datum, x0: &ComplexVector, n: usize, cfg: &ToleranceConfig) -> Result<usize> {
    if x0.len() != datum.d() {
        return Err(Error::Dimension(format!("x0 has length {}, expected {}", x0.len(), datum.d())));
    }
    if x0.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let lam = lambda_space(datum, Some(n), cfg)?;
    let mut y = x0.clone();
    for _ in 0..n {
        y = &datum.a * y;
        let nrm = y.norm();
        y /= crate::linalg::cr(nrm);
    }
    let (dim, _) = space_action(&lam, &y, cfg)?;
    Ok(dim.saturating_sub(1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularDirection {
    pub direction: ComplexVector,
    /// `d − dim(Λ·v)`.
    pub corank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularStates {
    pub directions: Vec<SingularDirection>,
    /// True only when the list is known to be exhaustive.
    pub complete: bool,
}

/// Directions `v` with `Λ(𝐀)·v ≠ ℂ^d`.
pub fn singular_states(datum: &Datum, cfg: &ToleranceConfig) -> Result<SingularStates> {
    let lam = lambda_space(datum, None, cfg)?;
    let d = datum.d();
    let corank = |v: &ComplexVector| -> Result<usize> { Ok(d - space_action(&lam, v, cfg)?.0) };
    if let Some(c) = conspicuous_poor_check(datum, cfg)? {
        if c.positions.len() == 1 && classify(&datum.a, cfg)?.kind == ClassKind::Unconstrained {
            let (i0, j0) = c.positions[0];
            let (v, w) = conspicuous_witness(&c, (i0, j0), cfg)?;
            // Λ·v must be exactly the hyperplane w^⊥
            let (dim, img) = space_action(&lam, &v, cfg)?;
            let perp = img.iter().map(|y| w.dotc(y).norm()).fold(0.0, f64::max);
            if dim + 1 == d && perp <= 1e3 * cfg.zero_tol_abs {
                return Ok(SingularStates { directions: vec![SingularDirection { direction: v, corank: 1 }], complete: true });
            }
        }
    }
    let verdict = is_rich(datum, cfg)?;
    if verdict.is_transitive() {
        return Ok(SingularStates { directions: vec![], complete: true });
    }
    let mut found: Vec<SingularDirection> = Vec::new();
    if let Some(w) = &verdict.witness {
        if w.residual <= cfg.zero_tol_abs {
            found.push(SingularDirection { direction: w.v.clone(), corank: corank(&w.v)? });
        }
    }
    for k in 1..=4u64 {
        let c2 = cfg.with_seed(crate::random::split_seed(cfg.seed, 0x5106 + k));
        let restarts = crate::transitivity::default_restarts(&lam, &c2);
        if let Some(w) = witness_search(&lam, &c2, restarts) {
            if w.residual > cfg.zero_tol_abs {
                continue;
            }
            let dup = found.iter().any(|f| (f.direction.dotc(&w.v).norm() - 1.0).abs() < 1e-6);
            if !dup {
                found.push(SingularDirection { corank: corank(&w.v)?, direction: w.v });
            }
        }
    }
    Ok(SingularStates { directions: found, complete: false })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RealStatus {
    /// The datum has non-real entries; only the complex verdict applies.
    ComplexDatum,
    /// Real datum, complex-rich: `Λ` is spanned by real matrices, so it is rich over ℝ too.
    RichOverReals,
    /// Real datum with a real dual witness: poor over ℝ.
    PoorOverReals,
    /// Complex verdict does not settle the real question.
    Unverified,
}

pub fn real_status(datum: &Datum, verdict: &TransitivityVerdict) -> RealStatus {
    if !datum.is_real() {
        return RealStatus::ComplexDatum;
    }
    let realish = |v: &ComplexVector| v.iter().all(|z| z.im.abs() <= 1e-8);
    match (verdict.kind, &verdict.witness) {
        (VerdictKind::Transitive, _) => RealStatus::RichOverReals,
        (VerdictKind::NotTransitive, Some(w)) if realish(&w.v) && realish(&w.w) => RealStatus::PoorOverReals,
        _ => RealStatus::Unverified,
    }
}

#[derive(Debug, Clone)]
pub struct RegularityReport {
    pub stabilization_n: usize,
    pub lambda_dim: usize,
    pub rich: TransitivityVerdict,
    pub singular: SingularStates,
    /// `(P, i0, j0)` for the first common zero, 0-based.
    pub conspicuous: Option<(ComplexMatrix, usize, usize)>,
    pub real_status: RealStatus,
}

pub fn regularity_report(datum: &Datum, cfg: &ToleranceConfig) -> Result<RegularityReport> {
    let kr = lambda_space_detailed(datum, None, cfg)?;
    let rich = is_rich(datum, cfg)?;
    let singular = if rich.is_transitive() {
        SingularStates { directions: vec![], complete: true }
    } else {
        singular_states(datum, cfg)?
    };
    let conspicuous = conspicuous_poor_check(datum, cfg)?
        .and_then(|c| c.positions.first().map(|&(i, j)| (c.p.clone(), i, j)));
    Ok(RegularityReport {
        stabilization_n: kr.stabilization_n,
        lambda_dim: kr.space.dim(),
        real_status: real_status(datum, &rich),
        rich,
        singular,
        conspicuous,
    })
}
