//! Dense complex linear algebra with tolerance-controlled rank decisions.
//!
//! Matrices are vectorized column-major, so `vec(B)` is `B.as_slice()` and
//! `vec(A B C) = (Cᵀ ⊗ A) vec(B)`.

pub mod exact;

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// `E_{ij}` with 0-based indices.
pub fn unit_matrix(rows: usize, cols: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    m[(i, j)] = ONE;
    m
}

/// `e_i` in `ℂ^n`, 0-based.
pub fn unit_vector(n: usize, i: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(n);
    v[i] = ONE;
    v
}

pub fn diag(values: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&DVector::from_column_slice(values))
}

pub fn real_diag(values: &[f64]) -> ComplexMatrix {
    diag(&values.iter().map(|&x| cr(x)).collect::<Vec<_>>())
}

pub fn from_real_rows(rows: &[&[f64]]) -> ComplexMatrix {
    let r = rows.len();
    let c = if r == 0 { 0 } else { rows[0].len() };
    DMatrix::from_fn(r, c, |i, j| cr(rows[i][j]))
}

/// Jordan block `J_t(λ)`: λ on the diagonal, ones on the superdiagonal.
pub fn jordan_block(t: usize, lambda: Complex64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(t, t);
    for i in 0..t {
        m[(i, i)] = lambda;
        if i + 1 < t {
            m[(i, i + 1)] = ONE;
        }
    }
    m
}

pub fn block_diag(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = ComplexMatrix::zeros(n, m);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

pub fn vectorize(m: &ComplexMatrix) -> ComplexVector {
    DVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &[Complex64], rows: usize, cols: usize) -> ComplexMatrix {
    DMatrix::from_column_slice(rows, cols, v)
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn is_real(m: &ComplexMatrix, tol: f64) -> bool {
    m.iter().all(|z| z.im.abs() <= tol)
}

/// Thin SVD with singular values sorted in decreasing order.
pub struct Svd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v_t: ComplexMatrix,
}

fn to_faer(m: &ComplexMatrix) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn svd(m: &ComplexMatrix) -> Svd {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Svd {
            u: ComplexMatrix::zeros(r, 0),
            s: vec![],
            v_t: ComplexMatrix::zeros(0, c),
        };
    }
    let k = r.min(c);
    match to_faer(m).thin_svd() {
        Ok(dec) => {
            let (fu, fs, fv) = (dec.U(), dec.S().column_vector(), dec.V());
            Svd {
                u: ComplexMatrix::from_fn(r, k, |i, j| fu[(i, j)]),
                s: (0..k).map(|j| fs[j].re).collect(),
                v_t: ComplexMatrix::from_fn(k, c, |i, j| fv[(j, i)].conj()),
            }
        }
        // faer only fails on non-convergence; fall back to nalgebra.
        Err(_) => {
            let dec = m.clone().svd(true, true);
            let u = dec.u.expect("u requested");
            let v_t = dec.v_t.expect("v_t requested");
            let s: Vec<f64> = dec.singular_values.iter().copied().collect();
            let mut idx: Vec<usize> = (0..s.len()).collect();
            idx.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
            Svd {
                u: ComplexMatrix::from_fn(r, k, |i, j| u[(i, idx[j])]),
                s: idx.iter().map(|&j| s[j]).collect(),
                v_t: ComplexMatrix::from_fn(k, c, |i, j| v_t[(idx[i], j)]),
            }
        }
    }
}

pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return vec![];
    }
    let mut s = to_faer(m)
        .singular_values()
        .unwrap_or_else(|_| m.singular_values().iter().copied().collect());
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values at or above `max(rel * σ_max, abs_floor)`.
pub fn rank_from_sv(s: &[f64], rel: f64, abs_floor: f64) -> usize {
    let smax = s.first().copied().unwrap_or(0.0);
    if smax <= 0.0 || smax < abs_floor {
        return 0;
    }
    let thr = (rel * smax).max(abs_floor);
    s.iter().filter(|&&x| x >= thr).count()
}

pub fn rank(m: &ComplexMatrix, rel: f64) -> usize {
    rank_from_sv(&singular_values(m), rel, 0.0)
}

/// Orthonormal basis (as columns) of the column space.
pub fn orth(m: &ComplexMatrix, rel: f64, abs_floor: f64) -> ComplexMatrix {
    let d = svd(m);
    let r = rank_from_sv(&d.s, rel, abs_floor);
    d.u.columns(0, r).into_owned()
}

/// Orthonormal basis (as columns) of the right null space; `rel` is relative to σ_max.
pub fn nullspace(m: &ComplexMatrix, rel: f64) -> ComplexMatrix {
    let (r, c) = m.shape();
    if c == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    if r == 0 {
        return identity(c);
    }
    // Pad to at least square so the thin SVD returns all of V.
    let padded = if r < c {
        let mut p = ComplexMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let d = svd(&padded);
    let rk = rank_from_sv(&d.s, rel, 0.0);
    let n = c - rk;
    ComplexMatrix::from_fn(c, n, |i, k| d.v_t[(rk + k, i)].conj())
}

/// Null space where singular values below `max(rel * σ_max, abs)` count as zero.
pub fn nullspace_abs(m: &ComplexMatrix, rel: f64, abs: f64) -> ComplexMatrix {
    let (r, c) = m.shape();
    if c == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    if r == 0 {
        return identity(c);
    }
    let padded = if r < c {
        let mut p = ComplexMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let d = svd(&padded);
    let smax = d.s.first().copied().unwrap_or(0.0);
    let thr = (rel * smax).max(abs);
    let rk = d.s.iter().filter(|&&x| x > thr).count();
    ComplexMatrix::from_fn(c, c - rk, |i, k| d.v_t[(rk + k, i)].conj())
}

/// Least-squares solve of `m x = b` through the SVD, cutting singular values below `rel * σ_max`.
pub fn lstsq(m: &ComplexMatrix, b: &ComplexVector, rel: f64) -> ComplexVector {
    let d = svd(m);
    let smax = d.s.first().copied().unwrap_or(0.0);
    let mut x = ComplexVector::zeros(m.ncols());
    for (k, &s) in d.s.iter().enumerate() {
        if s <= rel * smax || s == 0.0 {
            continue;
        }
        let coef = d.u.column(k).dotc(b) / cr(s);
        x += d.v_t.row(k).adjoint() * coef;
    }
    x
}

/// Inverse with a conditioning check: `σ_min / σ_max` must exceed `zero_tol_abs`.
pub fn inverse(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("expected square matrix, got {:?}", a.shape())));
    }
    let s = singular_values(a);
    let smax = s.first().copied().unwrap_or(0.0);
    let smin = s.last().copied().unwrap_or(0.0);
    if smax == 0.0 || smin / smax <= cfg.zero_tol_abs {
        return Err(Error::SingularMatrix(format!(
            "condition estimate {:.3e} exceeds 1/zero_tol",
            if smin > 0.0 { smax / smin } else { f64::INFINITY }
        )));
    }
    a.clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularMatrix("LU inversion failed".into()))
}

/// Eigenvalues of a square complex matrix.
pub fn eigenvalues(a: &ComplexMatrix) -> Vec<Complex64> {
    let n = a.nrows();
    if n == 0 {
        return vec![];
    }
    match to_faer(a).eigenvalues() {
        Ok(ev) => ev,
        Err(_) => {
            let (_, t) = a.clone().schur().unpack();
            (0..n).map(|i| t[(i, i)]).collect()
        }
    }
}

/// Unit eigenvector of a Hermitian matrix for its smallest eigenvalue.
pub fn hermitian_min_eig(h: &ComplexMatrix) -> (f64, ComplexVector) {
    let n = h.nrows();
    if let Ok(e) = to_faer(h).self_adjoint_eigen(faer::Side::Lower) {
        let (fs, fu) = (e.S().column_vector(), e.U());
        return (fs[0].re, ComplexVector::from_fn(n, |i, _| fu[(i, 0)]));
    }
    let e = nalgebra::SymmetricEigen::new(h.clone());
    let best = (0..n).min_by(|&i, &j| e.eigenvalues[i].total_cmp(&e.eigenvalues[j])).unwrap_or(0);
    (e.eigenvalues[best], e.eigenvectors.column(best).into_owned())
}

/// Scale a vector so its largest entry is real and positive, then normalize.
pub fn normalize_phase(v: &ComplexVector) -> ComplexVector {
    let mut k = 0;
    for i in 0..v.len() {
        if v[i].norm() > v[k].norm() + 1e-14 {
            k = i;
        }
    }
    let nrm = v.norm();
    if nrm == 0.0 {
        return v.clone();
    }
    let ph = v[k] / cr(v[k].norm());
    v.map(|z| z / ph / cr(nrm))
}

/// Subspace of `rows × cols` matrices with a Frobenius-orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSpace {
    pub ambient_rows: usize,
    pub ambient_cols: usize,
    pub basis: Vec<ComplexMatrix>,
    pub tol: f64,
}

impl MatrixSpace {
    pub fn zero(rows: usize, cols: usize, tol: f64) -> Self {
        MatrixSpace { ambient_rows: rows, ambient_cols: cols, basis: vec![], tol }
    }

    pub fn full(rows: usize, cols: usize, tol: f64) -> Self {
        let mut basis = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                basis.push(unit_matrix(rows, cols, i, j));
            }
        }
        MatrixSpace { ambient_rows: rows, ambient_cols: cols, basis, tol }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_rows * self.ambient_cols
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    /// Basis vectors `vec(L_k)` as columns of a `(rows·cols) × dim` matrix.
    pub fn columns(&self) -> ComplexMatrix {
        let n = self.ambient_dim();
        let mut out = ComplexMatrix::zeros(n, self.dim());
        for (k, b) in self.basis.iter().enumerate() {
            out.column_mut(k).copy_from_slice(b.as_slice());
        }
        out
    }

    pub fn from_columns(cols: &ComplexMatrix, rows: usize, ncols: usize, tol: f64) -> Self {
        let basis = (0..cols.ncols())
            .map(|k| unvectorize(cols.column(k).as_slice(), rows, ncols))
            .collect();
        MatrixSpace { ambient_rows: rows, ambient_cols: ncols, basis, tol }
    }

    /// Orthogonal projection of `m` onto the space.
    pub fn project(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.ambient_rows, self.ambient_cols);
        for b in &self.basis {
            let c = b.dotc(m);
            out += b * c;
        }
        out
    }

    pub fn contains(&self, m: &ComplexMatrix, rel: f64) -> bool {
        let r = m - self.project(m);
        r.norm() <= rel * m.norm().max(f64::MIN_POSITIVE)
    }

    /// Conjugated space `P · Λ · Q` (re-orthonormalized).
    pub fn transform(&self, p: &ComplexMatrix, q: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        let mats: Vec<ComplexMatrix> = self.basis.iter().map(|b| p * b * q).collect();
        if mats.is_empty() {
            return Ok(MatrixSpace::zero(p.nrows(), q.ncols(), self.tol));
        }
        span_basis(&mats, cfg)
    }

    /// `t × K` matrix whose columns are `L_k v`.
    pub fn stacked_action(&self, v: &ComplexVector) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.ambient_rows, self.dim());
        for (k, b) in self.basis.iter().enumerate() {
            out.set_column(k, &(b * v));
        }
        out
    }
}

/// Linear operator on vectorized `elem_rows × elem_cols` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    pub dim: usize,
    pub matrix: ComplexMatrix,
    pub elem_rows: usize,
    pub elem_cols: usize,
}

impl LinearOperator {
    pub fn new(matrix: ComplexMatrix, elem_rows: usize, elem_cols: usize) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() != elem_rows * elem_cols {
            return Err(Error::Dimension(format!(
                "operator of shape {:?} cannot act on {}x{} matrices",
                matrix.shape(),
                elem_rows,
                elem_cols
            )));
        }
        Ok(LinearOperator { dim: matrix.nrows(), matrix, elem_rows, elem_cols })
    }

    pub fn apply(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.matrix * vectorize(m);
        unvectorize(v.as_slice(), self.elem_rows, self.elem_cols)
    }

    pub fn compose(&self, other: &LinearOperator) -> LinearOperator {
        LinearOperator {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
            elem_rows: self.elem_rows,
            elem_cols: self.elem_cols,
        }
    }
}

fn check_shapes(mats: &[ComplexMatrix]) -> Result<Option<(usize, usize)>> {
    let Some(first) = mats.first() else { return Ok(None) };
    let shape = first.shape();
    for m in mats {
        if m.shape() != shape {
            return Err(Error::Dimension(format!("{:?} vs {:?}", m.shape(), shape)));
        }
    }
    Ok(Some(shape))
}

/// Orthonormal basis of the span of `mats`.
pub fn span_basis(mats: &[ComplexMatrix], cfg: &ToleranceConfig) -> Result<MatrixSpace> {
    let Some((r, c)) = check_shapes(mats)? else {
        return Ok(MatrixSpace::zero(0, 0, cfg.rank_tol_rel));
    };
    let mut cols = ComplexMatrix::zeros(r * c, mats.len());
    for (k, m) in mats.iter().enumerate() {
        cols.column_mut(k).copy_from_slice(m.as_slice());
    }
    let q = orth(&cols, cfg.rank_tol_rel, 0.0);
    Ok(MatrixSpace::from_columns(&q, r, c, cfg.rank_tol_rel))
}

/// Same as [`span_basis`] but keeps the requested ambient shape for empty input.
pub fn span_basis_shaped(mats: &[ComplexMatrix], rows: usize, cols: usize, cfg: &ToleranceConfig) -> Result<MatrixSpace> {
    if mats.is_empty() {
        return Ok(MatrixSpace::zero(rows, cols, cfg.rank_tol_rel));
    }
    let s = span_basis(mats, cfg)?;
    if (s.ambient_rows, s.ambient_cols) != (rows, cols) {
        return Err(Error::Dimension(format!(
            "expected {}x{}, got {}x{}",
            rows, cols, s.ambient_rows, s.ambient_cols
        )));
    }
    Ok(s)
}

/// `Ad_A : B ↦ A B A⁻¹`, realized as `(A⁻¹)ᵀ ⊗ A` on column-major vectors.
pub fn adjoint_operator(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<LinearOperator> {
    let inv = inverse(a, cfg)?;
    let d = a.nrows();
    LinearOperator::new(kron(&inv.transpose(), a), d, d)
}

/// Result of a Krylov iteration, with the first `N` at which the span stopped growing.
#[derive(Debug, Clone)]
pub struct KrylovResult {
    pub space: MatrixSpace,
    pub stabilization_n: usize,
    pub stabilized: bool,
}

/// Span of `{H^t v_i : 0 ≤ t < N}`.
pub fn krylov_reach(h: &LinearOperator, seeds: &[ComplexMatrix], n: usize, cfg: &ToleranceConfig) -> Result<MatrixSpace> {
    if n == 0 {
        return Err(Error::Format("N must be at least 1".into()));
    }
    Ok(krylov_reach_detailed(h, seeds, Some(n), cfg)?.space)
}

/// Krylov reach; `n = None` iterates until the span stabilizes.
pub fn krylov_reach_detailed(
    h: &LinearOperator,
    seeds: &[ComplexMatrix],
    n: Option<usize>,
    cfg: &ToleranceConfig,
) -> Result<KrylovResult> {
    for s in seeds {
        if s.shape() != (h.elem_rows, h.elem_cols) {
            return Err(Error::Dimension(format!(
                "seed {:?} vs operator on {}x{}",
                s.shape(),
                h.elem_rows,
                h.elem_cols
            )));
        }
    }
    let dim = h.dim;
    let limit = n.unwrap_or(dim.max(1));
    let mut seed_cols = ComplexMatrix::zeros(dim, seeds.len());
    for (k, s) in seeds.iter().enumerate() {
        seed_cols.column_mut(k).copy_from_slice(s.as_slice());
    }
    let mut q = orth(&seed_cols, cfg.rank_tol_rel, 0.0);
    let mut fresh = q.clone();
    let mut steps = 1;
    let mut stabilized = fresh.ncols() == 0;
    while steps < limit && fresh.ncols() > 0 && q.ncols() < dim {
        let mut cand = &h.matrix * &fresh;
        for k in 0..cand.ncols() {
            let nrm = cand.column(k).norm();
            if nrm > 0.0 {
                cand.column_mut(k).scale_mut(1.0 / nrm);
            }
        }
        let new = extend_basis(&q, &cand, cfg.rank_tol_rel);
        if new.ncols() == 0 {
            stabilized = true;
            break;
        }
        q = concat_cols(&q, &new);
        fresh = new;
        steps += 1;
    }
    if q.ncols() == dim || fresh.ncols() == 0 {
        stabilized = true;
    }
    if !stabilized && n.is_none() {
        stabilized = true;
    }
    Ok(KrylovResult {
        space: MatrixSpace::from_columns(&q, h.elem_rows, h.elem_cols, cfg.rank_tol_rel),
        stabilization_n: steps,
        stabilized,
    })
}

pub fn concat_cols(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.nrows().max(b.nrows()), a.ncols() + b.ncols());
    if a.ncols() > 0 {
        out.view_mut((0, 0), a.shape()).copy_from(a);
    }
    if b.ncols() > 0 {
        out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    }
    out
}

/// Orthonormal directions of `cand` not already in span(`q`) (two Gram-Schmidt passes, then SVD).
pub fn extend_basis(q: &ComplexMatrix, cand: &ComplexMatrix, rel: f64) -> ComplexMatrix {
    if cand.ncols() == 0 {
        return ComplexMatrix::zeros(cand.nrows(), 0);
    }
    let smax = singular_values(cand).first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return ComplexMatrix::zeros(cand.nrows(), 0);
    }
    let mut r = cand.clone();
    if q.ncols() > 0 {
        for _ in 0..2 {
            let coeff = q.adjoint() * &r;
            r -= q * coeff;
        }
    }
    let d = svd(&r);
    let thr = rel * smax;
    let k = d.s.iter().filter(|&&x| x >= thr).count();
    let mut new = d.u.columns(0, k).into_owned();
    if q.ncols() > 0 && k > 0 {
        let coeff = q.adjoint() * &new;
        new -= q * coeff;
        for j in 0..k {
            let nrm = new.column(j).norm();
            new.column_mut(j).scale_mut(1.0 / nrm);
        }
        // re-orthonormalize among themselves
        let d2 = svd(&new);
        new = d2.u.columns(0, k.min(d2.s.len())).into_owned();
    }
    new
}

/// Orthonormal basis of `Λ·v` and its dimension.
pub fn space_action(space: &MatrixSpace, v: &ComplexVector, cfg: &ToleranceConfig) -> Result<(usize, Vec<ComplexVector>)> {
    if v.len() != space.ambient_cols {
        return Err(Error::Dimension(format!("vector of length {} vs {} columns", v.len(), space.ambient_cols)));
    }
    let nrm = v.norm();
    if nrm == 0.0 {
        return Err(Error::ZeroVector);
    }
    if space.dim() == 0 {
        return Ok((0, vec![]));
    }
    let m = space.stacked_action(v);
    let q = orth(&m, cfg.rank_tol_rel, cfg.zero_tol_abs * nrm);
    let basis = (0..q.ncols()).map(|k| q.column(k).into_owned()).collect();
    Ok((q.ncols(), basis))
}

/// Serializable matrix: `{"rows","cols","entries":[[re,im],...]}` row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                entries.push([m[(i, j)].re, m[(i, j)].im]);
            }
        }
        MatrixJson { rows: m.nrows(), cols: m.ncols(), entries }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Format("rows and cols must be positive".into()));
        }
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Format(format!(
                "expected {} entries, found {}",
                self.rows * self.cols,
                self.entries.len()
            )));
        }
        let m = DMatrix::from_fn(self.rows, self.cols, |i, j| {
            let e = self.entries[i * self.cols + j];
            cx(e[0], e[1])
        });
        if !is_finite(&m) {
            return Err(Error::Format("matrix entries must be finite".into()));
        }
        Ok(m)
    }
}

pub fn vector_to_json(v: &ComplexVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn vector_from_json(v: &[[f64; 2]]) -> ComplexVector {
    DVector::from_iterator(v.len(), v.iter().map(|e| cx(e[0], e[1])))
}
