//! Exact arithmetic over the Gaussian rationals ℚ(i).

use crate::error::{Error, Result};
use crate::linalg::{cx, ComplexMatrix};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn from_fracs(re: (i64, i64), im: (i64, i64)) -> Result<Self> {
        if re.1 == 0 || im.1 == 0 {
            return Err(Error::Format("zero denominator".into()));
        }
        Ok(GaussRat::new(
            BigRational::new(re.0.into(), re.1.into()),
            BigRational::new(im.0.into(), im.1.into()),
        ))
    }

    pub fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussRat::new(BigRational::one(), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        cx(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::SingularMatrix("division by exact zero".into()));
        }
        let n = self.norm_sqr();
        Ok(GaussRat::new(&self.re / &n, -&self.im / &n))
    }

    /// Least common multiple of the two denominators.
    fn denom_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale both down to keep within range
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Div for &GaussRat {
    type Output = GaussRat;
    fn div(self, o: &GaussRat) -> GaussRat {
        self * &o.inv().expect("exact division by zero")
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

/// Gaussian integer, used for fraction-free elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
    fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    /// Exact division; the caller guarantees divisibility in ℤ[i].
    fn div_exact(&self, o: &GaussInt) -> GaussInt {
        let n = &o.re * &o.re + &o.im * &o.im;
        let re = &self.re * &o.re + &self.im * &o.im;
        let im = &self.im * &o.re - &self.re * &o.im;
        debug_assert!((&re % &n).is_zero() && (&im % &n).is_zero());
        GaussInt { re: re / &n, im: im / n }
    }
    fn to_rat(&self) -> GaussRat {
        GaussRat::new(BigRational::from_integer(self.re.clone()), BigRational::from_integer(self.im.clone()))
    }
}

/// Dense exact matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<GaussRat>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![GaussRat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = GaussRat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> GaussRat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, entries }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| GaussRat::from_ints(rows[i][j], 0))
    }

    pub fn at(&self, i: usize, j: usize) -> &GaussRat {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut GaussRat {
        &mut self.entries[i * self.cols + j]
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).to_complex())
    }

    pub fn mul(&self, o: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!("{}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        Ok(ExactMatrix::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = GaussRat::zero();
            for k in 0..self.cols {
                acc = &acc + &(self.at(i, k) * o.at(k, j));
            }
            acc
        }))
    }

    pub fn column(&self, j: usize) -> Vec<GaussRat> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GaussRat::is_zero)
    }

    /// Rows scaled by denominator lcms so that all entries are Gaussian integers.
    /// Returns the integer matrix and the product of the row multipliers.
    fn integerize(&self) -> (Vec<Vec<GaussInt>>, BigInt) {
        let mut total = BigInt::one();
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut l = BigInt::one();
            for j in 0..self.cols {
                l = l.lcm(&self.at(i, j).denom_lcm());
            }
            total *= &l;
            let lr = BigRational::from_integer(l);
            let row = (0..self.cols)
                .map(|j| {
                    let e = self.at(i, j);
                    GaussInt { re: (&e.re * &lr).to_integer(), im: (&e.im * &lr).to_integer() }
                })
                .collect();
            out.push(row);
        }
        (out, total)
    }

    /// Fraction-free Bareiss elimination. Returns (rank, last pivot, sign of row swaps).
    fn bareiss(&self) -> (usize, GaussInt, bool, BigInt) {
        let (mut m, mult) = self.integerize();
        let (r, c) = (self.rows, self.cols);
        let mut prev = GaussInt { re: BigInt::one(), im: BigInt::zero() };
        let mut rank = 0;
        let mut negate = false;
        let mut col = 0;
        while rank < r && col < c {
            let Some(p) = (rank..r).find(|&i| !m[i][col].is_zero()) else {
                col += 1;
                continue;
            };
            if p != rank {
                m.swap(p, rank);
                negate = !negate;
            }
            let piv = m[rank][col].clone();
            for i in rank + 1..r {
                let lead = m[i][col].clone();
                for j in col..c {
                    let v = piv.mul(&m[i][j]).sub(&lead.mul(&m[rank][j]));
                    m[i][j] = v.div_exact(&prev);
                }
            }
            prev = piv;
            rank += 1;
            col += 1;
        }
        (rank, prev, negate, mult)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.bareiss().0
    }

    pub fn determinant(&self) -> Result<GaussRat> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(GaussRat::one());
        }
        let (rank, last, negate, mult) = self.bareiss();
        if rank < self.rows {
            return Ok(GaussRat::zero());
        }
        let mut det = last.to_rat();
        if negate {
            det = -&det;
        }
        let m = BigRational::from_integer(mult);
        Ok(GaussRat::new(&det.re / &m, &det.im / &m))
    }
}

impl ExactMatrix {
    /// Gauss–Jordan inverse; singular input is an error.
    pub fn inverse(&self) -> Result<ExactMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = ExactMatrix::identity(n);
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !a.at(i, c).is_zero())
                .ok_or_else(|| Error::SingularMatrix("exact matrix is singular".into()))?;
            if p != c {
                for j in 0..n {
                    a.entries.swap(p * n + j, c * n + j);
                    inv.entries.swap(p * n + j, c * n + j);
                }
            }
            let piv = a.at(c, c).inv()?;
            for j in 0..n {
                *a.at_mut(c, j) = a.at(c, j) * &piv;
                *inv.at_mut(c, j) = inv.at(c, j) * &piv;
            }
            for i in 0..n {
                if i == c || a.at(i, c).is_zero() {
                    continue;
                }
                let f = a.at(i, c).clone();
                for j in 0..n {
                    *a.at_mut(i, j) = a.at(i, j) - &(&f * a.at(c, j));
                    *inv.at_mut(i, j) = inv.at(i, j) - &(&f * inv.at(c, j));
                }
            }
        }
        Ok(inv)
    }

    pub fn scale(&self, z: &GaussRat) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|e| e * z).collect() }
    }

    pub fn add(&self, o: &ExactMatrix) -> Result<ExactMatrix> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(Error::Dimension("shape mismatch in exact sum".into()));
        }
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.at(i, j).is_zero()))
    }

    /// Matrices as rows of one big matrix (row-major flattening), for rank tests.
    fn stack(mats: &[ExactMatrix]) -> ExactMatrix {
        let n = mats.first().map_or(0, |m| m.entries.len());
        ExactMatrix::from_fn(mats.len(), n, |i, j| mats[i].entries[j].clone())
    }
}

/// A maximal independent subfamily of `mats`, in order.
pub fn exact_independent(mats: &[ExactMatrix]) -> Vec<ExactMatrix> {
    let mut out: Vec<ExactMatrix> = Vec::new();
    for m in mats {
        let mut trial = out.clone();
        trial.push(m.clone());
        if ExactMatrix::stack(&trial).rank() == trial.len() {
            out = trial;
        }
    }
    out
}

/// Exact Krylov reach of `B ↦ A B A⁻¹` from `seeds`, iterated to stabilization.
/// Returns an independent spanning family and the number of steps used.
pub fn exact_adjoint_reach(a: &ExactMatrix, seeds: &[ExactMatrix]) -> Result<(Vec<ExactMatrix>, usize)> {
    let ainv = a.inverse()?;
    let mut basis = exact_independent(seeds);
    let mut fresh = basis.clone();
    let mut steps = 1;
    let cap = a.rows * a.rows;
    while !fresh.is_empty() && basis.len() < cap {
        let mut next = Vec::new();
        for f in &fresh {
            let img = a.mul(f)?.mul(&ainv)?;
            let mut trial = basis.clone();
            trial.push(img.clone());
            if ExactMatrix::stack(&trial).rank() == trial.len() {
                basis = trial;
                next.push(img);
            }
        }
        fresh = next;
        steps += 1;
    }
    Ok((basis, steps))
}

/// JSON exact matrix: `{"rows","cols","entries":[[[num,den],[num,den]],...]}` row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactMatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[[i64; 2]; 2]>,
}

impl ExactMatrixJson {
    pub fn to_matrix(&self) -> Result<ExactMatrix> {
        if self.entries.len() != self.rows * self.cols || self.rows == 0 || self.cols == 0 {
            return Err(Error::Format("exact matrix has wrong entry count".into()));
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(GaussRat::from_fracs((e[0][0], e[0][1]), (e[1][0], e[1][1]))?);
        }
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn from_matrix(m: &ExactMatrix) -> Result<Self> {
        let mut entries = Vec::with_capacity(m.entries.len());
        let f = |r: &BigRational| -> Result<[i64; 2]> {
            match (r.numer().to_i64(), r.denom().to_i64()) {
                (Some(n), Some(d)) => Ok([n, d]),
                _ => Err(Error::Format("rational does not fit in i64".into())),
            }
        };
        for e in &m.entries {
            entries.push([f(&e.re)?, f(&e.im)?]);
        }
        Ok(ExactMatrixJson { rows: m.rows, cols: m.cols, entries })
    }
}

/// Univariate polynomial over ℚ(i); coefficients from constant term up, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<GaussRat>);

impl Poly {
    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn trimmed(mut c: Vec<GaussRat>) -> Self {
        while c.last().is_some_and(GaussRat::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, z: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// Lagrange interpolation through `(x_i, y_i)` with distinct `x_i`.
    pub fn interpolate(xs: &[GaussRat], ys: &[GaussRat]) -> Poly {
        let n = xs.len();
        let mut coeffs = vec![GaussRat::zero(); n];
        for i in 0..n {
            if ys[i].is_zero() {
                continue;
            }
            // basis polynomial Π_{j≠i} (z - x_j) / (x_i - x_j)
            let mut basis = vec![GaussRat::one()];
            let mut denom = GaussRat::one();
            for j in 0..n {
                if j == i {
                    continue;
                }
                let mut next = vec![GaussRat::zero(); basis.len() + 1];
                for (k, b) in basis.iter().enumerate() {
                    next[k + 1] = &next[k + 1] + b;
                    next[k] = &next[k] - &(b * &xs[j]);
                }
                basis = next;
                denom = &denom * &(&xs[i] - &xs[j]);
            }
            let scale = &ys[i] / &denom;
            for (k, b) in basis.iter().enumerate() {
                coeffs[k] = &coeffs[k] + &(b * &scale);
            }
        }
        Poly::trimmed(coeffs)
    }

    fn rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let lead_inv = d.0[dd].inv().expect("nonzero leading coefficient");
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let q = &r[k] * &lead_inv;
            for (i, c) in d.0.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = &r[idx] - &(c * &q);
            }
            r.pop();
            while r.last().is_some_and(GaussRat::is_zero) {
                r.pop();
            }
        }
        Poly::trimmed(r)
    }

    fn monic(&self) -> Poly {
        match self.0.last() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.inv().expect("nonzero");
                Poly(self.0.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        -&self
    }
}

pub fn is_nonnegative(r: &BigRational) -> bool {
    !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussRat {
        GaussRat::from_fracs((n, d), (0, 1)).unwrap()
    }

    #[test]
    fn determinant_and_rank() {
        let m = ExactMatrix::from_int_rows(&[&[2, 1], &[4, 3]]);
        assert_eq!(m.determinant().unwrap(), GaussRat::from_ints(2, 0));
        let s = ExactMatrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(s.rank(), 1);
        let mut c = ExactMatrix::zeros(2, 2);
        *c.at_mut(0, 0) = q(1, 3);
        *c.at_mut(0, 1) = GaussRat::from_ints(0, 1);
        *c.at_mut(1, 0) = GaussRat::from_ints(0, -1);
        *c.at_mut(1, 1) = q(3, 1);
        // (1/3)(3) - (i)(-i) = 1 - 1 = 0
        assert!(c.determinant().unwrap().is_zero());
        assert_eq!(c.rank(), 1);
    }

    #[test]
    fn determinant_with_swap() {
        let m = ExactMatrix::from_int_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]);
        assert_eq!(m.determinant().unwrap(), GaussRat::from_ints(-5, 0));
    }

    #[test]
    fn interpolation_and_gcd() {
        // (z-1)(z-2) and (z-1)(z+3)
        let xs: Vec<_> = (0..3).map(|k| GaussRat::from_ints(k, 0)).collect();
        let f = |z: i64| GaussRat::from_ints((z - 1) * (z - 2), 0);
        let g = |z: i64| GaussRat::from_ints((z - 1) * (z + 3), 0);
        let pf = Poly::interpolate(&xs, &(0..3).map(f).collect::<Vec<_>>());
        let pg = Poly::interpolate(&xs, &(0..3).map(g).collect::<Vec<_>>());
        assert_eq!(pf.degree(), Some(2));
        let h = Poly::gcd(&pf, &pg);
        assert_eq!(h.degree(), Some(1));
        assert!(h.eval(&GaussRat::one()).is_zero());
    }
}
