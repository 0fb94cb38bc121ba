use crate::linalg::{ComplexMatrix, ComplexVector};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type DetRng = ChaCha8Rng;

pub fn rng(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Child seed for stream `k`, so parallel work stays reproducible.
pub fn split_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Complex64::new(gaussian(rng) * s, gaussian(rng) * s)
}

pub fn complex_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn real_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    DMatrix::from_fn(rows, cols, |_, _| Complex64::new(gaussian(rng), 0.0))
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexVector {
    let v = DVector::from_fn(n, |_, _| complex_gaussian(rng));
    let nrm = v.norm();
    v / Complex64::new(nrm, 0.0)
}

/// Identity plus a small random perturbation: invertible with condition number below ~3.
pub fn well_conditioned<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut p = complex_matrix(rng, n, n);
    let nrm = p.norm().max(1e-12);
    p *= Complex64::new(0.5 / nrm, 0.0);
    p + ComplexMatrix::identity(n, n)
}

/// Nonzero complex number with modulus bounded away from zero.
pub fn nonzero<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    loop {
        let z = complex_gaussian(rng);
        if z.norm() > 0.2 {
            return z;
        }
    }
}
