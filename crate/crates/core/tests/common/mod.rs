#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use regrich::linalg::{block_diag, cr, diag, inverse, jordan_block, ComplexMatrix};
use regrich::random::{self, DetRng};
use regrich::ToleranceConfig;

pub fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

pub fn toroidal() -> ComplexMatrix {
    let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
    diag(&[cr(1.0), w, w * w])
}

pub const BIG_SIZES: [&[usize]; 5] = [&[4, 2, 1], &[3, 2], &[2], &[2], &[1]];

pub fn big_eigenvalues() -> [Complex64; 5] {
    let pi = std::f64::consts::PI;
    [
        Complex64::from_polar(1.0, pi / 2.0),
        Complex64::from_polar(1.0, 7.0 * pi / 6.0),
        Complex64::from_polar(1.0, 11.0 * pi / 6.0),
        Complex64::from_polar(2.0, pi / 6.0),
        Complex64::from_polar(2.0, 5.0 * pi / 6.0),
    ]
}

/// The d = 17 matrix: classes {λ1,λ2,λ3} on the unit circle and {λ4,λ5} of modulus 2.
pub fn big_matrix() -> ComplexMatrix {
    jordan_matrix(&big_eigenvalues(), &BIG_SIZES)
}

pub fn jordan_matrix(eigs: &[Complex64], sizes: &[&[usize]]) -> ComplexMatrix {
    let mut blocks = Vec::new();
    for (l, s) in eigs.iter().zip(sizes) {
        for &t in *s {
            blocks.push(jordan_block(t, *l));
        }
    }
    block_diag(&blocks)
}

/// `Σ_k Σ_{i,j} min(t_ki, t_kj)` over the blocks of each eigenvalue.
pub fn pop1_oracle(sizes: &[Vec<usize>]) -> usize {
    sizes
        .iter()
        .map(|s| s.iter().map(|&x| s.iter().map(|&y| x.min(y)).sum::<usize>()).sum::<usize>())
        .sum()
}

/// Random partition of `n` into parts, decreasing.
pub fn partition(rng: &mut DetRng, mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    while n > 0 {
        let p = rng.random_range(1..=n);
        out.push(p);
        n -= p;
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Random Jordan data of total size `d`: eigenvalues drawn so that mod-T classes,
/// sign pairs and generic values all occur.
pub fn random_jordan_data(rng: &mut DetRng, d: usize) -> (Vec<Complex64>, Vec<Vec<usize>>) {
    let mut left = d;
    let mut eigs: Vec<Complex64> = Vec::new();
    let mut sizes = Vec::new();
    while left > 0 {
        let mult = rng.random_range(1..=left);
        let lam = loop {
            let z = match rng.random_range(0..3) {
                0 => {
                    let q = [2u32, 3, 4, 6][rng.random_range(0..4)];
                    let k = rng.random_range(0..q);
                    let r = [1.0, 1.5][rng.random_range(0..2)];
                    Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / q as f64)
                }
                1 => Complex64::from_polar(rng.random_range(0.6..1.8), rng.random_range(0.0..std::f64::consts::TAU)),
                _ => cr([1.0, -1.0, 2.0, 0.5][rng.random_range(0..4)]),
            };
            if eigs.iter().all(|e| (e - z).norm() > 0.1) {
                break z;
            }
        };
        eigs.push(lam);
        sizes.push(partition(rng, mult));
        left -= mult;
    }
    (eigs, sizes)
}

/// `P J P⁻¹` with a random well-conditioned `P`.
pub fn conjugated(rng: &mut DetRng, j: &ComplexMatrix) -> ComplexMatrix {
    let p = random::well_conditioned(rng, j.nrows());
    let pi = inverse(&p, &cfg()).unwrap();
    &p * j * pi
}

/// Unconstrained diagonal `A`: generic moduli and arguments.
pub fn generic_diagonal(rng: &mut DetRng, d: usize) -> ComplexMatrix {
    let v: Vec<Complex64> = (0..d)
        .map(|_| Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();
    diag(&v)
}

/// Angle between complex lines.
pub fn line_angle(a: &[Complex64], b: &[Complex64]) -> f64 {
    let na: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    (ip.norm() / (na * nb)).min(1.0).acos()
}
