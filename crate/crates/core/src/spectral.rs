//! Jordan type, eigenvalue classes modulo roots of unity, and the rectangle partitions of `[1,d]²`.

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::linalg::{cr, identity, inverse, orth, svd, ComplexMatrix};
use crate::random;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::ops::Range;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JordanType {
    /// Distinct eigenvalues (cluster means).
    pub eigenvalues: Vec<Complex64>,
    /// Block sizes per eigenvalue, in decreasing order.
    pub block_sizes: Vec<Vec<usize>>,
    pub total: usize,
    pub warnings: Vec<String>,
}

impl JordanType {
    pub fn multiplicity(&self, k: usize) -> usize {
        self.block_sizes[k].iter().sum()
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.block_sizes.iter().all(|b| b.iter().all(|&t| t == 1))
    }

    pub fn is_derogatory(&self) -> bool {
        self.block_sizes.iter().any(|b| b.len() > 1)
    }

    pub fn block_count(&self) -> usize {
        self.block_sizes.iter().map(Vec::len).sum()
    }

    /// Argument in `[0, 2π)`.
    pub fn theta(&self, k: usize) -> f64 {
        canonical_angle(self.eigenvalues[k].arg()).0
    }

    /// Reorder eigenvalues (with their blocks) by `perm[new] = old`.
    pub fn permuted(&self, perm: &[usize]) -> JordanType {
        JordanType {
            eigenvalues: perm.iter().map(|&k| self.eigenvalues[k]).collect(),
            block_sizes: perm.iter().map(|&k| self.block_sizes[k].clone()).collect(),
            total: self.total,
            warnings: self.warnings.clone(),
        }
    }

    /// The block-diagonal Jordan matrix of this type.
    pub fn jordan_matrix(&self) -> ComplexMatrix {
        let mut blocks = Vec::new();
        for (k, sizes) in self.block_sizes.iter().enumerate() {
            for &t in sizes {
                blocks.push(crate::linalg::jordan_block(t, self.eigenvalues[k]));
            }
        }
        crate::linalg::block_diag(&blocks)
    }
}

/// Angle mapped into `[0, 2π)`; flags values that sat within `1e-9` of the cut.
fn canonical_angle(a: f64) -> (f64, bool) {
    let mut t = a.rem_euclid(TAU);
    let off = t.min(TAU - t);
    // roundoff-level angles are just positive reals; flag only the genuinely ambiguous band
    let near = off < 1e-9 && off > 1e-13;
    if off < 1e-9 {
        t = 0.0;
    }
    (t, near)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut i = i;
        while self.0[i] != r {
            let n = self.0[i];
            self.0[i] = r;
            i = n;
        }
        r
    }
}

fn matrix_power(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    let mut out = identity(m.nrows());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

fn spectral_norm(m: &ComplexMatrix) -> f64 {
    crate::linalg::singular_values(m).first().copied().unwrap_or(0.0)
}

/// Whether `(A - μ)^s` has `s` singular values negligible against its norm.
fn is_single_eigenvalue(a: &ComplexMatrix, mu: Complex64, s: usize) -> bool {
    let d = a.nrows();
    let shifted = a - identity(d) * mu;
    let p = matrix_power(&shifted, s);
    let sv = crate::linalg::singular_values(&p);
    let top = sv.first().copied().unwrap_or(0.0);
    // the floor covers powers that are nothing but roundoff
    let floor = 1e-13 * spectral_norm(&shifted).powi(s as i32);
    let thr = (1e-11 * top).max(floor).max(f64::MIN_POSITIVE);
    sv.iter().filter(|&&x| x <= thr).count() >= s
}

/// Orthonormal basis of the generalized eigenspace at `mu` of dimension `s`,
/// and the compressed nilpotent part `Q*(A - μ)Q`.
fn generalized_eigenspace(a: &ComplexMatrix, mu: Complex64, s: usize) -> (ComplexMatrix, ComplexMatrix) {
    let d = a.nrows();
    let shifted = a - identity(d) * mu;
    let p = matrix_power(&shifted, s);
    let dec = svd(&p);
    let q = ComplexMatrix::from_fn(d, s, |i, k| dec.v_t[(d - s + k, i)].conj());
    let n = q.adjoint() * &shifted * &q;
    (q, n)
}

/// Jordan type from eigenvalue clusters and the rank staircase of the nilpotent parts.
pub fn jordan_type(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<JordanType> {
    inverse(a, cfg)?;
    let d = a.nrows();
    let eigs = crate::linalg::eigenvalues(a);
    let norm = spectral_norm(a);
    let tight = cfg.cluster_tol_rel * norm;
    let loose = 1e-2 * norm;
    let mut edges: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let dist = (eigs[i] - eigs[j]).norm();
            if dist <= loose {
                edges.push((dist, i, j));
            }
        }
    }
    edges.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    // a large Jordan block splits into a ring of eigenvalues whose sub-rings fail the test,
    // so whole loose components go first
    let mut uf = UnionFind((0..d).collect());
    {
        let mut comp = UnionFind((0..d).collect());
        for &(_, i, j) in &edges {
            let (ri, rj) = (comp.find(i), comp.find(j));
            if ri != rj {
                comp.0[ri] = rj;
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..d {
            let r = comp.find(i);
            groups.entry(r).or_default().push(i);
        }
        for m in groups.values().filter(|m| m.len() > 1) {
            let mean = m.iter().map(|&x| eigs[x]).sum::<Complex64>() / cr(m.len() as f64);
            if is_single_eigenvalue(a, mean, m.len()) {
                for &x in &m[1..] {
                    let (r0, rx) = (uf.find(m[0]), uf.find(x));
                    uf.0[rx] = r0;
                }
            }
        }
    }
    for &(dist, i, j) in &edges {
        let (ri, rj) = (uf.find(i), uf.find(j));
        if ri == rj {
            continue;
        }
        if dist <= tight {
            uf.0[ri] = rj;
            continue;
        }
        let members: Vec<usize> = (0..d).filter(|&x| {
            let r = uf.find(x);
            r == ri || r == rj
        }).collect();
        let mean = members.iter().map(|&x| eigs[x]).sum::<Complex64>() / cr(members.len() as f64);
        if is_single_eigenvalue(a, mean, members.len()) {
            uf.0[ri] = rj;
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..d {
        let r = uf.find(i);
        groups.entry(r).or_default().push(i);
    }
    let mut clusters: Vec<(Complex64, usize)> = groups
        .values()
        .map(|m| (m.iter().map(|&x| eigs[x]).sum::<Complex64>() / cr(m.len() as f64), m.len()))
        .collect();
    clusters.sort_by(|x, y| {
        let (tx, ty) = (canonical_angle(x.0.arg()).0, canonical_angle(y.0.arg()).0);
        (x.0.norm(), tx).partial_cmp(&(y.0.norm(), ty)).unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut warnings = Vec::new();
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            let dist = (clusters[i].0 - clusters[j].0).norm();
            if dist <= 10.0 * tight {
                warnings.push(format!(
                    "eigenvalue clusters {:.6}{:+.6}i and {:.6}{:+.6}i are within 10x of the clustering tolerance",
                    clusters[i].0.re, clusters[i].0.im, clusters[j].0.re, clusters[j].0.im
                ));
            }
        }
        let (t, near) = canonical_angle(clusters[i].0.arg());
        if near || (t > 0.0 && t < 1e-9) {
            warnings.push(format!("eigenvalue argument {:.3e} canonicalized at the branch cut", t));
        }
    }
    let mut block_sizes = Vec::new();
    for &(mu, s) in &clusters {
        let (_, n) = generalized_eigenspace(a, mu, s);
        block_sizes.push(staircase(&n, norm, cfg));
    }
    Ok(JordanType { eigenvalues: clusters.iter().map(|c| c.0).collect(), block_sizes, total: d, warnings })
}

/// Block sizes of an (approximately) nilpotent matrix from the ranks of its powers.
fn staircase(n: &ComplexMatrix, scale: f64, cfg: &ToleranceConfig) -> Vec<usize> {
    let s = n.nrows();
    let mut nullity = vec![0usize; s + 1];
    let mut p = identity(s);
    for k in 1..=s {
        p = &p * n;
        let thr = 10.0 * cfg.cluster_tol_rel * scale.max(1.0).powi(k as i32);
        let r = crate::linalg::rank_from_sv(&crate::linalg::singular_values(&p), 0.0, thr);
        nullity[k] = (s - r).max(nullity[k - 1]);
    }
    nullity[s] = s;
    // blocks of size >= k: nullity[k] - nullity[k-1]
    let mut at_least: Vec<usize> = (1..=s).map(|k| nullity[k] - nullity[k - 1]).collect();
    for k in (0..s.saturating_sub(1)).rev() {
        at_least[k] = at_least[k].max(at_least[k + 1]);
    }
    let mut sizes = Vec::new();
    for k in (1..=s).rev() {
        let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k, exact));
    }
    sizes
}

/// Columns forming a Jordan basis in the eigenvalue and block order of `jt`:
/// `P⁻¹ A P ≈ jt.jordan_matrix()`.
pub fn jordan_basis(a: &ComplexMatrix, jt: &JordanType, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    let d = a.nrows();
    let mut p = ComplexMatrix::zeros(d, d);
    let mut col = 0;
    for (k, sizes) in jt.block_sizes.iter().enumerate() {
        let s: usize = sizes.iter().sum();
        let (q, n) = generalized_eigenspace(a, jt.eigenvalues[k], s);
        let chains = nilpotent_chains(&n, sizes);
        let local = &q * chains;
        p.view_mut((0, col), (d, s)).copy_from(&local);
        col += s;
    }
    inverse(&p, cfg).map_err(|_| Error::SingularMatrix("Jordan basis is numerically singular".into()))?;
    Ok(p)
}

/// Chains `v, n v, ..., n^{k-1} v` for the prescribed block sizes, laid out as
/// columns `n^{k-1}v, ..., v` so that each block reads as `J_k(0)`.
fn nilpotent_chains(n: &ComplexMatrix, sizes: &[usize]) -> ComplexMatrix {
    let s = n.nrows();
    let kmax = sizes.iter().copied().max().unwrap_or(0);
    let kernel = |j: usize| -> ComplexMatrix {
        let nul: usize = sizes.iter().map(|&t| t.min(j)).sum();
        if nul == 0 {
            return ComplexMatrix::zeros(s, 0);
        }
        if nul == s {
            return identity(s);
        }
        let dec = svd(&matrix_power(n, j));
        ComplexMatrix::from_fn(s, nul, |i, c| dec.v_t[(s - nul + c, i)].conj())
    };
    let mut tops: Vec<(usize, crate::linalg::ComplexVector)> = Vec::new();
    for k in (1..=kmax).rev() {
        let count = sizes.iter().filter(|&&t| t == k).count();
        if count == 0 {
            continue;
        }
        let kk = kernel(k);
        let mut modulo = kernel(k - 1);
        for (l, u) in &tops {
            let img = matrix_power(n, l - k) * u;
            modulo = crate::linalg::concat_cols(&modulo, &ComplexMatrix::from_column_slice(s, 1, img.as_slice()));
        }
        let mq = if modulo.ncols() > 0 { orth(&modulo, 1e-10, 0.0) } else { modulo };
        let mut cand = kk.clone();
        if mq.ncols() > 0 {
            for _ in 0..2 {
                let c = mq.adjoint() * &cand;
                cand -= &mq * c;
            }
        }
        let dec = svd(&cand);
        for c in 0..count.min(dec.u.ncols()) {
            tops.push((k, dec.u.column(c).into_owned()));
        }
    }
    tops.sort_by(|x, y| y.0.cmp(&x.0));
    let mut out = ComplexMatrix::zeros(s, s);
    let mut col = 0;
    for (k, v) in &tops {
        for i in 0..*k {
            let p = matrix_power(n, k - 1 - i) * v;
            out.set_column(col + i, &p);
        }
        col += k;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModTClasses {
    pub class_of: Vec<usize>,
    pub c: usize,
    /// Smallest `q` with `(λ_i/λ_j)^q ≈ 1`, for related pairs `i < j`.
    pub detected_orders: BTreeMap<String, u32>,
}

/// Smallest `q ≤ max_q` with `(z)^q ≈ 1`, treating `z` as a ratio of eigenvalues.
pub fn torsion_order(z: Complex64, max_q: u32, tol: f64) -> Option<u32> {
    if z.norm().ln().abs() > tol {
        return None;
    }
    let th = z.arg();
    (1..=max_q).find(|&q| {
        let x = q as f64 * th / TAU;
        (x - x.round()).abs() * TAU <= tol * q as f64
    })
}

/// Classes of eigenvalues whose ratios are roots of unity.
pub fn mod_t_classes(jt: &JordanType, cfg: &ToleranceConfig) -> ModTClasses {
    let r = jt.eigenvalues.len();
    let tol = 10.0 * cfg.cluster_tol_rel;
    let mut uf = UnionFind((0..r).collect());
    let mut orders = BTreeMap::new();
    for i in 0..r {
        for j in i + 1..r {
            let z = jt.eigenvalues[i] / jt.eigenvalues[j];
            if let Some(q) = torsion_order(z, cfg.max_power_for_roots_of_unity, tol) {
                orders.insert(format!("{},{}", i, j), q);
                let (a, b) = (uf.find(i), uf.find(j));
                if a != b {
                    uf.0[a] = b;
                }
            }
        }
    }
    let mut label: BTreeMap<usize, usize> = BTreeMap::new();
    let mut class_of = Vec::with_capacity(r);
    for i in 0..r {
        let root = uf.find(i);
        let next = label.len();
        class_of.push(*label.entry(root).or_insert(next));
    }
    ModTClasses { class_of, c: label.len(), detected_orders: orders }
}

/// Value of a multiplicative order homomorphism on each class: `log|g| + κ φ(θ)`,
/// with `φ` vanishing on detected integer relations among class angles.
fn class_heights(jt: &JordanType, classes: &ModTClasses, cfg: &ToleranceConfig) -> (Vec<f64>, Vec<String>) {
    let c = classes.c;
    let mut reps = vec![None; c];
    for k in 0..jt.eigenvalues.len() {
        let cl = classes.class_of[k];
        let better = match reps[cl] {
            None => true,
            Some(j) => jt.theta(k) < jt.theta(j),
        };
        if better {
            reps[cl] = Some(k);
        }
    }
    let reps: Vec<usize> = reps.into_iter().map(|x| x.expect("every class has a member")).collect();
    let thetas: Vec<f64> = reps.iter().map(|&k| jt.theta(k)).collect();
    let mut warnings = Vec::new();
    let budget = 200_000f64;
    let bound = {
        let mut b = 6i64;
        while b > 0 && ((2 * b + 1) as f64).powi(c as i32) > budget {
            b -= 1;
        }
        b
    };
    let mut relations: Vec<Vec<i64>> = Vec::new();
    let tol = 10.0 * cfg.cluster_tol_rel;
    if bound == 0 && c > 0 {
        warnings.push(format!("{} classes: relation search among arguments skipped", c));
    } else if c > 0 {
        let mut n = vec![-bound; c];
        loop {
            if n.iter().any(|&x| x != 0) {
                let sum: f64 = n.iter().zip(&thetas).map(|(&k, &t)| k as f64 * t).sum();
                let weight: f64 = n.iter().map(|&k| k.unsigned_abs() as f64).sum();
                let z = Complex64::from_polar(1.0, sum);
                if torsion_order(z, cfg.max_power_for_roots_of_unity, tol * weight).is_some() {
                    relations.push(n.clone());
                }
            }
            let mut i = 0;
            loop {
                if i == c {
                    break;
                }
                n[i] += 1;
                if n[i] > bound {
                    n[i] = -bound;
                    i += 1;
                } else {
                    break;
                }
            }
            if i == c {
                break;
            }
        }
    }
    let mut rng = random::rng(random::split_seed(cfg.seed, 0x0dde));
    let mut phi: Vec<f64> = (0..c).map(|_| random::gaussian(&mut rng)).collect();
    if !relations.is_empty() {
        let rm = ComplexMatrix::from_fn(relations.len(), c, |i, j| cr(relations[i][j] as f64));
        let basis = orth(&rm.adjoint(), 1e-9, 0.0);
        let pv = crate::linalg::ComplexVector::from_iterator(c, phi.iter().map(|&x| cr(x)));
        let proj = &pv - &basis * (basis.adjoint() * &pv);
        phi = proj.iter().map(|z| z.re).collect();
    }
    let kappa = 1e-3;
    let h = reps.iter().zip(&phi).map(|(&k, &f)| jt.eigenvalues[k].norm().ln() + kappa * f).collect();
    (h, warnings)
}

/// Eigenvalues reordered into normal form: classes consecutive and increasing for the order
/// homomorphism, arguments increasing within each class. Returns the ordered type and classes.
pub fn normal_order(jt: &JordanType, cfg: &ToleranceConfig) -> (JordanType, ModTClasses) {
    let classes = mod_t_classes(jt, cfg);
    let (h, warnings) = class_heights(jt, &classes, cfg);
    let mut class_order: Vec<usize> = (0..classes.c).collect();
    class_order.sort_by(|&x, &y| h[x].partial_cmp(&h[y]).unwrap_or(std::cmp::Ordering::Equal).then(x.cmp(&y)));
    let (mut out, cls) = order_by_classes(jt, &classes, &class_order);
    out.warnings.extend(warnings);
    (out, cls)
}

/// Normal order for a prescribed order of the classes (`class_order[pos] = class`).
pub fn order_by_classes(jt: &JordanType, classes: &ModTClasses, class_order: &[usize]) -> (JordanType, ModTClasses) {
    let mut perm: Vec<usize> = Vec::with_capacity(jt.eigenvalues.len());
    for &cl in class_order {
        let mut members: Vec<usize> = (0..jt.eigenvalues.len()).filter(|&k| classes.class_of[k] == cl).collect();
        members.sort_by(|&x, &y| jt.theta(x).partial_cmp(&jt.theta(y)).unwrap_or(std::cmp::Ordering::Equal));
        perm.extend(members);
    }
    let out = jt.permuted(&perm);
    let mut rank = vec![0; classes.c];
    for (pos, &cl) in class_order.iter().enumerate() {
        rank[cl] = pos;
    }
    let class_of: Vec<usize> = perm.iter().map(|&k| rank[classes.class_of[k]]).collect();
    let mut orders = BTreeMap::new();
    let inv: Vec<usize> = {
        let mut v = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            v[old] = new;
        }
        v
    };
    for (key, &q) in &classes.detected_orders {
        let mut it = key.split(',').map(|x| x.parse::<usize>().unwrap_or(0));
        let (a, b) = (inv[it.next().unwrap_or(0)], inv[it.next().unwrap_or(0)]);
        orders.insert(format!("{},{}", a.min(b), a.max(b)), q);
    }
    (out, ModTClasses { class_of, c: classes.c, detected_orders: orders })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JRect {
    pub row_block: usize,
    pub col_block: usize,
    pub rows: Range<usize>,
    pub cols: Range<usize>,
    pub weight: usize,
    pub latitude: isize,
    pub e_rect: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ERect {
    pub row_eig: usize,
    pub col_eig: usize,
    pub rows: Range<usize>,
    pub cols: Range<usize>,
    /// `λ_row⁻¹ λ_col`.
    pub banner: Complex64,
    /// `θ_col - θ_row`, in `(-2π, 2π)`.
    pub argument: f64,
    pub equatorial: bool,
    pub weight: usize,
    pub c_rect: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CRect {
    pub row_class: usize,
    pub col_class: usize,
    pub rows: Range<usize>,
    pub cols: Range<usize>,
    /// Banner of any e-rectangle inside, as a representative of its class.
    pub banner: Complex64,
    pub equatorial: bool,
    pub weight: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RectangleDecomposition {
    pub d: usize,
    pub j_rectangles: Vec<JRect>,
    pub e_rectangles: Vec<ERect>,
    pub c_rectangles: Vec<CRect>,
    pub pop1: usize,
    /// Block index ranges: `blocks[b]` is the row/column interval of Jordan block `b`.
    pub blocks: Vec<Range<usize>>,
    pub eig_ranges: Vec<Range<usize>>,
    pub class_ranges: Vec<Range<usize>>,
}

impl RectangleDecomposition {
    /// Distinct banners with their total weights (the Ad-eigenvalue multiplicities, up to inversion).
    pub fn banner_weights(&self, tol: f64) -> Vec<(Complex64, usize)> {
        let mut out: Vec<(Complex64, usize)> = Vec::new();
        for e in &self.e_rectangles {
            match out.iter_mut().find(|(b, _)| (b - e.banner).norm() <= tol * b.norm().max(1.0)) {
                Some(slot) => slot.1 += e.weight,
                None => out.push((e.banner, e.weight)),
            }
        }
        out
    }

    pub fn partition_ranges(&self, layer: Layer) -> &[Range<usize>] {
        match layer {
            Layer::C => &self.class_ranges,
            Layer::E => &self.eig_ranges,
            Layer::J => &self.blocks,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    C,
    E,
    J,
}

/// The three rectangle partitions for a Jordan type in normal order.
pub fn rectangle_decomposition(jt: &JordanType, classes: &ModTClasses) -> Result<RectangleDecomposition> {
    let r = jt.eigenvalues.len();
    if classes.class_of.len() != r {
        return Err(Error::Dimension("class map does not match the eigenvalue list".into()));
    }
    // classes must be consecutive runs and angles must increase within a class
    let mut seen = vec![false; classes.c];
    for k in 0..r {
        let cl = classes.class_of[k];
        if k > 0 && classes.class_of[k - 1] == cl {
            if jt.theta(k) <= jt.theta(k - 1) {
                return Err(Error::Ordering(format!("arguments not increasing at eigenvalue {}", k)));
            }
            continue;
        }
        if seen[cl] {
            return Err(Error::Ordering(format!("class {} is not consecutive", cl)));
        }
        seen[cl] = true;
    }
    let mut blocks = Vec::new();
    let mut block_eig = Vec::new();
    let mut block_local = Vec::new();
    let mut eig_ranges = Vec::new();
    let mut at = 0;
    for (k, sizes) in jt.block_sizes.iter().enumerate() {
        let start = at;
        for (l, &t) in sizes.iter().enumerate() {
            blocks.push(at..at + t);
            block_eig.push(k);
            block_local.push(l);
            at += t;
        }
        eig_ranges.push(start..at);
    }
    let mut class_ranges: Vec<Range<usize>> = Vec::new();
    for k in 0..r {
        if k > 0 && classes.class_of[k] == classes.class_of[k - 1] {
            class_ranges.last_mut().expect("nonempty").end = eig_ranges[k].end;
        } else {
            class_ranges.push(eig_ranges[k].clone());
        }
    }
    let c = class_ranges.len();
    let mut c_rectangles = Vec::new();
    for a in 0..c {
        for b in 0..c {
            c_rectangles.push(CRect {
                row_class: a,
                col_class: b,
                rows: class_ranges[a].clone(),
                cols: class_ranges[b].clone(),
                banner: Complex64::new(1.0, 0.0),
                equatorial: a == b,
                weight: 0,
            });
        }
    }
    let mut e_rectangles = Vec::new();
    for k in 0..r {
        for l in 0..r {
            let (ck, cl) = (classes.class_of[k], classes.class_of[l]);
            let weight: usize = jt.block_sizes[k]
                .iter()
                .map(|&x| jt.block_sizes[l].iter().map(|&y| x.min(y)).sum::<usize>())
                .sum();
            let c_rect = ck * c + cl;
            let banner = jt.eigenvalues[l] / jt.eigenvalues[k];
            e_rectangles.push(ERect {
                row_eig: k,
                col_eig: l,
                rows: eig_ranges[k].clone(),
                cols: eig_ranges[l].clone(),
                banner,
                argument: jt.theta(l) - jt.theta(k),
                equatorial: k == l,
                weight,
                c_rect,
            });
            c_rectangles[c_rect].weight += weight;
        }
    }
    for cr_ in c_rectangles.iter_mut() {
        if let Some(e) = e_rectangles.iter().find(|e| e.c_rect == cr_.row_class * c + cr_.col_class) {
            cr_.banner = e.banner;
        }
    }
    let mut j_rectangles = Vec::new();
    for (a, ra) in blocks.iter().enumerate() {
        for (b, rb) in blocks.iter().enumerate() {
            j_rectangles.push(JRect {
                row_block: a,
                col_block: b,
                rows: ra.clone(),
                cols: rb.clone(),
                weight: ra.len().min(rb.len()),
                latitude: block_local[b] as isize - block_local[a] as isize,
                e_rect: block_eig[a] * r + block_eig[b],
            });
        }
    }
    let pop1 = e_rectangles.iter().filter(|e| e.equatorial).map(|e| e.weight).sum();
    Ok(RectangleDecomposition {
        d: jt.total,
        j_rectangles,
        e_rectangles,
        c_rectangles,
        pop1,
        blocks,
        eig_ranges,
        class_ranges,
    })
}

/// Jordan type in normal order, its classes and rectangles.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub jt: JordanType,
    pub classes: ModTClasses,
    pub rects: RectangleDecomposition,
}

pub fn analyze(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<SpectralData> {
    let raw = jordan_type(a, cfg)?;
    let (jt, classes) = normal_order(&raw, cfg);
    let rects = rectangle_decomposition(&jt, &classes)?;
    Ok(SpectralData { jt, classes, rects })
}

/// `acyc Ad_A`, the total weight of the equatorial e-rectangles.
pub fn acyclicity(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<usize> {
    Ok(analyze(a, cfg)?.rects.pop1)
}

/// `Σ_{x ∈ f, y ∈ g} min(x, y)`.
pub fn min_sum(f: &[usize], g: &[usize]) -> usize {
    f.iter().map(|&x| g.iter().map(|&y| x.min(y)).sum::<usize>()).sum()
}

/// Maximal geometric multiplicity of `Ad_A`, computed directly on the `d² × d²` operator.
pub fn adjoint_max_geometric_multiplicity(a: &ComplexMatrix, cfg: &ToleranceConfig, rank_tol: f64) -> Result<usize> {
    let op = crate::linalg::adjoint_operator(a, cfg)?;
    let data = analyze(a, cfg)?;
    let n = op.dim;
    let op_scale = crate::linalg::singular_values(&op.matrix).first().copied().unwrap_or(0.0);
    let mut best = 0;
    for (beta, _) in data.rects.banner_weights(1e-8) {
        // Ad_A acts on the e-rectangle (k,l) by λ_k/λ_l, the inverse banner
        let m = &op.matrix - identity(n) * (cr(1.0) / beta);
        let sv = crate::linalg::singular_values(&m);
        // measured against Ad_A itself: for scalar A the shifted operator is pure roundoff
        let r = crate::linalg::rank_from_sv(&sv, rank_tol, rank_tol * op_scale.max(beta.norm().recip()));
        best = best.max(n - r);
    }
    Ok(best)
}
