//! Polynomial parameterized systems `u ↦ A(u)` and the grid scan for singular constant inputs.

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, identity, inverse, space_action, svd, ComplexMatrix, ComplexVector};
use crate::richness::{is_rich, lambda_space, singular_states, Datum};
use crate::transitivity::{witness_residual, VerdictKind};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub exps: Vec<u32>,
    /// `[re, im]`.
    pub coef: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polynomial {
    pub monomials: Vec<Monomial>,
}

impl Polynomial {
    pub fn constant(c: f64) -> Self {
        Polynomial { monomials: vec![Monomial { exps: vec![], coef: [c, 0.0] }] }
    }

    /// Univariate `Σ c_e u^e` from real coefficients, lowest degree first.
    pub fn univariate(coefs: &[f64]) -> Self {
        let monomials = coefs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(e, &c)| Monomial { exps: vec![e as u32], coef: [c, 0.0] })
            .collect();
        Polynomial { monomials }
    }

    fn check(&self, m: usize) -> Result<()> {
        for mono in &self.monomials {
            // an empty exponent list is the constant monomial
            if !mono.exps.is_empty() && mono.exps.len() != m {
                return Err(Error::Format(format!("monomial has {} exponents, system has m = {}", mono.exps.len(), m)));
            }
            if !mono.coef.iter().all(|c| c.is_finite()) {
                return Err(Error::Format("non-finite coefficient".into()));
            }
        }
        Ok(())
    }

    pub fn eval(&self, u: &[f64]) -> Complex64 {
        self.monomials
            .iter()
            .map(|mono| {
                let p: f64 = mono.exps.iter().zip(u).map(|(&e, &x)| x.powi(e as i32)).product();
                Complex64::new(mono.coef[0], mono.coef[1]) * p
            })
            .sum()
    }

    /// `∂/∂u_k`, exactly.
    pub fn derivative(&self, k: usize) -> Polynomial {
        let monomials = self
            .monomials
            .iter()
            .filter(|mono| mono.exps.get(k).copied().unwrap_or(0) > 0)
            .map(|mono| {
                let e = mono.exps[k];
                let mut exps = mono.exps.clone();
                exps[k] -= 1;
                Monomial { exps, coef: [mono.coef[0] * e as f64, mono.coef[1] * e as f64] }
            })
            .collect();
        Polynomial { monomials }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSystem {
    pub d: usize,
    pub m: usize,
    pub entries: Vec<Vec<Polynomial>>,
    pub domain: Vec<[f64; 2]>,
}

impl ParamSystem {
    /// Checks shapes; returns warnings for domain corners where `A(u)` is singular.
    pub fn validate(&self, cfg: &ToleranceConfig) -> Result<Vec<String>> {
        if self.d == 0 || self.m == 0 {
            return Err(Error::Format("d and m must be positive".into()));
        }
        if self.entries.len() != self.d || self.entries.iter().any(|r| r.len() != self.d) {
            return Err(Error::Format(format!("entries must be {}x{}", self.d, self.d)));
        }
        for p in self.entries.iter().flatten() {
            p.check(self.m)?;
        }
        if self.domain.len() != self.m || self.domain.iter().any(|[lo, hi]| !(lo <= hi) || !lo.is_finite() || !hi.is_finite()) {
            return Err(Error::Format(format!("domain needs {} finite intervals [lo, hi]", self.m)));
        }
        let mut warnings = Vec::new();
        if self.m <= 12 {
            for mask in 0..(1usize << self.m) {
                let u: Vec<f64> = (0..self.m).map(|k| self.domain[k][(mask >> k) & 1]).collect();
                if inverse(&self.a(&u), cfg).is_err() {
                    warnings.push(format!("A(u) is singular at domain corner {:?}", u));
                }
            }
        }
        Ok(warnings)
    }

    pub fn a(&self, u: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.d, self.d, |i, j| self.entries[i][j].eval(u))
    }

    pub fn da(&self, k: usize, u: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.d, self.d, |i, j| self.entries[i][j].derivative(k).eval(u))
    }

    /// `P(u) Diag(2,1) P(u)⁻¹` with `P(u) = (1 u; u² 1)`, multiplied through by `1 − u³`,
    /// on `u ∈ [−0.5, 0.5]`.
    pub fn cubic_example() -> Self {
        let p = Polynomial::univariate;
        ParamSystem {
            d: 2,
            m: 1,
            entries: vec![vec![p(&[2.0, 0.0, 0.0, -1.0]), p(&[0.0, -1.0])], vec![p(&[0.0, 0.0, 1.0]), p(&[1.0, 0.0, 0.0, -2.0])]],
            domain: vec![[-0.5, 0.5]],
        }
    }

    pub fn constant(a: &ComplexMatrix, m: usize, domain: Vec<[f64; 2]>) -> Self {
        let d = a.nrows();
        let entries = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| Polynomial { monomials: vec![Monomial { exps: vec![0; m], coef: [a[(i, j)].re, a[(i, j)].im] }] })
                    .collect()
            })
            .collect();
        ParamSystem { d, m, entries, domain }
    }
}

/// `(A(u), B₁, …, B_m)` with `B_k = (∂_k A)(u) · A(u)⁻¹`.
pub fn eval_system(sys: &ParamSystem, u: &[f64], cfg: &ToleranceConfig) -> Result<Datum> {
    if u.len() != sys.m {
        return Err(Error::Dimension(format!("u has length {}, system has m = {}", u.len(), sys.m)));
    }
    let a = sys.a(u);
    let ai = inverse(&a, cfg).map_err(|_| Error::SingularMatrix(format!("A(u) is singular at u = {:?}", u)))?;
    let b = (0..sys.m).map(|k| sys.da(k, u) * &ai).collect();
    Datum::new(a, b, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoorCandidate {
    pub u: Vec<f64>,
    pub verdict: VerdictKind,
    /// `None` where `A(u)` has a repeated eigenvalue.
    pub detector: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinedRoot {
    pub u: Vec<f64>,
    pub corank: usize,
    /// Unit vector as `[re, im]` pairs.
    pub failing_direction: Vec<[f64; 2]>,
    /// `"conspicuous"`, `"numeric"` or `"witness-residual"`.
    pub certificate: String,
    pub detector: f64,
    /// Number of refined candidates merged into this root.
    pub cluster_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub grid_points: usize,
    pub identically_singular: bool,
    pub nonsimple_points: usize,
    pub poor_candidates: Vec<PoorCandidate>,
    pub refined_roots: Vec<RefinedRoot>,
    pub warnings: Vec<String>,
}

const MERGE_RADIUS: f64 = 1e-6;
const REFINE_TOL: f64 = 1e-10;

/// Eigenpairs of a simple-spectrum matrix with unit eigenvector columns.
fn eigenpairs(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Option<(Vec<Complex64>, ComplexMatrix)> {
    let d = a.nrows();
    let ev = eigenvalues(a);
    let scale = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for i in 0..d {
        for j in i + 1..d {
            if (ev[i] - ev[j]).norm() <= cfg.cluster_tol_rel * scale {
                return None;
            }
        }
    }
    let mut p = ComplexMatrix::zeros(d, d);
    for (j, &l) in ev.iter().enumerate() {
        let dec = svd(&(a - identity(d) * l));
        let v = dec.v_t.row(d - 1).adjoint();
        p.set_column(j, &v);
    }
    Some((ev, p))
}

/// Reorders eigenpairs to best match the previous eigenvectors.
fn track(prev: &ComplexMatrix, ev: Vec<Complex64>, p: ComplexMatrix) -> (Vec<Complex64>, ComplexMatrix) {
    let d = p.ncols();
    let mut used = vec![false; d];
    let mut order = vec![0; d];
    for (slot, o) in order.iter_mut().enumerate() {
        let best = (0..d)
            .filter(|&j| !used[j])
            .max_by(|&x, &y| {
                let ox = prev.column(slot).dotc(&p.column(x)).norm();
                let oy = prev.column(slot).dotc(&p.column(y)).norm();
                ox.partial_cmp(&oy).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(slot);
        used[best] = true;
        *o = best;
    }
    let ev2 = order.iter().map(|&j| ev[j]).collect();
    let p2 = ComplexMatrix::from_fn(d, d, |i, k| p[(i, order[k])]);
    (ev2, p2)
}

/// `D(u) = min_{i≠j} max_k |(P⁻¹B_kP)_{ij}|` with its argmin position.
fn detector_at(datum: &Datum, p: &ComplexMatrix, cfg: &ToleranceConfig) -> Option<(f64, (usize, usize))> {
    let pi = inverse(p, cfg).ok()?;
    let conj: Vec<ComplexMatrix> = datum.b.iter().map(|b| &pi * b * p).collect();
    let d = datum.d();
    let mut best: Option<(f64, (usize, usize))> = None;
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let v = conj.iter().map(|c| c[(i, j)].norm()).fold(0.0, f64::max);
            if best.is_none_or(|(b, _)| v < b) {
                best = Some((v, (i, j)));
            }
        }
    }
    best
}

fn detector(sys: &ParamSystem, u: &[f64], cfg: &ToleranceConfig) -> Option<(f64, (usize, usize), ComplexMatrix)> {
    let datum = eval_system(sys, u, cfg).ok()?;
    let (_, p) = eigenpairs(&datum.a, cfg)?;
    let (v, pos) = detector_at(&datum, &p, cfg)?;
    Some((v, pos, p))
}

fn d_value(sys: &ParamSystem, u: &[f64], cfg: &ToleranceConfig) -> f64 {
    detector(sys, u, cfg).map_or(f64::INFINITY, |x| x.0)
}

fn golden(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    [(f(mid), mid), (f1, x1), (f2, x2)]
        .into_iter()
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal))
        .map_or(mid, |x| x.1)
}

/// Entries `(P⁻¹B_kP)_{ij}` with columns pinned to 1 at fixed reference rows.
fn pinned_entries(sys: &ParamSystem, u: &[f64], pos: (usize, usize), refs: &[usize], cfg: &ToleranceConfig) -> Option<Vec<Complex64>> {
    let datum = eval_system(sys, u, cfg).ok()?;
    let (_, p0) = eigenpairs(&datum.a, cfg)?;
    let d = datum.d();
    // re-match columns to the reference rows by their dominant entry
    let mut p = ComplexMatrix::zeros(d, d);
    for (j, &r) in refs.iter().enumerate() {
        let col = (0..d).max_by(|&x, &y| p0[(r, x)].norm().partial_cmp(&p0[(r, y)].norm()).unwrap_or(std::cmp::Ordering::Equal))?;
        let s = p0[(r, col)];
        if s.norm() == 0.0 {
            return None;
        }
        p.set_column(j, &(p0.column(col) / s));
    }
    let pi = inverse(&p, cfg).ok()?;
    Some(datum.b.iter().map(|b| (&pi * b * &p)[pos]).collect())
}

/// Gauss–Newton on the complex failing entries, with a central-difference Jacobian.
fn polish(sys: &ParamSystem, u0: &[f64], cfg: &ToleranceConfig) -> Vec<f64> {
    let Some((_, pos, p)) = detector(sys, u0, cfg) else { return u0.to_vec() };
    let d = sys.d;
    let refs: Vec<usize> = (0..d)
        .map(|j| (0..d).max_by(|&x, &y| p[(x, j)].norm().partial_cmp(&p[(y, j)].norm()).unwrap_or(std::cmp::Ordering::Equal)).unwrap_or(j))
        .collect();
    let mut u = u0.to_vec();
    let m = sys.m;
    let resid = |u: &[f64]| -> Option<nalgebra::DVector<f64>> {
        let q = pinned_entries(sys, u, pos, &refs, cfg)?;
        Some(nalgebra::DVector::from_iterator(2 * q.len(), q.iter().flat_map(|z| [z.re, z.im])))
    };
    for _ in 0..30 {
        let Some(r) = resid(&u) else { break };
        if r.norm() < 1e-15 {
            break;
        }
        let h = 1e-6;
        let mut jac = nalgebra::DMatrix::<f64>::zeros(r.len(), m);
        let mut ok = true;
        for k in 0..m {
            let (mut up, mut dn) = (u.clone(), u.clone());
            up[k] += h;
            dn[k] -= h;
            match (resid(&up), resid(&dn)) {
                (Some(a), Some(b)) => jac.set_column(k, &((a - b) / (2.0 * h))),
                _ => ok = false,
            }
        }
        if !ok {
            break;
        }
        let Some(step) = jac.clone().svd(true, true).solve(&r, 1e-14).ok() else { break };
        let cand: Vec<f64> = u.iter().zip(step.iter()).map(|(x, s)| x - s).collect();
        // only accept steps that stay inside the refinement box and reduce the residual
        if cand.iter().zip(u0).any(|(x, y)| (x - y).abs() > 1e-6) {
            break;
        }
        match resid(&cand) {
            Some(rc) if rc.norm() < r.norm() => u = cand,
            _ => break,
        }
    }
    u
}

/// Golden-section along each axis from a grid minimum, then coordinate descent.
fn refine(sys: &ParamSystem, start: &[f64], steps: &[f64], cfg: &ToleranceConfig) -> Vec<f64> {
    let mut u = start.to_vec();
    let mut width: Vec<f64> = steps.to_vec();
    for _sweep in 0..if sys.m == 1 { 1 } else { 40 } {
        let before = u.clone();
        for k in 0..sys.m {
            let [lo, hi] = sys.domain[k];
            let a = (u[k] - width[k]).max(lo);
            let b = (u[k] + width[k]).min(hi);
            let f = |x: f64| {
                let mut v = u.clone();
                v[k] = x;
                d_value(sys, &v, cfg)
            };
            u[k] = golden(f, a, b, REFINE_TOL);
        }
        let moved = u.iter().zip(&before).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        for w in width.iter_mut() {
            *w = (*w * 0.5).max(4.0 * REFINE_TOL);
        }
        if moved < REFINE_TOL {
            break;
        }
    }
    polish(sys, &u, cfg)
}

fn threads() -> usize {
    std::env::var("REGRICH_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0).unwrap_or(0)
}

struct PointEval {
    verdict: Option<VerdictKind>,
    eig: Option<(Vec<Complex64>, ComplexMatrix)>,
    datum: Option<Datum>,
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Evaluates richness on the grid, refines dips of the detector, verifies each root.
pub fn scan(sys: &ParamSystem, grid: &[usize], cfg: &ToleranceConfig) -> Result<ScanReport> {
    let mut warnings = sys.validate(cfg)?;
    let counts: Vec<usize> = match grid.len() {
        1 => vec![grid[0]; sys.m],
        n if n == sys.m => grid.to_vec(),
        _ => return Err(Error::Format(format!("grid needs 1 or {} counts", sys.m))),
    };
    if counts.iter().any(|&c| c == 0) {
        return Err(Error::Format("grid counts must be positive".into()));
    }
    let axes: Vec<Vec<f64>> = (0..sys.m).map(|k| axis(sys.domain[k][0], sys.domain[k][1], counts[k])).collect();
    let total: usize = counts.iter().product();
    let point = |mut idx: usize| -> Vec<f64> {
        let mut u = vec![0.0; sys.m];
        for k in (0..sys.m).rev() {
            u[k] = axes[k][idx % counts[k]];
            idx /= counts[k];
        }
        u
    };
    let eval_point = |i: usize| -> PointEval {
        let u = point(i);
        match eval_system(sys, &u, cfg) {
            Ok(datum) => {
                let verdict = is_rich(&datum, cfg).ok().map(|v| v.kind);
                let eig = eigenpairs(&datum.a, cfg);
                PointEval { verdict, eig, datum: Some(datum) }
            }
            Err(_) => PointEval { verdict: None, eig: None, datum: None },
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads())
        .build()
        .map_err(|e| Error::Format(format!("thread pool: {}", e)))?;
    let mut evals: Vec<PointEval> = pool.install(|| (0..total).into_par_iter().map(eval_point).collect());

    // continuity tracking in grid order
    let mut prev: Option<ComplexMatrix> = None;
    for e in evals.iter_mut() {
        if let Some((ev, p)) = e.eig.take() {
            let (ev, p) = match &prev {
                Some(q) => track(q, ev, p),
                None => (ev, p),
            };
            prev = Some(p.clone());
            e.eig = Some((ev, p));
        }
    }
    let det: Vec<Option<f64>> = evals
        .iter()
        .map(|e| match (&e.datum, &e.eig) {
            (Some(datum), Some((_, p))) => detector_at(datum, p, cfg).map(|x| x.0),
            _ => None,
        })
        .collect();

    let mut singular_grid = 0;
    let mut nonsimple = 0;
    let mut poor = Vec::new();
    for (i, e) in evals.iter().enumerate() {
        if e.datum.is_none() {
            singular_grid += 1;
            continue;
        }
        if e.eig.is_none() {
            nonsimple += 1;
        }
        if let Some(v) = e.verdict {
            if v != VerdictKind::Transitive {
                poor.push(PoorCandidate { u: point(i), verdict: v, detector: det[i] });
            }
        }
    }
    if singular_grid > 0 {
        warnings.push(format!("A(u) singular at {} grid points", singular_grid));
    }
    if nonsimple > 0 {
        warnings.push(format!("{} grid points with repeated eigenvalues use the generic test only", nonsimple));
    }
    let valid = total - singular_grid;
    let identically_singular = valid > 0 && poor.len() == valid;
    let mut report = ScanReport {
        grid_points: total,
        identically_singular,
        nonsimple_points: nonsimple,
        poor_candidates: poor,
        refined_roots: vec![],
        warnings,
    };
    if identically_singular {
        report.warnings.push("identically singular system: every grid point is poor".into());
        return Ok(report);
    }

    // grid local minima of the detector along every axis
    let steps: Vec<f64> = (0..sys.m)
        .map(|k| if counts[k] > 1 { (sys.domain[k][1] - sys.domain[k][0]) / (counts[k] - 1) as f64 } else { 0.0 })
        .collect();
    let strides: Vec<usize> = (0..sys.m).map(|k| counts[k + 1..].iter().product()).collect();
    let mut starts = Vec::new();
    for i in 0..total {
        let Some(di) = det[i] else { continue };
        let mut is_min = true;
        for k in 0..sys.m {
            let pos = (i / strides[k]) % counts[k];
            for (ok, j) in [(pos > 0, i.wrapping_sub(strides[k])), (pos + 1 < counts[k], i + strides[k])] {
                if ok {
                    if let Some(dj) = det[j] {
                        if dj < di {
                            is_min = false;
                        }
                    }
                }
            }
        }
        let poor_here = evals[i].verdict.is_some_and(|v| v != VerdictKind::Transitive);
        if is_min || poor_here {
            starts.push(i);
        }
    }
    let refined: Vec<Vec<f64>> = pool.install(|| starts.par_iter().map(|&i| refine(sys, &point(i), &steps, cfg)).collect());

    let mut roots: Vec<RefinedRoot> = Vec::new();
    for u in refined {
        let Some(root) = verify_root(sys, &u, cfg)? else { continue };
        if let Some(r) = roots.iter_mut().find(|r| r.u.iter().zip(&root.u).all(|(a, b)| (a - b).abs() <= MERGE_RADIUS)) {
            r.cluster_size += 1;
            if root.detector < r.detector {
                let n = r.cluster_size;
                *r = RefinedRoot { cluster_size: n, ..root };
            }
        } else {
            roots.push(root);
        }
    }
    roots.sort_by(|a, b| a.u.partial_cmp(&b.u).unwrap_or(std::cmp::Ordering::Equal));
    report.refined_roots = roots;
    Ok(report)
}

/// Accepts `u` when the detector vanishes and the datum tests poor there.
fn verify_root(sys: &ParamSystem, u: &[f64], cfg: &ToleranceConfig) -> Result<Option<RefinedRoot>> {
    let Some((dval, (i, j), p)) = detector(sys, u, cfg) else { return Ok(None) };
    let datum = eval_system(sys, u, cfg)?;
    let scale = 1.0 + datum.b.iter().map(crate::linalg::max_abs).fold(0.0, f64::max);
    if dval > 1e-8 * scale {
        return Ok(None);
    }
    let pi = inverse(&p, cfg)?;
    let v: ComplexVector = p.column(j).normalize();
    let w: ComplexVector = pi.row(i).adjoint().normalize();
    let lam = lambda_space(&datum, None, cfg)?;
    let verdict = is_rich(&datum, cfg)?;
    let certificate = match verdict.kind {
        VerdictKind::NotTransitive => match verdict.certificate {
            Some(crate::transitivity::Certificate::Conspicuous) => "conspicuous",
            _ => "numeric",
        },
        _ if witness_residual(&lam, &v, &w) <= 1e-8 => "witness-residual",
        _ => return Ok(None),
    };
    let states = singular_states(&datum, cfg)?;
    let (dir, corank) = match states.directions.iter().max_by(|a, b| {
        a.direction.dotc(&v).norm().partial_cmp(&b.direction.dotc(&v).norm()).unwrap_or(std::cmp::Ordering::Equal)
    }) {
        Some(s) => (s.direction.clone(), s.corank),
        None => (v.clone(), datum.d() - space_action(&lam, &v, cfg)?.0),
    };
    let dir = crate::linalg::normalize_phase(&dir.normalize());
    Ok(Some(RefinedRoot {
        u: u.to_vec(),
        corank,
        failing_direction: dir.iter().map(|z| [z.re, z.im]).collect(),
        certificate: certificate.into(),
        detector: dval,
        cluster_size: 1,
    }))
}
