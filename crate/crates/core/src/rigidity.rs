//! Bounds on `rig₊ Ad_A`, verified witnesses, and the fiber codimension bound.
//!
//! Witnesses are assembled per c-rectangle ("island") in the Jordan basis and summed over
//! banner classes. Island tuples are seeded generic draws: once `rig₊` on an island is known
//! to be at most `r`, the tuples of length `r` that fail form a proper algebraic subset.

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::linalg::{
    adjoint_operator, identity, inverse, krylov_reach_detailed, span_basis, ComplexMatrix, MatrixSpace,
};
use crate::random;
use crate::spectral::{
    jordan_basis, jordan_type, normal_order, order_by_classes, rectangle_decomposition, CRect, JordanType,
    ModTClasses, RectangleDecomposition,
};
use crate::transitivity::{is_transitive, sudoku_transitive, TransitivityVerdict, VerdictKind};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RigidityReport {
    pub d: usize,
    pub c: usize,
    pub acyc: usize,
    /// Upper bound on `rig₊ Ad_A`.
    pub upper_bound: usize,
    #[serde(skip)]
    pub witness: Option<Vec<ComplexMatrix>>,
}

impl RigidityReport {
    /// Known interval for `rig₊ Ad_A`: `[2, certified witness length]`, or `[2, bound]`.
    pub fn known_interval(&self) -> (usize, usize) {
        (2, self.witness.as_ref().map_or(self.upper_bound, Vec::len))
    }

    /// `max(0, m + 1 − (w − 1))` for a certified witness of length `w`.
    pub fn fiber_codim_lower(&self, m: usize) -> Option<usize> {
        self.witness.as_ref().map(|w| (m + 1).saturating_sub(w.len() - 1))
    }
}

fn bound_from(d: usize, classes: &ModTClasses, rects: &RectangleDecomposition) -> usize {
    if classes.c == d {
        2
    } else {
        rects.pop1 - classes.c + 1
    }
}

/// `rig₊ Ad_A ≤ 2` when `c(A) = d`, else `≤ pop₁ − c + 1`.
pub fn rigidity_upper_bound(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<RigidityReport> {
    let d = a.nrows();
    if d < 2 {
        return Err(Error::Dimension("rigidity needs d >= 2".into()));
    }
    let jt = jordan_type(a, cfg)?;
    let (jt, classes) = normal_order(&jt, cfg);
    let rects = rectangle_decomposition(&jt, &classes)?;
    Ok(RigidityReport { d, c: classes.c, acyc: rects.pop1, upper_bound: bound_from(d, &classes, &rects), witness: None })
}

fn stage_err(stage: impl Into<String>, detail: impl Into<String>) -> Error {
    Error::Construction { stage: stage.into(), detail: detail.into() }
}

/// `pop₁` of the equatorial c-rectangle of class `k`.
fn class_pop1(rects: &RectangleDecomposition, k: usize) -> usize {
    let c = rects.class_ranges.len();
    rects
        .e_rectangles
        .iter()
        .filter(|e| e.equatorial && e.c_rect == k * c + k)
        .map(|e| e.weight)
        .sum()
}

fn sub(m: &ComplexMatrix, c: &CRect) -> ComplexMatrix {
    m.view((c.rows.start, c.cols.start), (c.rows.len(), c.cols.len())).into_owned()
}

fn embed(d: usize, c: &CRect, block: &ComplexMatrix) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m.view_mut((c.rows.start, c.cols.start), (c.rows.len(), c.cols.len())).copy_from(block);
    m
}

fn reach(j: &ComplexMatrix, seeds: &[ComplexMatrix], cfg: &ToleranceConfig) -> Result<MatrixSpace> {
    let h = adjoint_operator(j, cfg)?;
    Ok(krylov_reach_detailed(&h, seeds, None, cfg)?.space)
}

/// Transitive reach of an island tuple, restricted to the island's entries.
fn island_verdict(j: &ComplexMatrix, c: &CRect, tuple: &[ComplexMatrix], cfg: &ToleranceConfig) -> Result<TransitivityVerdict> {
    let space = reach(j, tuple, cfg)?;
    let blocks: Vec<ComplexMatrix> = space.basis.iter().map(|b| sub(b, c)).collect();
    let local = span_basis(&blocks, cfg)?;
    Ok(is_transitive(&local, cfg))
}

/// Island tuple for `c`: identity first on equatorial islands, then generic matrices.
fn island_tuple(d: usize, c: &CRect, r: usize, rng: &mut random::DetRng) -> Vec<ComplexMatrix> {
    let (t, s) = (c.rows.len(), c.cols.len());
    let mut out = Vec::new();
    let generic = if c.row_class == c.col_class {
        out.push(embed(d, c, &identity(t)));
        r.saturating_sub(1)
    } else {
        r
    };
    for _ in 0..generic {
        let block = ComplexMatrix::from_fn(t, s, |_, _| random::nonzero(rng));
        out.push(embed(d, c, &block));
    }
    out
}

/// Witness in Jordan coordinates for one class ordering.
fn world_witness(
    jt: &JordanType,
    classes: &ModTClasses,
    cfg: &ToleranceConfig,
) -> Result<(Vec<ComplexMatrix>, RectangleDecomposition)> {
    let rects = rectangle_decomposition(jt, classes)?;
    let d = jt.total;
    let j = jt.jordan_matrix();
    if classes.c == d {
        // any B without zero entries in the eigenbasis
        let w = vec![identity(d), ComplexMatrix::from_element(d, d, crate::linalg::cr(1.0))];
        return Ok((w, rects));
    }
    let m = rects.pop1 - classes.c + 1;
    // slots 0..m-1 hold generic parts, slot m-1 the identity
    let mut z = vec![ComplexMatrix::zeros(d, d); m];
    for (ci, c) in rects.c_rectangles.iter().enumerate() {
        let r = (class_pop1(&rects, c.row_class) + class_pop1(&rects, c.col_class)) / 2;
        let equatorial = c.row_class == c.col_class;
        if r > m || (!equatorial && r > m - 1) {
            return Err(stage_err(format!("island ({},{})", c.row_class, c.col_class), format!("r = {} exceeds m = {}", r, m)));
        }
        let mut accepted = None;
        for attempt in 0..6u64 {
            let mut rng = random::rng(random::split_seed(cfg.seed, 0x15_1a4d ^ ((ci as u64) << 8) ^ attempt));
            let tuple = island_tuple(d, c, r, &mut rng);
            if island_verdict(&j, c, &tuple, cfg)?.is_transitive() {
                accepted = Some(tuple);
                break;
            }
        }
        let tuple = accepted.ok_or_else(|| {
            stage_err(format!("island ({},{})", c.row_class, c.col_class), "no verified draw in 6 attempts")
        })?;
        if equatorial {
            z[m - 1] += &tuple[0];
            for (k, x) in tuple[1..].iter().enumerate() {
                z[k] += x;
            }
        } else {
            for (k, x) in tuple.iter().enumerate() {
                z[k] += x;
            }
        }
    }
    let mut w = vec![z[m - 1].clone()];
    w.extend(z[..m - 1].iter().filter(|x| x.norm() > 0.0).cloned());
    Ok((w, rects))
}

/// Transitivity of the world reach: the c-partition sudoku test first, then the general test.
fn world_verdict(j: &ComplexMatrix, w: &[ComplexMatrix], rects: &RectangleDecomposition, cfg: &ToleranceConfig) -> Result<bool> {
    let space = reach(j, w, cfg)?;
    let parts = &rects.class_ranges;
    if parts.len() > 1 {
        if let Ok(Some(true)) = sudoku_transitive(&space, parts, parts, cfg) {
            return Ok(true);
        }
    }
    Ok(is_transitive(&space, cfg).kind == VerdictKind::Transitive)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for k in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for pos in 0..=k {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Matrices `[Id, W₂, …]` of length at most [`rigidity_upper_bound`] whose `Ad_A`-reach is
/// verified transitive, in the original basis.
pub fn construct_witness(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Vec<ComplexMatrix>> {
    let d = a.nrows();
    if d < 2 {
        return Err(Error::Dimension("rigidity needs d >= 2".into()));
    }
    let raw = jordan_type(a, cfg).map_err(|e| stage_err("normal form", e.to_string()))?;
    let (jt0, classes0) = normal_order(&raw, cfg);
    let bound = bound_from(d, &classes0, &rectangle_decomposition(&jt0, &classes0)?);
    let mut orders = permutations(classes0.c.min(5));
    orders.truncate(120);
    let mut last = stage_err("world", "no class order tried");
    for order in orders {
        let (jt, classes) = if order.iter().enumerate().all(|(i, &k)| i == k) {
            (jt0.clone(), classes0.clone())
        } else {
            order_by_classes(&jt0, &classes0, &order)
        };
        let q = jordan_basis(a, &jt, cfg).map_err(|e| stage_err("normal form", e.to_string()))?;
        let qi = inverse(&q, cfg).map_err(|e| stage_err("normal form", e.to_string()))?;
        let j = jt.jordan_matrix();
        let err = (&qi * a * &q - &j).norm() / (1.0 + j.norm());
        if err > 1e-6 {
            return Err(stage_err("normal form", format!("Jordan basis residual {:.2e}", err)));
        }
        let (wj, rects) = match world_witness(&jt, &classes, cfg) {
            Ok(x) => x,
            Err(e) => {
                last = e;
                continue;
            }
        };
        if !world_verdict(&j, &wj, &rects, cfg)? {
            last = stage_err("world", format!("reach not verified transitive for class order {:?}", order));
            continue;
        }
        let w: Vec<ComplexMatrix> = wj.iter().map(|x| &q * x * &qi).collect();
        // back in the original basis the reach must still test transitive
        let space = reach(a, &w, cfg)?;
        if !is_transitive(&space, cfg).is_transitive() {
            last = stage_err("verify", "reach in the original basis is not verified transitive");
            continue;
        }
        if w.len() > bound {
            return Err(stage_err("verify", format!("witness length {} exceeds bound {}", w.len(), bound)));
        }
        return Ok(w);
    }
    Err(last)
}

/// Bounds plus a certified witness.
pub fn rigidity_report(a: &ComplexMatrix, with_witness: bool, cfg: &ToleranceConfig) -> Result<RigidityReport> {
    let mut r = rigidity_upper_bound(a, cfg)?;
    if with_witness {
        r.witness = Some(construct_witness(a, cfg)?);
    }
    Ok(r)
}

/// Lower bound `max(0, m + 1 − (w − 1))` on the codimension of the poor fiber over `A`,
/// with `w` the length of a certified witness.
pub fn fiber_codim_lower_bound(a: &ComplexMatrix, m: usize, cfg: &ToleranceConfig) -> Result<usize> {
    if m == 0 {
        return Err(Error::Format("m must be at least 1".into()));
    }
    let w = construct_witness(a, cfg)?;
    Ok((m + 1).saturating_sub(w.len() - 1))
}
