//! Young diagrams in the `k × (n−k)` rectangle, jumping numbers, cup nonvanishing.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct YoungDiagram {
    pub k: usize,
    pub n: usize,
    pub rows: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(k: usize, n: usize, rows: Vec<usize>) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::Format(format!("need 0 < k < n, got k={} n={}", k, n)));
        }
        if rows.len() != k {
            return Err(Error::Format(format!("diagram needs {} rows, got {}", k, rows.len())));
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Format("rows must be weakly decreasing".into()));
        }
        if rows.first().is_some_and(|&r| r > n - k) {
            return Err(Error::Format(format!("row length exceeds n-k = {}", n - k)));
        }
        Ok(YoungDiagram { k, n, rows })
    }

    pub fn empty(k: usize, n: usize) -> Result<Self> {
        Self::new(k, n, vec![0; k])
    }

    pub fn full(k: usize, n: usize) -> Result<Self> {
        Self::new(k, n, vec![n.saturating_sub(k); k])
    }

    /// `e` full rows then zeros: the diagram of `{V : V ∩ E ≠ 0}` with `dim E = e`.
    pub fn special(k: usize, n: usize, e: usize) -> Result<Self> {
        if e == 0 || e > k {
            return Err(Error::Format(format!("need 1 <= e <= k, got e={}", e)));
        }
        let mut rows = vec![0; k];
        rows[..e].fill(n.saturating_sub(k));
        Self::new(k, n, rows)
    }

    pub fn area(&self) -> usize {
        self.rows.iter().sum()
    }

    /// All diagrams in the `k × (n−k)` rectangle.
    pub fn all(k: usize, n: usize) -> Result<Vec<YoungDiagram>> {
        Self::empty(k, n)?;
        let w = n - k;
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(k: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
            if cur.len() == k {
                out.push(YoungDiagram { k, n, rows: cur.clone() });
                return;
            }
            for r in (0..=max).rev() {
                cur.push(r);
                rec(k, n, r, cur, out);
                cur.pop();
            }
        }
        rec(k, n, w, &mut cur, &mut out);
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTable {
    pub k: usize,
    pub n: usize,
    /// Jumping numbers `j₁ < ⋯ < j_k` in `1..=n`.
    pub jumps: Vec<usize>,
}

impl RankTable {
    pub fn new(k: usize, n: usize, jumps: Vec<usize>) -> Result<Self> {
        if k == 0 || k >= n || jumps.len() != k {
            return Err(Error::Format(format!("need {} jumps with 0 < k < n = {}", k, n)));
        }
        if jumps.windows(2).any(|w| w[0] >= w[1]) || jumps[0] < 1 || jumps[k - 1] > n {
            return Err(Error::Format("jumps must be strictly increasing in 1..=n".into()));
        }
        Ok(RankTable { k, n, jumps })
    }
}

/// `λ_i = n − k − j_i + i` (1-based `i`).
pub fn diagram_from_jumps(rt: &RankTable) -> Result<YoungDiagram> {
    let rt = RankTable::new(rt.k, rt.n, rt.jumps.clone())?;
    let rows = rt.jumps.iter().enumerate().map(|(i, &j)| rt.n - rt.k + i + 1 - j).collect();
    YoungDiagram::new(rt.k, rt.n, rows)
}

/// Inverse of [`diagram_from_jumps`]: `j_i = n − k − λ_i + i`.
pub fn jumps_from_diagram(y: &YoungDiagram) -> Result<RankTable> {
    let y = YoungDiagram::new(y.k, y.n, y.rows.clone())?;
    let jumps = y.rows.iter().enumerate().map(|(i, &l)| y.n - y.k + i + 1 - l).collect();
    RankTable::new(y.k, y.n, jumps)
}

/// `λ ⌣ μ ≠ 0` iff `λ_i + μ_{k+1−i} ≤ n − k` for every `i`.
pub fn cup_nonzero(l: &YoungDiagram, m: &YoungDiagram) -> Result<bool> {
    if (l.k, l.n) != (m.k, m.n) {
        return Err(Error::Format(format!(
            "rectangle mismatch: ({},{}) vs ({},{})",
            l.k, l.n, m.k, m.n
        )));
    }
    let k = l.k;
    Ok((0..k).all(|i| l.rows[i] + m.rows[k - 1 - i] <= l.n - l.k))
}

/// Least-area `μ` with `λ ⌣ μ = 0`, with its area; `None` when `λ` is empty.
///
/// Overlap at row `i` of `λ` needs `μ_{k+1−i} ≥ n−k−λ_i+1`, and the cheapest such `μ` is the
/// rectangle with `k+1−i` rows of that length.
pub fn min_area_partner(l: &YoungDiagram) -> Option<(YoungDiagram, usize)> {
    let (k, w) = (l.k, l.n - l.k);
    let mut best: Option<(usize, usize, usize)> = None;
    for i in 0..k {
        if l.rows[i] == 0 {
            continue;
        }
        let (len, height) = (w - l.rows[i] + 1, k - i);
        let area = len * height;
        // ties go to the shorter column
        if best.is_none_or(|(a, h, _)| area < a || (area == a && height < h)) {
            best = Some((area, height, len));
        }
    }
    best.map(|(area, height, len)| {
        let mut rows = vec![0; k];
        rows[..height].fill(len);
        (YoungDiagram { k, n: l.n, rows }, area)
    })
}

/// `min_j (j + codim C_j)` over the recorded nonempty fiber classes.
pub fn fiber_codim_formula(pairs: &[(usize, usize)]) -> Result<usize> {
    pairs
        .iter()
        .map(|&(j, c)| j + c)
        .min()
        .ok_or_else(|| Error::Format("no fiber classes given".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn young_example() {
        let rt = RankTable::new(5, 12, vec![3, 6, 8, 9, 11]).unwrap();
        assert_eq!(diagram_from_jumps(&rt).unwrap().rows, vec![5, 3, 2, 2, 1]);
    }

    #[test]
    fn special_partner() {
        let l = YoungDiagram::special(4, 6, 2).unwrap();
        let (m, a) = min_area_partner(&l).unwrap();
        assert_eq!((m.rows, a), (vec![1, 1, 1, 0], 3));
        assert!(min_area_partner(&YoungDiagram::empty(3, 7).unwrap()).is_none());
    }

    #[test]
    fn codim_formula() {
        assert_eq!(fiber_codim_formula(&[(3, 0)]).unwrap(), 3);
        assert_eq!(fiber_codim_formula(&[(1, 3), (2, 1)]).unwrap(), 3);
        assert!(fiber_codim_formula(&[]).is_err());
    }
}
