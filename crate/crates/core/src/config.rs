use serde::{Deserialize, Serialize};

/// Tolerances and seeds shared by every numeric decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceConfig {
    /// Singular values below `rank_tol_rel * sigma_max` count as zero.
    pub rank_tol_rel: f64,
    /// Absolute threshold for entries and residuals (after scaling).
    pub zero_tol_abs: f64,
    /// Largest q tried when testing whether a ratio is a root of unity.
    pub max_power_for_roots_of_unity: u32,
    /// Eigenvalue clustering radius, relative to the matrix norm.
    pub cluster_tol_rel: f64,
    pub seed: u64,
    /// Overrides the default number of multi-starts, 8(s+t).
    pub restarts: Option<usize>,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rank_tol_rel: 1e-9,
            zero_tol_abs: 1e-10,
            max_power_for_roots_of_unity: 60,
            cluster_tol_rel: 1e-6,
            seed: 0x5eed_2024,
            restarts: None,
        }
    }
}

impl ToleranceConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_rank_tol(mut self, tol: f64) -> Self {
        self.rank_tol_rel = tol;
        self
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.rank_tol_rel > 0.0 && self.zero_tol_abs > 0.0 && self.cluster_tol_rel > 0.0)
            || self.max_power_for_roots_of_unity == 0
        {
            return Err(crate::Error::Format("tolerances must be positive".into()));
        }
        Ok(())
    }
}
