use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Path-tracking parameters. Steps are measured in the homotopy parameter
/// `t`, which runs over `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackerConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Residual bound (infinity norm) an endpoint must reach to count.
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    pub divergence_bound: f64,
    /// Relative distance under which two endpoints are the same point.
    pub dedup_distance: f64,
    pub seed: u64,
    pub bezout_limit: u128,
    /// Fraction of failed paths tolerated before the run is an error.
    pub max_failure_fraction: f64,
    /// Largest accepted ratio between consecutive corrector updates.
    pub contraction: f64,
    pub max_steps_per_path: usize,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            initial_step: 0.1,
            min_step: 1e-7,
            max_step: 0.1,
            newton_tol: 1e-10,
            max_newton_iters: 3,
            divergence_bound: 1e8,
            dedup_distance: 1e-6,
            seed: 1729,
            bezout_limit: 1_000_000,
            max_failure_fraction: 0.02,
            contraction: 0.25,
            max_steps_per_path: 20_000,
        }
    }
}

impl TrackerConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        TrackerConfig { seed, ..self.clone() }
    }

    /// Relative tolerance of the corrector while tracking. Tied to the
    /// endpoint tolerance so that loosening one loosens the other.
    pub fn corrector_tol(&self) -> f64 {
        (self.newton_tol.sqrt() * 0.01).max(self.newton_tol)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("initial_step", self.initial_step),
            ("min_step", self.min_step),
            ("max_step", self.max_step),
            ("newton_tol", self.newton_tol),
            ("divergence_bound", self.divergence_bound),
            ("dedup_distance", self.dedup_distance),
            ("contraction", self.contraction),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if self.min_step >= self.initial_step {
            return Err(Error::InvalidConfig("min_step must be below initial_step".into()));
        }
        if self.max_step < self.initial_step {
            return Err(Error::InvalidConfig("max_step must be at least initial_step".into()));
        }
        if self.max_newton_iters == 0 {
            return Err(Error::InvalidConfig("max_newton_iters must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.max_failure_fraction) {
            return Err(Error::InvalidConfig("max_failure_fraction must lie in [0, 1)".into()));
        }
        Ok(())
    }
}
