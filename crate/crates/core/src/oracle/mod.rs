//! Brute-force numerical counterparts of the closed forms.
//!
//! Each oracle searches a manifold of candidates (pure states with a fixed
//! overlap, ensemble decompositions, unitaries) with a multi-start Riemannian
//! gradient method and returns the best value together with a witness that can
//! be re-checked independently. Values are upper bounds for minimizations and
//! lower bounds for maximizations.

mod epsilon;
mod hull;
mod optimizer;
mod pmu;
mod roof;
mod spectral;

pub use epsilon::min_epsilon_numeric;
pub use hull::{convex_hull_1d, ConvexHull};
pub use pmu::{max_p_mu_over_u, p_mu_of_unitary, p_mu_random_probe, ProbeSummary};
pub use roof::{convex_roof_numeric, EnsembleDecomposition};
pub use spectral::PureMeasure;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::OptimizerMetadata;
use crate::spin_algebra::Spin;

/// Largest spin the oracles are tuned for; larger values run but may be slow.
pub const SCOPE_TWICE_J: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop once the objective changes by less than this (relative) for several iterations.
    pub convergence_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 8,
            max_iterations: 20_000,
            convergence_tol: 1e-10,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Validation("restarts must be positive".into()));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::domain(
                "convergence_tol",
                self.convergence_tol,
                "(0, ∞)",
            ));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Best value found by an oracle, the point attaining it, and optimizer diagnostics.
#[derive(Debug, Clone)]
pub struct OracleResult<W> {
    pub value: f64,
    pub witness: W,
    pub metadata: OptimizerMetadata,
}

impl<W> OracleResult<W> {
    /// Turn a run where no restart converged into an error carrying the best value.
    pub fn require_converged(self) -> Result<Self> {
        if self.metadata.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                best: self.value,
                iterations: self.metadata.iterations,
            })
        }
    }
}

fn check_scope(j: Spin) {
    if j.twice() > SCOPE_TWICE_J {
        log::warn!("oracle run at j = {j} is outside the tuned range j ≤ 3/2 and may be slow");
    }
}
