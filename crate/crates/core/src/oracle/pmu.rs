use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, haar_unitary, CMatrix};
use crate::measures::{p_mu, OptimizerMetadata};
use crate::spin_algebra::Spin;
use crate::states::{chi_state, lower_projector, psi_mu_u};

use super::optimizer::{minimize_multistart, Objective};
use super::{check_scope, OptimizerConfig, OracleResult};

/// `-⟨ψ|Π_{j-½}|ψ⟩` for `ψ = (U ⊗ 1)|χ(μ)⟩`, as a function of `U`.
struct OverlapObjective {
    chi: CMatrix,
    projector: CMatrix,
}

impl OverlapObjective {
    fn new(j: Spin, mu: f64) -> Result<Self> {
        Ok(OverlapObjective {
            chi: chi_state(j, mu)?.amplitude_matrix(),
            projector: lower_projector(j)?,
        })
    }
}

impl Objective for OverlapObjective {
    fn evaluate(&self, point: &[CMatrix], gradient: bool) -> (f64, Option<Vec<CMatrix>>) {
        let amps = &point[0] * &self.chi;
        let (da, db) = amps.shape();
        let psi = nalgebra::DVector::from_fn(da * db, |k, _| amps[(k / db, k % db)]);
        let projected = &self.projector * &psi;
        let value = -psi.dotc(&projected).re;
        let grads = gradient.then(|| {
            let w = CMatrix::from_fn(da, db, |a, b| projected[a * db + b]);
            vec![w * self.chi.adjoint() * c(-2.0)]
        });
        (value, grads)
    }
}

fn check_mu(j: Spin, mu: f64) -> Result<()> {
    if j.twice() == 0 {
        return Err(Error::domain("j", 0.0, "j ≥ 1/2"));
    }
    let top = 1.0 / f64::from(j.twice() + 1);
    if !(0.0..=top).contains(&mu) {
        return Err(Error::domain("mu", mu, format!("[0, {top}]")));
    }
    Ok(())
}

/// `p_μ(U) = ⟨ψ_μ(U)|Π_{j-½}|ψ_μ(U)⟩`.
pub fn p_mu_of_unitary(j: Spin, mu: f64, u: &CMatrix) -> Result<f64> {
    let psi = psi_mu_u(j, mu, u)?;
    Ok(psi.expectation(&lower_projector(j)?))
}

/// Largest `p_μ(U)` over unitaries `U` on the spin-j factor, with the maximizing `U`.
pub fn max_p_mu_over_u(j: Spin, mu: f64, cfg: &OptimizerConfig) -> Result<OracleResult<CMatrix>> {
    cfg.validate()?;
    check_mu(j, mu)?;
    check_scope(j);
    let objective = OverlapObjective::new(j, mu)?;
    let dim = j.dim();
    let run = minimize_multistart(&objective, cfg, |_, rng| vec![haar_unitary(dim, rng)]);
    Ok(OracleResult {
        value: -run.best.value,
        witness: run.best.point.into_iter().next().expect("one block"),
        metadata: OptimizerMetadata {
            iterations: run.total_iterations,
            restarts: run.restarts,
            converged: run.any_converged,
        },
    })
}

/// Outcome of sampling random `(μ, U)` pairs against the closed-form maximum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProbeSummary {
    pub samples: usize,
    /// `max (p_μ(U) - p_μ)` over all samples; non-positive when the bound holds.
    pub max_excess: f64,
    pub worst_mu: f64,
}

/// Compare `p_μ(U)` for Haar-random `U` and uniform `μ ∈ [0, 1/(2j+1)]` with `p_μ`.
pub fn p_mu_random_probe(j: Spin, samples: usize, seed: u64) -> Result<ProbeSummary> {
    check_mu(j, 0.0)?;
    let objective_projector = lower_projector(j)?;
    let top = 1.0 / f64::from(j.twice() + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = ProbeSummary {
        samples,
        max_excess: f64::NEG_INFINITY,
        worst_mu: 0.0,
    };
    for _ in 0..samples {
        let mu = rng.random_range(0.0..=top);
        let u = haar_unitary(j.dim(), &mut rng);
        let psi = psi_mu_u(j, mu, &u)?;
        let excess = psi.expectation(&objective_projector) - p_mu(j, mu)?;
        if excess > summary.max_excess {
            summary.max_excess = excess;
            summary.worst_mu = mu;
        }
    }
    Ok(summary)
}
