use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, polar_isometry, random_gaussian_matrix, CMatrix, CVector};
use crate::measures::OptimizerMetadata;
use crate::states::{DensityMatrix, PureState};

use super::optimizer::{minimize_multistart, Objective};
use super::{OptimizerConfig, OracleResult, PureMeasure};

/// Eigenvalues of `ρ` below this are treated as outside its range.
const RANK_TOL: f64 = 1e-13;
/// Ensemble members lighter than this are dropped from the returned decomposition.
const WEIGHT_FLOOR: f64 = 1e-14;

/// `ρ = Σ_i w_i |ψ_i⟩⟨ψ_i|`.
#[derive(Debug, Clone)]
pub struct EnsembleDecomposition {
    pub weights: Vec<f64>,
    pub states: Vec<PureState>,
}

impl EnsembleDecomposition {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let dim = self.states.first().map_or(0, |s| s.amplitudes().len());
        let mut m = CMatrix::zeros(dim, dim);
        for (w, s) in self.weights.iter().zip(&self.states) {
            let v = s.amplitudes();
            m += v * v.adjoint() * c(*w);
        }
        m
    }

    /// `Σ_i w_i f(ψ_i)`, recomputed from the states.
    pub fn average(&self, measure: PureMeasure) -> f64 {
        self.weights
            .iter()
            .zip(&self.states)
            .map(|(w, s)| w * measure.of_state(s))
            .sum()
    }
}

/// Ensembles `v_i = Σ_k U_ik √λ_k e_k` for `U` with orthonormal columns; `C` holds `√λ_k e_k^T` as rows.
struct RoofObjective {
    weighted_eigenvectors: CMatrix,
    dim_b: usize,
    measure: PureMeasure,
}

impl RoofObjective {
    fn vectors(&self, u: &CMatrix) -> CMatrix {
        u * &self.weighted_eigenvectors
    }
}

impl Objective for RoofObjective {
    fn evaluate(&self, point: &[CMatrix], gradient: bool) -> (f64, Option<Vec<CMatrix>>) {
        let v = self.vectors(&point[0]);
        let (n, dim) = v.shape();
        let mut total = 0.0;
        let mut gm = gradient.then(|| CMatrix::zeros(n, dim));
        let mut row = vec![num_complex::Complex64::default(); dim];
        for i in 0..n {
            for (d, slot) in row.iter_mut().enumerate() {
                *slot = v[(i, d)];
            }
            let (value, g) = self.measure.of_vector(&row, self.dim_b, gradient);
            total += value;
            if let (Some(gm), Some(g)) = (gm.as_mut(), g) {
                for d in 0..dim {
                    gm[(i, d)] = g[d];
                }
            }
        }
        let grads = gm.map(|gm| vec![gm * self.weighted_eigenvectors.adjoint()]);
        (total, grads)
    }
}

/// Upper bound on the convex roof of `measure` at `rho`, with the ensemble attaining it.
///
/// Searches all `n_terms`-member decompositions (default `rank²`) through the
/// column-orthonormal mixing of the weighted eigenvectors.
pub fn convex_roof_numeric(
    rho: &DensityMatrix,
    measure: PureMeasure,
    n_terms: Option<usize>,
    cfg: &OptimizerConfig,
) -> Result<OracleResult<EnsembleDecomposition>> {
    cfg.validate()?;
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let dim = rho.dim();
    let range: Vec<usize> = (0..dim).filter(|&k| vals[k] > RANK_TOL).collect();
    let rank = range.len();
    if rank == 0 {
        return Err(Error::Validation("density matrix has no support".into()));
    }
    let n = n_terms.unwrap_or(rank * rank);
    if n < rank {
        return Err(Error::Validation(format!(
            "n_terms = {n} is smaller than the rank {rank}"
        )));
    }
    if rho.dim_a() > 8 {
        log::warn!("convex roof search on dimension {dim} may be slow");
    }
    let weighted_eigenvectors =
        CMatrix::from_fn(rank, dim, |r, d| vecs[(d, range[r])] * c(vals[range[r]].sqrt()));
    let objective = RoofObjective {
        weighted_eigenvectors,
        dim_b: rho.dim_b(),
        measure,
    };
    let run = minimize_multistart(&objective, cfg, |_, rng| {
        vec![polar_isometry(&random_gaussian_matrix(n, rank, rng))]
    });

    let v = objective.vectors(&run.best.point[0]);
    let mut weights = Vec::new();
    let mut states = Vec::new();
    for row in v.row_iter() {
        let amps: CVector = row.transpose();
        let w = amps.norm_squared();
        if w < WEIGHT_FLOOR {
            continue;
        }
        weights.push(w);
        states.push(PureState::normalized(rho.dim_a(), rho.dim_b(), amps)?);
    }
    Ok(OracleResult {
        value: run.best.value,
        witness: EnsembleDecomposition { weights, states },
        metadata: OptimizerMetadata {
            iterations: run.total_iterations,
            restarts: run.restarts,
            converged: run.any_converged,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::measures::{eof, i_concurrence, pure_entanglement};
    use crate::spin_algebra::Spin;
    use crate::states::{random_pure_state, rho_p};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pure_input_returns_its_own_measure() {
        let psi = random_pure_state(3, 2, &mut ChaCha8Rng::seed_from_u64(1));
        let rho = psi.density();
        let res = convex_roof_numeric(&rho, PureMeasure::Entropy, None, &OptimizerConfig::default()).unwrap();
        assert_eq!(res.witness.len(), 1);
        assert!((res.value - pure_entanglement(&psi)).abs() < 1e-10);
    }

    #[test]
    fn spin_half_roof_matches_closed_form() {
        let rho = rho_p(Spin::HALF, 0.9).unwrap();
        let cfg = OptimizerConfig::default();
        let res = convex_roof_numeric(&rho, PureMeasure::Entropy, None, &cfg).unwrap();
        let exact = eof(Spin::HALF, 0.9).unwrap();
        assert!(res.value >= exact - 1e-9 && res.value <= exact + 1e-3, "{}", res.value);
        assert!(max_abs_diff(&res.witness.reconstruct(), rho.matrix()) < 1e-8);
        assert!((res.witness.average(PureMeasure::Entropy) - res.value).abs() < 1e-8);
        let total: f64 = res.witness.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn spin_one_concurrence_roof() {
        let rho = rho_p(Spin::ONE, 0.9).unwrap();
        let res = convex_roof_numeric(&rho, PureMeasure::Concurrence, None, &OptimizerConfig::default()).unwrap();
        let exact = i_concurrence(Spin::ONE, 0.9).unwrap();
        assert!(res.value >= exact - 1e-9 && res.value <= exact + 1e-3, "{} vs {exact}", res.value);
    }

    #[test]
    fn rejects_too_few_terms() {
        let rho = rho_p(Spin::HALF, 0.9).unwrap();
        assert!(convex_roof_numeric(&rho, PureMeasure::Entropy, Some(2), &OptimizerConfig::default()).is_err());
    }
}
