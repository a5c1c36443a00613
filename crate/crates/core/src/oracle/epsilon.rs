use crate::error::{Error, Result};
use crate::linalg::{c, random_unit_vector, CMatrix};
use crate::measures::OptimizerMetadata;
use crate::spin_algebra::{coupled_basis, Spin};
use crate::states::PureState;

use super::optimizer::{minimize_multistart, Objective};
use super::{check_scope, OptimizerConfig, OracleResult, PureMeasure};

/// Unit vectors with `⟨ψ|Π_{j-½}|ψ⟩ = p` written as `√p Q_lo α + √(1-p) Q_hi β`,
/// where the columns of `Q_lo`, `Q_hi` span the two multiplets and `α`, `β` are unit vectors.
struct EpsilonObjective {
    lower: CMatrix,
    upper: CMatrix,
    p: f64,
}

impl EpsilonObjective {
    fn new(j: Spin, p: f64) -> Self {
        let basis = coupled_basis(j, Spin::HALF);
        let columns = |total: Spin| {
            let cols: Vec<_> = basis
                .iter()
                .filter(|((jt, _), _)| *jt == total)
                .map(|(_, v)| v.clone())
                .collect();
            CMatrix::from_columns(&cols)
        };
        EpsilonObjective {
            lower: columns(Spin::from_twice(j.twice() - 1)),
            upper: columns(Spin::from_twice(j.twice() + 1)),
            p,
        }
    }

    fn state(&self, point: &[CMatrix]) -> CMatrix {
        &self.lower * &point[0] * c(self.p.sqrt()) + &self.upper * &point[1] * c((1.0 - self.p).sqrt())
    }
}

impl Objective for EpsilonObjective {
    fn evaluate(&self, point: &[CMatrix], gradient: bool) -> (f64, Option<Vec<CMatrix>>) {
        let psi = self.state(point);
        let (value, g) = PureMeasure::Entropy.of_vector(psi.as_slice(), 2, gradient);
        let grads = g.map(|g| {
            let g = CMatrix::from_column_slice(g.len(), 1, g.as_slice());
            vec![
                self.lower.adjoint() * &g * c(self.p.sqrt()),
                self.upper.adjoint() * &g * c((1.0 - self.p).sqrt()),
            ]
        });
        (value, grads)
    }
}

/// Least entanglement entropy over pure states of `j ⊗ ½` with `Π_{j-½}` overlap `p`.
///
/// The overlap constraint is built into the parameterization, so every candidate
/// (and the witness) satisfies it to round-off.
pub fn min_epsilon_numeric(j: Spin, p: f64, cfg: &OptimizerConfig) -> Result<OracleResult<PureState>> {
    cfg.validate()?;
    if j.twice() == 0 {
        return Err(Error::domain("j", 0.0, "j ≥ 1/2"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("p", p, "[0, 1]"));
    }
    check_scope(j);
    let objective = EpsilonObjective::new(j, p);
    let (n_lo, n_hi) = (objective.lower.ncols(), objective.upper.ncols());
    let run = minimize_multistart(&objective, cfg, |_, rng| {
        vec![
            CMatrix::from_columns(&[random_unit_vector(n_lo, rng)]),
            CMatrix::from_columns(&[random_unit_vector(n_hi, rng)]),
        ]
    });
    let psi = objective.state(&run.best.point);
    let witness = PureState::normalized(j.dim(), 2, psi.column(0).into_owned())?;
    Ok(OracleResult {
        value: run.best.value,
        witness,
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
    use crate::measures::{binary_entropy, epsilon, pure_entanglement};
    use crate::states::{lower_projector, schmidt};

    #[test]
    fn matches_closed_form_above_and_below_threshold() {
        let cfg = OptimizerConfig::default();
        for (tj, p) in [(1, 0.9), (1, 0.4), (2, 0.95), (2, 1.0), (3, 0.9)] {
            let j = Spin::from_twice(tj);
            let res = min_epsilon_numeric(j, p, &cfg).unwrap();
            let exact = epsilon(j, p).unwrap();
            assert!(res.value >= exact - 1e-9, "j={j} p={p}: {} < {exact}", res.value);
            assert!(res.value <= exact + 1e-4, "j={j} p={p}: {} vs {exact}", res.value);
            let overlap = res.witness.expectation(&lower_projector(j).unwrap());
            assert!((overlap - p).abs() < 1e-8);
            assert!((pure_entanglement(&res.witness) - res.value).abs() < 1e-8);
        }
        let half = min_epsilon_numeric(Spin::HALF, 0.9, &cfg).unwrap();
        assert!((half.value - binary_entropy(0.2).unwrap()).abs() < 1e-4);
    }

    #[test]
    fn witnesses_at_the_ends_of_the_range() {
        let cfg = OptimizerConfig::default();
        let j = Spin::ONE;
        let at_threshold = min_epsilon_numeric(j, j.threshold(), &cfg).unwrap();
        assert!(at_threshold.value <= 1e-6);
        let s = schmidt(&at_threshold.witness);
        assert!(s.coefficients[1] < 1e-3, "witness is close to a product state");

        let top = min_epsilon_numeric(j, 1.0, &cfg).unwrap();
        assert!((top.value - binary_entropy(1.0 / 3.0).unwrap()).abs() < 1e-4);
        // same Schmidt spectrum as |½, ½⟩ = √(2/3)|1,1⟩|↓⟩ - √(1/3)|1,0⟩|↑⟩
        let s = schmidt(&top.witness);
        assert!((s.coefficients[0].powi(2) - 2.0 / 3.0).abs() < 1e-4);
        let overlap = top.witness.expectation(&lower_projector(j).unwrap());
        assert!((overlap - 1.0).abs() < 1e-8);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = OptimizerConfig::default().with_seed(11);
        let a = min_epsilon_numeric(Spin::ONE, 0.85, &cfg).unwrap();
        let b = min_epsilon_numeric(Spin::ONE, 0.85, &cfg).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
