//! Pure-state measures as functions of the reduced spectrum, extended to
//! unnormalized states by homogeneity so that `Σ_i L(σ_i)` over the marginals of
//! `v_i = √w_i ψ_i` equals the ensemble average `Σ_i w_i f(ψ_i)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, CMatrix, CVector, Hermitian2, ZERO};
use crate::measures::MeasureKind;
use crate::states::{PureState, Subsystem};

/// Eigenvalues are floored here before logs and reciprocal square roots.
const FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PureMeasure {
    /// Entanglement entropy.
    Entropy,
    /// `√(2(1 - tr σ²))`.
    Concurrence,
    /// `2(1 - tr σ²)`.
    Tangle,
    /// `(Σ √λ)² - 1`, the negativity of a pure state.
    Negativity,
}

impl PureMeasure {
    /// The pure-state function whose convex roof is `kind`.
    pub fn from_kind(kind: MeasureKind) -> Result<Self> {
        match kind {
            MeasureKind::EoF | MeasureKind::Epsilon => Ok(PureMeasure::Entropy),
            MeasureKind::IConcurrence => Ok(PureMeasure::Concurrence),
            MeasureKind::Tangle => Ok(PureMeasure::Tangle),
            MeasureKind::CrNegativity => Ok(PureMeasure::Negativity),
            MeasureKind::Negativity => Err(Error::Validation(
                "negativity is not defined as a convex roof; use crnegativity".into(),
            )),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PureMeasure::Entropy => "entropy",
            PureMeasure::Concurrence => "concurrence",
            PureMeasure::Tangle => "tangle",
            PureMeasure::Negativity => "negativity",
        }
    }

    /// Value on a normalized pure state, from its `B` marginal.
    pub fn of_state(self, psi: &PureState) -> f64 {
        let (vals, _) = hermitian_eigen(&psi.marginal(Subsystem::B));
        let clamped: Vec<f64> = vals.iter().map(|v| v.max(0.0)).collect();
        self.spectral(&clamped).0
    }

    /// `L(λ)` and `∂L/∂λ_k` for an unnormalized spectrum with `t = Σ λ`.
    pub(crate) fn spectral(self, lambdas: &[f64]) -> (f64, Vec<f64>) {
        let t: f64 = lambdas.iter().sum();
        if t <= FLOOR {
            return (0.0, vec![0.0; lambdas.len()]);
        }
        match self {
            PureMeasure::Entropy => {
                let mut value = 0.0;
                let grad = lambdas
                    .iter()
                    .map(|&l| {
                        if l > 0.0 {
                            value -= l * (l / t).ln();
                        }
                        -(l.max(FLOOR) / t).ln()
                    })
                    .collect();
                (value, grad)
            }
            PureMeasure::Concurrence => {
                let s2: f64 = lambdas.iter().map(|l| l * l).sum();
                let value = (2.0 * (t * t - s2)).max(0.0).sqrt();
                let denom = value.max(1e-150);
                let grad = lambdas.iter().map(|&l| 2.0 * (t - l) / denom).collect();
                (value, grad)
            }
            PureMeasure::Tangle => {
                let s2: f64 = lambdas.iter().map(|l| l * l).sum();
                let value = 2.0 * t - 2.0 * s2 / t;
                let grad = lambdas
                    .iter()
                    .map(|&l| 2.0 - 4.0 * l / t + 2.0 * s2 / (t * t))
                    .collect();
                (value, grad)
            }
            PureMeasure::Negativity => {
                let roots: f64 = lambdas.iter().map(|l| l.max(0.0).sqrt()).sum();
                let value = roots * roots - t;
                let grad = lambdas
                    .iter()
                    .map(|&l| roots / l.max(FLOOR).sqrt() - 1.0)
                    .collect();
                (value, grad)
            }
        }
    }

    /// `L(Tr_A vv†)` and, if requested, the gradient `2 (I ⊗ G) v` with `G = Σ_k ∂L/∂λ_k P_k`.
    pub(crate) fn of_vector(self, v: &[num_complex::Complex64], dim_b: usize, gradient: bool) -> (f64, Option<CVector>) {
        let dim_a = v.len() / dim_b;
        if dim_b == 2 {
            let (mut a, mut b, mut d) = (0.0, ZERO, 0.0);
            for k in 0..dim_a {
                let (x, y) = (v[2 * k], v[2 * k + 1]);
                a += x.norm_sqr();
                d += y.norm_sqr();
                b += x * y.conj();
            }
            let h = Hermitian2::new(a, b, d);
            let (value, grad) = self.spectral(&[h.low.max(0.0), h.high.max(0.0)]);
            if !gradient {
                return (value, None);
            }
            let g = h.spectral_combination(grad[0], grad[1]);
            let mut out = CVector::from_element(v.len(), ZERO);
            for k in 0..dim_a {
                let (x, y) = (v[2 * k], v[2 * k + 1]);
                out[2 * k] = c(2.0) * (g[0][0] * x + g[0][1] * y);
                out[2 * k + 1] = c(2.0) * (g[1][0] * x + g[1][1] * y);
            }
            return (value, Some(out));
        }
        let sigma = CMatrix::from_fn(dim_b, dim_b, |r, s| {
            (0..dim_a).map(|k| v[k * dim_b + r] * v[k * dim_b + s].conj()).sum()
        });
        let (vals, vecs) = hermitian_eigen(&sigma);
        let clamped: Vec<f64> = vals.iter().map(|v| v.max(0.0)).collect();
        let (value, grad) = self.spectral(&clamped);
        if !gradient {
            return (value, None);
        }
        let mut g = CMatrix::zeros(dim_b, dim_b);
        for (k, dk) in grad.iter().enumerate() {
            let e = vecs.column(k);
            g += e * e.adjoint() * c(*dk);
        }
        let mut out = CVector::from_element(v.len(), ZERO);
        for k in 0..dim_a {
            for r in 0..dim_b {
                let mut acc = ZERO;
                for s in 0..dim_b {
                    acc += g[(r, s)] * v[k * dim_b + s];
                }
                out[k * dim_b + r] = c(2.0) * acc;
            }
        }
        (value, Some(out))
    }
}

impl fmt::Display for PureMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PureMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "entropy" | "e" => Ok(PureMeasure::Entropy),
            "concurrence" | "c" => Ok(PureMeasure::Concurrence),
            "tangle" | "tau" => Ok(PureMeasure::Tangle),
            "negativity" | "n" => Ok(PureMeasure::Negativity),
            other => MeasureKind::from_str(other).and_then(PureMeasure::from_kind),
        }
    }
}
