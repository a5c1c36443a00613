//! Multi-start gradient descent on products of complex Stiefel manifolds.
//!
//! Points are tuples of matrices with orthonormal columns. Descent uses the
//! embedded-metric Riemannian gradient, Barzilai–Borwein step lengths and a
//! Zhang–Hager nonmonotone Armijo search. Rectangular blocks retract by polar
//! decomposition; square blocks (the unitary group) retract with the matrix
//! exponential of the Hermitian generator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::linalg::{c, exp_i_hermitian, polar_isometry, CMatrix, I};

use super::OptimizerConfig;

/// A smooth real function of a tuple of matrices.
pub(crate) trait Objective: Sync {
    /// Value and, if requested, the Euclidean gradient `Γ` of each block, in the
    /// convention `dL = Re tr(Γ† dX)`.
    fn evaluate(&self, point: &[CMatrix], gradient: bool) -> (f64, Option<Vec<CMatrix>>);
}

#[derive(Debug, Clone)]
pub(crate) struct LocalResult {
    pub value: f64,
    pub point: Vec<CMatrix>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct MultiStartResult {
    pub best: LocalResult,
    pub total_iterations: usize,
    pub restarts: usize,
    pub any_converged: bool,
}

const ARMIJO: f64 = 1e-4;
const NONMONOTONE_ETA: f64 = 0.85;
const PATIENCE: usize = 10;
const GRADIENT_TOL: f64 = 1e-10;
const MIN_STEP: f64 = 1e-20;
const MAX_STEP: f64 = 1e10;

fn inner(a: &[CMatrix], b: &[CMatrix]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y.iter()).map(|(u, v)| (u.conj() * v).re).sum::<f64>())
        .sum()
}

/// Tangent projection `Γ - X sym(X†Γ)`.
fn riemannian_gradient(x: &CMatrix, euclid: &CMatrix) -> CMatrix {
    let xg = x.adjoint() * euclid;
    let sym = (&xg + xg.adjoint()) * c(0.5);
    euclid - x * sym
}

/// Move from `x` along `-t·xi` and return to the manifold.
fn retract(x: &CMatrix, xi: &CMatrix, t: f64) -> CMatrix {
    if x.nrows() == x.ncols() {
        // xi = X Ω with Ω skew-Hermitian; X exp(-tΩ) with Ω = iH.
        let omega = x.adjoint() * xi;
        let omega = (&omega - omega.adjoint()) * c(0.5);
        let h = &omega * (-I);
        x * exp_i_hermitian(&h, -t)
    } else {
        polar_isometry(&(x - xi * c(t)))
    }
}

pub(crate) fn minimize_local(
    objective: &dyn Objective,
    start: Vec<CMatrix>,
    cfg: &OptimizerConfig,
) -> LocalResult {
    let mut x = start;
    let (mut f, g) = objective.evaluate(&x, true);
    let mut xi: Vec<CMatrix> = x
        .iter()
        .zip(g.expect("gradient requested"))
        .map(|(xb, gb)| riemannian_gradient(xb, &gb))
        .collect();
    let mut gnorm2 = inner(&xi, &xi);
    let mut step = 1.0 / gnorm2.sqrt().max(1e-12);
    let mut reference = f;
    let mut q = 1.0;
    let mut quiet = 0;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iterations {
        if gnorm2.sqrt() < GRADIENT_TOL {
            converged = true;
            break;
        }
        iterations += 1;
        let mut t = step;
        let (x_new, f_new) = loop {
            let candidate: Vec<CMatrix> =
                x.iter().zip(&xi).map(|(xb, gb)| retract(xb, gb, t)).collect();
            let (fc, _) = objective.evaluate(&candidate, false);
            if fc.is_finite() && fc <= reference - ARMIJO * t * gnorm2 {
                break (candidate, fc);
            }
            t *= 0.5;
            if t < MIN_STEP {
                break (candidate, fc);
            }
        };
        if !(f_new <= reference) || !f_new.is_finite() {
            // No acceptable step: at a (numerical) stationary point.
            converged = true;
            break;
        }
        let (f_val, g_new) = objective.evaluate(&x_new, true);
        let xi_new: Vec<CMatrix> = x_new
            .iter()
            .zip(g_new.expect("gradient requested"))
            .map(|(xb, gb)| riemannian_gradient(xb, &gb))
            .collect();

        let s: Vec<CMatrix> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<CMatrix> = xi_new.iter().zip(&xi).map(|(a, b)| a - b).collect();
        let sy = inner(&s, &y).abs();
        step = if sy > 0.0 {
            if iterations % 2 == 0 {
                inner(&s, &s) / sy
            } else {
                sy / inner(&y, &y).max(1e-300)
            }
        } else {
            t * 2.0
        };
        step = step.clamp(1e-10, MAX_STEP);

        let change = (f - f_val).abs();
        quiet = if change <= cfg.convergence_tol * (1.0 + f.abs()) {
            quiet + 1
        } else {
            0
        };
        x = x_new;
        f = f_val;
        xi = xi_new;
        gnorm2 = inner(&xi, &xi);
        let q_prev = q;
        q = NONMONOTONE_ETA * q + 1.0;
        reference = (NONMONOTONE_ETA * q_prev * reference + f) / q;
        if quiet >= PATIENCE {
            converged = true;
            break;
        }
    }
    LocalResult {
        value: f,
        point: x,
        iterations,
        converged,
    }
}

/// Run `cfg.restarts` independent descents from `init(rng)` and keep the lowest value.
///
/// Restart `k` draws its start from stream `k` of the seeded generator; ties are
/// broken by restart index, so the result does not depend on scheduling.
pub(crate) fn minimize_multistart<F>(
    objective: &dyn Objective,
    cfg: &OptimizerConfig,
    init: F,
) -> MultiStartResult
where
    F: Fn(usize, &mut ChaCha8Rng) -> Vec<CMatrix> + Sync,
{
    let restarts = cfg.restarts.max(1);
    let results: Vec<LocalResult> = (0..restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let start = init(k, &mut rng);
            minimize_local(objective, start, cfg)
        })
        .collect();
    let total_iterations = results.iter().map(|r| r.iterations).sum();
    let any_converged = results.iter().any(|r| r.converged);
    let best = results
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one restart");
    MultiStartResult {
        best,
        total_iterations,
        restarts,
        any_converged,
    }
}
