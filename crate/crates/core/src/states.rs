//! Bipartite states, the rotationally invariant family `ρ(p)`, the named pure states
//! used to bound `ε(p)`, partial operations, and twirling.
//!
//! Product-basis order is subsystem A major, B minor, with `m` descending in each factor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_eigenvalues, hermiticity_error, kron, random_gaussian_matrix,
    random_unit_vector, trace, trace_norm, unitarity_error, CMatrix, CVector, ZERO,
};
use crate::spin_algebra::{
    coupled_basis, haar_rotation, spin_operators, wigner_rotation_with, CoupledBasis, Spin,
};

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-10;

/// Which factor of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A validated density matrix on `C^{dim_a} ⊗ C^{dim_b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim_a: usize,
    dim_b: usize,
    data: CMatrix,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positivity (eigenvalues ≥ -1e-10).
    /// Inputs that fail are rejected, never clipped.
    pub fn new(dim_a: usize, dim_b: usize, data: CMatrix) -> Result<Self> {
        let dim = dim_a * dim_b;
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::Validation("subsystem dimensions must be positive".into()));
        }
        if data.nrows() != dim || data.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: data.nrows().max(data.ncols()),
            });
        }
        let herm = hermiticity_error(&data);
        if herm > HERMITIAN_TOL {
            return Err(Error::Validation(format!("not Hermitian (error {herm:.3e})")));
        }
        let tr = trace(&data);
        if (tr - c(1.0)).norm() > TRACE_TOL {
            return Err(Error::Validation(format!("trace is {tr}, expected 1")));
        }
        let min_eig = hermitian_eigenvalues(&data)[0];
        if min_eig < -PSD_TOL {
            return Err(Error::Validation(format!(
                "not positive semidefinite (smallest eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(DensityMatrix { dim_a, dim_b, data })
    }

    pub(crate) fn new_unchecked(dim_a: usize, dim_b: usize, data: CMatrix) -> Self {
        debug_assert_eq!(data.nrows(), dim_a * dim_b);
        DensityMatrix { dim_a, dim_b, data }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        DensityMatrix::new_unchecked(psi.dim_a, psi.dim_b, v * v.adjoint())
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    /// `tr(ρ·op)` real part; for a projector this is the overlap with its range.
    pub fn expectation(&self, op: &CMatrix) -> f64 {
        trace(&(&self.data * op)).re
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.data)
    }

    /// `½‖ρ - σ‖₁`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        0.5 * trace_norm(&(&self.data - &other.data))
    }
}

/// A unit vector on `C^{dim_a} ⊗ C^{dim_b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dim_a: usize,
    dim_b: usize,
    amplitudes: CVector,
}

impl PureState {
    /// Validates the dimension and that the norm is 1 within 1e-12.
    pub fn new(dim_a: usize, dim_b: usize, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                expected: dim_a * dim_b,
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!("state norm is {norm}, expected 1")));
        }
        Ok(PureState {
            dim_a,
            dim_b,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes` before validation; fails on a zero vector.
    pub fn normalized(dim_a: usize, dim_b: usize, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Validation("cannot normalize a zero vector".into()));
        }
        PureState::new(dim_a, dim_b, amplitudes / c(norm))
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Amplitudes reshaped to a `dim_a × dim_b` matrix `M[a, b] = ψ[a·dim_b + b]`.
    pub fn amplitude_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.dim_a, self.dim_b, |a, b| {
            self.amplitudes[a * self.dim_b + b]
        })
    }

    /// `⟨ψ|op|ψ⟩`, real part.
    pub fn expectation(&self, op: &CMatrix) -> f64 {
        self.amplitudes.dotc(&(op * &self.amplitudes)).re
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Reduced density matrix of one factor.
    pub fn marginal(&self, keep: Subsystem) -> CMatrix {
        let m = self.amplitude_matrix();
        match keep {
            Subsystem::A => &m * m.adjoint(),
            // ρ_B[b, b'] = Σ_a ψ[a,b] conj(ψ[a,b'])
            Subsystem::B => m.transpose() * m.map(|z| z.conj()),
        }
    }
}

/// A member of the invariant one-parameter family `ρ(p)` of spin-j ⊗ spin-½.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricState {
    pub j: Spin,
    pub p: f64,
}

impl SymmetricState {
    pub fn new(j: Spin, p: f64) -> Result<Self> {
        check_family(j, p)?;
        Ok(SymmetricState { j, p })
    }

    pub fn density(&self) -> DensityMatrix {
        rho_p(self.j, self.p).expect("validated on construction")
    }
}

/// Schmidt decomposition `ψ = Σ_k λ_k |left_k⟩ ⊗ |right_k⟩`, coefficients nonincreasing.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    pub coefficients: Vec<f64>,
    pub left: Vec<CVector>,
    pub right: Vec<CVector>,
}

impl SchmidtData {
    pub fn reconstruct(&self) -> CVector {
        let dim = self.left[0].len() * self.right[0].len();
        let mut out = CVector::from_element(dim, ZERO);
        for ((lam, l), r) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            out += crate::linalg::kron_vec(l, r) * c(*lam);
        }
        out
    }

    /// Number of coefficients above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&l| l > tol).count()
    }
}

fn check_unit_interval(what: &'static str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(what, x, "[0, 1]"));
    }
    Ok(())
}

fn check_family(j: Spin, p: f64) -> Result<()> {
    if j.twice() == 0 {
        return Err(Error::domain("j", 0.0, "j ≥ 1/2"));
    }
    check_unit_interval("p", p)
}

/// `ρ(p) = (1-p)/(2j+2) Π_{j+½} + p/(2j) Π_{j-½}`.
pub fn rho_p(j: Spin, p: f64) -> Result<DensityMatrix> {
    check_family(j, p)?;
    rho_p_with(&coupled_basis(j, Spin::HALF), p)
}

/// [`rho_p`] reusing a precomputed `j ⊗ ½` coupled basis.
pub fn rho_p_with(basis: &CoupledBasis, p: f64) -> Result<DensityMatrix> {
    let j = basis.j1;
    check_family(j, p)?;
    let tj = f64::from(j.twice());
    let upper = basis.projector(Spin::from_twice(j.twice() + 1)).expect("j+½ present");
    let lower = basis.projector(Spin::from_twice(j.twice() - 1)).expect("j-½ present");
    let data = upper * c((1.0 - p) / (tj + 2.0)) + lower * c(p / tj);
    Ok(DensityMatrix::new_unchecked(j.dim(), 2, data))
}

/// Projector `Π_{j-½}` of spin-j ⊗ spin-½.
pub fn lower_projector(j: Spin) -> Result<CMatrix> {
    if j.twice() == 0 {
        return Err(Error::domain("j", 0.0, "j ≥ 1/2"));
    }
    Ok(coupled_basis(j, Spin::HALF)
        .projector(Spin::from_twice(j.twice() - 1))
        .expect("j-½ present")
        .clone())
}

/// `|χ(μ)⟩ = -√μ |j, j-1⟩|↑⟩ + √(1-μ) |j, j⟩|↓⟩`.
pub fn chi_state(j: Spin, mu: f64) -> Result<PureState> {
    if j.twice() == 0 {
        return Err(Error::domain("j", 0.0, "j ≥ 1/2"));
    }
    check_unit_interval("mu", mu)?;
    let mut v = CVector::from_element(2 * j.dim(), ZERO);
    // |j,j-1⟩ is A-index 1, |↑⟩ is B-index 0
    v[2] = c(-mu.sqrt());
    v[1] = c((1.0 - mu).sqrt());
    PureState::new(j.dim(), 2, v)
}

/// Product state `|j, j⟩ ⊗ (√(1-ν)|↑⟩ + √ν|↓⟩)`.
pub fn phi_product_state(j: Spin, nu: f64) -> Result<PureState> {
    check_unit_interval("nu", nu)?;
    let mut v = CVector::from_element(2 * j.dim(), ZERO);
    v[0] = c((1.0 - nu).sqrt());
    v[1] = c(nu.sqrt());
    PureState::new(j.dim(), 2, v)
}

/// Fiducial state `(U ⊗ 1)|χ(μ)⟩`.
pub fn psi_mu_u(j: Spin, mu: f64, u: &CMatrix) -> Result<PureState> {
    if u.nrows() != j.dim() || u.ncols() != j.dim() {
        return Err(Error::DimensionMismatch {
            expected: j.dim(),
            found: u.nrows().max(u.ncols()),
        });
    }
    let err = unitarity_error(u);
    if err > UNITARY_TOL {
        return Err(Error::Validation(format!("matrix is not unitary (error {err:.3e})")));
    }
    let chi = chi_state(j, mu)?;
    let full = kron(u, &CMatrix::identity(2, 2));
    PureState::normalized(j.dim(), 2, full * chi.amplitudes())
}

/// Schmidt decomposition by SVD of the amplitude matrix.
pub fn schmidt(psi: &PureState) -> SchmidtData {
    let m = psi.amplitude_matrix();
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    SchmidtData {
        coefficients: order.iter().map(|&k| svd.singular_values[k]).collect(),
        left: order.iter().map(|&k| u.column(k).into_owned()).collect(),
        right: order
            .iter()
            .map(|&k| vt.row(k).transpose().into_owned())
            .collect(),
    }
}

/// Reduced state of the kept factor.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> DensityMatrix {
    let (da, db) = (rho.dim_a, rho.dim_b);
    let m = &rho.data;
    match keep {
        Subsystem::A => {
            let out = CMatrix::from_fn(da, da, |a, a2| {
                (0..db).map(|b| m[(a * db + b, a2 * db + b)]).sum()
            });
            DensityMatrix::new_unchecked(da, 1, out)
        }
        Subsystem::B => {
            let out = CMatrix::from_fn(db, db, |b, b2| {
                (0..da).map(|a| m[(a * db + b, a * db + b2)]).sum()
            });
            DensityMatrix::new_unchecked(1, db, out)
        }
    }
}

/// Partial transpose on subsystem B in the product basis.
pub fn partial_transpose_b(rho: &DensityMatrix) -> CMatrix {
    partial_transpose_b_matrix(&rho.data, rho.dim_b)
}

/// Partial transpose on the second factor of any matrix on a `dim_a·dim_b` space.
pub fn partial_transpose_b_matrix(m: &CMatrix, dim_b: usize) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |r, s| {
        let (a, b) = (r / dim_b, r % dim_b);
        let (a2, b2) = (s / dim_b, s % dim_b);
        m[(a * dim_b + b2, a2 * dim_b + b)]
    })
}

fn check_twirl_dims(sigma: &DensityMatrix, j1: Spin, j2: Spin) -> Result<()> {
    if sigma.dim_a != j1.dim() {
        return Err(Error::DimensionMismatch {
            expected: j1.dim(),
            found: sigma.dim_a,
        });
    }
    if sigma.dim_b != j2.dim() {
        return Err(Error::DimensionMismatch {
            expected: j2.dim(),
            found: sigma.dim_b,
        });
    }
    Ok(())
}

/// Overlaps `p_J = tr(σ Π_J)` for every total spin `J`, ascending in `J`.
pub fn twirl_overlaps(sigma: &DensityMatrix, j1: Spin, j2: Spin) -> Result<Vec<(Spin, f64)>> {
    check_twirl_dims(sigma, j1, j2)?;
    let basis = coupled_basis(j1, j2);
    Ok(basis
        .total_spins()
        .into_iter()
        .map(|jt| (jt, sigma.expectation(basis.projector(jt).unwrap())))
        .collect())
}

/// Exact rotational twirl `Σ_J tr(σΠ_J) Π_J / (2J+1)`.
pub fn twirl_exact(sigma: &DensityMatrix, j1: Spin, j2: Spin) -> Result<DensityMatrix> {
    check_twirl_dims(sigma, j1, j2)?;
    let basis = coupled_basis(j1, j2);
    let dim = basis.dim();
    let mut out = CMatrix::zeros(dim, dim);
    for jt in basis.total_spins() {
        let proj = basis.projector(jt).unwrap();
        let weight = sigma.expectation(proj) / jt.dim() as f64;
        out += proj * c(weight);
    }
    Ok(DensityMatrix::new_unchecked(j1.dim(), j2.dim(), out))
}

/// Monte Carlo twirl estimate with its trace distance to the exact twirl.
#[derive(Debug, Clone)]
pub struct MonteCarloTwirl {
    pub estimate: DensityMatrix,
    pub exact: DensityMatrix,
    pub trace_distance: f64,
    pub samples: usize,
}

const MC_CHUNK: usize = 1024;

/// Average `(D⊗D) σ (D⊗D)†` over `n_samples` Haar rotations.
///
/// Samples are drawn in fixed-size chunks, chunk `k` from stream `k` of the seeded
/// generator, and summed in chunk order, so the result depends only on the seed.
pub fn twirl_monte_carlo(
    sigma: &DensityMatrix,
    j1: Spin,
    j2: Spin,
    n_samples: usize,
    seed: u64,
) -> Result<MonteCarloTwirl> {
    check_twirl_dims(sigma, j1, j2)?;
    if n_samples == 0 {
        return Err(Error::domain("n_samples", 0.0, "n_samples ≥ 1"));
    }
    let ops1 = spin_operators(j1);
    let ops2 = spin_operators(j2);
    let dim = sigma.dim();
    let n_chunks = n_samples.div_ceil(MC_CHUNK);
    let partials: Vec<CMatrix> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let count = MC_CHUNK.min(n_samples - chunk * MC_CHUNK);
            let mut acc = CMatrix::zeros(dim, dim);
            for _ in 0..count {
                let r = haar_rotation(&mut rng);
                let d = kron(&wigner_rotation_with(&ops1, &r), &wigner_rotation_with(&ops2, &r));
                acc += &d * &sigma.data * d.adjoint();
            }
            acc
        })
        .collect();
    let mut total = CMatrix::zeros(dim, dim);
    for p in &partials {
        total += p;
    }
    total /= c(n_samples as f64);
    // Restore exact hermiticity lost to round-off.
    let total = (&total + total.adjoint()) * c(0.5);
    let estimate = DensityMatrix::new_unchecked(sigma.dim_a, sigma.dim_b, total);
    let exact = twirl_exact(sigma, j1, j2)?;
    let trace_distance = estimate.trace_distance(&exact);
    Ok(MonteCarloTwirl {
        estimate,
        exact,
        trace_distance,
        samples: n_samples,
    })
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(dim_a: usize, dim_b: usize, rng: &mut R) -> PureState {
    PureState::new(dim_a, dim_b, random_unit_vector(dim_a * dim_b, rng))
        .expect("unit vector of the right size")
}

/// Full-rank random mixed state `G G† / tr(G G†)` from a Ginibre matrix.
pub fn random_density_matrix<R: Rng + ?Sized>(
    dim_a: usize,
    dim_b: usize,
    rng: &mut R,
) -> DensityMatrix {
    let dim = dim_a * dim_b;
    let g = random_gaussian_matrix(dim, dim, rng);
    let mut m = &g * g.adjoint();
    let tr = trace(&m).re;
    m /= c(tr);
    let m = (&m + m.adjoint()) * c(0.5);
    DensityMatrix::new_unchecked(dim_a, dim_b, m)
}
