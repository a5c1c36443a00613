//! Small dense complex linear-algebra helpers shared by the other modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Kronecker product `a ⊗ b`, with `a` as the major index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for (i, ai) in a.iter().enumerate() {
        for (k, bk) in b.iter().enumerate() {
            out[i * b.len() + k] = ai * bk;
        }
    }
    out
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_error(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending, eigenvectors as columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    // Symmetrize so round-off asymmetry does not leak into the solver.
    let sym = (m + m.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// `exp(i·scale·h)` for Hermitian `h`, computed spectrally so the result is unitary to round-off.
pub fn exp_i_hermitian(h: &CMatrix, scale: f64) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(h);
    let phases = DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| Complex64::from_polar(1.0, scale * v)),
    );
    let scaled = CMatrix::from_fn(vecs.nrows(), vecs.ncols(), |i, j| vecs[(i, j)] * phases[j]);
    scaled * vecs.adjoint()
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let scaled = CMatrix::from_fn(vecs.nrows(), vecs.ncols(), |i, j| vecs[(i, j)] * f(vals[j]));
    scaled * vecs.adjoint()
}

/// Deviation of `u†u` from the identity.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).iter().map(|v| v.abs()).sum()
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Projection onto the nearest column-orthonormal matrix, `x (x†x)^{-1/2}`.
pub fn polar_isometry(x: &CMatrix) -> CMatrix {
    let gram = x.adjoint() * x;
    x * hermitian_map(&gram, |v| 1.0 / v.max(1e-300).sqrt())
}

pub fn random_gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-distributed `n × n` unitary (QR of a Ginibre matrix with the phase of R's diagonal removed).
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = random_gaussian_matrix(n, n, rng);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Uniformly random unit vector in `C^n`.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    let v = random_gaussian_matrix(n, 1, rng).column(0).into_owned();
    let norm = v.norm();
    v / c(norm)
}

/// Eigen-decomposition of a 2×2 Hermitian matrix in closed form.
#[derive(Debug, Clone, Copy)]
pub struct Hermitian2 {
    pub low: f64,
    pub high: f64,
    /// Projector onto the `high` eigenspace, as (p00, p01, p11) with p10 = conj(p01).
    proj_high: (f64, Complex64, f64),
}

impl Hermitian2 {
    pub fn new(a: f64, b: Complex64, d: f64) -> Self {
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        let high = mean + half_gap;
        let low = mean - half_gap;
        let proj_high = if half_gap > 0.0 {
            // (M - low·I) / (high - low)
            let g = 2.0 * half_gap;
            ((a - low) / g, b / g, (d - low) / g)
        } else {
            (0.5, ZERO, 0.5)
        };
        Hermitian2 {
            low,
            high,
            proj_high,
        }
    }

    /// `φ_low·P_low + φ_high·P_high` as a dense 2×2 matrix.
    pub fn spectral_combination(&self, phi_low: f64, phi_high: f64) -> [[Complex64; 2]; 2] {
        let (p00, p01, p11) = self.proj_high;
        let diff = phi_high - phi_low;
        [
            [c(phi_low + diff * p00), p01 * diff],
            [p01.conj() * diff, c(phi_low + diff * p11)],
        ]
    }
}
