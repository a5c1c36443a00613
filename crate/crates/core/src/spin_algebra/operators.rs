use crate::linalg::{c, kron, CMatrix, I};

use super::Spin;

/// Angular-momentum matrices in the `|j, m⟩` basis, `m` descending, `ħ = 1`.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
}

impl SpinOperators {
    pub fn dim(&self) -> usize {
        self.jz.nrows()
    }

    /// Raising operator `J+ = Jx + iJy`.
    pub fn raising(&self) -> CMatrix {
        &self.jx + &self.jy * I
    }

    /// Lowering operator `J- = Jx - iJy`.
    pub fn lowering(&self) -> CMatrix {
        &self.jx - &self.jy * I
    }

    /// `Jx² + Jy² + Jz²`.
    pub fn casimir(&self) -> CMatrix {
        &self.jx * &self.jx + &self.jy * &self.jy + &self.jz * &self.jz
    }

    /// `n·J` for a real 3-vector `n`.
    pub fn along(&self, n: [f64; 3]) -> CMatrix {
        &self.jx * c(n[0]) + &self.jy * c(n[1]) + &self.jz * c(n[2])
    }

    /// Total angular momentum of a two-spin system, `J₁⊗1 + 1⊗J₂`.
    pub fn coupled(a: &SpinOperators, b: &SpinOperators) -> SpinOperators {
        let ia = CMatrix::identity(a.dim(), a.dim());
        let ib = CMatrix::identity(b.dim(), b.dim());
        let total = |x: &CMatrix, y: &CMatrix| kron(x, &ib) + kron(&ia, y);
        SpinOperators {
            jx: total(&a.jx, &b.jx),
            jy: total(&a.jy, &b.jy),
            jz: total(&a.jz, &b.jz),
        }
    }
}

/// Ladder-operator construction of `Jx, Jy, Jz` for spin `j`.
pub fn spin_operators(j: Spin) -> SpinOperators {
    let n = j.dim();
    let jv = j.value();
    let mut jz = CMatrix::zeros(n, n);
    let mut jp = CMatrix::zeros(n, n);
    for (k, tm) in j.twice_ms().enumerate() {
        let m = f64::from(tm) / 2.0;
        jz[(k, k)] = c(m);
        if k > 0 {
            // ⟨m+1| J+ |m⟩
            jp[(k - 1, k)] = c((jv * (jv + 1.0) - m * (m + 1.0)).sqrt());
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * c(0.5);
    let jy = (&jp - &jm) * (-I * 0.5);
    SpinOperators { jx, jy, jz }
}
