use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::linalg::{c, hermitian_eigen, CMatrix, CVector, ZERO};

use super::{spin_operators, Spin, SpinOperators};

/// Orthonormal `|J, m⟩` states of the coupled pair `j1 ⊗ j2` in the product basis
/// (spin `j1` major, `m` descending within each factor), plus the projectors `Π_J`.
///
/// Phases follow Condon–Shortley: the stretched state `|J, J⟩` has a real positive
/// coefficient on its largest-`m1` component, and lower `m` are reached with `J-`.
#[derive(Debug, Clone)]
pub struct CoupledBasis {
    pub j1: Spin,
    pub j2: Spin,
    vectors: BTreeMap<(u32, i32), CVector>,
    projectors: BTreeMap<u32, CMatrix>,
}

impl CoupledBasis {
    pub fn dim(&self) -> usize {
        self.j1.dim() * self.j2.dim()
    }

    /// Allowed total spins `|j1-j2|, …, j1+j2`, ascending.
    pub fn total_spins(&self) -> Vec<Spin> {
        self.projectors.keys().map(|&t| Spin::from_twice(t)).collect()
    }

    /// The vector `|J, m⟩` with `m = twice_m / 2`.
    pub fn vector(&self, total: Spin, twice_m: i32) -> Option<&CVector> {
        self.vectors.get(&(total.twice(), twice_m))
    }

    pub fn projector(&self, total: Spin) -> Option<&CMatrix> {
        self.projectors.get(&total.twice())
    }

    /// Iterate over `((J, 2m), |J, m⟩)` for every basis vector.
    pub fn iter(&self) -> impl Iterator<Item = ((Spin, i32), &CVector)> {
        self.vectors
            .iter()
            .map(|(&(tj, tm), v)| ((Spin::from_twice(tj), tm), v))
    }

    fn from_vectors(j1: Spin, j2: Spin, vectors: BTreeMap<(u32, i32), CVector>) -> Self {
        let dim = j1.dim() * j2.dim();
        let mut projectors: BTreeMap<u32, CMatrix> = BTreeMap::new();
        for (&(tj, _), v) in &vectors {
            let p = projectors
                .entry(tj)
                .or_insert_with(|| CMatrix::zeros(dim, dim));
            *p += v * v.adjoint();
        }
        CoupledBasis {
            j1,
            j2,
            vectors,
            projectors,
        }
    }
}

/// Coupled basis of `j1 ⊗ j2`. Uses the closed-form coefficients when `j2 = ½`,
/// otherwise diagonalizes total `J²` numerically.
pub fn coupled_basis(j1: Spin, j2: Spin) -> CoupledBasis {
    if j2 == Spin::HALF {
        coupled_basis_spin_half(j1)
    } else {
        coupled_basis_numeric(j1, j2)
    }
}

/// `|j±½, m⟩ = ±√((j+½±m)/(2j+1)) |j, m-½⟩|↑⟩ + √((j+½∓m)/(2j+1)) |j, m+½⟩|↓⟩`.
fn coupled_basis_spin_half(j: Spin) -> CoupledBasis {
    let tj = j.twice() as i32;
    let dim = 2 * j.dim();
    let denom = 2.0 * f64::from(tj + 1);
    let mut vectors = BTreeMap::new();

    let mut totals = vec![(tj + 1, 1.0)];
    if tj > 0 {
        totals.push((tj - 1, -1.0));
    }
    for (t_total, sign) in totals {
        for tm in (-t_total..=t_total).rev().step_by(2) {
            let mut v = CVector::from_element(dim, ZERO);
            // (j + ½ ± m)/(2j+1) in units of 2
            let up_weight = f64::from(tj + 1) + sign * f64::from(tm);
            let down_weight = f64::from(tj + 1) - sign * f64::from(tm);
            if let Some(a) = j.index_of(tm - 1) {
                v[2 * a] = c(sign * (up_weight / denom).sqrt());
            }
            if let Some(a) = j.index_of(tm + 1) {
                v[2 * a + 1] = c((down_weight / denom).sqrt());
            }
            vectors.insert((t_total as u32, tm), v);
        }
    }
    CoupledBasis::from_vectors(j, Spin::HALF, vectors)
}

/// General coupled basis by diagonalizing `J²` in the stretched-`m` block and lowering.
fn coupled_basis_numeric(j1: Spin, j2: Spin) -> CoupledBasis {
    let ops1 = spin_operators(j1);
    let ops2 = spin_operators(j2);
    let total = SpinOperators::coupled(&ops1, &ops2);
    let casimir = total.casimir();
    let lower = total.lowering();
    let d2 = j2.dim();

    // product index -> 2m1 + 2m2
    let m1s: Vec<i32> = j1.twice_ms().collect();
    let m2s: Vec<i32> = j2.twice_ms().collect();
    let twice_m_of = |idx: usize| m1s[idx / d2] + m2s[idx % d2];

    let t1 = j1.twice() as i32;
    let t2 = j2.twice() as i32;
    let mut vectors = BTreeMap::new();
    for t_total in ((t1 - t2).abs()..=(t1 + t2)).step_by(2) {
        let block: Vec<usize> = (0..j1.dim() * d2)
            .filter(|&i| twice_m_of(i) == t_total)
            .collect();
        let sub = DMatrix::from_fn(block.len(), block.len(), |r, s| {
            casimir[(block[r], block[s])]
        });
        let (vals, vecs) = hermitian_eigen(&sub);
        let jv = f64::from(t_total) / 2.0;
        let target = jv * (jv + 1.0);
        let best = (0..vals.len())
            .min_by(|&a, &b| (vals[a] - target).abs().total_cmp(&(vals[b] - target).abs()))
            .expect("non-empty block");

        let mut top = CVector::from_element(j1.dim() * d2, ZERO);
        for (r, &i) in block.iter().enumerate() {
            top[i] = vecs[(r, best)];
        }
        // Condon–Shortley: real positive coefficient on the largest-m1 component.
        // Product indices are m1-major with m1 descending, so that is the first non-zero entry.
        let lead = top
            .iter()
            .copied()
            .find(|z| z.norm() > 1e-12)
            .expect("non-zero eigenvector");
        top *= lead.conj() / c(lead.norm());
        top /= c(top.norm());

        let mut current = top;
        let mut tm = t_total;
        loop {
            vectors.insert((t_total as u32, tm), current.clone());
            if tm == -t_total {
                break;
            }
            let next = &lower * &current;
            current = &next / c(next.norm());
            tm -= 2;
        }
    }
    CoupledBasis::from_vectors(j1, j2, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn check_invariants(basis: &CoupledBasis) {
        let dim = basis.dim();
        let ops = SpinOperators::coupled(&spin_operators(basis.j1), &spin_operators(basis.j2));
        let casimir = ops.casimir();
        let all: Vec<_> = basis.iter().collect();
        assert_eq!(all.len(), dim);
        for (a, ((ja, ma), va)) in all.iter().enumerate() {
            for (b, (_, vb)) in all.iter().enumerate() {
                let ip = va.dotc(vb);
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((ip - c(expect)).norm() < 1e-10);
            }
            let jj = ja.value() * (ja.value() + 1.0);
            let r = &casimir * *va - *va * c(jj);
            assert!(r.norm() < 1e-10, "J² eigen check failed for J={ja} 2m={ma}");
            let r = &ops.jz * *va - *va * c(f64::from(*ma) / 2.0);
            assert!(r.norm() < 1e-10);
        }
        let mut sum = CMatrix::zeros(dim, dim);
        for jt in basis.total_spins() {
            let p = basis.projector(jt).unwrap();
            sum += p;
            for jt2 in basis.total_spins() {
                let q = basis.projector(jt2).unwrap();
                let expected = if jt == jt2 { p.clone() } else { CMatrix::zeros(dim, dim) };
                assert!(max_abs_diff(&(p * q), &expected) < 1e-10);
            }
        }
        assert!(max_abs_diff(&sum, &CMatrix::identity(dim, dim)) < 1e-10);
    }

    #[test]
    fn invariants_hold_up_to_spin_two() {
        for t1 in 0..=4 {
            for t2 in 0..=4 {
                check_invariants(&coupled_basis(Spin::from_twice(t1), Spin::from_twice(t2)));
            }
        }
    }

    #[test]
    fn numeric_route_reproduces_closed_form_phases() {
        for tj in 1..=7 {
            let j = Spin::from_twice(tj);
            let closed = coupled_basis_spin_half(j);
            let numeric = coupled_basis_numeric(j, Spin::HALF);
            for ((jt, tm), v) in closed.iter() {
                let w = numeric.vector(jt, tm).unwrap();
                assert!((v - w).norm() < 1e-10, "j={j} J={jt} 2m={tm}");
            }
        }
    }

    #[test]
    fn two_spin_halves() {
        let basis = coupled_basis(Spin::HALF, Spin::HALF);
        let stretched = basis.vector(Spin::ONE, 2).unwrap();
        assert!((stretched[0] - c(1.0)).norm() < 1e-15);
        let singlet = basis.vector(Spin::ZERO, 0).unwrap();
        // lower sign at j = ½, m = 0: (|↑↓⟩ - |↓↑⟩)/√2
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((singlet[1] - c(h)).norm() < 1e-15);
        assert!((singlet[2] - c(-h)).norm() < 1e-15);
        let ops = SpinOperators::coupled(
            &spin_operators(Spin::HALF),
            &spin_operators(Spin::HALF),
        );
        let expectation = singlet.dotc(&(ops.casimir() * singlet));
        assert!(expectation.norm() < 1e-15);
    }

    #[test]
    fn spin_one_with_half_clebsch_gordan() {
        // |3/2, ½⟩ = √(2/3)|1,0⟩|↑⟩ + √(1/3)|1,1⟩|↓⟩
        let basis = coupled_basis(Spin::ONE, Spin::HALF);
        let v = basis.vector(Spin::from_twice(3), 1).unwrap();
        // component |1,1⟩|↓⟩ has index 1; coefficient √((j+½-m)/(2j+1)) = √(1/3)
        assert!((v[1] - c((1.0f64 / 3.0).sqrt())).norm() < 1e-14);
        // component |1,0⟩|↑⟩ has index 2; coefficient √((j+½+m)/(2j+1)) = √(2/3)
        assert!((v[2] - c((2.0f64 / 3.0).sqrt())).norm() < 1e-14);
        // lower multiplet carries the minus sign on the |m-½⟩|↑⟩ component
        let w = basis.vector(Spin::HALF, 1).unwrap();
        assert!((w[2] - c(-(1.0f64 / 3.0).sqrt())).norm() < 1e-14);
        assert!((w[1] - c((2.0f64 / 3.0).sqrt())).norm() < 1e-14);
    }
}
