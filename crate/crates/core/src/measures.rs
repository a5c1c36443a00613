//! Closed-form entanglement measures of the invariant family `ρ(p)` of spin-j ⊗ spin-½,
//! and the pure-state measures they are built from. All entropies are in nats.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::spin_algebra::Spin;
use crate::states::{partial_transpose_b, DensityMatrix, PureState, Subsystem};

/// Eigenvalues in `[-CLAMP_WINDOW, 0)` are treated as round-off and set to 0 before entropies.
const CLAMP_WINDOW: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    #[serde(rename = "eof")]
    EoF,
    Epsilon,
    #[serde(rename = "iconcurrence")]
    IConcurrence,
    Tangle,
    Negativity,
    #[serde(rename = "crnegativity")]
    CrNegativity,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 6] = [
        MeasureKind::EoF,
        MeasureKind::Epsilon,
        MeasureKind::IConcurrence,
        MeasureKind::Tangle,
        MeasureKind::Negativity,
        MeasureKind::CrNegativity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::EoF => "eof",
            MeasureKind::Epsilon => "epsilon",
            MeasureKind::IConcurrence => "iconcurrence",
            MeasureKind::Tangle => "tangle",
            MeasureKind::Negativity => "negativity",
            MeasureKind::CrNegativity => "crnegativity",
        }
    }

    /// Whether the value is an entropy (and so convertible to bits).
    pub fn is_entropic(self) -> bool {
        matches!(self, MeasureKind::EoF | MeasureKind::Epsilon)
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s.trim().to_ascii_lowercase().as_str() {
            "eof" | "ef" | "formation" => MeasureKind::EoF,
            "epsilon" | "eps" => MeasureKind::Epsilon,
            "iconcurrence" | "concurrence" | "i-concurrence" => MeasureKind::IConcurrence,
            "tangle" | "itangle" => MeasureKind::Tangle,
            "negativity" | "neg" => MeasureKind::Negativity,
            "crnegativity" | "cr-negativity" | "convex-roof-negativity" => MeasureKind::CrNegativity,
            other => return Err(Error::Parse(format!("unknown measure {other:?}"))),
        };
        Ok(kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Oracle,
}

/// Diagnostics attached to oracle-produced values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerMetadata {
    pub iterations: usize,
    pub restarts: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub kind: MeasureKind,
    pub j: Spin,
    pub p: f64,
    pub value: f64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<OptimizerMetadata>,
}

/// Smaller Schmidt square `μ ∈ [0, 1]` of a rank-two pure state.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MuValue(f64);

impl MuValue {
    pub fn new(mu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::domain("mu", mu, "[0, 1]"));
        }
        Ok(MuValue(mu))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

pub fn nats_to_bits(x: f64) -> f64 {
    x / std::f64::consts::LN_2
}

fn check_unit(what: &'static str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(what, x, "[0, 1]"));
    }
    Ok(())
}

fn check_spin(j: Spin) -> Result<f64> {
    if j.twice() == 0 {
        return Err(Error::domain("j", 0.0, "j ≥ 1/2"));
    }
    Ok(f64::from(j.twice()))
}

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `H(x) = -x ln x - (1-x) ln(1-x)`, with `0·ln 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_unit("x", x)?;
    Ok(-xlogx(x) - xlogx(1.0 - x))
}

/// Shannon entropy of a spectrum after clamping round-off negatives to 0.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> f64 {
    let mut clamped = 0.0f64;
    let mut s = 0.0;
    for &v in eigenvalues {
        let v = if v < 0.0 {
            if v < -CLAMP_WINDOW {
                log::warn!("eigenvalue {v:.3e} below the round-off window clamped to 0");
            }
            clamped = clamped.max(-v);
            0.0
        } else {
            v
        };
        s -= xlogx(v);
    }
    if clamped > 0.0 {
        log::debug!("clamped negative eigenvalues of magnitude up to {clamped:.3e}");
    }
    s
}

/// `-tr(ρ ln ρ)`.
pub fn von_neumann_entropy(rho: &CMatrix) -> f64 {
    spectrum_entropy(&hermitian_eigenvalues(rho))
}

/// Entanglement entropy of a pure state, computed from one marginal.
pub fn pure_entanglement_from(psi: &PureState, side: Subsystem) -> f64 {
    von_neumann_entropy(&psi.marginal(side))
}

/// Entanglement entropy `E(ψ)`, from the smaller marginal.
pub fn pure_entanglement(psi: &PureState) -> f64 {
    let side = if psi.dim_b() <= psi.dim_a() {
        Subsystem::B
    } else {
        Subsystem::A
    };
    pure_entanglement_from(psi, side)
}

/// `C(ψ) = √(2[1 - tr ρ_A²])`.
pub fn concurrence_pure(psi: &PureState) -> f64 {
    let rho = psi.marginal(Subsystem::B);
    let purity = (&rho * &rho).trace().re;
    (2.0 * (1.0 - purity)).max(0.0).sqrt()
}

/// `N(ρ) = -2 Σ (negative eigenvalues of ρ^{T_B})`.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    let pt = partial_transpose_b(rho);
    let s: f64 = hermitian_eigenvalues(&pt).iter().filter(|&&v| v < 0.0).sum();
    -2.0 * s
}

/// `(1/(2j+1)) (√μ + √(2j(1-μ)))²`, the `Π_{j-½}` overlap of `|χ(μ)⟩`.
pub fn p_mu(j: Spin, mu: f64) -> Result<f64> {
    let tj = check_spin(j)?;
    check_unit("mu", mu)?;
    let s = mu.sqrt() + (tj * (1.0 - mu)).sqrt();
    Ok(s * s / (tj + 1.0))
}

/// Smaller-`μ` branch inverse of [`p_mu`], `(1/(2j+1)) (√p - √(2j(1-p)))²`,
/// defined on `[2j/(2j+1), 1]`.
pub fn mu_min(j: Spin, p: f64) -> Result<MuValue> {
    let tj = check_spin(j)?;
    check_unit("p", p)?;
    let threshold = j.threshold();
    if p < threshold {
        return Err(Error::domain("p", p, format!("[{threshold}, 1]")));
    }
    let d = p.sqrt() - (tj * (1.0 - p)).sqrt();
    let mu = (d * d / (tj + 1.0)).clamp(0.0, 1.0 / (tj + 1.0));
    MuValue::new(mu)
}

/// `ε(p)`: the least entanglement of a pure state with overlap `p` on `Π_{j-½}`.
pub fn epsilon(j: Spin, p: f64) -> Result<f64> {
    check_spin(j)?;
    check_unit("p", p)?;
    if p <= j.threshold() {
        return Ok(0.0);
    }
    binary_entropy(mu_min(j, p)?.get())
}

/// Entanglement of formation of `ρ(p)`. `ε` is convex, so its convex hull is itself.
pub fn eof(j: Spin, p: f64) -> Result<f64> {
    epsilon(j, p)
}

/// `ε''(p)` on the open interval `(2j/(2j+1), 1)`:
/// `(p(1-p))^{3/2} ε'' = (√(2j)/(2j+1)) ln((√(2jp)+√(1-p))/(√p-√(2j(1-p)))) - √(p(1-p))`.
pub fn epsilon_second_derivative(j: Spin, p: f64) -> Result<f64> {
    let tj = check_spin(j)?;
    let threshold = j.threshold();
    if !(p > threshold && p < 1.0) {
        return Err(Error::domain("p", p, format!("({threshold}, 1)")));
    }
    let q = 1.0 - p;
    let num = (tj * p).sqrt() + q.sqrt();
    let den = p.sqrt() - (tj * q).sqrt();
    let rhs = tj.sqrt() / (tj + 1.0) * (num / den).ln() - (p * q).sqrt();
    Ok(rhs / (p * q).powf(1.5))
}

/// Right-hand side of the lower bound `(p(1-p))^{3/2} ε'' ≥ (√(2j)/(2(2j+1))) ln 2j`.
pub fn second_derivative_lower_bound(j: Spin) -> Result<f64> {
    let tj = check_spin(j)?;
    Ok(tj.sqrt() / (2.0 * (tj + 1.0)) * tj.ln())
}

/// `c(p) = (2/(2j+1)) (√(2j)(2p-1) - (2j-1)√(p(1-p)))`, unclamped.
fn concurrence_branch(tj: f64, p: f64) -> f64 {
    2.0 / (tj + 1.0) * (tj.sqrt() * (2.0 * p - 1.0) - (tj - 1.0) * (p * (1.0 - p)).sqrt())
}

/// I-concurrence of `ρ(p)`.
pub fn i_concurrence(j: Spin, p: f64) -> Result<f64> {
    let tj = check_spin(j)?;
    check_unit("p", p)?;
    if p <= j.threshold() {
        return Ok(0.0);
    }
    Ok(concurrence_branch(tj, p).max(0.0))
}

/// I-tangle of `ρ(p)`: `c(p)²` above threshold.
pub fn tangle(j: Spin, p: f64) -> Result<f64> {
    let c = i_concurrence(j, p)?;
    Ok(c * c)
}

/// Spectrum of `ρ(p)^{T_B}` as `[(μ+, 2(j+1)), (μ-, 2j)]`.
pub fn partial_transpose_spectrum(j: Spin, p: f64) -> Result<[(f64, usize); 2]> {
    let tj = check_spin(j)?;
    check_unit("p", p)?;
    let mu_plus = (1.0 / (tj + 1.0) + p) / (tj + 2.0);
    let mu_minus = 1.0 / (tj + 1.0) - p / tj;
    let t = j.twice() as usize;
    Ok([(mu_plus, t + 2), (mu_minus, t)])
}

/// `N(ρ(p)) = max(0, 2(p - 2j/(2j+1)))`.
pub fn negativity_closed_form(j: Spin, p: f64) -> Result<f64> {
    check_spin(j)?;
    check_unit("p", p)?;
    Ok((2.0 * (p - j.threshold())).max(0.0))
}

/// Convex-roof-extended negativity of `ρ(p)`; equal to the I-concurrence because
/// `N(ψ) = C(ψ)` on Schmidt-rank-two pure states.
pub fn cr_negativity(j: Spin, p: f64) -> Result<f64> {
    i_concurrence(j, p)
}

/// `F_m = (√((1-μ) r_m) + √(μ r_{-m}))²` with `r_m = j + ½ + m`, `m = twice_m / 2`.
pub fn f_extremum(j: Spin, mu: f64, twice_m: i32) -> Result<f64> {
    let tj = check_spin(j)?;
    let t = j.twice() as i32;
    if twice_m.abs() > t - 1 || (t - 1 - twice_m) % 2 != 0 {
        return Err(Error::domain(
            "m",
            f64::from(twice_m) / 2.0,
            format!("{{-j+1/2, …, j-1/2}} for j = {j}"),
        ));
    }
    let mu_max = 1.0 / (tj + 1.0);
    if !(0.0..=mu_max).contains(&mu) {
        return Err(Error::domain("mu", mu, format!("[0, {mu_max}]")));
    }
    let r = |tm: i32| f64::from(t + 1 + tm) / 2.0;
    let s = ((1.0 - mu) * r(twice_m)).sqrt() + (mu * r(-twice_m)).sqrt();
    Ok(s * s)
}

/// Closed-form value of `kind` for `ρ(p)`.
pub fn evaluate(kind: MeasureKind, j: Spin, p: f64) -> Result<f64> {
    match kind {
        MeasureKind::EoF => eof(j, p),
        MeasureKind::Epsilon => epsilon(j, p),
        MeasureKind::IConcurrence => i_concurrence(j, p),
        MeasureKind::Tangle => tangle(j, p),
        MeasureKind::Negativity => negativity_closed_form(j, p),
        MeasureKind::CrNegativity => cr_negativity(j, p),
    }
}

/// [`evaluate`] wrapped in a closed-form [`MeasureReport`].
pub fn report(kind: MeasureKind, j: Spin, p: f64) -> Result<MeasureReport> {
    Ok(MeasureReport {
        kind,
        j,
        p,
        value: evaluate(kind, j, p)?,
        method: Method::ClosedForm,
        metadata: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_algebra::coupled_basis;
    use crate::states::{chi_state, phi_product_state, rho_p};
    use std::f64::consts::LN_2;

    fn spin(tj: u32) -> Spin {
        Spin::from_twice(tj)
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - LN_2).abs() < 1e-15);
        // mpmath, 40 digits: 0.5004024235381878795...
        assert!((binary_entropy(0.2).unwrap() - 0.500_402_423_538_187_9).abs() < 1e-15);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-1e-9).is_err());
    }

    #[test]
    fn eigenstate_entanglement() {
        for tj in 1..=7u32 {
            let j = spin(tj);
            let basis = coupled_basis(j, Spin::HALF);
            let t = f64::from(tj);
            for ((jt, tm), v) in basis.iter() {
                let psi = PureState::new(j.dim(), 2, v.clone()).unwrap();
                let expected =
                    binary_entropy(0.5 - f64::from(tm.abs()) / 2.0 / (t + 1.0)).unwrap();
                assert!((pure_entanglement(&psi) - expected).abs() < 1e-12, "J={jt} 2m={tm}");
                let ea = pure_entanglement_from(&psi, Subsystem::A);
                let eb = pure_entanglement_from(&psi, Subsystem::B);
                assert!((ea - eb).abs() < 1e-10);
            }
            let top = PureState::new(j.dim(), 2, basis.vector(spin(tj + 1), tj as i32 + 1).unwrap().clone()).unwrap();
            assert!(pure_entanglement(&top).abs() < 1e-12);
            let low = PureState::new(j.dim(), 2, basis.vector(spin(tj - 1), tj as i32 - 1).unwrap().clone()).unwrap();
            let h = binary_entropy(1.0 / (t + 1.0)).unwrap();
            assert!((pure_entanglement(&low) - h).abs() < 1e-12);
        }
    }

    #[test]
    fn p_mu_examples() {
        for tj in 1..=8u32 {
            let j = spin(tj);
            let t = f64::from(tj);
            assert!((p_mu(j, 0.0).unwrap() - t / (t + 1.0)).abs() < 1e-15);
            assert!((p_mu(j, 1.0 / (t + 1.0)).unwrap() - 1.0).abs() < 1e-14);
            assert!((p_mu(j, 1.0).unwrap() - 1.0 / (t + 1.0)).abs() < 1e-15);
        }
        assert!(p_mu(Spin::HALF, 1.1).is_err());
        assert!(p_mu(Spin::ZERO, 0.1).is_err());
    }

    #[test]
    fn p_mu_matches_chi_overlap() {
        for tj in 1..=6u32 {
            let j = spin(tj);
            let basis = coupled_basis(j, Spin::HALF);
            let proj = basis.projector(spin(tj - 1)).unwrap();
            for k in 0..=20 {
                let mu = f64::from(k) / 20.0;
                let chi = chi_state(j, mu).unwrap();
                assert!((chi.expectation(proj) - p_mu(j, mu).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mu_min_examples() {
        for tj in 1..=8u32 {
            let j = spin(tj);
            let t = f64::from(tj);
            assert!(mu_min(j, j.threshold()).unwrap().get().abs() < 1e-15);
            assert!((mu_min(j, 1.0).unwrap().get() - 1.0 / (t + 1.0)).abs() < 1e-15);
            for k in 0..=50 {
                let p = j.threshold() + (1.0 - j.threshold()) * f64::from(k) / 50.0;
                let mu = mu_min(j, p).unwrap().get();
                assert!((p_mu(j, mu).unwrap() - p).abs() < 1e-12);
            }
        }
        // (√0.9 - √0.1)²/2 = (1 - 2·0.3)/2 = 0.2
        assert!((mu_min(Spin::HALF, 0.9).unwrap().get() - 0.2).abs() < 1e-15);
        assert!(mu_min(Spin::ONE, 0.5).is_err());
    }

    #[test]
    fn epsilon_and_eof_examples() {
        for tj in 1..=8u32 {
            let j = spin(tj);
            for k in 0..=10 {
                let p = j.threshold() * f64::from(k) / 10.0;
                assert!(epsilon(j, p).unwrap() < 1e-20);
            }
            assert_eq!(epsilon(j, j.threshold()).unwrap(), 0.0);
            {
            }
            let t = f64::from(tj);
            let bound = binary_entropy(1.0 / (t + 1.0)).unwrap();
            for k in 0..=100 {
                let p = f64::from(k) / 100.0;
                assert!(epsilon(j, p).unwrap() <= bound + 1e-15);
            }
        }
        assert!((epsilon(Spin::HALF, 1.0).unwrap() - LN_2).abs() < 1e-15);
        assert!((epsilon(Spin::HALF, 0.9).unwrap() - 0.500_402_423_538_187_9).abs() < 1e-12);
        assert_eq!(eof(spin(6), 6.0 / 7.0).unwrap(), 0.0);
        // H(1/3) = 0.63651416829481278...
        assert!((eof(Spin::ONE, 1.0).unwrap() - 0.636_514_168_294_812_8).abs() < 1e-14);
        assert!(eof(Spin::ONE, 1.5).is_err());
    }

    #[test]
    fn epsilon_is_continuous_at_threshold() {
        for tj in 1..=6u32 {
            let j = spin(tj);
            let e = epsilon(j, j.threshold() + 1e-12).unwrap();
            assert!(e < 1e-9);
        }
    }

    #[test]
    fn second_derivative_domain() {
        assert!(epsilon_second_derivative(Spin::ONE, 1.0).is_err());
        assert!(epsilon_second_derivative(Spin::ONE, 2.0 / 3.0).is_err());
        assert!(epsilon_second_derivative(Spin::ONE, 0.95).unwrap() > 0.0);
        assert_eq!(second_derivative_lower_bound(Spin::HALF).unwrap(), 0.0);
    }

    #[test]
    fn second_derivative_reference_values() {
        // 40-digit mpmath evaluation of the second derivative of H(μ_min(p))
        let cases = [
            (1, 0.6, 5.582_096_980_245_523),
            (1, 0.9, 1.724_947_788_147_135),
            (2, 0.95, 19.434_387_708_708_8),
            (6, 0.99, 331.922_545_645_432_5),
        ];
        for (tj, p, expected) in cases {
            let v = epsilon_second_derivative(spin(tj), p).unwrap();
            assert!(((v - expected) / expected).abs() < 1e-9, "tj={tj} p={p}: {v}");
        }
    }

    #[test]
    fn concurrence_branch_equals_mu_min_form() {
        for tj in 1..=8u32 {
            let j = spin(tj);
            for k in 0..=40 {
                let p = j.threshold() + (1.0 - j.threshold()) * f64::from(k) / 40.0;
                let mu = mu_min(j, p).unwrap().get();
                let via_mu = 2.0 * (mu * (1.0 - mu)).sqrt();
                assert!((i_concurrence(j, p).unwrap() - via_mu).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn concurrence_examples() {
        for k in 0..=20 {
            let p = 0.5 + 0.5 * f64::from(k) / 20.0;
            assert!((i_concurrence(Spin::HALF, p).unwrap() - (2.0 * p - 1.0)).abs() < 1e-12);
        }
        let endpoint = 2.0 * 2.0f64.sqrt() / 3.0;
        assert!((i_concurrence(Spin::ONE, 1.0).unwrap() - endpoint).abs() < 1e-15);
        for tj in 1..=8 {
            let j = spin(tj);
            assert_eq!(i_concurrence(j, j.threshold()).unwrap(), 0.0);
        }
        assert!((tangle(Spin::HALF, 0.75).unwrap() - 0.25).abs() < 1e-15);
        assert!((tangle(Spin::ONE, 1.0).unwrap() - 8.0 / 9.0).abs() < 1e-15);
        assert_eq!(tangle(Spin::ONE, 0.3).unwrap(), 0.0);
        assert!((cr_negativity(Spin::HALF, 0.8).unwrap() - 0.6).abs() < 1e-15);
        assert!((cr_negativity(Spin::ONE, 1.0).unwrap() - endpoint).abs() < 1e-15);
        assert_eq!(cr_negativity(Spin::ONE, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn pure_concurrence_examples() {
        let product = phi_product_state(Spin::ONE, 0.4).unwrap();
        assert!(concurrence_pure(&product).abs() < 1e-7);
        let singlet = chi_state(Spin::HALF, 0.5).unwrap();
        assert!((concurrence_pure(&singlet) - 1.0).abs() < 1e-12);
        let chi = chi_state(Spin::ONE, 0.2).unwrap();
        assert!((concurrence_pure(&chi) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn negativity_examples() {
        assert!((negativity(&rho_p(Spin::HALF, 1.0).unwrap()) - 1.0).abs() < 1e-12);
        assert!((negativity(&rho_p(Spin::ONE, 1.0).unwrap()) - 2.0 / 3.0).abs() < 1e-12);
        assert!(negativity(&rho_p(spin(6), 6.0 / 7.0).unwrap()) < 1e-12);
        assert_eq!(negativity_closed_form(spin(6), 6.0 / 7.0).unwrap(), 0.0);
        assert!((negativity_closed_form(Spin::HALF, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let expected = 2.0 * (0.95 - 6.0 / 7.0);
        assert!((negativity_closed_form(spin(6), 0.95).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.185_714_285_714).abs() < 1e-11);
    }

    #[test]
    fn f_extremum_examples() {
        for tj in 1..=7u32 {
            let j = spin(tj);
            let t = f64::from(tj);
            for k in 0..=10 {
                let mu = f64::from(k) / 10.0 / (t + 1.0);
                let top = f_extremum(j, mu, tj as i32 - 1).unwrap();
                assert!((top / (t + 1.0) - p_mu(j, mu).unwrap()).abs() < 1e-12);
                let mut prev = f64::NEG_INFINITY;
                for tm in (-(tj as i32) + 1..=tj as i32 - 1).step_by(2) {
                    let f = f_extremum(j, mu, tm).unwrap();
                    assert!(f >= prev - 1e-12);
                    prev = f;
                }
            }
        }
        // μ = 0 collapses F_m to r_m; for j = 1 the maximum is at m = ½ with value 2
        assert!((f_extremum(Spin::ONE, 0.0, 1).unwrap() - 2.0).abs() < 1e-15);
        assert!((f_extremum(Spin::ONE, 0.0, -1).unwrap() - 1.0).abs() < 1e-15);
        assert!(f_extremum(Spin::ONE, 0.0, 3).is_err());
        assert!(f_extremum(Spin::ONE, 0.0, 0).is_err());
        assert!(f_extremum(Spin::ONE, 0.5, 1).is_err());
    }

    #[test]
    fn measure_names_parse() {
        for kind in MeasureKind::ALL {
            assert_eq!(kind.name().parse::<MeasureKind>().unwrap(), kind);
        }
        assert_eq!("concurrence".parse::<MeasureKind>().unwrap(), MeasureKind::IConcurrence);
        assert!("entropy?".parse::<MeasureKind>().is_err());
        let json = serde_json::to_string(&MeasureKind::EoF).unwrap();
        assert_eq!(json, "\"eof\"");
    }
}
