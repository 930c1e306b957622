//! Closed-form two-qubit concurrence and entanglement of formation.

use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMat, C64};
use crate::measures::{MeasureKind, MeasureSpec};
use crate::quantum::DensityMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitEntanglement {
    pub concurrence: f64,
    pub eof: f64,
}

/// Binary entropy in bits.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// `E_F = H₂((1 + √(1 − C²))/2)`.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy((1.0 + (1.0 - c * c).max(0.0).sqrt()) / 2.0)
}

/// `C = max(0, λ₁ − λ₂ − λ₃ − λ₄)` with `λ_i` the decreasing square roots of
/// the spectrum of `√ρ ρ̃ √ρ`, `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn wootters_eof(rho: &DensityMatrix) -> Result<TwoQubitEntanglement> {
    if rho.signature().dims() != [2, 2] {
        return Err(Error::Signature(format!("Wootters formula needs a 2⊗2 state, got {}", rho.signature())));
    }
    let one = C64::new(1.0, 0.0);
    let mut flip = CMat::zeros(4, 4);
    flip[(0, 3)] = -one;
    flip[(1, 2)] = one;
    flip[(2, 1)] = one;
    flip[(3, 0)] = -one;
    let tilde = &flip * rho.matrix().conjugate() * &flip;
    let root = linalg::psd_sqrt(rho.matrix());
    let product = &root * tilde * &root;
    let lambdas: Vec<f64> = linalg::eigvalsh(&product).iter().map(|&m| m.max(0.0).sqrt()).collect();
    let concurrence = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    Ok(TwoQubitEntanglement { concurrence, eof: eof_from_concurrence(concurrence) })
}

/// Exact two-qubit convex roof for the measures that have one: the
/// entanglement of formation, the concurrence roof `C`, and the tangle
/// roof `C²`. `None` for other measures or signatures.
pub fn exact_two_qubit_roof(rho: &DensityMatrix, spec: &MeasureSpec) -> Option<f64> {
    if rho.signature().dims() != [2, 2] {
        return None;
    }
    let w = wootters_eof(rho).ok()?;
    match spec.kind() {
        _ if spec == &MeasureSpec::eoe() => Some(w.eof),
        MeasureKind::Concurrence => Some(w.concurrence),
        MeasureKind::Tangle => Some(w.concurrence * w.concurrence),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{bell, DimSignature};

    #[test]
    fn bell_and_identity() {
        let b = wootters_eof(&bell().density()).unwrap();
        assert!((b.concurrence - 1.0).abs() < 1e-10 && (b.eof - 1.0).abs() < 1e-10);
        let id = DensityMatrix::maximally_mixed(DimSignature::new(vec![2, 2]).unwrap());
        let w = wootters_eof(&id).unwrap();
        assert_eq!(w.concurrence, 0.0);
        assert_eq!(w.eof, 0.0);
    }

    #[test]
    fn werner_example() {
        let b = bell().density();
        let id = DensityMatrix::maximally_mixed(b.signature().clone());
        let rho = DensityMatrix::mixture(&[(0.9, &b), (0.1, &id)]).unwrap();
        let w = wootters_eof(&rho).unwrap();
        // isotropic two-qubit state: C = (3p − 1)/2
        assert!((w.concurrence - 0.85).abs() < 1e-10);
        // H₂((1 + √(1 − 0.85²))/2), evaluated independently
        let x: f64 = (1.0 + (1.0f64 - 0.7225).sqrt()) / 2.0;
        let oracle = -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
        assert!((w.eof - oracle).abs() < 1e-9);
        assert!((w.eof - 0.789_354_960_988_784_7).abs() < 1e-9);
    }

    #[test]
    fn wrong_signature() {
        let rho = DensityMatrix::maximally_mixed(DimSignature::new(vec![2, 3]).unwrap());
        assert!(matches!(wootters_eof(&rho), Err(Error::Signature(_))));
    }
}
