//! Structural tests on tripartite states: recovering a factorization
//! `|ψ⟩ = (I ⊗ U_B ⊗ I)|φ⟩^{AB₁}|η⟩^{B₂C}`, productness and PPT separability of
//! a bipartite marginal, and the product forms of a pure tripartite state.

use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMat, C64};
use crate::quantum::{make_product_family, Bipartition, DensityMatrix, DimSignature, Isometry, MatrixRecord, PureState, StateRecord};
use crate::{tolerances, Error, Result};

/// Default tolerance for factorization witnesses.
pub const EPS_WITNESS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationWitness {
    pub dim_b1: usize,
    pub dim_b2: usize,
    /// State on `A ⊗ B₁`.
    pub phi: PureState,
    /// State on `B₂ ⊗ C`.
    pub eta: PureState,
    /// Unitary on `B` whose first `dim B₁ · dim B₂` columns embed `B₁ ⊗ B₂`.
    pub u_b: CMat,
    pub reconstruction_error: f64,
}

impl FactorizationWitness {
    /// `(I ⊗ U_B ⊗ I)(φ ⊗ η)`.
    pub fn reconstruct(&self) -> Result<PureState> {
        let cols = self.dim_b1 * self.dim_b2;
        let embedding = Isometry::new(self.u_b.columns(0, cols).into_owned())?;
        make_product_family(&self.phi, &self.eta, &embedding)
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessRecord {
    dim_b1: usize,
    dim_b2: usize,
    phi: StateRecord,
    eta: StateRecord,
    u_b: MatrixRecord,
    reconstruction_error: f64,
}

impl Serialize for FactorizationWitness {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        WitnessRecord {
            dim_b1: self.dim_b1,
            dim_b2: self.dim_b2,
            phi: StateRecord::from(&self.phi),
            eta: StateRecord::from(&self.eta),
            u_b: MatrixRecord::from(&self.u_b),
            reconstruction_error: self.reconstruction_error,
        }
        .serialize(serializer)
    }
}

/// Proof stage at which a factorization attempt stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessStage {
    /// The eigenvectors of `ρ^{AB}` do not share the marginal `ρ^A`.
    MarginalEquality,
    /// The vectors `|v_{kj}⟩` are not orthonormal.
    Gram,
    /// The assembled state does not reproduce the input.
    Reconstruction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessResult {
    Found { witness: FactorizationWitness },
    None { stage: WitnessStage, deviation: f64 },
}

impl WitnessResult {
    pub fn witness(&self) -> Option<&FactorizationWitness> {
        match self {
            WitnessResult::Found { witness } => Some(witness),
            WitnessResult::None { .. } => None,
        }
    }
}

fn require_tripartite(sig: &DimSignature) -> Result<()> {
    if sig.len() != 3 {
        return Err(Error::Signature(format!("expected a tripartite state, got signature {sig}")));
    }
    Ok(())
}

/// Attempts to write `psi` on `A ⊗ B ⊗ C` as `(I ⊗ U_B ⊗ I)|φ⟩|η⟩`.
///
/// With `ψ = Σ_j √p_j |ψ_j⟩^{AB}|c_j⟩^C` (Schmidt form across `AB|C`), every
/// `|ψ_j⟩` must have the marginal `ρ^A = Σ_k λ_k |e_k⟩⟨e_k|`. Then
/// `|ψ_j⟩ = Σ_k √λ_k |e_k⟩|v_{kj}⟩`, and the `|v_{kj}⟩` must be orthonormal
/// across both indices for `B` to split as `B₁ ⊗ B₂` with `|v_{kj}⟩ = U_B|k⟩|j⟩`.
pub fn witness_factorization(psi: &PureState, eps: f64) -> Result<WitnessResult> {
    let sig = psi.signature();
    require_tripartite(sig)?;
    let (da, db, dc) = (sig.dim(0), sig.dim(1), sig.dim(2));
    let floor = tolerances::global().psd;

    let schmidt = psi.schmidt(&Bipartition::new(sig, &[0, 1])?)?;
    let m = schmidt.coefficients.iter().filter(|&&c| c * c > floor).count();
    let members: Vec<CMat> = (0..m)
        .map(|j| CMat::from_row_slice(da, db, schmidt.left.column(j).as_slice()))
        .collect();
    let weights: Vec<f64> = schmidt.coefficients[..m].iter().map(|c| c * c).collect();
    let total: f64 = weights.iter().sum();

    let mut rho_a = CMat::zeros(da, da);
    for (w, mj) in weights.iter().zip(&members) {
        rho_a += mj * mj.adjoint() * C64::new(w / total, 0.0);
    }
    let mut worst = 0.0f64;
    for mj in &members {
        worst = worst.max(0.5 * linalg::trace_norm_hermitian(&(mj * mj.adjoint() - &rho_a)));
    }
    if worst > eps {
        return Ok(WitnessResult::None { stage: WitnessStage::MarginalEquality, deviation: worst });
    }

    let (lambdas, basis) = linalg::eigh(&rho_a);
    let r = lambdas.iter().filter(|&&l| l > floor).count();
    let support = basis.columns(0, r).into_owned();
    // column k·m + j holds |v_{kj}⟩ = λ_k^{-1/2} (⟨e_k| ⊗ I) |ψ_j⟩
    let mut v = CMat::zeros(db, r * m);
    for (j, mj) in members.iter().enumerate() {
        let projected = support.adjoint() * mj;
        for k in 0..r {
            let scale = C64::new(lambdas[k].sqrt().recip(), 0.0);
            for b in 0..db {
                v[(b, k * m + j)] = projected[(k, b)] * scale;
            }
        }
    }
    let gram_error = linalg::isometry_error(&v);
    if r * m > db || gram_error > eps {
        return Ok(WitnessResult::None { stage: WitnessStage::Gram, deviation: gram_error });
    }

    // nearest isometry to the recovered vectors
    let svd = v.clone().svd(true, true);
    let embedding = svd.u.expect("svd computed u") * svd.v_t.expect("svd computed v_t");
    let u_b = linalg::complete_to_unitary(&embedding);

    let phi_amps: Vec<C64> = (0..da)
        .flat_map(|a| (0..r).map(move |k| (a, k)))
        .map(|(a, k)| support[(a, k)] * lambdas[k].sqrt())
        .collect();
    let phi = PureState::normalized(DimSignature::new(vec![da, r])?, phi_amps)?;
    let eta_amps: Vec<C64> = (0..m)
        .flat_map(|j| (0..dc).map(move |c| (j, c)))
        .map(|(j, c)| schmidt.right[(c, j)] * (weights[j] / total).sqrt())
        .collect();
    let eta = PureState::normalized(DimSignature::new(vec![m, dc])?, eta_amps)?;

    let mut witness = FactorizationWitness { dim_b1: r, dim_b2: m, phi, eta, u_b, reconstruction_error: 0.0 };
    let error = witness.reconstruct()?.distance(psi);
    if error > eps {
        return Ok(WitnessResult::None { stage: WitnessStage::Reconstruction, deviation: error });
    }
    witness.reconstruction_error = error;
    Ok(WitnessResult::Found { witness })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductTest {
    pub product: bool,
    /// Trace distance `½‖ρ − ρ_1 ⊗ ρ_2‖₁`.
    pub distance: f64,
}

/// Whether a bipartite `rho` equals the product of its marginals within `eps`.
pub fn is_product(rho: &DensityMatrix, eps: f64) -> Result<ProductTest> {
    if rho.signature().len() != 2 {
        return Err(Error::Signature(format!("expected a bipartite state, got signature {}", rho.signature())));
    }
    let product = rho.partial_trace(&[0])?.tensor(&rho.partial_trace(&[1])?)?;
    let distance = rho.trace_distance(&product)?;
    Ok(ProductTest { product: distance < eps, distance })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Separability {
    Separable,
    Entangled,
    Inconclusive,
}

/// Partial-transpose test across `cut`; decisive for PPT states only in
/// `2 ⊗ 2` and `2 ⊗ 3`.
pub fn ppt_separable(rho: &DensityMatrix, cut: &Bipartition) -> Result<Separability> {
    let sig = rho.signature();
    cut.check_against(sig)?;
    let pt = rho.partial_transpose(cut.right())?;
    let min = linalg::eigvalsh(&pt).last().copied().unwrap_or(0.0);
    if min < -tolerances::global().psd {
        return Ok(Separability::Entangled);
    }
    let mut dims = [sig.dim_of(cut.left()), sig.dim_of(cut.right())];
    dims.sort_unstable();
    Ok(match dims {
        [1, _] | [2, 2] | [2, 3] => Separability::Separable,
        _ => Separability::Inconclusive,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BiseparableForm {
    /// `|φ⟩^A|η⟩^{BC}`
    #[serde(rename = "A_BC_product")]
    SplitA,
    /// `|φ⟩^{AB}|η⟩^C`
    #[serde(rename = "AB_C_product")]
    SplitC,
    /// Both cuts factor.
    #[serde(rename = "both")]
    Both,
    #[serde(rename = "neither")]
    Neither,
}

/// Schmidt rank one across `A|BC` and across `AB|C`, within `eps` of
/// discarded Schmidt weight. Requires `dim B ≤ 3`.
pub fn biseparable_form_check(psi: &PureState, eps: f64) -> Result<BiseparableForm> {
    let sig = psi.signature();
    require_tripartite(sig)?;
    if sig.dim(1) > 3 {
        return Err(Error::Contract(format!("biseparable form check needs dim B ≤ 3, got {}", sig.dim(1))));
    }
    let factors = |left: &[usize]| -> Result<bool> {
        let s = psi.schmidt(&Bipartition::new(sig, left)?)?;
        Ok(s.coefficients.iter().skip(1).map(|c| c * c).sum::<f64>() <= eps)
    };
    Ok(match (factors(&[0])?, factors(&[0, 1])?) {
        (true, true) => BiseparableForm::Both,
        (true, false) => BiseparableForm::SplitA,
        (false, true) => BiseparableForm::SplitC,
        (false, false) => BiseparableForm::Neither,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{bell, bell_c, ghz, sampling, w_state};

    fn sig(d: &[usize]) -> DimSignature {
        DimSignature::new(d.to_vec()).unwrap()
    }

    fn family(dims: [usize; 5], seed: u64) -> PureState {
        let [da, db1, db2, dc, db] = dims;
        let mut rng = sampling::rng(seed);
        let phi = sampling::random_pure_with(&sig(&[da, db1]), &mut rng);
        let eta = sampling::random_pure_with(&sig(&[db2, dc]), &mut rng);
        let u = Isometry::new(sampling::random_isometry(db, db1 * db2, &mut rng)).unwrap();
        make_product_family(&phi, &eta, &u).unwrap()
    }

    #[test]
    fn recovers_product_family() {
        for (i, dims) in [[2, 2, 2, 2, 4], [2, 2, 3, 3, 6], [3, 3, 3, 3, 9], [2, 2, 2, 2, 5]].into_iter().enumerate() {
            let psi = family(dims, i as u64);
            let res = witness_factorization(&psi, EPS_WITNESS).unwrap();
            let w = res.witness().unwrap_or_else(|| panic!("{dims:?}: {res:?}"));
            assert_eq!((w.dim_b1, w.dim_b2), (dims[1], dims[2]));
            assert!(w.reconstruction_error < 1e-8);
            assert!(w.reconstruct().unwrap().distance(&psi) < 1e-8);
            assert!(linalg::isometry_error(&w.u_b) < 1e-10);
            let a_phi = w.phi.reduced(&[0]).unwrap();
            let a_psi = psi.reduced(&[0]).unwrap();
            assert!(linalg::frobenius_distance(a_phi.matrix(), a_psi.matrix()) < 1e-8);
        }
    }

    #[test]
    fn ghz_fails_marginal_equality() {
        let res = witness_factorization(&ghz(2, 3).unwrap(), EPS_WITNESS).unwrap();
        assert!(matches!(res, WitnessResult::None { stage: WitnessStage::MarginalEquality, .. }));
    }

    #[test]
    fn w_state_has_no_witness() {
        let res = witness_factorization(&w_state(3).unwrap(), EPS_WITNESS).unwrap();
        assert!(res.witness().is_none());
    }

    #[test]
    fn bell_with_spectator() {
        let res = witness_factorization(&bell_c(2).unwrap(), EPS_WITNESS).unwrap();
        let w = res.witness().unwrap();
        assert_eq!(w.dim_b2, 1);
        assert_eq!(w.dim_b1, 2);
    }

    #[test]
    fn haar_states_fail() {
        for seed in 0..20 {
            let psi = sampling::random_pure(&sig(&[2, 4, 2]), seed);
            assert!(witness_factorization(&psi, EPS_WITNESS).unwrap().witness().is_none());
        }
    }

    #[test]
    fn witness_serializes() {
        let res = witness_factorization(&bell_c(2).unwrap(), EPS_WITNESS).unwrap();
        let json = serde_json::to_value(&res).unwrap();
        assert_eq!(json["outcome"], "found");
        assert_eq!(json["witness"]["u_b"]["rows"], 2);
        let res = witness_factorization(&ghz(2, 3).unwrap(), EPS_WITNESS).unwrap();
        assert_eq!(serde_json::to_value(&res).unwrap()["stage"], "marginal-equality");
    }

    #[test]
    fn ghz_marginal_is_correlated() {
        let rho_ac = ghz(2, 3).unwrap().reduced(&[0, 2]).unwrap();
        let t = is_product(&rho_ac, 1e-8).unwrap();
        assert!(!t.product);
        assert!((t.distance - 0.5).abs() < 1e-12);
        let prod = rho_ac.partial_trace(&[0]).unwrap().tensor(&rho_ac.partial_trace(&[1]).unwrap()).unwrap();
        let t = is_product(&prod, 1e-8).unwrap();
        assert!(t.product && t.distance < 1e-14);
    }

    #[test]
    fn ppt_cases() {
        let s2 = sig(&[2, 2]);
        let cut = Bipartition::first_vs_rest(&s2).unwrap();
        assert_eq!(ppt_separable(&bell().density(), &cut).unwrap(), Separability::Entangled);
        let prod = sampling::random_density(&sig(&[2]), 2, 1)
            .unwrap()
            .tensor(&sampling::random_density(&sig(&[2]), 2, 2).unwrap())
            .unwrap();
        assert_eq!(ppt_separable(&prod, &cut).unwrap(), Separability::Separable);
        let s3 = sig(&[3, 3]);
        let id = DensityMatrix::maximally_mixed(s3.clone());
        assert_eq!(ppt_separable(&id, &Bipartition::first_vs_rest(&s3).unwrap()).unwrap(), Separability::Inconclusive);
    }

    #[test]
    fn biseparable_forms() {
        let zero = PureState::basis(sig(&[2]), &[0]).unwrap();
        let a_bc = zero.tensor(&bell()).unwrap();
        assert_eq!(biseparable_form_check(&a_bc, 1e-10).unwrap(), BiseparableForm::SplitA);
        assert_eq!(biseparable_form_check(&bell_c(2).unwrap(), 1e-10).unwrap(), BiseparableForm::SplitC);
        assert_eq!(biseparable_form_check(&w_state(3).unwrap(), 1e-10).unwrap(), BiseparableForm::Neither);
        let basis = PureState::basis(sig(&[2, 2, 2]), &[0, 1, 0]).unwrap();
        assert_eq!(biseparable_form_check(&basis, 1e-10).unwrap(), BiseparableForm::Both);
        let big = sampling::random_pure(&sig(&[2, 4, 2]), 0);
        assert!(matches!(biseparable_form_check(&big, 1e-10), Err(Error::Contract(_))));
        assert_eq!(
            serde_json::to_string(&BiseparableForm::SplitA).unwrap(),
            "\"A_BC_product\""
        );
    }
}
