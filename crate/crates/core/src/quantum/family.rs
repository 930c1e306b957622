//! Named states and the factorized family `(I ⊗ U_B ⊗ I)|φ⟩^{AB₁}|η⟩^{B₂C}`.

use super::isometry::Isometry;
use super::pure::PureState;
use super::signature::DimSignature;
use crate::linalg::{CVec, C64};
use crate::{Error, Result};

/// Builds `(I_A ⊗ U_B ⊗ I_C)(|φ⟩^{AB₁} ⊗ |η⟩^{B₂C})` on `A ⊗ B ⊗ C`.
///
/// `B₁ ⊗ B₂` is indexed row-major (`b₁·dim B₂ + b₂`) and `embedding` maps it
/// into `B`, so `embedding` must be `dim B × (dim B₁ · dim B₂)`.
pub fn make_product_family(phi: &PureState, eta: &PureState, embedding: &Isometry) -> Result<PureState> {
    let (da, db1) = bipartite_dims(phi, "φ")?;
    let (db2, dc) = bipartite_dims(eta, "η")?;
    let db = embedding.target_dim();
    if db1 * db2 > db {
        return Err(Error::Contract(format!("dim B = {db} cannot host B₁ ⊗ B₂ = {db1}·{db2}")));
    }
    if embedding.source_dim() != db1 * db2 {
        return Err(Error::Contract(format!(
            "embedding acts on {} dimensions, B₁ ⊗ B₂ has {}",
            embedding.source_dim(),
            db1 * db2
        )));
    }
    let u = embedding.matrix();
    let p = phi.amplitudes();
    let e = eta.amplitudes();
    let sig = DimSignature::new(vec![da, db, dc])?;
    let mut out = CVec::zeros(sig.total());
    for a in 0..da {
        for b1 in 0..db1 {
            let pa = p[a * db1 + b1];
            if pa == C64::new(0.0, 0.0) {
                continue;
            }
            for b2 in 0..db2 {
                let col = b1 * db2 + b2;
                for c in 0..dc {
                    let coef = pa * e[b2 * dc + c];
                    for b in 0..db {
                        out[(a * db + b) * dc + c] += u[(b, col)] * coef;
                    }
                }
            }
        }
    }
    Ok(PureState::from_parts_unchecked(sig, out))
}

/// `make_product_family` with `B₁ ⊗ B₂` embedded as the first basis vectors of `B`.
pub fn embed_product(phi: &PureState, eta: &PureState, dim_b: usize) -> Result<PureState> {
    let (_, db1) = bipartite_dims(phi, "φ")?;
    let (db2, _) = bipartite_dims(eta, "η")?;
    if db1 * db2 > dim_b {
        return Err(Error::Contract(format!("dim B = {dim_b} cannot host B₁ ⊗ B₂ = {db1}·{db2}")));
    }
    let m = crate::linalg::CMat::identity(dim_b, db1 * db2);
    make_product_family(phi, eta, &Isometry::new(m)?)
}

fn bipartite_dims(state: &PureState, name: &str) -> Result<(usize, usize)> {
    match state.signature().dims() {
        [x, y] => Ok((*x, *y)),
        _ => Err(Error::Signature(format!("{name} must be bipartite, got {}", state.signature()))),
    }
}

fn real(signature: DimSignature, amps: Vec<f64>) -> Result<PureState> {
    PureState::normalized(signature, amps.into_iter().map(|x| C64::new(x, 0.0)).collect())
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell() -> PureState {
    real(DimSignature::new(vec![2, 2]).unwrap(), vec![1.0, 0.0, 0.0, 1.0]).unwrap()
}

/// `Σ_i |i…i⟩/√d` on `parties` subsystems of dimension `d`.
pub fn ghz(d: usize, parties: usize) -> Result<PureState> {
    if d < 2 || parties < 2 {
        return Err(Error::Argument("GHZ needs d >= 2 and at least two parties".into()));
    }
    let sig = DimSignature::new(vec![d; parties])?;
    let mut amps = vec![0.0; sig.total()];
    for i in 0..d {
        amps[sig.flat_index(&vec![i; parties])] = 1.0;
    }
    real(sig, amps)
}

/// Equal superposition of the single-excitation qubit states.
pub fn w_state(parties: usize) -> Result<PureState> {
    if parties < 2 {
        return Err(Error::Argument("W state needs at least two parties".into()));
    }
    let sig = DimSignature::new(vec![2; parties])?;
    let mut amps = vec![0.0; sig.total()];
    for k in 0..parties {
        amps[1 << k] = 1.0;
    }
    real(sig, amps)
}

/// `Bell^{AB} ⊗ |0⟩^C` with `dim C = dim_c`.
pub fn bell_c(dim_c: usize) -> Result<PureState> {
    let zero = PureState::basis(DimSignature::new(vec![dim_c])?, &[0])?;
    bell().tensor(&zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::sampling;

    fn sig(d: &[usize]) -> DimSignature {
        DimSignature::new(d.to_vec()).unwrap()
    }

    #[test]
    fn identity_embedding_of_product_eta() {
        let eta = PureState::basis(sig(&[1, 2]), &[0, 0]).unwrap();
        let st = embed_product(&bell(), &eta, 2).unwrap();
        let expected = bell_c(2).unwrap();
        assert!(st.distance(&expected) < 1e-15);
    }

    #[test]
    fn overflow_is_rejected() {
        let eta = bell();
        assert!(matches!(embed_product(&bell(), &eta, 3), Err(Error::Contract(_))));
    }

    #[test]
    fn marginal_ac_is_product() {
        let mut g = sampling::rng(5);
        let phi = sampling::random_pure_with(&sig(&[2, 2]), &mut g);
        let eta = sampling::random_pure_with(&sig(&[2, 3]), &mut g);
        let u = Isometry::new(sampling::random_unitary(5, &mut g).columns(0, 4).into_owned()).unwrap();
        let st = make_product_family(&phi, &eta, &u).unwrap();
        assert!((st.amplitudes().norm() - 1.0).abs() < 1e-12);
        let rho_ac = st.reduced(&[0, 2]).unwrap();
        let prod = st.reduced(&[0]).unwrap().tensor(&st.reduced(&[2]).unwrap()).unwrap();
        // direct entrywise tensor comparison
        let dev = (rho_ac.matrix() - prod.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-10);
    }

    #[test]
    fn named_states() {
        let w = w_state(3).unwrap();
        assert!((w.amplitudes()[1].re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w.amplitudes()[4].re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let g = ghz(3, 3).unwrap();
        assert!((g.amplitudes()[13].re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }
}
