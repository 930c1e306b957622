use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMat, CVec, C64};
use crate::measures::{pure_measure, MeasureSpec};
use crate::quantum::{Bipartition, DensityMatrix, DimSignature, PureState, State, StateRecord};
use crate::{tolerances, Error, Result};

/// Members with weight below this are dropped when building a decomposition.
pub const MIN_WEIGHT: f64 = 1e-12;

/// A pure-state ensemble `{p_j, |ψ_j⟩}` realizing `Σ_j p_j |ψ_j⟩⟨ψ_j|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    weights: Vec<f64>,
    states: Vec<PureState>,
}

impl Decomposition {
    /// Weights must be non-negative and sum to one; states share a signature.
    pub fn new(weights: Vec<f64>, states: Vec<PureState>) -> Result<Self> {
        if weights.len() != states.len() || weights.is_empty() {
            return Err(Error::Argument("decomposition needs one weight per state and at least one member".into()));
        }
        if weights.iter().any(|&w| w.is_nan() || w < 0.0) {
            return Err(Error::Argument("decomposition weights must be non-negative".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > tolerances::global().norm {
            return Err(Error::Argument(format!("decomposition weights sum to {sum}")));
        }
        let sig = states[0].signature();
        if states.iter().any(|s| s.signature() != sig) {
            return Err(Error::Signature("decomposition members have different signatures".into()));
        }
        Ok(Self { weights, states })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn signature(&self) -> &DimSignature {
        self.states[0].signature()
    }

    /// `Σ_j p_j |ψ_j⟩⟨ψ_j|`.
    pub fn reconstruct(&self) -> CMat {
        let n = self.states[0].dim();
        let mut m = CMat::zeros(n, n);
        for (w, s) in self.weights.iter().zip(&self.states) {
            m += s.amplitudes() * s.amplitudes().adjoint() * C64::new(*w, 0.0);
        }
        m
    }

    /// Frobenius distance between the resummed ensemble and `rho`.
    pub fn reconstruction_error(&self, rho: &DensityMatrix) -> f64 {
        linalg::frobenius_distance(&self.reconstruct(), rho.matrix())
    }

    /// `Σ_j p_j E(ψ_j)`.
    pub fn average(&self, cut: &Bipartition, spec: &MeasureSpec) -> Result<f64> {
        let mut total = 0.0;
        for (w, s) in self.weights.iter().zip(&self.states) {
            total += w * pure_measure(s, cut, spec)?;
        }
        Ok(total)
    }

    /// Builds a decomposition from unnormalized member vectors, dropping
    /// members with squared norm below [`MIN_WEIGHT`] and renormalizing.
    pub(crate) fn from_members(signature: &DimSignature, members: impl IntoIterator<Item = CVec>) -> Result<Self> {
        let mut weights = Vec::new();
        let mut states = Vec::new();
        for v in members {
            let q = v.norm_squared();
            if q < MIN_WEIGHT {
                continue;
            }
            weights.push(q);
            states.push(PureState::from_parts_unchecked(signature.clone(), v / C64::new(q.sqrt(), 0.0)));
        }
        let total: f64 = weights.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::Contract("decomposition has no member of positive weight".into()));
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(Self { weights, states })
    }
}

/// Eigen-ensemble of `rho` (eigenvalues above τ_psd).
pub fn spectral_decomposition(rho: &DensityMatrix) -> Decomposition {
    let (weights, states) = rho.spectral();
    let total: f64 = weights.iter().sum();
    Decomposition { weights: weights.iter().map(|w| w / total).collect(), states }
}

/// `√q_k |φ_k⟩ = Σ_j u_{kj} √p_j |ψ_j⟩` applied to the spectral ensemble of
/// `rho`. `u` is `n × rank(ρ)` with orthonormal columns.
pub fn decomposition_from_unitary(rho: &DensityMatrix, u: &CMat) -> Result<Decomposition> {
    let (weights, states) = rho.spectral();
    let r = weights.len();
    if u.ncols() != r || u.nrows() < r {
        return Err(Error::Contract(format!(
            "mixing matrix is {}x{}, needs n x {r} with n >= {r} (rank of ρ)",
            u.nrows(),
            u.ncols()
        )));
    }
    let err = linalg::isometry_error(u);
    if err > tolerances::global().recon {
        return Err(Error::Contract(format!("mixing matrix columns are not orthonormal (deviation {err:e})")));
    }
    let basis = scaled_eigenbasis(&weights, &states);
    let members = basis * u.transpose();
    Decomposition::from_members(rho.signature(), members.column_iter().map(|c| c.into_owned()))
}

/// Columns `√p_j |ψ_j⟩`.
pub(crate) fn scaled_eigenbasis(weights: &[f64], states: &[PureState]) -> CMat {
    let cols: Vec<CVec> = weights
        .iter()
        .zip(states)
        .map(|(w, s)| s.amplitudes() * C64::new(w.sqrt(), 0.0))
        .collect();
    CMat::from_columns(&cols)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DecompositionRecord {
    weights: Vec<f64>,
    states: Vec<StateRecord>,
}

impl Serialize for Decomposition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionRecord { weights: self.weights.clone(), states: self.states.iter().map(StateRecord::from).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Decomposition {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rec = DecompositionRecord::deserialize(deserializer)?;
        let states = rec
            .states
            .iter()
            .map(|r| match State::from_record(r) {
                Ok(State::Pure(p)) => Ok(p),
                Ok(State::Mixed(_)) => Err(serde::de::Error::custom("decomposition members must be pure")),
                Err(e) => Err(serde::de::Error::custom(e)),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Decomposition::new(rec.weights, states).map_err(serde::de::Error::custom)
    }
}
