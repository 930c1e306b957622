//! Convex-roof extension `E(ρ) = min Σ_j p_j E(ψ_j)` over pure-state
//! decompositions, and its `g`-deformed variant `min Σ_j p_j g(E(ψ_j))`.

mod decomposition;
mod optimizer;
mod wootters;

use serde::{Deserialize, Serialize};

pub use decomposition::{decomposition_from_unitary, spectral_decomposition, Decomposition, MIN_WEIGHT};
pub use optimizer::OptimizerConfig;
pub use wootters::{binary_entropy, eof_from_concurrence, exact_two_qubit_roof, wootters_eof, TwoQubitEntanglement};

use crate::linalg::{CMat, C64};
use crate::measures::{MeasureSpec, PureEvaluator};
use crate::quantum::{Bipartition, DensityMatrix};
use crate::{Error, Result};

/// Monotone `g` with `g(0) = 0` applied to pure-state values before averaging.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "g", rename_all = "snake_case")]
pub enum RoofG {
    Identity,
    Power { p: f64 },
    ExpMinusOne,
}

impl RoofG {
    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            RoofG::Identity => x,
            RoofG::Power { p } => x.max(0.0).powf(p),
            RoofG::ExpMinusOne => x.exp_m1(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            RoofG::Power { p } if !(p.is_finite() && p > 0.0) => {
                Err(Error::Argument(format!("power g needs a positive exponent, got {p}")))
            }
            _ => Ok(()),
        }
    }

    /// Convex on `[0, ∞)`.
    pub fn is_convex(&self) -> bool {
        match *self {
            RoofG::Power { p } => p >= 1.0,
            _ => true,
        }
    }

    /// `id`, `pow:<p>`, `square`, `exp`.
    pub fn parse(text: &str) -> Result<Self> {
        let g = match text.trim() {
            "id" | "identity" => RoofG::Identity,
            "square" => RoofG::Power { p: 2.0 },
            "exp" => RoofG::ExpMinusOne,
            t => match t.strip_prefix("pow:") {
                Some(p) => RoofG::Power {
                    p: p.parse().map_err(|_| Error::Parse(format!("bad exponent in g '{t}'")))?,
                },
                None => return Err(Error::Parse(format!("unknown g '{t}' (expected id, pow:<p>, square or exp)"))),
            },
        };
        g.validate()?;
        Ok(g)
    }

    pub fn label(&self) -> String {
        match *self {
            RoofG::Identity => "id".into(),
            RoofG::Power { p } => format!("pow:{p}"),
            RoofG::ExpMinusOne => "exp".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerStats {
    pub restarts: usize,
    pub members: usize,
    pub evaluations: usize,
    pub best_restart: usize,
    pub sweeps: usize,
    /// Objective of the winning restart after every sweep (non-increasing).
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoofResult {
    /// `Σ_j p_j g(E(ψ_j))` of the certificate.
    pub value: f64,
    pub certificate: Decomposition,
    /// False when the winning restart ran out of evaluations.
    pub converged: bool,
    pub stats: OptimizerStats,
}

/// Convex roof of `spec` across `cut`.
pub fn roof_value(rho: &DensityMatrix, cut: &Bipartition, spec: &MeasureSpec, cfg: &OptimizerConfig) -> Result<RoofResult> {
    e_g_roof(rho, cut, spec, RoofG::Identity, cfg)
}

/// `min Σ_j p_j g(E(ψ_j))` over decompositions of `rho`.
pub fn e_g_roof(rho: &DensityMatrix, cut: &Bipartition, spec: &MeasureSpec, g: RoofG, cfg: &OptimizerConfig) -> Result<RoofResult> {
    g.validate()?;
    cfg.validate()?;
    cut.check_against(rho.signature())?;
    let eval = PureEvaluator::new(rho.signature(), cut, spec)?;
    let unit_cost = |v: &[C64]| g.apply(eval.eval(v));
    let (weights, states) = rho.spectral();
    let r = weights.len();
    let basis = decomposition::scaled_eigenbasis(&weights, &states);

    if r == 1 {
        let certificate = spectral_decomposition(rho);
        let value = unit_cost(certificate.states()[0].amplitudes().as_slice());
        let stats = OptimizerStats { restarts: 0, members: 1, evaluations: 1, best_restart: 0, sweeps: 0, trace: vec![value] };
        return Ok(RoofResult { value, certificate, converged: true, stats });
    }

    let n = cfg.members_for_rank(r);
    let cost = |v: &[C64]| {
        let q: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if q <= 0.0 { 0.0 } else { q * unit_cost(v) }
    };
    let outcomes = optimizer::multi_start(&basis, n, &cost, cfg);
    let best = optimizer::best_index(&outcomes);
    let winner = &outcomes[best];
    let members: CMat = &basis * winner.u.transpose();
    let certificate = Decomposition::from_members(rho.signature(), members.column_iter().map(|c| c.into_owned()))?;
    let value = certificate
        .weights()
        .iter()
        .zip(certificate.states())
        .map(|(w, s)| w * unit_cost(s.amplitudes().as_slice()))
        .sum();
    let stats = OptimizerStats {
        restarts: outcomes.len(),
        members: n,
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        best_restart: best,
        sweeps: winner.sweeps,
        trace: winner.trace.clone(),
    };
    Ok(RoofResult { value, certificate, converged: winner.converged, stats })
}
