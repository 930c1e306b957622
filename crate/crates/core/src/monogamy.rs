//! Monogamy audits of tripartite states: the disentangling gap
//! `E(A|BC) − E(AB)`, the three-qubit tangle residual, and the smallest
//! exponent `α` with `E^α(A|BC) ≥ E^α(AB) + E^α(AC)` on a sample.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::measures::{pure_measure, MeasureSpec};
use crate::quantum::{Bipartition, DensityMatrix, DimSignature, PureState, State};
use crate::roof::{exact_two_qubit_roof, roof_value, wootters_eof, OptimizerConfig};
use crate::structure::{self, Separability, WitnessStage};
use crate::tolerances::{self, Tolerances};
use crate::{Error, Result};

/// Gap threshold for pure inputs, where `E(A|BC)` is exact.
pub const EPS_GAP_PURE: f64 = 1e-6;
/// Gap threshold for mixed inputs, where both terms carry roof slack.
pub const EPS_GAP_MIXED: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AuditConfig {
    pub optimizer: OptimizerConfig,
    /// Overrides the pure/mixed default gap threshold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_gap: Option<f64>,
    /// Use the closed two-qubit roof where one exists.
    pub exact_two_qubit: bool,
    /// Tolerance of the structural follow-up on disentangled states.
    pub eps_witness: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self { optimizer: OptimizerConfig::default(), eps_gap: None, exact_two_qubit: true, eps_witness: structure::EPS_WITNESS }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessOutcome {
    #[serde(rename = "factored")]
    Factored,
    #[serde(rename = "product_AC")]
    ProductAc,
    #[serde(rename = "separable_AC_ppt")]
    SeparableAcPpt,
    #[serde(rename = "none")]
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub descriptor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub spec: MeasureSpec,
    pub pure: bool,
    pub e_abc: f64,
    pub e_ab: f64,
    pub e_ac: f64,
    pub gap: f64,
    pub eps_gap: f64,
    pub disentangled: bool,
    /// `‖ρ^{AC} − ρ^A ⊗ ρ^C‖₁`.
    pub product_distance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Structural follow-up, present for disentangled states.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_outcome: Option<WitnessOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_stage: Option<WitnessStage>,
    pub tolerances: Tolerances,
    pub flags: Vec<String>,
}

fn require_tripartite(sig: &DimSignature) -> Result<()> {
    if sig.len() != 3 {
        return Err(Error::Signature(format!("monogamy audits need a tripartite state, got signature {sig}")));
    }
    Ok(())
}

/// Roof value of `spec` on a bipartite marginal, with the two-qubit
/// closed form when enabled. Pushes a flag when the optimizer ran out.
fn marginal_roof(rho: &DensityMatrix, spec: &MeasureSpec, cfg: &AuditConfig, label: &str, flags: &mut Vec<String>) -> Result<f64> {
    if cfg.exact_two_qubit {
        if let Some(v) = exact_two_qubit_roof(rho, spec) {
            return Ok(v);
        }
    }
    let cut = Bipartition::first_vs_rest(rho.signature())?;
    let res = roof_value(rho, &cut, spec, &cfg.optimizer)?;
    if !res.converged {
        flags.push(format!("roof_not_converged:{label}"));
    }
    Ok(res.value)
}

/// Audits one tripartite state under `spec`.
///
/// `E(A|BC)` is exact for pure input and a roof value for mixed input; the
/// two-party terms are always roof values of the marginals.
pub fn disentangling_gap(state: &State, descriptor: &str, seed: Option<u64>, spec: &MeasureSpec, cfg: &AuditConfig) -> Result<AuditRecord> {
    let sig = state.signature();
    require_tripartite(sig)?;
    let tol = tolerances::global();
    let a_bc = Bipartition::first_vs_rest(sig)?;
    let mut flags = Vec::new();
    let rho = state.density();
    let (pure, e_abc) = match state {
        State::Pure(psi) => (true, pure_measure(psi, &a_bc, spec)?),
        State::Mixed(m) => {
            let res = roof_value(m, &a_bc, spec, &cfg.optimizer)?;
            if !res.converged {
                flags.push("roof_not_converged:A|BC".to_string());
            }
            (false, res.value)
        }
    };
    let rho_ab = rho.partial_trace(&[0, 1])?;
    let rho_ac = rho.partial_trace(&[0, 2])?;
    let e_ab = marginal_roof(&rho_ab, spec, cfg, "AB", &mut flags)?;
    let e_ac = marginal_roof(&rho_ac, spec, cfg, "AC", &mut flags)?;
    let gap = e_abc - e_ab;
    if gap < -tol.audit {
        flags.push("monotonicity_violation".to_string());
    }
    let eps_gap = cfg.eps_gap.unwrap_or(if pure { EPS_GAP_PURE } else { EPS_GAP_MIXED });
    let disentangled = gap.abs() < eps_gap;
    let product = structure::is_product(&rho_ac, cfg.eps_witness)?;

    let (mut witness_outcome, mut witness_stage) = (None, None);
    if disentangled {
        let outcome = match state {
            State::Pure(psi) => match structure::witness_factorization(psi, cfg.eps_witness)? {
                structure::WitnessResult::Found { .. } => WitnessOutcome::Factored,
                structure::WitnessResult::None { stage, .. } => {
                    witness_stage = Some(stage);
                    if product.product { WitnessOutcome::ProductAc } else { WitnessOutcome::None }
                }
            },
            State::Mixed(_) => match structure::ppt_separable(&rho_ac, &Bipartition::first_vs_rest(rho_ac.signature())?)? {
                Separability::Entangled => WitnessOutcome::None,
                Separability::Separable | Separability::Inconclusive => WitnessOutcome::SeparableAcPpt,
            },
        };
        witness_outcome = Some(outcome);
    }

    Ok(AuditRecord {
        descriptor: descriptor.to_string(),
        seed,
        spec: *spec,
        pure,
        e_abc,
        e_ab,
        e_ac,
        gap,
        eps_gap,
        disentangled,
        product_distance: 2.0 * product.distance,
        alpha: None,
        witness_outcome,
        witness_stage,
        tolerances: tol,
        flags,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CkwResidual {
    pub tau_abc: f64,
    pub tau_ab: f64,
    pub tau_ac: f64,
    /// `τ(A|BC) − τ_AB − τ_AC`.
    pub residual: f64,
}

/// Tangle residual of a three-qubit pure state.
pub fn ckw_check(psi: &PureState) -> Result<CkwResidual> {
    if psi.signature().dims() != [2, 2, 2] {
        return Err(Error::Signature(format!("tangle residual needs three qubits, got signature {}", psi.signature())));
    }
    let tau_abc = pure_measure(psi, &Bipartition::first_vs_rest(psi.signature())?, &MeasureSpec::tangle())?;
    let c_ab = wootters_eof(&psi.reduced(&[0, 1])?)?.concurrence;
    let c_ac = wootters_eof(&psi.reduced(&[0, 2])?)?.concurrence;
    let (tau_ab, tau_ac) = (c_ab * c_ab, c_ac * c_ac);
    Ok(CkwResidual { tau_abc, tau_ab, tau_ac, residual: tau_abc - tau_ab - tau_ac })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaRange {
    /// Exclusive lower end.
    pub lower: f64,
    pub upper: f64,
    pub resolution: f64,
}

impl Default for AlphaRange {
    fn default() -> Self {
        Self { lower: 0.05, upper: 16.0, resolution: 1e-3 }
    }
}

impl AlphaRange {
    pub fn validate(&self) -> Result<()> {
        if !(self.lower >= 0.05 && self.upper > self.lower && self.resolution > 0.0 && self.upper.is_finite()) {
            return Err(Error::Argument(format!(
                "α range ({}, {}] with resolution {} is invalid; the lower end must be at least 0.05",
                self.lower, self.upper, self.resolution
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaOutcome {
    /// Smallest α in the range where every sample satisfies the power law.
    Found { alpha: f64 },
    /// The power law already holds at the lower end of the range.
    LowerEndpoint { alpha: f64 },
    NotFoundInRange,
}

impl AlphaOutcome {
    pub fn alpha(&self) -> Option<f64> {
        match *self {
            AlphaOutcome::Found { alpha } | AlphaOutcome::LowerEndpoint { alpha } => Some(alpha),
            AlphaOutcome::NotFoundInRange => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaResult {
    pub outcome: AlphaOutcome,
    pub range: AlphaRange,
    pub samples: usize,
    /// Sample attaining the bound, when one was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binding_sample: Option<usize>,
    pub records: Vec<AuditRecord>,
}

/// `(E_AB/E_ABC)^α + (E_AC/E_ABC)^α ≤ 1 + τ_audit`; non-increasing in α.
fn power_law_holds(r: &AuditRecord, alpha: f64, slack: f64) -> bool {
    if r.e_abc <= slack {
        return true;
    }
    let x = (r.e_ab / r.e_abc).clamp(0.0, 1.0);
    let y = (r.e_ac / r.e_abc).clamp(0.0, 1.0);
    x.powf(alpha) + y.powf(alpha) <= 1.0 + slack
}

/// Bisection for the smallest α such that every audited sample satisfies the
/// power law, to `range.resolution`.
pub fn alpha_from_records(records: Vec<AuditRecord>, range: AlphaRange) -> Result<AlphaResult> {
    range.validate()?;
    if records.is_empty() {
        return Err(Error::Argument("α search needs at least one sample".into()));
    }
    let slack = tolerances::global().audit;
    for (i, r) in records.iter().enumerate() {
        if r.e_abc + slack < r.e_ab.max(r.e_ac) {
            return Err(Error::Contract(format!(
                "sample {i} ({}) has E(A|BC) = {} below a two-party term ({}, {}); the power law is not monotone in α",
                r.descriptor, r.e_abc, r.e_ab, r.e_ac
            )));
        }
    }
    let all_hold = |alpha: f64| records.par_iter().all(|r| power_law_holds(r, alpha, slack));
    let samples = records.len();
    let done = |outcome, binding_sample, records| Ok(AlphaResult { outcome, range, samples, binding_sample, records });
    if all_hold(range.lower) {
        return done(AlphaOutcome::LowerEndpoint { alpha: range.lower }, None, records);
    }
    if !all_hold(range.upper) {
        return done(AlphaOutcome::NotFoundInRange, None, records);
    }
    let (mut lo, mut hi) = (range.lower, range.upper);
    while hi - lo > range.resolution {
        let mid = 0.5 * (lo + hi);
        if all_hold(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let binding = records.iter().position(|r| !power_law_holds(r, lo, slack));
    let mut records = records;
    for r in &mut records {
        r.alpha = Some(hi);
    }
    done(AlphaOutcome::Found { alpha: hi }, binding, records)
}

/// Audits `sample` in parallel and runs [`alpha_from_records`].
pub fn alpha_search(sample: &[(String, State)], spec: &MeasureSpec, cfg: &AuditConfig, range: AlphaRange) -> Result<AlphaResult> {
    if sample.is_empty() {
        return Err(Error::Argument("α search needs at least one sample".into()));
    }
    let sig = sample[0].1.signature();
    if sample.iter().any(|(_, s)| s.signature() != sig) {
        return Err(Error::Signature("α search samples must share one signature".into()));
    }
    let records = audit_batch(sample, spec, cfg)?;
    alpha_from_records(records, range)
}

/// Audits every state, in parallel, returning records in input order.
pub fn audit_batch(sample: &[(String, State)], spec: &MeasureSpec, cfg: &AuditConfig) -> Result<Vec<AuditRecord>> {
    sample.par_iter().map(|(d, s)| disentangling_gap(s, d, None, spec, cfg)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPoint {
    pub eps_gap: f64,
    /// Records with `|gap| < eps_gap`.
    pub count: usize,
    /// Largest `‖ρ^{AC} − ρ^A ⊗ ρ^C‖₁` among them (0 when there are none).
    pub max_product_distance: f64,
}

/// Empirical bound `δ(ε)` on the product distance of records whose gap is
/// below each threshold.
pub fn calibration_curve(records: &[AuditRecord], thresholds: &[f64]) -> Vec<CalibrationPoint> {
    thresholds
        .iter()
        .map(|&eps| {
            let inside: Vec<f64> = records.iter().filter(|r| r.gap.abs() < eps).map(|r| r.product_distance).collect();
            CalibrationPoint { eps_gap: eps, count: inside.len(), max_product_distance: inside.iter().copied().fold(0.0, f64::max) }
        })
        .collect()
}
