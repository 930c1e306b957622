//! Bipartite entanglement measures.
//!
//! On a pure state every catalog measure is a function `h` of the reduced
//! state on the first side of the cut. The negativity is the one mixed-state
//! measure evaluated directly (through the partial transpose).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::entropy::{self, EntropySpec, ProbeReport};
use crate::linalg::{self, CMat, C64};
use crate::quantum::{sampling, Bipartition, CutLayout, DensityMatrix, DimSignature, PureState};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureKind {
    /// `H(ρ_A)` for any entropy; `eoe` is the base-2 von Neumann case.
    EntropyOfEntanglement(EntropySpec),
    /// `√(2(1 − Tr ρ_A²))`
    Concurrence,
    /// `2(1 − Tr ρ_A²)`
    Tangle,
    /// `d (det ρ_A)^{1/d}`, `d` the dimension of the first side
    GConcurrence,
    /// `(‖ρ^{T_B}‖₁ − 1)/2`
    Negativity,
    /// Base-2 Rényi entropy of the reduced state.
    RenyiEnt(f64),
    /// Tsallis entropy of the reduced state.
    TsallisEnt(f64),
}

/// A measure of entanglement together with its strict-concavity flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "MeasureTag", try_from = "MeasureTag")]
pub struct MeasureSpec {
    kind: MeasureKind,
}

impl MeasureSpec {
    pub fn new(kind: MeasureKind) -> Result<Self> {
        match kind {
            MeasureKind::EntropyOfEntanglement(e) => e.validate()?,
            MeasureKind::RenyiEnt(a) => EntropySpec::renyi(a).map(|_| ())?,
            MeasureKind::TsallisEnt(q) => EntropySpec::tsallis(q).map(|_| ())?,
            _ => {}
        }
        Ok(Self { kind })
    }

    pub fn eoe() -> Self {
        Self { kind: MeasureKind::EntropyOfEntanglement(EntropySpec::von_neumann()) }
    }

    pub fn concurrence() -> Self {
        Self { kind: MeasureKind::Concurrence }
    }

    pub fn tangle() -> Self {
        Self { kind: MeasureKind::Tangle }
    }

    pub fn g_concurrence() -> Self {
        Self { kind: MeasureKind::GConcurrence }
    }

    pub fn negativity() -> Self {
        Self { kind: MeasureKind::Negativity }
    }

    pub fn renyi(alpha: f64) -> Result<Self> {
        Self::new(MeasureKind::RenyiEnt(alpha))
    }

    pub fn tsallis(q: f64) -> Result<Self> {
        Self::new(MeasureKind::TsallisEnt(q))
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    /// True for the kinds whose reduction function is strictly concave:
    /// every entropy of entanglement with a strictly concave entropy, the
    /// concurrence, tangle and G-concurrence. False for Rényi α > 1 (and the
    /// flat α = 0) and for the negativity, which is not an `h`-type measure.
    pub fn strictly_concave(&self) -> bool {
        match self.kind {
            MeasureKind::EntropyOfEntanglement(e) => e.strictly_concave(),
            MeasureKind::Concurrence | MeasureKind::Tangle | MeasureKind::GConcurrence => true,
            MeasureKind::Negativity => false,
            MeasureKind::RenyiEnt(a) => a > 0.0 && a <= 1.0,
            MeasureKind::TsallisEnt(q) => q > 0.0,
        }
    }

    /// The CLI name (`eoe`, `concurrence`, `tangle`, `gconc`, `neg`, `renyi:α`, `tsallis:q`).
    pub fn name(&self) -> String {
        match self.kind {
            MeasureKind::EntropyOfEntanglement(e) if e == EntropySpec::von_neumann() => "eoe".into(),
            MeasureKind::EntropyOfEntanglement(e) => format!("eoe:{}", e.label()),
            MeasureKind::Concurrence => "concurrence".into(),
            MeasureKind::Tangle => "tangle".into(),
            MeasureKind::GConcurrence => "gconc".into(),
            MeasureKind::Negativity => "neg".into(),
            MeasureKind::RenyiEnt(a) => format!("renyi:{a}"),
            MeasureKind::TsallisEnt(q) => format!("tsallis:{q}"),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let num = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("bad parameter `{s}` in `{text}`")));
        match text {
            "eoe" => Ok(Self::eoe()),
            "concurrence" => Ok(Self::concurrence()),
            "tangle" => Ok(Self::tangle()),
            "gconc" => Ok(Self::g_concurrence()),
            "neg" => Ok(Self::negativity()),
            _ => match text.split_once(':') {
                Some(("renyi", a)) => Self::renyi(num(a)?),
                Some(("tsallis", q)) => Self::tsallis(num(q)?),
                Some(("eoe", e)) => Self::new(MeasureKind::EntropyOfEntanglement(EntropySpec::parse(e)?)),
                _ => Err(Error::Parse(format!("unknown measure `{text}`"))),
            },
        }
    }

    /// Every kind the monogamy theorem is checked against.
    pub fn catalog() -> Vec<MeasureSpec> {
        vec![
            Self::eoe(),
            Self::concurrence(),
            Self::tangle(),
            Self::g_concurrence(),
            Self::negativity(),
            Self::renyi(0.5).expect("valid"),
            Self::renyi(2.0).expect("valid"),
            Self::tsallis(2.0).expect("valid"),
        ]
    }

    /// `h` evaluated on a (clamped) spectrum of a `dim`-dimensional reduced state.
    pub fn h_from_spectrum(&self, spectrum: &[f64], dim: usize) -> Result<f64> {
        let purity = || spectrum.iter().map(|p| p * p).sum::<f64>();
        Ok(match self.kind {
            MeasureKind::EntropyOfEntanglement(e) => entropy::spectrum_entropy(spectrum, &e),
            MeasureKind::RenyiEnt(a) => entropy::spectrum_entropy(spectrum, &EntropySpec::renyi(a)?),
            MeasureKind::TsallisEnt(q) => entropy::spectrum_entropy(spectrum, &EntropySpec::tsallis(q)?),
            MeasureKind::Concurrence => (2.0 * (1.0 - purity())).max(0.0).sqrt(),
            MeasureKind::Tangle => (2.0 * (1.0 - purity())).max(0.0),
            MeasureKind::GConcurrence => {
                if spectrum.len() < dim || spectrum.iter().any(|&p| p <= 0.0) {
                    0.0
                } else {
                    let log_det: f64 = spectrum.iter().map(|p| p.ln()).sum();
                    dim as f64 * (log_det / dim as f64).exp()
                }
            }
            MeasureKind::Negativity => {
                return Err(Error::Unsupported("negativity is not a function of the reduced state; use `negativity`".into()))
            }
        })
    }
}

impl std::fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

/// JSON form `{kind, params, strictly_concave}`; the flag is derived, and ignored on input.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct MeasureTag {
    kind: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    params: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    strictly_concave: bool,
}

impl From<MeasureSpec> for MeasureTag {
    fn from(m: MeasureSpec) -> Self {
        let mut params = BTreeMap::new();
        let kind = match m.kind {
            MeasureKind::EntropyOfEntanglement(e) => {
                if e != EntropySpec::von_neumann() {
                    params.insert("entropy".to_string(), serde_json::Value::String(e.label()));
                }
                "eoe"
            }
            MeasureKind::Concurrence => "concurrence",
            MeasureKind::Tangle => "tangle",
            MeasureKind::GConcurrence => "gconc",
            MeasureKind::Negativity => "neg",
            MeasureKind::RenyiEnt(a) => {
                params.insert("alpha".to_string(), a.into());
                "renyi"
            }
            MeasureKind::TsallisEnt(q) => {
                params.insert("q".to_string(), q.into());
                "tsallis"
            }
        };
        MeasureTag { kind: kind.to_string(), params, strictly_concave: m.strictly_concave() }
    }
}

impl TryFrom<MeasureTag> for MeasureSpec {
    type Error = Error;

    fn try_from(t: MeasureTag) -> Result<Self> {
        let num = |key: &str| {
            t.params
                .get(key)
                .and_then(|v| v.as_f64())
                .ok_or_else(|| Error::Parse(format!("measure `{}` needs numeric param `{key}`", t.kind)))
        };
        match t.kind.as_str() {
            "eoe" => match t.params.get("entropy").and_then(|v| v.as_str()) {
                Some(e) => MeasureSpec::new(MeasureKind::EntropyOfEntanglement(EntropySpec::parse(e)?)),
                None => Ok(MeasureSpec::eoe()),
            },
            "renyi" => MeasureSpec::renyi(num("alpha")?),
            "tsallis" => MeasureSpec::tsallis(num("q")?),
            other => MeasureSpec::parse(other),
        }
    }
}

/// `h(ρ_A)` for an h-type measure.
pub fn h_value(rho_a: &DensityMatrix, spec: &MeasureSpec) -> Result<f64> {
    spec.h_from_spectrum(&rho_a.eigenvalues(), rho_a.dim())
}

/// `E(|ψ⟩⟨ψ|)` across `cut`, evaluated as `h` of the reduced state of the
/// cut's first side. The negativity is computed from the partial transpose.
pub fn pure_measure(psi: &PureState, cut: &Bipartition, spec: &MeasureSpec) -> Result<f64> {
    if spec.kind == MeasureKind::Negativity {
        return negativity(&psi.density(), cut);
    }
    cut.check_against(psi.signature())?;
    h_value(&psi.reduced(cut.left())?, spec)
}

/// `(‖ρ^{T_right}‖₁ − 1)/2`.
pub fn negativity(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    cut.check_against(rho.signature())?;
    let pt = rho.partial_transpose(cut.right())?;
    Ok(((linalg::trace_norm_hermitian(&pt) - 1.0) / 2.0).max(0.0))
}

/// Largest `|E(ψ) − E((U_L ⊗ U_R)ψ)|` over `trials` Haar-random local unitaries.
pub fn lu_invariance_check(spec: &MeasureSpec, psi: &PureState, cut: &Bipartition, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Argument("need at least one trial".into()));
    }
    let base = pure_measure(psi, cut, spec)?;
    let (dl, dr) = (psi.signature().dim_of(cut.left()), psi.signature().dim_of(cut.right()));
    let mut rng = sampling::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let ul = sampling::random_unitary(dl, &mut rng);
        let ur = sampling::random_unitary(dr, &mut rng);
        let moved = psi.apply_local(cut, &ul, &ur)?;
        worst = worst.max((pure_measure(&moved, cut, spec)? - base).abs());
    }
    Ok(worst)
}

/// Randomized concavity probe of a measure's reduction function on `dim`-dimensional states.
pub fn h_concavity_probe(spec: &MeasureSpec, dim: usize, trials: usize, seed: u64) -> Result<ProbeReport> {
    if spec.kind == MeasureKind::Negativity {
        return Err(Error::Unsupported("negativity has no reduction function".into()));
    }
    let spec = *spec;
    entropy::concavity_probe_with(
        &spec.name(),
        move |r| spec.h_from_spectrum(&r.eigenvalues(), r.dim()).expect("h-type measure"),
        dim,
        trials,
        seed,
    )
}

/// Fast evaluator of `E` on possibly unnormalized vectors of one signature,
/// used in the convex-roof inner loop.
#[derive(Debug, Clone)]
pub struct PureEvaluator {
    layout: CutLayout,
    spec: MeasureSpec,
    cut: Bipartition,
    signature: DimSignature,
}

impl PureEvaluator {
    pub fn new(signature: &DimSignature, cut: &Bipartition, spec: &MeasureSpec) -> Result<Self> {
        Ok(Self {
            layout: CutLayout::for_cut(signature, cut)?,
            spec: *spec,
            cut: cut.clone(),
            signature: signature.clone(),
        })
    }

    /// `E(v/‖v‖)`; zero vectors evaluate to 0.
    pub fn eval(&self, v: &[C64]) -> f64 {
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return 0.0;
        }
        if self.spec.kind == MeasureKind::Negativity {
            let scaled: Vec<C64> = v.iter().map(|z| z / norm_sq.sqrt()).collect();
            let psi = PureState::from_parts_unchecked(self.signature.clone(), crate::linalg::CVec::from_vec(scaled));
            return negativity(&psi.density(), &self.cut).unwrap_or(0.0);
        }
        let m: CMat = self.layout.matrix(v);
        let reduced = (&m * m.adjoint()) / C64::new(norm_sq, 0.0);
        let spectrum = crate::quantum::SPECTRUM_FLOOR;
        let mut eig = linalg::eigvalsh(&reduced);
        for x in &mut eig {
            if *x <= spectrum {
                *x = 0.0;
            }
        }
        self.spec.h_from_spectrum(&eig, self.layout.rows).unwrap_or(0.0)
    }
}
