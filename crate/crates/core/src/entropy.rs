//! Spectral entropies `H(ρ) = f(eigenvalues of ρ)` and randomized concavity probes.
//!
//! Von Neumann and Rényi entropies honour the spec's log base (2 by
//! default). Tsallis, linear and trace-form (`Tr g(ρ)`) entropies have no
//! logarithm and are base-free, so their `q → 1` limit is the von Neumann
//! entropy in nats.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quantum::{sampling, DensityMatrix, DimSignature, StateRecord};
use crate::{tolerances, Error, Result};

/// Scalar `g` in `H_g(ρ) = Σ_j g(p_j)`. All variants satisfy `g(0) = g(1) = 0`
/// and `g'' < 0` on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "g", rename_all = "snake_case")]
pub enum TraceFunction {
    /// `−p ln p`
    NegPLogP,
    /// `(p − p^q)/(q − 1)`, `q > 0`, `q ≠ 1`
    Tsallis { q: f64 },
    /// `p − p²`
    Quadratic,
    /// `p^s − p`, `0 < s < 1`
    Power { s: f64 },
}

impl TraceFunction {
    pub fn eval(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        match *self {
            TraceFunction::NegPLogP => -p * p.ln(),
            TraceFunction::Tsallis { q } => (p - p.powf(q)) / (q - 1.0),
            TraceFunction::Quadratic => p - p * p,
            TraceFunction::Power { s } => p.powf(s) - p,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TraceFunction::Tsallis { q } if !(q > 0.0 && q.is_finite() && q != 1.0) => {
                Err(Error::Argument(format!("trace-form Tsallis needs q > 0, q != 1 (got {q})")))
            }
            TraceFunction::Power { s } if !(s > 0.0 && s < 1.0) => {
                Err(Error::Argument(format!("power trace function needs 0 < s < 1 (got {s})")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntropyKind {
    VonNeumann,
    Tsallis { q: f64 },
    Renyi { alpha: f64 },
    Linear,
    GTrace { g: TraceFunction },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropySpec {
    pub kind: EntropyKind,
    pub log_base: f64,
}

impl EntropySpec {
    pub fn new(kind: EntropyKind) -> Result<Self> {
        Self::with_base(kind, 2.0)
    }

    pub fn with_base(kind: EntropyKind, log_base: f64) -> Result<Self> {
        let spec = Self { kind, log_base };
        spec.validate()?;
        Ok(spec)
    }

    pub fn von_neumann() -> Self {
        Self { kind: EntropyKind::VonNeumann, log_base: 2.0 }
    }

    pub fn tsallis(q: f64) -> Result<Self> {
        Self::new(EntropyKind::Tsallis { q })
    }

    pub fn renyi(alpha: f64) -> Result<Self> {
        Self::new(EntropyKind::Renyi { alpha })
    }

    pub fn linear() -> Self {
        Self { kind: EntropyKind::Linear, log_base: 2.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.log_base > 0.0 && self.log_base.is_finite() && self.log_base != 1.0) {
            return Err(Error::Argument(format!("log base must be positive and != 1 (got {})", self.log_base)));
        }
        match self.kind {
            EntropyKind::Tsallis { q } if !(q > 0.0 && q.is_finite()) => {
                Err(Error::Argument(format!("Tsallis entropy needs q > 0 (got {q})")))
            }
            EntropyKind::Renyi { alpha } if !(alpha >= 0.0 && alpha.is_finite()) => {
                Err(Error::Argument(format!("Rényi entropy needs alpha >= 0 (got {alpha})")))
            }
            EntropyKind::GTrace { g } => g.validate(),
            _ => Ok(()),
        }
    }

    /// Whether `Tr g(ρ)`-type strict concavity holds for this spec's parameters.
    pub fn strictly_concave(&self) -> bool {
        match self.kind {
            EntropyKind::VonNeumann | EntropyKind::Linear | EntropyKind::GTrace { .. } => true,
            EntropyKind::Tsallis { q } => q > 0.0,
            // α = 0 is log(rank): flat on full-rank states
            EntropyKind::Renyi { alpha } => alpha > 0.0 && alpha <= 1.0,
        }
    }

    /// Short label used in reports and on the command line.
    pub fn label(&self) -> String {
        let base = if self.log_base == 2.0 { String::new() } else { format!("@{}", self.log_base) };
        match self.kind {
            EntropyKind::VonNeumann => format!("vn{base}"),
            EntropyKind::Tsallis { q } => format!("tsallis:{q}"),
            EntropyKind::Renyi { alpha } => format!("renyi:{alpha}{base}"),
            EntropyKind::Linear => "linear".into(),
            EntropyKind::GTrace { g } => match g {
                TraceFunction::NegPLogP => "g:plogp".into(),
                TraceFunction::Tsallis { q } => format!("g:tsallis:{q}"),
                TraceFunction::Quadratic => "g:quadratic".into(),
                TraceFunction::Power { s } => format!("g:power:{s}"),
            },
        }
    }

    /// Parses `vn`, `tsallis:q`, `renyi:α`, `linear`, `g:plogp`,
    /// `g:tsallis:q`, `g:quadratic`, `g:power:s`; an optional `@base`
    /// suffix sets the log base (`e` accepted).
    pub fn parse(text: &str) -> Result<Self> {
        let (body, base) = match text.split_once('@') {
            Some((b, base)) => (b, parse_base(base)?),
            None => (text, 2.0),
        };
        let parts: Vec<&str> = body.split(':').map(str::trim).collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number `{s}` in `{text}`")));
        let kind = match parts.as_slice() {
            ["vn" | "vonneumann" | "von-neumann"] => EntropyKind::VonNeumann,
            ["tsallis", q] => EntropyKind::Tsallis { q: num(q)? },
            ["renyi", a] => EntropyKind::Renyi { alpha: num(a)? },
            ["linear"] => EntropyKind::Linear,
            ["g", "plogp"] => EntropyKind::GTrace { g: TraceFunction::NegPLogP },
            ["g", "tsallis", q] => EntropyKind::GTrace { g: TraceFunction::Tsallis { q: num(q)? } },
            ["g", "quadratic"] => EntropyKind::GTrace { g: TraceFunction::Quadratic },
            ["g", "power", s] => EntropyKind::GTrace { g: TraceFunction::Power { s: num(s)? } },
            _ => return Err(Error::Parse(format!("unknown entropy `{text}`"))),
        };
        Self::with_base(kind, base)
    }
}

fn parse_base(s: &str) -> Result<f64> {
    match s.trim() {
        "e" => Ok(std::f64::consts::E),
        other => other.parse().map_err(|_| Error::Parse(format!("bad log base `{other}`"))),
    }
}

/// Entropy of a probability spectrum (already clamped, summing to one).
pub fn spectrum_entropy(spectrum: &[f64], spec: &EntropySpec) -> f64 {
    let ln_base = spec.log_base.ln();
    let von_neumann_nats = || -> f64 { spectrum.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum() };
    let value = match spec.kind {
        EntropyKind::VonNeumann => von_neumann_nats() / ln_base,
        EntropyKind::Tsallis { q: 1.0 } => von_neumann_nats(),
        EntropyKind::Tsallis { q } => (1.0 - spectrum.iter().filter(|&&p| p > 0.0).map(|&p| p.powf(q)).sum::<f64>()) / (q - 1.0),
        EntropyKind::Renyi { alpha: 1.0 } => von_neumann_nats() / ln_base,
        EntropyKind::Renyi { alpha: 0.0 } => {
            let cutoff = tolerances::global().psd;
            (spectrum.iter().filter(|&&p| p > cutoff).count().max(1) as f64).ln() / ln_base
        }
        EntropyKind::Renyi { alpha } => {
            let s: f64 = spectrum.iter().filter(|&&p| p > 0.0).map(|&p| p.powf(alpha)).sum();
            s.ln() / ((1.0 - alpha) * ln_base)
        }
        EntropyKind::Linear => 1.0 - spectrum.iter().map(|p| p * p).sum::<f64>(),
        EntropyKind::GTrace { g } => spectrum.iter().map(|&p| g.eval(p)).sum(),
    };
    value.max(0.0)
}

/// `H(ρ)` from the clamped spectrum of ρ.
pub fn entropy(rho: &DensityMatrix, spec: &EntropySpec) -> Result<f64> {
    spec.validate()?;
    Ok(spectrum_entropy(&rho.eigenvalues(), spec))
}

/// A pair of states on which concavity fails by more than τ_eig.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConcavityWitness {
    pub rho1: StateRecord,
    pub rho2: StateRecord,
    pub lambda: f64,
    pub margin: f64,
    pub trial: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeReport {
    pub spec: String,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    /// `min over trials of h(λρ₁+(1−λ)ρ₂) − λh(ρ₁) − (1−λ)h(ρ₂)`
    pub min_margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ConcavityWitness>,
}

impl ProbeReport {
    /// Every sampled margin strictly positive and no violation witness.
    pub fn is_strict(&self) -> bool {
        self.witness.is_none() && self.min_margin > 0.0
    }
}

/// Samples a pair of distinct states and a mixing weight for trial `trial`.
///
/// Trials rotate through three pair shapes: independent Ginibre states of
/// random rank; a state and a small step from it towards another state
/// (which reaches the neighbourhood of pure states where Rényi α > 1
/// entropies bend the wrong way); and two states diagonal in a shared
/// random basis.
pub fn sample_pair(dim: usize, seed: u64, trial: usize) -> (DensityMatrix, DensityMatrix, f64) {
    let mut rng = sampling::stream_rng(seed, trial as u64);
    let sig = DimSignature::new(vec![dim]).expect("dim >= 1");
    let random_state = |rng: &mut sampling::StateRng| {
        let rank = rng.random_range(1..=dim);
        sampling::random_density_with(&sig, rank, rng).expect("rank in range")
    };
    let lambda = rng.random_range(0.02..0.98);
    let (rho1, rho2) = match trial % 3 {
        0 => (random_state(&mut rng), random_state(&mut rng)),
        1 => {
            let a = random_state(&mut rng);
            let b = random_state(&mut rng);
            let s = rng.random_range(0.02..0.3);
            let near = DensityMatrix::mixture(&[(1.0 - s, &a), (s, &b)]).expect("convex mixture");
            (a, near)
        }
        _ => {
            let u = sampling::random_unitary(dim, &mut rng);
            let diag = |rng: &mut sampling::StateRng| {
                let mut p: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..1.0f64).powi(3)).collect();
                let s: f64 = p.iter().sum();
                p.iter_mut().for_each(|x| *x /= s);
                let d = crate::linalg::CMat::from_diagonal(&crate::linalg::CVec::from_iterator(
                    dim,
                    p.iter().map(|&x| crate::linalg::C64::new(x, 0.0)),
                ));
                DensityMatrix::from_parts_unchecked(sig.clone(), &u * d * u.adjoint())
            };
            (diag(&mut rng), diag(&mut rng))
        }
    };
    (rho1, rho2, lambda)
}

/// Concavity probe for an arbitrary state functional.
pub fn concavity_probe_with<F>(label: &str, h: F, dim: usize, trials: usize, seed: u64) -> Result<ProbeReport>
where
    F: Fn(&DensityMatrix) -> f64 + Sync,
{
    if trials == 0 {
        return Err(Error::Argument("concavity probe needs at least one trial".into()));
    }
    if dim == 0 {
        return Err(Error::Argument("dimension must be positive".into()));
    }
    let tol = tolerances::global().eig;
    let margins: Vec<(f64, usize)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (r1, r2, l) = sample_pair(dim, seed, t);
            let mix = DensityMatrix::mixture(&[(l, &r1), (1.0 - l, &r2)]).expect("convex mixture");
            (h(&mix) - l * h(&r1) - (1.0 - l) * h(&r2), t)
        })
        .collect();
    let (min_margin, worst) = margins
        .iter()
        .copied()
        .fold((f64::INFINITY, 0), |acc, (m, t)| if m < acc.0 { (m, t) } else { acc });
    let witness = (min_margin < -tol).then(|| {
        let (r1, r2, l) = sample_pair(dim, seed, worst);
        ConcavityWitness { rho1: StateRecord::from(&r1), rho2: StateRecord::from(&r2), lambda: l, margin: min_margin, trial: worst }
    });
    Ok(ProbeReport { spec: label.to_string(), dim, trials, seed, min_margin, witness })
}

/// Randomized check of `H(λρ₁+(1−λ)ρ₂) ≥ λH(ρ₁)+(1−λ)H(ρ₂)`.
pub fn concavity_probe(spec: &EntropySpec, dim: usize, trials: usize, seed: u64) -> Result<ProbeReport> {
    spec.validate()?;
    let spec = *spec;
    concavity_probe_with(&spec.label(), move |r| spectrum_entropy(&r.eigenvalues(), &spec), dim, trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::quantum::{random_density, PureState};

    fn sig(d: &[usize]) -> DimSignature {
        DimSignature::new(d.to_vec()).unwrap()
    }

    #[test]
    fn maximally_mixed_is_log_d() {
        for d in 2..6 {
            let rho = DensityMatrix::maximally_mixed(sig(&[d]));
            let h = entropy(&rho, &EntropySpec::von_neumann()).unwrap();
            assert!((h - (d as f64).log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_states_have_zero_entropy() {
        let psi = PureState::normalized(sig(&[3]), vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0), C64::new(-1.0, 0.5)]).unwrap();
        let rho = psi.density();
        let specs = [
            EntropySpec::von_neumann(),
            EntropySpec::tsallis(0.5).unwrap(),
            EntropySpec::tsallis(2.0).unwrap(),
            EntropySpec::renyi(0.0).unwrap(),
            EntropySpec::renyi(0.5).unwrap(),
            EntropySpec::renyi(2.0).unwrap(),
            EntropySpec::linear(),
            EntropySpec::new(EntropyKind::GTrace { g: TraceFunction::Power { s: 0.5 } }).unwrap(),
        ];
        for s in specs {
            assert!(entropy(&rho, &s).unwrap().abs() < 1e-12, "{}", s.label());
        }
    }

    #[test]
    fn binary_example() {
        // −Σ p log₂ p for p = (2/3, 1/3)
        let p = [2.0 / 3.0, 1.0 / 3.0];
        let oracle: f64 = p.iter().map(|&x: &f64| -x * x.log2()).sum();
        let rho = DensityMatrix::diagonal(sig(&[2]), &p).unwrap();
        let h = entropy(&rho, &EntropySpec::von_neumann()).unwrap();
        assert!((h - oracle).abs() < 1e-14);
        assert!((h - 0.918_295_834_054_489_6).abs() < 1e-12);
    }

    #[test]
    fn parameter_limits_converge() {
        let rho = random_density(&sig(&[3]), 3, 11).unwrap();
        let vn_nats = entropy(&rho, &EntropySpec::with_base(EntropyKind::VonNeumann, std::f64::consts::E).unwrap()).unwrap();
        let vn = entropy(&rho, &EntropySpec::von_neumann()).unwrap();
        for off in [1e-5, -1e-5] {
            let t = entropy(&rho, &EntropySpec::tsallis(1.0 + off).unwrap()).unwrap();
            assert!((t - vn_nats).abs() < 1e-4);
            let r = entropy(&rho, &EntropySpec::renyi(1.0 + off).unwrap()).unwrap();
            assert!((r - vn).abs() < 1e-4);
        }
        let t1 = entropy(&rho, &EntropySpec::tsallis(1.0).unwrap()).unwrap();
        assert!((t1 - vn_nats).abs() < 1e-14);
    }

    #[test]
    fn linear_is_tsallis_two() {
        for seed in 0..20 {
            let rho = random_density(&sig(&[4]), 1 + seed as usize % 4, seed).unwrap();
            let l = entropy(&rho, &EntropySpec::linear()).unwrap();
            let t = entropy(&rho, &EntropySpec::tsallis(2.0).unwrap()).unwrap();
            assert!((l - t).abs() < 1e-15);
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(EntropySpec::tsallis(0.0).is_err());
        assert!(EntropySpec::renyi(-0.1).is_err());
        assert!(EntropySpec::with_base(EntropyKind::VonNeumann, 1.0).is_err());
        assert!(EntropySpec::new(EntropyKind::GTrace { g: TraceFunction::Power { s: 1.5 } }).is_err());
    }

    #[test]
    fn parse_labels_round_trip() {
        for text in ["vn", "tsallis:0.5", "renyi:2", "linear", "g:plogp", "g:power:0.5", "g:tsallis:3", "g:quadratic"] {
            let s = EntropySpec::parse(text).unwrap();
            assert_eq!(EntropySpec::parse(&s.label()).unwrap(), s);
        }
        assert_eq!(EntropySpec::parse("vn@e").unwrap().log_base, std::f64::consts::E);
        assert!(EntropySpec::parse("shannon").is_err());
    }

    #[test]
    fn von_neumann_probe_is_strict() {
        let r = concavity_probe(&EntropySpec::von_neumann(), 2, 1000, 1).unwrap();
        assert!(r.is_strict(), "min margin {}", r.min_margin);
    }

    #[test]
    fn probe_is_deterministic() {
        let a = concavity_probe(&EntropySpec::renyi(0.5).unwrap(), 3, 200, 9).unwrap();
        let b = concavity_probe(&EntropySpec::renyi(0.5).unwrap(), 3, 200, 9).unwrap();
        assert_eq!(a.min_margin.to_bits(), b.min_margin.to_bits());
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(concavity_probe(&EntropySpec::von_neumann(), 2, 0, 1).is_err());
    }
}
