use super::pure::PureState;
use super::signature::{CutLayout, DimSignature};
use crate::linalg::{self, CMat, CVec, C64};
use crate::{tolerances, Error, Result};

/// Hermitian, positive semidefinite, unit-trace matrix over a signature.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMat,
    signature: DimSignature,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and PSD against the global tolerances.
    /// The stored matrix is the Hermitian part of the input.
    pub fn new(signature: DimSignature, matrix: CMat) -> Result<Self> {
        let n = signature.total();
        if matrix.shape() != (n, n) {
            return Err(Error::Signature(format!(
                "{}x{} matrix for signature {signature} (needs {n}x{n})",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let tol = tolerances::global();
        let herm = linalg::hermiticity_error(&matrix);
        if herm > tol.herm {
            return Err(Error::InvalidState(format!("matrix is not Hermitian (deviation {herm:e})")));
        }
        let matrix = linalg::hermitian_part(&matrix);
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > tol.norm || trace.im.abs() > tol.norm {
            return Err(Error::InvalidState(format!("trace {trace} is not 1")));
        }
        let min = linalg::eigvalsh(&matrix).last().copied().unwrap_or(0.0);
        if min < -tol.psd {
            return Err(Error::InvalidState(format!("not positive semidefinite (min eigenvalue {min:e})")));
        }
        Ok(Self { matrix, signature })
    }

    pub(crate) fn from_parts_unchecked(signature: DimSignature, matrix: CMat) -> Self {
        debug_assert_eq!(matrix.nrows(), signature.total());
        Self { matrix, signature }
    }

    pub fn from_pure(state: &PureState) -> Self {
        state.density()
    }

    pub fn maximally_mixed(signature: DimSignature) -> Self {
        let n = signature.total();
        Self { matrix: CMat::identity(n, n) * C64::new(1.0 / n as f64, 0.0), signature }
    }

    /// Diagonal state in the computational basis.
    pub fn diagonal(signature: DimSignature, probabilities: &[f64]) -> Result<Self> {
        if probabilities.len() != signature.total() {
            return Err(Error::Signature("probability vector length does not match signature".into()));
        }
        let d = CVec::from_iterator(probabilities.len(), probabilities.iter().map(|&p| C64::new(p, 0.0)));
        Self::new(signature, CMat::from_diagonal(&d))
    }

    /// `Σ_i w_i ρ_i` for weights summing to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Argument("empty mixture".into()))?;
        let sig = first.1.signature.clone();
        let n = sig.total();
        let mut m = CMat::zeros(n, n);
        for (w, rho) in parts {
            if rho.signature != sig {
                return Err(Error::Signature("mixture members have different signatures".into()));
            }
            if *w < 0.0 {
                return Err(Error::Argument("negative mixture weight".into()));
            }
            m += &rho.matrix * C64::new(*w, 0.0);
        }
        Self::new(sig, m)
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn signature(&self) -> &DimSignature {
        &self.signature
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues, descending, with drift in `[-τ_psd, SPECTRUM_FLOOR]` clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        clamp_spectrum(linalg::eigvalsh(&self.matrix), tolerances::global().psd)
    }

    /// Eigenpairs with eigenvalue above τ_psd, descending, as (weights, states).
    pub fn spectral(&self) -> (Vec<f64>, Vec<PureState>) {
        let cutoff = tolerances::global().psd;
        let (values, vectors) = linalg::eigh(&self.matrix);
        let mut weights = Vec::new();
        let mut states = Vec::new();
        for (j, &v) in values.iter().enumerate() {
            if v > cutoff {
                weights.push(v);
                let col: CVec = vectors.column(j).into_owned();
                states.push(PureState::from_parts_unchecked(self.signature.clone(), col));
            }
        }
        (weights, states)
    }

    pub fn rank(&self) -> usize {
        let cutoff = tolerances::global().psd;
        self.eigenvalues().iter().filter(|&&v| v > cutoff).count()
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Reduction onto the subsystems in `keep` (kept in the listed order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let layout = CutLayout::new(&self.signature, keep)?;
        let sig = self.signature.restrict(keep)?;
        let n = self.dim();
        let mut out = CMat::zeros(layout.rows, layout.rows);
        for i in 0..n {
            for j in 0..n {
                if layout.col_of[i] == layout.col_of[j] {
                    out[(layout.row_of[i], layout.row_of[j])] += self.matrix[(i, j)];
                }
            }
        }
        Ok(Self { matrix: out, signature: sig })
    }

    /// Partial transpose on the listed subsystems. The result is Hermitian
    /// but in general not positive.
    pub fn partial_transpose(&self, subsystems: &[usize]) -> Result<CMat> {
        self.signature.check_subset(subsystems)?;
        let n = self.dim();
        let sig = &self.signature;
        let mut out = CMat::zeros(n, n);
        for i in 0..n {
            let mi = sig.multi_index(i);
            for j in 0..n {
                let mj = sig.multi_index(j);
                let (mut a, mut b) = (mi.clone(), mj.clone());
                for &s in subsystems {
                    std::mem::swap(&mut a[s], &mut b[s]);
                }
                out[(sig.flat_index(&a), sig.flat_index(&b))] = self.matrix[(i, j)];
            }
        }
        Ok(out)
    }

    /// Purification `Σ_i √λ_i |e_i⟩|i⟩` with an ancilla of dimension rank(ρ)
    /// appended as the last subsystem.
    pub fn purify(&self) -> Result<PureState> {
        let (weights, states) = self.spectral();
        let rank = weights.len().max(1);
        let sig = self.signature.join(&DimSignature::new(vec![rank])?)?;
        let n = self.dim();
        let mut v = PureState::zero_like(&sig);
        let total: f64 = weights.iter().sum();
        for (k, (w, s)) in weights.iter().zip(&states).enumerate() {
            let amp = C64::new((w / total).sqrt(), 0.0);
            for x in 0..n {
                v[x * rank + k] = s.amplitudes()[x] * amp;
            }
        }
        PureState::normalized(sig, v.as_slice().to_vec())
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let sig = self.signature.join(&other.signature)?;
        Ok(Self { matrix: self.matrix.kronecker(&other.matrix), signature: sig })
    }

    /// `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::Signature("trace distance between different dimensions".into()));
        }
        Ok(0.5 * linalg::trace_norm_hermitian(&(&self.matrix - &other.matrix)))
    }
}

/// Eigenvalues at or below this are rounding noise of an exact zero. Spectral
/// functions that are not Lipschitz at 0 (`p^α`, α < 1) need them removed.
pub const SPECTRUM_FLOOR: f64 = 1e-14;

pub(crate) fn clamp_spectrum(mut values: Vec<f64>, psd: f64) -> Vec<f64> {
    for v in &mut values {
        if *v <= SPECTRUM_FLOOR && *v >= -psd {
            *v = 0.0;
        }
    }
    values
}
