use nalgebra::DVector;

use super::density::DensityMatrix;
use super::signature::{Bipartition, CutLayout, DimSignature};
use crate::linalg::{CMat, CVec, C64, ONE, ZERO};
use crate::{tolerances, Error, Result};

/// Unit vector in the row-major product space of its signature.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVec,
    signature: DimSignature,
}

/// Schmidt decomposition across a cut: `ψ = Σ_i c_i |l_i⟩|r_i⟩`.
#[derive(Debug, Clone)]
pub struct Schmidt {
    /// Descending, non-negative; squares sum to 1.
    pub coefficients: Vec<f64>,
    /// Columns are the left Schmidt vectors.
    pub left: CMat,
    /// Columns are the right Schmidt vectors.
    pub right: CMat,
}

impl Schmidt {
    /// Number of coefficients above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&c| c > tol).count()
    }

    /// The rows × cols amplitude matrix `Σ c_i l_i r_iᵀ`.
    pub fn matrix(&self) -> CMat {
        let mut m = CMat::zeros(self.left.nrows(), self.right.nrows());
        for (i, &c) in self.coefficients.iter().enumerate() {
            m += self.left.column(i) * self.right.column(i).transpose() * C64::new(c, 0.0);
        }
        m
    }
}

impl PureState {
    /// Validates length and unit norm (within the global `norm` tolerance).
    pub fn new(signature: DimSignature, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != signature.total() {
            return Err(Error::Signature(format!(
                "{} amplitudes for signature {signature} (needs {})",
                amplitudes.len(),
                signature.total()
            )));
        }
        let v = CVec::from_vec(amplitudes);
        let norm = v.norm();
        if (norm - 1.0).abs() > tolerances::global().norm {
            return Err(Error::InvalidState(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amplitudes: v, signature })
    }

    /// Normalizes a non-zero vector.
    pub fn normalized(signature: DimSignature, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != signature.total() {
            return Err(Error::Signature(format!(
                "{} amplitudes for signature {signature} (needs {})",
                amplitudes.len(),
                signature.total()
            )));
        }
        let v = CVec::from_vec(amplitudes);
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero or non-finite vector".into()));
        }
        Ok(Self { amplitudes: v / C64::new(norm, 0.0), signature })
    }

    pub(crate) fn from_parts_unchecked(signature: DimSignature, amplitudes: CVec) -> Self {
        debug_assert_eq!(amplitudes.len(), signature.total());
        Self { amplitudes, signature }
    }

    /// Computational basis state `|i_0 i_1 …⟩`.
    pub fn basis(signature: DimSignature, multi: &[usize]) -> Result<Self> {
        if multi.len() != signature.len() || multi.iter().zip(signature.dims()).any(|(&i, &d)| i >= d) {
            return Err(Error::Signature(format!("basis index {multi:?} outside {signature}")));
        }
        let mut v = CVec::zeros(signature.total());
        v[signature.flat_index(multi)] = ONE;
        Ok(Self { amplitudes: v, signature })
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amplitudes
    }

    pub fn signature(&self) -> &DimSignature {
        &self.signature
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Euclidean distance of the amplitude vectors (phase sensitive).
    pub fn distance(&self, other: &PureState) -> f64 {
        (&self.amplitudes - &other.amplitudes).norm()
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix::from_parts_unchecked(self.signature.clone(), m)
    }

    /// Reduced state on `keep` (kept in the listed order).
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let layout = CutLayout::new(&self.signature, keep)?;
        let m = layout.matrix(self.amplitudes.as_slice());
        let sig = self.signature.restrict(keep)?;
        Ok(DensityMatrix::from_parts_unchecked(sig, &m * m.adjoint()))
    }

    /// Amplitude matrix with the cut's left side as rows.
    pub fn cut_matrix(&self, cut: &Bipartition) -> Result<CMat> {
        let layout = CutLayout::for_cut(&self.signature, cut)?;
        Ok(layout.matrix(self.amplitudes.as_slice()))
    }

    pub fn schmidt(&self, cut: &Bipartition) -> Result<Schmidt> {
        let m = self.cut_matrix(cut)?;
        let svd = m.svd(true, true);
        let u = svd.u.expect("svd computed u");
        let v_t = svd.v_t.expect("svd computed v_t");
        let k = svd.singular_values.len();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]).then(a.cmp(&b)));
        let coefficients = order.iter().map(|&i| svd.singular_values[i]).collect();
        let left = CMat::from_columns(&order.iter().map(|&i| u.column(i)).collect::<Vec<_>>());
        // M = Σ σ_i u_i (v_t row i); the right vector is that row read as a column
        let right = CMat::from_columns(&order.iter().map(|&i| v_t.row(i).transpose()).collect::<Vec<_>>());
        Ok(Schmidt { coefficients, left, right })
    }

    /// `self ⊗ other` with concatenated signature.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let sig = self.signature.join(&other.signature)?;
        let v = self.amplitudes.kronecker(&other.amplitudes);
        Ok(Self { amplitudes: v, signature: sig })
    }

    /// `(U_L ⊗ U_R)|ψ⟩` across `cut`, with `U_L`/`U_R` acting on the joint
    /// spaces of the two sides.
    pub fn apply_local(&self, cut: &Bipartition, u_left: &CMat, u_right: &CMat) -> Result<PureState> {
        let layout = CutLayout::for_cut(&self.signature, cut)?;
        if u_left.shape() != (layout.rows, layout.rows) || u_right.shape() != (layout.cols, layout.cols) {
            return Err(Error::Signature("local operator dimensions do not match the cut".into()));
        }
        let m = layout.matrix(self.amplitudes.as_slice());
        let out = u_left * m * u_right.transpose();
        Ok(Self { amplitudes: CVec::from_vec(layout.flatten(&out)), signature: self.signature.clone() })
    }

    /// Same amplitudes under a new signature with equal total dimension.
    pub fn reshaped(&self, signature: DimSignature) -> Result<PureState> {
        if signature.total() != self.dim() {
            return Err(Error::Signature(format!("cannot view {} as {signature}", self.signature)));
        }
        Ok(Self { amplitudes: self.amplitudes.clone(), signature })
    }

    /// Amplitudes grouped into (left, right) sides of a cut, as a new
    /// bipartite state with signature `(dim left, dim right)`.
    pub fn as_bipartite(&self, cut: &Bipartition) -> Result<PureState> {
        let layout = CutLayout::for_cut(&self.signature, cut)?;
        let m = layout.matrix(self.amplitudes.as_slice());
        let sig = DimSignature::new(vec![layout.rows, layout.cols])?;
        let v: Vec<C64> = (0..layout.rows).flat_map(|r| (0..layout.cols).map(move |c| (r, c))).map(|(r, c)| m[(r, c)]).collect();
        Ok(Self { amplitudes: DVector::from_vec(v), signature: sig })
    }

    pub(crate) fn zero_like(signature: &DimSignature) -> CVec {
        CVec::from_element(signature.total(), ZERO)
    }
}
