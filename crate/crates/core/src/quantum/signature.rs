//! Subsystem dimension signatures and bipartitions.
//!
//! Every state is stored row-major over its signature: for local dimensions
//! `(d_0, …, d_{m-1})` the multi-index `(i_0, …, i_{m-1})` sits at flat index
//!
//! ```text
//! i_0·(d_1·…·d_{m-1}) + i_1·(d_2·…·d_{m-1}) + … + i_{m-1}
//! ```
//!
//! Subsystem `k` carries the label `'A' + k`. All reshapes in the crate go
//! through [`DimSignature::multi_index`] / [`DimSignature::flat_index`].

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DimSignature {
    dims: Vec<usize>,
}

impl DimSignature {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Signature("signature needs at least one subsystem".into()));
        }
        if dims.len() > 26 {
            return Err(Error::Signature("at most 26 labelled subsystems".into()));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::Signature(format!("subsystem {} has dimension 0", label(pos))));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Product of all local dimensions.
    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn dim(&self, subsystem: usize) -> usize {
        self.dims[subsystem]
    }

    /// Dimension of the joint space of the given subsystems.
    pub fn dim_of(&self, subsystems: &[usize]) -> usize {
        subsystems.iter().map(|&s| self.dims[s]).product()
    }

    pub fn labels(&self) -> String {
        (0..self.dims.len()).map(label).collect()
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            idx[k] = flat % self.dims[k];
            flat /= self.dims[k];
        }
        idx
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    /// Signature restricted to `subsystems` (kept in the given order).
    pub fn restrict(&self, subsystems: &[usize]) -> Result<Self> {
        self.check_subset(subsystems)?;
        Self::new(subsystems.iter().map(|&s| self.dims[s]).collect())
    }

    /// Concatenation `self ⊗ other`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::new(dims)
    }

    pub(crate) fn check_subset(&self, subsystems: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.dims.len()];
        for &s in subsystems {
            if s >= self.dims.len() {
                return Err(Error::Signature(format!(
                    "unknown subsystem label {} for signature {}",
                    label(s),
                    self.labels()
                )));
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::Signature(format!("subsystem {} listed twice", label(s))));
            }
        }
        Ok(())
    }

    /// Subsystem indices named by a label string such as `"AC"`.
    pub fn parse_labels(&self, labels: &str) -> Result<Vec<usize>> {
        let idx = labels
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(label_index)
            .collect::<Result<Vec<_>>>()?;
        self.check_subset(&idx)?;
        Ok(idx)
    }
}

impl TryFrom<Vec<usize>> for DimSignature {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<DimSignature> for Vec<usize> {
    fn from(s: DimSignature) -> Self {
        s.dims
    }
}

impl std::fmt::Display for DimSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("⊗"))
    }
}

pub fn label(subsystem: usize) -> char {
    (b'A' + subsystem as u8) as char
}

fn label_index(c: char) -> Result<usize> {
    let c = c.to_ascii_uppercase();
    if c.is_ascii_uppercase() {
        Ok((c as u8 - b'A') as usize)
    } else {
        Err(Error::Signature(format!("`{c}` is not a subsystem label")))
    }
}

/// A split of a signature's subsystems into two non-empty sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    /// `left` lists one side; the other side is every remaining subsystem.
    pub fn new(signature: &DimSignature, left: &[usize]) -> Result<Self> {
        signature.check_subset(left)?;
        let mut left = left.to_vec();
        left.sort_unstable();
        let right: Vec<usize> = (0..signature.len()).filter(|s| !left.contains(s)).collect();
        if left.is_empty() || right.is_empty() {
            return Err(Error::Signature("degenerate cut: one side is empty".into()));
        }
        Ok(Self { left, right })
    }

    /// Parse `"A|BC"` (both sides given) or `"A"` (complement implied).
    pub fn parse(signature: &DimSignature, text: &str) -> Result<Self> {
        match text.split_once('|') {
            Some((l, r)) => {
                let left = signature.parse_labels(l)?;
                let right = signature.parse_labels(r)?;
                let cut = Self::new(signature, &left)?;
                let mut r_sorted = right;
                r_sorted.sort_unstable();
                if r_sorted != cut.right {
                    return Err(Error::Signature(format!(
                        "cut `{text}` does not partition {}",
                        signature.labels()
                    )));
                }
                Ok(cut)
            }
            None => Self::new(signature, &signature.parse_labels(text)?),
        }
    }

    /// First subsystem against all others (`A|BC…`).
    pub fn first_vs_rest(signature: &DimSignature) -> Result<Self> {
        Self::new(signature, &[0])
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn swapped(&self) -> Self {
        Self { left: self.right.clone(), right: self.left.clone() }
    }

    pub fn check_against(&self, signature: &DimSignature) -> Result<()> {
        let n = signature.len();
        if self.left.iter().chain(&self.right).any(|&s| s >= n) || self.left.len() + self.right.len() != n {
            return Err(Error::Signature(format!("cut {self} does not match signature {}", signature.labels())));
        }
        Ok(())
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let l: String = self.left.iter().map(|&s| label(s)).collect();
        let r: String = self.right.iter().map(|&s| label(s)).collect();
        write!(f, "{l}|{r}")
    }
}

/// Precomputed map from flat indices to (row, column) of the matrix that
/// groups one set of subsystems as rows and the rest as columns.
#[derive(Debug, Clone)]
pub struct CutLayout {
    pub rows: usize,
    pub cols: usize,
    pub row_of: Vec<usize>,
    pub col_of: Vec<usize>,
}

impl CutLayout {
    pub fn new(signature: &DimSignature, row_subsystems: &[usize]) -> Result<Self> {
        signature.check_subset(row_subsystems)?;
        let col_subsystems: Vec<usize> = (0..signature.len()).filter(|s| !row_subsystems.contains(s)).collect();
        let row_sig: Vec<usize> = row_subsystems.iter().map(|&s| signature.dim(s)).collect();
        let col_sig: Vec<usize> = col_subsystems.iter().map(|&s| signature.dim(s)).collect();
        let total = signature.total();
        let mut row_of = Vec::with_capacity(total);
        let mut col_of = Vec::with_capacity(total);
        for flat in 0..total {
            let multi = signature.multi_index(flat);
            let r = row_subsystems.iter().zip(&row_sig).fold(0, |acc, (&s, &d)| acc * d + multi[s]);
            let c = col_subsystems.iter().zip(&col_sig).fold(0, |acc, (&s, &d)| acc * d + multi[s]);
            row_of.push(r);
            col_of.push(c);
        }
        Ok(Self { rows: row_sig.iter().product(), cols: col_sig.iter().product(), row_of, col_of })
    }

    pub fn for_cut(signature: &DimSignature, cut: &Bipartition) -> Result<Self> {
        cut.check_against(signature)?;
        Self::new(signature, cut.left())
    }

    /// Reshape a flat vector into the rows × cols matrix.
    pub fn matrix(&self, amplitudes: &[crate::linalg::C64]) -> crate::linalg::CMat {
        let mut m = crate::linalg::CMat::zeros(self.rows, self.cols);
        for (i, &a) in amplitudes.iter().enumerate() {
            m[(self.row_of[i], self.col_of[i])] = a;
        }
        m
    }

    /// Inverse of [`CutLayout::matrix`].
    pub fn flatten(&self, m: &crate::linalg::CMat) -> Vec<crate::linalg::C64> {
        (0..self.row_of.len()).map(|i| m[(self.row_of[i], self.col_of[i])]).collect()
    }
}
