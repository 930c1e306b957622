use crate::linalg::{self, CMat};
use crate::{tolerances, Error, Result};

/// Matrix with orthonormal columns, mapping a `source`-dimensional space
/// into a `target`-dimensional one.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    matrix: CMat,
}

impl Isometry {
    /// Columns must be orthonormal within the global `recon` tolerance.
    pub fn new(matrix: CMat) -> Result<Self> {
        if matrix.nrows() < matrix.ncols() {
            return Err(Error::Contract(format!(
                "isometry needs rows >= columns, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let err = linalg::isometry_error(&matrix);
        if err > tolerances::global().recon {
            return Err(Error::Contract(format!("columns are not orthonormal (deviation {err:e})")));
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: CMat::identity(n, n) }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_unitary(&self) -> bool {
        self.source_dim() == self.target_dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn rejects_wide_and_non_orthonormal() {
        assert!(Isometry::new(CMat::zeros(1, 2)).is_err());
        let m = CMat::from_row_slice(2, 1, &[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(Isometry::new(m).is_err());
        let embed = CMat::from_row_slice(3, 1, &[C64::new(0.0, 1.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
        let iso = Isometry::new(embed).unwrap();
        assert_eq!((iso.source_dim(), iso.target_dim()), (1, 3));
    }
}
