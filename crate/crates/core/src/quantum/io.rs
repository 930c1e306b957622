//! JSON state records: `{"signature": [..], "re": [..], "im": [..]}`, row-major.
//! A record whose length is the product of the signature is a pure state;
//! one whose length is its square is a flat density matrix.

use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::pure::PureState;
use super::signature::DimSignature;
use crate::linalg::{CMat, C64};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateRecord {
    pub signature: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// A pure or mixed state read from a record.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn signature(&self) -> &DimSignature {
        match self {
            State::Pure(p) => p.signature(),
            State::Mixed(m) => m.signature(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.density(),
            State::Mixed(m) => m.clone(),
        }
    }

    pub fn to_record(&self) -> StateRecord {
        match self {
            State::Pure(p) => StateRecord::from(p),
            State::Mixed(m) => StateRecord::from(m),
        }
    }

    pub fn from_record(rec: &StateRecord) -> Result<Self> {
        if rec.re.len() != rec.im.len() {
            return Err(Error::Parse(format!(
                "field `re` has {} entries but `im` has {}",
                rec.re.len(),
                rec.im.len()
            )));
        }
        let sig = DimSignature::new(rec.signature.clone())?;
        let n = sig.total();
        let z: Vec<C64> = rec.re.iter().zip(&rec.im).map(|(&a, &b)| C64::new(a, b)).collect();
        if z.len() == n {
            Ok(State::Pure(PureState::new(sig, z)?))
        } else if z.len() == n * n {
            Ok(State::Mixed(DensityMatrix::new(sig, CMat::from_row_slice(n, n, &z))?))
        } else {
            Err(Error::Parse(format!(
                "field `re` has {} entries; signature {:?} needs {} (pure) or {} (density)",
                z.len(),
                rec.signature,
                n,
                n * n
            )))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("state records serialize")
    }

    /// Parses one JSON record; errors carry serde's line/column diagnostics.
    pub fn from_json(text: &str) -> Result<Self> {
        let rec: StateRecord = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_record(&rec)
    }
}

/// Row-major complex matrix: `{"rows": r, "cols": c, "re": [..], "im": [..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixRecord {
    pub fn to_matrix(&self) -> Result<CMat> {
        let n = self.rows * self.cols;
        if self.re.len() != n || self.im.len() != n {
            return Err(Error::Parse(format!(
                "matrix record {}x{} needs {n} entries in `re` and `im`, got {} and {}",
                self.rows,
                self.cols,
                self.re.len(),
                self.im.len()
            )));
        }
        let z: Vec<C64> = self.re.iter().zip(&self.im).map(|(&a, &b)| C64::new(a, b)).collect();
        Ok(CMat::from_row_slice(self.rows, self.cols, &z))
    }
}

impl From<&CMat> for MatrixRecord {
    fn from(m: &CMat) -> Self {
        let flat: Vec<C64> = m.transpose().iter().copied().collect();
        MatrixRecord {
            rows: m.nrows(),
            cols: m.ncols(),
            re: flat.iter().map(|z| z.re).collect(),
            im: flat.iter().map(|z| z.im).collect(),
        }
    }
}

impl From<&PureState> for StateRecord {
    fn from(p: &PureState) -> Self {
        StateRecord {
            signature: p.signature().dims().to_vec(),
            re: p.amplitudes().iter().map(|z| z.re).collect(),
            im: p.amplitudes().iter().map(|z| z.im).collect(),
        }
    }
}

impl From<&DensityMatrix> for StateRecord {
    fn from(m: &DensityMatrix) -> Self {
        let n = m.dim();
        let flat: Vec<C64> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| m.matrix()[(i, j)]).collect();
        StateRecord {
            signature: m.signature().dims().to_vec(),
            re: flat.iter().map(|z| z.re).collect(),
            im: flat.iter().map(|z| z.im).collect(),
        }
    }
}

impl From<PureState> for State {
    fn from(p: PureState) -> Self {
        State::Pure(p)
    }
}

impl From<DensityMatrix> for State {
    fn from(m: DensityMatrix) -> Self {
        State::Mixed(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::sampling;

    #[test]
    fn round_trips() {
        let sig = DimSignature::new(vec![2, 3]).unwrap();
        let p = State::Pure(sampling::random_pure(&sig, 1));
        let back = State::from_json(&p.to_json()).unwrap();
        let (State::Pure(a), State::Pure(b)) = (&p, &back) else { panic!("kind changed") };
        assert!(a.distance(b) < 1e-12);

        let m = State::Mixed(sampling::random_density(&sig, 3, 2).unwrap());
        let back = State::from_json(&m.to_json()).unwrap();
        assert!(m.density().trace_distance(&back.density()).unwrap() < 1e-12);
    }

    #[test]
    fn diagnostics() {
        let err = State::from_json("{\"signature\": [2], \"re\": [1.0, 0.0],\n \"im\": [0.0]}").unwrap_err();
        assert!(err.to_string().contains("`im`"), "{err}");
        let err = State::from_json("{\"signature\": [2],\n \"re\": [1.0, 0.0, 0.0]}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = State::from_json("{\"signature\": [2], \"re\": [1,0,0], \"im\": [0,0,0]}").unwrap_err();
        assert!(err.to_string().contains("needs 2"), "{err}");
    }
}
