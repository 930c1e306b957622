//! Reproducible state ensembles described by a family, dimensions, a count
//! and a seed. Member `i` draws from its own random stream, so any member can
//! be regenerated without the others.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::quantum::{self, sampling, DimSignature, Isometry, State};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    HaarPure,
    Ginibre,
    ProductFamily,
    Ghz,
    W,
    BellC,
    Bell,
}

impl Family {
    pub const ALL: [Family; 7] =
        [Family::HaarPure, Family::Ginibre, Family::ProductFamily, Family::Ghz, Family::W, Family::BellC, Family::Bell];

    pub fn name(&self) -> &'static str {
        match self {
            Family::HaarPure => "haar-pure",
            Family::Ginibre => "ginibre",
            Family::ProductFamily => "product-family",
            Family::Ghz => "ghz",
            Family::W => "w",
            Family::BellC => "bell-c",
            Family::Bell => "bell",
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, Family::HaarPure | Family::Ginibre | Family::ProductFamily)
    }

    fn default_dims(&self) -> Option<Vec<usize>> {
        match self {
            Family::Ghz | Family::W | Family::BellC => Some(vec![2, 2, 2]),
            Family::Bell => Some(vec![2, 2]),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
            Error::Parse(format!("unknown family '{s}' (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub family: Family,
    pub dims: Vec<usize>,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Rank of Ginibre densities; full rank when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// `(dim B₁, dim B₂)` of the product family; chosen from the dims when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<(usize, usize)>,
}

impl EnsembleSpec {
    pub fn new(family: Family, dims: Option<Vec<usize>>, count: usize, seed: Option<u64>) -> Result<Self> {
        let dims = match dims.or_else(|| family.default_dims()) {
            Some(d) => d,
            None => return Err(Error::Argument(format!("family {family} needs explicit dims"))),
        };
        let spec = Self { family, dims, count, seed, rank: None, split: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        DimSignature::new(self.dims.clone())?;
        if self.count == 0 {
            return Err(Error::Argument("ensemble count must be positive".into()));
        }
        if self.family.is_random() && self.seed.is_none() {
            return Err(Error::Argument(format!("family {} is random and needs --seed", self.family)));
        }
        let d = &self.dims;
        let arity_ok = match self.family {
            Family::HaarPure | Family::Ginibre => true,
            Family::ProductFamily | Family::BellC => d.len() == 3,
            Family::Ghz => d.len() >= 2 && d.iter().all(|&x| x == d[0]),
            Family::W => d.len() >= 2 && d.iter().all(|&x| x == 2),
            Family::Bell => d == &[2, 2],
        };
        if !arity_ok {
            return Err(Error::Argument(format!("dims {:?} do not fit family {}", d, self.family)));
        }
        if self.family == Family::BellC && (d[0], d[1]) != (2, 2) {
            return Err(Error::Argument(format!("bell-c needs dims 2,2,<d>, got {d:?}")));
        }
        if self.family == Family::ProductFamily {
            let (b1, b2) = self.product_split();
            if b1 == 0 || b2 == 0 || b1 * b2 > d[1] {
                return Err(Error::Argument(format!("split {b1}x{b2} does not fit dim B = {}", d[1])));
            }
        }
        Ok(())
    }

    /// `(dim B₁, dim B₂)`: the explicit split, else `dim B₁ = min(dim A, dim B)`
    /// and `dim B₂ = min(dim C, dim B / dim B₁)`.
    pub fn product_split(&self) -> (usize, usize) {
        if let Some(s) = self.split {
            return s;
        }
        let (da, db, dc) = (self.dims[0], self.dims[1], self.dims[2]);
        let b1 = da.min(db);
        (b1, dc.min(db / b1).max(1))
    }

    /// Member `index` with its descriptor.
    pub fn member(&self, index: usize) -> Result<(String, State)> {
        let sig = DimSignature::new(self.dims.clone())?;
        let descriptor = match self.seed {
            Some(s) if self.family.is_random() => format!("{}{:?}#{index}@{s}", self.family, self.dims),
            _ => format!("{}{:?}#{index}", self.family, self.dims),
        };
        let mut rng = sampling::stream_rng(self.seed.unwrap_or(0), index as u64);
        let state = match self.family {
            Family::HaarPure => State::Pure(sampling::random_pure_with(&sig, &mut rng)),
            Family::Ginibre => State::Mixed(sampling::random_density_with(&sig, self.rank.unwrap_or(sig.total()), &mut rng)?),
            Family::ProductFamily => {
                let (b1, b2) = self.product_split();
                let phi = sampling::random_pure_with(&DimSignature::new(vec![self.dims[0], b1])?, &mut rng);
                let eta = sampling::random_pure_with(&DimSignature::new(vec![b2, self.dims[2]])?, &mut rng);
                let u = Isometry::new(sampling::random_isometry(self.dims[1], b1 * b2, &mut rng))?;
                State::Pure(quantum::make_product_family(&phi, &eta, &u)?)
            }
            Family::Ghz => State::Pure(quantum::ghz(self.dims[0], self.dims.len())?),
            Family::W => State::Pure(quantum::w_state(self.dims.len())?),
            Family::BellC => State::Pure(quantum::bell_c(self.dims[2])?),
            Family::Bell => State::Pure(quantum::bell()),
        };
        Ok((descriptor, state))
    }

    pub fn generate(&self) -> Result<Vec<(String, State)>> {
        self.validate()?;
        (0..self.count).map(|i| self.member(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_are_reproducible_and_distinct() {
        let spec = EnsembleSpec::new(Family::HaarPure, Some(vec![2, 2, 2]), 3, Some(7)).unwrap();
        let a = spec.generate().unwrap();
        let b = spec.generate().unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0].1, a[1].1);
        assert_eq!(spec.member(2).unwrap(), a[2]);
    }

    #[test]
    fn validation() {
        assert!(EnsembleSpec::new(Family::HaarPure, Some(vec![2, 2]), 1, None).is_err());
        assert!(EnsembleSpec::new(Family::HaarPure, Some(vec![2, 2]), 0, Some(1)).is_err());
        assert!(EnsembleSpec::new(Family::W, Some(vec![2, 3, 2]), 1, None).is_err());
        assert!(EnsembleSpec::new(Family::ProductFamily, None, 1, Some(1)).is_err());
        assert!(EnsembleSpec::new(Family::Ghz, None, 1, None).is_ok());
        assert!("nope".parse::<Family>().is_err());
        assert_eq!("bell-c".parse::<Family>().unwrap(), Family::BellC);
    }

    #[test]
    fn product_split_defaults() {
        for (dims, split) in [([2, 4, 2], (2, 2)), ([2, 6, 3], (2, 3)), ([3, 9, 3], (3, 3)), ([2, 3, 2], (2, 1))] {
            let spec = EnsembleSpec::new(Family::ProductFamily, Some(dims.to_vec()), 1, Some(0)).unwrap();
            assert_eq!(spec.product_split(), split);
            assert!(matches!(spec.member(0).unwrap().1, State::Pure(_)));
        }
    }

    #[test]
    fn ginibre_rank() {
        let mut spec = EnsembleSpec::new(Family::Ginibre, Some(vec![2, 2]), 1, Some(3)).unwrap();
        spec.rank = Some(2);
        let State::Mixed(rho) = spec.member(0).unwrap().1 else { panic!("expected a density") };
        assert_eq!(rho.rank(), 2);
    }
}
