//! Numerical tolerances shared by every module.
//!
//! The defaults can be replaced process-wide with [`set_global`]; every
//! operation that does not take an explicit tolerance reads [`global`].

use std::sync::RwLock;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Unit norm of pure states and unit trace of densities.
    pub norm: f64,
    /// Hermiticity of density matrices (max entrywise deviation).
    pub herm: f64,
    /// Most negative eigenvalue accepted as numerical PSD drift.
    pub psd: f64,
    /// Reconstruction error of purifications, decompositions, factorizations.
    pub recon: f64,
    /// Agreement of spectra and of spectral functions.
    pub eig: f64,
    /// Slack allowed on audit inequalities (monotonicity, CKW, power law).
    pub audit: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        norm: 1e-10,
        herm: 1e-10,
        psd: 1e-9,
        recon: 1e-8,
        eig: 1e-8,
        audit: 1e-8,
    };

    /// Apply `key=value` overrides, comma separated (`recon=1e-7,psd=1e-8`).
    pub fn with_overrides(mut self, spec: &str) -> crate::Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| crate::Error::Parse(format!("expected key=value, got `{item}`")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| crate::Error::Parse(format!("bad tolerance value in `{item}`")))?;
            if !(value > 0.0 && value.is_finite()) {
                return Err(crate::Error::Argument(format!("tolerance `{key}` must be positive")));
            }
            match key.trim() {
                "norm" => self.norm = value,
                "herm" => self.herm = value,
                "psd" => self.psd = value,
                "recon" => self.recon = value,
                "eig" => self.eig = value,
                "audit" => self.audit = value,
                other => return Err(crate::Error::Parse(format!("unknown tolerance `{other}`"))),
            }
        }
        Ok(self)
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

static GLOBAL: RwLock<Tolerances> = RwLock::new(Tolerances::DEFAULT);

/// Current process-wide tolerances.
pub fn global() -> Tolerances {
    *GLOBAL.read().unwrap_or_else(|e| e.into_inner())
}

pub fn set_global(tol: Tolerances) {
    *GLOBAL.write().unwrap_or_else(|e| e.into_inner()) = tol;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let t = Tolerances::DEFAULT.with_overrides("recon=1e-6, psd=2e-9").unwrap();
        assert_eq!(t.recon, 1e-6);
        assert_eq!(t.psd, 2e-9);
        assert_eq!(t.norm, 1e-10);
        assert!(Tolerances::DEFAULT.with_overrides("bogus=1").is_err());
        assert!(Tolerances::DEFAULT.with_overrides("psd=-1").is_err());
        assert!(Tolerances::DEFAULT.with_overrides("psd").is_err());
    }
}
