//! Seeded random states, unitaries and isometries.
//!
//! Every sampler draws from a `ChaCha8Rng`; the same seed always yields
//! the same bits on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::density::DensityMatrix;
use super::pure::PureState;
use super::signature::DimSignature;
use crate::linalg::{CMat, CVec, C64};
use crate::{Error, Result};

pub type StateRng = ChaCha8Rng;

pub fn rng(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for item `stream` of a batch seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StateRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    // filled row-major so the draw order does not depend on nalgebra's storage
    let mut m = CMat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal moved into Q.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = ginibre(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// First `cols` columns of a Haar unitary.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    let u = random_unitary(rows, rng);
    u.columns(0, cols).into_owned()
}

pub fn random_pure_with<R: Rng + ?Sized>(signature: &DimSignature, rng: &mut R) -> PureState {
    let n = signature.total();
    let v = CVec::from_iterator(n, (0..n).map(|_| gaussian(rng)));
    let norm = v.norm();
    PureState::from_parts_unchecked(signature.clone(), v / C64::new(norm, 0.0))
}

/// Haar-distributed pure state.
pub fn random_pure(signature: &DimSignature, seed: u64) -> PureState {
    random_pure_with(signature, &mut rng(seed))
}

/// `G G† / Tr(G G†)` with `G` a `dim × rank` Ginibre matrix.
pub fn random_density_with<R: Rng + ?Sized>(signature: &DimSignature, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    let n = signature.total();
    if rank == 0 || rank > n {
        return Err(Error::Argument(format!("rank {rank} must lie in 1..={n}")));
    }
    let g = ginibre(n, rank, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    Ok(DensityMatrix::from_parts_unchecked(signature.clone(), m / C64::new(tr, 0.0)))
}

pub fn random_density(signature: &DimSignature, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(signature, rank, &mut rng(seed))
}
