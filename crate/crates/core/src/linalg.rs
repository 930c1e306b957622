//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Eigendecomposition of a Hermitian matrix with eigenvalues in descending
/// order. Each eigenvector is rephased so its first component of modulus
/// above 1e-12 is real and positive, which makes the basis deterministic.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        if let Some(pivot) = col.iter().find(|z| z.norm() > 1e-12).copied() {
            let phase = pivot.conj() / pivot.norm();
            col *= phase;
        }
        vectors.set_column(dst, &col);
    }
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => {
            let (a, d, b) = (m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)]);
            let mean = 0.5 * (a + d);
            let half = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean + half, mean - half]
        }
        _ => {
            let mut v: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
            v.sort_by(|a, b| b.total_cmp(a));
            v
        }
    }
}

/// (M + M†)/2.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Largest entrywise deviation from hermiticity.
pub fn hermiticity_error(m: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Trace norm of a Hermitian matrix: the sum of absolute eigenvalues.
pub fn trace_norm_hermitian(m: &CMat) -> f64 {
    eigvalsh(m).iter().map(|x| x.abs()).sum()
}

/// Square root of a positive semidefinite Hermitian matrix; negative drift is clamped.
pub fn psd_sqrt(m: &CMat) -> CMat {
    let (values, vectors) = eigh(m);
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        let s = C64::new(v.max(0.0).sqrt(), 0.0);
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= s;
        }
    }
    &scaled * vectors.adjoint()
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// max |(V†V − I)_{ij}|.
pub fn isometry_error(v: &CMat) -> f64 {
    let gram = v.adjoint() * v;
    let mut worst = 0.0f64;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((gram[(i, j)] - target).norm());
        }
    }
    worst
}

/// Extend the orthonormal columns of `v` to a square unitary by Gram–Schmidt
/// against the standard basis, in index order.
pub fn complete_to_unitary(v: &CMat) -> CMat {
    let n = v.nrows();
    let mut cols: Vec<CVec> = v.column_iter().map(|c| c.into_owned()).collect();
    let mut e = 0;
    while cols.len() < n && e < n {
        let mut cand = CVec::zeros(n);
        cand[e] = ONE;
        e += 1;
        // two passes of classical Gram–Schmidt
        for _ in 0..2 {
            for c in &cols {
                let overlap = c.dotc(&cand);
                cand -= c * overlap;
            }
        }
        let norm = cand.norm();
        if norm > 1e-6 {
            cols.push(cand / C64::new(norm, 0.0));
        }
    }
    CMat::from_columns(&cols)
}

/// Frobenius distance.
pub fn frobenius_distance(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm()
}
