//! Hermitian eigendecomposition with deterministic output conventions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::peak_index;

/// Relative tolerance under which two eigenvalues count as degenerate.
/// Eigenvalues closer than this times the largest magnitude count as equal.
pub const DEGENERACY_TOL: f64 = 1e-10;
const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 0; // nalgebra: 0 means no limit

/// Eigenpairs sorted by descending eigenvalue.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Unit-norm columns (Euclidean norm), one per eigenvalue.
    pub vectors: Vec<DVector<Complex64>>,
}

/// Largest `|H_ij − conj(H_ji)|`.
pub fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.norm()))
}

/// Fails if `m` is not Hermitian to `rel_tol` relative to its largest entry.
pub fn check_hermitian(m: &DMatrix<Complex64>, rel_tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let deviation = hermiticity_deviation(m);
    if deviation > rel_tol * max_abs(m).max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Rotates `v` so its largest-magnitude entry is real and positive.
pub fn fix_phase(v: &mut DVector<Complex64>) {
    let i = peak_index(v.as_slice());
    let peak = v[i];
    if peak.norm() > 0.0 {
        let phase = peak.conj() / peak.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized before solving; real-valued input goes through
/// the real symmetric solver. Output conventions: eigenvalues descending
/// up to [`DEGENERACY_TOL`], each eigenvector's largest entry real positive,
/// runs of numerically equal eigenvalues ordered by the index of their
/// eigenvector's peak.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> Result<HermitianEigen> {
    check_hermitian(m, 1e-10)?;
    let n = m.nrows();
    let is_real = m.iter().all(|v| v.im == 0.0);

    let (values, vectors): (Vec<f64>, Vec<DVector<Complex64>>) = if is_real {
        let sym = DMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)].re + m[(j, i)].re));
        let eig = sym
            .try_symmetric_eigen(EIGEN_EPS, EIGEN_MAX_ITER)
            .ok_or(Error::NoConvergence)?;
        let vectors = (0..n)
            .map(|c| eig.eigenvectors.column(c).map(|x| Complex64::new(x, 0.0)))
            .collect();
        (eig.eigenvalues.iter().copied().collect(), vectors)
    } else {
        let herm = DMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
        let eig = herm
            .try_symmetric_eigen(EIGEN_EPS, EIGEN_MAX_ITER)
            .ok_or(Error::NoConvergence)?;
        let vectors = (0..n).map(|c| eig.eigenvectors.column(c).into_owned()).collect();
        (eig.eigenvalues.iter().copied().collect(), vectors)
    };

    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoConvergence);
    }

    let mut pairs: Vec<(f64, DVector<Complex64>)> = values
        .into_iter()
        .zip(vectors)
        .map(|(value, mut vector)| {
            fix_phase(&mut vector);
            (value, vector)
        })
        .collect();

    let scale = pairs.iter().fold(0.0f64, |acc, (v, _)| acc.max(v.abs()));
    let tol = DEGENERACY_TOL * scale.max(f64::MIN_POSITIVE);
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));

    // Within each run of numerically equal eigenvalues, order pairs by peak.
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[start].0 - pairs[end].0 <= tol {
            end += 1;
        }
        pairs[start..end].sort_by_key(|(_, v)| peak_index(v.as_slice()));
        start = end;
    }
    let (values, vectors) = pairs.into_iter().unzip();
    Ok(HermitianEigen { values, vectors })
}
