//! Dense complex linear algebra on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::textfmt::format_complex;

pub type CMatrix = DMatrix<Complex64>;

/// Negative eigenvalues above this are rounding noise and get clamped to zero.
pub const EIGEN_CLAMP: f64 = -1e-12;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(k: usize) -> CMatrix {
    CMatrix::identity(k, k)
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Symmetrizes `m` as `(m + m*)/2` so the eigensolver sees an exactly Hermitian input.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(hermitian_part(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(f64::INFINITY)
}

/// Positive square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues in `[EIGEN_CLAMP, 0)` are treated as zero; anything lower is
/// reported as [`Error::NotInDomain`] with the offending eigenvalue.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let h = hermitian_part(m);
    if is_diagonal(&h) {
        let mut out = CMatrix::zeros(h.nrows(), h.ncols());
        for i in 0..h.nrows() {
            out[(i, i)] = c(clamped_sqrt(h[(i, i)].re)?, 0.0);
        }
        return Ok(out);
    }
    let eig = SymmetricEigen::new(h);
    let roots = eig
        .eigenvalues
        .iter()
        .map(|&l| clamped_sqrt(l))
        .collect::<Result<Vec<f64>>>()?;
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, &r) in roots.iter().enumerate() {
        scaled.column_mut(j).scale_mut(r);
    }
    Ok(scaled * v.adjoint())
}

fn clamped_sqrt(l: f64) -> Result<f64> {
    if l < EIGEN_CLAMP {
        Err(Error::NotInDomain { margin: l })
    } else {
        Ok(l.max(0.0).sqrt())
    }
}

fn is_diagonal(m: &CMatrix) -> bool {
    (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)] == Complex64::new(0.0, 0.0)))
}

/// One line per row, entries as `re+imI` separated by spaces.
pub fn format_matrix_rows(m: &CMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|col| format_complex(m[(r, col)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> Result<f64> {
    if !is_finite(m) {
        return Err(Error::NonFinite);
    }
    if m.is_empty() {
        return Ok(0.0);
    }
    let sv = m.clone().svd(false, false).singular_values;
    Ok(sv.iter().copied().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_of_simple_matrices() {
        assert_eq!(spectral_norm(&CMatrix::zeros(3, 3)).unwrap(), 0.0);
        assert!((spectral_norm(&identity(4)).unwrap() - 1.0).abs() < 1e-15);
        let m = CMatrix::from_row_slice(2, 2, &[c(3.0, 0.0), c(0.0, 4.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!((spectral_norm(&m).unwrap() - 5.0).abs() < 1e-14);
        let mut bad = identity(2);
        bad[(0, 1)] = c(f64::NAN, 0.0);
        assert_eq!(spectral_norm(&bad), Err(Error::NonFinite));
    }

    #[test]
    fn sqrt_of_psd() {
        let a = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let r = psd_sqrt(&a).unwrap();
        assert!((&r * &r - &a).norm() < 1e-13);
        assert!((&r - r.adjoint()).norm() < 1e-14);
        let neg = CMatrix::from_diagonal_element(2, 2, c(-0.1, 0.0));
        assert!(matches!(psd_sqrt(&neg), Err(Error::NotInDomain { .. })));
        let tiny = CMatrix::from_diagonal_element(2, 2, c(-1e-14, 0.0));
        assert_eq!(psd_sqrt(&tiny).unwrap(), CMatrix::zeros(2, 2));
    }

    #[test]
    fn eigenvalues_sorted() {
        let a = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        let ev = hermitian_eigenvalues(&a);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }
}
