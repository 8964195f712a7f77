//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 0;

/// All eigenvalues of a square complex matrix, read off the diagonal of its
/// complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::InvalidArgument("eigenvalues need a square matrix".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let schur = nalgebra::Schur::try_new(m.clone(), SCHUR_EPS, SCHUR_MAX_ITER).ok_or(Error::EigenFailure)?;
    let (_, t) = schur.unpack();
    let vals: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    if vals.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::EigenFailure);
    }
    Ok(vals)
}

/// Real eigenvalues (ascending) and unitary eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..h.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(h.nrows(), h.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    hermitian_eigen(h).0
}

/// `exp(c H)` for Hermitian `H`, through its eigendecomposition. With `c`
/// purely imaginary the result is unitary up to rounding.
pub fn expm_hermitian(h: &CMatrix, c: Complex64) -> CMatrix {
    let (vals, v) = hermitian_eigen(h);
    let mut scaled = v.clone();
    for (j, &w) in vals.iter().enumerate() {
        let f = (c * w).exp();
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= f;
        }
    }
    scaled * v.adjoint()
}

/// Maximum absolute row sum.
pub fn norm_inf(m: &CMatrix) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `‖M M† − I‖_∞`.
pub fn unitarity_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    norm_inf(&(m * m.adjoint() - CMatrix::identity(n, n)))
}

/// `‖M − M†‖_∞`.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    norm_inf(&(m - m.adjoint()))
}

/// Coefficients (ascending) of `∏ (z − λ_i)`.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, &a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        c = next;
    }
    c
}

/// Determinant by LU with partial pivoting.
pub fn determinant(m: &CMatrix) -> Complex64 {
    if m.nrows() == 0 {
        return Complex64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn schur_eigenvalues_of_diagonal_and_triangular() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(5.0, 1.0), c(0.0, 0.0), c(0.0, 2.0)]);
        let mut ev = eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((ev[0] - c(1.0, 0.0)).norm() < 1e-13);
        assert!((ev[1] - c(0.0, 2.0)).norm() < 1e-13);

        let id = CMatrix::identity(4, 4);
        for v in eigenvalues(&id).unwrap() {
            assert!((v - c(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn eigenvalues_match_trace_and_determinant() {
        let m = CMatrix::from_fn(5, 5, |r, k| c(((r * 7 + k * 3) % 5) as f64 - 2.0, (r as f64 - k as f64) * 0.3));
        let ev = eigenvalues(&m).unwrap();
        let tr: Complex64 = ev.iter().sum();
        let det: Complex64 = ev.iter().product();
        assert!((tr - m.trace()).norm() < 1e-10);
        assert!((det - determinant(&m)).norm() < 1e-9 * det.norm().max(1.0));
    }

    #[test]
    fn hermitian_exponential_is_unitary() {
        let h = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, -0.5), c(0.5, 0.5), c(-2.0, 0.0)]);
        assert!(hermiticity_residual(&h) == 0.0);
        let u = expm_hermitian(&h, c(0.0, -0.7));
        assert!(unitarity_residual(&u) < 1e-14);
        let vals = hermitian_eigenvalues(&h);
        assert!(vals[0] < vals[1]);
    }

    #[test]
    fn expm_of_pauli_x() {
        let x = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let th: f64 = 0.4;
        let u = expm_hermitian(&x, c(0.0, -th));
        assert!((u[(0, 0)] - c(th.cos(), 0.0)).norm() < 1e-14);
        assert!((u[(0, 1)] - c(0.0, -th.sin())).norm() < 1e-14);
    }

    #[test]
    fn roots_to_coefficients() {
        let p = poly_from_roots(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(p, vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }
}
