//! Dense real nonsymmetric eigensolver with residual verification.
//!
//! Hessenberg reduction and shifted QR come from `faer`; this module owns
//! the contract on top of it: every returned pair is checked against the
//! input matrix and rejected if its relative residual exceeds
//! [`RESIDUAL_TOLERANCE`].

use faer::linalg::solvers::Eigen;
use faer::{Mat, MatRef};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Bound on `||A v - lambda v||_inf / (||A||_inf ||v||_inf)` for every pair.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<Complex64>,
    /// Column `j` is the right eigenvector for `eigenvalues[j]`.
    pub eigenvectors: Mat<Complex64>,
    pub residuals: Vec<f64>,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Copy of eigenvector `j`.
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.eigenvectors.col(j).iter().copied().collect()
    }
}

/// All eigenpairs of a real square matrix, in no particular order.
pub fn eig(a: MatRef<'_, f64>) -> Result<EigenDecomposition> {
    let k = a.nrows();
    if k == 0 || a.ncols() != k {
        return Err(Error::InvalidParameter {
            name: "A",
            reason: format!("expected a non-empty square matrix, got {}x{}", k, a.ncols()),
        });
    }
    for j in 0..k {
        for i in 0..k {
            if !a[(i, j)].is_finite() {
                return Err(Error::NonFinite {
                    what: "eigenproblem matrix",
                    index: (i * k + j) as i64,
                });
            }
        }
    }

    let evd = Eigen::new_from_real(a).map_err(|_| Error::NoConvergence)?;
    let eigenvalues: Vec<Complex64> = evd.S().column_vector().iter().copied().collect();
    let eigenvectors = evd.U().to_owned();
    let residuals = residuals(a, &eigenvalues, eigenvectors.as_ref());

    for (j, (&r, &v)) in residuals.iter().zip(&eigenvalues).enumerate() {
        if r.is_nan() || r > RESIDUAL_TOLERANCE || !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::Residual {
                index: j,
                residual: r,
                tolerance: RESIDUAL_TOLERANCE,
            });
        }
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
        residuals,
    })
}

/// Relative residual of each pair, using two real products `A Re(V)` and `A Im(V)`.
pub fn residuals(a: MatRef<'_, f64>, values: &[Complex64], vectors: MatRef<'_, Complex64>) -> Vec<f64> {
    let k = a.nrows();
    let re = Mat::from_fn(k, vectors.ncols(), |i, j| vectors[(i, j)].re);
    let im = Mat::from_fn(k, vectors.ncols(), |i, j| vectors[(i, j)].im);
    let a_re = a * &re;
    let a_im = a * &im;
    let a_norm = inf_norm(a);

    (0..vectors.ncols())
        .map(|j| {
            let lam = values[j];
            let mut res: f64 = 0.0;
            let mut vnorm: f64 = 0.0;
            for i in 0..k {
                let v = vectors[(i, j)];
                let av = Complex64::new(a_re[(i, j)], a_im[(i, j)]);
                res = res.max((av - lam * v).norm());
                vnorm = vnorm.max(v.norm());
            }
            if vnorm == 0.0 {
                f64::INFINITY
            } else if a_norm == 0.0 {
                // Zero matrix: every nonzero vector is exact.
                res / vnorm
            } else {
                res / (a_norm * vnorm)
            }
        })
        .collect()
}

/// Maximum absolute row sum.
pub fn inf_norm(a: MatRef<'_, f64>) -> f64 {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn identity_spectrum() {
        let e = eig(Mat::<f64>::identity(3, 3).as_ref()).unwrap();
        for v in &e.eigenvalues {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn diagonal_spectrum() {
        let d = [2.0, -1.0, 0.5];
        let a = Mat::from_fn(3, 3, |i, j| if i == j { d[i] } else { 0.0 });
        let e = sorted(eig(a.as_ref()).unwrap().eigenvalues);
        for (got, want) in e.iter().zip([-1.0, 0.5, 2.0]) {
            assert!((got - Complex64::new(want, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn rotation_generator() {
        let a = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => 1.0,
            (1, 0) => -1.0,
            _ => 0.0,
        });
        let e = sorted(eig(a.as_ref()).unwrap().eigenvalues);
        assert!((e[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((e[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        let a = Mat::from_fn(2, 2, |i, _| if i == 0 { f64::NAN } else { 1.0 });
        assert!(matches!(eig(a.as_ref()), Err(Error::NonFinite { .. })));
        assert!(eig(Mat::<f64>::zeros(0, 0).as_ref()).is_err());
        assert!(eig(Mat::<f64>::zeros(2, 3).as_ref()).is_err());
    }

    #[test]
    fn zero_matrix_is_fine() {
        let e = eig(Mat::<f64>::zeros(4, 4).as_ref()).unwrap();
        assert!(e.eigenvalues.iter().all(|v| v.norm() < 1e-15));
    }
}
