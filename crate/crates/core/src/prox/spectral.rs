use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use super::{project_simplex, prox_l1_l2ball};
use crate::error::{Error, Result};

const FACTOR_EPS: f64 = f64::EPSILON;

/// `left * diag(values) * right^T`, with `values` sorted in non-increasing order.
///
/// For an eigendecomposition `left == right`.
#[derive(Debug, Clone)]
pub struct SpectralFactorization {
    pub left: DMatrix<f64>,
    pub values: DVector<f64>,
    pub right: DMatrix<f64>,
}

impl SpectralFactorization {
    pub fn shape(&self) -> (usize, usize) {
        (self.left.nrows(), self.right.nrows())
    }

    /// Rebuilds the matrix with `values` replaced by `new_values`.
    pub fn recompose_with(&self, new_values: &[f64]) -> DMatrix<f64> {
        let mut scaled = self.left.clone();
        for (j, &s) in new_values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(s);
        }
        scaled * self.right.transpose()
    }

    pub fn recompose(&self) -> DMatrix<f64> {
        self.recompose_with(self.values.as_slice())
    }
}

fn check_finite(z: &DMatrix<f64>) -> Result<()> {
    if z.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Factorization("input has non-finite entries".into()))
    }
}

fn iteration_cap(z: &DMatrix<f64>) -> usize {
    1000 * z.nrows().max(z.ncols()).max(1)
}

/// Eigendecomposition of the symmetric part of `z`, eigenvalues descending.
pub fn symmetric_factorization(z: &DMatrix<f64>) -> Result<SpectralFactorization> {
    if z.nrows() != z.ncols() {
        return Err(Error::Dimension {
            expected: z.nrows(),
            got: z.ncols(),
        });
    }
    check_finite(z)?;
    let sym = (z + z.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, FACTOR_EPS, iteration_cap(z))
        .ok_or_else(|| Error::Factorization("symmetric eigensolver did not converge".into()))?;
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(SpectralFactorization {
        left: vectors.clone(),
        values,
        right: vectors,
    })
}

/// Thin singular value decomposition, singular values descending.
pub fn singular_factorization(z: &DMatrix<f64>) -> Result<SpectralFactorization> {
    check_finite(z)?;
    let svd = SVD::try_new(z.clone(), true, true, FACTOR_EPS, iteration_cap(z))
        .ok_or_else(|| Error::Factorization("SVD did not converge".into()))?;
    let left = svd
        .u
        .ok_or_else(|| Error::Factorization("missing U".into()))?;
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Factorization("missing V^T".into()))?;
    Ok(SpectralFactorization {
        left,
        values: svd.singular_values,
        right: v_t.transpose(),
    })
}

/// Projection onto the spectraplex `{Z PSD, tr Z = 1}`.
pub fn project_spectraplex(z: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let fac = symmetric_factorization(z)?;
    let projected = project_simplex(fac.values.as_slice());
    Ok(symmetrize(fac.recompose_with(&projected)))
}

/// Projection onto `{Z PSD, ||Z||_F <= 1}`: clip negative eigenvalues, then
/// scale down when the result lies outside the unit ball.
pub fn project_psd_unit_ball(z: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let fac = symmetric_factorization(z)?;
    let clipped: Vec<f64> = fac.values.iter().map(|&v| v.max(0.0)).collect();
    let norm = clipped.iter().map(|v| v * v).sum::<f64>().sqrt();
    let scaled: Vec<f64> = clipped.iter().map(|v| v / norm.max(1.0)).collect();
    Ok(symmetrize(fac.recompose_with(&scaled)))
}

/// Projects onto the PSD cone and rescales to unit Frobenius norm.
///
/// A matrix with no positive spectrum maps to `I / ||I||_F`.
pub fn project_psd_unit_sphere(z: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = z.nrows();
    let fac = symmetric_factorization(z)?;
    let clipped: Vec<f64> = fac.values.iter().map(|&v| v.max(0.0)).collect();
    let norm = clipped.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Ok(DMatrix::identity(n, n) / (n as f64).sqrt());
    }
    let scaled: Vec<f64> = clipped.iter().map(|v| v / norm).collect();
    Ok(symmetrize(fac.recompose_with(&scaled)))
}

/// Prox of `lam * ||Z||_* + indicator(||Z||_F <= radius)`.
pub fn prox_nuclear_ball(z: &DMatrix<f64>, lam: f64, radius: f64) -> Result<DMatrix<f64>> {
    if !(lam >= 0.0) || !(radius > 0.0) {
        return Err(Error::invalid(format!(
            "prox_nuclear_ball needs lam >= 0 and radius > 0 (got {lam}, {radius})"
        )));
    }
    let fac = singular_factorization(z)?;
    let shrunk = prox_l1_l2ball(fac.values.as_slice(), lam, radius);
    Ok(fac.recompose_with(&shrunk))
}

fn symmetrize(z: DMatrix<f64>) -> DMatrix<f64> {
    (&z + z.transpose()) * 0.5
}
