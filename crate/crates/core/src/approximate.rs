//! Weighted least-squares approximation onto the behavior for given points
//! that are not consistent with it, with an explicit pseudoinverse-based
//! solution.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::hankel::{residual_matrix, select_rows, HankelMatrix};
use crate::interpolate::InterpolationProblem;
use crate::numerics::{apply_pinv, kernel_basis, numerical_rank};
use crate::signals::{select, DataDictionary, SchedulingTrajectory, Trajectory};

/// Symmetric positive definite weighting of the approximation error.
#[derive(Debug, Clone)]
pub struct WeightMatrix {
    m: DMatrix<f64>,
}

impl WeightMatrix {
    /// Validates symmetry (to 1e-12 relative) and positive definiteness.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::LengthMismatch {
                what: "weight matrix columns",
                expected: m.nrows(),
                actual: m.ncols(),
            });
        }
        let scale = m.abs().max().max(1.0);
        let max_asymmetry = (&m - m.transpose()).abs().max();
        if max_asymmetry > 1e-12 * scale {
            return Err(Error::NotSymmetric { max_asymmetry });
        }
        let eigenvalues = SymmetricEigen::new(m.clone()).eigenvalues;
        let min_eigenvalue = eigenvalues.min();
        if min_eigenvalue <= 0.0 {
            return Err(Error::NotPositiveDefinite { min_eigenvalue });
        }
        Ok(Self { m })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            m: DMatrix::identity(k, k),
        }
    }

    /// Diagonal weight from strictly positive entries.
    pub fn from_diagonal(diag: &DVector<f64>) -> Result<Self> {
        if let Some(&bad) = diag.iter().find(|&&d| d <= 0.0 || !d.is_finite()) {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: bad,
            });
        }
        Ok(Self {
            m: DMatrix::from_diagonal(diag),
        })
    }

    pub fn k(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// Symmetric positive definite square root via eigendecomposition.
    pub fn sqrt(&self) -> DMatrix<f64> {
        let eig = SymmetricEigen::new(self.m.clone());
        let roots = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
        &eig.eigenvectors * roots * eig.eigenvectors.transpose()
    }

    /// Weighted norm `sqrt(d' M d)`.
    pub fn norm(&self, d: &DVector<f64>) -> f64 {
        (d.transpose() * &self.m * d)[(0, 0)].max(0.0).sqrt()
    }
}

/// Orthonormal basis of the finite-horizon behavior for `p_target`: the image
/// of the Hankel matrix on the kernel of the scheduling residual. Under
/// persistency of excitation the column count is `order + n_inputs * horizon`.
pub fn behavior_basis(
    dict: &DataDictionary,
    p_target: &SchedulingTrajectory,
    horizon: usize,
    rtol: Option<f64>,
) -> Result<DMatrix<f64>> {
    let n_mat = residual_matrix(dict, p_target, horizon)?;
    let basis = kernel_basis(n_mat.data(), rtol);
    let h = HankelMatrix::build(dict.w(), horizon)?;
    let image = h.data() * basis;
    if image.ncols() == 0 {
        return Ok(DMatrix::zeros(image.nrows(), 0));
    }
    // orthonormalize the image through its left singular vectors
    let svd = nalgebra::SVD::new(image.clone(), true, false);
    let u = svd.u.expect("SVD with u requested");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tol = rtol
        .unwrap_or_else(|| crate::numerics::default_rtol(image.nrows(), image.ncols()))
        * sigma_max;
    let kept: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > tol)
        .collect();
    let mut out = DMatrix::zeros(image.nrows(), kept.len());
    for (c, &i) in kept.iter().enumerate() {
        out.column_mut(c).copy_from(&u.column(i));
    }
    Ok(out)
}

/// Result of [`approximate`].
#[derive(Debug, Clone)]
pub struct ApproximationResult {
    pub trajectory: Trajectory,
    /// Attained weighted error `sqrt((w~ - w)' M (w~ - w))` on the given rows.
    pub weighted_error: f64,
}

/// Finds the behavior trajectory whose given entries are closest to the given
/// values in the `M`-weighted 2-norm.
///
/// The trajectory is reconstructed as `B a` with `B` the behavior basis and
/// `a = (M^{1/2} B|_given)^+ M^{1/2} w_given`; with consistent data the error
/// vanishes and the interpolant is recovered.
pub fn approximate(
    prob: &InterpolationProblem,
    weight: &WeightMatrix,
    rtol: Option<f64>,
) -> Result<ApproximationResult> {
    if weight.k() != prob.given().len() {
        return Err(Error::LengthMismatch {
            what: "weight matrix size",
            expected: prob.given().len(),
            actual: weight.k(),
        });
    }
    let basis = behavior_basis(prob.dict(), prob.p_target(), prob.horizon(), rtol)?;
    let m_half = weight.sqrt();
    let basis_given = select_rows(&basis, prob.given())?;
    let coeffs = apply_pinv(&(&m_half * basis_given), &(&m_half * prob.w_given()), rtol)?;
    let vec_w = DVector::from(&basis * coeffs);
    let trajectory = Trajectory::from_vector(&vec_w, prob.structure().n_w)?;
    let deviation = select(&vec_w, prob.given())? - prob.w_given();
    Ok(ApproximationResult {
        trajectory,
        weighted_error: weight.norm(&deviation),
    })
}

/// Dimension of the span reachable for this target scheduling; exposed for
/// diagnostics.
pub fn behavior_dimension(
    dict: &DataDictionary,
    p_target: &SchedulingTrajectory,
    horizon: usize,
    rtol: Option<f64>,
) -> Result<usize> {
    let basis = behavior_basis(dict, p_target, horizon, rtol)?;
    Ok(numerical_rank(&basis, rtol).rank)
}
