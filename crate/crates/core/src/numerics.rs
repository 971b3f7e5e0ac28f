//! The small dense linear-algebra kernel behind every rank test and solver in
//! this crate: numerical rank, orthonormal null-space bases, minimum-norm
//! least squares, pseudoinverse application and equality-constrained quadratic
//! minimization.
//!
//! All routines share one tolerance convention: singular values are compared
//! against `rtol * sigma_max`, with `rtol` defaulting to
//! `max(rows, cols) * machine epsilon`. Condition checks and solvers therefore
//! cannot disagree about what counts as numerically zero.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};

/// Relative factor of the feasibility test: a least-squares residual below
/// `FEASIBILITY_RTOL * (1 + ||b||_2)` counts as consistent.
pub const FEASIBILITY_RTOL: f64 = 1e-8;

/// Default relative rank tolerance for an `rows x cols` matrix.
pub fn default_rtol(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}

/// Absolute residual threshold below which `A x = b` counts as consistent.
pub fn feasibility_tolerance(b: &DVector<f64>) -> f64 {
    FEASIBILITY_RTOL * (1.0 + b.norm())
}

/// Rank decision together with the spectrum it was made from.
#[derive(Debug, Clone, serde::Serialize)]
pub struct RankReport {
    pub rank: usize,
    /// Singular values in descending order.
    pub singular_values: Vec<f64>,
    /// Absolute threshold that separated zero from nonzero.
    pub tolerance_used: f64,
}

impl RankReport {
    /// True when the spectrum has no clear gap at the threshold: some kept or
    /// dropped singular value lies within a factor 10 of the tolerance.
    pub fn near_degenerate(&self) -> bool {
        self.singular_values.iter().any(|&s| {
            s > self.tolerance_used / 10.0 && s <= self.tolerance_used * 10.0
        })
    }
}

/// Minimum-norm least-squares solution of `A x = b`.
#[derive(Debug, Clone)]
pub struct LsSolution {
    pub solution: DVector<f64>,
    /// Attained minimum of `||A x - b||_2`.
    pub residual_norm: f64,
    /// Whether the residual is below [`feasibility_tolerance`].
    pub is_consistent: bool,
}

fn singular_values_of(a: &DMatrix<f64>) -> Vec<f64> {
    SVD::new(a.clone(), false, false).singular_values.iter().copied().collect()
}

/// Numerical rank of `A` from its singular values, thresholded at
/// `rtol * sigma_max` (default `rtol`: [`default_rtol`]).
pub fn numerical_rank(a: &DMatrix<f64>, rtol: Option<f64>) -> RankReport {
    let rtol = rtol.unwrap_or_else(|| default_rtol(a.nrows(), a.ncols()));
    if a.nrows() == 0 || a.ncols() == 0 {
        return RankReport {
            rank: 0,
            singular_values: Vec::new(),
            tolerance_used: 0.0,
        };
    }
    let mut sv = singular_values_of(a);
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let sigma_max = sv[0];
    let tol = rtol * sigma_max;
    let rank = sv.iter().filter(|&&s| s > tol).count();
    RankReport {
        rank,
        singular_values: sv,
        tolerance_used: tol,
    }
}

/// Orthonormal basis of the kernel of `A`, with `cols(A) - rank(A)` columns.
///
/// A full-column-rank input yields a basis with zero columns; a matrix with no
/// rows is treated as the zero map, whose kernel is all of `R^n`.
pub fn kernel_basis(a: &DMatrix<f64>, rtol: Option<f64>) -> DMatrix<f64> {
    let n = a.ncols();
    let rtol = rtol.unwrap_or_else(|| default_rtol(a.nrows(), a.ncols()));
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    // Pad with zero rows when the matrix is wide, so the thin SVD carries a
    // complete set of right singular vectors.
    let padded;
    let work = if a.nrows() < n {
        padded = {
            let mut p = DMatrix::zeros(n, n);
            p.view_mut((0, 0), a.shape()).copy_from(a);
            p
        };
        &padded
    } else {
        a
    };
    let svd = SVD::new(work.clone(), false, true);
    let v_t = svd.v_t.expect("SVD with v_t requested");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tol = rtol * sigma_max;
    let kept: Vec<usize> = (0..n)
        .filter(|&i| svd.singular_values.get(i).copied().unwrap_or(0.0) <= tol)
        .collect();
    let mut basis = DMatrix::zeros(n, kept.len());
    for (c, &i) in kept.iter().enumerate() {
        basis.column_mut(c).copy_from(&v_t.row(i).transpose());
    }
    basis
}

/// Minimum-2-norm minimizer of `||A x - b||_2` via the singular value
/// decomposition, with consistency decided by [`feasibility_tolerance`].
///
/// The computed solution is polished by Newton steps on the normal-equations
/// residual, `delta = (A'A)^+ A'(b - A x)`, reusing the decomposition; each
/// step is kept only if it shrinks that residual. This recovers the digits a
/// plain SVD solve loses on ill-conditioned inconsistent systems.
pub fn minnorm_lstsq(a: &DMatrix<f64>, b: &DVector<f64>, rtol: Option<f64>) -> Result<LsSolution> {
    if a.nrows() != b.len() {
        return Err(Error::LengthMismatch {
            what: "least-squares right-hand side",
            expected: a.nrows(),
            actual: b.len(),
        });
    }
    let solution = if a.nrows() == 0 || a.ncols() == 0 {
        DVector::zeros(a.ncols())
    } else {
        let rtol = rtol.unwrap_or_else(|| default_rtol(a.nrows(), a.ncols()));
        let svd = SVD::new(a.clone(), true, true);
        let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let threshold = rtol * sigma_max;
        let sol = svd
            .solve(b, threshold)
            .expect("SVD was computed with both factors");
        let mut x = DVector::from(sol.column(0).into_owned());

        let v_t = svd.v_t.as_ref().expect("v_t computed");
        let inv_sq: Vec<f64> = svd
            .singular_values
            .iter()
            .map(|&s| if s > threshold { 1.0 / (s * s) } else { 0.0 })
            .collect();
        let gram_pinv_apply = |s: &DVector<f64>| {
            let mut coeffs = v_t * s;
            for (i, c) in coeffs.iter_mut().enumerate() {
                *c *= inv_sq[i];
            }
            v_t.transpose() * coeffs
        };
        let mut kkt_residual = a.transpose() * (b - a * &x);
        for _ in 0..2 {
            let candidate = &x + gram_pinv_apply(&kkt_residual);
            let next_residual = a.transpose() * (b - a * &candidate);
            if next_residual.norm() < kkt_residual.norm() {
                x = candidate;
                kkt_residual = next_residual;
            } else {
                break;
            }
        }
        x
    };
    let residual_norm = (a * &solution - b).norm();
    Ok(LsSolution {
        is_consistent: residual_norm <= feasibility_tolerance(b),
        solution,
        residual_norm,
    })
}

/// Applies the pseudoinverse: returns `A^+ b` with singular values below
/// `rtol * sigma_max` treated as zero.
pub fn apply_pinv(a: &DMatrix<f64>, b: &DVector<f64>, rtol: Option<f64>) -> Result<DVector<f64>> {
    Ok(minnorm_lstsq(a, b, rtol)?.solution)
}

/// Symmetric PSD square root `S` of `W` plus `S^+ c`, both through one
/// eigendecomposition. Eigenvalues below the rank threshold (including small
/// negative noise) are treated as zero.
fn psd_sqrt_apply(
    w: &DMatrix<f64>,
    c: &DVector<f64>,
    rtol: Option<f64>,
) -> (DMatrix<f64>, DVector<f64>) {
    let n = w.nrows();
    let sym = (w + w.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let scale = eig.eigenvalues.amax();
    let tol = rtol.unwrap_or_else(|| default_rtol(n, n)) * scale;
    let roots = eig.eigenvalues.map(|l| if l > tol { l.sqrt() } else { 0.0 });
    let sqrt = &eig.eigenvectors
        * DMatrix::from_diagonal(&roots)
        * eig.eigenvectors.transpose();
    let inv_roots = roots.map(|r| if r > 0.0 { 1.0 / r } else { 0.0 });
    let applied = &eig.eigenvectors
        * (DMatrix::from_diagonal(&inv_roots) * (eig.eigenvectors.transpose() * c));
    (sqrt, applied)
}

/// Minimizes `||G x - d||_2` subject to `A x = b` by the null-space method:
/// `x = x_p + Z z*` with `x_p` the minimum-norm particular solution, `Z` an
/// orthonormal kernel basis of `A`, and `z*` the minimum-norm least-squares
/// solution in the reduced factor `G Z`.
///
/// This is the square-root form of an equality-constrained quadratic program
/// with Hessian `G' G`; keeping the factor avoids squaring its conditioning.
/// A constraint matrix with no rows means the problem is unconstrained;
/// inconsistent constraints are an error.
pub fn eq_constrained_lsq(
    g: &DMatrix<f64>,
    d: &DVector<f64>,
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    rtol: Option<f64>,
) -> Result<DVector<f64>> {
    let n = g.ncols();
    if d.len() != g.nrows() {
        return Err(Error::LengthMismatch {
            what: "factored objective target",
            expected: g.nrows(),
            actual: d.len(),
        });
    }
    if a.nrows() == 0 {
        return Ok(minnorm_lstsq(g, d, rtol)?.solution);
    }
    if a.ncols() != n {
        return Err(Error::LengthMismatch {
            what: "constraint matrix columns",
            expected: n,
            actual: a.ncols(),
        });
    }
    let particular = minnorm_lstsq(a, b, rtol)?;
    if !particular.is_consistent {
        return Err(Error::InfeasibleConstraints {
            residual: particular.residual_norm,
            tolerance: feasibility_tolerance(b),
        });
    }
    let x_p = particular.solution;
    let z = kernel_basis(a, rtol);
    if z.ncols() == 0 {
        return Ok(x_p);
    }
    let reduced = g * &z;
    let rhs = d - g * &x_p;
    let z_opt = minnorm_lstsq(&reduced, &rhs, rtol)?.solution;
    Ok(x_p + z * z_opt)
}

/// Minimizes `x' W x - 2 c' x` subject to `A x = b` by the null-space method.
///
/// `W` must be symmetric positive semidefinite. A constraint matrix with no
/// rows means the problem is unconstrained. Inconsistent constraints are an
/// error; a singular reduced Hessian is not: the minimum-norm reduced
/// solution is used, which for an objective unbounded below on the feasible
/// set means the linear-term component along the reduced kernel is ignored
/// and a stationary point of the remaining quadratic comes back.
///
/// Internally the objective is factored through `S = W^{1/2}`: on the
/// feasible set it equals `||S x - S^+ c||^2` up to a constant plus a linear
/// term from any component of `c` outside `range(W)`, so the solve delegates
/// to [`eq_constrained_lsq`]. Callers that already hold the objective in
/// factored form should call that function directly; it is more accurate than
/// first squaring into `W`.
pub fn eq_constrained_qp(
    w: &DMatrix<f64>,
    c: &DVector<f64>,
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    rtol: Option<f64>,
) -> Result<DVector<f64>> {
    let n = w.nrows();
    if w.ncols() != n {
        return Err(Error::LengthMismatch {
            what: "quadratic weight columns",
            expected: n,
            actual: w.ncols(),
        });
    }
    if c.len() != n {
        return Err(Error::LengthMismatch {
            what: "linear cost term",
            expected: n,
            actual: c.len(),
        });
    }
    let (sqrt_w, target) = psd_sqrt_apply(w, c, rtol);
    let x = eq_constrained_lsq(&sqrt_w, &target, a, b, rtol)?;
    if a.nrows() == 0 {
        return Ok(x);
    }
    // the square-root form only sees the range(W) part of the linear term;
    // fold a component outside it back in when one is present
    let c_perp = c - &sqrt_w * &target;
    let z = kernel_basis(a, rtol);
    if z.ncols() == 0 {
        return Ok(x);
    }
    let kernel_term = z.transpose() * c_perp;
    if kernel_term.norm() > FEASIBILITY_RTOL * (1.0 + c.norm()) {
        let reduced = &sqrt_w * &z;
        let h_red = reduced.transpose() * &reduced;
        let correction = minnorm_lstsq(&h_red, &kernel_term, rtol)?.solution;
        return Ok(x + z * correction);
    }
    Ok(x)
}
