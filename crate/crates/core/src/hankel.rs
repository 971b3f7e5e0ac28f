//! Hankel-matrix builders and the scheduling-residual matrix of the
//! data-driven representation.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::signals::{DataDictionary, IndexSet, SchedulingTrajectory, Trajectory};

/// Block-Hankel matrix of a signal: column `j` is the vectorized length-`L`
/// window starting at time step `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelMatrix {
    data: DMatrix<f64>,
    depth: usize,
    source_channels: usize,
}

impl HankelMatrix {
    /// Builds the depth-`L` Hankel matrix of `signal`; needs `signal.len() >= depth >= 1`.
    pub fn build(signal: &Trajectory, depth: usize) -> Result<Self> {
        if depth == 0 || depth > signal.len() {
            return Err(Error::InvalidDepth {
                depth,
                len: signal.len(),
            });
        }
        let c = signal.n_channels();
        let n_cols = signal.len() - depth + 1;
        let mut data = DMatrix::zeros(depth * c, n_cols);
        for j in 0..n_cols {
            for b in 0..depth {
                data.view_mut((b * c, j), (c, 1))
                    .copy_from(&signal.values().column(b + j));
            }
        }
        Ok(Self {
            data,
            depth,
            source_channels: c,
        })
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn source_channels(&self) -> usize {
        self.source_channels
    }

    /// Keeps the rows addressed by `idx` (1-based over `depth * source_channels`).
    pub fn select_rows(&self, idx: &IndexSet) -> Result<DMatrix<f64>> {
        select_rows(&self.data, idx)
    }
}

/// Row selection for any matrix whose rows are addressed by `idx`;
/// `idx.universe()` must equal the row count.
pub fn select_rows(m: &DMatrix<f64>, idx: &IndexSet) -> Result<DMatrix<f64>> {
    if idx.universe() != m.nrows() {
        return Err(Error::LengthMismatch {
            what: "row-selection universe",
            expected: m.nrows(),
            actual: idx.universe(),
        });
    }
    let mut out = DMatrix::zeros(idx.len(), m.ncols());
    for (r, i) in idx.iter_zero_based().enumerate() {
        out.row_mut(r).copy_from(&m.row(i));
    }
    Ok(out)
}

/// Block-diagonal Kronecker operator: `blkdiag(p(1) ⊗ I_n, ..., p(T) ⊗ I_n)`,
/// a `(T * n_p * n) x (T * n)` matrix.
pub fn blockdiag_kron(p: &SchedulingTrajectory, n: usize) -> DMatrix<f64> {
    let (n_p, t) = (p.n_channels(), p.len());
    let mut out = DMatrix::zeros(t * n_p * n, t * n);
    for k in 0..t {
        for r in 0..n_p {
            let v = p.values()[(r, k)];
            for d in 0..n {
                out[(k * n_p * n + r * n + d, k * n + d)] = v;
            }
        }
    }
    out
}

/// The scheduling-residual matrix: Hankel of the lifted dictionary signal
/// minus the target-scheduling operator applied to the Hankel of `w`.
///
/// Column `j` stacks `(p_dict(k + j - 1) - p_target(k)) ⊗ w_dict(k + j - 1)`
/// over the window positions `k = 1..L`; a trajectory `H_L(w) g` is compatible
/// with `p_target` exactly when `g` annihilates this matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualMatrix {
    data: DMatrix<f64>,
}

impl ResidualMatrix {
    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn select_rows(&self, idx: &IndexSet) -> Result<DMatrix<f64>> {
        select_rows(&self.data, idx)
    }
}

/// Builds the residual matrix for a length-`L` target scheduling trajectory.
pub fn residual_matrix(
    dict: &DataDictionary,
    p_target: &SchedulingTrajectory,
    depth: usize,
) -> Result<ResidualMatrix> {
    if p_target.len() != depth {
        return Err(Error::LengthMismatch {
            what: "target scheduling trajectory",
            expected: depth,
            actual: p_target.len(),
        });
    }
    if p_target.n_channels() != dict.p().n_channels() {
        return Err(Error::ChannelMismatch {
            what: "target scheduling trajectory",
            expected: dict.p().n_channels(),
            actual: p_target.n_channels(),
        });
    }
    let h_lifted = HankelMatrix::build(&dict.lifted(), depth)?;
    let h_w = HankelMatrix::build(dict.w(), depth)?;
    let p_op = blockdiag_kron(p_target, dict.w().n_channels());
    Ok(ResidualMatrix {
        data: h_lifted.data - p_op * h_w.data,
    })
}

/// Vertical stack of the Hankel matrices of `w` and of the lifted signal,
/// the matrix whose rank is probed by the generalized persistency test.
pub fn scheduled_stack(dict: &DataDictionary, depth: usize) -> Result<DMatrix<f64>> {
    let top = HankelMatrix::build(dict.w(), depth)?;
    let bottom = HankelMatrix::build(&dict.lifted(), depth)?;
    let mut out = DMatrix::zeros(top.data.nrows() + bottom.data.nrows(), top.data.ncols());
    out.view_mut((0, 0), top.data.shape()).copy_from(&top.data);
    out.view_mut((top.data.nrows(), 0), bottom.data.shape())
        .copy_from(&bottom.data);
    Ok(out)
}
