//! Trajectory and index-set data model.
//!
//! A [`Trajectory`] is a finite sequence of vector-valued samples stored as an
//! `n_w x T` matrix whose column `k` is the sample at time step `k`. Its
//! vectorized form stacks the samples in time order with channels varying
//! fastest, so the entry at (1-based) position `(k - 1) * n_w + i` is channel
//! `i` of sample `k`. [`IndexSet`] values address positions of that vectorized
//! layout and are 1-based on every public surface; the zero-based internals
//! never leak out of this module.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

fn check_finite(values: &DMatrix<f64>, what: &'static str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// A finite manifest-variable signal: `n_w` channels over `T` time samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    values: DMatrix<f64>,
}

impl Trajectory {
    /// Wraps an `n_w x T` matrix; column `k` is the sample at step `k`.
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::EmptyTrajectory);
        }
        check_finite(&values, "trajectory")?;
        Ok(Self { values })
    }

    /// All-zero trajectory with `n_channels` channels and `len` samples.
    pub fn zeros(n_channels: usize, len: usize) -> Self {
        assert!(n_channels > 0 && len > 0, "trajectory dimensions must be positive");
        Self {
            values: DMatrix::zeros(n_channels, len),
        }
    }

    /// Rebuilds a trajectory from its vectorized form (time-major,
    /// channel-minor). Inverse of [`Trajectory::vectorize`].
    pub fn from_vector(v: &DVector<f64>, n_channels: usize) -> Result<Self> {
        if n_channels == 0 || v.len() % n_channels != 0 {
            return Err(Error::LengthNotDivisible {
                len: v.len(),
                n_w: n_channels,
            });
        }
        Self::new(DMatrix::from_column_slice(
            n_channels,
            v.len() / n_channels,
            v.as_slice(),
        ))
    }

    /// Stacks the samples into a single vector of length `T * n_w`.
    pub fn vectorize(&self) -> DVector<f64> {
        DVector::from_column_slice(self.values.as_slice())
    }

    pub fn n_channels(&self) -> usize {
        self.values.nrows()
    }

    /// Number of time samples `T`.
    pub fn len(&self) -> usize {
        self.values.ncols()
    }

    pub fn is_empty(&self) -> bool {
        false // a constructed trajectory always has at least one sample
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// Sample at zero-based time step `k`.
    pub fn sample(&self, k: usize) -> DVector<f64> {
        DVector::from(self.values.column(k))
    }

    /// Largest entrywise deviation from `other`; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Trajectory) -> f64 {
        assert_eq!(self.values.shape(), other.values.shape());
        (&self.values - &other.values).abs().max()
    }
}

/// A finite scheduling signal, optionally constrained to a box `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchedulingTrajectory {
    values: DMatrix<f64>,
    bounds: Option<Vec<(f64, f64)>>,
}

impl SchedulingTrajectory {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::EmptyTrajectory);
        }
        check_finite(&values, "scheduling trajectory")?;
        Ok(Self {
            values,
            bounds: None,
        })
    }

    /// Attaches per-channel interval bounds and verifies every sample lies
    /// inside them.
    pub fn with_bounds(values: DMatrix<f64>, bounds: Vec<(f64, f64)>) -> Result<Self> {
        let traj = Self::new(values)?;
        if bounds.len() != traj.n_channels() {
            return Err(Error::ChannelMismatch {
                what: "scheduling bounds",
                expected: traj.n_channels(),
                actual: bounds.len(),
            });
        }
        for (k, col) in traj.values.column_iter().enumerate() {
            for (c, &(lo, hi)) in bounds.iter().enumerate() {
                if col[c] < lo || col[c] > hi {
                    return Err(Error::SchedulingOutOfBounds {
                        sample: k + 1,
                        channel: c + 1,
                    });
                }
            }
        }
        Ok(Self {
            bounds: Some(bounds),
            ..traj
        })
    }

    /// Repeats one sample `len` times.
    pub fn constant(sample: &DVector<f64>, len: usize) -> Result<Self> {
        let mut values = DMatrix::zeros(sample.len(), len);
        for mut col in values.column_iter_mut() {
            col.copy_from(sample);
        }
        Self::new(values)
    }

    pub fn n_channels(&self) -> usize {
        self.values.nrows()
    }

    pub fn len(&self) -> usize {
        self.values.ncols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn bounds(&self) -> Option<&[(f64, f64)]> {
        self.bounds.as_deref()
    }

    /// Sample at zero-based time step `k`.
    pub fn sample(&self, k: usize) -> DVector<f64> {
        DVector::from(self.values.column(k))
    }

    pub fn vectorize(&self) -> DVector<f64> {
        DVector::from_column_slice(self.values.as_slice())
    }

    /// Keeps the first `len` samples.
    pub fn truncated(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.len() {
            return Err(Error::LengthMismatch {
                what: "truncation length",
                expected: self.len(),
                actual: len,
            });
        }
        Ok(Self {
            values: self.values.columns(0, len).into_owned(),
            bounds: self.bounds.clone(),
        })
    }
}

/// A measured `(w, p)` pair of equal length, assumed to lie in the behavior.
#[derive(Debug, Clone, PartialEq)]
pub struct DataDictionary {
    w: Trajectory,
    p: SchedulingTrajectory,
}

impl DataDictionary {
    pub fn new(w: Trajectory, p: SchedulingTrajectory) -> Result<Self> {
        if w.len() != p.len() {
            return Err(Error::LengthMismatch {
                what: "dictionary scheduling trajectory",
                expected: w.len(),
                actual: p.len(),
            });
        }
        Ok(Self { w, p })
    }

    /// Dictionary length `N_d`.
    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn w(&self) -> &Trajectory {
        &self.w
    }

    pub fn p(&self) -> &SchedulingTrajectory {
        &self.p
    }

    /// The scheduling-lifted signal `(p(k) ⊗ w(k))_k`.
    pub fn lifted(&self) -> Trajectory {
        lift_scheduling(&self.w, &self.p).expect("dictionary lengths agree by construction")
    }

    /// Keeps the first `len` samples of both signals.
    pub fn truncated(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.len() {
            return Err(Error::LengthMismatch {
                what: "truncation length",
                expected: self.len(),
                actual: len,
            });
        }
        Ok(Self {
            w: Trajectory::new(self.w.values().columns(0, len).into_owned())?,
            p: SchedulingTrajectory {
                values: self.p.values().columns(0, len).into_owned(),
                bounds: self.p.bounds.clone(),
            },
        })
    }
}

/// Kronecker-lifts a signal by its scheduling: sample `k` of the result is
/// `p(k) ⊗ w(k)`, giving `n_p * n_w` channels.
pub fn lift_scheduling(w: &Trajectory, p: &SchedulingTrajectory) -> Result<Trajectory> {
    if w.len() != p.len() {
        return Err(Error::LengthMismatch {
            what: "scheduling trajectory",
            expected: w.len(),
            actual: p.len(),
        });
    }
    let (n_w, n_p, t) = (w.n_channels(), p.n_channels(), w.len());
    let mut out = DMatrix::zeros(n_p * n_w, t);
    for k in 0..t {
        for r in 0..n_p {
            for c in 0..n_w {
                out[(r * n_w + c, k)] = p.values()[(r, k)] * w.values()[(c, k)];
            }
        }
    }
    Trajectory::new(out)
}

/// A sorted set of 1-based positions into a vectorized trajectory.
///
/// The universe (total number of addressable positions) is stored explicitly
/// so complementation and validation are total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    indices: Vec<usize>,
    universe: usize,
}

impl IndexSet {
    /// Builds from strictly increasing 1-based indices.
    pub fn new(indices: Vec<usize>, universe: usize) -> Result<Self> {
        for pair in indices.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::InvalidIndexSet(format!(
                    "indices must be strictly increasing, got {} before {}",
                    pair[0], pair[1]
                )));
            }
        }
        if let Some(&first) = indices.first() {
            if first == 0 {
                return Err(Error::InvalidIndexSet("indices are 1-based".into()));
            }
        }
        if let Some(&last) = indices.last() {
            if last > universe {
                return Err(Error::InvalidIndexSet(format!(
                    "index {last} exceeds universe {universe}"
                )));
            }
        }
        Ok(Self { indices, universe })
    }

    /// Sorts the input first; duplicates are rejected.
    pub fn from_unsorted(mut indices: Vec<usize>, universe: usize) -> Result<Self> {
        indices.sort_unstable();
        Self::new(indices, universe)
    }

    pub fn full(universe: usize) -> Self {
        Self {
            indices: (1..=universe).collect(),
            universe,
        }
    }

    pub fn empty(universe: usize) -> Self {
        Self {
            indices: Vec::new(),
            universe,
        }
    }

    /// Cardinality `K`.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// 1-based indices, ascending.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter_zero_based(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().map(|&i| i - 1)
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    /// The missing positions: `{1..universe} \ self`, sorted.
    pub fn complement(&self) -> IndexSet {
        let mut out = Vec::with_capacity(self.universe - self.indices.len());
        let mut held = self.indices.iter().copied().peekable();
        for i in 1..=self.universe {
            if held.peek() == Some(&i) {
                held.next();
            } else {
                out.push(i);
            }
        }
        IndexSet {
            indices: out,
            universe: self.universe,
        }
    }

    /// Maps positions of `vec(w)` to the positions of `vec(w^p)` that carry
    /// the lifted copies of the same entries, one per scheduling channel.
    ///
    /// Selecting the result from the vectorized lifted signal is the same as
    /// lifting only the selected entries of `w`.
    pub fn lift(&self, n_w: usize, n_p: usize) -> Result<IndexSet> {
        if n_w == 0 || self.universe % n_w != 0 {
            return Err(Error::UniverseNotDivisible {
                universe: self.universe,
                n_w,
            });
        }
        if n_p == 0 {
            return Err(Error::InvalidIndexSet(
                "scheduling channel count must be positive".into(),
            ));
        }
        let mut out = Vec::with_capacity(n_p * self.indices.len());
        for &i in &self.indices {
            let block = (i + n_w - 1) / n_w; // 1-based time step of entry i
            for r in 1..=n_p {
                out.push(i + n_w * (r + (block - 1) * (n_p - 1) - 1));
            }
        }
        IndexSet::from_unsorted(out, n_p * self.universe)
    }
}

/// Zero-based time step of the 1-based vectorized position `index`.
pub fn sample_of_index(index: usize, n_w: usize) -> usize {
    (index - 1) / n_w
}

/// Zero-based channel of the 1-based vectorized position `index`.
pub fn channel_of_index(index: usize, n_w: usize) -> usize {
    (index - 1) % n_w
}

/// 1-based vectorized position of (1-based) channel `channel` at (1-based)
/// time step `time`.
pub fn index_for(time: usize, channel: usize, n_w: usize) -> usize {
    (time - 1) * n_w + channel
}

/// Collects the entries of `v` addressed by `idx`, in index order.
pub fn select(v: &DVector<f64>, idx: &IndexSet) -> Result<DVector<f64>> {
    if let Some(&last) = idx.indices().last() {
        if last > v.len() {
            return Err(Error::IndexOutOfRange {
                index: last,
                len: v.len(),
            });
        }
    }
    Ok(DVector::from_iterator(
        idx.len(),
        idx.iter_zero_based().map(|i| v[i]),
    ))
}

/// Places `values` at the positions `idx` of a fresh length-`universe` vector
/// whose remaining entries are `fill`.
pub fn scatter(
    values: &DVector<f64>,
    idx: &IndexSet,
    universe: usize,
    fill: f64,
) -> Result<DVector<f64>> {
    if values.len() != idx.len() {
        return Err(Error::LengthMismatch {
            what: "scatter values",
            expected: idx.len(),
            actual: values.len(),
        });
    }
    if idx.universe() != universe {
        return Err(Error::LengthMismatch {
            what: "scatter universe",
            expected: idx.universe(),
            actual: universe,
        });
    }
    let mut out = DVector::from_element(universe, fill);
    for (j, i) in idx.iter_zero_based().enumerate() {
        out[i] = values[j];
    }
    Ok(out)
}

/// The behavior invariants assumed known for the data-generating system:
/// channel counts plus order, input count and lag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SystemStructure {
    pub n_w: usize,
    pub n_p: usize,
    pub order: usize,
    pub n_inputs: usize,
    pub lag: usize,
}

impl SystemStructure {
    pub fn new(n_w: usize, n_p: usize, order: usize, n_inputs: usize, lag: usize) -> Result<Self> {
        if n_w == 0 {
            return Err(Error::InvalidStructure("n_w must be positive".into()));
        }
        if n_p == 0 {
            return Err(Error::InvalidStructure("n_p must be positive".into()));
        }
        if n_inputs > n_w {
            return Err(Error::InvalidStructure(format!(
                "n_inputs {n_inputs} exceeds n_w {n_w}"
            )));
        }
        Ok(Self {
            n_w,
            n_p,
            order,
            n_inputs,
            lag,
        })
    }
}

/// Splits the channels of `w` into input and output channels (zero-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IoPartition {
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

impl IoPartition {
    pub fn new(inputs: Vec<usize>, outputs: Vec<usize>) -> Result<Self> {
        let n_w = inputs.len() + outputs.len();
        let mut seen = vec![false; n_w];
        for &c in inputs.iter().chain(outputs.iter()) {
            if c >= n_w || seen[c] {
                return Err(Error::InvalidPartition { n_w });
            }
            seen[c] = true;
        }
        Ok(Self { inputs, outputs })
    }

    /// Inputs occupy the leading channels, outputs the trailing ones.
    pub fn inputs_first(n_inputs: usize, n_outputs: usize) -> Self {
        Self {
            inputs: (0..n_inputs).collect(),
            outputs: (n_inputs..n_inputs + n_outputs).collect(),
        }
    }

    pub fn n_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn n_channels(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }
}
