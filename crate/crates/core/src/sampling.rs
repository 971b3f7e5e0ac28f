//! Seeded sampling of given-index sets for experiments.
//!
//! Index positions near the end of the horizon can make the uniqueness test
//! fail structurally: an input sample in the last few steps influences no
//! other entry inside the window, so a draw that misses its position leaves a
//! free direction no matter how rich the dictionary is. Experiment setups that
//! need a unique interpolant therefore draw candidate sets from one seeded
//! stream until the uniqueness test accepts one, mirroring the usual practice
//! of verifying the rank conditions after selecting the points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::conditions::check_uniqueness;
use crate::error::{Error, Result};
use crate::signals::{DataDictionary, IndexSet, SchedulingTrajectory, SystemStructure};

/// ChaCha8 stream reserved for index sampling; dictionary and truth
/// excitations use streams 0-3.
const INDEX_STREAM: u64 = 4;

fn draw(rng: &mut ChaCha8Rng, k: usize, universe: usize) -> IndexSet {
    let picks = rand::seq::index::sample(rng, universe, k);
    IndexSet::from_unsorted(picks.iter().map(|i| i + 1).collect(), universe)
        .expect("sampled indices are distinct and in range")
}

/// One draw of `k` distinct 1-based positions without replacement.
pub fn random_index_set(seed: u64, k: usize, universe: usize) -> Result<IndexSet> {
    if k > universe {
        return Err(Error::InvalidIndexSet(format!(
            "cannot draw {k} distinct positions from a universe of {universe}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(INDEX_STREAM);
    Ok(draw(&mut rng, k, universe))
}

/// A sampled index set together with how it was obtained.
#[derive(Debug, Clone)]
pub struct SampledIndexSet {
    pub set: IndexSet,
    /// Number of draws consumed, starting at 1.
    pub attempts: usize,
    /// Whether the returned set passed the uniqueness test; false means the
    /// attempt budget ran out and the last draw is returned as-is.
    pub uniqueness_satisfied: bool,
}

/// Draws candidate sets of size `k` from the seeded stream until one passes
/// the uniqueness test, up to `max_attempts` draws.
///
/// The first draw coincides with [`random_index_set`] for the same seed, so a
/// plain diagnostic run and an experiment run start from the same candidate.
/// When `k` is below the minimum point count no draw can succeed; the first
/// draw is then returned immediately with `uniqueness_satisfied = false`.
pub fn index_set_for_unique_interpolation(
    dict: &DataDictionary,
    p_target: &SchedulingTrajectory,
    structure: &SystemStructure,
    k: usize,
    seed: u64,
    rtol: Option<f64>,
    max_attempts: usize,
) -> Result<SampledIndexSet> {
    let universe = p_target.len() * structure.n_w;
    if k > universe {
        return Err(Error::InvalidIndexSet(format!(
            "cannot draw {k} distinct positions from a universe of {universe}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(INDEX_STREAM);
    let budget = max_attempts.max(1);
    let hopeless = k < crate::conditions::min_given_points(structure, p_target.len());
    let mut attempts = 0;
    loop {
        attempts += 1;
        let set = draw(&mut rng, k, universe);
        if hopeless {
            return Ok(SampledIndexSet {
                set,
                attempts,
                uniqueness_satisfied: false,
            });
        }
        let report = check_uniqueness(dict, p_target, &set, structure, rtol)?;
        if report.satisfied || attempts >= budget {
            return Ok(SampledIndexSet {
                set,
                attempts,
                uniqueness_satisfied: report.satisfied,
            });
        }
    }
}
