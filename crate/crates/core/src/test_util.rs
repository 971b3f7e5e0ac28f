//! Deterministic helpers shared by the unit tests.

use nalgebra::{DMatrix, DVector};

use crate::lpv_sim::{msd_default, simulate_excitation, ExcitationSpec};
use crate::signals::{DataDictionary, IndexSet, SchedulingTrajectory, Trajectory};

fn lcg(state: &mut u64) -> f64 {
    *state = state
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    ((*state >> 33) as f64) / (u32::MAX as f64) - 0.5
}

/// Dense matrix with entries in (-0.5, 0.5), reproducible from the seed.
pub fn lcg_matrix(seed: u64, rows: usize, cols: usize) -> DMatrix<f64> {
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    DMatrix::from_fn(rows, cols, |_, _| lcg(&mut state))
}

/// Vector counterpart of [`lcg_matrix`].
pub fn lcg_vector(seed: u64, len: usize) -> DVector<f64> {
    let mut state = seed.wrapping_add(0x6a09e667f3bcc909);
    DVector::from_fn(len, |_, _| lcg(&mut state))
}

/// `k` distinct 1-based positions sampled without replacement.
pub fn random_index_set(seed: u64, k: usize, universe: usize) -> IndexSet {
    crate::sampling::random_index_set(seed, k, universe).expect("k fits the universe")
}

/// Seeded draw that keeps resampling until the uniqueness test accepts it.
pub fn unique_index_set(
    dict: &DataDictionary,
    p_target: &SchedulingTrajectory,
    seed: u64,
    k: usize,
) -> IndexSet {
    let sampled = crate::sampling::index_set_for_unique_interpolation(
        dict,
        p_target,
        &crate::lpv_sim::msd_structure(),
        k,
        seed,
        None,
        256,
    )
    .expect("sampling succeeds");
    assert!(
        sampled.uniqueness_satisfied,
        "no uniqueness-satisfying draw of size {k} within 256 attempts"
    );
    sampled.set
}

/// Seeded length-`horizon` trajectory of the default mass-spring-damper,
/// drawn from excitation streams independent of the dictionary streams.
pub fn truth_trajectory(seed: u64, horizon: usize) -> (Trajectory, SchedulingTrajectory) {
    simulate_excitation(
        &msd_default(),
        &ExcitationSpec::gaussian_uniform(seed, horizon),
        2,
        3,
    )
    .expect("excitation of the default system succeeds")
}
