//! Data-driven interpolation of partially specified trajectories, with an
//! explicit parametrization of the solution family when the interpolant is
//! not unique, and data-driven simulation as the special case where the given
//! points are an initial window plus all future inputs.

use nalgebra::{DMatrix, DVector};

use crate::conditions::check_uniqueness;
use crate::error::{Error, Result};
use crate::hankel::{residual_matrix, HankelMatrix};
use crate::numerics::{default_rtol, kernel_basis, minnorm_lstsq};
use crate::signals::{
    select, DataDictionary, IndexSet, SchedulingTrajectory, SystemStructure, Trajectory,
};

/// A partially specified trajectory to be completed against a dictionary for
/// one target scheduling signal.
#[derive(Debug, Clone)]
pub struct InterpolationProblem {
    dict: DataDictionary,
    p_target: SchedulingTrajectory,
    given: IndexSet,
    w_given: DVector<f64>,
    structure: SystemStructure,
}

impl InterpolationProblem {
    pub fn new(
        dict: DataDictionary,
        p_target: SchedulingTrajectory,
        given: IndexSet,
        w_given: DVector<f64>,
        structure: SystemStructure,
    ) -> Result<Self> {
        if dict.w().n_channels() != structure.n_w {
            return Err(Error::ChannelMismatch {
                what: "dictionary manifest signal",
                expected: structure.n_w,
                actual: dict.w().n_channels(),
            });
        }
        if dict.p().n_channels() != structure.n_p {
            return Err(Error::ChannelMismatch {
                what: "dictionary scheduling signal",
                expected: structure.n_p,
                actual: dict.p().n_channels(),
            });
        }
        if p_target.n_channels() != structure.n_p {
            return Err(Error::ChannelMismatch {
                what: "target scheduling signal",
                expected: structure.n_p,
                actual: p_target.n_channels(),
            });
        }
        let horizon = p_target.len();
        if given.universe() != horizon * structure.n_w {
            return Err(Error::LengthMismatch {
                what: "index-set universe",
                expected: horizon * structure.n_w,
                actual: given.universe(),
            });
        }
        if w_given.len() != given.len() {
            return Err(Error::LengthMismatch {
                what: "given values",
                expected: given.len(),
                actual: w_given.len(),
            });
        }
        if dict.len() < horizon {
            return Err(Error::InvalidDepth {
                depth: horizon,
                len: dict.len(),
            });
        }
        Ok(Self {
            dict,
            p_target,
            given,
            w_given,
            structure,
        })
    }

    pub fn dict(&self) -> &DataDictionary {
        &self.dict
    }

    pub fn p_target(&self) -> &SchedulingTrajectory {
        &self.p_target
    }

    pub fn given(&self) -> &IndexSet {
        &self.given
    }

    pub fn w_given(&self) -> &DVector<f64> {
        &self.w_given
    }

    pub fn structure(&self) -> &SystemStructure {
        &self.structure
    }

    /// Interpolation horizon `L`.
    pub fn horizon(&self) -> usize {
        self.p_target.len()
    }
}

/// Coarse outcome classification, mirrored into reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterpolationKind {
    Unique,
    Family,
    Infeasible,
}

impl InterpolationKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Unique => "Unique",
            Self::Family => "Family",
            Self::Infeasible => "Infeasible",
        }
    }
}

/// Result of [`interpolate`].
///
/// The family basis lives in coefficient space: distinct combiner vectors may
/// map to one and the same trajectory, so uniqueness is decided in trajectory
/// space. [`evaluate_family`] performs the mapping onto trajectories; an
/// orthonormal trajectory-space basis can be recovered by orthonormalizing
/// the Hankel image of the columns.
#[derive(Debug, Clone)]
pub enum InterpolationResult {
    Unique {
        trajectory: Trajectory,
        particular_g: DVector<f64>,
        residual: f64,
        /// Set when the formal uniqueness test failed but every coefficient
        /// family direction maps to the zero trajectory, so the interpolant
        /// is unique all the same.
        from_collapsed_family: bool,
    },
    Family {
        trajectory: Trajectory,
        particular_g: DVector<f64>,
        /// Orthonormal columns spanning the feasible coefficient directions.
        family_basis: DMatrix<f64>,
        residual: f64,
    },
    Infeasible { residual: f64 },
}

impl InterpolationResult {
    pub fn kind(&self) -> InterpolationKind {
        match self {
            Self::Unique { .. } => InterpolationKind::Unique,
            Self::Family { .. } => InterpolationKind::Family,
            Self::Infeasible { .. } => InterpolationKind::Infeasible,
        }
    }

    pub fn trajectory(&self) -> Option<&Trajectory> {
        match self {
            Self::Unique { trajectory, .. } | Self::Family { trajectory, .. } => Some(trajectory),
            Self::Infeasible { .. } => None,
        }
    }

    pub fn particular_g(&self) -> Option<&DVector<f64>> {
        match self {
            Self::Unique { particular_g, .. } | Self::Family { particular_g, .. } => {
                Some(particular_g)
            }
            Self::Infeasible { .. } => None,
        }
    }

    pub fn family_basis(&self) -> Option<&DMatrix<f64>> {
        match self {
            Self::Family { family_basis, .. } => Some(family_basis),
            _ => None,
        }
    }

    pub fn residual(&self) -> f64 {
        match self {
            Self::Unique { residual, .. }
            | Self::Family { residual, .. }
            | Self::Infeasible { residual } => *residual,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, Self::Infeasible { .. })
    }
}

/// Stacks the given rows of the Hankel matrix over the full scheduling
/// residual: the coefficient matrix of the interpolation system. The
/// right-hand side pads the given values with one zero per residual row.
fn solve_system(
    prob: &InterpolationProblem,
) -> Result<(HankelMatrix, DMatrix<f64>, DVector<f64>)> {
    let horizon = prob.horizon();
    let h = HankelMatrix::build(prob.dict.w(), horizon)?;
    let n_mat = residual_matrix(&prob.dict, &prob.p_target, horizon)?;
    let top = h.select_rows(&prob.given)?;
    let mut a = DMatrix::zeros(top.nrows() + n_mat.data().nrows(), top.ncols());
    a.view_mut((0, 0), top.shape()).copy_from(&top);
    a.view_mut((top.nrows(), 0), n_mat.data().shape())
        .copy_from(n_mat.data());
    let mut rhs = DVector::zeros(a.nrows());
    rhs.rows_mut(0, prob.w_given.len()).copy_from(&prob.w_given);
    Ok((h, a, rhs))
}

/// Completes the trajectory: solves the stacked interpolation system by
/// minimum-norm least squares and maps the combiner through the Hankel
/// matrix.
///
/// An inconsistent system (the given points cannot be met for this
/// scheduling) is reported as [`InterpolationResult::Infeasible`], not as an
/// error. When the uniqueness test fails, the feasible coefficient directions
/// are returned as an orthonormal family basis; directions that move the
/// combiner without moving the trajectory collapse the result back to
/// `Unique`.
pub fn interpolate(
    prob: &InterpolationProblem,
    rtol: Option<f64>,
) -> Result<InterpolationResult> {
    let (h, a, rhs) = solve_system(prob)?;
    let ls = minnorm_lstsq(&a, &rhs, rtol)?;
    if !ls.is_consistent {
        return Ok(InterpolationResult::Infeasible {
            residual: ls.residual_norm,
        });
    }
    let trajectory =
        Trajectory::from_vector(&DVector::from(h.data() * &ls.solution), prob.structure.n_w)?;

    let uniqueness = check_uniqueness(
        &prob.dict,
        &prob.p_target,
        &prob.given,
        &prob.structure,
        rtol,
    )?;
    if uniqueness.satisfied {
        return Ok(InterpolationResult::Unique {
            trajectory,
            particular_g: ls.solution,
            residual: ls.residual_norm,
            from_collapsed_family: false,
        });
    }

    let family_basis = kernel_basis(&a, rtol);
    // Directions that keep the trajectory fixed do not make the solution
    // ambiguous; drop to Unique if the whole family is of that kind.
    let image = h.data() * &family_basis;
    let scale = rtol.unwrap_or_else(|| default_rtol(h.data().nrows(), h.data().ncols()))
        * (1.0 + h.data().norm());
    let trajectory_moves = image.column_iter().any(|col| col.norm() > scale);
    if family_basis.ncols() == 0 || !trajectory_moves {
        return Ok(InterpolationResult::Unique {
            trajectory,
            particular_g: ls.solution,
            residual: ls.residual_norm,
            from_collapsed_family: true,
        });
    }
    Ok(InterpolationResult::Family {
        trajectory,
        particular_g: ls.solution,
        family_basis,
        residual: ls.residual_norm,
    })
}

/// Maps family coefficients to the interpolant they select:
/// the trajectory of `particular_g + family_basis * coeffs`.
pub fn evaluate_family(
    prob: &InterpolationProblem,
    result: &InterpolationResult,
    coeffs: &DVector<f64>,
) -> Result<Trajectory> {
    let (g, basis) = match result {
        InterpolationResult::Family {
            particular_g,
            family_basis,
            ..
        } => (particular_g, family_basis),
        other => {
            return Err(Error::WrongResultKind {
                expected: "Family",
                actual: other.kind().name(),
            })
        }
    };
    if coeffs.len() != basis.ncols() {
        return Err(Error::LengthMismatch {
            what: "family coefficients",
            expected: basis.ncols(),
            actual: coeffs.len(),
        });
    }
    let h = HankelMatrix::build(prob.dict.w(), prob.horizon())?;
    let combined = g + basis * coeffs;
    Trajectory::from_vector(&DVector::from(h.data() * combined), prob.structure.n_w)
}

/// Outcome of [`simulate_as_interpolation`].
#[derive(Debug, Clone)]
pub struct DataDrivenSimulation {
    pub trajectory: Trajectory,
    /// False signals an insufficiently exciting dictionary or an initial
    /// window shorter than the lag: the simulated response was not pinned
    /// down uniquely and the particular solution was returned.
    pub unique: bool,
}

/// Data-driven simulation as constrained interpolation: the given index set
/// holds every channel of the initial window plus the input channels of all
/// later samples, taking the inputs to be the leading `n_inputs` channels.
///
/// With an initial window at least as long as the lag, the response is
/// expected to be unique; a shorter window typically leaves a family, which
/// is reported through the `unique` flag rather than an error.
pub fn simulate_as_interpolation(
    dict: &DataDictionary,
    p_target: &SchedulingTrajectory,
    w_init: &Trajectory,
    u_future: &DVector<f64>,
    structure: &SystemStructure,
    rtol: Option<f64>,
) -> Result<DataDrivenSimulation> {
    let horizon = p_target.len();
    let n_w = structure.n_w;
    let n_u = structure.n_inputs;
    if w_init.n_channels() != n_w {
        return Err(Error::ChannelMismatch {
            what: "initial window",
            expected: n_w,
            actual: w_init.n_channels(),
        });
    }
    if w_init.len() > horizon {
        return Err(Error::LengthMismatch {
            what: "initial window",
            expected: horizon,
            actual: w_init.len(),
        });
    }
    let t_init = w_init.len();
    if u_future.len() != (horizon - t_init) * n_u {
        return Err(Error::LengthMismatch {
            what: "future inputs",
            expected: (horizon - t_init) * n_u,
            actual: u_future.len(),
        });
    }

    let mut indices = Vec::with_capacity(t_init * n_w + (horizon - t_init) * n_u);
    let mut values = Vec::with_capacity(indices.capacity());
    for k in 0..t_init {
        for c in 0..n_w {
            indices.push(k * n_w + c + 1);
            values.push(w_init.values()[(c, k)]);
        }
    }
    for k in t_init..horizon {
        for c in 0..n_u {
            indices.push(k * n_w + c + 1);
            values.push(u_future[(k - t_init) * n_u + c]);
        }
    }
    let given = IndexSet::new(indices, horizon * n_w)?;
    let prob = InterpolationProblem::new(
        dict.clone(),
        p_target.clone(),
        given,
        DVector::from_vec(values),
        *structure,
    )?;
    match interpolate(&prob, rtol)? {
        InterpolationResult::Infeasible { residual } => Err(Error::InfeasibleProblem { residual }),
        InterpolationResult::Unique { trajectory, .. } => Ok(DataDrivenSimulation {
            trajectory,
            unique: true,
        }),
        InterpolationResult::Family { trajectory, .. } => Ok(DataDrivenSimulation {
            trajectory,
            unique: false,
        }),
    }
}

/// Largest deviation of the completed trajectory from the given points.
pub fn given_point_error(prob: &InterpolationProblem, trajectory: &Trajectory) -> f64 {
    let sel = select(&trajectory.vectorize(), &prob.given).expect("indices fit the horizon");
    (sel - &prob.w_given).abs().max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpv_sim::{
        generate_dictionary, kernel_residual, msd_default, msd_structure, simulate_excitation,
        simulate_kernel, ExcitationSpec, KernelRep,
    };
    use crate::signals::IoPartition;
    use crate::test_util::{lcg_vector, random_index_set, truth_trajectory, unique_index_set};
    use nalgebra::DMatrix;

    fn msd_problem(
        dict_seed: u64,
        truth_seed: u64,
        idx_seed: u64,
        k: usize,
    ) -> (InterpolationProblem, Trajectory) {
        let dict =
            generate_dictionary(&msd_default(), &ExcitationSpec::gaussian_uniform(dict_seed, 121))
                .unwrap();
        let (truth, p_target) = truth_trajectory(truth_seed, 30);
        let given = random_index_set(idx_seed, k, 60);
        let w_given = select(&truth.vectorize(), &given).unwrap();
        let prob =
            InterpolationProblem::new(dict, p_target, given, w_given, msd_structure()).unwrap();
        (prob, truth)
    }

    /// Like [`msd_problem`] but resamples the index set until the uniqueness
    /// test accepts it.
    fn msd_problem_unique(
        dict_seed: u64,
        truth_seed: u64,
        idx_seed: u64,
        k: usize,
    ) -> (InterpolationProblem, Trajectory) {
        let dict =
            generate_dictionary(&msd_default(), &ExcitationSpec::gaussian_uniform(dict_seed, 121))
                .unwrap();
        let (truth, p_target) = truth_trajectory(truth_seed, 30);
        let given = unique_index_set(&dict, &p_target, idx_seed, k);
        let w_given = select(&truth.vectorize(), &given).unwrap();
        let prob =
            InterpolationProblem::new(dict, p_target, given, w_given, msd_structure()).unwrap();
        (prob, truth)
    }

    #[test]
    fn generously_specified_problem_recovers_the_truth() {
        let (prob, truth) = msd_problem_unique(7, 110, 210, 35);
        let result = interpolate(&prob, None).unwrap();
        assert_eq!(result.kind(), InterpolationKind::Unique);
        let traj = result.trajectory().unwrap();
        assert!(traj.max_abs_diff(&truth) <= 1e-6);
        assert!(given_point_error(&prob, traj) <= 1e-8 * (1.0 + prob.w_given().abs().max()));
    }

    #[test]
    fn fully_specified_problem_returns_its_input() {
        let dict =
            generate_dictionary(&msd_default(), &ExcitationSpec::gaussian_uniform(7, 121)).unwrap();
        let (truth, p_target) = truth_trajectory(111, 30);
        let prob = InterpolationProblem::new(
            dict,
            p_target,
            IndexSet::full(60),
            truth.vectorize(),
            msd_structure(),
        )
        .unwrap();
        let result = interpolate(&prob, None).unwrap();
        assert_eq!(result.kind(), InterpolationKind::Unique);
        assert!(result.trajectory().unwrap().max_abs_diff(&truth) <= 1e-7);
    }

    #[test]
    fn sparse_problem_yields_a_family_of_valid_interpolants() {
        let (prob, _) = msd_problem(7, 112, 212, 10);
        let result = interpolate(&prob, None).unwrap();
        assert_eq!(result.kind(), InterpolationKind::Family);
        let basis = result.family_basis().unwrap();
        assert!(basis.ncols() > 0);

        let rep = msd_default();
        let scale = 1.0 + prob.w_given().abs().max();
        let mut members = Vec::new();
        for trial in 0..5 {
            let coeffs = lcg_vector(900 + trial, basis.ncols()) * 4.0;
            let member = evaluate_family(&prob, &result, &coeffs).unwrap();
            // each member hits the given points
            assert!(given_point_error(&prob, &member) <= 1e-8 * scale);
            // and is itself a behavior trajectory for the target scheduling
            let residuals = kernel_residual(&rep, &member, prob.p_target()).unwrap();
            let member_scale = 1.0 + member.values().abs().max();
            assert!(residuals.iter().all(|&r| r <= 1e-8 * member_scale));
            members.push(member);
        }
        // members differ away from the given points
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                assert!(members[i].max_abs_diff(&members[j]) > 1e-3);
            }
        }
    }

    #[test]
    fn family_at_zero_coefficients_is_the_particular_solution() {
        let (prob, _) = msd_problem(7, 113, 213, 10);
        let result = interpolate(&prob, None).unwrap();
        let basis_cols = result.family_basis().unwrap().ncols();
        let member = evaluate_family(&prob, &result, &DVector::zeros(basis_cols)).unwrap();
        assert!(member.max_abs_diff(result.trajectory().unwrap()) <= 1e-12);
    }

    #[test]
    fn family_evaluation_rejects_wrong_kind_and_length() {
        let (prob, _) = msd_problem_unique(7, 114, 214, 35);
        let unique = interpolate(&prob, None).unwrap();
        assert!(matches!(
            evaluate_family(&prob, &unique, &DVector::zeros(0)),
            Err(Error::WrongResultKind { .. })
        ));

        let (sparse, _) = msd_problem(7, 114, 215, 10);
        let family = interpolate(&sparse, None).unwrap();
        let wrong_len = DVector::zeros(family.family_basis().unwrap().ncols() + 1);
        assert!(matches!(
            evaluate_family(&sparse, &family, &wrong_len),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn perturbed_given_points_are_reported_infeasible() {
        let (prob, truth) = msd_problem(7, 115, 216, 35);
        let mut w_given = select(&truth.vectorize(), prob.given()).unwrap();
        w_given[7] += 1.0;
        let perturbed = InterpolationProblem::new(
            prob.dict().clone(),
            prob.p_target().clone(),
            prob.given().clone(),
            w_given,
            *prob.structure(),
        )
        .unwrap();
        let result = interpolate(&perturbed, None).unwrap();
        assert_eq!(result.kind(), InterpolationKind::Infeasible);
        assert!(result.residual() > 1e-4);
        assert!(result.trajectory().is_none());
    }

    #[test]
    fn reinterpolating_the_full_output_is_idempotent() {
        let (prob, _) = msd_problem(7, 116, 217, 35);
        let first = interpolate(&prob, None).unwrap();
        let traj = first.trajectory().unwrap().clone();
        let again = InterpolationProblem::new(
            prob.dict().clone(),
            prob.p_target().clone(),
            IndexSet::full(60),
            traj.vectorize(),
            *prob.structure(),
        )
        .unwrap();
        let second = interpolate(&again, None).unwrap();
        assert!(second.trajectory().unwrap().max_abs_diff(&traj) <= 1e-8);
    }

    #[test]
    fn interpolant_satisfies_the_kernel_recursion() {
        let (prob, _) = msd_problem(7, 117, 218, 35);
        let result = interpolate(&prob, None).unwrap();
        let traj = result.trajectory().unwrap();
        let residuals = kernel_residual(&msd_default(), traj, prob.p_target()).unwrap();
        let scale = 1.0 + traj.values().abs().max();
        assert!(residuals.iter().all(|&r| r <= 1e-8 * scale));
    }

    /// A randomly drawn stable kernel representation over two channels with
    /// one scheduling signal; lower-lag output coefficients are scaled to a
    /// contraction so simulated signals stay bounded.
    fn random_rep(seed: u64, n_r: usize) -> KernelRep {
        let draws = lcg_vector(seed, 3 * (n_r + 1));
        let mut y_weights: Vec<f64> = (0..n_r).flat_map(|i| {
            [draws[3 * i], draws[3 * i + 1]]
        }).collect();
        let total: f64 = y_weights.iter().map(|v| v.abs()).sum();
        if total > 0.0 {
            for v in &mut y_weights {
                *v *= 0.9 / total.max(0.9);
            }
        }
        let mut coeffs = Vec::new();
        for i in 0..=n_r {
            let (y_const, y_sched) = if i < n_r {
                (y_weights[2 * i], y_weights[2 * i + 1])
            } else {
                (1.0, 0.0)
            };
            let u_coeff = draws[3 * i + 2];
            coeffs.push(vec![
                DMatrix::from_row_slice(1, 2, &[u_coeff, y_const]),
                DMatrix::from_row_slice(1, 2, &[0.0, y_sched]),
            ]);
        }
        KernelRep::new(coeffs, IoPartition::inputs_first(1, 1)).unwrap()
    }

    /// Model-based reconstruction: solve the kernel equations plus the given
    /// entries as one linear system over the entries of `vec(w)`.
    fn model_based_reconstruction(
        rep: &KernelRep,
        p_target: &SchedulingTrajectory,
        given: &IndexSet,
        w_given: &DVector<f64>,
    ) -> Option<Trajectory> {
        let horizon = p_target.len();
        let n_w = rep.n_w();
        let n_unknowns = horizon * n_w;
        let n_windows = horizon - rep.n_r();
        let mut a = DMatrix::zeros(n_windows + given.len(), n_unknowns);
        let mut b = DVector::zeros(n_windows + given.len());
        for k in 0..n_windows {
            for i in 0..=rep.n_r() {
                let mut coeff = rep.coeff(i, 0).clone();
                for j in 0..rep.n_p() {
                    coeff += p_target.values()[(j, k + i)] * rep.coeff(i, j + 1);
                }
                for c in 0..n_w {
                    a[(k, (k + i) * n_w + c)] += coeff[(0, c)];
                }
            }
        }
        for (r, i) in given.iter_zero_based().enumerate() {
            a[(n_windows + r, i)] = 1.0;
            b[n_windows + r] = w_given[r];
        }
        if crate::numerics::numerical_rank(&a, None).rank < n_unknowns {
            return None; // model-side reconstruction not unique
        }
        let ls = minnorm_lstsq(&a, &b, None).unwrap();
        if !ls.is_consistent {
            return None;
        }
        Some(Trajectory::from_vector(&ls.solution, n_w).unwrap())
    }

    #[test]
    fn data_driven_interpolant_matches_model_based_reconstruction() {
        // small random systems, solved both directly from the kernel
        // representation and from data alone
        for (case, (seed, n_r, horizon)) in
            [(0u64, 1usize, 5usize), (1, 2, 8), (2, 2, 5), (3, 1, 8)].iter().enumerate()
        {
            let rep = random_rep(1000 + *seed, *n_r);
            let structure = SystemStructure::new(2, 1, *n_r, 1, *n_r).unwrap();
            let dict =
                generate_dictionary(&rep, &ExcitationSpec::gaussian_uniform(50 + *seed, 60))
                    .unwrap();
            let (truth, p_target) = {
                let (w, p) =
                    simulate_excitation(&rep, &ExcitationSpec::gaussian_uniform(80 + *seed, *horizon), 2, 3)
                        .unwrap();
                (w, p)
            };
            let k = n_r + horizon + 3;
            let given = random_index_set(700 + *seed, k.min(2 * horizon), 2 * horizon);
            let w_given = select(&truth.vectorize(), &given).unwrap();

            let oracle = model_based_reconstruction(&rep, &p_target, &given, &w_given);
            let prob = InterpolationProblem::new(
                dict,
                p_target.clone(),
                given,
                w_given,
                structure,
            )
            .unwrap();
            let result = interpolate(&prob, None).unwrap();
            let (Some(oracle), InterpolationResult::Unique { trajectory, .. }) = (oracle, &result)
            else {
                panic!("case {case}: expected unique reconstructions on both routes");
            };
            assert!(
                trajectory.max_abs_diff(&oracle) <= 1e-8,
                "case {case}: deviation {}",
                trajectory.max_abs_diff(&oracle)
            );
        }
    }

    #[test]
    fn data_driven_simulation_matches_the_recursion_simulator() {
        let rep = msd_default();
        let dict =
            generate_dictionary(&rep, &ExcitationSpec::gaussian_uniform(7, 121)).unwrap();
        let (truth, p_target) = truth_trajectory(118, 30);
        let w_init = Trajectory::new(truth.values().columns(0, 2).into_owned()).unwrap();
        let u_future = DVector::from_iterator(28, (2..30).map(|k| truth.values()[(0, k)]));
        let sim = simulate_as_interpolation(
            &dict,
            &p_target,
            &w_init,
            &u_future,
            &msd_structure(),
            None,
        )
        .unwrap();
        assert!(sim.unique);
        assert!(sim.trajectory.max_abs_diff(&truth) <= 1e-6);
    }

    #[test]
    fn zero_data_driven_simulation_is_zero() {
        let dict =
            generate_dictionary(&msd_default(), &ExcitationSpec::gaussian_uniform(7, 121)).unwrap();
        let (_, p_target) = truth_trajectory(119, 30);
        let sim = simulate_as_interpolation(
            &dict,
            &p_target,
            &Trajectory::zeros(2, 2),
            &DVector::zeros(28),
            &msd_structure(),
            None,
        )
        .unwrap();
        assert!(sim.unique);
        assert!(sim.trajectory.values().abs().max() <= 1e-8);
    }

    #[test]
    fn short_initial_window_loses_uniqueness() {
        let rep = msd_default();
        let dict = generate_dictionary(&rep, &ExcitationSpec::gaussian_uniform(7, 121)).unwrap();
        let (truth, p_target) = truth_trajectory(120, 30);
        let w_init = Trajectory::new(truth.values().columns(0, 1).into_owned()).unwrap();
        let u_future = DVector::from_iterator(29, (1..30).map(|k| truth.values()[(0, k)]));
        let sim = simulate_as_interpolation(
            &dict,
            &p_target,
            &w_init,
            &u_future,
            &msd_structure(),
            None,
        )
        .unwrap();
        assert!(!sim.unique);
    }

    #[test]
    fn cross_checks_with_model_based_simulator_on_fresh_instances() {
        let rep = msd_default();
        let structure = msd_structure();
        for seed in 0..3u64 {
            let dict =
                generate_dictionary(&rep, &ExcitationSpec::gaussian_uniform(20 + seed, 121))
                    .unwrap();
            let (truth, p_target) = truth_trajectory(140 + seed, 30);
            let u = Trajectory::new(truth.values().rows(0, 1).into_owned()).unwrap();
            let y_init = Trajectory::new(truth.values().view((1, 0), (1, 2)).into_owned()).unwrap();
            let model = simulate_kernel(&rep, &u, &p_target, &y_init).unwrap();
            let w_init = Trajectory::new(truth.values().columns(0, 2).into_owned()).unwrap();
            let u_future = DVector::from_iterator(28, (2..30).map(|k| truth.values()[(0, k)]));
            let data_driven = simulate_as_interpolation(
                &dict, &p_target, &w_init, &u_future, &structure, None,
            )
            .unwrap();
            assert!(data_driven.trajectory.max_abs_diff(&model) <= 1e-6);
        }
    }
}
