//! Quantum maximum-entropy inference of density operators.
//!
//! Given expectation values `tr(rho A_j) = t_j` of a few observables, the
//! maximum-entropy estimate is the canonical state
//! `exp(-lambda0 - sum_j lambda_j A_j)` whose multipliers reproduce the
//! targets ([`maxent::solve_maxent`]). A prior state can instead be tilted
//! along a single observable ([`maxent::solve_prior_tilt`]).
//!
//! The [`geometry`] module supplies the metric on the state manifold built
//! from symmetrized correlations, and [`flow`] integrates the entropic flow
//! whose closed form is the prior tilt, so the two routes can be checked
//! against each other.
//!
//! Every routine is generic over the real scalar type through [`Real`];
//! the `*64` aliases below fix it to `f64`, for which all tolerances are
//! calibrated.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod maxent;
pub mod operator;
pub mod random;
pub mod roots;
pub mod scalar;

pub use entropy::{relative_entropy, von_neumann_entropy};
pub use error::{Error, Result};
pub use flow::{
    closed_form_flow, flow_field, flow_to_constraint, integrate_flow, FlowSample, FlowTrajectory,
};
pub use geometry::{
    assemble_tangent, line_element, lower, metric_forms, metric_vectors, pair, raise,
    zero_mean_form, OneForm, TangentDecomposition, TangentVector,
};
pub use maxent::{
    classical_gibbs_oracle, dual_objective, entropy_sensitivity, gibbs_state, partition_function,
    solve_maxent, solve_prior_tilt, tilt_state, ConstraintSet, DualPoint, MaxEntSolution,
    SolverOptions, TiltSolution,
};
pub use operator::{
    apply_spectral_function, commutator_norm, eig_hermitian, expectation, make_density,
    make_hermitian, trace_distance, CMatrix, DensityOperator, HermitianOperator,
    SpectralDecomposition, SpectralFunction,
};
pub use scalar::Real;

/// Complex scalar used in operator entries.
pub use nalgebra::Complex;

pub type HermitianOperator64 = HermitianOperator<f64>;
pub type DensityOperator64 = DensityOperator<f64>;
pub type SpectralDecomposition64 = SpectralDecomposition<f64>;
pub type ConstraintSet64 = ConstraintSet<f64>;
pub type MaxEntSolution64 = MaxEntSolution<f64>;
pub type TiltSolution64 = TiltSolution<f64>;
pub type SolverOptions64 = SolverOptions<f64>;
pub type OneForm64 = OneForm<f64>;
pub type TangentVector64 = TangentVector<f64>;
pub type TangentDecomposition64 = TangentDecomposition<f64>;
pub type FlowTrajectory64 = FlowTrajectory<f64>;
pub type CMatrix64 = CMatrix<f64>;

pub type HermitianOperator32 = HermitianOperator<f32>;
pub type DensityOperator32 = DensityOperator<f32>;
