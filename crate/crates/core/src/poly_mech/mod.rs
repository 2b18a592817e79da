//! Polynomial phase-space algebra and Dirac's constraint algorithm.

mod blocks;
mod constraints;
mod dirac;
mod poly;

pub use blocks::{block_diagonalize, BlockDiagonalD};
pub use constraints::{
    affine_bracket, consistency_chain, derive_primary_constraints, AffineConstraint,
    ConstraintSystem, Multiplier, VelocityTerms, RANK_TOL, WEAK_ZERO_TOL,
};
pub use dirac::{
    dirac_bracket, dirac_flow_matrix, evolve_constrained, PhaseTrajectory, MAX_CONDITION,
    SURFACE_TOL,
};
pub use poly::{poisson_bracket, Exponents, PhaseLayout, PolyObservable};
