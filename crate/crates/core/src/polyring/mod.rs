//! Dense univariate polynomials and rational functions over exact rationals,
//! plus the partial fraction decomposition of the residue function
//! `R_n(T; q) = T^n (T q^(1-n); q)_n / (qT; q)_(n+1)^2`.
//!
//! The residue function and the q-Jacobi polynomial used in the construction
//! share a name in the literature; here the first is [`residue_r`] and the
//! second lives in [`crate::qjacobi::jacobi_r`].

mod partial_fractions;
mod poly;
mod ratfunc;

pub use partial_fractions::{
    partial_fractions_double_poles, residue_r, residue_r_at, PartialFractions,
};
pub use poly::RatPoly;
pub use ratfunc::RatFunc;
