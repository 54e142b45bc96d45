//! Exact Lie algebra cohomology and weak homotopy moment maps for
//! multisymplectic Lie algebra actions on ℝⁿ.

pub mod action;
pub mod cli;
pub mod exterior;
pub mod gmodule;
pub mod lie;
pub mod linalg;
pub mod moment;
pub mod polyform;
pub mod problem;
pub mod rational;

pub use lie::{LieAlgebra, LieKernel, MultiVector};
pub use rational::Rational;
