//! Minimization of submodular functions on products of finite ordered sets
//! by convex relaxation.
//!
//! The library evaluates the convex extension of a grid function through the
//! greedy algorithm, certifies primal/dual gaps from the attached polyhedra,
//! and minimizes via projected subgradient, Frank-Wolfe variants on the base
//! polytope, and an exact divide-and-conquer routine for separable
//! regularized problems. Exhaustive audit oracles back every solver at desk
//! scale.

pub mod bruteforce;
pub mod continuous;
pub mod domain;
pub mod error;
pub mod examples;
pub mod extension;
pub mod isotonic;
pub mod polyhedra;
pub mod solvers;

pub use domain::{Point, ProductDomain, SetFunction, ValueOracle};
pub use error::{Error, Result};
pub use extension::Rho;
pub use polyhedra::{DualPoint, GapReport};
