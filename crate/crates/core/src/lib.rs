//! Estimate the intrinsic dimension of a point cloud from pair counts at two
//! scales, plan how many samples such an estimate needs, and validate the
//! plans with seeded Monte Carlo experiments on synthetic manifolds.
//!
//! The crate is organized bottom-up:
//!
//! - [`geometry`]: curvature-comparison volume integrals, ratio bounds, and
//!   the gap that makes the rounded two-scale estimator trustworthy
//! - [`planner`]: rigorous and heuristic sample-size planning plus the
//!   exhaustive scale search
//! - [`estimator`]: pair counting and the dimension estimators themselves
//! - [`baselines`]: angle-variance and local-PCA comparison estimators
//! - [`samplers`]: seeded uniform samplers for the synthetic test manifolds
//! - [`harness`]: the Monte Carlo experiment runner and its reports
//! - [`reference`]: pinned scale choices and expected values for the
//!   regenerated tables

pub mod baselines;
pub mod error;
pub mod estimator;
pub mod geometry;
pub mod harness;
pub mod planner;
pub mod reference;
pub mod samplers;

pub use error::{Error, Result};
