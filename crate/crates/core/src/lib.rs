//! Exact computation of the Ky Fan metric on finite discrete random
//! variables and decision procedures for rough ideal convergence in
//! probability.
//!
//! The crate is organized in three layers:
//!
//! * the exact layer: rational scalars, value spaces, finitely supported
//!   laws, couplings, and the Ky Fan metric ([`rational`], [`space`],
//!   [`dist`], [`coupling`], [`kyfan`]);
//! * the index layer: symbolic subsets of the naturals with rigorous
//!   natural-density computations and three-valued ideal membership
//!   ([`index`]);
//! * the sequence layer: piecewise symbolic models of a sequence of random
//!   variables, their limiting behavior against a target, and the
//!   convergence / limit-point / cluster-point decision procedures
//!   ([`seq`], [`analysis`]).
//!
//! Every numeric answer in the exact and index layers is an exact rational;
//! verdicts are three-valued (`Yes` / `No` / `Unknown`) and carry
//! certificates or counterexample witnesses.

pub mod analysis;
pub mod coupling;
pub mod dist;
pub mod fixtures;
pub mod index;
pub mod kyfan;
pub mod rational;
pub mod seq;
pub mod space;

pub use coupling::{distance_law, product_coupling, Coupling};
pub use dist::{DistError, FiniteDist};
pub use kyfan::{kyfan_between, kyfan_of_law, KyFanResult};
pub use rational::{format_rational, parse_rational, rat, rat_int, Rational};
pub use space::{Point, ValueSpace};
