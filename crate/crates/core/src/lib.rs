//! Digit expansions in real, complex and quaternion bases, and Schmidt games
//! played on the sets of points whose expansions contain or avoid a digit.
//!
//! * [`numeric`]: quaternion arithmetic, tolerant floors, bisection.
//! * [`lattice`]: box-shaped fundamental domains and the digit map.
//! * [`real`]: greedy expansions, admissible blocks, cylinder intervals.
//! * [`complex`]: Gaussian-integer digits, digit-set shape, containment thresholds.
//! * [`quaternion`]: lattice presets, domain constants, witness search.
//! * [`game`]: the game engine, strategies, verification.
//! * [`scenarios`]: named setups, samplers and batch runs.

// `!(x > y)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complex;
pub mod game;
pub mod lattice;
pub mod numeric;
pub mod parallel;
pub mod quaternion;
pub mod real;
pub mod scenarios;

pub use numeric::{Quaternion, Tolerance};
pub use parallel::Execution;
