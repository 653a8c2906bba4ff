//! Exact computations around Hurwitz-space component counts and
//! nonabelian Cohen–Lenstra statistics.
//!
//! The crate is layered bottom-up:
//!
//! * [`grp`]: finite groups as multiplication tables, Γ-actions, admissibility.
//! * [`homology`]: Schur multipliers, Schur covers, reduced covers and `U(G,c)`.
//! * [`hurwitz`]: Nielsen tuples, braid orbits and lifting invariants.
//! * [`frob`]: the Frobenius action on invariants, fixed counts and moment predictions.
//! * [`randgrp`]: the random Γ-group model, its exact measure and Monte Carlo estimates.
//! * [`arith`]: hyperelliptic Jacobians over prime fields and quadratic class groups.
//! * [`linalg`]: Smith normal forms over ℤ and over ℤ/p^k.
//! * [`verify`]: the acceptance checks, shared by the test suite and the CLI.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled and plain iterators otherwise. Results do
//! not depend on the number of workers.

pub mod arith;
pub mod error;
pub mod frob;
pub mod grp;
pub mod homology;
pub mod hurwitz;
pub mod linalg;
pub mod par;
pub mod randgrp;
pub mod verify;

pub use error::{Error, Result};
