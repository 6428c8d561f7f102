//! Two-sided bounds on the Crouzeix ratio of KMS matrices.
//!
//! The KMS matrix `A_n` is the strictly upper triangular matrix of ones.
//! This crate computes, for `n = 3..6`:
//!
//! * the boundary of the numerical range `W(A_n)` — an algebraic arc with a
//!   vertical flat side ([`kms`]);
//! * the conformal map `g : W(A_n) -> D` onto the unit disk with `g(0) = 0`,
//!   `g'(0) > 0`, via a boundary-integral collocation solve, and the Taylor
//!   image `M = g(A_n)` ([`conformal`]);
//! * a lower bound on the Crouzeix ratio from Blaschke products of order
//!   `n - 1` applied to `M`, and an upper bound from the condition number of
//!   a similarity that maps `M` to the Jordan block ([`bounds`]);
//! * an inclusion certificate for a rational image domain inside `W(A_3)`
//!   together with the induced one-sided bound ([`omega`]).
//!
//! The crate is `no_std` + `alloc`; the `std` feature (default) only adds
//! `std::error::Error` for [`Error`].

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod bounds;
pub mod conformal;
mod error;
pub mod kms;
pub mod matrix;
pub mod omega;
pub mod optim;

pub use error::{Error, Result};
