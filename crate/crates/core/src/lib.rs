//! Classical probability, computed.
//!
//! Exact rational combinatorics for the dice, urn and stake-division problems,
//! the classical distribution families with moments and quantiles, the
//! Bernoulli/De Moivre-Laplace/Bayes limit theorems with measured error,
//! densities of transformed variables and their compositions, seeded Monte
//! Carlo reproductions (Buffon, Bertrand, Petersburg, quincunx), finite Markov
//! chains for the two- and three-urn interchange problems, and least-squares,
//! p-norm and minimax fitting of observation equations.
//!
//! The crate is `no_std` and needs only `alloc`. Floating-point transcendental
//! functions come from `libm`, so results do not depend on the platform libm.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
pub(crate) mod math;

pub mod distributions;
pub mod estimation;
pub mod exact;
pub mod limit;
pub mod linalg;
pub mod markov;
pub mod montecarlo;
pub mod quadrature;
pub mod rational;
pub mod rng;
pub mod transforms;

pub use error::{Error, Result};
pub use rational::Rational;
