//! Exact and statistical machinery for self-similar measures and their
//! normality in Pisot bases.
//!
//! The crate is `no_std` (with `alloc`). It covers:
//!
//! * [`algebraics`]: integer polynomials, certified root isolation, real
//!   algebraic numbers, number-field arithmetic, Pisot detection and
//!   multiplicative (in)dependence.
//! * [`selfsimilar`]: similarity IFSs with exact coefficients, attractor
//!   hulls, iteration, sampling and the separated-pair search.
//! * [`model`]: the Bernoulli model built from an IFS, its random measures
//!   and the disintegration sampler.
//! * [`beta`]: greedy beta-expansions with certified precision, the Parry
//!   density and normality statistics.
//! * [`scenery`]: window measures, scenery orbits by shift replay, the
//!   extended Markov chain, the suspension distribution and the spectral
//!   obstruction check.
//!
//! IO, file formats and the command line live in the companion `betanorm`
//! crate.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod algebraics;
pub mod beta;
mod error;
pub(crate) mod fmath;
pub mod model;
pub mod rng;
pub mod scenery;
pub mod selfsimilar;
pub mod stats;

pub use error::{Error, Result};
