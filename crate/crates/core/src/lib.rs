//! Bayesian inference toolkit.
//!
//! Discrete-prior updating on grids, conjugate beta/normal updating with
//! elicitation and predictive distributions, Gibbs and random-walk Metropolis
//! samplers with diagnostics, Laplace approximation, hierarchical and
//! regression models, and model comparison and checking. Every random routine
//! takes an explicit [`Seed`].

pub mod conjugate;
pub mod discrete;
pub mod distributions;
pub mod draws;
pub mod error;
pub mod eval;
pub mod mcmc;
pub mod models;
pub mod rng;
pub mod special;
pub mod summary;

pub use distributions::{Distribution, Family};
pub use draws::DrawMatrix;
pub use error::{Error, Result};
pub use rng::Seed;
