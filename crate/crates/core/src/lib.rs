//! Simulation and analysis engine for an impulsive reaction-diffusion
//! epidemic model of faecal-oral transmission with free boundaries.
//!
//! The bacteria density `u` and the infected-human density `v` live on a
//! moving interval `(g(t), h(t))` whose ends follow Stefan conditions. At
//! every multiple of the period `tau` the bacteria are reset by an impulse
//! `u <- G(u)`. The crate provides
//!
//! * [`model`]: parameters, nonlinearities and assumption checks,
//! * [`eigen`]: principal eigenvalues of the periodic-parabolic problem,
//! * [`solver`]: a front-fixing integrator for the full free-boundary problem,
//! * [`periodic`]: periodic orbits of the homogeneous and fixed-domain problems,
//! * [`classify`]: spreading/vanishing verdicts and threshold searches,
//! * [`config`], [`output`], [`reproduce`], [`sweep`]: the plumbing behind the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod config;
pub mod eigen;
pub mod error;
pub mod linalg;
pub mod model;
pub mod output;
pub mod periodic;
pub mod reproduce;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{GrowthFn, ImpulseFn, InitialData, ModelParams, Profile};
pub use solver::{SimState, SolverConfig, TimeSeries};
