//! Monte-Carlo laboratory for spherically symmetric distributions and the
//! Herschel–Maxwell characterization of the normal law.
//!
//! The crate is organised bottom-up:
//!
//! * [`rng`], [`sample`], [`config`]: seeded streams, sample containers and
//!   experiment configuration.
//! * [`linalg`]: orthogonal matrices (Householder completion, Haar sampling).
//! * [`samplers`]: every distribution family the experiments need.
//! * [`stats`]: KS tests, empirical characteristic functions, rotation
//!   invariance testing and moment checks.
//! * [`experiments`]: one self-verifying experiment per statement, each
//!   producing an [`experiments::ExperimentReport`].
//! * [`manifest`]: JSON run manifests and CSV plot data.
//! * [`cli`]: the `spherelab` command-line front end.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod manifest;
pub mod rng;
pub mod sample;
pub mod samplers;
pub mod stats;

pub use config::{CfGrid, ExperimentConfig};
pub use error::{Error, Result};
pub use rng::RandomSource;
pub use sample::{ScalarSample, VectorSample};
