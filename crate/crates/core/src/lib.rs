//! Spatial bootstrap with randomized variography, combined with a Bayesian
//! update of class proportions, for ranking geological conceptual models at
//! reservoir appraisal stage.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: grids, wells, porosity classes and the spherical variogram.
//! * [`simulate`]: simple kriging and direct sequential simulation.
//! * [`bootstrap`]: realities, resampled well sets and scenario ensembles.
//! * [`bayes`]: prior, evidence, likelihood and posterior tables.
//! * [`ranking`]: deviation curves and per-reality model rankings.
//! * [`io`]: GSLIB grids, well files, configuration, manifests and exports.
//! * [`pipeline`]: the resumable, staged run-directory workflow.
//!
//! Ensembles run on a rayon pool when the `parallel` feature is enabled
//! (the default) and on the calling thread otherwise; see [`exec`].

pub mod bayes;
pub mod bootstrap;
mod error;
pub mod exec;
pub mod io;
pub mod model;
pub mod pipeline;
pub mod ranking;
pub mod seed;
pub mod simulate;

pub use error::{Error, Result};
