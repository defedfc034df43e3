//! Conditional stochastic simulation: simple kriging, normal-score
//! transform tables and direct sequential simulation on block grids.

mod dss;
mod experimental;
mod kriging;
mod search;
mod transform;

pub use dss::{dss_simulate, dss_simulate_data, SimulationConfig, SimulationOutput, DEFAULT_MAX_NEIGHBORS};
pub use experimental::{experimental_variogram, fit_spherical_range, LagPoint, SphericalFit};
pub use kriging::{simple_kriging, KrigingDiagnostics, KrigingEstimate, KrigingSystem, Neighbor};
pub use search::SearchTemplate;
pub use transform::GlobalCdf;
