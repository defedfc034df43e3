//! Core domain types: porosity grids, well templates and sampled well sets,
//! porosity classes and the spherical variogram model.

mod class;
mod grid;
mod variogram;
mod wells;

pub use class::{class_indicator, class_proportion, classes_from_quartiles, quantile, PorosityClass};
pub use grid::{Grid3D, GridShape};
pub use variogram::{ModelKind, VariogramModel};
pub use wells::{WellSet, WellTemplate};
