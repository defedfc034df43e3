use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};

use super::{GlobalCdf, KrigingDiagnostics, KrigingSystem, Neighbor, SearchTemplate};
use crate::model::{Grid3D, GridShape, VariogramModel, WellSet};
use crate::seed::rng_from_seed;
use crate::{Error, Result};

pub const DEFAULT_MAX_NEIGHBORS: usize = 16;

/// Everything one realization depends on besides its conditioning data.
#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub variogram: VariogramModel,
    pub seed: u64,
    pub max_neighbors: usize,
    /// Search ellipsoid radii; the variogram ranges when `None`.
    pub search_radii: Option<[f64; 3]>,
    pub cdf: GlobalCdf,
}

impl SimulationConfig {
    pub fn new(variogram: VariogramModel, cdf: GlobalCdf, seed: u64) -> Self {
        Self {
            variogram,
            seed,
            max_neighbors: DEFAULT_MAX_NEIGHBORS,
            search_radii: None,
            cdf,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulationOutput {
    pub grid: Grid3D,
    pub diagnostics: KrigingDiagnostics,
}

/// Direct sequential simulation conditioned on a well set (or nothing).
pub fn dss_simulate(conditioning: Option<&WellSet>, shape: GridShape, config: &SimulationConfig) -> Result<SimulationOutput> {
    let data = match conditioning {
        Some(ws) => ws.conditioning(shape)?,
        None => Vec::new(),
    };
    dss_simulate_data(&data, shape, config)
}

/// Direct sequential simulation conditioned on `(cell index, value)` data.
///
/// Unknown cells are visited along a seeded random path. At each one the
/// simple-kriging mean of the already known cells is mapped to a normal
/// score through the global cdf, a value is drawn around it with the
/// standardized kriging variance, and the draw is mapped back to original
/// units. Conditioning cells keep their data exactly.
pub fn dss_simulate_data(data: &[(usize, f64)], shape: GridShape, config: &SimulationConfig) -> Result<SimulationOutput> {
    if config.max_neighbors == 0 {
        return Err(Error::Config("max_neighbors must be at least 1".into()));
    }
    let cdf = &config.cdf;
    if cdf.is_empty() {
        return Err(Error::EmptyCdf);
    }
    let n = shape.len();
    let mut values = vec![0.0; n];
    let mut known = vec![false; n];
    for &(idx, v) in data {
        if idx >= n {
            let (x, y, z) = shape.coords(idx);
            return Err(shape.out_of_bounds(x as i64, y as i64, z as i64));
        }
        if !(cdf.min()..=cdf.max()).contains(&v) {
            return Err(Error::OutsideSupport {
                value: v,
                min: cdf.min(),
                max: cdf.max(),
            });
        }
        if known[idx] && values[idx] != v {
            return Err(Error::InvalidGrid(format!("conflicting conditioning data at cell {idx}")));
        }
        values[idx] = v;
        known[idx] = true;
    }

    let model = &config.variogram;
    let template = SearchTemplate::new(shape, config.search_radii.unwrap_or(model.ranges()));
    let mut rng = rng_from_seed(config.seed);
    let mut path: Vec<usize> = (0..n).filter(|&i| !known[i]).collect();
    path.shuffle(&mut rng);

    let global_mean = cdf.mean();
    let c0 = model.total_sill();
    let mut system = KrigingSystem::new();
    let mut neighbors = Vec::with_capacity(config.max_neighbors);

    for &node in &path {
        let (x, y, z) = shape.coords(node);
        let (x, y, z) = (x as i64, y as i64, z as i64);
        neighbors.clear();
        for off in template.offsets() {
            let Some(idx) = shape.checked_index(x + off[0], y + off[1], z + off[2]) else {
                continue;
            };
            if known[idx] {
                neighbors.push(Neighbor {
                    lag: [off[0] as f64, off[1] as f64, off[2] as f64],
                    value: values[idx],
                });
                if neighbors.len() == config.max_neighbors {
                    break;
                }
            }
        }
        let est = system.solve(model, &neighbors, global_mean);
        let center = cdf.to_normal(est.mean);
        let spread = (est.variance / c0).sqrt();
        let draw: f64 = StandardNormal.sample(&mut rng);
        values[node] = cdf.from_normal(center + spread * draw);
        known[node] = true;
    }

    Ok(SimulationOutput {
        grid: Grid3D::new(shape, values)?,
        diagnostics: *system.diagnostics(),
    })
}
