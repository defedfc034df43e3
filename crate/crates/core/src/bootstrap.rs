//! Spatial bootstrap with randomized variography.
//!
//! For every drilling template, one reality is simulated per conceptual
//! variogram, conditioned on the template's wells read from the initial
//! map. Each reality is then drilled `m` times at random translations of
//! the template, and every drilled well set is re-simulated once per
//! scenario variogram.
//!
//! All jobs are pure functions of the plan, their inputs and a seed derived
//! from the master seed and the job coordinates.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exec::Executor;
use crate::model::{Grid3D, GridShape, VariogramModel, WellSet, WellTemplate};
use crate::seed::{derive_seed, rng_from_seed, tag};
use crate::simulate::{dss_simulate, GlobalCdf, SimulationConfig, SimulationOutput};
use crate::{Error, Result};

/// Conceptual variogram as configured: the sill is optional and defaults
/// to the variance of whatever data condition the simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariogramSpec {
    pub label: String,
    /// Ranges along (90;0), (0;0) and (0;90), i.e. grid x, y and z.
    pub ranges: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sill: Option<f64>,
    #[serde(default)]
    pub nugget: f64,
}

impl VariogramSpec {
    pub fn new(label: impl Into<String>, ranges: [f64; 3]) -> Self {
        Self {
            label: label.into(),
            ranges,
            sill: None,
            nugget: 0.0,
        }
    }

    /// Concrete model for data distributed as `cdf`. Constant data have no
    /// variance; any positive sill then gives the same simulation, so 1 is
    /// used.
    pub fn resolve(&self, cdf: &GlobalCdf) -> Result<VariogramModel> {
        let sill = match self.sill {
            Some(s) => s,
            None if cdf.variance() > 0.0 => cdf.variance(),
            None => 1.0,
        };
        VariogramModel::spherical(self.label.clone(), self.ranges, sill, self.nugget)
    }

    pub fn validate(&self) -> Result<()> {
        VariogramModel::spherical(self.label.clone(), self.ranges, self.sill.unwrap_or(1.0), self.nugget).map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapPlan {
    pub templates: Vec<Arc<WellTemplate>>,
    /// Conceptual models used to simulate realities.
    pub variograms: Vec<VariogramSpec>,
    /// Well sets drawn per reality (`m`).
    pub samples: usize,
    pub scenario_variograms: Vec<VariogramSpec>,
    pub master_seed: u64,
    pub max_neighbors: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealityKey {
    pub template: usize,
    pub reality: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScenarioKey {
    pub template: usize,
    pub reality: usize,
    pub sample: usize,
    pub scenario: usize,
}

impl ScenarioKey {
    pub fn reality_key(&self) -> RealityKey {
        RealityKey {
            template: self.template,
            reality: self.reality,
        }
    }
}

impl BootstrapPlan {
    pub fn validate(&self) -> Result<()> {
        if self.templates.is_empty() {
            return Err(Error::Config("at least one template required".into()));
        }
        if self.variograms.is_empty() {
            return Err(Error::Config("at least one variogram required".into()));
        }
        if self.scenario_variograms.is_empty() {
            return Err(Error::Config("at least one scenario variogram required".into()));
        }
        if self.samples == 0 {
            return Err(Error::Config("sample count m must be positive".into()));
        }
        if self.max_neighbors == 0 {
            return Err(Error::Config("max_neighbors must be positive".into()));
        }
        unique(self.templates.iter().map(|t| t.name()), "template name")?;
        unique(self.variograms.iter().map(|v| v.label.as_str()), "variogram label")?;
        unique(self.scenario_variograms.iter().map(|v| v.label.as_str()), "scenario variogram label")?;
        for v in self.variograms.iter().chain(&self.scenario_variograms) {
            v.validate()?;
        }
        Ok(())
    }

    pub fn reality_count(&self) -> usize {
        self.templates.len() * self.variograms.len()
    }

    pub fn scenario_count(&self) -> usize {
        self.reality_count() * self.samples * self.scenario_variograms.len()
    }

    pub fn reality_keys(&self) -> Vec<RealityKey> {
        let mut out = Vec::with_capacity(self.reality_count());
        for template in 0..self.templates.len() {
            for reality in 0..self.variograms.len() {
                out.push(RealityKey { template, reality });
            }
        }
        out
    }

    pub fn scenario_keys(&self) -> Vec<ScenarioKey> {
        let mut out = Vec::with_capacity(self.scenario_count());
        for rk in self.reality_keys() {
            for sample in 0..self.samples {
                for scenario in 0..self.scenario_variograms.len() {
                    out.push(ScenarioKey {
                        template: rk.template,
                        reality: rk.reality,
                        sample,
                        scenario,
                    });
                }
            }
        }
        out
    }

    pub fn reality_seed(&self, key: RealityKey) -> u64 {
        derive_seed(self.master_seed, &[tag::REALITY, key.template as u64, key.reality as u64])
    }

    pub fn sample_seed(&self, key: RealityKey) -> u64 {
        derive_seed(self.master_seed, &[tag::SAMPLES, key.template as u64, key.reality as u64])
    }

    pub fn scenario_seed(&self, key: ScenarioKey) -> u64 {
        derive_seed(
            self.master_seed,
            &[
                tag::SCENARIO,
                key.template as u64,
                key.reality as u64,
                key.sample as u64,
                key.scenario as u64,
            ],
        )
    }

    pub fn reality_id(&self, key: RealityKey) -> String {
        format!(
            "reality_{}_{}",
            self.templates[key.template].name(),
            self.variograms[key.reality].label
        )
    }

    pub fn well_set_id(&self, key: RealityKey, sample: usize) -> String {
        format!(
            "wells_{}_{}_{sample:03}",
            self.templates[key.template].name(),
            self.variograms[key.reality].label
        )
    }

    pub fn scenario_id(&self, key: ScenarioKey) -> String {
        format!(
            "scenario_{}_{}_{:03}_{}",
            self.templates[key.template].name(),
            self.variograms[key.reality].label,
            key.sample,
            self.scenario_variograms[key.scenario].label
        )
    }
}

fn unique<'a>(names: impl Iterator<Item = &'a str>, what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::Config(format!("duplicate {what} {n:?}")));
        }
    }
    Ok(())
}

/// Copies the full vertical column under every translated template well.
pub fn extract_wells(grid: &Grid3D, template: &Arc<WellTemplate>, offset: (i64, i64)) -> Result<WellSet> {
    let shape = grid.shape();
    let mut data = Vec::with_capacity(template.n_wells());
    for &(x, y) in template.columns() {
        let (x, y) = (x + offset.0, y + offset.1);
        if shape.checked_index(x, y, 0).is_none() {
            return Err(shape.out_of_bounds(x, y, 0));
        }
        let (x, y) = (x as usize, y as usize);
        data.push((0..shape.nz).map(|z| grid.get(x, y, z)).collect());
    }
    WellSet::from_parts(Arc::clone(template), offset, data)
}

/// Draws `m` uniformly random in-bounds translations of `template`, with
/// replacement, and extracts their wells from `reality`.
pub fn sample_well_sets<R: Rng + ?Sized>(
    reality: &Grid3D,
    template: &Arc<WellTemplate>,
    m: usize,
    rng: &mut R,
) -> Result<Vec<WellSet>> {
    let ((dx0, dx1), (dy0, dy1)) = template.valid_offsets(reality.shape())?;
    (0..m)
        .map(|_| {
            let dx = rng.random_range(dx0..=dx1);
            let dy = rng.random_range(dy0..=dy1);
            extract_wells(reality, template, (dx, dy))
        })
        .collect()
}

/// The template's wells as placed in the initial map.
pub fn reality_conditioning(plan: &BootstrapPlan, initial: &Grid3D, key: RealityKey) -> Result<WellSet> {
    extract_wells(initial, &plan.templates[key.template], (0, 0))
}

/// Simulates reality `key`: the initial map's histogram, the reality's
/// variogram, conditioned on the template wells of the initial map.
pub fn simulate_reality(plan: &BootstrapPlan, initial: &Grid3D, key: RealityKey) -> Result<SimulationOutput> {
    let wells = reality_conditioning(plan, initial, key)?;
    let cdf = GlobalCdf::from_values(initial.active_values())?;
    let variogram = plan.variograms[key.reality].resolve(&cdf)?;
    let mut config = SimulationConfig::new(variogram, cdf, plan.reality_seed(key));
    config.max_neighbors = plan.max_neighbors;
    dss_simulate(Some(&wells), initial.shape(), &config)
}

/// The `m` well sets drilled in reality `key`.
pub fn draw_samples(plan: &BootstrapPlan, reality: &Grid3D, key: RealityKey) -> Result<Vec<WellSet>> {
    let mut rng = rng_from_seed(plan.sample_seed(key));
    sample_well_sets(reality, &plan.templates[key.template], plan.samples, &mut rng)
}

/// Simulates one scenario from a drilled well set. The histogram comes
/// from the well data alone.
pub fn simulate_scenario(plan: &BootstrapPlan, wells: &WellSet, shape: GridShape, key: ScenarioKey) -> Result<SimulationOutput> {
    let cdf = GlobalCdf::from_values(wells.values())?;
    let variogram = plan.scenario_variograms[key.scenario].resolve(&cdf)?;
    let mut config = SimulationConfig::new(variogram, cdf, plan.scenario_seed(key));
    config.max_neighbors = plan.max_neighbors;
    dss_simulate(Some(wells), shape, &config)
}

#[derive(Debug, Clone, Default)]
pub struct RealityEnsemble {
    pub grids: BTreeMap<RealityKey, Grid3D>,
    /// Template wells each reality was conditioned on.
    pub conditioning: BTreeMap<RealityKey, WellSet>,
}

#[derive(Debug, Clone, Default)]
pub struct ScenarioEnsemble {
    pub grids: BTreeMap<ScenarioKey, Grid3D>,
}

impl ScenarioEnsemble {
    /// The `m` scenario grids of one (template, reality, scenario) cell, in
    /// sample order.
    pub fn group(&self, reality: RealityKey, scenario: usize) -> Vec<&Grid3D> {
        self.grids
            .iter()
            .filter(|(k, _)| k.reality_key() == reality && k.scenario == scenario)
            .map(|(_, g)| g)
            .collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct BootstrapOutput {
    pub realities: RealityEnsemble,
    pub well_sets: BTreeMap<RealityKey, Vec<WellSet>>,
    pub scenarios: ScenarioEnsemble,
}

/// Runs all three bootstrap stages in memory.
pub fn run_bootstrap(initial: &Grid3D, plan: &BootstrapPlan, executor: &Executor) -> Result<BootstrapOutput> {
    plan.validate()?;
    let shape = initial.shape();
    let mut out = BootstrapOutput::default();

    let reality_keys = plan.reality_keys();
    let realities = executor.map(&reality_keys, |&k| simulate_reality(plan, initial, k));
    for (&key, sim) in reality_keys.iter().zip(realities) {
        out.realities.grids.insert(key, sim?.grid);
        out.realities
            .conditioning
            .insert(key, reality_conditioning(plan, initial, key)?);
    }

    for &key in &reality_keys {
        let sets = draw_samples(plan, &out.realities.grids[&key], key)?;
        out.well_sets.insert(key, sets);
    }

    let scenario_keys = plan.scenario_keys();
    let scenarios = executor.map(&scenario_keys, |k| {
        let wells = &out.well_sets[&k.reality_key()][k.sample];
        simulate_scenario(plan, wells, shape, *k)
    });
    for (key, sim) in scenario_keys.into_iter().zip(scenarios) {
        out.scenarios.grids.insert(key, sim?.grid);
    }
    Ok(out)
}
