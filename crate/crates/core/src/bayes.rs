//! Bayesian update of class-proportion events.
//!
//! For a class `C`, a reality `R` and the `N` scenarios simulated from the
//! well sets drilled in it:
//!
//! * prior: mean in-class fraction of the drilled well sets, or the
//!   reality's proportion divided by a coefficient `r`;
//! * evidence: mean in-class fraction of the scenarios;
//! * likelihood: among cells where `R` is in `C`, the fraction of
//!   (cell, scenario) pairs where the scenario is in `C` too;
//! * posterior: `likelihood * prior / evidence`.

use crate::bootstrap::{BootstrapOutput, BootstrapPlan, RealityKey};
use crate::exec::Executor;
use crate::model::{class_proportion, Grid3D, PorosityClass, WellSet};
use crate::{Error, Result};

impl AsRef<Grid3D> for Grid3D {
    fn as_ref(&self) -> &Grid3D {
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorMode {
    /// Mean in-class fraction over the drilled well sets.
    Frequentist,
    /// Real proportion divided by the coefficient.
    Ratio(f64),
}

/// Prior from well data: mean over sets of the in-class fraction of each
/// set's values.
pub fn prior_frequentist(well_sets: &[WellSet], class: &PorosityClass) -> Result<f64> {
    if well_sets.is_empty() {
        return Err(Error::Empty("no well sets"));
    }
    let mut sum = 0.0;
    for ws in well_sets {
        let hits = ws.values().filter(|&v| class.contains(v)).count();
        sum += hits as f64 / ws.n_values() as f64;
    }
    Ok(sum / well_sets.len() as f64)
}

/// A prior hypothesis. Small coefficients push it above 1; the value is
/// kept as is and flagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorHypothesis {
    pub value: f64,
    pub exceeds_one: bool,
}

pub fn prior_ratio(real_proportion: f64, r: f64) -> Result<PriorHypothesis> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidCoefficient(r));
    }
    let value = real_proportion / r;
    Ok(PriorHypothesis {
        value,
        exceeds_one: value > 1.0,
    })
}

/// Mean in-class fraction over the scenario grids.
pub fn evidence<G: AsRef<Grid3D>>(scenarios: &[G], class: &PorosityClass) -> Result<f64> {
    let first = scenarios.first().ok_or(Error::Empty("no scenarios"))?.as_ref();
    let mut sum = 0.0;
    for s in scenarios {
        let s = s.as_ref();
        first.ensure_same_shape(s)?;
        sum += class_proportion(s, class)?;
    }
    Ok(sum / scenarios.len() as f64)
}

/// Block-wise co-occurrence of the class between a reality and its
/// scenarios, normalized by `N` times the reality's in-class cell count.
pub fn likelihood<G: AsRef<Grid3D>>(reality: &Grid3D, scenarios: &[G], class: &PorosityClass) -> Result<f64> {
    if scenarios.is_empty() {
        return Err(Error::Empty("no scenarios"));
    }
    for s in scenarios {
        reality.ensure_same_shape(s.as_ref())?;
    }
    let mut support = 0usize;
    let mut joint = 0usize;
    for (b, &v) in reality.values().iter().enumerate() {
        if !reality.is_active(b) || !class.contains(v) {
            continue;
        }
        support += 1;
        joint += scenarios
            .iter()
            .filter(|s| class.contains(s.as_ref().values()[b]))
            .count();
    }
    if support == 0 {
        return Err(Error::EmptyClassInReality);
    }
    Ok(joint as f64 / (scenarios.len() * support) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Posterior {
    pub raw: f64,
    pub clamped: f64,
}

pub fn posterior(likelihood: f64, prior: f64, evidence: f64) -> Result<Posterior> {
    if evidence.is_nan() || evidence <= 0.0 {
        return Err(Error::NoEvidenceMass);
    }
    let raw = likelihood * prior / evidence;
    Ok(Posterior {
        raw,
        clamped: raw.clamp(0.0, 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellProbabilities {
    pub prior: f64,
    pub evidence: f64,
    pub likelihood: f64,
    pub posterior: Posterior,
}

/// Why a table cell has no probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Absent {
    EmptyClassInReality,
    NoEvidenceMass,
}

impl Absent {
    pub fn as_str(&self) -> &'static str {
        match self {
            Absent::EmptyClassInReality => "empty class in reality",
            Absent::NoEvidenceMass => "no evidence mass",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub template: String,
    pub class: String,
    pub reality: String,
    pub scenario: String,
    pub real_proportion: f64,
    pub m: usize,
    pub cell: std::result::Result<CellProbabilities, Absent>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    pub prior_mode: PriorMode,
    pub rows: Vec<TableRow>,
}

/// All four probabilities for one (class, reality, scenario) cell, plus the
/// reality's real class proportion.
pub fn compute_cell<G: AsRef<Grid3D>>(
    reality: &Grid3D,
    well_sets: &[WellSet],
    scenarios: &[G],
    class: &PorosityClass,
    mode: PriorMode,
) -> Result<(f64, std::result::Result<CellProbabilities, Absent>)> {
    let real = class_proportion(reality, class)?;
    let prior = match mode {
        PriorMode::Frequentist => prior_frequentist(well_sets, class)?,
        PriorMode::Ratio(r) => prior_ratio(real, r)?.value,
    };
    let evidence = evidence(scenarios, class)?;
    let likelihood = match likelihood(reality, scenarios, class) {
        Ok(l) => l,
        Err(Error::EmptyClassInReality) => return Ok((real, Err(Absent::EmptyClassInReality))),
        Err(e) => return Err(e),
    };
    let posterior = match posterior(likelihood, prior, evidence) {
        Ok(p) => p,
        Err(Error::NoEvidenceMass) => return Ok((real, Err(Absent::NoEvidenceMass))),
        Err(e) => return Err(e),
    };
    Ok((
        real,
        Ok(CellProbabilities {
            prior,
            evidence,
            likelihood,
            posterior,
        }),
    ))
}

/// One table group: the reality, its well sets and, per scenario
/// variogram, its `m` scenario grids.
pub struct GroupInputs<'a, G> {
    pub reality: &'a Grid3D,
    pub well_sets: &'a [WellSet],
    pub scenarios: Vec<Vec<G>>,
}

/// Rows for one (template, reality) group, ordered class then scenario.
pub fn group_rows<G: AsRef<Grid3D>>(
    plan: &BootstrapPlan,
    key: RealityKey,
    inputs: &GroupInputs<'_, G>,
    classes: &[PorosityClass],
    mode: PriorMode,
) -> Result<Vec<TableRow>> {
    let mut rows = Vec::with_capacity(classes.len() * inputs.scenarios.len());
    for class in classes {
        for (s, grids) in inputs.scenarios.iter().enumerate() {
            let (real, cell) = compute_cell(inputs.reality, inputs.well_sets, grids, class, mode)?;
            rows.push(TableRow {
                template: plan.templates[key.template].name().to_string(),
                class: class.label.clone(),
                reality: plan.variograms[key.reality].label.clone(),
                scenario: plan.scenario_variograms[s].label.clone(),
                real_proportion: real,
                m: grids.len(),
                cell,
            });
        }
    }
    Ok(rows)
}

/// Orders rows by template, class, reality, scenario as laid out in the
/// plan and class list.
pub fn sort_rows(plan: &BootstrapPlan, classes: &[PorosityClass], rows: &mut [TableRow]) {
    fn pos<'a>(mut names: impl Iterator<Item = &'a str>, x: &str) -> usize {
        names.position(|n| n == x).unwrap_or(usize::MAX)
    }
    rows.sort_by_key(|r| {
        (
            pos(plan.templates.iter().map(|t| t.name()), &r.template),
            pos(classes.iter().map(|c| c.label.as_str()), &r.class),
            pos(plan.variograms.iter().map(|v| v.label.as_str()), &r.reality),
            pos(plan.scenario_variograms.iter().map(|v| v.label.as_str()), &r.scenario),
        )
    });
}

/// Probability table over an in-memory bootstrap run.
pub fn build_table(
    plan: &BootstrapPlan,
    output: &BootstrapOutput,
    classes: &[PorosityClass],
    mode: PriorMode,
    executor: &Executor,
) -> Result<ProbabilityTable> {
    let keys = plan.reality_keys();
    let groups = executor.map(&keys, |&key| {
        let inputs = GroupInputs {
            reality: &output.realities.grids[&key],
            well_sets: &output.well_sets[&key],
            scenarios: (0..plan.scenario_variograms.len())
                .map(|s| output.scenarios.group(key, s))
                .collect(),
        };
        group_rows(plan, key, &inputs, classes, mode)
    });
    let mut rows = Vec::new();
    for g in groups {
        rows.extend(g?);
    }
    sort_rows(plan, classes, &mut rows);
    Ok(ProbabilityTable {
        prior_mode: mode,
        rows,
    })
}
