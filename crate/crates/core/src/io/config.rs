use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{atomic_write, read_to_string};
use crate::bayes::PriorMode;
use crate::bootstrap::{BootstrapPlan, VariogramSpec};
use crate::model::{classes_from_quartiles, Grid3D, GridShape, PorosityClass, WellTemplate};
use crate::simulate::DEFAULT_MAX_NEIGHBORS;
use crate::{Error, Result};

/// Run configuration as stored in TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub grid: GridSection,
    #[serde(default)]
    pub initial: InitialSection,
    pub variograms: Vec<VariogramSpec>,
    pub templates: Vec<TemplateSpec>,
    #[serde(default)]
    pub classes: ClassesSection,
    pub bootstrap: BootstrapSection,
    pub seeds: SeedsSection,
    /// Directory relative paths in the file resolve against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSection {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    /// Existing GSLIB grid to use as the initial map instead of generating one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_map: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InitialSection {
    /// Variogram label used for the unconditional initial map; defaults to
    /// the first configured variogram.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variogram: Option<String>,
    pub distribution: Distribution,
}

/// Reference porosity distribution for the initial map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Distribution {
    /// Normal truncated to `[min, max]`, represented by `points` evenly
    /// spaced quantiles.
    Normal {
        mean: f64,
        std: f64,
        min: f64,
        max: f64,
        #[serde(default = "default_points")]
        points: usize,
    },
    Constant { value: f64 },
    /// Whitespace-separated values read from a text file.
    Sample { path: PathBuf },
}

fn default_points() -> usize {
    1000
}

impl Default for Distribution {
    /// Matches the porosity quartiles 15.34 and 25.76 of the case-study map.
    fn default() -> Self {
        Distribution::Normal {
            mean: 20.55,
            std: 7.72,
            min: 0.0,
            max: 45.0,
            points: default_points(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateSpec {
    pub name: String,
    pub columns: Vec<[i64; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassesSection {
    /// Explicit classes; when empty, the quartile classes of the initial
    /// map are used.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub explicit: Vec<ClassSpec>,
    /// Ratio prior coefficient `r`; without it the frequentist prior is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSpec {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSection {
    pub samples: usize,
    /// Labels of the variograms used for scenarios; all of them by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario_variograms: Option<Vec<String>>,
    #[serde(default = "default_max_neighbors")]
    pub max_neighbors: usize,
}

fn default_max_neighbors() -> usize {
    DEFAULT_MAX_NEIGHBORS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedsSection {
    pub master: u64,
}

fn templates_table3(scale: i64) -> Vec<TemplateSpec> {
    let t = |name: &str, cols: &[[i64; 2]]| TemplateSpec {
        name: name.into(),
        columns: cols.iter().map(|&[x, y]| [x / scale, y / scale]).collect(),
    };
    vec![
        t("W3", &[[100, 40], [170, 90], [230, 60]]),
        t("W5", &[[60, 50], [130, 100], [200, 40], [250, 90], [310, 60]]),
        t(
            "W10",
            &[
                [65, 55],
                [65, 100],
                [120, 55],
                [120, 100],
                [175, 55],
                [175, 100],
                [230, 55],
                [230, 100],
                [285, 55],
                [285, 100],
            ],
        ),
    ]
}

impl Config {
    /// The full case-study setup: 330x130x50 blocks, three templates, three
    /// variograms, 50 well sets per reality.
    pub fn case_study() -> Self {
        Self {
            grid: GridSection {
                nx: 330,
                ny: 130,
                nz: 50,
                initial_map: None,
            },
            initial: InitialSection::default(),
            variograms: vec![
                VariogramSpec::new("G", [165.0, 65.0, 25.0]),
                VariogramSpec::new("M", [110.0, 45.0, 25.0]),
                VariogramSpec::new("P", [60.0, 25.0, 25.0]),
            ],
            templates: templates_table3(1),
            classes: ClassesSection::default(),
            bootstrap: BootstrapSection {
                samples: 50,
                scenario_variograms: None,
                max_neighbors: DEFAULT_MAX_NEIGHBORS,
            },
            seeds: SeedsSection { master: 20_150_601 },
            base_dir: None,
        }
    }

    /// The case study shrunk by 5 in every direction, with 10 well sets
    /// per reality.
    pub fn desk() -> Self {
        let mut c = Self::case_study();
        c.grid = GridSection {
            nx: 66,
            ny: 26,
            nz: 10,
            initial_map: None,
        };
        c.variograms = vec![
            VariogramSpec::new("G", [33.0, 13.0, 5.0]),
            VariogramSpec::new("M", [22.0, 9.0, 5.0]),
            VariogramSpec::new("P", [12.0, 5.0, 5.0]),
        ];
        c.templates = templates_table3(5);
        c.bootstrap.samples = 10;
        c
    }

    pub fn shape(&self) -> Result<GridShape> {
        GridShape::new(self.grid.nx, self.grid.ny, self.grid.nz).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn resolve_path(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(base) if p.is_relative() => base.join(p),
            _ => p.to_path_buf(),
        }
    }

    pub fn initial_variogram(&self) -> Result<&VariogramSpec> {
        match &self.initial.variogram {
            None => self
                .variograms
                .first()
                .ok_or_else(|| Error::Config("at least one variogram required".into())),
            Some(label) => find_variogram(&self.variograms, label),
        }
    }

    /// Validated bootstrap plan.
    pub fn plan(&self) -> Result<BootstrapPlan> {
        let shape = self.shape()?;
        let templates = self
            .templates
            .iter()
            .map(|t| {
                let cols = t.columns.iter().map(|&[x, y]| (x, y)).collect();
                let t = WellTemplate::new(t.name.clone(), cols).map_err(|e| Error::Config(e.to_string()))?;
                if let Some(&(x, y)) = t.columns().iter().find(|&&(x, y)| shape.checked_index(x, y, 0).is_none()) {
                    return Err(Error::Config(format!(
                        "template {} column ({x}, {y}) lies outside the {shape} grid",
                        t.name()
                    )));
                }
                Ok(Arc::new(t))
            })
            .collect::<Result<Vec<_>>>()?;
        let scenario_variograms = match &self.bootstrap.scenario_variograms {
            None => self.variograms.clone(),
            Some(labels) => labels
                .iter()
                .map(|l| find_variogram(&self.variograms, l).cloned())
                .collect::<Result<_>>()?,
        };
        let plan = BootstrapPlan {
            templates,
            variograms: self.variograms.clone(),
            samples: self.bootstrap.samples,
            scenario_variograms,
            master_seed: self.seeds.master,
            max_neighbors: self.bootstrap.max_neighbors,
        };
        plan.validate().map_err(|e| match e {
            Error::Config(m) => Error::Config(m),
            other => Error::Config(other.to_string()),
        })?;
        Ok(plan)
    }

    /// Class definitions; quartile classes come from `initial`.
    pub fn classes(&self, initial: &Grid3D) -> Result<Vec<PorosityClass>> {
        if self.classes.explicit.is_empty() {
            return classes_from_quartiles(initial);
        }
        self.explicit_classes()
    }

    fn explicit_classes(&self) -> Result<Vec<PorosityClass>> {
        let out = self
            .classes
            .explicit
            .iter()
            .map(|c| {
                PorosityClass::new(
                    c.label.clone(),
                    c.lower.unwrap_or(f64::NEG_INFINITY),
                    c.upper.unwrap_or(f64::INFINITY),
                )
                .map_err(|e| Error::Config(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut labels: Vec<&str> = out.iter().map(|c| c.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("duplicate class label".into()));
        }
        Ok(out)
    }

    pub fn prior_mode(&self) -> PriorMode {
        self.classes.prior_ratio.map_or(PriorMode::Frequentist, PriorMode::Ratio)
    }

    /// Checks everything that can be checked without the initial map.
    pub fn validate(&self) -> Result<()> {
        self.plan()?;
        self.initial_variogram()?;
        self.explicit_classes()?;
        if let Some(r) = self.classes.prior_ratio {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::Config(format!("prior_ratio must be positive, got {r}")));
            }
        }
        match &self.initial.distribution {
            Distribution::Normal {
                mean,
                std,
                min,
                max,
                points,
            } => {
                if !(mean.is_finite() && *std > 0.0 && min < max && *points >= 2) {
                    return Err(Error::Config(
                        "normal distribution needs std > 0, min < max and at least 2 points".into(),
                    ));
                }
            }
            Distribution::Constant { value } if !value.is_finite() => {
                return Err(Error::Config(format!("constant value {value} is not finite")))
            }
            _ => {}
        }
        Ok(())
    }

    /// Canonical TOML text; equal configs give equal text.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

fn find_variogram<'a>(variograms: &'a [VariogramSpec], label: &str) -> Result<&'a VariogramSpec> {
    variograms
        .iter()
        .find(|v| v.label == label)
        .ok_or_else(|| Error::Config(format!("unknown variogram {label:?}")))
}

/// Parses and validates config text. Unknown keys are an error when
/// `strict`, otherwise they are logged and returned.
pub fn read_config_str(text: &str, strict: bool) -> Result<(Config, Vec<String>)> {
    let value: toml::Value = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let mut unknown = Vec::new();
    let config: Config =
        serde_ignored::deserialize(value, |path| unknown.push(path.to_string())).map_err(|e| Error::Config(e.to_string()))?;
    if strict && !unknown.is_empty() {
        return Err(Error::Config(format!("unknown keys: {}", unknown.join(", "))));
    }
    for key in &unknown {
        log::warn!("ignoring unknown config key {key}");
    }
    config.validate()?;
    Ok((config, unknown))
}

pub fn read_config(path: &Path, strict: bool) -> Result<Config> {
    let text = read_to_string(path).map_err(|e| Error::Config(e.to_string()))?;
    let (mut config, _) = read_config_str(&text, strict).map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    })?;
    config.base_dir = path.parent().map(Path::to_path_buf);
    Ok(config)
}

pub fn write_config(config: &Config, path: &Path) -> Result<()> {
    atomic_write(path, config.to_toml().as_bytes())
}
