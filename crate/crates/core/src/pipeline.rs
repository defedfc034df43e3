//! Staged, resumable run-directory workflow.
//!
//! A run directory holds:
//!
//! ```text
//! initial.gslib
//! realities/reality_<template>_<k>.gslib
//! samples/wells_<template>_<k>_<i>.tsv
//! scenarios/scenario_<template>_<k>_<i>_<k'>.gslib
//! probabilities.csv  deviation_curves.csv  ranking.txt
//! config.toml  manifest.tsv
//! ```
//!
//! Every job writes its own files and reports back to the orchestrating
//! thread, which alone updates and persists the manifest. With `resume`, a
//! job is skipped when the manifest (for the same config hash) records it
//! done with the same seed and its output file still exists.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use sha2::{Digest, Sha256};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::bayes::{compute_cell, sort_rows, ProbabilityTable, TableRow};
use crate::bootstrap::{draw_samples, simulate_reality, simulate_scenario, BootstrapPlan, RealityKey, ScenarioKey};
use crate::exec::Executor;
use crate::io::{self, Config, Distribution, JobStatus, ManifestEntry, RunManifest};
use crate::model::{Grid3D, PorosityClass};
use crate::ranking::{curve_from_row, rank_models, DeviationCurve, RankingReport};
use crate::seed::{derive_seed, tag};
use crate::simulate::{dss_simulate, GlobalCdf, SimulationConfig};
use crate::{Error, Result};

pub const INITIAL_FILE: &str = "initial.gslib";
pub const MANIFEST_FILE: &str = "manifest.tsv";
pub const CONFIG_FILE: &str = "config.toml";
pub const PROBABILITIES_FILE: &str = "probabilities.csv";
pub const CURVES_FILE: &str = "deviation_curves.csv";
pub const RANKING_FILE: &str = "ranking.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Realities,
    Samples,
    Scenarios,
    Bayes,
    Rank,
}

impl Stage {
    pub const ALL: [Stage; 5] = [Stage::Realities, Stage::Samples, Stage::Scenarios, Stage::Bayes, Stage::Rank];

    pub fn name(&self) -> &'static str {
        match self {
            Stage::Realities => "realities",
            Stage::Samples => "samples",
            Stage::Scenarios => "scenarios",
            Stage::Bayes => "bayes",
            Stage::Rank => "rank",
        }
    }

    /// Stage label used in manifest rows.
    fn job_stage(&self) -> &'static str {
        match self {
            Stage::Realities => "reality",
            Stage::Samples => "sample",
            Stage::Scenarios => "scenario",
            Stage::Bayes => "bayes",
            Stage::Rank => "rank",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown stage {s:?}; expected realities, samples, scenarios, bayes or rank")))
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: PathBuf,
    pub jobs: usize,
    pub resume: bool,
}

/// What a command did.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunSummary {
    /// Reality and scenario simulations actually run (skipped jobs excluded).
    pub simulations_executed: usize,
    pub jobs_executed: usize,
    pub jobs_skipped: usize,
    pub jobs_failed: usize,
}

impl RunSummary {
    fn absorb(&mut self, other: RunSummary) {
        self.simulations_executed += other.simulations_executed;
        self.jobs_executed += other.jobs_executed;
        self.jobs_skipped += other.jobs_skipped;
        self.jobs_failed += other.jobs_failed;
    }

    /// `JobsFailed` when any job failed.
    pub fn into_result(self) -> Result<Self> {
        if self.jobs_failed > 0 {
            return Err(Error::JobsFailed {
                failed: self.jobs_failed,
                total: self.jobs_executed + self.jobs_skipped + self.jobs_failed,
            });
        }
        Ok(self)
    }
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "simulations executed: {}; jobs executed: {}, skipped: {}, failed: {}",
            self.simulations_executed, self.jobs_executed, self.jobs_skipped, self.jobs_failed
        )
    }
}

/// Total manifest rows for a complete run: the initial map, realities,
/// well sets, scenarios, the table and the ranking.
pub fn expected_job_count(plan: &BootstrapPlan) -> usize {
    1 + plan.reality_count() + plan.reality_count() * plan.samples + plan.scenario_count() + 2
}

/// Values of the configured reference distribution.
pub fn reference_values(config: &Config) -> Result<Vec<f64>> {
    let values = match &config.initial.distribution {
        Distribution::Normal {
            mean,
            std,
            min,
            max,
            points,
        } => {
            let n = Normal::new(*mean, *std).map_err(|e| Error::Config(e.to_string()))?;
            let (pa, pb) = (n.cdf(*min), n.cdf(*max));
            (0..*points)
                .map(|k| {
                    let p = pa + (pb - pa) * (k as f64 + 0.5) / *points as f64;
                    n.inverse_cdf(p).clamp(*min, *max)
                })
                .collect()
        }
        Distribution::Constant { value } => vec![*value],
        Distribution::Sample { path } => {
            let path = config.resolve_path(path);
            let text = fs::read_to_string(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            text.split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| Error::Config(format!("{}: {t:?}: {e}", path.display()))))
                .collect::<Result<Vec<_>>>()?
        }
    };
    if let Some(v) = values.iter().find(|v| !(0.0..=100.0).contains(*v)) {
        return Err(Error::Config(format!("reference porosity {v} outside [0, 100]")));
    }
    if values.is_empty() {
        return Err(Error::Config("empty reference distribution".into()));
    }
    Ok(values)
}

/// The initial map: the configured grid file, or one unconditional
/// realization of the reference distribution with the initial variogram.
pub fn make_initial(config: &Config) -> Result<Grid3D> {
    let shape = config.shape()?;
    if let Some(p) = &config.grid.initial_map {
        let grid = io::read_grid(&config.resolve_path(p))?;
        if grid.shape() != shape {
            return Err(Error::Config(format!(
                "initial map is {}, config declares {shape}",
                grid.shape()
            )));
        }
        return Ok(grid);
    }
    let cdf = GlobalCdf::from_values(reference_values(config)?)?;
    let variogram = config.initial_variogram()?.resolve(&cdf)?;
    let mut sim = SimulationConfig::new(variogram, cdf, initial_seed(config));
    sim.max_neighbors = config.bootstrap.max_neighbors;
    Ok(dss_simulate(None, shape, &sim)?.grid)
}

fn initial_seed(config: &Config) -> u64 {
    derive_seed(config.seeds.master, &[tag::INITIAL])
}

/// Writes the initial map into `out` and returns its path.
pub fn cmd_make_initial(config: &Config, out: &Path) -> Result<PathBuf> {
    config.validate()?;
    let grid = make_initial(config)?;
    let path = out.join(INITIAL_FILE);
    io::write_grid(&grid, &path)?;
    Ok(path)
}

/// sha256 over the canonical config text, the master seed and the bytes
/// of the initial map.
pub fn config_hash(config: &Config, initial_bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(config.to_toml().as_bytes());
    h.update(config.seeds.master.to_le_bytes());
    h.update(initial_bytes);
    format!("{:x}", h.finalize())
}

/// Open run directory with its manifest.
pub struct Run {
    pub config: Config,
    pub plan: BootstrapPlan,
    pub out: PathBuf,
    pub executor: Executor,
    pub resume: bool,
    pub manifest: RunManifest,
    initial: Option<Grid3D>,
}

impl Run {
    /// Opens `opts.out`. The initial map must already exist unless
    /// `create_initial` is set. The manifest is kept only when its config
    /// hash matches.
    pub fn open(config: Config, opts: &RunOptions, create_initial: bool) -> Result<Self> {
        config.validate()?;
        let plan = config.plan()?;
        let out = opts.out.clone();
        fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
        let initial_path = out.join(INITIAL_FILE);
        let mut initial = None;
        let initial_entry = if initial_path.exists() && (opts.resume || !create_initial) {
            None
        } else if create_initial {
            let start = Instant::now();
            let grid = make_initial(&config)?;
            io::write_grid(&grid, &initial_path)?;
            initial = Some(grid);
            Some(start.elapsed().as_millis() as u64)
        } else {
            return Err(Error::MissingStage("initial".into()));
        };
        let bytes = fs::read(&initial_path).map_err(|e| Error::io(&initial_path, e))?;
        let hash = config_hash(&config, &bytes);

        let manifest_path = out.join(MANIFEST_FILE);
        let mut manifest = match io::read_manifest(&manifest_path) {
            Ok(m) if m.config_hash == hash => m,
            Ok(_) => {
                log::info!("config hash changed; starting a fresh manifest");
                RunManifest::default()
            }
            Err(Error::Io { .. }) => RunManifest::default(),
            Err(e) => return Err(e),
        };
        manifest.run_id = hash[..16].to_string();
        manifest.config_hash = hash;
        if initial_entry.is_some() || manifest.get("initial").is_none() {
            manifest.upsert(ManifestEntry {
                job_id: "initial".into(),
                stage: "initial".into(),
                template: "-".into(),
                reality: config.initial_variogram()?.label.clone(),
                sample: None,
                scenario: None,
                seed: initial_seed(&config),
                status: JobStatus::Done,
                path: INITIAL_FILE.into(),
                elapsed_ms: initial_entry.unwrap_or(0),
            });
        }
        io::write_config(&config, &out.join(CONFIG_FILE))?;
        let run = Self {
            config,
            plan,
            out,
            executor: Executor::new(opts.jobs),
            resume: opts.resume,
            manifest,
            initial,
        };
        run.save()?;
        Ok(run)
    }

    fn save(&self) -> Result<()> {
        io::write_manifest(&self.manifest, &self.out.join(MANIFEST_FILE))
    }

    fn initial(&mut self) -> Result<&Grid3D> {
        if self.initial.is_none() {
            self.initial = Some(io::read_grid(&self.out.join(INITIAL_FILE))?);
        }
        Ok(self.initial.as_ref().expect("loaded above"))
    }

    fn done(&self, job_id: &str, seed: u64) -> bool {
        self.manifest
            .get(job_id)
            .is_some_and(|e| e.status == JobStatus::Done && e.seed == seed && self.out.join(&e.path).exists())
    }

    fn can_skip(&self, job_id: &str, seed: u64) -> bool {
        self.resume && self.done(job_id, seed)
    }

    fn reality_path(&self, key: RealityKey) -> String {
        format!("realities/{}.gslib", self.plan.reality_id(key))
    }

    fn well_set_path(&self, key: RealityKey, sample: usize) -> String {
        format!("samples/{}.tsv", self.plan.well_set_id(key, sample))
    }

    fn scenario_path(&self, key: ScenarioKey) -> String {
        format!("scenarios/{}.gslib", self.plan.scenario_id(key))
    }

    fn entry(&self, stage: Stage, job_id: String, key: RealityKey, path: String) -> ManifestEntry {
        ManifestEntry {
            job_id,
            stage: stage.job_stage().into(),
            template: self.plan.templates[key.template].name().into(),
            reality: self.plan.variograms[key.reality].label.clone(),
            sample: None,
            scenario: None,
            seed: 0,
            status: JobStatus::Pending,
            path,
            elapsed_ms: 0,
        }
    }

    /// Runs one stage; upstream artifacts must be complete.
    pub fn stage(&mut self, stage: Stage) -> Result<RunSummary> {
        log::info!("stage {stage}");
        match stage {
            Stage::Realities => self.realities(),
            Stage::Samples => self.samples(),
            Stage::Scenarios => self.scenarios(),
            Stage::Bayes => self.bayes(),
            Stage::Rank => self.rank(),
        }
    }

    /// All stages in order. Failed jobs do not stop independent jobs of
    /// the same stage, but later stages are not attempted.
    pub fn run_all(&mut self) -> Result<RunSummary> {
        let mut total = RunSummary::default();
        for stage in Stage::ALL {
            total.absorb(self.stage(stage)?.into_result()?);
        }
        Ok(total)
    }

    /// Runs `jobs` on the executor, recording each completion in the
    /// manifest as it arrives.
    fn execute<J, F>(&mut self, jobs: Vec<(J, Vec<ManifestEntry>)>, sims_per_job: usize, f: F) -> Result<RunSummary>
    where
        J: Sync,
        F: Fn(&J) -> Result<()> + Sync + Send,
    {
        let mut summary = RunSummary::default();
        let (work, mut entries): (Vec<J>, Vec<Vec<ManifestEntry>>) = jobs.into_iter().unzip();
        let mut save_error = None;
        let executor = self.executor;
        executor.for_each_completion(
            &work,
            |job| {
                let start = Instant::now();
                (f(job), start.elapsed().as_millis() as u64)
            },
            |i, (result, ms)| {
                let status = match &result {
                    Ok(()) => {
                        summary.jobs_executed += 1;
                        summary.simulations_executed += sims_per_job;
                        JobStatus::Done
                    }
                    Err(e) => {
                        log::error!("job {} failed: {e}", entries[i][0].job_id);
                        summary.jobs_failed += 1;
                        JobStatus::Failed
                    }
                };
                for mut e in std::mem::take(&mut entries[i]) {
                    e.status = status;
                    e.elapsed_ms = ms;
                    self.manifest.upsert(e);
                }
                if let Err(e) = self.save() {
                    save_error.get_or_insert(e);
                }
            },
        );
        match save_error {
            Some(e) => Err(e),
            None => Ok(summary),
        }
    }

    fn realities(&mut self) -> Result<RunSummary> {
        let initial = self.initial()?.clone();
        let mut skipped = 0;
        let mut jobs = Vec::new();
        for key in self.plan.reality_keys() {
            let id = self.plan.reality_id(key);
            let seed = self.plan.reality_seed(key);
            if self.can_skip(&id, seed) {
                skipped += 1;
                continue;
            }
            let mut e = self.entry(Stage::Realities, id, key, self.reality_path(key));
            e.seed = seed;
            jobs.push(((key, self.out.join(&e.path)), vec![e]));
        }
        let plan = self.plan.clone();
        let mut s = self.execute(jobs, 1, |(key, path)| {
            let sim = simulate_reality(&plan, &initial, *key)?;
            io::write_grid(&sim.grid, path)
        })?;
        s.jobs_skipped = skipped;
        Ok(s)
    }

    fn require(&self, stage: Stage, ids: impl IntoIterator<Item = (String, u64)>) -> Result<()> {
        for (id, seed) in ids {
            if !self.done(&id, seed) {
                log::warn!("{id} missing or not done");
                return Err(Error::MissingStage(stage.name().into()));
            }
        }
        Ok(())
    }

    fn reality_ids(&self) -> Vec<(String, u64)> {
        self.plan
            .reality_keys()
            .into_iter()
            .map(|k| (self.plan.reality_id(k), self.plan.reality_seed(k)))
            .collect()
    }

    fn well_set_ids(&self) -> Vec<(String, u64)> {
        let mut out = Vec::new();
        for k in self.plan.reality_keys() {
            for i in 0..self.plan.samples {
                out.push((self.plan.well_set_id(k, i), self.plan.sample_seed(k)));
            }
        }
        out
    }

    fn scenario_ids(&self) -> Vec<(String, u64)> {
        self.plan
            .scenario_keys()
            .into_iter()
            .map(|k| (self.plan.scenario_id(k), self.plan.scenario_seed(k)))
            .collect()
    }

    fn samples(&mut self) -> Result<RunSummary> {
        self.require(Stage::Realities, self.reality_ids())?;
        let shape = self.config.shape()?;
        let mut skipped = 0;
        let mut jobs = Vec::new();
        for key in self.plan.reality_keys() {
            let seed = self.plan.sample_seed(key);
            let ids: Vec<String> = (0..self.plan.samples).map(|i| self.plan.well_set_id(key, i)).collect();
            if ids.iter().all(|id| self.can_skip(id, seed)) {
                skipped += ids.len();
                continue;
            }
            let entries: Vec<ManifestEntry> = ids
                .into_iter()
                .enumerate()
                .map(|(i, id)| {
                    let mut e = self.entry(Stage::Samples, id, key, self.well_set_path(key, i));
                    e.sample = Some(i);
                    e.seed = seed;
                    e
                })
                .collect();
            let paths: Vec<PathBuf> = entries.iter().map(|e| self.out.join(&e.path)).collect();
            jobs.push(((key, self.out.join(self.reality_path(key)), paths), entries));
        }
        let plan = self.plan.clone();
        let mut s = self.execute(jobs, 0, |(key, reality_path, paths)| {
            let reality = io::read_grid(reality_path)?;
            let sets = draw_samples(&plan, &reality, *key)?;
            for (ws, path) in sets.iter().zip(paths) {
                io::write_well_set(ws, shape, path)?;
            }
            Ok(())
        })?;
        // one job writes m well sets; count them as m jobs
        s.jobs_executed *= self.plan.samples;
        s.jobs_failed *= self.plan.samples;
        s.jobs_skipped = skipped;
        Ok(s)
    }

    fn scenarios(&mut self) -> Result<RunSummary> {
        self.require(Stage::Samples, self.well_set_ids())?;
        let shape = self.config.shape()?;
        let mut skipped = 0;
        let mut jobs = Vec::new();
        for key in self.plan.scenario_keys() {
            let id = self.plan.scenario_id(key);
            let seed = self.plan.scenario_seed(key);
            if self.can_skip(&id, seed) {
                skipped += 1;
                continue;
            }
            let rk = key.reality_key();
            let mut e = self.entry(Stage::Scenarios, id, rk, self.scenario_path(key));
            e.sample = Some(key.sample);
            e.scenario = Some(self.plan.scenario_variograms[key.scenario].label.clone());
            e.seed = seed;
            let wells = self.out.join(self.well_set_path(rk, key.sample));
            jobs.push(((key, wells, self.out.join(&e.path)), vec![e]));
        }
        let plan = self.plan.clone();
        let mut s = self.execute(jobs, 1, |(key, wells_path, path)| {
            let wells = io::read_well_set(wells_path, &plan.templates[key.template])?;
            let sim = simulate_scenario(&plan, &wells, shape, *key)?;
            io::write_grid(&sim.grid, path)
        })?;
        s.jobs_skipped = skipped;
        Ok(s)
    }

    fn classes(&mut self) -> Result<Vec<PorosityClass>> {
        let config = self.config.clone();
        config.classes(self.initial()?)
    }

    fn bayes(&mut self) -> Result<RunSummary> {
        self.require(Stage::Realities, self.reality_ids())?;
        self.require(Stage::Samples, self.well_set_ids())?;
        self.require(Stage::Scenarios, self.scenario_ids())?;
        let classes = self.classes()?;
        let mode = self.config.prior_mode();
        let start = Instant::now();
        let plan = &self.plan;
        let out = &self.out;
        let keys = plan.reality_keys();
        let groups = self.executor.map(&keys, |&key| -> Result<Vec<TableRow>> {
            let reality = io::read_grid(&out.join(format!("realities/{}.gslib", plan.reality_id(key))))?;
            let well_sets = (0..plan.samples)
                .map(|i| {
                    io::read_well_set(
                        &out.join(format!("samples/{}.tsv", plan.well_set_id(key, i))),
                        &plan.templates[key.template],
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            let mut rows = Vec::new();
            for s in 0..plan.scenario_variograms.len() {
                let grids = (0..plan.samples)
                    .map(|sample| {
                        let k = ScenarioKey {
                            template: key.template,
                            reality: key.reality,
                            sample,
                            scenario: s,
                        };
                        io::read_grid(&out.join(format!("scenarios/{}.gslib", plan.scenario_id(k))))
                    })
                    .collect::<Result<Vec<_>>>()?;
                for class in &classes {
                    let (real, cell) = compute_cell(&reality, &well_sets, &grids, class, mode)?;
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
        });
        let mut rows = Vec::new();
        for g in groups {
            rows.extend(g?);
        }
        sort_rows(&self.plan, &classes, &mut rows);
        let table = ProbabilityTable { prior_mode: mode, rows };
        io::write_probabilities(&table, &self.out.join(PROBABILITIES_FILE))?;
        self.finish_single(Stage::Bayes, PROBABILITIES_FILE, start)
    }

    fn finish_single(&mut self, stage: Stage, path: &str, start: Instant) -> Result<RunSummary> {
        self.manifest.upsert(ManifestEntry {
            job_id: stage.name().into(),
            stage: stage.job_stage().into(),
            template: "-".into(),
            reality: "-".into(),
            sample: None,
            scenario: None,
            seed: self.plan.master_seed,
            status: JobStatus::Done,
            path: path.into(),
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
        self.save()?;
        Ok(RunSummary {
            jobs_executed: 1,
            ..RunSummary::default()
        })
    }

    fn rank(&mut self) -> Result<RunSummary> {
        self.require(Stage::Bayes, [(Stage::Bayes.name().to_string(), self.plan.master_seed)])?;
        let start = Instant::now();
        let rows = io::read_probabilities(&self.out.join(PROBABILITIES_FILE))?;
        let (curves, reports, skipped) = rank_rows(&rows)?;
        io::write_curves(&curves, &self.out.join(CURVES_FILE))?;
        io::write_ranking(&reports, &skipped, &self.out.join(RANKING_FILE))?;
        self.finish_single(Stage::Rank, RANKING_FILE, start)
    }
}

type RankOutput = (Vec<DeviationCurve>, Vec<RankingReport>, Vec<(String, String)>);

/// Curves for every rankable row, and one report per (template, class,
/// reality) with at least two curves. Groups with fewer are listed as
/// skipped.
pub fn rank_rows(rows: &[TableRow]) -> Result<RankOutput> {
    struct Group {
        key: (String, String, String),
        curves: Vec<DeviationCurve>,
        excluded: Vec<(String, String)>,
    }
    let mut curves = Vec::new();
    let mut groups: Vec<Group> = Vec::new();
    for row in rows {
        let key = (row.template.clone(), row.class.clone(), row.reality.clone());
        let g = match groups.iter().position(|g| g.key == key) {
            Some(i) => &mut groups[i],
            None => {
                groups.push(Group {
                    key,
                    curves: Vec::new(),
                    excluded: Vec::new(),
                });
                groups.last_mut().expect("just pushed")
            }
        };
        match curve_from_row(row) {
            Ok(c) => {
                curves.push(c.clone());
                g.curves.push(c);
            }
            Err(why) => g.excluded.push((row.scenario.clone(), why)),
        }
    }
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for g in groups {
        if g.curves.len() < 2 {
            let (t, c, r) = g.key;
            skipped.push((format!("{t} {c} {r}"), format!("{} rankable scenario(s)", g.curves.len())));
            continue;
        }
        reports.push(rank_models(&g.curves, &g.excluded)?);
    }
    Ok((curves, reports, skipped))
}

/// Human-readable summary of a run directory.
pub fn report(out: &Path) -> Result<String> {
    let manifest = io::read_manifest(&out.join(MANIFEST_FILE)).map_err(|e| match e {
        Error::Io { .. } => Error::MissingStage("realities".into()),
        other => other,
    })?;
    let mut text = format!("run {}\nconfig hash {}\n", manifest.run_id, manifest.config_hash);
    for stage in ["initial", "reality", "sample", "scenario", "bayes", "rank"] {
        let [done, failed, pending] = [JobStatus::Done, JobStatus::Failed, JobStatus::Pending].map(|s| manifest.count(stage, s));
        text.push_str(&format!("{stage:<9} done {done:>5}  failed {failed:>3}  pending {pending:>3}\n"));
    }
    match fs::read_to_string(out.join(RANKING_FILE)) {
        Ok(r) => {
            text.push('\n');
            text.push_str(&r);
        }
        Err(_) => text.push_str("no ranking yet\n"),
    }
    Ok(text)
}

/// `run-all`: every stage, creating the initial map if needed.
pub fn cmd_run_all(config: Config, opts: &RunOptions) -> Result<RunSummary> {
    let mut run = Run::open(config, opts, true)?;
    run.run_all()
}

/// One stage against an existing run directory.
pub fn cmd_stage(config: Config, stage: Stage, opts: &RunOptions) -> Result<RunSummary> {
    let mut run = Run::open(config, opts, false)?;
    run.stage(stage)?.into_result()
}
