use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use super::{atomic_write, parse_error, read_to_string};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JobStatus {
    Pending,
    Done,
    Failed,
}

impl fmt::Display for JobStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JobStatus::Pending => "pending",
            JobStatus::Done => "done",
            JobStatus::Failed => "failed",
        })
    }
}

impl FromStr for JobStatus {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pending" => Ok(JobStatus::Pending),
            "done" => Ok(JobStatus::Done),
            "failed" => Ok(JobStatus::Failed),
            other => Err(format!("unknown status {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub job_id: String,
    pub stage: String,
    pub template: String,
    /// Reality variogram label.
    pub reality: String,
    pub sample: Option<usize>,
    /// Scenario variogram label.
    pub scenario: Option<String>,
    pub seed: u64,
    pub status: JobStatus,
    /// Output path relative to the run directory.
    pub path: String,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunManifest {
    pub run_id: String,
    pub config_hash: String,
    pub entries: Vec<ManifestEntry>,
}

impl RunManifest {
    pub fn get(&self, job_id: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.job_id == job_id)
    }

    pub fn count(&self, stage: &str, status: JobStatus) -> usize {
        self.entries.iter().filter(|e| e.stage == stage && e.status == status).count()
    }

    /// Inserts or replaces the entry with the same job id.
    pub fn upsert(&mut self, entry: ManifestEntry) {
        match self.entries.iter_mut().find(|e| e.job_id == entry.job_id) {
            Some(e) => *e = entry,
            None => self.entries.push(entry),
        }
    }
}

const HEADER: &str = "job_id\tstage\ttemplate\treality\tsample\tscenario\tseed\tstatus\tpath\telapsed_ms";

pub fn write_manifest(m: &RunManifest, path: &Path) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "# run_id\t{}", m.run_id);
    let _ = writeln!(out, "# config_hash\t{}", m.config_hash);
    out.push_str(HEADER);
    out.push('\n');
    for e in &m.entries {
        let sample = e.sample.map_or("-".to_string(), |s| s.to_string());
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{sample}\t{}\t{}\t{}\t{}\t{}",
            e.job_id,
            e.stage,
            e.template,
            e.reality,
            e.scenario.as_deref().unwrap_or("-"),
            e.seed,
            e.status,
            e.path,
            e.elapsed_ms
        );
    }
    atomic_write(path, out.as_bytes())
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = read_to_string(path)?;
    let mut m = RunManifest::default();
    let mut header_seen = false;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let err = |msg: String| parse_error(path, ln, msg);
        if let Some(meta) = line.strip_prefix("# ") {
            match meta.split_once('\t') {
                Some(("run_id", v)) => m.run_id = v.to_string(),
                Some(("config_hash", v)) => m.config_hash = v.to_string(),
                _ => return Err(err(format!("unknown metadata {meta:?}"))),
            }
            continue;
        }
        if !header_seen {
            if line != HEADER {
                return Err(err(format!("unexpected header {line:?}")));
            }
            header_seen = true;
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 10 {
            return Err(err(format!("expected 10 fields, found {}", f.len())));
        }
        let sample = match f[4] {
            "-" => None,
            s => Some(s.parse().map_err(|e| err(format!("sample: {e}")))?),
        };
        m.entries.push(ManifestEntry {
            job_id: f[0].to_string(),
            stage: f[1].to_string(),
            template: f[2].to_string(),
            reality: f[3].to_string(),
            sample,
            scenario: (f[5] != "-").then(|| f[5].to_string()),
            seed: f[6].parse().map_err(|e| err(format!("seed: {e}")))?,
            status: f[7].parse().map_err(err)?,
            path: f[8].to_string(),
            elapsed_ms: f[9].parse().map_err(|e| err(format!("elapsed_ms: {e}")))?,
        });
    }
    if !header_seen {
        return Err(parse_error(path, text.lines().count() + 1, "missing header"));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_upsert() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.tsv");
        let entry = ManifestEntry {
            job_id: "scenario_W3_G_000_M".into(),
            stage: "scenario".into(),
            template: "W3".into(),
            reality: "G".into(),
            sample: Some(0),
            scenario: Some("M".into()),
            seed: u64::MAX,
            status: JobStatus::Done,
            path: "scenarios/scenario_W3_G_000_M.gslib".into(),
            elapsed_ms: 12,
        };
        let mut m = RunManifest {
            run_id: "abc".into(),
            config_hash: "f00".into(),
            entries: vec![entry.clone()],
        };
        let mut reality = entry.clone();
        reality.job_id = "reality_W3_G".into();
        reality.stage = "reality".into();
        reality.sample = None;
        reality.scenario = None;
        reality.status = JobStatus::Failed;
        m.upsert(reality);
        m.upsert(ManifestEntry {
            elapsed_ms: 7,
            ..entry
        });
        assert_eq!(m.entries.len(), 2);
        write_manifest(&m, &path).unwrap();
        let back = read_manifest(&path).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.count("reality", JobStatus::Failed), 1);
        assert_eq!(back.get("scenario_W3_G_000_M").unwrap().elapsed_ms, 7);

        std::fs::write(&path, "# run_id\tx\njob_id\tstage\n").unwrap();
        assert!(read_manifest(&path).is_err());
    }
}
