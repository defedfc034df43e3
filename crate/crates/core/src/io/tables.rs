use std::fmt::Write as _;
use std::path::Path;

use super::{atomic_write, parse_error, read_to_string};
use crate::bayes::{Absent, CellProbabilities, Posterior, ProbabilityTable, TableRow};
use crate::ranking::{DeviationCurve, RankingReport};
use crate::Result;

const PROBABILITY_HEADER: [&str; 12] = [
    "template",
    "class",
    "reality",
    "scenario",
    "prior",
    "evidence",
    "likelihood",
    "posterior_raw",
    "posterior_clamped",
    "real_proportion",
    "m",
    "note",
];

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// One row per (template, class, reality, scenario). Absent cells carry
/// `NA` probabilities and the reason in `note`.
pub fn render_probabilities(table: &ProbabilityTable) -> Vec<u8> {
    csv_bytes(
        &PROBABILITY_HEADER,
        table.rows.iter().map(|r| {
            let mut rec = vec![r.template.clone(), r.class.clone(), r.reality.clone(), r.scenario.clone()];
            match &r.cell {
                Ok(c) => rec.extend(
                    [c.prior, c.evidence, c.likelihood, c.posterior.raw, c.posterior.clamped].map(|v| v.to_string()),
                ),
                Err(_) => rec.extend(std::iter::repeat_n("NA".to_string(), 5)),
            }
            rec.push(r.real_proportion.to_string());
            rec.push(r.m.to_string());
            rec.push(r.cell.err().map_or("", |a| a.as_str()).to_string());
            rec
        }),
    )
}

pub fn write_probabilities(table: &ProbabilityTable, path: &Path) -> Result<()> {
    atomic_write(path, &render_probabilities(table))
}

pub fn read_probabilities(path: &Path) -> Result<Vec<TableRow>> {
    let text = read_to_string(path)?;
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| parse_error(path, 1, e.to_string()))?.clone();
    if header.iter().ne(PROBABILITY_HEADER) {
        return Err(parse_error(path, 1, "unexpected probability table header"));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| parse_error(path, line, e.to_string()))?;
        let num = |k: usize| -> Result<f64> {
            rec[k]
                .parse::<f64>()
                .map_err(|e| parse_error(path, line, format!("column {}: {e}", PROBABILITY_HEADER[k])))
        };
        let cell = match &rec[11] {
            "" => Ok(CellProbabilities {
                prior: num(4)?,
                evidence: num(5)?,
                likelihood: num(6)?,
                posterior: Posterior {
                    raw: num(7)?,
                    clamped: num(8)?,
                },
            }),
            n if n == Absent::EmptyClassInReality.as_str() => Err(Absent::EmptyClassInReality),
            n if n == Absent::NoEvidenceMass.as_str() => Err(Absent::NoEvidenceMass),
            n => return Err(parse_error(path, line, format!("unknown note {n:?}"))),
        };
        rows.push(TableRow {
            template: rec[0].to_string(),
            class: rec[1].to_string(),
            reality: rec[2].to_string(),
            scenario: rec[3].to_string(),
            real_proportion: num(9)?,
            m: rec[10]
                .parse()
                .map_err(|e| parse_error(path, line, format!("column m: {e}")))?,
            cell,
        });
    }
    Ok(rows)
}

/// The 30 grid points of every curve.
pub fn render_curves(curves: &[DeviationCurve]) -> Vec<u8> {
    csv_bytes(
        &["template", "class", "reality", "scenario", "r", "d_r2_literal", "d_r2_simplified"],
        curves.iter().flat_map(|c| {
            c.grid_points().map(move |p| {
                vec![
                    c.key.template.clone(),
                    c.key.class.clone(),
                    c.key.reality.clone(),
                    c.key.scenario.clone(),
                    p.r.to_string(),
                    p.literal.to_string(),
                    p.simplified.to_string(),
                ]
            })
        }),
    )
}

pub fn write_curves(curves: &[DeviationCurve], path: &Path) -> Result<()> {
    atomic_write(path, &render_curves(curves))
}

fn fmt_bound(v: f64) -> String {
    format!("{v:.4}")
}

/// Plain-text report: per (template, class, reality), the interval of `r`
/// where each scenario has the lowest deviation, the winner at each grid
/// point and the `D_R1` ordering.
pub fn render_ranking(reports: &[RankingReport], skipped: &[(String, String)]) -> String {
    let mut out = String::new();
    for rep in reports {
        let _ = writeln!(out, "[{} {} {}]", rep.template, rep.class, rep.reality);
        for iv in &rep.intervals {
            let tie = if iv.tied { " (tied)" } else { "" };
            match iv.interval {
                Some((lo, hi)) => {
                    let _ = writeln!(out, "optimal\t{}\t[{}, {}]{tie}", iv.scenario, fmt_bound(lo), fmt_bound(hi));
                }
                None => {
                    let _ = writeln!(out, "optimal\t{}\tnever{tie}", iv.scenario);
                }
            }
        }
        let winners: Vec<String> = rep
            .grid_winners
            .iter()
            .map(|w| format!("{}{}", w.scenario, if w.tied { "*" } else { "" }))
            .collect();
        let _ = writeln!(out, "grid\t{}", winners.join(" "));
        let r1: Vec<String> = rep
            .d_r1_ranking
            .iter()
            .map(|(s, d)| match d {
                Some(d) => format!("{s}={d}"),
                None => format!("{s}=NA"),
            })
            .collect();
        let _ = writeln!(out, "d_r1\t{}", r1.join(" "));
        for (s, why) in &rep.excluded {
            let _ = writeln!(out, "excluded\t{s}\t{why}");
        }
        out.push('\n');
    }
    for (group, why) in skipped {
        let _ = writeln!(out, "skipped\t{group}\t{why}");
    }
    out
}

pub fn write_ranking(reports: &[RankingReport], skipped: &[(String, String)], path: &Path) -> Result<()> {
    atomic_write(path, render_ranking(reports, skipped).as_bytes())
}
