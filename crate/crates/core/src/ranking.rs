//! Deviation of posterior estimates from the reality and the resulting
//! model-selection curves.
//!
//! `D_R1 = |posterior - p| / p` uses the well-data prior. Sweeping the
//! prior as `p / r` instead gives
//! `D_R2(r) = |L p / (E r) - p| / p * r`, which reduces to `|L/E - r|`:
//! a V with its vertex at `r = L/E`. Both forms are evaluated and exported
//! side by side.

use std::cmp::Ordering;

use crate::bayes::{Absent, TableRow};
use crate::{Error, Result};

pub const R_MIN: f64 = 0.1;
pub const R_MAX: f64 = 3.0;

/// Tolerance under which two deviations count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// `r = 0.1, 0.2, ..., 3.0`.
pub fn r_grid() -> Vec<f64> {
    (1..=30).map(|i| i as f64 / 10.0).collect()
}

pub fn deviation_r1(posterior_raw: f64, real_proportion: f64) -> Result<f64> {
    if real_proportion.is_nan() || real_proportion <= 0.0 {
        return Err(Error::UndefinedNormalization);
    }
    Ok((posterior_raw - real_proportion).abs() / real_proportion)
}

/// Deviation with the prior set to `real_proportion / r`, evaluated term by
/// term.
pub fn d_r2_literal(likelihood: f64, evidence: f64, real_proportion: f64, r: f64) -> f64 {
    let p = real_proportion;
    ((likelihood * p) / (evidence * r) - p).abs() / p * r
}

pub fn d_r2_simplified(likelihood: f64, evidence: f64, r: f64) -> f64 {
    (likelihood / evidence - r).abs()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveKey {
    pub template: String,
    pub class: String,
    pub reality: String,
    pub scenario: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub r: f64,
    pub literal: f64,
    pub simplified: f64,
    /// False for the appended vertex.
    pub on_grid: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviationCurve {
    pub key: CurveKey,
    /// The 30 grid points, plus the vertex `L/E` when it falls strictly
    /// between grid points inside `[0.1, 3.0]`; sorted by `r`.
    pub points: Vec<CurvePoint>,
    pub vertex: f64,
    pub argmin_r: f64,
    pub d_r1: Option<f64>,
}

impl DeviationCurve {
    pub fn grid_points(&self) -> impl Iterator<Item = &CurvePoint> {
        self.points.iter().filter(|p| p.on_grid)
    }

    pub fn min_deviation(&self) -> f64 {
        self.points.iter().map(|p| p.simplified).fold(f64::INFINITY, f64::min)
    }
}

pub fn deviation_r2_curve(key: CurveKey, likelihood: f64, evidence: f64, real_proportion: f64) -> Result<DeviationCurve> {
    if evidence.is_nan() || evidence <= 0.0 {
        return Err(Error::NoEvidenceMass);
    }
    if real_proportion.is_nan() || real_proportion <= 0.0 {
        return Err(Error::UndefinedNormalization);
    }
    let point = |r: f64, on_grid| CurvePoint {
        r,
        literal: d_r2_literal(likelihood, evidence, real_proportion, r),
        simplified: d_r2_simplified(likelihood, evidence, r),
        on_grid,
    };
    let mut points: Vec<CurvePoint> = r_grid().into_iter().map(|r| point(r, true)).collect();
    let vertex = likelihood / evidence;
    if (R_MIN..=R_MAX).contains(&vertex) && !points.iter().any(|p| p.r == vertex) {
        points.push(point(vertex, false));
        points.sort_by(|a, b| a.r.total_cmp(&b.r));
    }
    let argmin_r = points
        .iter()
        .min_by(|a, b| a.simplified.total_cmp(&b.simplified))
        .map(|p| p.r)
        .unwrap_or(R_MIN);
    Ok(DeviationCurve {
        key,
        points,
        vertex,
        argmin_r,
        d_r1: None,
    })
}

/// Curve for a probability-table row, with `D_R1` from the row's
/// posterior. Absent rows and rows with a zero real proportion have no
/// curve.
pub fn curve_from_row(row: &TableRow) -> std::result::Result<DeviationCurve, String> {
    let cell = row.cell.map_err(|a: Absent| a.as_str().to_string())?;
    let key = CurveKey {
        template: row.template.clone(),
        class: row.class.clone(),
        reality: row.reality.clone(),
        scenario: row.scenario.clone(),
    };
    let mut curve = deviation_r2_curve(key, cell.likelihood, cell.evidence, row.real_proportion).map_err(|e| e.to_string())?;
    curve.d_r1 = deviation_r1(cell.posterior.raw, row.real_proportion).ok();
    Ok(curve)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalInterval {
    pub scenario: String,
    /// `None` when the scenario is never optimal inside `[0.1, 3.0]`.
    pub interval: Option<(f64, f64)>,
    /// The scenario shares its vertex with another one.
    pub tied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridWinner {
    pub r: f64,
    pub scenario: String,
    pub tied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingReport {
    pub template: String,
    pub class: String,
    pub reality: String,
    pub intervals: Vec<OptimalInterval>,
    pub grid_winners: Vec<GridWinner>,
    /// Scenarios by increasing `D_R1`; scenarios without one come last.
    pub d_r1_ranking: Vec<(String, Option<f64>)>,
    /// Scenarios left out, with the reason.
    pub excluded: Vec<(String, String)>,
}

impl RankingReport {
    /// Distinct scenarios that win at least one grid point.
    pub fn distinct_winners(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for w in &self.grid_winners {
            if !out.contains(&w.scenario.as_str()) {
                out.push(&w.scenario);
            }
        }
        out
    }

    /// Whether every scenario wins on one unbroken run of grid points.
    pub fn winners_are_contiguous(&self) -> bool {
        let mut closed: Vec<&str> = Vec::new();
        let mut current: Option<&str> = None;
        for w in &self.grid_winners {
            if current != Some(w.scenario.as_str()) {
                if closed.contains(&w.scenario.as_str()) {
                    return false;
                }
                if let Some(c) = current {
                    closed.push(c);
                }
                current = Some(&w.scenario);
            }
        }
        true
    }
}

/// Ranks the scenario curves of one (template, class, reality).
///
/// At each grid `r` the scenario with the smallest `D_R2` wins; ties go to
/// the lexicographically smaller label and are flagged. Because every curve
/// is `|L/E - r|`, each scenario's optimality region is the interval
/// between the midpoints to its neighbouring vertices.
pub fn rank_models(curves: &[DeviationCurve], excluded: &[(String, String)]) -> Result<RankingReport> {
    let first = curves.first().ok_or(Error::Empty("all curves absent"))?;
    let mut sorted: Vec<&DeviationCurve> = curves.iter().collect();
    sorted.sort_by(|a, b| a.key.scenario.cmp(&b.key.scenario));

    let mut grid_winners = Vec::new();
    for (i, r) in r_grid().into_iter().enumerate() {
        let value = |c: &DeviationCurve| c.grid_points().nth(i).map_or(f64::INFINITY, |p| p.simplified);
        let best = sorted.iter().map(|c| value(c)).fold(f64::INFINITY, f64::min);
        let winners: Vec<&&DeviationCurve> = sorted
            .iter()
            .filter(|c| value(c) - best <= TIE_TOLERANCE)
            .collect();
        grid_winners.push(GridWinner {
            r,
            scenario: winners[0].key.scenario.clone(),
            tied: winners.len() > 1,
        });
    }

    let mut by_vertex = sorted.clone();
    by_vertex.sort_by(|a, b| {
        a.vertex
            .total_cmp(&b.vertex)
            .then_with(|| a.key.scenario.cmp(&b.key.scenario))
    });
    // one representative per distinct vertex
    let mut reps: Vec<(f64, &str)> = Vec::new();
    for c in &by_vertex {
        if reps.last().is_none_or(|r| (c.vertex - r.0).abs() > TIE_TOLERANCE) {
            reps.push((c.vertex, &c.key.scenario));
        }
    }
    let mut intervals = Vec::new();
    for c in &sorted {
        let tied = by_vertex
            .iter()
            .filter(|o| (o.vertex - c.vertex).abs() <= TIE_TOLERANCE)
            .count()
            > 1;
        let interval = reps.iter().position(|r| r.1 == c.key.scenario).and_then(|i| {
            let lo = if i == 0 { f64::NEG_INFINITY } else { 0.5 * (reps[i - 1].0 + reps[i].0) };
            let hi = if i + 1 == reps.len() { f64::INFINITY } else { 0.5 * (reps[i].0 + reps[i + 1].0) };
            let (lo, hi) = (lo.max(R_MIN), hi.min(R_MAX));
            (lo < hi).then_some((lo, hi))
        });
        intervals.push(OptimalInterval {
            scenario: c.key.scenario.clone(),
            interval,
            tied,
        });
    }

    let mut d_r1_ranking: Vec<(String, Option<f64>)> = sorted
        .iter()
        .map(|c| (c.key.scenario.clone(), c.d_r1))
        .collect();
    d_r1_ranking.sort_by(|a, b| match (a.1, b.1) {
        (Some(x), Some(y)) => x.total_cmp(&y).then_with(|| a.0.cmp(&b.0)),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.0.cmp(&b.0),
    });

    Ok(RankingReport {
        template: first.key.template.clone(),
        class: first.key.class.clone(),
        reality: first.key.reality.clone(),
        intervals,
        grid_winners,
        d_r1_ranking,
        excluded: excluded.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn key(s: &str) -> CurveKey {
        CurveKey {
            template: "W3".into(),
            class: "3Q".into(),
            reality: "G".into(),
            scenario: s.into(),
        }
    }

    /// Curve with vertex `q` (likelihood q/2, evidence 1/2).
    fn v(s: &str, q: f64) -> DeviationCurve {
        deviation_r2_curve(key(s), q * 0.5, 0.5, 0.25).unwrap()
    }

    #[test]
    fn r1_values() {
        assert_abs_diff_eq!(deviation_r1(0.3, 0.25).unwrap(), 0.2, epsilon = 1e-15);
        assert_eq!(deviation_r1(0.25, 0.25).unwrap(), 0.0);
        assert!(matches!(deviation_r1(0.3, 0.0), Err(Error::UndefinedNormalization)));
    }

    #[test]
    fn r1_matches_second_code_path() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let (post, real) = (rng.random_range(0.0..2.0), rng.random_range(0.001..1.0));
            let other = if post >= real { (post - real) / real } else { (real - post) / real };
            assert!((deviation_r1(post, real).unwrap() - other).abs() <= 1e-15);
        }
    }

    #[test]
    fn grid_is_thirty_points() {
        let g = r_grid();
        assert_eq!(g.len(), 30);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[9], 1.0);
        assert_eq!(g[29], 3.0);
    }

    #[test]
    fn vertex_at_one_when_likelihood_equals_evidence() {
        let c = deviation_r2_curve(key("G"), 0.4, 0.4, 0.2).unwrap();
        assert_eq!(c.points.len(), 30, "vertex 1.0 is already on the grid");
        assert_eq!(c.argmin_r, 1.0);
        assert_eq!(c.min_deviation(), 0.0);
    }

    #[test]
    fn literal_value() {
        let c = deviation_r2_curve(key("G"), 0.6, 0.3, 0.2).unwrap();
        let p = c.points.iter().find(|p| p.r == 1.0).unwrap();
        assert_abs_diff_eq!(p.simplified, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.literal, 1.0, epsilon = 1e-12);
        assert_eq!(c.argmin_r, 2.0);
    }

    #[test]
    fn off_grid_vertex_is_appended() {
        let c = deviation_r2_curve(key("G"), 0.37, 0.3, 0.2).unwrap();
        assert_eq!(c.points.len(), 31);
        assert!(c.points.windows(2).all(|w| w[0].r < w[1].r));
        assert_eq!(c.argmin_r, 0.37 / 0.3);
        assert_eq!(c.min_deviation(), 0.0);
        let far = deviation_r2_curve(key("G"), 0.9, 0.1, 0.2).unwrap();
        assert_eq!(far.points.len(), 30);
        assert_eq!(far.argmin_r, 3.0);
    }

    #[test]
    fn curve_preconditions() {
        assert!(deviation_r2_curve(key("G"), 0.5, 0.0, 0.2).is_err());
        assert!(deviation_r2_curve(key("G"), 0.5, 0.5, 0.0).is_err());
    }

    #[test]
    fn two_curves_cross_at_midpoint() {
        let report = rank_models(&[v("A", 0.5), v("B", 2.0)], &[]).unwrap();
        assert_eq!(report.intervals[0].interval, Some((0.1, 1.25)));
        assert_eq!(report.intervals[1].interval, Some((1.25, 3.0)));
        for w in &report.grid_winners {
            let want = if w.r < 1.25 { "A" } else { "B" };
            assert_eq!(w.scenario, want, "r = {}", w.r);
            assert!(!w.tied);
        }
        assert!(report.winners_are_contiguous());
        assert_eq!(report.distinct_winners(), vec!["A", "B"]);
    }

    #[test]
    fn identical_curves_tie_everywhere() {
        let report = rank_models(&[v("M", 1.3), v("G", 1.3)], &[]).unwrap();
        assert!(report.grid_winners.iter().all(|w| w.tied && w.scenario == "G"));
        assert!(report.intervals.iter().all(|i| i.tied));
        assert_eq!(report.intervals[0].interval, Some((0.1, 3.0)));
        assert_eq!(report.intervals[1].interval, None);
    }

    #[test]
    fn d_r1_ranking_orders_by_deviation() {
        let mut a = v("A", 1.0);
        a.d_r1 = Some(0.3);
        let mut b = v("B", 1.5);
        b.d_r1 = Some(0.1);
        let c = v("C", 2.0);
        let report = rank_models(&[a, b, c], &[("D".into(), "empty class in reality".into())]).unwrap();
        let order: Vec<&str> = report.d_r1_ranking.iter().map(|x| x.0.as_str()).collect();
        assert_eq!(order, vec!["B", "A", "C"]);
        assert_eq!(report.excluded.len(), 1);
        assert!(rank_models(&[], &[]).is_err());
    }

    proptest! {
        #[test]
        fn literal_equals_simplified(l in 0.0f64..1.0, e in 1e-3f64..1.0, p in 1e-3f64..1.0) {
            let c = deviation_r2_curve(key("G"), l, e, p).unwrap();
            for pt in &c.points {
                prop_assert!((pt.literal - pt.simplified).abs() <= 1e-12);
                prop_assert!(pt.simplified >= 0.0);
            }
            // V shape: non-increasing then non-decreasing
            let vals: Vec<f64> = c.points.iter().map(|p| p.simplified).collect();
            let m = vals.iter().cloned().enumerate().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0;
            prop_assert!(vals[..=m].windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(vals[m..].windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn optimal_regions_are_contiguous(qs in prop::collection::vec(0.0f64..4.0, 2..5)) {
            let labels = ["A", "B", "C", "D", "E"];
            let curves: Vec<DeviationCurve> = qs.iter().zip(labels).map(|(q, s)| v(s, *q)).collect();
            let report = rank_models(&curves, &[]).unwrap();
            prop_assert!(report.winners_are_contiguous());
            for w in &report.grid_winners {
                if w.tied { continue; }
                let iv = report.intervals.iter().find(|i| i.scenario == w.scenario).unwrap();
                let (lo, hi) = iv.interval.unwrap();
                prop_assert!(w.r >= lo - 1e-9 && w.r <= hi + 1e-9);
            }
        }

        #[test]
        fn r1_relates_to_r2_at_matching_coefficient(l in 0.01f64..1.0, e in 0.01f64..1.0, p in 0.01f64..1.0, prior in 0.01f64..1.0) {
            // The ratio prior p / r equals `prior` at r* = p / prior. With the
            // trailing factor r in D_R2, D_R1 = D_R2(r*) / r*.
            let r_star = p / prior;
            let post = crate::bayes::posterior(l, prior, e).unwrap().raw;
            let d1 = deviation_r1(post, p).unwrap();
            let d2 = d_r2_literal(l, e, p, r_star);
            prop_assert!((d1 - d2 / r_star).abs() <= 1e-12 * (1.0 + d1));
        }
    }
}
