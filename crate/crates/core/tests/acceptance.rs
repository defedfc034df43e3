//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use geoboot::bayes::{compute_cell, evidence, likelihood, posterior, prior_frequentist, PriorMode, TableRow};
use geoboot::bootstrap::{draw_samples, extract_wells, simulate_reality, RealityKey, VariogramSpec};
use geoboot::io::{self, Config, JobStatus};
use geoboot::model::{classes_from_quartiles, Grid3D, GridShape, PorosityClass, WellSet, WellTemplate};
use geoboot::pipeline::{self, cmd_run_all, reference_values, RunOptions};
use geoboot::ranking::R_MIN;
use geoboot::seed::derive_seed;
use geoboot::simulate::{dss_simulate, experimental_variogram, fit_spherical_range, GlobalCdf, LagPoint, SimulationConfig};
use geoboot::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Runs {
    desk_j8: PathBuf,
    desk_j1: PathBuf,
    m50: PathBuf,
    desk_time: Duration,
    m50_time: Duration,
}

fn run(config: Config, out: &Path, jobs: usize) -> Result<Duration, Error> {
    let start = Instant::now();
    cmd_run_all(
        config,
        &RunOptions {
            out: out.to_path_buf(),
            jobs,
            resume: false,
        },
    )?;
    Ok(start.elapsed())
}

fn table(dir: &Path) -> Vec<TableRow> {
    io::read_probabilities(&dir.join(pipeline::PROBABILITIES_FILE)).expect("probability table")
}

fn criterion_1(runs: &Runs) -> Outcome {
    let count = |dir: &Path| {
        let m = io::read_manifest(&dir.join(pipeline::MANIFEST_FILE)).unwrap();
        (m.count("scenario", JobStatus::Done), m.count("reality", JobStatus::Done))
    };
    let (s50, r50) = count(&runs.m50);
    let (s10, r10) = count(&runs.desk_j8);
    let pass = s50 == 1350
        && r50 == 9
        && s10 == 270
        && r10 == 9
        && runs.m50_time < Duration::from_secs(30 * 60)
        && runs.desk_time < Duration::from_secs(5 * 60);
    outcome(
        pass,
        format!(
            "m=50: {s50} scenarios, {r50} realities in {:.1}s; m=10: {s10} scenarios, {r10} realities in {:.1}s ({} cpu(s) available)",
            runs.m50_time.as_secs_f64(),
            runs.desk_time.as_secs_f64(),
            std::thread::available_parallelism().map_or(1, |n| n.get())
        ),
    )
}

fn criterion_2(runs: &Runs) -> Outcome {
    let mut points = 0usize;
    let mut curves = 0usize;
    let mut worst = 0.0f64;
    let mut vertex_checked = 0usize;
    let mut bad_vertex = 0usize;
    for dir in [&runs.desk_j8, &runs.m50] {
        let (cs, _, _) = pipeline::rank_rows(&table(dir)).unwrap();
        for c in &cs {
            curves += 1;
            for p in c.grid_points() {
                points += 1;
                worst = worst.max((p.literal - p.simplified).abs());
            }
            if (R_MIN..=3.0).contains(&c.vertex) {
                vertex_checked += 1;
                let at = c.points.iter().find(|p| p.r == c.vertex).unwrap();
                let left_ok = c.points.windows(2).all(|w| w[1].r > c.vertex || w[1].simplified <= w[0].simplified);
                let right_ok = c.points.windows(2).all(|w| w[0].r < c.vertex || w[1].simplified >= w[0].simplified);
                if !(at.simplified == 0.0 && at.literal <= 1e-12 && c.min_deviation() == 0.0 && left_ok && right_ok) {
                    bad_vertex += 1;
                }
            }
        }
    }
    let pass = points == curves * 30 && worst <= 1e-12 && bad_vertex == 0 && curves > 0;
    outcome(
        pass,
        format!(
            "{curves} curves, {points} points, max |literal - simplified| = {worst:e}; {vertex_checked} in-range vertices, {bad_vertex} not V-shaped at 0"
        ),
    )
}

fn in_class(v: f64, lo: f64, hi: f64) -> bool {
    lo <= v && v < hi
}

/// Straight counting over (x, y, z) loops, independent of the library.
fn brute(
    reality: &Grid3D,
    wells: &[WellSet],
    scenarios: &[Grid3D],
    lo: f64,
    hi: f64,
) -> (f64, f64, Option<f64>) {
    let s = reality.shape();
    let mut prior = 0.0;
    for w in wells {
        let vals: Vec<f64> = w.data().iter().flatten().copied().collect();
        prior += vals.iter().filter(|&&v| in_class(v, lo, hi)).count() as f64 / vals.len() as f64;
    }
    prior /= wells.len() as f64;
    let mut ev = 0.0;
    let (mut joint, mut support) = (0usize, 0usize);
    for g in scenarios {
        let mut n = 0usize;
        for z in 0..s.nz {
            for y in 0..s.ny {
                for x in 0..s.nx {
                    let sv = g.get(x, y, z);
                    if in_class(sv, lo, hi) {
                        n += 1;
                    }
                    if in_class(reality.get(x, y, z), lo, hi) {
                        support += 1;
                        if in_class(sv, lo, hi) {
                            joint += 1;
                        }
                    }
                }
            }
        }
        ev += n as f64 / s.len() as f64;
    }
    ev /= scenarios.len() as f64;
    let l = (support > 0).then(|| joint as f64 / support as f64);
    (prior, ev, l)
}

fn criterion_3(runs: &Runs) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut mismatched_absence = 0;
    let instances = 200;
    for _ in 0..instances {
        let shape = GridShape::new(rng.random_range(1..=5), rng.random_range(1..=5), rng.random_range(1..=2)).unwrap();
        let grid = |rng: &mut ChaCha8Rng| {
            let v = (0..shape.len()).map(|_| rng.random_range(0..8) as f64 * 2.5).collect();
            Grid3D::new(shape, v).unwrap()
        };
        let reality = grid(&mut rng);
        let n = rng.random_range(1..=3);
        let scenarios: Vec<Grid3D> = (0..n).map(|_| grid(&mut rng)).collect();
        let cols: Vec<(i64, i64)> = {
            let mut c = vec![(0, 0)];
            if shape.nx > 1 {
                c.push((shape.nx as i64 - 1, rng.random_range(0..shape.ny as i64)));
            }
            c
        };
        let t = Arc::new(WellTemplate::new("t", cols).unwrap());
        let ((x0, x1), (y0, y1)) = t.valid_offsets(shape).unwrap();
        let wells: Vec<WellSet> = (0..rng.random_range(1..=3))
            .map(|_| extract_wells(&reality, &t, (rng.random_range(x0..=x1), rng.random_range(y0..=y1))).unwrap())
            .collect();
        let lo = rng.random_range(0..8) as f64 * 2.5;
        let hi = lo + rng.random_range(1..=4) as f64 * 2.5;
        let class = PorosityClass::new("c", lo, hi).unwrap();

        let (bp, be, bl) = brute(&reality, &wells, &scenarios, lo, hi);
        let p = prior_frequentist(&wells, &class).unwrap();
        let e = evidence(&scenarios, &class).unwrap();
        worst = worst.max((p - bp).abs()).max((e - be).abs());
        match (likelihood(&reality, &scenarios, &class), bl) {
            (Ok(l), Some(b)) => {
                worst = worst.max((l - b).abs());
                match posterior(l, p, e) {
                    Ok(post) => worst = worst.max((post.raw - b * bp / be).abs()),
                    Err(Error::NoEvidenceMass) if be == 0.0 => {}
                    Err(_) => mismatched_absence += 1,
                }
            }
            (Err(Error::EmptyClassInReality), None) => {}
            _ => mismatched_absence += 1,
        }
    }

    let mut cells = 0usize;
    let mut worst_identity = 0.0f64;
    for dir in [&runs.desk_j8, &runs.m50] {
        for row in table(dir) {
            if let Ok(c) = row.cell {
                cells += 1;
                worst_identity = worst_identity.max((c.posterior.raw * c.evidence - c.likelihood * c.prior).abs());
            }
        }
    }
    let pass = worst <= 1e-15 && mismatched_absence == 0 && worst_identity <= 1e-12 && cells > 0;
    outcome(
        pass,
        format!(
            "{instances} random instances: max oracle gap {worst:e}, {mismatched_absence} absence mismatches; {cells} table cells: max |post*E - L*prior| = {worst_identity:e}"
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut config = Config::desk();
    config.grid.nx = 10;
    config.grid.ny = 10;
    config.grid.nz = 2;
    config.variograms = vec![VariogramSpec::new("G", [5.0, 5.0, 1.0])];
    config.templates = vec![io::TemplateSpec {
        name: "W".into(),
        columns: vec![[1, 1], [8, 3], [4, 8]],
    }];
    config.bootstrap.samples = 3;
    let plan = config.plan().unwrap();
    let initial = pipeline::make_initial(&config).unwrap();
    let key = RealityKey { template: 0, reality: 0 };
    let reality = simulate_reality(&plan, &initial, key).unwrap().grid;
    let wells = draw_samples(&plan, &reality, key).unwrap();
    let scenarios = vec![reality.clone(); 3];
    let classes = classes_from_quartiles(&initial).unwrap();
    let mut checked = 0;
    let mut failures = Vec::new();
    for class in &classes {
        let (real, cell) = compute_cell(&reality, &wells, &scenarios, class, PriorMode::Ratio(1.0)).unwrap();
        match cell {
            Ok(c) => {
                checked += 1;
                if c.likelihood != 1.0 || c.prior != real || (c.posterior.raw - 1.0).abs() > 1e-12 {
                    failures.push(format!("{}: L={} prior={} post={}", class.label, c.likelihood, c.prior, c.posterior.raw));
                }
            }
            Err(_) if real == 0.0 => {}
            Err(a) => failures.push(format!("{}: {}", class.label, a.as_str())),
        }
    }
    outcome(
        failures.is_empty() && checked > 0,
        format!("10x10x2 run, {checked} non-empty classes; likelihood = 1 and posterior = 1 (within 1e-12){}", if failures.is_empty() { String::new() } else { format!("; failures: {failures:?}") }),
    )
}

fn criterion_5(runs: &Runs) -> Outcome {
    let dir = &runs.desk_j8;
    let config = io::read_config(&dir.join(pipeline::CONFIG_FILE), true).unwrap();
    let plan = config.plan().unwrap();
    let shape = config.shape().unwrap();
    let initial = io::read_grid(&dir.join(pipeline::INITIAL_FILE)).unwrap();
    let (mut cond_total, mut cond_ok, mut sets_total, mut sets_ok) = (0usize, 0usize, 0usize, 0usize);
    for key in plan.reality_keys() {
        let template = &plan.templates[key.template];
        let reality = io::read_grid(&dir.join(format!("realities/{}.gslib", plan.reality_id(key)))).unwrap();
        let honors = |grid: &Grid3D, ws: &WellSet| {
            ws.conditioning(shape).unwrap().iter().all(|&(i, v)| grid.values()[i] == v)
        };
        cond_total += 1;
        let here = extract_wells(&initial, template, (0, 0)).unwrap();
        if honors(&reality, &here) {
            cond_ok += 1;
        }
        for i in 0..plan.samples {
            let ws = io::read_well_set(&dir.join(format!("samples/{}.tsv", plan.well_set_id(key, i))), template).unwrap();
            sets_total += 1;
            let drilled = extract_wells(&reality, template, ws.offset()).unwrap();
            if ws.pairwise_differences() == template.pairwise_differences() && drilled == ws {
                sets_ok += 1;
            }
            for s in 0..plan.scenario_variograms.len() {
                let sk = geoboot::bootstrap::ScenarioKey {
                    template: key.template,
                    reality: key.reality,
                    sample: i,
                    scenario: s,
                };
                let g = io::read_grid(&dir.join(format!("scenarios/{}.gslib", plan.scenario_id(sk)))).unwrap();
                cond_total += 1;
                if honors(&g, &ws) {
                    cond_ok += 1;
                }
            }
        }
    }
    outcome(
        cond_ok == cond_total && sets_ok == sets_total && cond_total == 279,
        format!("conditioning honored in {cond_ok}/{cond_total} realizations; template offsets preserved in {sets_ok}/{sets_total} well sets"),
    )
}

fn ks_distance(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

fn pooled(points: &[Vec<LagPoint>]) -> Vec<LagPoint> {
    let mut out: Vec<LagPoint> = Vec::new();
    for set in points {
        for p in set {
            match out.iter_mut().find(|o| o.lag == p.lag) {
                Some(o) => {
                    let pairs = o.pairs + p.pairs;
                    o.semivariance = (o.semivariance * o.pairs as f64 + p.semivariance * p.pairs as f64) / pairs as f64;
                    o.pairs = pairs;
                }
                None => out.push(*p),
            }
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let scale = 40.0 / 330.0;
    let target = reference_values(&Config::desk()).unwrap();
    let cdf = GlobalCdf::from_values(target.iter().copied()).unwrap();
    let shape = GridShape::new(40, 40, 1).unwrap();
    let lags: Vec<usize> = (1..=20).collect();
    let mut lines = Vec::new();
    let mut pass = true;
    for (label, ranges) in [("G", [165.0, 65.0]), ("M", [110.0, 45.0]), ("P", [60.0, 25.0])] {
        let model_ranges = [ranges[0] * scale, ranges[1] * scale];
        let spec = VariogramSpec::new(label, [model_ranges[0], model_ranges[1], 1.0]);
        let vg = spec.resolve(&cdf).unwrap();
        let mut values = Vec::new();
        let (mut gx, mut gy) = (Vec::new(), Vec::new());
        for r in 0..30u64 {
            let sim = SimulationConfig::new(vg.clone(), cdf.clone(), derive_seed(6, &[label.as_bytes()[0] as u64, r]));
            let g = dss_simulate(None, shape, &sim).unwrap().grid;
            gx.push(experimental_variogram(&g, [1, 0, 0], &lags).unwrap());
            gy.push(experimental_variogram(&g, [0, 1, 0], &lags).unwrap());
            values.extend_from_slice(g.values());
        }
        let ks = ks_distance(values, target.clone());
        let fx = fit_spherical_range(&pooled(&gx)).unwrap().range;
        let fy = fit_spherical_range(&pooled(&gy)).unwrap().range;
        let ex = (fx - model_ranges[0]).abs() / model_ranges[0];
        let ey = (fy - model_ranges[1]).abs() / model_ranges[1];
        let ok = ks < 0.05 && ex <= 0.25 && ey <= 0.25;
        pass &= ok;
        lines.push(format!(
            "{label}: KS {ks:.4}, x range {fx:.2} vs {:.2} ({:+.0}%), y range {fy:.2} vs {:.2} ({:+.0}%)",
            model_ranges[0],
            100.0 * (fx - model_ranges[0]) / model_ranges[0],
            model_ranges[1],
            100.0 * (fy - model_ranges[1]) / model_ranges[1]
        ));
    }
    outcome(pass, lines.join("; "))
}

fn criterion_7(runs: &Runs) -> Outcome {
    let (_, reports, _) = pipeline::rank_rows(&table(&runs.desk_j8)).unwrap();
    let three: Vec<_> = reports.iter().filter(|r| r.intervals.len() == 3 && r.excluded.is_empty()).collect();
    let contiguous = three.iter().filter(|r| r.winners_are_contiguous()).count();
    let qualifying: Vec<_> = three
        .iter()
        .filter(|r| r.winners_are_contiguous() && r.distinct_winners().len() >= 2)
        .collect();
    let example = qualifying
        .first()
        .map(|r| {
            let iv: Vec<String> = r
                .intervals
                .iter()
                .map(|i| match i.interval {
                    Some((a, b)) => format!("{} [{a:.3}, {b:.3}]", i.scenario),
                    None => format!("{} never", i.scenario),
                })
                .collect();
            format!("; e.g. {} {} {}: {}", r.template, r.class, r.reality, iv.join(", "))
        })
        .unwrap_or_default();
    outcome(
        !qualifying.is_empty(),
        format!(
            "{} three-curve groups, {contiguous} with contiguous regions, {} with >= 2 optimal scenarios{example}",
            three.len(),
            qualifying.len()
        ),
    )
}

fn criterion_8(runs: &Runs) -> Outcome {
    let same = |f: &str| std::fs::read(runs.desk_j1.join(f)).unwrap() == std::fs::read(runs.desk_j8.join(f)).unwrap();
    let p = same(pipeline::PROBABILITIES_FILE);
    let c = same(pipeline::CURVES_FILE);
    outcome(
        p && c,
        format!("jobs 1 vs 8: probabilities.csv identical: {p}, deviation_curves.csv identical: {c}"),
    )
}

fn main() -> ExitCode {
    let work = tempfile::tempdir().expect("temp dir");
    let desk_j8 = work.path().join("desk_j8");
    let desk_j1 = work.path().join("desk_j1");
    let m50 = work.path().join("m50");
    let mut config50 = Config::desk();
    config50.bootstrap.samples = 50;

    let desk_time = run(Config::desk(), &desk_j8, 8).expect("desk run, 8 workers");
    run(Config::desk(), &desk_j1, 1).expect("desk run, 1 worker");
    let m50_time = run(config50, &m50, 8).expect("m=50 run");
    let runs = Runs {
        desk_j8,
        desk_j1,
        m50,
        desk_time,
        m50_time,
    };

    let results = [
        ("simulation count", criterion_1(&runs)),
        ("deviation identity", criterion_2(&runs)),
        ("bayes oracle", criterion_3(&runs)),
        ("perfect scenario", criterion_4()),
        ("conditioning and templates", criterion_5(&runs)),
        ("simulation statistics", criterion_6()),
        ("optimality intervals", criterion_7(&runs)),
        ("determinism", criterion_8(&runs)),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("criterion {} ({name}): {} - {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
