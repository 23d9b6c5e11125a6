//! Batch runs and the aggregates computed from them.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context};
use mcis_core::{solve, SolverConfig};
use rayon::prelude::*;
use serde::Serialize;

use crate::format::{read_graph, InputOptions};
use crate::report::InstanceReport;

/// Stack for solver threads; recursion depth grows with the order of G.
pub const SOLVER_STACK_BYTES: usize = 512 << 20;

/// Shortest time used as a divisor in speedups.
const MIN_TIME: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub id: String,
    pub g: PathBuf,
    pub h: PathBuf,
}

/// Reads `g h [id]` lines. Blank lines and `#` comments are skipped, relative
/// paths are resolved against `base`, and the id defaults to `g|h` as written.
pub fn parse_manifest(text: &str, base: &Path) -> anyhow::Result<Vec<ManifestEntry>> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (g, h, id) = match fields.as_slice() {
            [g, h] => (*g, *h, format!("{g}|{h}")),
            [g, h, id] => (*g, *h, id.to_string()),
            _ => bail!("manifest line {}: expected `g h [id]`", i + 1),
        };
        entries.push(ManifestEntry { id, g: base.join(g), h: base.join(h) });
    }
    Ok(entries)
}

pub fn read_manifest(path: &Path) -> anyhow::Result<Vec<ManifestEntry>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_manifest(&text, path.parent().unwrap_or(Path::new(".")))
}

#[derive(Clone, Debug)]
pub struct BatchOptions {
    pub input: InputOptions,
    pub timeout: Option<Duration>,
    /// Worker threads; 0 picks the number of available cores.
    pub jobs: usize,
    /// Instances every config solves within this many seconds count as easy.
    pub easy_threshold: f64,
    /// Instances no config solves within this many seconds count as hard.
    pub hard_threshold: f64,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions {
            input: InputOptions::default(),
            timeout: Some(Duration::from_secs(1800)),
            jobs: 0,
            easy_threshold: 10.0,
            hard_threshold: 1800.0,
        }
    }
}

/// Parses both graphs and solves once.
pub fn run_instance(
    id: &str,
    g_path: &Path,
    h_path: &Path,
    config: &SolverConfig,
    input: InputOptions,
) -> anyhow::Result<InstanceReport> {
    let g = read_graph(g_path, input)?;
    let h = read_graph(h_path, input)?;
    let solution = solve(&g.graph, &h.graph, config)?;
    Ok(InstanceReport::from_stats(id, config.name(), &solution.stats))
}

/// Runs every config on every entry in parallel. Reports come back in
/// manifest order, configs in the order given; failures become reports with
/// `error` set.
pub fn run_batch(entries: &[ManifestEntry], configs: &[SolverConfig], options: &BatchOptions) -> Vec<InstanceReport> {
    let tasks: Vec<(&ManifestEntry, SolverConfig)> = entries
        .iter()
        .flat_map(|e| {
            configs.iter().map(move |c| {
                let mut c = c.clone();
                c.timeout = options.timeout;
                (e, c)
            })
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .stack_size(SOLVER_STACK_BYTES)
        .build()
        .expect("failed to start worker threads");
    pool.install(|| {
        tasks
            .par_iter()
            .map(|(e, config)| {
                run_instance(&e.id, &e.g, &e.h, config, options.input)
                    .unwrap_or_else(|err| InstanceReport::failed(&e.id, config.name(), format!("{err:#}")))
            })
            .collect()
    })
}

fn solved(r: &InstanceReport) -> bool {
    r.completed && r.error.is_none()
}

fn by_instance<'a>(reports: &'a [InstanceReport], config: &str) -> BTreeMap<&'a str, &'a InstanceReport> {
    reports
        .iter()
        .filter(|r| r.config == config)
        .map(|r| (r.instance.as_str(), r))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub config: String,
    pub time_bound: f64,
    pub solved: usize,
}

/// Instances solved within each time bound, per config. The bounds are the
/// distinct solve times seen across all configs, so each curve is a step
/// function sampled at every step.
pub fn cumulative_solved(reports: &[InstanceReport], configs: &[&str]) -> Vec<CurvePoint> {
    let mut bounds: Vec<f64> = reports.iter().filter(|r| solved(r)).map(|r| r.wall_time).collect();
    bounds.sort_by(f64::total_cmp);
    bounds.dedup();
    let mut points = Vec::new();
    for &config in configs {
        let mut times: Vec<f64> = reports
            .iter()
            .filter(|r| r.config == config && solved(r))
            .map(|r| r.wall_time)
            .collect();
        times.sort_by(f64::total_cmp);
        for &t in &bounds {
            let solved = times.partition_point(|&x| x <= t);
            points.push(CurvePoint { config: config.to_string(), time_bound: t, solved });
        }
    }
    points
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub a: String,
    pub b: String,
    pub instances: usize,
    pub solved_a: usize,
    pub solved_b: usize,
    pub co_solved: usize,
    /// `time_b / time_a` averaged over instances both solved.
    pub mean_speedup: Option<f64>,
    pub max_speedup: Option<f64>,
    pub co_unsolved: usize,
    /// Mean of `size_a - size_b` over instances neither solved.
    pub mean_delta: Option<f64>,
    /// Share of `a` runs, in percent, where symmetry rules pruned more than
    /// the bound.
    pub high_sym_pruning_pct: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaRow {
    pub instance: String,
    pub a: String,
    pub b: String,
    pub size_a: usize,
    pub size_b: usize,
    pub delta: i64,
}

/// Incumbent size differences on instances neither config solved.
pub fn delta_rows(reports: &[InstanceReport], a: &str, b: &str) -> Vec<DeltaRow> {
    let ra = by_instance(reports, a);
    let rb = by_instance(reports, b);
    ra.iter()
        .filter_map(|(id, x)| rb.get(id).map(|y| (id, x, y)))
        .filter(|(_, x, y)| !solved(x) && !solved(y) && x.error.is_none() && y.error.is_none())
        .map(|(id, x, y)| DeltaRow {
            instance: id.to_string(),
            a: a.to_string(),
            b: b.to_string(),
            size_a: x.incumbent_size,
            size_b: y.incumbent_size,
            delta: x.incumbent_size as i64 - y.incumbent_size as i64,
        })
        .collect()
}

pub fn high_sym_pruning_pct(reports: &[InstanceReport], config: &str) -> f64 {
    let runs: Vec<_> = reports.iter().filter(|r| r.config == config && r.error.is_none()).collect();
    if runs.is_empty() {
        return 0.0;
    }
    100.0 * runs.iter().filter(|r| r.high_sym_pruning()).count() as f64 / runs.len() as f64
}

pub fn compare(reports: &[InstanceReport], a: &str, b: &str) -> Comparison {
    let ra = by_instance(reports, a);
    let rb = by_instance(reports, b);
    let speedups: Vec<f64> = ra
        .iter()
        .filter_map(|(id, x)| rb.get(id).map(|y| (x, y)))
        .filter(|(x, y)| solved(x) && solved(y))
        .map(|(x, y)| y.wall_time.max(MIN_TIME) / x.wall_time.max(MIN_TIME))
        .collect();
    let deltas = delta_rows(reports, a, b);
    let mean = |xs: &[f64]| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);
    Comparison {
        a: a.to_string(),
        b: b.to_string(),
        instances: ra.keys().filter(|id| rb.contains_key(*id)).count(),
        solved_a: ra.values().filter(|r| solved(r)).count(),
        solved_b: rb.values().filter(|r| solved(r)).count(),
        co_solved: speedups.len(),
        mean_speedup: mean(&speedups),
        max_speedup: speedups.iter().copied().reduce(f64::max),
        co_unsolved: deltas.len(),
        mean_delta: mean(&deltas.iter().map(|d| d.delta as f64).collect::<Vec<_>>()),
        high_sym_pruning_pct: high_sym_pruning_pct(reports, a),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub configs: Vec<ConfigSummary>,
    /// Solved by every config within the easy threshold.
    pub easy: usize,
    /// Solved by no config within the hard threshold.
    pub hard: usize,
    pub easy_threshold: f64,
    pub hard_threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigSummary {
    pub config: String,
    pub solved: usize,
    pub failed: usize,
    pub high_sym_pruning_pct: f64,
}

pub fn summarize(reports: &[InstanceReport], configs: &[&str], options: &BatchOptions) -> Summary {
    let instances: BTreeSet<&str> = reports.iter().map(|r| r.instance.as_str()).collect();
    let mut per_instance: BTreeMap<&str, Vec<&InstanceReport>> = BTreeMap::new();
    for r in reports {
        per_instance.entry(&r.instance).or_default().push(r);
    }
    let within = |r: &InstanceReport, t: f64| solved(r) && r.wall_time <= t;
    Summary {
        instances: instances.len(),
        configs: configs
            .iter()
            .map(|&c| ConfigSummary {
                config: c.to_string(),
                solved: reports.iter().filter(|r| r.config == c && solved(r)).count(),
                failed: reports.iter().filter(|r| r.config == c && r.error.is_some()).count(),
                high_sym_pruning_pct: high_sym_pruning_pct(reports, c),
            })
            .collect(),
        easy: per_instance
            .values()
            .filter(|rs| rs.iter().all(|r| within(r, options.easy_threshold)))
            .count(),
        hard: per_instance
            .values()
            .filter(|rs| !rs.iter().any(|r| within(r, options.hard_threshold)))
            .count(),
        easy_threshold: options.easy_threshold,
        hard_threshold: options.hard_threshold,
    }
}

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> anyhow::Result<()> {
    // Headers are written by hand so an empty table still gets one.
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `reports.jsonl`, `cumulative.csv`, `comparison.csv`, `delta.csv`
/// and `summary.json` into `dir`. Comparisons pit the first config against
/// each of the others that shares at least one instance with it.
pub fn write_outputs(
    dir: &Path,
    reports: &[InstanceReport],
    configs: &[&str],
    options: &BatchOptions,
) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut jsonl = std::io::BufWriter::new(fs::File::create(dir.join("reports.jsonl"))?);
    for r in reports {
        serde_json::to_writer(&mut jsonl, r)?;
        jsonl.write_all(b"\n")?;
    }
    jsonl.flush()?;

    write_csv(&dir.join("cumulative.csv"), &["config", "time_bound", "solved"], &cumulative_solved(reports, configs))?;

    let (comparisons, deltas): (Vec<_>, Vec<_>) = match configs.split_first() {
        Some((&a, rest)) => rest
            .iter()
            .map(|&b| (compare(reports, a, b), delta_rows(reports, a, b)))
            .filter(|(c, _)| c.instances > 0)
            .unzip(),
        None => (Vec::new(), Vec::new()),
    };
    write_csv(
        &dir.join("comparison.csv"),
        &[
            "a",
            "b",
            "instances",
            "solved_a",
            "solved_b",
            "co_solved",
            "mean_speedup",
            "max_speedup",
            "co_unsolved",
            "mean_delta",
            "high_sym_pruning_pct",
        ],
        &comparisons,
    )?;
    write_csv(
        &dir.join("delta.csv"),
        &["instance", "a", "b", "size_a", "size_b", "delta"],
        &deltas.concat(),
    )?;

    let summary = summarize(reports, configs, options);
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(instance: &str, config: &str, size: usize, completed: bool, time: f64) -> InstanceReport {
        InstanceReport {
            instance: instance.into(),
            config: config.into(),
            incumbent_size: size,
            completed,
            wall_time: time,
            symmetry_time: 0.0,
            branches: 10,
            bound_prunes: 2,
            var_sym_prunes: 0,
            val_sym_prunes: 0,
            time_to_best: 0.0,
            branches_to_best: 1,
            sym_to_bound_ratio: 0.0,
            error: None,
        }
    }

    #[test]
    fn manifest_lines() {
        let entries = parse_manifest("# pairs\na.lad b.lad\n\nc d first # trailing\n", Path::new("/data")).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].id, "a.lad|b.lad");
        assert_eq!(entries[0].g, PathBuf::from("/data/a.lad"));
        assert_eq!(entries[1].id, "first");
        assert!(parse_manifest("only-one\n", Path::new(".")).is_err());
    }

    #[test]
    fn comparison_metrics() {
        let reports = vec![
            report("x", "dual", 5, true, 1.0),
            report("x", "none", 5, true, 4.0),
            report("y", "dual", 6, true, 0.5),
            report("y", "none", 6, true, 1.0),
            report("z", "dual", 7, false, 9.0),
            report("z", "none", 5, false, 9.0),
        ];
        let c = compare(&reports, "dual", "none");
        assert_eq!((c.co_solved, c.co_unsolved, c.instances), (2, 1, 3));
        assert_eq!(c.mean_speedup, Some(3.0));
        assert_eq!(c.max_speedup, Some(4.0));
        assert_eq!(c.mean_delta, Some(2.0));
        assert_eq!(delta_rows(&reports, "dual", "none")[0].delta, 2);
    }

    #[test]
    fn cumulative_curve_is_monotone() {
        let reports = vec![
            report("x", "dual", 1, true, 0.3),
            report("y", "dual", 1, true, 0.1),
            report("x", "none", 1, true, 0.2),
            report("y", "none", 1, false, 5.0),
        ];
        let points = cumulative_solved(&reports, &["dual", "none"]);
        let dual: Vec<usize> = points.iter().filter(|p| p.config == "dual").map(|p| p.solved).collect();
        let none: Vec<usize> = points.iter().filter(|p| p.config == "none").map(|p| p.solved).collect();
        assert_eq!(dual, vec![1, 1, 2]);
        assert_eq!(none, vec![0, 1, 1]);
    }

    #[test]
    fn easy_and_hard_classification() {
        let reports = vec![
            report("x", "dual", 1, true, 0.5),
            report("x", "none", 1, true, 2.0),
            report("y", "dual", 1, false, 30.0),
            report("y", "none", 1, false, 30.0),
        ];
        let options = BatchOptions { easy_threshold: 1.0, hard_threshold: 20.0, ..BatchOptions::default() };
        let s = summarize(&reports, &["dual", "none"], &options);
        assert_eq!((s.instances, s.easy, s.hard), (2, 0, 1));
        let options = BatchOptions { easy_threshold: 3.0, ..options };
        assert_eq!(summarize(&reports, &["dual", "none"], &options).easy, 1);
    }
}
