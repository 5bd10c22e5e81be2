//! Experiment orchestration: run every configured algorithm over a
//! shared instance set, aggregate the metric rows, attach significance
//! results and convergence curves, and serialize reports.
//!
//! A report is a pure function of (dataset, configs, instance count,
//! repeats, master seed); scheduling runs across threads never changes
//! its contents. Wall-clock timing is always measured but can be
//! suppressed at serialization time so output files diff cleanly.

use std::sync::mpsc;

use serde::Serialize;

use crate::colony::{run_colony, ColonyParams, RunResult, Variant};
use crate::fmt::fmt_sig;
use crate::grid::{GridMap, Instance};
use crate::mapgen::sample_instances;
use crate::oracle::{astar, dijkstra};
use crate::seed::derive;
pub use crate::stats::mann_whitney_u;
use crate::stats::{mean, population_std};
use crate::{Error, Result};

const TAG_INSTANCES: u64 = 0x5EED_0001;
const TAG_REPEAT: u64 = 0x5EED_0002;

/// Exact solvers usable as comparison baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OracleKind {
    AStar,
    Dijkstra,
}

impl OracleKind {
    pub fn name(&self) -> &'static str {
        match self {
            OracleKind::AStar => "astar",
            OracleKind::Dijkstra => "dijkstra",
        }
    }
}

/// What a config runs: an exact oracle or a colony variant.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgoSpec {
    Oracle(OracleKind),
    Colony(ColonyParams),
}

/// A labeled algorithm configuration. Colony labels follow the
/// `<name>-<ants>-<iterations>` convention (e.g. `pfaco-30-20`).
#[derive(Debug, Clone, PartialEq)]
pub struct AlgoConfig {
    pub label: String,
    pub spec: AlgoSpec,
}

impl AlgoConfig {
    pub fn oracle(kind: OracleKind) -> Self {
        AlgoConfig {
            label: kind.name().to_string(),
            spec: AlgoSpec::Oracle(kind),
        }
    }

    pub fn colony(params: ColonyParams) -> Self {
        AlgoConfig {
            label: format!(
                "{}-{}-{}",
                params.variant.name(),
                params.ants,
                params.iterations
            ),
            spec: AlgoSpec::Colony(params),
        }
    }

    /// The label must state exactly what the params run.
    pub fn validate(&self) -> Result<()> {
        let expected = match &self.spec {
            AlgoSpec::Oracle(kind) => kind.name().to_string(),
            AlgoSpec::Colony(p) => {
                p.validate()?;
                format!("{}-{}-{}", p.variant.name(), p.ants, p.iterations)
            }
        };
        if self.label != expected {
            return Err(Error::InvalidParameter(format!(
                "label {:?} does not match its configuration ({expected})",
                self.label
            )));
        }
        Ok(())
    }
}

/// Parse a config label: `astar`, `dijkstra`, or `<name>-<M>-<K>` with
/// name in {as, eliteas, mmas, pfaco}. Colony params start from the
/// standard defaults; adjust fields afterwards as needed.
pub fn parse_config_label(label: &str) -> Result<AlgoConfig> {
    const VALID: &str = "astar, dijkstra, as-<M>-<K>, eliteas-<M>-<K>, mmas-<M>-<K>, pfaco-<M>-<K>";
    let lower = label.trim().to_ascii_lowercase();
    match lower.as_str() {
        "astar" | "a*" => return Ok(AlgoConfig::oracle(OracleKind::AStar)),
        "dijkstra" => return Ok(AlgoConfig::oracle(OracleKind::Dijkstra)),
        _ => {}
    }
    let parts: Vec<&str> = lower.split('-').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidParameter(format!(
            "unknown config label {label:?}; valid: {VALID}"
        )));
    }
    let variant = match parts[0] {
        "as" => Variant::As,
        "eliteas" | "eliteaco" => Variant::EliteAs,
        "mmas" | "mmaco" => Variant::Mmas,
        "pfaco" => Variant::Pfaco,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown algorithm name {other:?}; valid: {VALID}"
            )))
        }
    };
    let ants: usize = parts[1]
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad ant count in {label:?}")))?;
    let iterations: usize = parts[2]
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad iteration count in {label:?}")))?;
    let config = AlgoConfig::colony(ColonyParams::new(variant, ants, iterations, 0));
    config.validate()?;
    Ok(config)
}

/// Distilled outcome of a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub success: bool,
    pub cost: Option<f64>,
    pub turns: Option<u32>,
    pub elapsed_s: f64,
}

impl RunOutcome {
    pub fn from_run(result: &RunResult) -> Self {
        RunOutcome {
            success: result.succeeded,
            cost: result.best_path.as_ref().map(|p| p.cost()),
            turns: result.best_path.as_ref().map(|p| p.turns()),
            elapsed_s: result.elapsed,
        }
    }
}

/// One aggregate row. Path statistics are means over successful runs
/// only; the success rate counts all runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRow {
    pub average_path: Option<f64>,
    pub time_mean_s: Option<f64>,
    pub turning_mean: Option<f64>,
    pub sd_p: Option<f64>,
    pub sd_t: Option<f64>,
    pub success_rate_pct: f64,
    pub path_improve_pct: Option<f64>,
    pub p_value: Option<f64>,
    pub significant: Option<bool>,
}

/// Aggregate a config's run outcomes into a metric row (significance
/// and improvement columns are filled in by the harness).
pub fn summarize(outcomes: &[RunOutcome]) -> MetricRow {
    assert!(!outcomes.is_empty(), "summarize requires at least one run");
    let successes: Vec<&RunOutcome> = outcomes.iter().filter(|o| o.success).collect();
    let success_rate_pct = 100.0 * successes.len() as f64 / outcomes.len() as f64;
    if successes.is_empty() {
        return MetricRow {
            average_path: None,
            time_mean_s: None,
            turning_mean: None,
            sd_p: None,
            sd_t: None,
            success_rate_pct,
            path_improve_pct: None,
            p_value: None,
            significant: None,
        };
    }
    let costs: Vec<f64> = successes.iter().filter_map(|o| o.cost).collect();
    let times: Vec<f64> = successes.iter().map(|o| o.elapsed_s).collect();
    let turns: Vec<f64> = successes
        .iter()
        .filter_map(|o| o.turns.map(f64::from))
        .collect();
    MetricRow {
        average_path: Some(mean(&costs)),
        time_mean_s: Some(mean(&times)),
        turning_mean: Some(mean(&turns)),
        sd_p: Some(population_std(&costs)),
        sd_t: Some(population_std(&times)),
        success_rate_pct,
        path_improve_pct: None,
        p_value: None,
        significant: None,
    }
}

/// Relative average-path change between a smaller and a larger
/// configuration of one algorithm: `(avg_small - avg_large) / avg_large`.
pub fn path_improve(avg_small: f64, avg_large: f64) -> Result<f64> {
    if avg_large <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "path_improve denominator must be positive, got {avg_large}"
        )));
    }
    Ok((avg_small - avg_large) / avg_large)
}

/// Mean best-so-far cost per iteration for one config (empty for
/// oracles; `None` where no run had found a path yet).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveColumn {
    pub label: String,
    pub mean_best_by_iteration: Vec<Option<f64>>,
}

/// Raw per-run record, in (config, instance, repeat) order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub label: String,
    pub instance: usize,
    pub repeat: usize,
    pub outcome: RunOutcome,
}

/// Full benchmark output.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub dataset_id: String,
    pub master_seed: u64,
    pub n_instances: usize,
    pub repeats: usize,
    pub seeds: Vec<u64>,
    pub rows: Vec<(AlgoConfig, MetricRow)>,
    pub curves: Vec<CurveColumn>,
    pub runs: Vec<RunRecord>,
    pub notes: Vec<String>,
}

/// Harness options beyond the dataset and configs.
#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub dataset_id: String,
    pub n_instances: usize,
    pub repeats: usize,
    pub master_seed: u64,
    /// Worker threads for independent runs; 0 means all available.
    pub threads: usize,
}

fn run_one(config: &AlgoConfig, instance: &Instance, run_seed: u64) -> (RunOutcome, Vec<f64>) {
    match &config.spec {
        AlgoSpec::Oracle(kind) => {
            let solved = match kind {
                OracleKind::AStar => astar(instance),
                OracleKind::Dijkstra => dijkstra(instance),
            };
            match solved {
                Ok(r) => (
                    RunOutcome {
                        success: true,
                        cost: Some(r.path.cost()),
                        turns: Some(r.path.turns()),
                        elapsed_s: r.elapsed,
                    },
                    Vec::new(),
                ),
                Err(_) => (
                    RunOutcome {
                        success: false,
                        cost: None,
                        turns: None,
                        elapsed_s: 0.0,
                    },
                    Vec::new(),
                ),
            }
        }
        AlgoSpec::Colony(params) => {
            let params = params.with_seed(run_seed);
            match run_colony(instance, &params) {
                Ok(r) => {
                    let curve = r.best_per_iteration.clone();
                    (RunOutcome::from_run(&r), curve)
                }
                Err(_) => (
                    RunOutcome {
                        success: false,
                        cost: None,
                        turns: None,
                        elapsed_s: 0.0,
                    },
                    Vec::new(),
                ),
            }
        }
    }
}

/// Run every config over every sampled instance, `repeats` times each.
///
/// Per-run failures (timeouts, unreachable states) are recorded as
/// unsuccessful outcomes; the sweep always completes. Fully
/// deterministic given the options, regardless of `threads`.
pub fn run_benchmark(
    dataset: &[GridMap],
    configs: &[AlgoConfig],
    options: &BenchOptions,
) -> Result<BenchReport> {
    if dataset.is_empty() || configs.is_empty() {
        return Err(Error::InvalidParameter(
            "dataset and configs must be nonempty".into(),
        ));
    }
    for config in configs {
        config.validate()?;
    }
    let master = options.master_seed;
    let instances = sample_instances(
        dataset,
        options.n_instances,
        derive(master, &[TAG_INSTANCES]),
    )?;
    let repeat_seeds: Vec<u64> = (0..options.repeats)
        .map(|r| derive(master, &[TAG_REPEAT, r as u64]))
        .collect();

    // Flattened work queue over (config, instance, repeat).
    let per_config = instances.len() * options.repeats;
    let total = configs.len() * per_config;
    let run_seed = |instance_idx: usize, repeat_idx: usize| {
        derive(repeat_seeds[repeat_idx], &[instance_idx as u64])
    };
    let decode = |idx: usize| {
        let config_idx = idx / per_config;
        let rest = idx % per_config;
        (config_idx, rest / options.repeats, rest % options.repeats)
    };

    let threads = if options.threads == 0 {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    } else {
        options.threads
    };
    let mut results: Vec<Option<(RunOutcome, Vec<f64>)>> = vec![None; total];
    if threads <= 1 {
        for (idx, slot) in results.iter_mut().enumerate() {
            let (c, i, r) = decode(idx);
            *slot = Some(run_one(&configs[c], &instances[i], run_seed(i, r)));
        }
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let (tx, rx) = mpsc::channel();
        let decode = &decode;
        let run_seed = &run_seed;
        std::thread::scope(|scope| {
            for _ in 0..threads.min(total) {
                let tx = tx.clone();
                let next = &next;
                let instances = &instances;
                scope.spawn(move || loop {
                    let idx = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if idx >= total {
                        break;
                    }
                    let (c, i, r) = decode(idx);
                    let out = run_one(&configs[c], &instances[i], run_seed(i, r));
                    if tx.send((idx, out)).is_err() {
                        break;
                    }
                });
            }
            drop(tx);
            for (idx, out) in rx {
                results[idx] = Some(out);
            }
        });
    }

    // Aggregate in deterministic (config, instance, repeat) order.
    let mut rows = Vec::with_capacity(configs.len());
    let mut curves = Vec::new();
    let mut runs = Vec::with_capacity(total);
    let mut samples_per_config: Vec<Vec<f64>> = Vec::with_capacity(configs.len());
    for (c, config) in configs.iter().enumerate() {
        let mut outcomes = Vec::with_capacity(per_config);
        let mut config_curves: Vec<&Vec<f64>> = Vec::new();
        for i in 0..instances.len() {
            for r in 0..options.repeats {
                let idx = c * per_config + i * options.repeats + r;
                let (outcome, curve) = results[idx].as_ref().expect("all runs completed");
                runs.push(RunRecord {
                    label: config.label.clone(),
                    instance: i,
                    repeat: r,
                    outcome: outcome.clone(),
                });
                if !curve.is_empty() {
                    config_curves.push(curve);
                }
                outcomes.push(outcome.clone());
            }
        }
        samples_per_config.push(
            outcomes
                .iter()
                .filter(|o| o.success)
                .filter_map(|o| o.cost)
                .collect(),
        );
        rows.push((config.clone(), summarize(&outcomes)));
        if let AlgoSpec::Colony(params) = &config.spec {
            let mut column = Vec::with_capacity(params.iterations);
            for k in 0..params.iterations {
                let finite: Vec<f64> = config_curves
                    .iter()
                    .filter_map(|curve| curve.get(k).copied())
                    .filter(|v| v.is_finite())
                    .collect();
                column.push(if finite.is_empty() {
                    None
                } else {
                    Some(mean(&finite))
                });
            }
            curves.push(CurveColumn {
                label: config.label.clone(),
                mean_best_by_iteration: column,
            });
        }
    }

    attach_path_improve(&mut rows);
    attach_significance(&mut rows, &samples_per_config);

    let notes = vec![
        "PathImprove = (AveragePath(smaller config) - AveragePath(larger config)) \
         / AveragePath(larger config), shown on the larger config's row."
            .to_string(),
        "p-values: two-sided Mann-Whitney U of each config's successful path costs \
         against the best stochastic config (the reference row shows none); \
         'significant' marks p < 0.05."
            .to_string(),
    ];

    Ok(BenchReport {
        dataset_id: options.dataset_id.clone(),
        master_seed: master,
        n_instances: options.n_instances,
        repeats: options.repeats,
        seeds: repeat_seeds,
        rows,
        curves,
        runs,
        notes,
    })
}

/// Pair configs of the same colony variant and report the improvement
/// on the larger configuration's row.
fn attach_path_improve(rows: &mut [(AlgoConfig, MetricRow)]) {
    let colony_info: Vec<Option<(Variant, usize, Option<f64>)>> = rows
        .iter()
        .map(|(config, metrics)| match &config.spec {
            AlgoSpec::Colony(p) => Some((p.variant, p.ants * p.iterations, metrics.average_path)),
            AlgoSpec::Oracle(_) => None,
        })
        .collect();
    for idx in 0..rows.len() {
        let Some((variant, size, Some(avg_large))) = colony_info[idx] else {
            continue;
        };
        let partners: Vec<usize> = colony_info
            .iter()
            .enumerate()
            .filter(|&(j, info)| {
                j != idx && matches!(info, Some((v, s, _)) if *v == variant && *s < size)
            })
            .map(|(j, _)| j)
            .collect();
        // Unambiguous only when exactly one smaller sibling exists.
        if let [partner] = partners[..] {
            if let Some((_, _, Some(avg_small))) = colony_info[partner] {
                if let Ok(improve) = path_improve(avg_small, avg_large) {
                    rows[idx].1.path_improve_pct = Some(100.0 * improve);
                }
            }
        }
    }
}

/// Mann-Whitney each config against the best stochastic config.
fn attach_significance(rows: &mut [(AlgoConfig, MetricRow)], samples: &[Vec<f64>]) {
    let reference = rows
        .iter()
        .enumerate()
        .filter(|(_, (config, _))| matches!(config.spec, AlgoSpec::Colony(_)))
        .filter_map(|(i, (_, m))| m.average_path.map(|avg| (i, avg)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i);
    let Some(reference) = reference else { return };
    if samples[reference].is_empty() {
        return;
    }
    for (idx, row) in rows.iter_mut().enumerate() {
        if idx == reference || samples[idx].is_empty() {
            continue;
        }
        let (_, p) = mann_whitney_u(&samples[reference], &samples[idx]);
        row.1.p_value = Some(p);
        row.1.significant = Some(p < 0.05);
    }
}

/// Whether serialized outputs include wall-clock timing columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimingMode {
    /// Report measured wall time (not reproducible between executions).
    Wall,
    /// Suppress timing so identical invocations produce identical bytes.
    Off,
}

impl TimingMode {
    pub fn name(&self) -> &'static str {
        match self {
            TimingMode::Wall => "wall",
            TimingMode::Off => "off",
        }
    }
}

fn opt_cell(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| fmt_sig(v, 6))
}

impl BenchReport {
    /// Report CSV, one row per config, in the summary-table column order.
    pub fn to_csv(&self, timing: TimingMode) -> String {
        let mut out = String::from(
            "config,average_path,time_s,turning,sd_p,sd_t,success_rate_pct,\
             path_improve_pct,p_value,significant\n",
        );
        for (config, m) in &self.rows {
            let (time_mean, sd_t) = match timing {
                TimingMode::Wall => (m.time_mean_s, m.sd_t),
                TimingMode::Off => (None, None),
            };
            let significant = match m.significant {
                Some(true) => "yes",
                Some(false) => "no",
                None => "",
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                config.label,
                opt_cell(m.average_path),
                opt_cell(time_mean),
                opt_cell(m.turning_mean),
                opt_cell(m.sd_p),
                opt_cell(sd_t),
                fmt_sig(m.success_rate_pct, 6),
                opt_cell(m.path_improve_pct),
                opt_cell(m.p_value),
                significant,
            ));
        }
        out
    }

    /// Convergence CSV: one row per iteration, one column per config.
    pub fn curves_csv(&self) -> String {
        let mut out = String::from("iteration");
        for curve in &self.curves {
            out.push(',');
            out.push_str(&curve.label);
        }
        out.push('\n');
        let depth = self
            .curves
            .iter()
            .map(|c| c.mean_best_by_iteration.len())
            .max()
            .unwrap_or(0);
        for k in 0..depth {
            out.push_str(&(k + 1).to_string());
            for curve in &self.curves {
                out.push(',');
                if let Some(Some(v)) = curve.mean_best_by_iteration.get(k) {
                    out.push_str(&fmt_sig(*v, 6));
                }
            }
            out.push('\n');
        }
        out
    }

    /// Full report as JSON.
    pub fn to_json(&self, timing: TimingMode) -> String {
        #[derive(Serialize)]
        struct RowDoc<'a> {
            label: &'a str,
            algorithm: &'a str,
            ants: Option<usize>,
            iterations: Option<usize>,
            #[serde(flatten)]
            metrics: MetricRow,
        }
        #[derive(Serialize)]
        struct RunDoc<'a> {
            label: &'a str,
            instance: usize,
            repeat: usize,
            success: bool,
            cost: Option<f64>,
            turns: Option<u32>,
            time_s: Option<f64>,
        }
        #[derive(Serialize)]
        struct ReportDoc<'a> {
            dataset_id: &'a str,
            master_seed: u64,
            n_instances: usize,
            repeats: usize,
            timing: &'static str,
            seeds: &'a [u64],
            rows: Vec<RowDoc<'a>>,
            curves: &'a [CurveColumn],
            runs: Vec<RunDoc<'a>>,
            notes: &'a [String],
        }

        let rows = self
            .rows
            .iter()
            .map(|(config, m)| {
                let mut metrics = m.clone();
                if timing == TimingMode::Off {
                    metrics.time_mean_s = None;
                    metrics.sd_t = None;
                }
                let (algorithm, ants, iterations) = match &config.spec {
                    AlgoSpec::Oracle(kind) => (kind.name(), None, None),
                    AlgoSpec::Colony(p) => (p.variant.name(), Some(p.ants), Some(p.iterations)),
                };
                RowDoc {
                    label: &config.label,
                    algorithm,
                    ants,
                    iterations,
                    metrics,
                }
            })
            .collect();
        let runs = self
            .runs
            .iter()
            .map(|r| RunDoc {
                label: &r.label,
                instance: r.instance,
                repeat: r.repeat,
                success: r.outcome.success,
                cost: r.outcome.cost,
                turns: r.outcome.turns,
                time_s: match timing {
                    TimingMode::Wall => Some(r.outcome.elapsed_s),
                    TimingMode::Off => None,
                },
            })
            .collect();
        let doc = ReportDoc {
            dataset_id: &self.dataset_id,
            master_seed: self.master_seed,
            n_instances: self.n_instances,
            repeats: self.repeats,
            timing: timing.name(),
            seeds: &self.seeds,
            rows,
            curves: &self.curves,
            runs,
            notes: &self.notes,
        };
        serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
    }

    /// Fixed-width summary table for standard output.
    pub fn format_table(&self, timing: TimingMode) -> String {
        let headers = [
            "config",
            "AveragePath",
            "Time(s)",
            "Turning",
            "SD-P",
            "SD-T",
            "SuccessRate(%)",
            "PathImprove(%)",
            "p-value",
        ];
        let dash = "-".to_string();
        let mut table: Vec<Vec<String>> = vec![headers.iter().map(|h| h.to_string()).collect()];
        for (config, m) in &self.rows {
            let (time_mean, sd_t) = match timing {
                TimingMode::Wall => (m.time_mean_s, m.sd_t),
                TimingMode::Off => (None, None),
            };
            let cell = |v: Option<f64>| v.map_or(dash.clone(), |v| fmt_sig(v, 6));
            let p_cell = match (m.p_value, m.significant) {
                (Some(p), Some(false)) => format!("{} ns", fmt_sig(p, 6)),
                (Some(p), _) => fmt_sig(p, 6),
                (None, _) => dash.clone(),
            };
            table.push(vec![
                config.label.clone(),
                cell(m.average_path),
                cell(time_mean),
                cell(m.turning_mean),
                cell(m.sd_p),
                cell(sd_t),
                fmt_sig(m.success_rate_pct, 6),
                cell(m.path_improve_pct),
                p_cell,
            ]);
        }
        let widths: Vec<usize> = (0..headers.len())
            .map(|col| table.iter().map(|row| row[col].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &table {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:>w$}", w = w))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}
