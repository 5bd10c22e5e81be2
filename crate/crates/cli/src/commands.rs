//! The four subcommands: map generation, single-instance solving,
//! benchmarking and pheromone-field export.

use std::path::{Path, PathBuf};

use pfaco_core::bench::{
    parse_config_label, run_benchmark, AlgoConfig, AlgoSpec, BenchOptions, BenchReport, OracleKind,
    TimingMode,
};
use pfaco_core::colony::{run_colony, uniform_field, ColonyParams, PheromoneField, Variant};
use pfaco_core::fmt::fmt_sig;
use pfaco_core::grid::{Instance, Node};
use pfaco_core::mapgen::generate_dataset;
use pfaco_core::oracle::{astar, dijkstra};
use pfaco_core::pfaco::adpi_init;

use crate::files::{
    field_csv, field_pgm, field_view, io_err, read_instance, read_map, write_manifest, write_map,
    Manifest,
};
use crate::CliError;

/// Smallest grid the shaped obstacle patterns fit on.
pub const MIN_MAP_SIZE: usize = 8;

// ── gen-maps ────────────────────────────────────────────────────

#[derive(Debug, Clone)]
pub struct GenMapsArgs {
    pub size: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
}

/// Write the ten-map dataset plus its manifest.
pub fn cmd_gen_maps(args: &GenMapsArgs) -> Result<Vec<PathBuf>, CliError> {
    if args.size < MIN_MAP_SIZE {
        return Err(CliError::Usage(format!(
            "minimum map size is {MIN_MAP_SIZE}, got {}",
            args.size
        )));
    }
    std::fs::create_dir_all(&args.out_dir).map_err(|e| io_err(&args.out_dir, e))?;
    let maps = generate_dataset(args.size, args.seed);
    let mut written = Vec::with_capacity(maps.len() + 1);
    let mut files = Vec::with_capacity(maps.len());
    for (idx, map) in maps.iter().enumerate() {
        let name = format!("{size}x{size}_{idx}.map", size = args.size);
        let path = args.out_dir.join(&name);
        write_map(&path, map)?;
        written.push(path);
        files.push(name);
    }
    let manifest = Manifest {
        id: format!(
            "{size}x{size}-seed{seed}",
            size = args.size,
            seed = args.seed
        ),
        size: args.size,
        seed: args.seed,
        files,
    };
    written.push(write_manifest(&args.out_dir, &manifest)?);
    Ok(written)
}

// ── shared algorithm selection ──────────────────────────────────

/// Optional overrides applied on top of a config's standard parameters.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParamOverrides {
    pub ants: Option<usize>,
    pub iterations: Option<usize>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub rho: Option<f64>,
    pub q: Option<f64>,
    pub timeout_s: Option<f64>,
    pub seed: Option<u64>,
}

impl ParamOverrides {
    fn apply(&self, params: &mut ColonyParams) {
        if let Some(v) = self.ants {
            params.ants = v;
        }
        if let Some(v) = self.iterations {
            params.iterations = v;
        }
        if let Some(v) = self.alpha {
            params.alpha = v;
        }
        if let Some(v) = self.beta {
            params.beta = v;
        }
        if let Some(v) = self.rho {
            params.rho = v;
        }
        if let Some(v) = self.q {
            params.q = v;
        }
        if let Some(v) = self.timeout_s {
            params.timeout_seconds = v;
        }
        if let Some(v) = self.seed {
            params.seed = v;
        }
    }
}

/// Resolve `--algo`: a bare solver name (`astar`, `dijkstra`, `as`,
/// `eliteas`, `mmas`, `pfaco`) or a full `<name>-<M>-<K>` label.
/// Bare colony names default to 30 ants and 20 iterations.
pub fn resolve_algo(algo: &str, overrides: &ParamOverrides) -> Result<AlgoConfig, CliError> {
    let lower = algo.trim().to_ascii_lowercase();
    let base = match lower.as_str() {
        "as" | "eliteas" | "mmas" | "pfaco" => {
            let ants = overrides.ants.unwrap_or(30);
            let iters = overrides.iterations.unwrap_or(20);
            parse_config_label(&format!("{lower}-{ants}-{iters}"))?
        }
        other => parse_config_label(other)?,
    };
    match base.spec {
        AlgoSpec::Oracle(_) => Ok(base),
        AlgoSpec::Colony(mut params) => {
            overrides.apply(&mut params);
            params.validate()?;
            Ok(AlgoConfig::colony(params))
        }
    }
}

// ── solve ───────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldStage {
    Initial,
    Final,
}

#[derive(Debug, Clone)]
pub struct SolveArgs {
    /// Map file plus explicit endpoints...
    pub map: Option<PathBuf>,
    pub start: Option<(i32, i32)>,
    pub goal: Option<(i32, i32)>,
    /// ...or an instance JSON carrying all three.
    pub instance: Option<PathBuf>,
    pub algo: String,
    pub overrides: ParamOverrides,
    /// Write the solved path as JSON here.
    pub out: Option<PathBuf>,
    /// Also export the pheromone field at this stage (colony algos).
    pub dump_pheromone: Option<FieldStage>,
}

#[derive(Debug, Clone)]
pub struct SolveOutput {
    /// The single report line printed to stdout.
    pub line: String,
    pub success: bool,
    pub written: Vec<PathBuf>,
}

fn load_solve_instance(args: &SolveArgs) -> Result<Instance, CliError> {
    if let Some(instance) = &args.instance {
        return read_instance(instance);
    }
    let map_path = args
        .map
        .as_ref()
        .ok_or_else(|| CliError::Usage("--map (or --instance) is required".into()))?;
    let map = read_map(map_path)?;
    let (sx, sy) = args
        .start
        .ok_or_else(|| CliError::Usage("--start x,y is required".into()))?;
    let (gx, gy) = args
        .goal
        .ok_or_else(|| CliError::Usage("--goal x,y is required".into()))?;
    Instance::new(map, Node::new(sx, sy), Node::new(gx, gy)).map_err(CliError::from)
}

fn initial_field_for(config: &AlgoConfig, instance: &Instance) -> Result<PheromoneField, CliError> {
    match &config.spec {
        AlgoSpec::Oracle(_) => Err(CliError::Usage(
            "pheromone export needs a colony algorithm, not an exact solver".into(),
        )),
        AlgoSpec::Colony(params) => Ok(match params.variant {
            Variant::Pfaco => adpi_init(instance)?,
            _ => uniform_field(&instance.map),
        }),
    }
}

fn write_field(
    field: &PheromoneField,
    instance: &Instance,
    base: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    let values = field_view(field);
    let (w, h) = (instance.map.width(), instance.map.height());
    let csv_path = base.with_extension("csv");
    let pgm_path = base.with_extension("pgm");
    std::fs::write(&csv_path, field_csv(&values, w, h)).map_err(|e| io_err(&csv_path, e))?;
    std::fs::write(&pgm_path, field_pgm(&values, w, h)).map_err(|e| io_err(&pgm_path, e))?;
    Ok(vec![csv_path, pgm_path])
}

/// Solve one instance and report `cost= turns= time_s= success=`.
pub fn cmd_solve(args: &SolveArgs) -> Result<SolveOutput, CliError> {
    let instance = load_solve_instance(args)?;
    let config = resolve_algo(&args.algo, &args.overrides)?;
    let mut written = Vec::new();

    if args.dump_pheromone == Some(FieldStage::Initial) {
        let base = dump_base(args)?;
        let field = initial_field_for(&config, &instance)?;
        written.extend(write_field(&field, &instance, &base)?);
    }

    let (best, elapsed) = match &config.spec {
        AlgoSpec::Oracle(kind) => {
            let solved = match kind {
                OracleKind::AStar => astar(&instance),
                OracleKind::Dijkstra => dijkstra(&instance),
            };
            match solved {
                Ok(r) => (Some(r.path), r.elapsed),
                Err(pfaco_core::Error::NoPath) => (None, 0.0),
                Err(other) => return Err(other.into()),
            }
        }
        AlgoSpec::Colony(params) => {
            let run = run_colony(&instance, params)?;
            if args.dump_pheromone == Some(FieldStage::Final) {
                let base = dump_base(args)?;
                written.extend(write_field(&run.final_field, &instance, &base)?);
            }
            (run.best_path, run.elapsed)
        }
    };

    let line = match &best {
        Some(path) => format!(
            "cost={} turns={} time_s={} success=true",
            fmt_sig(path.cost(), 6),
            path.turns(),
            fmt_sig(elapsed, 6)
        ),
        None => format!(
            "cost=- turns=- time_s={} success=false",
            fmt_sig(elapsed, 6)
        ),
    };

    if let (Some(out), Some(path)) = (&args.out, &best) {
        let nodes: Vec<[i32; 2]> = path.nodes().iter().map(|n| [n.x, n.y]).collect();
        let doc = serde_json::json!({
            "algo": config.label,
            "cost": path.cost(),
            "turns": path.turns(),
            "nodes": nodes,
        });
        let text = serde_json::to_string_pretty(&doc).expect("path serializes") + "\n";
        std::fs::write(out, text).map_err(|e| io_err(out, e))?;
        written.push(out.clone());
    }

    Ok(SolveOutput {
        line,
        success: best.is_some(),
        written,
    })
}

fn dump_base(args: &SolveArgs) -> Result<PathBuf, CliError> {
    args.out
        .as_ref()
        .map(|p| p.with_extension("pheromone"))
        .ok_or_else(|| CliError::Usage("--dump-pheromone requires --out".into()))
}

// ── export-pheromone ────────────────────────────────────────────

/// Initialization selector for field exports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    Uniform,
    InverseDistance,
    Adpi,
}

#[derive(Debug, Clone)]
pub struct ExportArgs {
    pub map: PathBuf,
    pub start: (i32, i32),
    pub goal: (i32, i32),
    pub algo: String,
    pub stage: FieldStage,
    /// Override the algorithm's own initialization (initial stage only).
    pub init: Option<InitKind>,
    pub overrides: ParamOverrides,
    /// Output base path; `.csv` and `.pgm` are appended.
    pub out: PathBuf,
}

/// Export the per-node pheromone view as CSV and PGM.
pub fn cmd_export_pheromone(args: &ExportArgs) -> Result<Vec<PathBuf>, CliError> {
    let map = read_map(&args.map)?;
    let instance = Instance::new(
        map,
        Node::new(args.start.0, args.start.1),
        Node::new(args.goal.0, args.goal.1),
    )?;
    let config = resolve_algo(&args.algo, &args.overrides)?;
    let field = match (args.stage, args.init) {
        (FieldStage::Initial, Some(InitKind::Uniform)) => uniform_field(&instance.map),
        (FieldStage::Initial, Some(InitKind::InverseDistance)) => {
            pfaco_core::colony::inverse_distance_field(&instance.map)
        }
        (FieldStage::Initial, Some(InitKind::Adpi)) => adpi_init(&instance)?,
        (FieldStage::Initial, None) => initial_field_for(&config, &instance)?,
        (FieldStage::Final, _) => match &config.spec {
            AlgoSpec::Oracle(_) => {
                return Err(CliError::Usage(
                    "pheromone export needs a colony algorithm, not an exact solver".into(),
                ))
            }
            AlgoSpec::Colony(params) => run_colony(&instance, params)?.final_field,
        },
    };
    write_field(&field, &instance, &args.out)
}

// ── bench ───────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

#[derive(Debug, Clone)]
pub struct BenchArgs {
    pub dataset_dir: PathBuf,
    /// Comma-separated config labels, e.g. `astar,as-15-10,pfaco-30-20`.
    pub configs: String,
    pub n_instances: usize,
    pub repeats: usize,
    pub seed: u64,
    pub overrides: ParamOverrides,
    /// Output base path; `.csv`, `.json` and `_curves.csv` are derived.
    pub out: PathBuf,
    pub format: OutputFormat,
    pub timing: TimingMode,
    /// Worker threads (0 = all available).
    pub threads: usize,
}

#[derive(Debug, Clone)]
pub struct BenchOutput {
    pub report: BenchReport,
    pub table: String,
    pub written: Vec<PathBuf>,
}

/// Run the benchmark over a generated dataset directory and write the
/// report files.
pub fn cmd_bench(args: &BenchArgs) -> Result<BenchOutput, CliError> {
    let (manifest, maps) = crate::files::load_dataset(&args.dataset_dir)?;
    let mut configs = Vec::new();
    for label in args.configs.split(',').filter(|s| !s.trim().is_empty()) {
        configs.push(resolve_algo(label, &args.overrides)?);
    }
    if configs.is_empty() {
        return Err(CliError::Usage(
            "--configs must name at least one algorithm".into(),
        ));
    }
    let options = BenchOptions {
        dataset_id: manifest.id.clone(),
        n_instances: args.n_instances,
        repeats: args.repeats,
        master_seed: args.seed,
        threads: args.threads,
    };
    let report = run_benchmark(&maps, &configs, &options)?;

    let mut written = Vec::new();
    if matches!(args.format, OutputFormat::Csv | OutputFormat::Both) {
        let csv_path = args.out.with_extension("csv");
        std::fs::write(&csv_path, report.to_csv(args.timing)).map_err(|e| io_err(&csv_path, e))?;
        written.push(csv_path);
        let curves_path = curves_path(&args.out);
        std::fs::write(&curves_path, report.curves_csv()).map_err(|e| io_err(&curves_path, e))?;
        written.push(curves_path);
    }
    if matches!(args.format, OutputFormat::Json | OutputFormat::Both) {
        let json_path = args.out.with_extension("json");
        std::fs::write(&json_path, report.to_json(args.timing))
            .map_err(|e| io_err(&json_path, e))?;
        written.push(json_path);
    }
    let table = report.format_table(args.timing);
    Ok(BenchOutput {
        report,
        table,
        written,
    })
}

fn curves_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    out.with_file_name(format!("{stem}_curves.csv"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algo_resolution() {
        let c = resolve_algo("pfaco-15-10", &ParamOverrides::default()).unwrap();
        assert_eq!(c.label, "pfaco-15-10");
        let c = resolve_algo("mmas", &ParamOverrides::default()).unwrap();
        assert_eq!(c.label, "mmas-30-20");
        let with = ParamOverrides {
            ants: Some(7),
            iterations: Some(3),
            ..Default::default()
        };
        let c = resolve_algo("as", &with).unwrap();
        assert_eq!(c.label, "as-7-3");
        assert!(resolve_algo("pfaco-0-10", &ParamOverrides::default()).is_err());
        assert!(resolve_algo("nonsense", &ParamOverrides::default()).is_err());
        // Overrides leave the validated label consistent.
        let rho = ParamOverrides {
            rho: Some(0.35),
            ..Default::default()
        };
        let c = resolve_algo("as-5-5", &rho).unwrap();
        match c.spec {
            AlgoSpec::Colony(p) => assert_eq!(p.rho, 0.35),
            _ => panic!("expected colony"),
        }
        let bad_rho = ParamOverrides {
            rho: Some(1.5),
            ..Default::default()
        };
        assert!(resolve_algo("as-5-5", &bad_rho).is_err());
    }

    #[test]
    fn curves_path_derivation() {
        assert_eq!(
            curves_path(Path::new("/tmp/report.csv")),
            PathBuf::from("/tmp/report_curves.csv")
        );
        assert_eq!(
            curves_path(Path::new("out")),
            PathBuf::from("out_curves.csv")
        );
    }
}
