use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pfaco_cli::commands::{
    cmd_bench, cmd_export_pheromone, cmd_gen_maps, cmd_solve, BenchArgs, ExportArgs, FieldStage,
    GenMapsArgs, InitKind, OutputFormat, ParamOverrides, SolveArgs,
};
use pfaco_cli::{parse_xy, CliError};
use pfaco_core::bench::TimingMode;

/// Grid path planning with pheromone-focused ant colony optimization:
/// dataset generation, solving, benchmarking and field export.
#[derive(Parser)]
#[command(name = "pfaco", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ParamFlags {
    /// Number of ants per iteration (M).
    #[arg(long)]
    ants: Option<usize>,
    /// Number of iterations (K).
    #[arg(long)]
    iters: Option<usize>,
    /// Pheromone weight in the transition rule.
    #[arg(long)]
    alpha: Option<f64>,
    /// Heuristic weight in the transition rule.
    #[arg(long)]
    beta: Option<f64>,
    /// Evaporation rate in (0, 1).
    #[arg(long)]
    rho: Option<f64>,
    /// Deposit numerator (Q).
    #[arg(long)]
    q: Option<f64>,
    /// Wall-clock budget per run in seconds.
    #[arg(long = "timeout-s")]
    timeout_s: Option<f64>,
}

impl ParamFlags {
    fn overrides(&self, seed: Option<u64>) -> ParamOverrides {
        ParamOverrides {
            ants: self.ants,
            iterations: self.iters,
            alpha: self.alpha,
            beta: self.beta,
            rho: self.rho,
            q: self.q,
            timeout_s: self.timeout_s,
            seed,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum StageFlag {
    Initial,
    Final,
}

impl From<StageFlag> for FieldStage {
    fn from(s: StageFlag) -> Self {
        match s {
            StageFlag::Initial => FieldStage::Initial,
            StageFlag::Final => FieldStage::Final,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum InitFlag {
    Uniform,
    InverseDistance,
    Adpi,
}

impl From<InitFlag> for InitKind {
    fn from(i: InitFlag) -> Self {
        match i {
            InitFlag::Uniform => InitKind::Uniform,
            InitFlag::InverseDistance => InitKind::InverseDistance,
            InitFlag::Adpi => InitKind::Adpi,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatFlag {
    Csv,
    Json,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TimingFlag {
    Wall,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the ten-map dataset for one grid size.
    GenMaps {
        /// Grid size (square maps, at least 8).
        #[arg(long)]
        size: usize,
        /// Generation seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for map files and manifest.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one instance and print a one-line report.
    Solve {
        /// Map file in the text format.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Start cell as `x,y`.
        #[arg(long)]
        start: Option<String>,
        /// Goal cell as `x,y`.
        #[arg(long)]
        goal: Option<String>,
        /// Instance JSON (alternative to --map/--start/--goal).
        #[arg(long)]
        instance: Option<PathBuf>,
        /// astar, dijkstra, a colony name (as, eliteas, mmas, pfaco) or
        /// a full label like pfaco-30-20.
        #[arg(long, default_value = "astar")]
        algo: String,
        #[command(flatten)]
        params: ParamFlags,
        /// Colony seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the solved path as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also export the pheromone field (requires --out).
        #[arg(long = "dump-pheromone", value_enum)]
        dump_pheromone: Option<StageFlag>,
    },
    /// Benchmark configs over a generated dataset.
    Bench {
        /// Directory holding manifest.json and the map files.
        #[arg(long = "dataset-dir")]
        dataset_dir: PathBuf,
        /// Comma-separated labels, e.g. astar,as-15-10,pfaco-30-20.
        #[arg(long)]
        configs: String,
        /// Number of sampled instances.
        #[arg(long, default_value_t = 100)]
        instances: usize,
        /// Runs per (config, instance) pair.
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        /// Master seed for sampling and solver streams.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        params: ParamFlags,
        /// Output base path (derives .csv, .json and _curves.csv).
        #[arg(long)]
        out: PathBuf,
        /// Which report files to write.
        #[arg(long, value_enum, default_value_t = FormatFlag::Both)]
        format: FormatFlag,
        /// wall = measured times in outputs; off = suppress timing so
        /// identical invocations produce byte-identical files.
        #[arg(long, value_enum, default_value_t = TimingFlag::Wall)]
        timing: TimingFlag,
    },
    /// Export the per-node pheromone field as CSV and PGM.
    ExportPheromone {
        /// Map file in the text format.
        #[arg(long)]
        map: PathBuf,
        /// Start cell as `x,y`.
        #[arg(long)]
        start: String,
        /// Goal cell as `x,y`.
        #[arg(long)]
        goal: String,
        /// Colony algorithm (as, eliteas, mmas, pfaco or a full label).
        #[arg(long, default_value = "pfaco")]
        algo: String,
        /// initial = field right after initialization; final = after the
        /// full run.
        #[arg(long, value_enum, default_value_t = StageFlag::Initial)]
        stage: StageFlag,
        /// Override the initialization (initial stage only).
        #[arg(long, value_enum)]
        init: Option<InitFlag>,
        #[command(flatten)]
        params: ParamFlags,
        /// Colony seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output base path (derives .csv and .pgm).
        #[arg(long)]
        out: PathBuf,
    },
}

fn planner_threads() -> usize {
    std::env::var("PLANNER_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::GenMaps { size, seed, out } => {
            let files = cmd_gen_maps(&GenMapsArgs {
                size,
                seed,
                out_dir: out,
            })?;
            println!("wrote {} files", files.len());
            Ok(true)
        }
        Command::Solve {
            map,
            start,
            goal,
            instance,
            algo,
            params,
            seed,
            out,
            dump_pheromone,
        } => {
            let args = SolveArgs {
                map,
                start: start.as_deref().map(parse_xy).transpose()?,
                goal: goal.as_deref().map(parse_xy).transpose()?,
                instance,
                algo,
                overrides: params.overrides(Some(seed)),
                out,
                dump_pheromone: dump_pheromone.map(FieldStage::from),
            };
            let output = cmd_solve(&args)?;
            println!("{}", output.line);
            Ok(output.success)
        }
        Command::Bench {
            dataset_dir,
            configs,
            instances,
            repeats,
            seed,
            params,
            out,
            format,
            timing,
        } => {
            let args = BenchArgs {
                dataset_dir,
                configs,
                n_instances: instances,
                repeats,
                seed,
                overrides: params.overrides(None),
                out,
                format: match format {
                    FormatFlag::Csv => OutputFormat::Csv,
                    FormatFlag::Json => OutputFormat::Json,
                    FormatFlag::Both => OutputFormat::Both,
                },
                timing: match timing {
                    TimingFlag::Wall => TimingMode::Wall,
                    TimingFlag::Off => TimingMode::Off,
                },
                threads: planner_threads(),
            };
            let output = cmd_bench(&args)?;
            print!("{}", output.table);
            for path in &output.written {
                println!("wrote {}", path.display());
            }
            Ok(true)
        }
        Command::ExportPheromone {
            map,
            start,
            goal,
            algo,
            stage,
            init,
            params,
            seed,
            out,
        } => {
            let args = ExportArgs {
                map,
                start: parse_xy(&start)?,
                goal: parse_xy(&goal)?,
                algo,
                stage: stage.into(),
                init: init.map(InitKind::from),
                overrides: params.overrides(Some(seed)),
                out,
            };
            let files = cmd_export_pheromone(&args)?;
            for path in &files {
                println!("wrote {}", path.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        // Completed but without a path (no-path or timeout).
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
