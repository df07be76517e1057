use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fss_cli::config::load_schema;
use fss_cli::{emit_curves, run_stage, verify_fixtures, CliError, DataSource, PipelineConfig, ReductionMode, SpecSource, Stage};
use fss_core::{Combiner, ComparisonMode, DatasetSchema};

#[derive(Parser)]
#[command(name = "fss", version, about = "Fuzzy soft set risk ranking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fuzzify the cohort into one soft set per variable, plus errata.
    Fuzzify(PipelineArgs),
    /// Normal parameter reduction of each variable's soft set.
    Reduce(PipelineArgs),
    /// Product of the (reduced) per-variable soft sets.
    Product(PipelineArgs),
    /// Comparison table and score report.
    Score(PipelineArgs),
    /// Every stage, with a manifest.
    Run(PipelineArgs),
    /// Membership curves sampled for plotting.
    Curves {
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = fss_cli::curves::DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Check the implementation against the embedded reference tables.
    Verify {
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct PipelineArgs {
    /// CSV file; the built-in ten-patient sample when omitted.
    #[arg(long)]
    data: Option<PathBuf>,
    /// JSON dataset schema for --data (defaults to the UCI Coimbra headers).
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Comma-separated 1-based rows of --data to keep.
    #[arg(long, value_delimiter = ',')]
    select: Option<Vec<usize>>,
    /// JSON variable spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value = "max")]
    combiner: Combiner,
    #[arg(long, default_value = "count")]
    mode: ComparisonMode,
    #[arg(long, default_value = "per-variable")]
    reduction: ReductionMode,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    threshold: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Decimals shown in aligned text tables.
    #[arg(long, default_value_t = 2)]
    round: usize,
}

impl PipelineArgs {
    fn into_config(self) -> Result<PipelineConfig, CliError> {
        let data = match self.data {
            None => {
                if self.schema.is_some() || self.select.is_some() {
                    return Err(CliError::Config("--schema and --select require --data".into()));
                }
                DataSource::BuiltinTable1
            }
            Some(path) => DataSource::Csv {
                path,
                schema: match &self.schema {
                    Some(p) => load_schema(p)?,
                    None => DatasetSchema::default(),
                },
                select: self.select,
            },
        };
        Ok(PipelineConfig {
            data,
            specs: self.spec.map_or(SpecSource::Defaults, SpecSource::File),
            combiner: self.combiner,
            mode: self.mode,
            reduction: self.reduction,
            threshold: self.threshold,
            out_dir: self.out,
            round: self.round,
        })
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (stage, args) = match cli.command {
        Command::Fuzzify(a) => (Stage::Fuzzify, a),
        Command::Reduce(a) => (Stage::Reduce, a),
        Command::Product(a) => (Stage::Product, a),
        Command::Score(a) => (Stage::Score, a),
        Command::Run(a) => (Stage::Run, a),
        Command::Curves { spec, out, samples } => {
            let source = spec.map_or(SpecSource::Defaults, SpecSource::File);
            for f in emit_curves(&source, &out, samples)? {
                println!("{}", f.display());
            }
            return Ok(());
        }
        Command::Verify { json } => {
            let report = verify_fixtures();
            if json {
                let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?;
                println!("{text}");
            } else {
                print!("{report}");
            }
            return match report.hard_failures() {
                0 => Ok(()),
                n => Err(CliError::Internal(format!("{n} reference check(s) failed"))),
            };
        }
    };
    let cfg = args.into_config()?;
    let summary = run_stage(&cfg, stage)?;
    for f in &summary.files {
        println!("{}", f.display());
    }
    if let Some(acc) = summary.accuracy {
        println!("accuracy: {acc:.2}");
    }
    if let Some(acc) = summary.reference_accuracy {
        println!("reference accuracy: {acc:.2}");
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
