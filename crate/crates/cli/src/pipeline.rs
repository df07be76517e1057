//! End-to-end run: load, fuzzify, reduce, multiply, compare, score, and
//! write every table plus the errata and a manifest.

use std::path::{Path, PathBuf};

use fss_core::reduction::{format_reductions, DEFAULT_PARAMETER_CAP};
use fss_core::scoring::COMPARE_EPSILON;
use fss_core::variables::write_errata_csv;
use fss_core::{
    builtin_table1, errata_report, find_reductions, fuzzify_cohort, load_csv, reference, score_pipeline,
    scores, select_by_index, ComparisonMode, ErrataEntry, FuzzySoftSet, PatientRecord, PipelineOutcome, ScoreReport,
    VariableSpec,
};
use serde::Serialize;

use crate::config::{load_specs, DataSource, PipelineConfig, ReductionMode, TOOL_VERSION};
use crate::error::{data, CliError};

/// Tolerance used when comparing fuzzified degrees with the reference tables.
pub const ERRATA_TOLERANCE: f64 = 0.01;

/// Which group of outputs a subcommand writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Fuzzify,
    Reduce,
    Product,
    Score,
    Run,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub records: Vec<PatientRecord>,
    pub specs: Vec<VariableSpec>,
    pub fuzzy: Vec<FuzzySoftSet>,
    pub reductions: Vec<(String, Vec<String>, Vec<fss_core::ReductionResult>)>,
    pub reduced: Vec<FuzzySoftSet>,
    pub outcome: PipelineOutcome,
    /// `None` when the universe does not line up with the reference tables.
    pub errata: Option<Vec<(String, ErrataEntry)>>,
    /// Scores of the embedded reference comparison table, classified with the
    /// run's threshold and labels; present only for the reference universe.
    pub reference_report: Option<ScoreReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub config_hash: String,
    pub files: Vec<PathBuf>,
    pub objects: usize,
    pub product_parameters: usize,
    pub accuracy: Option<f64>,
    pub reference_accuracy: Option<f64>,
}

pub fn load_records(source: &DataSource) -> Result<Vec<PatientRecord>, CliError> {
    match source {
        DataSource::BuiltinTable1 => Ok(builtin_table1()),
        DataSource::Csv { path, schema, select } => {
            let records = load_csv(path, schema).map_err(data)?;
            match select {
                Some(idx) => select_by_index(&records, idx).map_err(data),
                None => Ok(records),
            }
        }
    }
}

pub fn analyse(cfg: &PipelineConfig) -> Result<Analysis, CliError> {
    cfg.validate()?;
    let specs = load_specs(&cfg.specs)?;
    let records = load_records(&cfg.data)?;
    if records.is_empty() {
        return Err(CliError::Data("no records to analyse".into()));
    }
    let fuzzy = fuzzify_cohort(&records, &specs).map_err(data)?;

    let mut reductions = Vec::new();
    let reduced = match cfg.reduction {
        ReductionMode::Off => fuzzy.clone(),
        ReductionMode::PerVariable => {
            let mut out = Vec::with_capacity(fuzzy.len());
            for (spec, set) in specs.iter().zip(&fuzzy) {
                let found = find_reductions(set, DEFAULT_PARAMETER_CAP).map_err(data)?;
                let first = found
                    .first()
                    .ok_or_else(|| CliError::Internal(format!("no reduct found for {}", spec.name())))?;
                out.push(set.restrict(&first.reduct).map_err(|e| CliError::Internal(e.to_string()))?);
                reductions.push((spec.name().to_string(), set.parameters().to_vec(), found));
            }
            out
        }
    };

    let labels = labels_of(&records);
    let outcome = score_pipeline(&reduced, cfg.combiner, cfg.mode, cfg.threshold, labels).map_err(data)?;
    check_invariants(&outcome)?;

    let errata = reference_errata(&specs, &fuzzy)?;
    let reference_report = reference_scores(&records, cfg.threshold, labels_of(&records))?;
    Ok(Analysis {
        records,
        specs,
        fuzzy,
        reductions,
        reduced,
        outcome,
        errata,
        reference_report,
    })
}

fn labels_of(records: &[PatientRecord]) -> Option<Vec<fss_core::ClassLabel>> {
    records.iter().map(|r| r.label).collect()
}

fn reference_scores(
    records: &[PatientRecord],
    threshold: f64,
    labels: Option<Vec<fss_core::ClassLabel>>,
) -> Result<Option<ScoreReport>, CliError> {
    let table = reference::comparison();
    if records.len() != table.len() || records.iter().zip(table.universe()).any(|(r, u)| &r.id != u) {
        return Ok(None);
    }
    scores(&table)
        .with_classification(threshold, labels)
        .map(Some)
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn check_invariants(outcome: &PipelineOutcome) -> Result<(), CliError> {
    let total: f64 = outcome.report.scores.iter().sum();
    let tol = match outcome.table.mode() {
        ComparisonMode::Count => 0.0,
        ComparisonMode::Difference => 1e-6 * outcome.table.len().max(1) as f64,
    };
    if total.abs() > tol {
        return Err(CliError::Internal(format!("scores sum to {total}, expected 0")));
    }
    if outcome.table.mode() == ComparisonMode::Count {
        let m = outcome.table.n_parameters() as f64;
        for i in 0..outcome.table.len() {
            if (outcome.table.get(i, i) - m).abs() > COMPARE_EPSILON {
                return Err(CliError::Internal(format!("comparison diagonal {i} differs from {m}")));
            }
        }
    }
    Ok(())
}

/// Errata against the embedded reference tables, when both the universe and
/// the parameter labels match them.
fn reference_errata(
    specs: &[VariableSpec],
    fuzzy: &[FuzzySoftSet],
) -> Result<Option<Vec<(String, ErrataEntry)>>, CliError> {
    let refs = reference::variable_sets();
    let mut out = Vec::new();
    let mut matched = 0;
    for (spec, set) in specs.iter().zip(fuzzy) {
        let Some((_, printed)) = refs.iter().find(|(n, _)| *n == spec.name()) else {
            continue;
        };
        if printed.universe() != set.universe() || printed.parameters() != set.parameters() {
            continue;
        }
        matched += 1;
        let entries = errata_report(set, printed, ERRATA_TOLERANCE).map_err(|e| CliError::Internal(e.to_string()))?;
        out.extend(entries.into_iter().map(|e| (spec.name().to_string(), e)));
    }
    Ok((matched > 0).then_some(out))
}

fn manifest_line(hash: &str) -> String {
    format!("# manifest: config={hash} version={TOOL_VERSION}\n")
}

fn csv_string(f: impl FnOnce(&mut Vec<u8>) -> fss_core::Result<()>) -> Result<String, CliError> {
    let mut buf = Vec::new();
    f(&mut buf).map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(buf).map_err(|e| CliError::Internal(e.to_string()))
}

/// Renders the output files of `stage` in memory, manifest lines included.
pub fn render(cfg: &PipelineConfig, a: &Analysis, stage: Stage, hash: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut files: Vec<(String, String)> = Vec::new();
    let all = stage == Stage::Run;

    if all || stage == Stage::Fuzzify {
        for (spec, set) in a.specs.iter().zip(&a.fuzzy) {
            files.push((format!("fuzzy_{}.csv", spec.name()), csv_string(|b| set.write_csv(b))?));
        }
        let errata = match &a.errata {
            Some(entries) => csv_string(|b| write_errata_csv(entries, b))?,
            None => "variable,object,parameter,printed,computed,delta\n\
                     # skipped: universe or parameters differ from the reference tables\n"
                .to_string(),
        };
        files.push(("errata.csv".into(), errata));
    }
    if all || stage == Stage::Reduce {
        let text = match cfg.reduction {
            ReductionMode::Off => "reduction disabled\n".to_string(),
            ReductionMode::PerVariable => format_reductions(&a.reductions),
        };
        files.push(("reduction.txt".into(), text));
        for (spec, set) in a.specs.iter().zip(&a.reduced) {
            files.push((format!("reduced_{}.csv", spec.name()), csv_string(|b| set.write_csv(b))?));
        }
    }
    if all || stage == Stage::Product {
        files.push(("product.csv".into(), csv_string(|b| a.outcome.product.write_csv(b))?));
    }
    if all || stage == Stage::Score {
        files.push(("comparison.csv".into(), csv_string(|b| a.outcome.table.write_csv(b))?));
        files.push(("scores.csv".into(), csv_string(|b| a.outcome.report.write_csv(b))?));
        files.push(("scores.txt".into(), a.outcome.report.to_text(cfg.round)));
        if let Some(r) = &a.reference_report {
            files.push(("reference_scores.csv".into(), csv_string(|b| r.write_csv(b))?));
            files.push(("reference_scores.txt".into(), r.to_text(cfg.round)));
        }
    }
    for (_, body) in files.iter_mut() {
        body.push_str(&manifest_line(hash));
    }
    if all {
        let manifest = serde_json::json!({
            "tool": TOOL_VERSION,
            "config_hash": hash,
            "config": cfg,
            "objects": a.outcome.report.universe.len(),
            "product_parameters": a.outcome.product_parameters(),
            "accuracy": a.outcome.report.accuracy,
            "reference_accuracy": a.reference_report.as_ref().and_then(|r| r.accuracy),
            "files": files.iter().map(|(n, _)| n).collect::<Vec<_>>(),
        });
        let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Internal(e.to_string()))?;
        text.push('\n');
        files.push(("manifest.json".into(), text));
    }
    Ok(files)
}

/// Writes every file to a temporary directory inside `out_dir`, then renames
/// them into place, so a failure leaves no partial output behind.
pub fn write_atomically(out_dir: &Path, files: &[(String, String)]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    let staging = tempfile::Builder::new()
        .prefix(".fss-staging")
        .tempdir_in(out_dir)
        .map_err(|e| CliError::Config(format!("{} is not writable: {e}", out_dir.display())))?;
    for (name, body) in files {
        std::fs::write(staging.path().join(name), body)
            .map_err(|e| CliError::Config(format!("writing {name}: {e}")))?;
    }
    let mut written = Vec::with_capacity(files.len());
    for (name, _) in files {
        let dest = out_dir.join(name);
        std::fs::rename(staging.path().join(name), &dest)
            .map_err(|e| CliError::Internal(format!("moving {name} into place: {e}")))?;
        written.push(dest);
    }
    Ok(written)
}

pub fn run_stage(cfg: &PipelineConfig, stage: Stage) -> Result<RunSummary, CliError> {
    let analysis = analyse(cfg)?;
    let hash = cfg.hash()?;
    let files = render(cfg, &analysis, stage, &hash)?;
    let written = write_atomically(&cfg.out_dir, &files)?;
    Ok(RunSummary {
        config_hash: hash,
        files: written,
        objects: analysis.records.len(),
        product_parameters: analysis.outcome.product_parameters(),
        accuracy: analysis.outcome.report.accuracy,
        reference_accuracy: analysis.reference_report.as_ref().and_then(|r| r.accuracy),
    })
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunSummary, CliError> {
    run_stage(cfg, Stage::Run)
}
