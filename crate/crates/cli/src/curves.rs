//! Plot-ready membership curves, one CSV per variable.

use std::path::{Path, PathBuf};

use fss_core::membership::sample_points;
use fss_core::VariableSpec;

use crate::config::{load_specs, SpecSource};
use crate::error::CliError;
use crate::pipeline::write_atomically;

pub const DEFAULT_SAMPLES: usize = 101;

/// Plotting range for a variable: fixed for the default variables, otherwise
/// the breakpoint span padded by a quarter on each side.
pub fn plot_range(spec: &VariableSpec) -> (f64, f64) {
    let fixed = match (spec.name(), spec.column()) {
        ("AGE", "Age") => Some((0.0, 100.0)),
        ("BMI", "BMI") => Some((0.0, 50.0)),
        ("INS", "Insulin") => Some((0.0, 60.0)),
        ("LPN", "Leptin") => Some((0.0, 100.0)),
        ("ADP", "Adiponectin") => Some((0.0, 40.0)),
        _ => None,
    };
    fixed.unwrap_or_else(|| {
        let (lo, hi) = spec.node_span();
        let pad = ((hi - lo) * 0.25).max(1.0);
        (lo - pad, hi + pad)
    })
}

/// CSV with an `x` column plus one degree column per partition.
pub fn curve_table(spec: &VariableSpec, samples: usize) -> Result<String, CliError> {
    let (lo, hi) = plot_range(spec);
    let xs = sample_points(lo, hi, samples).map_err(|e| CliError::Config(e.to_string()))?;
    let mut out = String::from("x");
    for label in spec.parameter_labels() {
        out.push(',');
        out.push_str(&label);
    }
    out.push('\n');
    for x in xs {
        out.push_str(&format!("{x:.6}"));
        for p in spec.partitions() {
            let y = p.mf.eval(x).map_err(|e| CliError::Internal(e.to_string()))?;
            out.push_str(&format!(",{y:.6}"));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn emit_curves(source: &SpecSource, out_dir: &Path, samples: usize) -> Result<Vec<PathBuf>, CliError> {
    if samples < 2 {
        return Err(CliError::Config(format!("need at least 2 samples per curve, got {samples}")));
    }
    let specs = load_specs(source)?;
    let files = specs
        .iter()
        .map(|s| Ok((format!("curves_{}.csv", s.name()), curve_table(s, samples)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    write_atomically(out_dir, &files)
}
