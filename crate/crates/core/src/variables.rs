//! Clinical variables, their fuzzy partitions and cohort fuzzification.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::membership::MembershipFunction;
use crate::softset::FuzzySoftSet;

/// Slack added to every tolerance comparison so that a printed value that
/// differs by exactly the tolerance is not reported.
pub const TOLERANCE_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// Short code used in parameter labels, e.g. `H` in `(INS)_H`.
    pub label: String,
    /// Descriptive name such as `Hyperinsulinemia`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub mf: MembershipFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct VariableSpec {
    name: String,
    column: String,
    partitions: Vec<Partition>,
}

#[derive(Deserialize)]
struct RawSpec {
    name: String,
    column: String,
    partitions: Vec<Partition>,
}

impl TryFrom<RawSpec> for VariableSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        VariableSpec::new(raw.name, raw.column, raw.partitions)
    }
}

impl VariableSpec {
    pub fn new(name: impl Into<String>, column: impl Into<String>, partitions: Vec<Partition>) -> Result<Self> {
        let name = name.into();
        if partitions.is_empty() {
            return Err(Error::InvalidSpec {
                name,
                reason: "no partitions".into(),
            });
        }
        let mut seen = HashSet::new();
        for p in &partitions {
            if !seen.insert(p.label.as_str()) {
                return Err(Error::InvalidSpec {
                    name,
                    reason: format!("duplicate partition label `{}`", p.label),
                });
            }
        }
        Ok(Self {
            name,
            column: column.into(),
            partitions,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn column(&self) -> &str {
        &self.column
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    /// Soft-set parameter label for a partition, e.g. `(AGE)_O`.
    pub fn parameter_label(&self, partition: &Partition) -> String {
        format!("({})_{}", self.name, partition.label)
    }

    pub fn parameter_labels(&self) -> Vec<String> {
        self.partitions.iter().map(|p| self.parameter_label(p)).collect()
    }

    /// One degree per partition, in partition order.
    pub fn fuzzify_value(&self, x: f64) -> Result<Vec<(String, f64)>> {
        self.partitions
            .iter()
            .map(|p| Ok((p.label.clone(), p.mf.eval(x)?)))
            .collect()
    }

    fn degrees(&self, x: f64) -> Result<Vec<f64>> {
        self.partitions.iter().map(|p| p.mf.eval(x)).collect()
    }

    /// Smallest and largest breakpoint over all partitions, for plotting.
    pub fn node_span(&self) -> (f64, f64) {
        self.partitions.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            let (a, b) = p.mf.node_range();
            (lo.min(a), hi.max(b))
        })
    }
}

fn part(label: &str, name: &str, mf: MembershipFunction) -> Partition {
    Partition {
        label: label.into(),
        name: Some(name.into()),
        mf,
    }
}

/// The five default variables: age, BMI, insulin, leptin and adiponectin.
pub fn default_variable_specs() -> Vec<VariableSpec> {
    use MembershipFunction as Mf;
    let tri = |a, b, c| Mf::triangle(a, b, c).expect("static triangle");
    let falling = |a, b| Mf::left_shoulder(a, b).expect("static shoulder");
    let rising = |a, b| Mf::right_shoulder(a, b).expect("static shoulder");

    let specs = [
        (
            "AGE",
            "Age",
            vec![
                part("C", "Child", falling(5.0, 15.0)),
                part("Y", "Young", tri(10.0, 25.0, 40.0)),
                part("M", "Mild", tri(30.0, 45.0, 60.0)),
                part("O", "Old", rising(50.0, 65.0)),
            ],
        ),
        (
            "BMI",
            "BMI",
            vec![
                part("OI", "Obesity class I", falling(2.0, 22.0)),
                part("OII", "Obesity class II", tri(20.0, 26.0, 33.0)),
                part("OIII", "Obesity class III", rising(30.0, 35.0)),
            ],
        ),
        (
            "INS",
            "Insulin",
            vec![
                part("L", "Hypoglycemia", falling(0.0, 5.0)),
                part("M", "Normal", tri(3.0, 6.5, 10.0)),
                part("H", "Hyperinsulinemia", rising(8.0, 10.0)),
            ],
        ),
        (
            "LPN",
            "Leptin",
            vec![
                part("L", "Low-Leptin", falling(5.0, 20.0)),
                part("M", "Medium-Leptin", tri(15.0, 30.0, 45.0)),
                part("H", "High-Leptin", tri(40.0, 55.0, 70.0)),
                part("VH", "Very High-Leptin", rising(65.0, 75.0)),
            ],
        ),
        (
            "ADP",
            "Adiponectin",
            vec![
                part("L", "Low-Adiponectin", falling(3.0, 10.0)),
                part("M", "Medium-Adiponectin", tri(7.0, 15.0, 23.0)),
                part("H", "High-Adiponectin", rising(20.0, 25.0)),
            ],
        ),
    ];
    specs
        .into_iter()
        .map(|(name, column, parts)| VariableSpec::new(name, column, parts).expect("static spec"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassLabel {
    HealthyControl,
    Patient,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassLabel::HealthyControl => "healthy-control",
            ClassLabel::Patient => "patient",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatientRecord {
    pub id: String,
    pub measurements: BTreeMap<String, f64>,
    pub label: Option<ClassLabel>,
}

impl PatientRecord {
    pub fn new(id: impl Into<String>, measurements: BTreeMap<String, f64>, label: Option<ClassLabel>) -> Self {
        Self {
            id: id.into(),
            measurements,
            label,
        }
    }

    pub fn value(&self, column: &str) -> Result<f64> {
        let v = *self.measurements.get(column).ok_or_else(|| Error::MissingColumn {
            record: self.id.clone(),
            column: column.to_string(),
        })?;
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidMeasurement {
                record: self.id.clone(),
                column: column.to_string(),
                value: v,
            });
        }
        Ok(v)
    }
}

/// One fuzzy soft set per spec, rows in record order.
pub fn fuzzify_cohort(records: &[PatientRecord], specs: &[VariableSpec]) -> Result<Vec<FuzzySoftSet>> {
    let universe: Vec<String> = records.iter().map(|r| r.id.clone()).collect();
    specs
        .iter()
        .map(|spec| {
            let mut degrees = Vec::with_capacity(records.len() * spec.partitions.len());
            for r in records {
                let x = r.value(&spec.column)?;
                let row = spec.degrees(x)?;
                if row.iter().all(|&d| d == 0.0) {
                    log::warn!(
                        "{}: {} = {x} lies outside every partition of {}",
                        r.id,
                        spec.column,
                        spec.name
                    );
                }
                degrees.extend(row);
            }
            FuzzySoftSet::new(universe.clone(), spec.parameter_labels(), degrees)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrataEntry {
    pub object: String,
    pub parameter: String,
    pub printed: f64,
    pub computed: f64,
    pub delta: f64,
}

/// Cells where `computed` and `printed` differ by more than `tolerance`,
/// largest absolute difference first.
pub fn errata_report(computed: &FuzzySoftSet, printed: &FuzzySoftSet, tolerance: f64) -> Result<Vec<ErrataEntry>> {
    if computed.universe() != printed.universe() || computed.parameters() != printed.parameters() {
        return Err(Error::ShapeMismatch(format!(
            "computed set is {}×{}, reference is {}×{} (or labels differ)",
            computed.n_objects(),
            computed.n_parameters(),
            printed.n_objects(),
            printed.n_parameters()
        )));
    }
    let mut out = Vec::new();
    for i in 0..computed.n_objects() {
        for j in 0..computed.n_parameters() {
            let c = computed.degree(i, j);
            let p = printed.degree(i, j);
            let delta = c - p;
            if delta.abs() > tolerance + TOLERANCE_GUARD {
                out.push(ErrataEntry {
                    object: computed.universe()[i].clone(),
                    parameter: computed.parameters()[j].clone(),
                    printed: p,
                    computed: c,
                    delta,
                });
            }
        }
    }
    // stable: ties keep row-major order
    out.sort_by(|a, b| b.delta.abs().total_cmp(&a.delta.abs()));
    Ok(out)
}

/// Writes errata as CSV: `variable,object,parameter,printed,computed,delta`.
pub fn write_errata_csv<W: std::io::Write>(entries: &[(String, ErrataEntry)], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["variable", "object", "parameter", "printed", "computed", "delta"])
        .map_err(io)?;
    for (var, e) in entries {
        w.write_record([
            var.clone(),
            e.object.clone(),
            e.parameter.clone(),
            format!("{:.6}", e.printed),
            format!("{:.6}", e.computed),
            format!("{:.6}", e.delta),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
