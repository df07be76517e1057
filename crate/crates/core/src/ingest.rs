//! Loading patient records from CSV and the built-in ten-patient sample.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::variables::{ClassLabel, PatientRecord};

/// Canonical measurement names, in the order they are reported.
pub const MEASUREMENTS: [&str; 5] = ["Age", "BMI", "Insulin", "Leptin", "Adiponectin"];
pub const LABEL_COLUMN: &str = "Classification";

/// Maps canonical column names onto a file's headers and decodes labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSchema {
    pub column_map: BTreeMap<String, String>,
    pub label_encoding: BTreeMap<String, ClassLabel>,
    /// Header holding explicit object ids; ids are `μ_<row>` when absent.
    #[serde(default)]
    pub id_column: Option<String>,
}

impl Default for DatasetSchema {
    /// Header names of the UCI Coimbra breast-cancer file.
    fn default() -> Self {
        let column_map = MEASUREMENTS
            .iter()
            .chain([&LABEL_COLUMN])
            .map(|c| (c.to_string(), c.to_string()))
            .collect();
        let label_encoding = [("1".to_string(), ClassLabel::HealthyControl), ("2".to_string(), ClassLabel::Patient)]
            .into_iter()
            .collect();
        Self {
            column_map,
            label_encoding,
            id_column: None,
        }
    }
}

impl DatasetSchema {
    fn validate(&self) -> Result<()> {
        for c in MEASUREMENTS.iter().chain([&LABEL_COLUMN]) {
            if !self.column_map.contains_key(*c) {
                return Err(Error::Data {
                    row: 0,
                    column: c.to_string(),
                    reason: "schema does not map this column".into(),
                });
            }
        }
        Ok(())
    }
}

/// Object id used for the 1-based data row `row`.
pub fn row_id(row: usize) -> String {
    format!("μ_{row}")
}

pub fn load_csv(path: impl AsRef<Path>, schema: &DatasetSchema) -> Result<Vec<PatientRecord>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_records(file, schema)
}

pub fn read_records<R: Read>(input: R, schema: &DatasetSchema) -> Result<Vec<PatientRecord>> {
    schema.validate()?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let header = rdr
        .headers()
        .map_err(|e| Error::Data {
            row: 0,
            column: String::new(),
            reason: e.to_string(),
        })?
        .clone();
    let find = |name: &str| -> Result<usize> {
        header.iter().position(|h| h == name).ok_or_else(|| Error::Data {
            row: 0,
            column: name.to_string(),
            reason: "missing header column".into(),
        })
    };
    let mut measure_cols = Vec::with_capacity(MEASUREMENTS.len());
    for canon in MEASUREMENTS {
        let source = &schema.column_map[canon];
        measure_cols.push((canon, source.as_str(), find(source)?));
    }
    let label_source = &schema.column_map[LABEL_COLUMN];
    let label_col = find(label_source)?;
    let id_col = schema.id_column.as_deref().map(find).transpose()?;

    let mut records = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let row = k as u64 + 1;
        let rec = rec.map_err(|e| Error::Data {
            row,
            column: String::new(),
            reason: e.to_string(),
        })?;
        let mut measurements = BTreeMap::new();
        for &(canon, source, col) in &measure_cols {
            let cell = rec.get(col).unwrap_or("");
            let v: f64 = cell.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| Error::Data {
                row,
                column: source.to_string(),
                reason: format!("not a number: `{cell}`"),
            })?;
            measurements.insert(canon.to_string(), v);
        }
        let raw_label = rec.get(label_col).unwrap_or("");
        let label = *schema.label_encoding.get(raw_label).ok_or_else(|| Error::Data {
            row,
            column: label_source.clone(),
            reason: format!("unknown label value `{raw_label}`"),
        })?;
        let id = match id_col {
            Some(c) => rec.get(c).unwrap_or("").to_string(),
            None => row_id(k + 1),
        };
        records.push(PatientRecord::new(id, measurements, Some(label)));
    }
    Ok(records)
}

/// Sublist by 1-based row position, in the requested order.
pub fn select_by_index(records: &[PatientRecord], indices: &[usize]) -> Result<Vec<PatientRecord>> {
    indices
        .iter()
        .map(|&i| {
            i.checked_sub(1)
                .and_then(|k| records.get(k))
                .cloned()
                .ok_or_else(|| Error::UnknownSample(format!("index {i}")))
        })
        .collect()
}

/// Sublist by object id, in the requested order.
pub fn select_by_id<S: AsRef<str>>(records: &[PatientRecord], ids: &[S]) -> Result<Vec<PatientRecord>> {
    ids.iter()
        .map(|id| {
            records
                .iter()
                .find(|r| r.id == id.as_ref())
                .cloned()
                .ok_or_else(|| Error::UnknownSample(id.as_ref().to_string()))
        })
        .collect()
}

/// Row positions of the ten-patient sample.
pub const TABLE1_INDICES: [usize; 10] = [3, 11, 19, 31, 45, 60, 71, 82, 91, 104];

// age, bmi, insulin, leptin, adiponectin
const TABLE1: [[f64; 5]; 10] = [
    [82.0, 23.12, 4.50, 17.94, 22.43],
    [49.0, 23.01, 5.66, 35.59, 26.72],
    [64.0, 34.53, 4.43, 21.21, 5.46],
    [66.0, 36.21, 15.53, 74.71, 7.54],
    [71.0, 30.30, 8.34, 56.50, 8.13],
    [62.0, 22.66, 3.48, 9.86, 11.24],
    [44.0, 24.74, 58.46, 18.16, 16.10],
    [71.0, 25.51, 10.40, 19.07, 5.49],
    [82.0, 31.22, 18.08, 31.65, 9.92],
    [57.0, 34.84, 12.55, 33.16, 2.36],
];

/// The ten-patient sample with its ground-truth split: the first five are
/// healthy controls, the last five patients.
pub fn builtin_table1() -> Vec<PatientRecord> {
    TABLE1_INDICES
        .iter()
        .zip(TABLE1.iter())
        .enumerate()
        .map(|(k, (&idx, values))| {
            let measurements = MEASUREMENTS
                .iter()
                .zip(values)
                .map(|(c, v)| (c.to_string(), *v))
                .collect();
            let label = if k < 5 { ClassLabel::HealthyControl } else { ClassLabel::Patient };
            PatientRecord::new(row_id(idx), measurements, Some(label))
        })
        .collect()
}
