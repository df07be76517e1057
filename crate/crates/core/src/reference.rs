//! Reference tables for the ten-patient sample, embedded verbatim as
//! published (two decimals), including cells that disagree with the
//! membership functions. Use [`crate::variables::errata_report`] to list
//! those cells.

use crate::error::{Error, Result};
use crate::scoring::{ComparisonMode, ComparisonTable};
use crate::softset::FuzzySoftSet;

pub const AGE_CSV: &str = include_str!("../data/age.csv");
pub const BMI_CSV: &str = include_str!("../data/bmi.csv");
pub const INSULIN_CSV: &str = include_str!("../data/insulin.csv");
pub const LEPTIN_CSV: &str = include_str!("../data/leptin.csv");
pub const ADIPONECTIN_CSV: &str = include_str!("../data/adiponectin.csv");
/// Max-combined product of the age and BMI sets.
pub const AGE_BMI_PRODUCT_CSV: &str = include_str!("../data/age_bmi_product.csv");
/// 72-column product table whose derivation is not recoverable; columns are
/// labelled only positionally.
pub const WIDE_PRODUCT_CSV: &str = include_str!("../data/wide_product.csv");
/// Count-mode comparison table over the 72-column product.
pub const COMPARISON_CSV: &str = include_str!("../data/comparison.csv");
/// `object,row_sum,column_sum,score`.
pub const SCORES_CSV: &str = include_str!("../data/scores.csv");

/// Parameter count behind [`comparison`].
pub const WIDE_PRODUCT_PARAMETERS: usize = 72;

/// Per-variable reference sets keyed by variable name, in default-spec order.
pub fn variable_sets() -> Vec<(&'static str, FuzzySoftSet)> {
    [
        ("AGE", AGE_CSV),
        ("BMI", BMI_CSV),
        ("INS", INSULIN_CSV),
        ("LPN", LEPTIN_CSV),
        ("ADP", ADIPONECTIN_CSV),
    ]
    .into_iter()
    .map(|(name, csv)| (name, parse(csv)))
    .collect()
}

pub fn variable_set(name: &str) -> Option<FuzzySoftSet> {
    variable_sets().into_iter().find(|(n, _)| *n == name).map(|(_, s)| s)
}

pub fn age_bmi_product() -> FuzzySoftSet {
    parse(AGE_BMI_PRODUCT_CSV)
}

pub fn wide_product() -> FuzzySoftSet {
    parse(WIDE_PRODUCT_CSV)
}

fn parse(csv: &str) -> FuzzySoftSet {
    FuzzySoftSet::from_table(csv).expect("embedded reference table is well formed")
}

pub fn comparison() -> ComparisonTable {
    let (universe, rows) = parse_matrix(COMPARISON_CSV).expect("embedded comparison table is well formed");
    ComparisonTable::from_matrix(universe, rows, ComparisonMode::Count, WIDE_PRODUCT_PARAMETERS)
        .expect("embedded comparison table is valid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub object: String,
    pub row_sum: i64,
    pub column_sum: i64,
    pub score: i64,
}

pub fn score_rows() -> Vec<ScoreRow> {
    let (ids, rows) = parse_matrix(SCORES_CSV).expect("embedded score table is well formed");
    ids.into_iter()
        .zip(rows)
        .map(|(object, r)| ScoreRow {
            object,
            row_sum: r[0] as i64,
            column_sum: r[1] as i64,
            score: r[2] as i64,
        })
        .collect()
}

/// Object ids and numeric rows of a CSV with an `object` first column.
fn parse_matrix(csv: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    for (k, line) in csv.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let mut cells = line.split(',');
        ids.push(cells.next().unwrap_or_default().to_string());
        let row = cells
            .map(|c| {
                c.trim().parse::<f64>().map_err(|_| Error::Table {
                    line: k as u64 + 1,
                    reason: format!("non-numeric `{c}`"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((ids, rows))
}
