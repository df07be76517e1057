//! Comparison tables, row/column-sum scores, risk classification and accuracy.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::softset::{product_n, Combiner, FuzzySoftSet};
use crate::variables::ClassLabel;

/// Slack for `≥` when counting parameters; degrees tie often (many 1.0 cells).
pub const COMPARE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComparisonMode {
    /// Number of parameters on which object i is at least object j.
    Count,
    /// Sum over parameters of `d_i - d_j`.
    Difference,
}

impl fmt::Display for ComparisonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComparisonMode::Count => "count",
            ComparisonMode::Difference => "difference",
        })
    }
}

impl FromStr for ComparisonMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "count" => Ok(ComparisonMode::Count),
            "difference" => Ok(ComparisonMode::Difference),
            other => Err(format!("unknown mode `{other}` (expected count or difference)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    universe: Vec<String>,
    cells: Vec<f64>,
    mode: ComparisonMode,
    n_parameters: usize,
}

impl ComparisonTable {
    /// Wraps an existing matrix, e.g. one read from a report.
    pub fn from_matrix(
        universe: Vec<String>,
        rows: Vec<Vec<f64>>,
        mode: ComparisonMode,
        n_parameters: usize,
    ) -> Result<Self> {
        let n = universe.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidComparison(format!("matrix is not {n}×{n}")));
        }
        let cells: Vec<f64> = rows.into_iter().flatten().collect();
        if cells.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidComparison("non-finite cell".into()));
        }
        let table = Self {
            universe,
            cells,
            mode,
            n_parameters,
        };
        if mode == ComparisonMode::Count {
            let m = n_parameters as f64;
            for i in 0..n {
                if table.get(i, i) != m {
                    return Err(Error::InvalidComparison(format!(
                        "diagonal cell {i} is {} but there are {n_parameters} parameters",
                        table.get(i, i)
                    )));
                }
                for j in 0..n {
                    let c = table.get(i, j);
                    if c < 0.0 || c > m || c.fract() != 0.0 {
                        return Err(Error::InvalidComparison(format!(
                            "count cell ({i}, {j}) = {c} outside 0..={n_parameters}"
                        )));
                    }
                }
            }
        }
        Ok(table)
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn mode(&self) -> ComparisonMode {
        self.mode
    }

    pub fn n_parameters(&self) -> usize {
        self.n_parameters
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.universe.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.universe.len();
        &self.cells[i * n..(i + 1) * n]
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["object".to_string()];
        header.extend(self.universe.iter().cloned());
        w.write_record(&header).map_err(io)?;
        for (i, id) in self.universe.iter().enumerate() {
            let mut rec = vec![id.clone()];
            rec.extend(self.row(i).iter().map(|&c| fmt_cell(c, self.mode, 6)));
            w.write_record(&rec).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn fmt_cell(v: f64, mode: ComparisonMode, decimals: usize) -> String {
    match mode {
        ComparisonMode::Count => format!("{}", v as i64),
        ComparisonMode::Difference => format!("{v:.decimals$}"),
    }
}

pub fn comparison_table(s: &FuzzySoftSet, mode: ComparisonMode) -> Result<ComparisonTable> {
    if s.n_objects() == 0 {
        return Err(Error::Empty("universe"));
    }
    if s.n_parameters() == 0 {
        return Err(Error::Empty("parameter set"));
    }
    let n = s.n_objects();
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        let ri = s.row(i);
        for j in 0..n {
            let rj = s.row(j);
            let c = match mode {
                ComparisonMode::Count => ri
                    .iter()
                    .zip(rj)
                    .filter(|(a, b)| **a >= **b - COMPARE_EPSILON)
                    .count() as f64,
                ComparisonMode::Difference => {
                    if i == j {
                        0.0
                    } else {
                        ri.iter().zip(rj).map(|(a, b)| a - b).sum()
                    }
                }
            };
            cells.push(c);
        }
    }
    if mode == ComparisonMode::Difference {
        // make the table exactly antisymmetric
        for i in 0..n {
            for j in i + 1..n {
                cells[j * n + i] = -cells[i * n + j];
            }
        }
    }
    Ok(ComparisonTable {
        universe: s.universe().to_vec(),
        cells,
        mode,
        n_parameters: s.n_parameters(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prediction {
    HighRisk,
    Healthy,
}

impl Prediction {
    pub fn as_label(self) -> ClassLabel {
        match self {
            Prediction::HighRisk => ClassLabel::Patient,
            Prediction::Healthy => ClassLabel::HealthyControl,
        }
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Prediction::HighRisk => "high-risk",
            Prediction::Healthy => "healthy",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    pub universe: Vec<String>,
    pub mode: ComparisonMode,
    pub row_sums: Vec<f64>,
    pub column_sums: Vec<f64>,
    pub scores: Vec<f64>,
    pub predictions: Option<Vec<Prediction>>,
    pub labels: Option<Vec<ClassLabel>>,
    pub accuracy: Option<f64>,
}

/// Row sums, column sums and their difference for every object.
pub fn scores(c: &ComparisonTable) -> ScoreReport {
    let n = c.len();
    let row_sums: Vec<f64> = (0..n).map(|i| c.row(i).iter().sum()).collect();
    let column_sums: Vec<f64> = (0..n).map(|j| (0..n).map(|i| c.get(i, j)).sum()).collect();
    let scores = row_sums.iter().zip(&column_sums).map(|(r, t)| r - t).collect();
    ScoreReport {
        universe: c.universe.clone(),
        mode: c.mode,
        row_sums,
        column_sums,
        scores,
        predictions: None,
        labels: None,
        accuracy: None,
    }
}

/// High risk iff the score is strictly above `threshold`.
pub fn classify(report: &ScoreReport, threshold: f64) -> Vec<Prediction> {
    report
        .scores
        .iter()
        .map(|&s| if s > threshold { Prediction::HighRisk } else { Prediction::Healthy })
        .collect()
}

/// Fraction of objects whose prediction agrees with the ground truth.
pub fn evaluate(objects: &[String], predictions: &[Prediction], labelled: &[(String, ClassLabel)]) -> Result<f64> {
    if labelled.is_empty() {
        return Err(Error::Empty("ground-truth labels"));
    }
    if objects.len() != predictions.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} objects but {} predictions",
            objects.len(),
            predictions.len()
        )));
    }
    if labelled.len() != objects.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} labels for {} objects",
            labelled.len(),
            objects.len()
        )));
    }
    let mut correct = 0usize;
    for (id, pred) in objects.iter().zip(predictions) {
        let truth = labelled
            .iter()
            .find(|(l, _)| l == id)
            .ok_or_else(|| Error::ShapeMismatch(format!("no label for object `{id}`")))?
            .1;
        if pred.as_label() == truth {
            correct += 1;
        }
    }
    Ok(correct as f64 / objects.len() as f64)
}

impl ScoreReport {
    /// Fills predictions, and accuracy when every object carries a label.
    pub fn with_classification(mut self, threshold: f64, labels: Option<Vec<ClassLabel>>) -> Result<Self> {
        let predictions = classify(&self, threshold);
        if let Some(labels) = &labels {
            if labels.len() != self.universe.len() {
                return Err(Error::ShapeMismatch(format!(
                    "{} labels for {} objects",
                    labels.len(),
                    self.universe.len()
                )));
            }
            let labelled: Vec<(String, ClassLabel)> =
                self.universe.iter().cloned().zip(labels.iter().copied()).collect();
            self.accuracy = Some(evaluate(&self.universe, &predictions, &labelled)?);
        }
        self.labels = labels;
        self.predictions = Some(predictions);
        Ok(self)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["object", "row_sum", "column_sum", "score", "prediction", "label"])
            .map_err(io)?;
        for i in 0..self.universe.len() {
            w.write_record([
                self.universe[i].clone(),
                fmt_cell(self.row_sums[i], self.mode, 6),
                fmt_cell(self.column_sums[i], self.mode, 6),
                fmt_cell(self.scores[i], self.mode, 6),
                self.predictions.as_ref().map_or(String::new(), |p| p[i].to_string()),
                self.labels.as_ref().map_or(String::new(), |l| l[i].to_string()),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Aligned text table; real-valued cells rounded to `decimals`.
    pub fn to_text(&self, decimals: usize) -> String {
        let mut rows: Vec<[String; 6]> = vec![[
            "Sample No".into(),
            "Row Sum".into(),
            "Column Sum".into(),
            "Score".into(),
            "Prediction".into(),
            "Label".into(),
        ]];
        for i in 0..self.universe.len() {
            rows.push([
                self.universe[i].clone(),
                fmt_cell(self.row_sums[i], self.mode, decimals),
                fmt_cell(self.column_sums[i], self.mode, decimals),
                fmt_cell(self.scores[i], self.mode, decimals),
                self.predictions.as_ref().map_or("-".into(), |p| p[i].to_string()),
                self.labels.as_ref().map_or("-".into(), |l| l[i].to_string()),
            ]);
        }
        let mut widths = [0usize; 6];
        for r in &rows {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        for r in &rows {
            let line: Vec<String> = r
                .iter()
                .zip(widths)
                .enumerate()
                .map(|(k, (cell, w))| {
                    let pad = w - cell.chars().count();
                    if (1..4).contains(&k) {
                        format!("{}{cell}", " ".repeat(pad))
                    } else {
                        format!("{cell}{}", " ".repeat(pad))
                    }
                })
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        if let Some(acc) = self.accuracy {
            out.push_str(&format!("\naccuracy: {acc:.decimals$}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutcome {
    pub product: FuzzySoftSet,
    pub table: ComparisonTable,
    pub report: ScoreReport,
}

impl PipelineOutcome {
    pub fn product_parameters(&self) -> usize {
        self.product.n_parameters()
    }
}

/// Product, comparison table, scores and classification in one call.
pub fn score_pipeline(
    sets: &[FuzzySoftSet],
    combiner: Combiner,
    mode: ComparisonMode,
    threshold: f64,
    labels: Option<Vec<ClassLabel>>,
) -> Result<PipelineOutcome> {
    let product = product_n(sets, combiner)?;
    let table = comparison_table(&product, mode)?;
    let report = scores(&table).with_classification(threshold, labels)?;
    Ok(PipelineOutcome {
        product,
        table,
        report,
    })
}
