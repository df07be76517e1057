//! Fuzzy soft sets as object × parameter degree matrices, with products,
//! restriction and CSV serialization.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Separator used when rendering product parameter labels.
pub const PRODUCT_SEPARATOR: &str = "×";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Combiner {
    Min,
    Max,
}

impl Combiner {
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            Combiner::Min => a.min(b),
            Combiner::Max => a.max(b),
        }
    }
}

impl fmt::Display for Combiner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Combiner::Min => "min",
            Combiner::Max => "max",
        })
    }
}

impl FromStr for Combiner {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "min" => Ok(Combiner::Min),
            "max" => Ok(Combiner::Max),
            other => Err(format!("unknown combiner `{other}` (expected min or max)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySoftSet {
    universe: Vec<String>,
    parameters: Vec<String>,
    // row-major, universe.len() × parameters.len()
    degrees: Vec<f64>,
}

fn ensure_unique(kind: &str, items: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(items.len());
    for item in items {
        if !seen.insert(item.as_str()) {
            return Err(Error::InvalidSet(format!("duplicate {kind} `{item}`")));
        }
    }
    Ok(())
}

impl FuzzySoftSet {
    pub fn new(universe: Vec<String>, parameters: Vec<String>, degrees: Vec<f64>) -> Result<Self> {
        ensure_unique("object", &universe)?;
        ensure_unique("parameter", &parameters)?;
        let expected = universe.len() * parameters.len();
        if degrees.len() != expected {
            return Err(Error::InvalidSet(format!(
                "{} degrees for a {}×{} matrix",
                degrees.len(),
                universe.len(),
                parameters.len()
            )));
        }
        if let Some(pos) = degrees.iter().position(|d| !(0.0..=1.0).contains(d)) {
            let cols = parameters.len();
            return Err(Error::InvalidSet(format!(
                "degree {} at ({}, {}) outside [0, 1]",
                degrees[pos],
                universe[pos / cols],
                parameters[pos % cols]
            )));
        }
        Ok(Self {
            universe,
            parameters,
            degrees,
        })
    }

    pub fn from_rows(universe: Vec<String>, parameters: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != universe.len() {
            return Err(Error::InvalidSet(format!(
                "{} rows for {} objects",
                rows.len(),
                universe.len()
            )));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != parameters.len()) {
            return Err(Error::InvalidSet(format!(
                "row {i} has {} values for {} parameters",
                r.len(),
                parameters.len()
            )));
        }
        Self::new(universe, parameters, rows.into_iter().flatten().collect())
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn n_objects(&self) -> usize {
        self.universe.len()
    }

    pub fn n_parameters(&self) -> usize {
        self.parameters.len()
    }

    pub fn degree(&self, object: usize, parameter: usize) -> f64 {
        self.degrees[object * self.parameters.len() + parameter]
    }

    pub fn row(&self, object: usize) -> &[f64] {
        let m = self.parameters.len();
        &self.degrees[object * m..(object + 1) * m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.universe.len()).map(move |i| self.row(i))
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.universe.iter().position(|u| u == id)
    }

    pub fn parameter_index(&self, label: &str) -> Option<usize> {
        self.parameters.iter().position(|p| p == label)
    }

    /// Degree looked up by object id and parameter label.
    pub fn get(&self, object: &str, parameter: &str) -> Option<f64> {
        Some(self.degree(self.object_index(object)?, self.parameter_index(parameter)?))
    }

    /// Positional alias for a product column, 1-based and `€k` style.
    pub fn column_alias(index: usize) -> String {
        format!("€{}", index + 1)
    }

    /// Cartesian product of parameters; `a`'s labels vary slowest.
    pub fn product(&self, other: &FuzzySoftSet, combiner: Combiner) -> Result<FuzzySoftSet> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch(format!(
                "product operands have universes of size {} and {} (or differ in order)",
                self.universe.len(),
                other.universe.len()
            )));
        }
        let mut parameters = Vec::with_capacity(self.n_parameters() * other.n_parameters());
        for p in &self.parameters {
            for q in &other.parameters {
                parameters.push(format!("{p}{PRODUCT_SEPARATOR}{q}"));
            }
        }
        let mut degrees = Vec::with_capacity(self.n_objects() * parameters.len());
        for (ra, rb) in self.rows().zip(other.rows()) {
            for &a in ra {
                for &b in rb {
                    degrees.push(combiner.apply(a, b));
                }
            }
        }
        FuzzySoftSet::new(self.universe.clone(), parameters, degrees)
    }

    /// Column subset in the set's own parameter order.
    pub fn restrict<S: AsRef<str>>(&self, keep: &[S]) -> Result<FuzzySoftSet> {
        if keep.is_empty() {
            return Err(Error::Empty("restriction label set"));
        }
        let mut wanted = HashSet::with_capacity(keep.len());
        for label in keep {
            let label = label.as_ref();
            if self.parameter_index(label).is_none() {
                return Err(Error::UnknownParameter(label.to_string()));
            }
            wanted.insert(label);
        }
        let columns: Vec<usize> = (0..self.n_parameters())
            .filter(|&j| wanted.contains(self.parameters[j].as_str()))
            .collect();
        Ok(self.select_columns(&columns))
    }

    /// Column subset by index; indices must be valid and are used in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> FuzzySoftSet {
        let parameters = columns.iter().map(|&j| self.parameters[j].clone()).collect();
        let degrees = self
            .rows()
            .flat_map(|r| columns.iter().map(move |&j| r[j]))
            .collect();
        FuzzySoftSet {
            universe: self.universe.clone(),
            parameters,
            degrees,
        }
    }

    /// Row subset by index, in the given order.
    pub fn select_objects(&self, objects: &[usize]) -> FuzzySoftSet {
        let universe = objects.iter().map(|&i| self.universe[i].clone()).collect();
        let degrees = objects.iter().flat_map(|&i| self.row(i).iter().copied()).collect();
        FuzzySoftSet {
            universe,
            parameters: self.parameters.clone(),
            degrees,
        }
    }

    /// Writes CSV with an `object` column followed by one column per parameter.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["object".to_string()];
        header.extend(self.parameters.iter().cloned());
        w.write_record(&header).map_err(io)?;
        for (id, row) in self.universe.iter().zip(self.rows()) {
            let mut rec = vec![id.clone()];
            rec.extend(row.iter().map(|d| format!("{d:.6}")));
            w.write_record(&rec).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Full-precision CSV; `from_table(to_table(s)) == s` exactly.
    pub fn to_table(&self) -> String {
        let mut out = String::from("object");
        for p in &self.parameters {
            out.push(',');
            out.push_str(&csv_field(p));
        }
        out.push('\n');
        for (id, row) in self.universe.iter().zip(self.rows()) {
            out.push_str(&csv_field(id));
            for d in row {
                out.push(',');
                out.push_str(&format!("{d:?}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn read_csv<R: Read>(input: R) -> Result<FuzzySoftSet> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(input);
        let header = rdr.headers().map_err(|e| Error::Table {
            line: e.position().map_or(1, |p| p.line()),
            reason: e.to_string(),
        })?;
        if header.is_empty() {
            return Err(Error::Table {
                line: 1,
                reason: "missing header".into(),
            });
        }
        let parameters: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut seen = HashSet::new();
        for p in &parameters {
            if !seen.insert(p.as_str()) {
                return Err(Error::Table {
                    line: 1,
                    reason: format!("duplicate header `{p}`"),
                });
            }
        }
        let width = parameters.len() + 1;
        let mut universe = Vec::new();
        let mut degrees = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Table {
                line: e.position().map_or(0, |p| p.line()),
                reason: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            if rec.len() != width {
                return Err(Error::Table {
                    line,
                    reason: format!("expected {width} fields, found {}", rec.len()),
                });
            }
            universe.push(rec[0].to_string());
            for (j, cell) in rec.iter().skip(1).enumerate() {
                let d: f64 = cell.parse().map_err(|_| Error::Table {
                    line,
                    reason: format!("non-numeric value `{cell}` in column `{}`", parameters[j]),
                })?;
                degrees.push(d);
            }
        }
        FuzzySoftSet::new(universe, parameters, degrees)
    }

    pub fn from_table(text: &str) -> Result<FuzzySoftSet> {
        Self::read_csv(text.as_bytes())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Left fold of [`FuzzySoftSet::product`] over `sets`.
pub fn product_n(sets: &[FuzzySoftSet], combiner: Combiner) -> Result<FuzzySoftSet> {
    let (first, rest) = sets.split_first().ok_or(Error::Empty("product operand list"))?;
    rest.iter()
        .try_fold(first.clone(), |acc, s| acc.product(s, combiner))
}

/// Side-by-side concatenation of sets sharing a universe.
pub fn concat(sets: &[FuzzySoftSet]) -> Result<FuzzySoftSet> {
    let (first, rest) = sets.split_first().ok_or(Error::Empty("concatenation operand list"))?;
    if let Some(s) = rest.iter().find(|s| s.universe != first.universe) {
        return Err(Error::UniverseMismatch(format!(
            "cannot concatenate sets over {} and {} objects",
            first.n_objects(),
            s.n_objects()
        )));
    }
    let parameters: Vec<String> = sets.iter().flat_map(|s| s.parameters.iter().cloned()).collect();
    let degrees = (0..first.n_objects())
        .flat_map(|i| sets.iter().flat_map(move |s| s.row(i).iter().copied()))
        .collect();
    FuzzySoftSet::new(first.universe.clone(), parameters, degrees)
}
