//! Normal parameter reduction: choice values, optimal objects and the
//! minimal parameter subsets that keep the optimal objects unchanged.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::softset::FuzzySoftSet;

/// Absolute tolerance when deciding which choice values tie for the maximum.
pub const TIE_EPSILON: f64 = 1e-9;

pub const DEFAULT_PARAMETER_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionResult {
    pub reduct: Vec<String>,
    pub optimal_objects: Vec<String>,
    pub dispensable: Vec<String>,
}

/// Row sums of the degree matrix.
pub fn choice_values(s: &FuzzySoftSet) -> Vec<f64> {
    s.rows().map(|r| r.iter().sum()).collect()
}

fn argmax_set(values: &[f64]) -> Vec<usize> {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..values.len())
        .filter(|&i| values[i] >= max - TIE_EPSILON)
        .collect()
}

fn optimal_indices(s: &FuzzySoftSet, columns: &[usize]) -> Vec<usize> {
    let values: Vec<f64> = s
        .rows()
        .map(|r| columns.iter().map(|&j| r[j]).sum())
        .collect();
    argmax_set(&values)
}

/// Objects whose choice value ties (within [`TIE_EPSILON`]) with the maximum,
/// in universe order.
pub fn optimal_objects(s: &FuzzySoftSet) -> Result<Vec<String>> {
    if s.n_objects() == 0 {
        return Err(Error::Empty("universe"));
    }
    let all: Vec<usize> = (0..s.n_parameters()).collect();
    Ok(optimal_indices(s, &all)
        .into_iter()
        .map(|i| s.universe()[i].clone())
        .collect())
}

fn label_indices<S: AsRef<str>>(s: &FuzzySoftSet, labels: &[S]) -> Result<HashSet<usize>> {
    labels
        .iter()
        .map(|l| {
            s.parameter_index(l.as_ref())
                .ok_or_else(|| Error::UnknownParameter(l.as_ref().to_string()))
        })
        .collect()
}

/// Whether dropping `subset` leaves the optimal objects unchanged.
pub fn is_dispensable<S: AsRef<str>>(s: &FuzzySoftSet, subset: &[S]) -> Result<bool> {
    if s.n_objects() == 0 {
        return Err(Error::Empty("universe"));
    }
    let drop = label_indices(s, subset)?;
    if drop.len() == s.n_parameters() {
        return Err(Error::InvalidSet(
            "a dispensable candidate must be a strict subset of the parameters".into(),
        ));
    }
    let all: Vec<usize> = (0..s.n_parameters()).collect();
    let kept: Vec<usize> = all.iter().copied().filter(|j| !drop.contains(j)).collect();
    Ok(optimal_indices(s, &kept) == optimal_indices(s, &all))
}

/// All minimal non-empty parameter subsets preserving the optimal objects.
///
/// Subsets are enumerated by increasing size; any superset of a reduct already
/// found is skipped, so every subset that passes is independent. Results are
/// ordered by size, then lexicographically by column index.
pub fn find_reductions(s: &FuzzySoftSet, cap: usize) -> Result<Vec<ReductionResult>> {
    let m = s.n_parameters();
    if m > cap || m >= 64 {
        return Err(Error::TooManyParameters {
            count: m,
            cap: cap.min(63),
        });
    }
    if s.n_objects() == 0 {
        return Err(Error::Empty("universe"));
    }
    if m == 0 {
        return Err(Error::Empty("parameter set"));
    }
    let all: Vec<usize> = (0..m).collect();
    let target = optimal_indices(s, &all);

    let mut found: Vec<u64> = Vec::new();
    for size in 1..=m {
        let mut of_size = Vec::new();
        for mask in Combinations::new(m, size) {
            if found.iter().any(|&r| r & !mask == 0) {
                continue;
            }
            let cols = mask_columns(mask, m);
            if optimal_indices(s, &cols) == target {
                of_size.push(mask);
            }
        }
        found.extend(of_size);
    }

    let optimal: Vec<String> = target.iter().map(|&i| s.universe()[i].clone()).collect();
    Ok(found
        .into_iter()
        .map(|mask| {
            let (kept, dropped): (Vec<usize>, Vec<usize>) = all.iter().partition(|&&j| mask >> j & 1 == 1);
            ReductionResult {
                reduct: kept.iter().map(|&j| s.parameters()[j].clone()).collect(),
                optimal_objects: optimal.clone(),
                dispensable: dropped.iter().map(|&j| s.parameters()[j].clone()).collect(),
            }
        })
        .collect())
}

fn mask_columns(mask: u64, m: usize) -> Vec<usize> {
    (0..m).filter(|&j| mask >> j & 1 == 1).collect()
}

/// Bitmasks of `k`-subsets of `0..n` in lexicographic order of their sorted
/// index lists.
struct Combinations {
    idx: Vec<usize>,
    n: usize,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Self {
            idx: (0..k).collect(),
            n,
            done: k > n || k == 0,
        }
    }
}

impl Iterator for Combinations {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        let mask = self.idx.iter().fold(0u64, |acc, &i| acc | 1 << i);
        let k = self.idx.len();
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(mask)
    }
}

/// Plain-text summary of per-variable reductions.
pub fn format_reductions(per_variable: &[(String, Vec<String>, Vec<ReductionResult>)]) -> String {
    let mut out = String::new();
    for (name, params, results) in per_variable {
        out.push_str(&format!("[{name}]\n"));
        out.push_str(&format!("parameters: {}\n", params.join(", ")));
        match results.first() {
            Some(first) => out.push_str(&format!("optimal: {}\n", first.optimal_objects.join(", "))),
            None => out.push_str("optimal: -\n"),
        }
        for (k, r) in results.iter().enumerate() {
            let dropped = if r.dispensable.is_empty() {
                "-".to_string()
            } else {
                r.dispensable.join(", ")
            };
            out.push_str(&format!(
                "reduct {}: keep {} | drop {}\n",
                k + 1,
                r.reduct.join(", "),
                dropped
            ));
        }
        out.push('\n');
    }
    out
}
