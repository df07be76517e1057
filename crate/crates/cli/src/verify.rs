//! Checks the implementation against the embedded reference tables.

use std::collections::HashSet;
use std::fmt;

use fss_core::{
    builtin_table1, classify, comparison_table, default_variable_specs, errata_report, evaluate, fuzzify_cohort,
    reference, scores, ClassLabel, Combiner, ComparisonMode, ErrataEntry, Prediction,
};
use serde::Serialize;

use crate::pipeline::ERRATA_TOLERANCE;

/// Minimum cells per variable that must agree with the reference tables.
pub const MIN_AGREEING_CELLS: [(&str, usize); 5] = [("AGE", 40), ("BMI", 22), ("INS", 28), ("LPN", 33), ("ADP", 30)];

/// Off-diagonal agreement required between the recomputed and the reference
/// comparison tables.
pub const COMPARISON_MATCH_RATE: f64 = 0.85;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    /// Passed, with listed divergences.
    SoftPass,
    /// Failed a check that does not affect the exit status.
    SoftFail,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::SoftPass => "soft-pass",
            Status::SoftFail => "soft-fail",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub summary: String,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn hard_failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{:>9}] {}: {}", c.status.to_string(), c.name, c.summary)?;
            for d in &c.details {
                writeln!(f, "            {d}")?;
            }
        }
        Ok(())
    }
}

fn describe(e: &ErrataEntry) -> String {
    format!(
        "{} {}: printed {:.2}, computed {:.4}, delta {:+.4}",
        e.object, e.parameter, e.printed, e.computed, e.delta
    )
}

/// Cells of the off-diagonal comparison table that disagree, as
/// `(row, column, computed, reference)`.
pub fn comparison_mismatches() -> Vec<(String, String, f64, f64)> {
    let wide = reference::wide_product();
    let computed = comparison_table(&wide, ComparisonMode::Count).expect("reference product is non-empty");
    let printed = reference::comparison();
    let u = printed.universe();
    let mut out = Vec::new();
    for i in 0..u.len() {
        for j in 0..u.len() {
            if computed.get(i, j) != printed.get(i, j) {
                out.push((u[i].clone(), u[j].clone(), computed.get(i, j), printed.get(i, j)));
            }
        }
    }
    out
}

pub fn verify_fixtures() -> VerifyReport {
    let mut checks = Vec::new();
    let specs = default_variable_specs();
    let records = builtin_table1();
    let fuzzy = fuzzify_cohort(&records, &specs).expect("built-in sample fuzzifies");

    let mut errata_by_var = Vec::new();
    for ((spec, set), (name, min_ok)) in specs.iter().zip(&fuzzy).zip(MIN_AGREEING_CELLS) {
        debug_assert_eq!(spec.name(), name);
        let printed = reference::variable_set(name).expect("reference table exists");
        let errata = errata_report(set, &printed, ERRATA_TOLERANCE).expect("shapes agree");
        let total = set.n_objects() * set.n_parameters();
        let ok = total - errata.len();
        let status = if ok < min_ok {
            Status::Fail
        } else if errata.is_empty() {
            Status::Pass
        } else {
            Status::SoftPass
        };
        checks.push(Check {
            name: format!("fuzzify {name}"),
            status,
            summary: format!("{ok}/{total} cells within ±{ERRATA_TOLERANCE} (need {min_ok})"),
            details: errata.iter().map(describe).collect(),
        });
        errata_by_var.push((name, errata));
    }

    // max product of age and BMI; divergences must trace back to errata cells
    let product = fuzzy[0].product(&fuzzy[1], Combiner::Max).expect("same universe");
    let printed = reference::age_bmi_product();
    let diverging = errata_report(&product, &printed, ERRATA_TOLERANCE).expect("shapes agree");
    let flagged: HashSet<(String, String)> = errata_by_var[..2]
        .iter()
        .flat_map(|(_, es)| es.iter().map(|e| (e.object.clone(), e.parameter.clone())))
        .collect();
    let untraced: Vec<&ErrataEntry> = diverging
        .iter()
        .filter(|e| {
            let mut parts = e.parameter.split(fss_core::softset::PRODUCT_SEPARATOR);
            let (a, b) = (parts.next().unwrap_or(""), parts.next().unwrap_or(""));
            !flagged.contains(&(e.object.clone(), a.to_string())) && !flagged.contains(&(e.object.clone(), b.to_string()))
        })
        .collect();
    let total = product.n_objects() * product.n_parameters();
    checks.push(Check {
        name: "AGE×BMI max product".into(),
        status: if !untraced.is_empty() {
            Status::Fail
        } else if diverging.is_empty() {
            Status::Pass
        } else {
            Status::SoftPass
        },
        summary: format!(
            "{}/{total} cells within ±{ERRATA_TOLERANCE}; {} divergent, {} not explained by input errata",
            total - diverging.len(),
            diverging.len(),
            untraced.len()
        ),
        details: diverging.iter().map(describe).collect(),
    });

    // reference comparison table -> reference score table
    let table = reference::comparison();
    let report = scores(&table);
    let expected = reference::score_rows();
    let mut bad = Vec::new();
    for (i, row) in expected.iter().enumerate() {
        let got = (report.row_sums[i], report.column_sums[i], report.scores[i]);
        if got != (row.row_sum as f64, row.column_sum as f64, row.score as f64) {
            bad.push(format!("{}: computed {:?}, reference ({}, {}, {})", row.object, got, row.row_sum, row.column_sum, row.score));
        }
    }
    let total_score: f64 = report.scores.iter().sum();
    if total_score != 0.0 {
        bad.push(format!("scores sum to {total_score}"));
    }
    checks.push(Check {
        name: "comparison → scores".into(),
        status: if bad.is_empty() { Status::Pass } else { Status::Fail },
        summary: format!("{}/{} score rows exact", expected.len() - bad.len().min(expected.len()), expected.len()),
        details: bad,
    });

    // scores -> accuracy at threshold 0
    let predictions = classify(&report, 0.0);
    let labelled: Vec<(String, ClassLabel)> = records.iter().map(|r| (r.id.clone(), r.label.expect("labelled"))).collect();
    let accuracy = evaluate(&report.universe, &predictions, &labelled).expect("labels align");
    let wrong: Vec<String> = report
        .universe
        .iter()
        .zip(&predictions)
        .zip(&labelled)
        .filter(|((_, p), (_, l))| p.as_label() != *l)
        .map(|((id, _), _)| id.clone())
        .collect();
    let high_risk: Vec<&String> = report
        .universe
        .iter()
        .zip(&predictions)
        .filter(|(_, p)| **p == Prediction::HighRisk)
        .map(|(id, _)| id)
        .collect();
    checks.push(Check {
        name: "accuracy".into(),
        status: if accuracy == 0.7 && wrong == ["μ_31", "μ_45", "μ_60"] { Status::Pass } else { Status::Fail },
        summary: format!("accuracy {accuracy:.2}; misclassified {}", wrong.join(", ")),
        details: vec![format!("high-risk: {}", high_risk.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", "))],
    });

    // wide product -> comparison table; informational
    let mismatches = comparison_mismatches();
    let n = table.len();
    let diag_bad = mismatches.iter().filter(|(a, b, _, _)| a == b).count();
    let off = n * (n - 1);
    let off_bad = mismatches.len() - diag_bad;
    let rate = (off - off_bad) as f64 / off as f64;
    checks.push(Check {
        name: "wide product → comparison".into(),
        status: if diag_bad == 0 && rate >= COMPARISON_MATCH_RATE { Status::Pass } else { Status::SoftFail },
        summary: format!(
            "diagonal {}/{n}; off-diagonal {}/{off} = {:.1}% (need {:.0}%)",
            n - diag_bad,
            off - off_bad,
            rate * 100.0,
            COMPARISON_MATCH_RATE * 100.0
        ),
        details: mismatches
            .iter()
            .map(|(a, b, c, p)| format!("c[{a}][{b}]: computed {c}, reference {p}"))
            .collect(),
    });

    VerifyReport { checks }
}
