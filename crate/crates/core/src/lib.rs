//! Fuzzy soft set decision support.
//!
//! Measurements are fuzzified through piecewise-linear membership functions
//! into per-variable fuzzy soft sets. Sets can be reduced to the parameters
//! that decide the optimal objects, combined by min or max products, and
//! ranked through a comparison table whose row-minus-column sums give each
//! object's score.

pub mod error;
pub mod ingest;
pub mod membership;
pub mod reduction;
pub mod reference;
pub mod scoring;
pub mod softset;
pub mod variables;

pub use error::{Error, Result};
pub use ingest::{builtin_table1, load_csv, read_records, select_by_id, select_by_index, DatasetSchema};
pub use membership::MembershipFunction;
pub use reduction::{choice_values, find_reductions, is_dispensable, optimal_objects, ReductionResult};
pub use scoring::{
    classify, comparison_table, evaluate, score_pipeline, scores, ComparisonMode, ComparisonTable,
    PipelineOutcome, Prediction, ScoreReport,
};
pub use softset::{product_n, Combiner, FuzzySoftSet};
pub use variables::{
    default_variable_specs, errata_report, fuzzify_cohort, ClassLabel, ErrataEntry, Partition,
    PatientRecord, VariableSpec,
};
