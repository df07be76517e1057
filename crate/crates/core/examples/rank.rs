use fss_core::{builtin_table1, default_variable_specs, fuzzify_cohort, score_pipeline, Combiner, ComparisonMode};

fn main() -> fss_core::Result<()> {
    let records = builtin_table1();
    let sets = fuzzify_cohort(&records, &default_variable_specs())?;
    let labels = records.iter().map(|r| r.label).collect();
    let outcome = score_pipeline(&sets, Combiner::Max, ComparisonMode::Count, 0.0, labels)?;
    println!("{}", outcome.report.to_text(2));
    Ok(())
}
