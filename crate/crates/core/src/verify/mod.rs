//! Certification harness: parameter sweeps that compare each congruence
//! and periodicity statement against brute force, and the reports they
//! produce.

mod checks;
mod report;
mod suite;

pub use checks::{
    check_block_vanishing, check_congruence_theorems, check_generator_block,
    check_generator_block_exact, check_generator_permutation, check_lemma_binomial,
    check_period_formulas, check_power_congruence, check_power_congruence_grid, check_row_period,
    check_row_periods, minimal_period_bruteforce, DEFAULT_BUDGET, PERMUTATION_LIMIT,
};
pub use report::{
    emit_report, params, Format, Params, Status, Tally, TheoremId, VerificationRecord,
    VerificationReport, RELATION_KEY,
};
pub use suite::{run_suite, Suite, SuiteConfig};
