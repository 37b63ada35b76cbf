//! Evaluation: stratified splitting, ROC/AUC, rank-sum significance tests
//! and the two benchmark procedures.

mod benchmark;
mod roc;
mod split;
mod stats;

pub use benchmark::{
    average_ranks, grid_search, run_benchmark, run_procedure2, split_and_preprocess,
    BenchmarkConfig, EvalReport, GridResult, MethodSummary, Procedure2Report, RunMetrics,
    RunRecord, SIGNIFICANCE,
};
pub use roc::{roc_auc, RocResult};
pub use split::{stratified_kfold, stratified_split, stratified_split_indices};
pub use stats::{midranks, rank_sum_exact, rank_sum_normal, rank_sum_test, EXACT_LIMIT};
