//! Evaluation, portfolio selection, subset planning and dataset statistics.

mod eval;
mod portfolio;
mod stats;
mod subsets;

pub use eval::{
    exact_match, identity_predictions, judge, oracle_predictions, parse_predictions, score_dataset,
    write_predictions, AccuracyReport, EvalError, PredictionFile, PredictionRecord, TaskAccuracy, Verdict,
};
pub use portfolio::{parse_scores, select_portfolio_model, PortfolioError};
pub use stats::{dataset_stats, DatasetStats};
pub use subsets::{binomial, plan_subsets, planned_count, SubsetError, SubsetPlan};
