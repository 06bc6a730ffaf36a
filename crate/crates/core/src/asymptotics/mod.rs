//! Closed-form asymptotics and the standalone analytic lemmas behind them.

mod closed_forms;
mod entropy;
mod tail;

pub use closed_forms::{
    algebraic_consistency_check, conjecture_prediction, f_lambda, f_lambda_float,
    gaussian_den_asym, gaussian_num_asym, prediction_at,
};
pub use entropy::{entropy, entropy_quadratic_gap, stirling_binom_approx};
pub use tail::{tail_bound_check, TailBoundReport};
