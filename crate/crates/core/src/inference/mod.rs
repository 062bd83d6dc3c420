//! Model-agnostic likelihood machinery.

mod diagnostics;
mod optimize;
mod posterior;
mod sandwich;
mod stats;
mod surface;

pub use diagnostics::{score_error, sup_score_error, ErrorDiagnostics, RegionGrid};
pub use optimize::{maximize, MaxResult, DEFAULT_MAX_ITER};
pub use posterior::{grid_posterior, posterior_from_loglik, tv_distance, PosteriorGrid};
pub use sandwich::{godambe_sandwich, GodambeMatrices};
pub use stats::{
    chi2_cdf, chi2_quantile, lr_confidence_interval, lr_statistic, wald_and_score_statistics,
    LrInterval, TestStatistics,
};
pub use surface::{
    fd_eval, DerivativeMode, Domain, EvalBundle, FdSteps, LikelihoodSurface, ParamPoint,
};
