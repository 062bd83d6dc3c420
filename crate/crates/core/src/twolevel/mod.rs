//! Binomial-logit items with a Gaussian random effect.
//!
//! `Y_i ~ Binomial(m, p_i)`, `logit(p_i) = b_i`, `b_i ~ N(0, theta^2)`. Each
//! item's likelihood is a one-dimensional integral over `b_i`; it is computed
//! either by adaptive Gauss-Hermite quadrature (the proxy for the exact
//! likelihood) or by a Laplace approximation.

mod item;
mod quadrature;
mod schedule;
mod simulate;
mod surface;

pub use item::{
    item_loglik, item_loglik_laplace, item_loglik_quadrature, laplace_mode, neg_log_integrand,
    LaplaceFit,
};
pub use quadrature::QuadratureRule;
pub use schedule::{mn_schedule, MnReading};
pub use simulate::{simulate_two_level, TwoLevelDataset};
pub use surface::{dataset_surface, ItemMethod, TwoLevelSurface, THETA_DOMAIN};
