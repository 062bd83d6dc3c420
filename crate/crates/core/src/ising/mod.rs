//! Ising model on an `r x c` lattice: sufficient statistics, exact and
//! approximate normalizing constants, and the reduced dependence
//! approximation's error curves.

mod brute;
mod error_curves;
mod kaufman;
mod lattice;
mod rda;
mod spectral;
mod surface;
mod transfer;

pub use brute::{
    brute_force_log_z, exact_sample, DensityOfStates, BRUTE_MAX_SITES, SAMPLE_MAX_SITES,
};
pub use error_curves::{
    delta_contour, delta_k, delta_many, epsilon_k, epsilon_many, k_schedule, ContourRow,
    ExactMethod, KSchedule, ScoreCoords, DELTA_STEP,
};
pub use kaufman::{
    kaufman_a, kaufman_lattice_log_z, kaufman_log_z, kaufman_log_z_with, kaufman_terms,
    kaufman_terms_with, log_abar, KaufmanTerms, ProductRange, KAUFMAN_BETA_MAX,
};
pub use lattice::{suff_stats, Boundary, IsingParams, LatticeSpec, SpinConfig, SuffStats};
pub use rda::{rda_combine, rda_log_z, RDA_MAX_K};
pub use spectral::{
    a_beta, b_beta, b_beta_inv, c_beta, d_beta, f, i_beta, i_beta_with, s_even, s_odd,
    trapezium_decay_check, SpectralQuantities, TrapeziumFit, TrapeziumRow, BETA_C,
    REFERENCE_POINTS,
};
pub use surface::{ising_loglik_surface, IsingSurface, LogZ, ZMethod, ALPHA_RANGE, BETA_RANGE};
pub use transfer::{transfer_log_z, PERIODIC_TRANSFER_MAX_HEIGHT, TRANSFER_MAX_HEIGHT};
