use std::path::Path;

use aprxlik_core::ising::{
    a_beta, b_beta, b_beta_inv, delta_contour, trapezium_decay_check, IsingParams, BETA_C,
};
use aprxlik_core::numeric::ls_slope;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{write_csv, ExperimentConfig, Result, RunOutputs};

pub const BBETA_FILE: &str = "ising_bbeta.csv";
pub const CONTOUR_FILE: &str = "ising_contour.csv";
pub const STABILITY_FILE: &str = "ising_contour_stability.csv";
pub const TRAPEZIUM_FITS_FILE: &str = "ising_trapezium_fits.csv";
pub const TRAPEZIUM_ROWS_FILE: &str = "ising_trapezium_remainders.csv";

/// Remainders below this are dominated by roundoff in the reference integral.
pub const TRAPEZIUM_NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BbetaRow {
    pub beta: f64,
    pub b_beta: f64,
    pub b_beta_inv: f64,
    pub beta_c: f64,
}

pub fn bbeta_rows(cfg: &ExperimentConfig) -> Result<Vec<BbetaRow>> {
    cfg.beta_grid
        .points()
        .into_iter()
        .map(|beta| {
            Ok(BbetaRow {
                beta,
                b_beta: b_beta(beta)?,
                b_beta_inv: b_beta_inv(beta)?,
                beta_c: BETA_C,
            })
        })
        .collect()
}

pub fn run_bbeta(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutputs> {
    let path = out_dir.join(BBETA_FILE);
    write_csv(&path, &bbeta_rows(cfg)?)?;
    Ok(RunOutputs { files: vec![path] })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityRow {
    pub m: usize,
    pub k: usize,
    pub k_proxy: usize,
    pub log_scaled_delta: f64,
    pub log_scaled_delta_prev: f64,
    /// `|delta_K - delta_{K-1}| / delta_K`.
    pub rel_diff: f64,
}

/// Contour rows at `K_proxy` and the comparison against `K_proxy - 1`.
pub fn contour_tables(
    cfg: &ExperimentConfig,
) -> Result<(Vec<aprxlik_core::ising::ContourRow>, Vec<StabilityRow>)> {
    let params = IsingParams::new(cfg.alpha, cfg.beta);
    let main = delta_contour(&cfg.m_list, &cfg.k_list, params, cfg.k_proxy, cfg.boundary)?;
    let prev = delta_contour(
        &cfg.m_list,
        &cfg.k_list,
        params,
        cfg.k_proxy - 1,
        cfg.boundary,
    )?;
    let stability = main
        .iter()
        .zip(&prev)
        .map(|(a, b)| StabilityRow {
            m: a.m,
            k: a.k,
            k_proxy: cfg.k_proxy,
            log_scaled_delta: a.log_scaled_delta,
            log_scaled_delta_prev: b.log_scaled_delta,
            rel_diff: (1.0 - (b.log_scaled_delta - a.log_scaled_delta).exp()).abs(),
        })
        .collect();
    Ok((main, stability))
}

pub fn run_contour(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutputs> {
    let (main, stability) = contour_tables(cfg)?;
    let (p1, p2) = (out_dir.join(CONTOUR_FILE), out_dir.join(STABILITY_FILE));
    write_csv(&p1, &main)?;
    write_csv(&p2, &stability)?;
    Ok(RunOutputs {
        files: vec![p1, p2],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrapeziumFitRow {
    pub beta: f64,
    pub b_beta: f64,
    pub a_beta: f64,
    pub i_beta: f64,
    /// Negated least-squares slope of `log R_n` over the rows above the noise floor.
    pub fitted_rate: f64,
    pub n_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrapeziumRemainderRow {
    pub beta: f64,
    pub n: usize,
    pub r_odd: f64,
    pub r_even: f64,
    pub r_max: f64,
}

pub fn trapezium_tables(
    cfg: &ExperimentConfig,
) -> Result<(Vec<TrapeziumFitRow>, Vec<TrapeziumRemainderRow>)> {
    let fits = cfg
        .trapezium_betas
        .par_iter()
        .map(|&beta| trapezium_decay_check(beta, &cfg.trapezium_n))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut fit_rows = Vec::new();
    let mut rem_rows = Vec::new();
    for f in fits {
        let used: Vec<_> = f
            .rows
            .iter()
            .filter(|r| r.r_max >= TRAPEZIUM_NOISE_FLOOR)
            .collect();
        let rate = if used.len() >= 2 {
            let x: Vec<f64> = used.iter().map(|r| r.n as f64).collect();
            let y: Vec<f64> = used.iter().map(|r| r.r_max.ln()).collect();
            -ls_slope(&x, &y)
        } else {
            f64::NAN
        };
        fit_rows.push(TrapeziumFitRow {
            beta: f.beta,
            b_beta: f.b_beta,
            a_beta: a_beta(f.beta)?,
            i_beta: f.i_beta,
            fitted_rate: rate,
            n_used: used.len(),
        });
        rem_rows.extend(f.rows.iter().map(|r| TrapeziumRemainderRow {
            beta: f.beta,
            n: r.n,
            r_odd: r.r_odd,
            r_even: r.r_even,
            r_max: r.r_max,
        }));
    }
    Ok((fit_rows, rem_rows))
}

pub fn run_trapezium(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutputs> {
    let (fits, rems) = trapezium_tables(cfg)?;
    let (p1, p2) = (
        out_dir.join(TRAPEZIUM_FITS_FILE),
        out_dir.join(TRAPEZIUM_ROWS_FILE),
    );
    write_csv(&p1, &fits)?;
    write_csv(&p2, &rems)?;
    Ok(RunOutputs {
        files: vec![p1, p2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Experiment;

    #[test]
    fn bbeta_grid_covers_range() {
        let cfg = ExperimentConfig::for_experiment(Experiment::IsingBbeta);
        let rows = bbeta_rows(&cfg).unwrap();
        assert_eq!(rows.len(), 77);
        assert!((rows.last().unwrap().beta - 0.43).abs() < 1e-12);
        assert!(rows.windows(2).all(|w| w[1].b_beta_inv > w[0].b_beta_inv));
    }

    #[test]
    fn contour_header_and_stability() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig {
            m_list: vec![20, 24],
            k_list: vec![2, 3],
            k_proxy: 6,
            ..ExperimentConfig::for_experiment(Experiment::IsingContour)
        };
        run_contour(&cfg, tmp.path()).unwrap();
        let text = std::fs::read_to_string(tmp.path().join(CONTOUR_FILE)).unwrap();
        assert!(text.starts_with("m,k,alpha,beta,log_scaled_delta\n"));
        assert_eq!(text.lines().count(), 5);
        let (_, st) = contour_tables(&cfg).unwrap();
        assert!(st
            .iter()
            .all(|r| r.rel_diff.is_finite() && r.rel_diff >= 0.0));
    }

    #[test]
    fn trapezium_rates_are_positive() {
        let cfg = ExperimentConfig {
            trapezium_betas: vec![0.2, 0.35],
            ..ExperimentConfig::for_experiment(Experiment::IsingTrapezium)
        };
        let (fits, rems) = trapezium_tables(&cfg).unwrap();
        assert_eq!(rems.len(), 2 * cfg.trapezium_n.len());
        assert!(fits.iter().all(|f| f.fitted_rate > 0.0 && f.n_used >= 4));
    }
}
