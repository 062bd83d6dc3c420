use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use aprxlik_core::inference::{
    lr_confidence_interval, maximize, posterior_from_loglik, score_error, tv_distance,
    LikelihoodSurface, ParamPoint,
};
use aprxlik_core::numeric::compensated_sum;
use aprxlik_core::rng::replicate_seed;
use aprxlik_core::twolevel::{
    item_loglik, mn_schedule, simulate_two_level, ItemMethod, TwoLevelSurface,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{write_csv, write_text, ExperimentConfig, HarnessError, Result, RunOutputs};

pub const SUMMARY_FILE: &str = "twolevel_summary.csv";
pub const REPLICATES_FILE: &str = "twolevel_replicates.csv";
pub const FAILURES_FILE: &str = "twolevel_failures.log";

const FIT_TOL: f64 = 1e-8;

/// One row of the summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: u64,
    pub a: f64,
    pub m: u32,
    pub rmse_exact: f64,
    pub rmse_laplace: f64,
    pub rmse_ratio: f64,
    pub cov_exact: f64,
    pub cov_laplace: f64,
    pub mean_tvd: f64,
    pub rhat: f64,
    pub scaled_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRow {
    pub n: u64,
    pub a: f64,
    pub replicate: u64,
    pub seed: u64,
    pub theta_exact: f64,
    pub theta_laplace: f64,
    pub lo_exact: f64,
    pub hi_exact: f64,
    pub lo_laplace: f64,
    pub hi_laplace: f64,
    pub tvd: f64,
    pub j_norm: f64,
    pub delta_theta0: f64,
}

/// Item log-likelihoods on the theta grid for every outcome `0..=m`.
struct GridTable {
    exact: Vec<Vec<f64>>,
    laplace: Vec<Vec<f64>>,
}

impl GridTable {
    fn build(m: u32, grid: &[f64], exact: &ItemMethod) -> Result<Self> {
        let table = |method: &ItemMethod| -> Result<Vec<Vec<f64>>> {
            (0..=m)
                .into_par_iter()
                .map(|y| {
                    grid.iter()
                        .map(|&t| item_loglik(y, m, t, method).map_err(HarnessError::from))
                        .collect()
                })
                .collect()
        };
        Ok(GridTable {
            exact: table(exact)?,
            laplace: table(&ItemMethod::Laplace)?,
        })
    }

    fn surface(rows: &[Vec<f64>], counts: &[(u32, u64)], len: usize) -> Vec<f64> {
        (0..len)
            .map(|g| compensated_sum(counts.iter().map(|&(y, c)| c as f64 * rows[y as usize][g])))
            .collect()
    }
}

fn argmax(xs: &[f64]) -> usize {
    xs.iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
        )
        .0
}

fn fit(surface: &TwoLevelSurface, start: f64) -> std::result::Result<ParamPoint, String> {
    let r = maximize(surface, &ParamPoint::scalar(start), FIT_TOL).map_err(|e| e.to_string())?;
    if !r.converged {
        return Err(format!("maximizer did not converge from {start}"));
    }
    Ok(r.theta)
}

fn replicate(
    cfg: &ExperimentConfig,
    n: u64,
    a: f64,
    index: u64,
    grid: &[f64],
    table: &GridTable,
    exact_method: &ItemMethod,
) -> std::result::Result<ReplicateRow, String> {
    let seed = replicate_seed(cfg.seed, &tag(n, a), index);
    let m = mn_schedule(n, a, cfg.mn_reading);
    let data = simulate_two_level(n as usize, m, cfg.theta0, seed);
    let counts = data.counts();
    let exact = TwoLevelSurface::from_counts(m, counts.clone(), exact_method.clone());
    let approx = TwoLevelSurface::from_counts(m, counts.clone(), ItemMethod::Laplace);

    let ll_e = GridTable::surface(&table.exact, &counts, grid.len());
    let ll_a = GridTable::surface(&table.laplace, &counts, grid.len());
    let th_e = fit(&exact, grid[argmax(&ll_e)])?;
    let th_a = fit(&approx, grid[argmax(&ll_a)])?;

    let err = |e: aprxlik_core::Error| e.to_string();
    let ci_e = lr_confidence_interval(&exact, &th_e, cfg.level).map_err(err)?;
    let ci_a = lr_confidence_interval(&approx, &th_a, cfg.level).map_err(err)?;

    let prior = |t: f64| -t.ln();
    let post_e = posterior_from_loglik(grid, &ll_e, prior).map_err(err)?;
    let post_a = posterior_from_loglik(grid, &ll_a, prior).map_err(err)?;
    let tvd = tv_distance(&post_e, &post_a).map_err(err)?;

    let j_norm = exact.eval(&th_e).map_err(err)?.obs_info[(0, 0)].abs();
    let (delta, _) = score_error(&exact, &approx, &ParamPoint::scalar(cfg.theta0)).map_err(err)?;

    Ok(ReplicateRow {
        n,
        a,
        replicate: index,
        seed,
        theta_exact: th_e[0],
        theta_laplace: th_a[0],
        lo_exact: ci_e.lo,
        hi_exact: ci_e.hi,
        lo_laplace: ci_a.lo,
        hi_laplace: ci_a.hi,
        tvd,
        j_norm,
        delta_theta0: delta,
    })
}

fn tag(n: u64, a: f64) -> String {
    format!("twolevel-figure/n={n}/a={a}")
}

fn summarize(n: u64, a: f64, m: u32, theta0: f64, reps: &[ReplicateRow]) -> SummaryRow {
    let k = reps.len() as f64;
    let mean = |f: &dyn Fn(&ReplicateRow) -> f64| compensated_sum(reps.iter().map(f)) / k;
    let rmse_exact = mean(&|r| (r.theta_exact - theta0).powi(2)).sqrt();
    let rmse_laplace = mean(&|r| (r.theta_laplace - theta0).powi(2)).sqrt();
    let covered = |lo: f64, hi: f64| {
        if lo <= theta0 && theta0 <= hi {
            1.0
        } else {
            0.0
        }
    };
    let rhat = mean(&|r| r.j_norm);
    SummaryRow {
        n,
        a,
        m,
        rmse_exact,
        rmse_laplace,
        rmse_ratio: rmse_laplace / rmse_exact,
        cov_exact: mean(&|r| covered(r.lo_exact, r.hi_exact)),
        cov_laplace: mean(&|r| covered(r.lo_laplace, r.hi_laplace)),
        mean_tvd: mean(&|r| r.tvd),
        rhat,
        scaled_delta: mean(&|r| r.delta_theta0) / rhat.sqrt(),
    }
}

/// Run the two-level replicate study and return the summary rows.
///
/// Writes the summary table, the per-replicate table and a log of excluded
/// replicates. Fails if any `(n, a)` cell loses more than
/// `max_failure_rate` of its replicates.
pub fn run_study(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Vec<SummaryRow>> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|source| HarnessError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let grid = cfg.grid.points();
    let exact_method = ItemMethod::quadrature20();

    let ms: BTreeMap<u32, ()> = cfg
        .n_list
        .iter()
        .flat_map(|&n| cfg.a_list.iter().map(move |&a| (n, a)))
        .map(|(n, a)| (mn_schedule(n, a, cfg.mn_reading), ()))
        .collect();
    let tables: BTreeMap<u32, GridTable> = ms
        .keys()
        .map(|&m| Ok((m, GridTable::build(m, &grid, &exact_method)?)))
        .collect::<Result<_>>()?;

    let mut summary = Vec::new();
    let mut all_reps = Vec::new();
    let mut log = String::new();
    let mut worst: Option<String> = None;
    for &a in &cfg.a_list {
        for &n in &cfg.n_list {
            let m = mn_schedule(n, a, cfg.mn_reading);
            let table = &tables[&m];
            let results: Vec<_> = (0..cfg.replicates as u64)
                .into_par_iter()
                .map(|i| replicate(cfg, n, a, i, &grid, table, &exact_method))
                .collect();
            let mut reps = Vec::with_capacity(results.len());
            let mut failed = 0usize;
            for (i, r) in results.into_iter().enumerate() {
                match r {
                    Ok(row) => reps.push(row),
                    Err(e) => {
                        failed += 1;
                        let _ = writeln!(log, "n={n} a={a} replicate={i}: {e}");
                    }
                }
            }
            let rate = failed as f64 / cfg.replicates as f64;
            if rate > cfg.max_failure_rate || reps.is_empty() {
                worst.get_or_insert(format!(
                    "n={n} a={a}: {failed} of {} replicates failed",
                    cfg.replicates
                ));
            } else {
                summary.push(summarize(n, a, m, cfg.theta0, &reps));
            }
            all_reps.extend(reps);
        }
    }
    write_text(&out_dir.join(FAILURES_FILE), &log)?;
    if let Some(msg) = worst {
        return Err(HarnessError::Numerical(format!(
            "{msg}; see {}",
            out_dir.join(FAILURES_FILE).display()
        )));
    }
    summary.sort_by(|x, y| (x.n, x.a).partial_cmp(&(y.n, y.a)).expect("finite keys"));
    write_csv(&out_dir.join(SUMMARY_FILE), &summary)?;
    write_csv(&out_dir.join(REPLICATES_FILE), &all_reps)?;
    Ok(summary)
}

pub fn run(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutputs> {
    run_study(cfg, out_dir)?;
    Ok(RunOutputs {
        files: [SUMMARY_FILE, REPLICATES_FILE, FAILURES_FILE]
            .iter()
            .map(|f| out_dir.join(f))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Experiment;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            replicates: 6,
            n_list: vec![1000, 2154],
            a_list: vec![0.3],
            ..ExperimentConfig::for_experiment(Experiment::TwolevelFigure)
        }
    }

    #[test]
    fn grid_table_matches_surface() {
        let grid = [0.3, 0.5, 0.9];
        let q = ItemMethod::quadrature20();
        let t = GridTable::build(6, &grid, &q).unwrap();
        let counts = vec![(0, 3), (2, 5), (6, 1)];
        let s = TwoLevelSurface::from_counts(6, counts.clone(), q);
        let ll = GridTable::surface(&t.exact, &counts, 3);
        for (g, &x) in grid.iter().enumerate() {
            assert!((ll[g] - s.loglik(&[x]).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn small_study_has_sane_summary() {
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path();
        let rows = run_study(&small(), dir).unwrap();
        assert_eq!(rows.len(), 2);
        for r in &rows {
            assert!(r.rmse_exact > 0.0 && r.rmse_exact < 0.3);
            assert!((0.0..=1.0).contains(&r.cov_exact));
            assert!(r.mean_tvd >= 0.0 && r.mean_tvd < 1.0);
            assert!(r.rhat > 0.0);
        }
        let text = std::fs::read_to_string(dir.join(SUMMARY_FILE)).unwrap();
        assert!(text.starts_with(
            "n,a,m,rmse_exact,rmse_laplace,rmse_ratio,cov_exact,cov_laplace,mean_tvd,rhat,scaled_delta\n"
        ));
    }
}
