use aprxlik_core::inference::*;
use aprxlik_core::ising::{
    exact_sample, ising_loglik_surface, suff_stats, IsingParams, LatticeSpec, ZMethod,
};
use aprxlik_core::rng::stream;
use aprxlik_core::twolevel::*;

fn grid_argmax<S: LikelihoodSurface>(s: &S, lo: f64, step: f64, count: usize) -> (f64, f64) {
    (0..count)
        .map(|i| {
            let t = lo + step * i as f64;
            (t, s.loglik(&[t]).unwrap())
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

#[test]
fn lr_statistic_matches_grid_maximization() {
    let d = simulate_two_level(400, 10, 0.5, 21);
    let s = dataset_surface(&d, ItemMethod::quadrature20());
    let fit = maximize(&s, &0.4.into(), 1e-12).unwrap();
    let lambda = lr_statistic(&s, &fit.theta, &0.5.into()).unwrap();
    // Refine a grid maximum by a local fine scan.
    let (t0, _) = grid_argmax(&s, 0.05, 1e-3, 2000);
    let (_, best) = grid_argmax(&s, t0 - 1e-3, 1e-7, 20_001);
    let direct = 2.0 * (best - s.loglik(&[0.5]).unwrap());
    assert!((lambda - direct).abs() < 1e-8, "{lambda} vs {direct}");
}

#[test]
fn lr_interval_matches_grid_inversion() {
    let d = simulate_two_level(1000, 5, 0.5, 8);
    let s = dataset_surface(&d, ItemMethod::quadrature20());
    let fit = maximize(&s, &0.5.into(), 1e-12).unwrap();
    let ci = lr_confidence_interval(&s, &fit.theta, 0.9).unwrap();
    let q = chi2_quantile(1, 0.9);
    let l0 = s.loglik(&fit.theta).unwrap();
    let (lo, hi, n) = (0.01, 1.5, 10_000);
    let step = (hi - lo) / n as f64;
    let inside: Vec<f64> = (0..=n)
        .map(|i| lo + step * i as f64)
        .filter(|&t| 2.0 * (l0 - s.loglik(&[t]).unwrap()) <= q)
        .collect();
    assert!((ci.lo - inside[0]).abs() <= step);
    assert!((ci.hi - inside[inside.len() - 1]).abs() <= step);
    assert!(!ci.truncated());
}

#[test]
fn wald_and_score_are_close_to_lr() {
    let d = simulate_two_level(200, 10, 0.5, 4);
    let s = dataset_surface(&d, ItemMethod::quadrature20());
    let fit = maximize(&s, &0.5.into(), 1e-12).unwrap();
    let st = wald_and_score_statistics(&s, &fit.theta, &0.5.into(), &fit.theta, 1).unwrap();
    assert!((st.wald - st.lambda).abs() < 0.5, "{st:?}");
    assert!((st.score_stat - st.lambda).abs() < 0.5, "{st:?}");
}

#[test]
fn information_identity_holds_for_exact_surfaces() {
    let surfaces: Vec<TwoLevelSurface> = (0..500)
        .map(|r| {
            dataset_surface(
                &simulate_two_level(200, 20, 0.5, 1000 + r),
                ItemMethod::quadrature20(),
            )
        })
        .collect();
    let g = godambe_sandwich(&surfaces, &0.5.into()).unwrap();
    let rel = (g.h[(0, 0)] - g.ibar[(0, 0)]).abs() / g.ibar[(0, 0)];
    assert!(rel < 0.15, "H={} Ibar={}", g.h, g.ibar);

    let laplace: Vec<TwoLevelSurface> = surfaces
        .iter()
        .map(|s| TwoLevelSurface::from_counts(s.m, s.counts.clone(), ItemMethod::Laplace))
        .collect();
    let gl = godambe_sandwich(&laplace, &0.5.into()).unwrap();
    assert!(gl.g[(0, 0)].is_finite() && gl.g[(0, 0)] >= 0.0);
}

#[test]
fn posterior_is_stable_under_grid_refinement() {
    let d = simulate_two_level(1000, 5, 0.5, 2);
    let s = dataset_surface(&d, ItemMethod::quadrature20());
    let prior = |t: f64| -t.ln();
    let grid = |step: f64| -> Vec<f64> {
        let n = ((3.0 - 0.05) / step + 1e-9).floor() as usize;
        (0..=n).map(|i| 0.05 + step * i as f64).collect()
    };
    let coarse = grid_posterior(&s, prior, &grid(0.005)).unwrap();
    let fine = grid_posterior(&s, prior, &grid(0.0025)).unwrap();
    assert!((coarse.integral() - 1.0).abs() < 1e-10);
    // Compare on the coarse grid by taking every other fine point.
    let sub = PosteriorGrid {
        grid: coarse.grid.clone(),
        log_density_unnorm: fine.log_density_unnorm.iter().step_by(2).cloned().collect(),
        density: fine.density.iter().step_by(2).cloned().collect(),
    };
    assert!(tv_distance(&coarse, &sub).unwrap() < 1e-5);
}

#[test]
fn score_error_supremum_moves_toward_zero() {
    let grid = RegionGrid::interval(0.05, 3.0, 0.01).unwrap();
    let locations: Vec<f64> = [10u32, 40, 160]
        .iter()
        .map(|&m| {
            let d = simulate_two_level(20, m, 0.5, 77);
            let q = dataset_surface(&d, ItemMethod::quadrature20());
            let l = dataset_surface(&d, ItemMethod::Laplace);
            sup_score_error(&q, &l, &grid).unwrap().argmax_point()[0]
        })
        .collect();
    assert!(
        locations[0] > locations[1] && locations[1] > locations[2],
        "{locations:?}"
    );
}

#[test]
fn constant_offset_changes_nothing() {
    struct Shifted<'a>(&'a TwoLevelSurface);
    impl LikelihoodSurface for Shifted<'_> {
        fn domain(&self) -> &Domain {
            self.0.domain()
        }
        fn loglik(&self, t: &[f64]) -> aprxlik_core::Result<f64> {
            Ok(self.0.loglik(t)? + 7.0)
        }
    }
    let d = simulate_two_level(300, 8, 0.5, 6);
    let s = dataset_surface(&d, ItemMethod::Laplace);
    let sh = Shifted(&s);
    let (delta, gamma) = score_error(&s, &sh, &0.5.into()).unwrap();
    assert!(delta < 1e-6 && gamma < 1e-3);
    let a = maximize(&s, &0.5.into(), 1e-12).unwrap();
    let b = maximize(&sh, &0.5.into(), 1e-12).unwrap();
    assert!((a.theta[0] - b.theta[0]).abs() < 1e-10);
    let ca = lr_confidence_interval(&s, &a.theta, 0.9).unwrap();
    let cb = lr_confidence_interval(&sh, &b.theta, 0.9).unwrap();
    assert!((ca.lo - cb.lo).abs() < 1e-9 && (ca.hi - cb.hi).abs() < 1e-9);
    let grid: Vec<f64> = (0..200).map(|i| 0.1 + 0.005 * i as f64).collect();
    let pa = grid_posterior(&s, |_| 0.0, &grid).unwrap();
    let pb = grid_posterior(&sh, |_| 0.0, &grid).unwrap();
    assert!(tv_distance(&pa, &pb).unwrap() < 1e-10);
}

#[test]
fn ising_mle_matches_grid_scan() {
    let l = LatticeSpec::free(3, 3);
    let mut rng = stream(2024, 0);
    // Draw until the configuration has an interior maximizer on [0, 0.43].
    let surf = loop {
        let y = exact_sample(&l, IsingParams::new(0.0, 0.2), &mut rng).unwrap();
        let s = suff_stats(&y, &l).unwrap();
        let surf = ising_loglik_surface(s, &l, ZMethod::Brute)
            .unwrap()
            .with_fixed_alpha(0.0);
        let d0 = surf.eval(&[0.01]).unwrap().score[0];
        let d1 = surf.eval(&[0.42]).unwrap().score[0];
        if d0 > 0.0 && d1 < 0.0 {
            break surf;
        }
    };
    let step = 1e-4;
    let (best, _) = grid_argmax(&surf, 0.0, step, 4301);
    let fit = maximize(&surf, &0.2.into(), 1e-12).unwrap();
    assert!(fit.converged);
    assert!(
        (fit.theta[0] - best).abs() < 5e-4,
        "{} vs {best}",
        fit.theta[0]
    );
}
