//! Independent reference computations shared by `selftest` and the
//! acceptance suite.

use aprxlik_core::ising::{
    brute_force_log_z, kaufman_lattice_log_z, rda_log_z, transfer_log_z, Boundary, IsingParams,
    LatticeSpec,
};
use aprxlik_core::numeric::ln_choose;
use aprxlik_core::twolevel::{
    item_loglik_quadrature, laplace_mode, neg_log_integrand, QuadratureRule,
};

use crate::Result;

/// Adaptive Simpson quadrature with Richardson correction.
pub fn simpson_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let err = left + right - whole;
        if depth == 0 || err.abs() <= 15.0 * tol {
            left + right + err / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 60)
}

/// Item log-likelihood by adaptive Simpson over 40 posterior standard
/// deviations either side of the mode.
pub fn simpson_item_loglik(y: u32, m: u32, theta: f64) -> Result<f64> {
    let fit = laplace_mode(y, m, theta)?;
    let sd = 1.0 / fit.g2_at_mode.sqrt();
    let lb = ln_choose(m, y);
    let w = |b: f64| (fit.g_at_mode - neg_log_integrand(b, y, m, theta, lb)).exp();
    let z = simpson_adaptive(&w, fit.b_hat - 40.0 * sd, fit.b_hat + 40.0 * sd, 1e-13 * sd);
    Ok(z.ln() - fit.g_at_mode)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Largest relative gap between transfer-matrix and brute-force `log Z` over
/// every lattice up to 4x4, both boundaries.
pub fn transfer_vs_brute() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for boundary in [Boundary::Free, Boundary::Periodic] {
        for r in 1..=4 {
            for c in 1..=4 {
                let l = LatticeSpec::new(r, c, boundary)?;
                for alpha in [0.0, 0.1] {
                    for beta in [0.0, 0.2, 0.43] {
                        let p = IsingParams::new(alpha, beta);
                        worst = worst.max(rel(transfer_log_z(&l, p)?, brute_force_log_z(&l, p)?));
                    }
                }
            }
        }
    }
    Ok(worst)
}

pub const KAUFMAN_BETAS: [f64; 4] = [0.1, 0.2, 0.3, 0.43];

/// Largest relative gap of the closed form against brute force on periodic
/// 2x2 to 4x4 lattices and against the transfer matrix on the periodic 8x8.
pub fn kaufman_vs_references() -> Result<(f64, f64)> {
    let (mut vs_brute, mut vs_transfer): (f64, f64) = (0.0, 0.0);
    for beta in KAUFMAN_BETAS {
        let p = IsingParams::new(0.0, beta);
        for r in 2..=4 {
            for c in 2..=4 {
                let l = LatticeSpec::periodic(r, c);
                vs_brute = vs_brute.max(rel(
                    kaufman_lattice_log_z(&l, p)?,
                    brute_force_log_z(&l, p)?,
                ));
            }
        }
        let l = LatticeSpec::periodic(8, 8);
        vs_transfer = vs_transfer.max(rel(kaufman_lattice_log_z(&l, p)?, transfer_log_z(&l, p)?));
    }
    Ok((vs_brute, vs_transfer))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RdaCheck {
    /// Largest `|rda(k = r) - exact|`.
    pub identity_gap: f64,
    /// Absolute errors for `k = 2..=r`, per lattice.
    pub errors: Vec<(usize, Vec<f64>)>,
}

impl RdaCheck {
    pub fn monotone(&self) -> bool {
        self.errors
            .iter()
            .all(|(_, e)| e.windows(2).all(|w| w[1] < w[0]))
    }
}

/// Reduced-dependence errors on free 4x4 (brute-force exact) and 6x6
/// (transfer-matrix exact) lattices.
pub fn rda_check() -> Result<RdaCheck> {
    let mut identity_gap: f64 = 0.0;
    let mut errors = Vec::new();
    for (n, p) in [
        (4usize, IsingParams::new(0.1, 0.3)),
        (6, IsingParams::new(0.1, 0.2)),
    ] {
        let l = LatticeSpec::free(n, n);
        let exact = if n * n <= 16 {
            brute_force_log_z(&l, p)?
        } else {
            transfer_log_z(&l, p)?
        };
        identity_gap = identity_gap.max((rda_log_z(n, &l, p)? - exact).abs());
        let e = (2..n)
            .map(|k| Ok((rda_log_z(k, &l, p)? - exact).abs()))
            .collect::<Result<Vec<_>>>()?;
        errors.push((n, e));
    }
    Ok(RdaCheck {
        identity_gap,
        errors,
    })
}

/// Outcomes `0`, `m / 2` and `m` for each `m`.
pub fn outcome_grid(ms: &[u32]) -> Vec<(u32, u32)> {
    ms.iter()
        .flat_map(|&m| [(0, m), (m / 2, m), (m, m)])
        .collect()
}

/// Per-cell `|quadrature - Simpson|` for the 20-point rule.
pub fn quadrature_vs_simpson(thetas: &[f64], ms: &[u32]) -> Result<Vec<(f64, u32, u32, f64)>> {
    let rule = QuadratureRule::default_20();
    let mut out = Vec::new();
    for &theta in thetas {
        for (y, m) in outcome_grid(ms) {
            let q = item_loglik_quadrature(y, m, theta, rule)?;
            out.push((theta, m, y, (q - simpson_item_loglik(y, m, theta)?).abs()));
        }
    }
    Ok(out)
}

/// Per-cell `|20 nodes - 40 nodes|`.
pub fn quadrature_20_vs_40(thetas: &[f64], ms: &[u32]) -> Result<Vec<(f64, u32, u32, f64)>> {
    let r20 = QuadratureRule::default_20();
    let r40 = QuadratureRule::gauss_hermite(40);
    let mut out = Vec::new();
    for &theta in thetas {
        for (y, m) in outcome_grid(ms) {
            let a = item_loglik_quadrature(y, m, theta, r20)?;
            let b = item_loglik_quadrature(y, m, theta, &r40)?;
            out.push((theta, m, y, (a - b).abs()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_gaussian() {
        let v = simpson_adaptive(&|x: f64| (-0.5 * x * x).exp(), -12.0, 12.0, 1e-14);
        assert!((v - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn simpson_item_sums_to_one() {
        let s: f64 = (0..=6)
            .map(|y| simpson_item_loglik(y, 6, 0.7).unwrap().exp())
            .sum();
        assert!((s - 1.0).abs() < 1e-10);
    }
}
