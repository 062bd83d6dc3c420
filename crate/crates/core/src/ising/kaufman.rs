use serde::{Deserialize, Serialize};

use super::lattice::{IsingParams, LatticeSpec};
use crate::error::{Error, Result};
use crate::numeric::{acosh1p, log_2cosh, log_abs_2sinh, SignedLog};

/// Upper end of the coupling range accepted by the closed form.
pub const KAUFMAN_BETA_MAX: f64 = 0.43;

/// Which `q` values enter the four products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductRange {
    /// `q = 0, ..., n - 1`: `n` factors.
    #[default]
    Classical,
    /// `q = 0, ..., n`: `n + 1` factors.
    Extended,
}

impl ProductRange {
    fn factors(self, n: usize) -> usize {
        match self {
            ProductRange::Classical => n,
            ProductRange::Extended => n + 1,
        }
    }
}

/// Ingredients of the zero-field periodic partition function on an `n x m` torus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KaufmanTerms {
    pub n: usize,
    pub m: usize,
    pub beta: f64,
    /// `a[l] = a_{l,n}(beta)` for `l = 0, ..., 2 * factors - 1`; `a[0]` is signed.
    pub a: Vec<f64>,
    /// `log A^(1)`, ..., `log A^(4)` with signs.
    pub log_a: [SignedLog; 4],
    pub log_abar: SignedLog,
    /// `A^(i) / Abar`.
    pub ratios: [f64; 4],
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta <= KAUFMAN_BETA_MAX {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "closed form needs beta in (0, {KAUFMAN_BETA_MAX}], got {beta}"
        )))
    }
}

/// `a_{l,n}(beta) = acosh(c_beta - cos(pi l / n))` for `l >= 1`, written as
/// `acosh(1 + (s - 1)^2 / s + 2 sin^2(pi l / 2n))` with `s = sinh 2 beta` so
/// that it stays accurate near the critical point.
pub fn kaufman_a(l: usize, n: usize, beta: f64) -> f64 {
    if l == 0 {
        return 2.0 * beta + beta.tanh().ln();
    }
    let s = (2.0 * beta).sinh();
    let half = (std::f64::consts::PI * l as f64 / (2.0 * n as f64)).sin();
    acosh1p((s - 1.0).powi(2) / s + 2.0 * half * half)
}

pub fn kaufman_terms_with(
    n: usize,
    m: usize,
    beta: f64,
    range: ProductRange,
) -> Result<KaufmanTerms> {
    check_beta(beta)?;
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!("empty torus {n}x{m}")));
    }
    let q = range.factors(n);
    let a: Vec<f64> = (0..2 * q).map(|l| kaufman_a(l, n, beta)).collect();
    let half_m = m as f64 / 2.0;
    let mut out = [SignedLog::ZERO; 4];
    for (i, parity) in [(0usize, 1usize), (2, 0)] {
        let (mut lc, mut ls, mut sign) = (0.0, 0.0, 1.0);
        for j in 0..q {
            let x = half_m * a[2 * j + parity];
            lc += log_2cosh(x);
            ls += log_abs_2sinh(x);
            sign *= x.signum();
        }
        out[i] = SignedLog::new(lc, 1.0);
        out[i + 1] = SignedLog::new(ls, sign);
    }
    let log_abar = SignedLog::sum(&out);
    if log_abar.sign <= 0.0 {
        return Err(Error::Evaluation {
            point: vec![beta],
            reason: format!("Abar_{{{n},{m}}} is not positive"),
        });
    }
    let ratios = out.map(|t| t.sign * (t.ln_abs - log_abar.ln_abs).exp());
    Ok(KaufmanTerms {
        n,
        m,
        beta,
        a,
        log_a: out,
        log_abar,
        ratios,
    })
}

pub fn kaufman_terms(n: usize, m: usize, beta: f64) -> Result<KaufmanTerms> {
    kaufman_terms_with(n, m, beta, ProductRange::Classical)
}

/// `log Abar_{n,m}(beta)`.
pub fn log_abar(n: usize, m: usize, beta: f64) -> Result<f64> {
    Ok(kaufman_terms(n, m, beta)?.log_abar.ln_abs)
}

/// `log Z` on the periodic `n x m` torus at zero field.
pub fn kaufman_log_z_with(n: usize, m: usize, beta: f64, range: ProductRange) -> Result<f64> {
    let t = kaufman_terms_with(n, m, beta, range)?;
    Ok(
        (n * m) as f64 / 2.0 * (2.0 * (2.0 * beta).sinh()).ln() + t.log_abar.ln_abs
            - std::f64::consts::LN_2,
    )
}

pub fn kaufman_log_z(n: usize, m: usize, beta: f64) -> Result<f64> {
    kaufman_log_z_with(n, m, beta, ProductRange::Classical)
}

/// The closed form applied to a lattice, which must be periodic and field-free.
pub fn kaufman_lattice_log_z(lattice: &LatticeSpec, params: IsingParams) -> Result<f64> {
    if lattice.boundary != super::Boundary::Periodic || params.alpha != 0.0 {
        return Err(Error::InvalidArgument(
            "closed form needs a periodic lattice and alpha = 0".into(),
        ));
    }
    kaufman_log_z(lattice.rows, lattice.cols, params.beta)
}
