use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{acosh1p, compensated_sum, ls_slope};

/// `beta_c = log(1 + sqrt 2) / 2`.
pub const BETA_C: f64 = 0.440_686_793_509_771_5;

/// Points in the reference trapezium rule for `I(beta)`.
pub const REFERENCE_POINTS: usize = 1_000_000;

fn check(beta: f64) -> Result<()> {
    if beta > 0.0 && beta <= BETA_C {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "beta must lie in (0, beta_c], got {beta}"
        )))
    }
}

/// `(s - 1)^2 / s` with `s = sinh 2 beta`; equals `c_beta - 2`.
fn c_minus_two(beta: f64) -> f64 {
    let s = (2.0 * beta).sinh();
    (s - 1.0).powi(2) / s
}

/// `c_beta = cosh(2 beta)^2 / sinh(2 beta)`.
pub fn c_beta(beta: f64) -> f64 {
    let t = 2.0 * beta;
    t.cosh().powi(2) / t.sinh()
}

/// `d_beta = 4 cosh 2beta - 2 cosh 2beta coth^2 2beta`, the derivative of `c_beta`.
pub fn d_beta(beta: f64) -> f64 {
    let t = 2.0 * beta;
    let coth = 1.0 / t.tanh();
    4.0 * t.cosh() - 2.0 * t.cosh() * coth * coth
}

/// Distance from the real axis to the nearest branch point of `f(.; beta)`.
pub fn a_beta(beta: f64) -> Result<f64> {
    check(beta)?;
    Ok(acosh1p(c_minus_two(beta)))
}

/// `b_beta = 2 acosh(c_beta - 1)`.
pub fn b_beta(beta: f64) -> Result<f64> {
    Ok(2.0 * a_beta(beta)?)
}

pub fn b_beta_inv(beta: f64) -> Result<f64> {
    Ok(1.0 / b_beta(beta)?)
}

/// `f(x; beta) = d_beta {c_beta - 1 - cos x}^(-1/2) {c_beta + 1 - cos x}^(-1/2)`,
/// the derivative in `beta` of `acosh(c_beta - cos x)`.
pub fn f(x: f64, beta: f64) -> f64 {
    let half = (0.5 * x).sin();
    let one_minus_cos = 2.0 * half * half;
    let lo = c_minus_two(beta) + one_minus_cos;
    let hi = lo + 2.0;
    d_beta(beta) / (lo * hi).sqrt()
}

/// `I(beta)`, the mean of `f` over a period, by an `points`-point trapezium rule.
pub fn i_beta_with(beta: f64, points: usize) -> Result<f64> {
    check(beta)?;
    let h = 2.0 * std::f64::consts::PI / points as f64;
    Ok(compensated_sum((0..points).map(|j| f(j as f64 * h, beta))) / points as f64)
}

pub fn i_beta(beta: f64) -> Result<f64> {
    i_beta_with(beta, REFERENCE_POINTS)
}

/// `S_n^(o) = sum_q f((2q + 1) pi / n)` over `q = 0, ..., n - 1`.
pub fn s_odd(n: usize, beta: f64) -> f64 {
    let pi = std::f64::consts::PI;
    compensated_sum((0..n).map(|q| f((2 * q + 1) as f64 * pi / n as f64, beta)))
}

/// `S_n^(e) = sum_q f(2q pi / n)` over `q = 0, ..., n - 1`.
pub fn s_even(n: usize, beta: f64) -> f64 {
    let pi = std::f64::consts::PI;
    compensated_sum((0..n).map(|q| f((2 * q) as f64 * pi / n as f64, beta)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralQuantities {
    pub beta: f64,
    pub c_beta: f64,
    pub d_beta: f64,
    pub b_beta: f64,
    pub i_beta: f64,
}

impl SpectralQuantities {
    pub fn at(beta: f64) -> Result<Self> {
        Ok(SpectralQuantities {
            beta,
            c_beta: c_beta(beta),
            d_beta: d_beta(beta),
            b_beta: b_beta(beta)?,
            i_beta: i_beta(beta)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrapeziumRow {
    pub n: usize,
    pub s_odd: f64,
    pub s_even: f64,
    pub r_odd: f64,
    pub r_even: f64,
    /// `max(|R_n^(o)|, |R_n^(e)|)`.
    pub r_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrapeziumFit {
    pub beta: f64,
    pub b_beta: f64,
    pub i_beta: f64,
    pub rows: Vec<TrapeziumRow>,
    /// Least-squares slope of `log R_n` against `n`.
    pub slope: f64,
}

/// Remainders of the two trapezium rules for `I(beta)` and the fitted decay
/// rate of their maximum in `n`.
pub fn trapezium_decay_check(beta: f64, n_list: &[usize]) -> Result<TrapeziumFit> {
    if !(beta > 0.05 && beta < 0.42) {
        return Err(Error::Domain(format!(
            "trapezium check needs beta in (0.05, 0.42), got {beta}"
        )));
    }
    if n_list.len() < 4 || n_list.contains(&0) {
        return Err(Error::InvalidArgument(
            "trapezium check needs at least four positive n".into(),
        ));
    }
    let i = i_beta(beta)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let (so, se) = (s_odd(n, beta), s_even(n, beta));
        let (ro, re) = (so / n as f64 - i, se / n as f64 - i);
        let r_max = ro.abs().max(re.abs());
        if r_max < 1e-300 {
            return Err(Error::Underflow(format!(
                "R_{n}({beta}) = {r_max:e}; reduce the n list"
            )));
        }
        rows.push(TrapeziumRow {
            n,
            s_odd: so,
            s_even: se,
            r_odd: ro,
            r_even: re,
            r_max,
        });
    }
    let x: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.r_max.ln()).collect();
    Ok(TrapeziumFit {
        beta,
        b_beta: b_beta(beta)?,
        i_beta: i,
        slope: ls_slope(&x, &y),
        rows,
    })
}
