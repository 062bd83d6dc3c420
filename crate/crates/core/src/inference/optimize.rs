use nalgebra::{Cholesky, DVector};

use super::surface::{DerivativeMode, EvalBundle, LikelihoodSurface, ParamPoint};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ITER: usize = 200;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone)]
pub struct MaxResult {
    pub theta: ParamPoint,
    pub bundle: EvalBundle,
    pub converged: bool,
    pub iterations: usize,
}

/// Box that keeps finite-difference stencils inside the domain.
fn working_box<S: LikelihoodSurface + ?Sized>(surface: &S) -> (Vec<f64>, Vec<f64>) {
    let dom = surface.domain();
    let h = match surface.derivative_mode() {
        DerivativeMode::FiniteDifference(s) => s.max(),
        DerivativeMode::Analytic => 0.0,
    };
    let shrink = |b: f64| 2.5 * h * b.abs().max(1.0) * (1.0 + 1e-9);
    let lo = dom
        .lower
        .iter()
        .map(|&l| if l.is_finite() { l + shrink(l) } else { l })
        .collect();
    let hi = dom
        .upper
        .iter()
        .map(|&u| if u.is_finite() { u - shrink(u) } else { u })
        .collect();
    (lo, hi)
}

fn project(x: &mut [f64], lo: &[f64], hi: &[f64]) {
    for ((v, l), u) in x.iter_mut().zip(lo).zip(hi) {
        *v = v.clamp(*l, *u);
    }
}

/// Maximize a log-likelihood surface.
///
/// Newton steps on the observed information with backtracking halving,
/// projected onto the domain box. When the information is not positive
/// definite the iteration falls back to a golden-section line search on the
/// coordinate with the largest score component. Converged means
/// `|score|_1 <= tol * max(1, |loglik|)` or an iterate change below `tol`.
pub fn maximize<S: LikelihoodSurface + ?Sized>(
    surface: &S,
    theta_init: &ParamPoint,
    tol: f64,
) -> Result<MaxResult> {
    maximize_with(surface, theta_init, tol, DEFAULT_MAX_ITER)
}

pub fn maximize_with<S: LikelihoodSurface + ?Sized>(
    surface: &S,
    theta_init: &ParamPoint,
    tol: f64,
    max_iter: usize,
) -> Result<MaxResult> {
    let p = surface.dim();
    if theta_init.dim() != p {
        return Err(Error::Dimension {
            expected: p,
            got: theta_init.dim(),
        });
    }
    if !surface.domain().contains(theta_init) {
        return Err(Error::OutOfDomain {
            point: theta_init.0.clone(),
            margin: 0.0,
        });
    }
    let (lo, hi) = working_box(surface);
    let mut theta = theta_init.0.clone();
    project(&mut theta, &lo, &hi);
    let mut bundle = surface.eval(&theta)?;

    for iter in 0..max_iter {
        let l1: f64 = bundle.score.iter().map(|g| g.abs()).sum();
        if l1 <= tol * bundle.loglik.abs().max(1.0) {
            return Ok(MaxResult {
                theta: ParamPoint(theta),
                bundle,
                converged: true,
                iterations: iter,
            });
        }

        let next = match newton_step(surface, &theta, &bundle, &lo, &hi)? {
            Some(x) => x,
            None => golden_coordinate_step(surface, &theta, &bundle, &lo, &hi)?,
        };
        let moved = next
            .iter()
            .zip(&theta)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let scale = theta.iter().map(|x| x.abs()).fold(1.0, f64::max);
        theta = next;
        bundle = surface.eval(&theta)?;
        if moved <= tol * scale {
            return Ok(MaxResult {
                theta: ParamPoint(theta),
                bundle,
                converged: true,
                iterations: iter + 1,
            });
        }
    }
    Ok(MaxResult {
        theta: ParamPoint(theta),
        bundle,
        converged: false,
        iterations: max_iter,
    })
}

fn newton_step<S: LikelihoodSurface + ?Sized>(
    surface: &S,
    theta: &[f64],
    bundle: &EvalBundle,
    lo: &[f64],
    hi: &[f64],
) -> Result<Option<Vec<f64>>> {
    let Some(chol) = Cholesky::new(bundle.obs_info.clone()) else {
        return Ok(None);
    };
    let dir = chol.solve(&DVector::from_column_slice(&bundle.score));
    let mut t = 1.0;
    for _ in 0..60 {
        let mut cand: Vec<f64> = theta
            .iter()
            .zip(dir.iter())
            .map(|(x, d)| x + t * d)
            .collect();
        project(&mut cand, lo, hi);
        if cand.iter().zip(theta).all(|(a, b)| a == b) {
            return Ok(Some(cand));
        }
        let v = surface.loglik(&cand)?;
        if v.is_finite() && v >= bundle.loglik {
            return Ok(Some(cand));
        }
        t *= 0.5;
    }
    // No ascent along the Newton direction at any scale; let the line search decide.
    Ok(None)
}

fn golden_coordinate_step<S: LikelihoodSurface + ?Sized>(
    surface: &S,
    theta: &[f64],
    bundle: &EvalBundle,
    lo: &[f64],
    hi: &[f64],
) -> Result<Vec<f64>> {
    let j = bundle
        .score
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(j, _)| j)
        .unwrap_or(0);
    let dir = bundle.score[j].signum();
    if dir == 0.0 {
        return Ok(theta.to_vec());
    }
    let mut x = theta.to_vec();
    let mut f_at = |v: f64| -> Result<f64> {
        x[j] = v;
        let r = surface.loglik(&x)?;
        Ok(if r.is_finite() { r } else { f64::NEG_INFINITY })
    };

    let bound = if dir > 0.0 { hi[j] } else { lo[j] };
    let start = theta[j];
    let mut step = 1e-3 * start.abs().max(1.0);
    // Walk outward until the value drops: the maximum is then bracketed by the
    // point before the best one and the first worse one.
    let mut before = start;
    let mut best = start;
    let mut f_best = bundle.loglik;
    let far = loop {
        let mut cand = start + dir * step;
        if (dir > 0.0 && cand >= bound) || (dir < 0.0 && cand <= bound) {
            cand = bound;
        }
        let f_cand = f_at(cand)?;
        if f_cand < f_best {
            break cand;
        }
        if cand == bound {
            let mut out = theta.to_vec();
            out[j] = bound;
            return Ok(out);
        }
        before = best;
        best = cand;
        f_best = f_cand;
        step *= 2.0;
    };

    let (mut a, mut b) = if before < far {
        (before, far)
    } else {
        (far, before)
    };
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = f_at(c)?;
    let mut fd = f_at(d)?;
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * a.abs().max(1.0) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f_at(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f_at(d)?;
        }
    }
    let mut out = theta.to_vec();
    out[j] = if fc >= fd { c } else { d };
    Ok(out)
}
