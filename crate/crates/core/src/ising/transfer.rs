use rayon::prelude::*;

use super::lattice::{Boundary, IsingParams, LatticeSpec};
use crate::error::{Error, Result};
use crate::numeric::log_sum_exp;

/// Largest column height for the free boundary.
pub const TRANSFER_MAX_HEIGHT: usize = 16;
/// Largest column height for the periodic boundary, whose horizontal wrap
/// costs an extra factor `2^height`.
pub const PERIODIC_TRANSFER_MAX_HEIGHT: usize = 12;

/// Exact `log Z` by column-by-column variable elimination over the
/// `2^min(r, c)` states of the shorter side.
pub fn transfer_log_z(lattice: &LatticeSpec, params: IsingParams) -> Result<f64> {
    let periodic = lattice.boundary == Boundary::Periodic;
    let h = lattice.rows.min(lattice.cols);
    let len = lattice.rows.max(lattice.cols);
    let cap = if periodic {
        PERIODIC_TRANSFER_MAX_HEIGHT
    } else {
        TRANSFER_MAX_HEIGHT
    };
    if h > cap {
        return Err(Error::SizeCap {
            rows: lattice.rows,
            cols: lattice.cols,
            method: "transfer-matrix",
        });
    }
    if !(params.alpha.is_finite() && params.beta.is_finite()) {
        return Err(Error::Domain(format!("non-finite parameters {params:?}")));
    }
    let cols = Columns::new(h, periodic, params);
    let lz = if periodic {
        cols.periodic_log_z(len)
    } else {
        cols.free_log_z(len)
    };
    if lz.is_finite() {
        Ok(lz)
    } else {
        Err(Error::Evaluation {
            point: vec![params.alpha, params.beta],
            reason: format!("transfer log Z is {lz}"),
        })
    }
}

struct Columns {
    h: usize,
    /// `exp(w(s) - w_max)` for each column state `s`.
    weight: Vec<f64>,
    w_max: f64,
    /// Off-diagonal entry of the normalized horizontal 2x2 kernel.
    off: f64,
    /// The larger entry of the horizontal 2x2 kernel, as a log.
    ln_kernel_scale: f64,
    ferro: bool,
}

impl Columns {
    fn new(h: usize, periodic: bool, p: IsingParams) -> Self {
        let n = 1usize << h;
        let low = if h > 1 { (1usize << (h - 1)) - 1 } else { 0 };
        let w: Vec<f64> = (0..n)
            .map(|s| {
                let ones = s.count_ones() as i64;
                let v0 = 2 * ones - h as i64;
                let disagree = ((s ^ (s >> 1)) & low).count_ones() as i64;
                let mut vv = (h as i64 - 1) - 2 * disagree;
                if periodic {
                    vv += if h == 1 || (s & 1) == ((s >> (h - 1)) & 1) {
                        1
                    } else {
                        -1
                    };
                }
                p.alpha * v0 as f64 + p.beta * vv as f64
            })
            .collect();
        let w_max = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Columns {
            h,
            weight: w.iter().map(|x| (x - w_max).exp()).collect(),
            w_max,
            off: (-2.0 * p.beta.abs()).exp(),
            ln_kernel_scale: p.beta.abs(),
            ferro: p.beta >= 0.0,
        }
    }

    /// Applies the horizontal coupling between adjacent columns, divided by
    /// `exp(h |beta|)`, as a product of per-row 2x2 kernels.
    fn couple(&self, v: &mut [f64]) {
        let (diag, off) = if self.ferro {
            (1.0, self.off)
        } else {
            (self.off, 1.0)
        };
        for bit in 0..self.h {
            let stride = 1usize << bit;
            for block in (0..v.len()).step_by(2 * stride) {
                for s in block..block + stride {
                    let (x0, x1) = (v[s], v[s + stride]);
                    v[s] = diag * x0 + off * x1;
                    v[s + stride] = off * x0 + diag * x1;
                }
            }
        }
    }

    fn rescale(v: &mut [f64]) -> f64 {
        let m = v.iter().cloned().fold(0.0, f64::max);
        if m > 0.0 {
            let inv = 1.0 / m;
            v.iter_mut().for_each(|x| *x *= inv);
            m.ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    fn step_scale(&self) -> f64 {
        self.h as f64 * self.ln_kernel_scale + self.w_max
    }

    fn free_log_z(&self, len: usize) -> f64 {
        let mut v = self.weight.clone();
        let mut ln_scale = self.w_max + Self::rescale(&mut v);
        for _ in 1..len {
            self.couple(&mut v);
            v.iter_mut().zip(&self.weight).for_each(|(x, w)| *x *= w);
            ln_scale += self.step_scale() + Self::rescale(&mut v);
        }
        ln_scale + v.iter().sum::<f64>().ln()
    }

    /// Conditions on the first column's state and closes the horizontal
    /// wrap by coupling the last column back to it.
    fn periodic_log_z(&self, len: usize) -> f64 {
        let n = self.weight.len();
        let per_anchor: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|s0| {
                let mut v = vec![0.0; n];
                v[s0] = 1.0;
                let mut ln_scale = self.w_max + self.weight[s0].ln();
                for _ in 1..len {
                    self.couple(&mut v);
                    v.iter_mut().zip(&self.weight).for_each(|(x, w)| *x *= w);
                    ln_scale += self.step_scale() + Self::rescale(&mut v);
                }
                self.couple(&mut v);
                ln_scale + self.h as f64 * self.ln_kernel_scale + v[s0].ln()
            })
            .collect();
        log_sum_exp(&per_anchor)
    }
}
