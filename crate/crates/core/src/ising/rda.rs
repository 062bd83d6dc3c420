use super::lattice::{IsingParams, LatticeSpec};
use super::transfer::transfer_log_z;
use crate::error::{Error, Result};

/// Largest strip height accepted by the reduced dependence approximation.
pub const RDA_MAX_K: usize = 16;

/// `(r - k + 1) log Z_k - (r - k) log Z_{k-1}`, returning `log Z_k` alone when `k = r`.
pub fn rda_combine(rows: usize, k: usize, log_z_k: f64, log_z_km1: f64) -> f64 {
    if k == rows {
        log_z_k
    } else {
        (rows - k + 1) as f64 * log_z_k - (rows - k) as f64 * log_z_km1
    }
}

pub(crate) fn check_level(k: usize, rows: usize) -> Result<()> {
    if k < 2 || k > rows || k > RDA_MAX_K {
        return Err(Error::InvalidArgument(format!(
            "approximation level k={k} must satisfy 2 <= k <= min(rows={rows}, {RDA_MAX_K})"
        )));
    }
    Ok(())
}

/// `log Ztilde^(k) = (r - k + 1) log Z_{k,c} - (r - k) log Z_{k-1,c}`, the
/// strips inheriting the lattice's boundary convention.
pub fn rda_log_z(k: usize, lattice: &LatticeSpec, params: IsingParams) -> Result<f64> {
    check_level(k, lattice.rows)?;
    let strip = |h: usize| {
        transfer_log_z(
            &LatticeSpec {
                rows: h,
                ..*lattice
            },
            params,
        )
    };
    if k == lattice.rows {
        return strip(k);
    }
    Ok(rda_combine(lattice.rows, k, strip(k)?, strip(k - 1)?))
}
