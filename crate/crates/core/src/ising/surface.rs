use serde::{Deserialize, Serialize};

use super::brute::DensityOfStates;
use super::kaufman::{kaufman_log_z, KAUFMAN_BETA_MAX};
use super::lattice::{Boundary, IsingParams, LatticeSpec, SuffStats};
use super::rda::{check_level, rda_log_z};
use super::transfer::transfer_log_z;
use crate::error::{Error, Result};
use crate::inference::{Domain, LikelihoodSurface};

/// Coupling range of the Ising surfaces.
pub const BETA_RANGE: (f64, f64) = (-0.43, 0.43);
/// Field range of the Ising surfaces.
pub const ALPHA_RANGE: (f64, f64) = (-2.0, 2.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ZMethod {
    Brute,
    Transfer,
    Kaufman,
    Rda { k: usize },
    Proxy { k_proxy: usize },
}

impl std::str::FromStr for ZMethod {
    type Err = Error;

    /// Parses `brute`, `transfer`, `kaufman`, `rda:<k>` or `proxy:<K>`.
    fn from_str(s: &str) -> Result<Self> {
        let level = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad level in `{s}`")))
        };
        match s.split_once(':') {
            None => match s {
                "brute" => Ok(ZMethod::Brute),
                "transfer" => Ok(ZMethod::Transfer),
                "kaufman" => Ok(ZMethod::Kaufman),
                _ => Err(Error::InvalidArgument(format!("unknown method `{s}`"))),
            },
            Some(("rda", k)) => Ok(ZMethod::Rda { k: level(k)? }),
            Some(("proxy", k)) => Ok(ZMethod::Proxy { k_proxy: level(k)? }),
            Some(_) => Err(Error::InvalidArgument(format!("unknown method `{s}`"))),
        }
    }
}

/// `log Z(alpha, beta)` on a lattice by the chosen method.
#[derive(Debug, Clone)]
pub struct LogZ {
    lattice: LatticeSpec,
    method: ZMethod,
    dos: Option<DensityOfStates>,
}

impl LogZ {
    pub fn new(lattice: LatticeSpec, method: ZMethod) -> Result<Self> {
        match method {
            ZMethod::Kaufman if lattice.boundary != Boundary::Periodic => {
                return Err(Error::InvalidArgument(
                    "closed form needs a periodic lattice".into(),
                ))
            }
            ZMethod::Rda { k } | ZMethod::Proxy { k_proxy: k } => check_level(k, lattice.rows)?,
            _ => {}
        }
        let dos = match method {
            ZMethod::Brute => Some(DensityOfStates::enumerate(&lattice)?),
            _ => None,
        };
        Ok(LogZ {
            lattice,
            method,
            dos,
        })
    }

    pub fn eval(&self, params: IsingParams) -> Result<f64> {
        match self.method {
            ZMethod::Brute => Ok(self.dos.as_ref().expect("enumerated").log_z(params)),
            ZMethod::Transfer => transfer_log_z(&self.lattice, params),
            ZMethod::Kaufman => {
                if params.alpha != 0.0 {
                    return Err(Error::Domain("closed form needs alpha = 0".into()));
                }
                kaufman_log_z(self.lattice.rows, self.lattice.cols, params.beta)
            }
            ZMethod::Rda { k } | ZMethod::Proxy { k_proxy: k } => {
                rda_log_z(k, &self.lattice, params)
            }
        }
    }
}

/// `loglik(alpha, beta) = alpha v0 + beta v1 - log Z(alpha, beta)`, over
/// `(alpha, beta)` or over `beta` alone when `alpha` is pinned.
#[derive(Debug, Clone)]
pub struct IsingSurface {
    pub stats: SuffStats,
    log_z: LogZ,
    fixed_alpha: Option<f64>,
    domain: Domain,
}

impl IsingSurface {
    pub fn lattice(&self) -> &LatticeSpec {
        &self.log_z.lattice
    }

    pub fn method(&self) -> ZMethod {
        self.log_z.method
    }

    /// Restricts the surface to `beta` with `alpha` held at `alpha`.
    pub fn with_fixed_alpha(mut self, alpha: f64) -> Self {
        self.fixed_alpha = Some(alpha);
        let (lo, hi) = beta_range(self.log_z.method);
        self.domain = Domain::interval(lo, hi);
        self
    }

    fn params(&self, theta: &[f64]) -> IsingParams {
        match self.fixed_alpha {
            Some(a) => IsingParams::new(a, theta[0]),
            None => IsingParams::new(theta[0], theta[1]),
        }
    }
}

fn beta_range(method: ZMethod) -> (f64, f64) {
    match method {
        ZMethod::Kaufman => (1e-3, KAUFMAN_BETA_MAX),
        _ => BETA_RANGE,
    }
}

pub fn ising_loglik_surface(
    stats: SuffStats,
    lattice: &LatticeSpec,
    method: ZMethod,
) -> Result<IsingSurface> {
    let (lo, hi) = beta_range(method);
    Ok(IsingSurface {
        stats,
        log_z: LogZ::new(*lattice, method)?,
        fixed_alpha: None,
        domain: Domain::new(vec![ALPHA_RANGE.0, lo], vec![ALPHA_RANGE.1, hi]),
    })
}

impl LikelihoodSurface for IsingSurface {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn loglik(&self, theta: &[f64]) -> Result<f64> {
        if theta.len() != self.domain.dim() {
            return Err(Error::Dimension {
                expected: self.domain.dim(),
                got: theta.len(),
            });
        }
        let p = self.params(theta);
        Ok(p.alpha * self.stats.v0 as f64 + p.beta * self.stats.v1 as f64 - self.log_z.eval(p)?)
    }
}
