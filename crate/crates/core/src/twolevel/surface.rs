use serde::{Deserialize, Serialize};

use super::item::item_loglik;
use super::quadrature::QuadratureRule;
use super::simulate::TwoLevelDataset;
use crate::error::Result;
use crate::inference::{Domain, LikelihoodSurface};
use crate::numeric::compensated_sum;

/// Domain of the random-effect standard deviation.
pub const THETA_DOMAIN: (f64, f64) = (1e-4, 10.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ItemMethod {
    Laplace,
    Quadrature(QuadratureRule),
}

impl ItemMethod {
    pub fn quadrature20() -> Self {
        ItemMethod::Quadrature(QuadratureRule::default_20().clone())
    }
}

/// Sum of item log-likelihoods over a dataset, grouped by outcome.
///
/// Items sharing an outcome `y` contribute identical terms, so the surface
/// stores the outcome histogram and sums `count * item_loglik(y)` in
/// ascending `y` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelSurface {
    pub m: u32,
    pub counts: Vec<(u32, u64)>,
    pub method: ItemMethod,
    domain: Domain,
}

impl TwoLevelSurface {
    pub fn from_counts(m: u32, counts: Vec<(u32, u64)>, method: ItemMethod) -> Self {
        TwoLevelSurface {
            m,
            counts,
            method,
            domain: Domain::interval(THETA_DOMAIN.0, THETA_DOMAIN.1),
        }
    }

    /// Surface of a single item.
    pub fn item(y: u32, m: u32, method: ItemMethod) -> Self {
        Self::from_counts(m, vec![(y, 1)], method)
    }

    pub fn n_items(&self) -> u64 {
        self.counts.iter().map(|c| c.1).sum()
    }

    /// Per-outcome item log-likelihoods at `theta`, in the order of `counts`.
    pub fn item_logliks(&self, theta: f64) -> Result<Vec<f64>> {
        self.counts
            .iter()
            .map(|&(y, _)| item_loglik(y, self.m, theta, &self.method))
            .collect()
    }
}

impl LikelihoodSurface for TwoLevelSurface {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn loglik(&self, theta: &[f64]) -> Result<f64> {
        let items = self.item_logliks(theta[0])?;
        Ok(compensated_sum(
            items
                .iter()
                .zip(&self.counts)
                .map(|(l, &(_, c))| c as f64 * l),
        ))
    }
}

pub fn dataset_surface(dataset: &TwoLevelDataset, method: ItemMethod) -> TwoLevelSurface {
    TwoLevelSurface::from_counts(dataset.m, dataset.counts(), method)
}

#[cfg(test)]
mod tests {
    use super::super::{item_loglik_laplace, simulate_two_level};
    use super::*;

    #[test]
    fn single_item_surface_reduces_to_item() {
        let s = TwoLevelSurface::item(4, 11, ItemMethod::Laplace);
        assert_eq!(
            s.loglik(&[0.6]).unwrap(),
            item_loglik_laplace(4, 11, 0.6).unwrap()
        );
    }

    #[test]
    fn grouped_sum_matches_itemwise_sum() {
        let d = simulate_two_level(300, 8, 0.5, 17);
        let s = dataset_surface(&d, ItemMethod::quadrature20());
        let direct: f64 =
            d.y.iter()
                .map(|&y| item_loglik(y, 8, 0.45, &s.method).unwrap())
                .sum();
        assert!((s.loglik(&[0.45]).unwrap() - direct).abs() < 1e-9);
        assert_eq!(s.n_items(), 300);
    }

    #[test]
    fn surface_serializes() {
        let d = simulate_two_level(20, 4, 0.5, 1);
        let s = dataset_surface(&d, ItemMethod::Laplace);
        let js = serde_json::to_string(&s).unwrap();
        let back: TwoLevelSurface = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
        let dj = serde_json::to_value(&d).unwrap();
        for key in ["n", "m", "y", "theta0", "seed"] {
            assert!(dj.get(key).is_some());
        }
    }
}
