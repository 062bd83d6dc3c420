use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Gauss-Hermite rule for the weight `exp(-x^2)`, nodes ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// `n`-point rule by Newton iteration on the orthonormal Hermite recurrence.
    pub fn gauss_hermite(n: usize) -> Self {
        assert!(n >= 1);
        // pi^{-1/4}
        const PIM4: f64 = 0.751_125_544_464_942_5;
        let nf = n as f64;
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        let half = n.div_ceil(2);

        // Orthonormal recurrence: returns (p_n(z), p_{n-1}(z)).
        let eval = |z: f64| {
            let mut p1 = PIM4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            (p1, p2)
        };

        let mut z = 0.0;
        for i in 0..half {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * x[0],
                3 => 1.91 * z - 0.91 * x[1],
                _ => 2.0 * z - x[i - 2],
            };
            for _ in 0..100 {
                let (p1, p2) = eval(z);
                let dz = p1 / ((2.0 * nf).sqrt() * p2);
                z -= dz;
                if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            let (p1, p2) = eval(z);
            let pp = (2.0 * nf).sqrt() * p2;
            z -= p1 / pp;
            x[i] = z;
            x[n - 1 - i] = -z;
            w[i] = 2.0 / (pp * pp);
            w[n - 1 - i] = w[i];
        }
        if n % 2 == 1 {
            x[half - 1] = 0.0;
        }
        x.reverse();
        w.reverse();
        QuadratureRule {
            nodes: x,
            weights: w,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Shared 20-point rule.
    pub fn default_20() -> &'static QuadratureRule {
        static RULE: OnceLock<QuadratureRule> = OnceLock::new();
        RULE.get_or_init(|| QuadratureRule::gauss_hermite(20))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::ln_gamma;

    #[test]
    fn twenty_point_rule_properties() {
        let r = QuadratureRule::gauss_hermite(20);
        assert_eq!(r.len(), 20);
        for i in 0..20 {
            assert!((r.nodes[i] + r.nodes[19 - i]).abs() < 1e-14);
            assert!(r.weights[i] > 0.0);
        }
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        let total: f64 = r.weights.iter().sum();
        assert!((total - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn even_moments_are_exact() {
        // int x^{2j} e^{-x^2} dx = Gamma(j + 1/2).
        for n in [20usize, 40] {
            let r = QuadratureRule::gauss_hermite(n);
            for j in 0..n {
                let exact = ln_gamma(j as f64 + 0.5).exp();
                let q: f64 = r
                    .nodes
                    .iter()
                    .zip(&r.weights)
                    .map(|(x, w)| w * x.powi(2 * j as i32))
                    .sum();
                assert!(
                    ((q - exact) / exact).abs() < 1e-10,
                    "n={n} j={j}: {q} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn odd_point_rule_has_zero_node() {
        let r = QuadratureRule::gauss_hermite(5);
        assert_eq!(r.nodes[2], 0.0);
        let total: f64 = r.weights.iter().sum();
        assert!((total - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }
}
