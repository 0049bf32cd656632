//! Gauss–Legendre nodes and weights on [−1, 1], computed by Newton iteration
//! on the Legendre polynomial from the Chebyshev-based initial guess. An
//! n-point rule integrates polynomials of degree ≤ 2n − 1 exactly, which is
//! what makes the sphere quadrature in `quantize` exact rather than
//! approximate.

use std::f64::consts::PI;

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Chebyshev-like initial guess for the i-th positive root
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            // one final polish
            let (p, d) = legendre_and_derivative(n, x);
            x -= p / d;
            let dp = legendre_and_derivative(n, x).1;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
            let (_, d) = legendre_and_derivative(n, 0.0);
            weights[n / 2] = 2.0 / (d * d);
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫_{-1}^{1} f(t) dt by this rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Uniform angular grid on [0, 2π) with `m` nodes, each of weight 2π/m.
/// Integrates trigonometric polynomials of degree ≤ m − 1 exactly.
pub fn uniform_angles(m: usize) -> Vec<f64> {
    (0..m).map(|r| 2.0 * PI * r as f64 / m as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn integrates_monomials_exactly() {
        for n in 1..=20usize {
            let rule = GaussLegendre::new(n);
            for k in 0..=(2 * n - 1) {
                let got = rule.integrate(|t| t.powi(k as i32));
                let want = if k % 2 == 1 {
                    0.0
                } else {
                    2.0 / (k as f64 + 1.0)
                };
                assert_abs_diff_eq!(got, want, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1usize, 7, 64, 501, 2048] {
            let rule = GaussLegendre::new(n);
            let s: f64 = rule.weights.iter().sum();
            assert_relative_eq!(s, 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn nodes_inside_open_interval_and_sorted() {
        let rule = GaussLegendre::new(300);
        for w in rule.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(rule.nodes[0] > -1.0 && *rule.nodes.last().unwrap() < 1.0);
    }

    #[test]
    fn high_order_still_accurate() {
        // smooth non-polynomial check: ∫ exp(t) dt = e - 1/e
        let rule = GaussLegendre::new(24);
        let got = rule.integrate(f64::exp);
        assert_relative_eq!(got, 1f64.exp() - (-1f64).exp(), epsilon = 1e-13);
    }

    #[test]
    fn uniform_angles_kill_harmonics() {
        let m = 17;
        let phis = uniform_angles(m);
        for harmonic in 1..m {
            let s: f64 = phis.iter().map(|&p| (harmonic as f64 * p).cos()).sum();
            assert_abs_diff_eq!(s, 0.0, epsilon = 1e-11);
        }
    }
}
