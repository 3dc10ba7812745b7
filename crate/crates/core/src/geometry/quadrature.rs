//! Tensor-product quadrature on chart rectangles.

use std::f64::consts::PI;

/// Nodes and weights on one interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1D {
    /// Gauss-Legendre rule with `n` nodes on `[a, b]`.
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Self {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = mid - half * z;
            nodes[n - 1 - i] = mid + half * z;
            weights[i] = half * w;
            weights[n - 1 - i] = half * w;
        }
        Self { nodes, weights }
    }

    /// Equispaced trapezoid rule for a periodic direction, shifted by half a
    /// step so no node sits on the seam.
    pub fn periodic_trapezoid(n: usize, a: f64, b: f64) -> Self {
        let h = (b - a) / n as f64;
        Self {
            nodes: (0..n).map(|i| a + (i as f64 + 0.5) * h).collect(),
            weights: vec![h; n],
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `(P_n(z), P_n'(z))` by the three-term recurrence.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Fixed-order pairwise summation, so results do not depend on scheduling.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (l, r) = xs.split_at(xs.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_high_degree() {
        let r = Rule1D::gauss_legendre(10, -1.0, 2.0);
        let integral: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(19)).sum();
        let exact = (2f64.powi(20) - 1.0) / 20.0;
        assert!((integral - exact).abs() < 1e-9 * exact);
        assert!(r.weights.iter().all(|w| *w > 0.0));
        assert!((r.weights.iter().sum::<f64>() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_odd_has_midpoint() {
        let r = Rule1D::gauss_legendre(5, 0.0, 1.0);
        assert!((r.nodes[2] - 0.5).abs() < 1e-15);
        assert!((r.weights[2] - 128.0 / 450.0).abs() < 1e-14);
    }

    #[test]
    fn trapezoid_avoids_seam() {
        let r = Rule1D::periodic_trapezoid(4, 0.0, 2.0 * PI);
        assert!(r.nodes.iter().all(|x| *x > 0.0 && *x < 2.0 * PI));
        assert!((r.weights.iter().sum::<f64>() - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let xs: Vec<f64> = (0..1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 499_500.0);
    }
}
