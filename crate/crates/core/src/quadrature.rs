//! Gauss-Legendre and Gauss-Chebyshev (first kind) rules on (-1, 1).
//!
//! Both families are open: no node ever sits on an interval endpoint, which the
//! wavelet weights and the `mu / x` term both rely on.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const MAX_LEGENDRE_ORDER: usize = 256;

/// Default per-subinterval order for scheme inner products.
pub const DEFAULT_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Legendre,
    /// Weight `1 / sqrt(1 - t^2)` is folded into the rule.
    Chebyshev1,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub family: Family,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`, weights already scaled by `(b - a) / 2`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&t, &w)| (mid + half * t, w * half))
    }
}

/// Legendre `P_n(x)` and its derivative.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre rule of order `n`, exact for polynomials of degree `2n - 1`.
///
/// Roots are found by Newton iteration from the Chebyshev-like initial guess.
pub fn gauss_legendre_rule(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > MAX_LEGENDRE_ORDER {
        return Err(Error::Quadrature(format!(
            "Gauss-Legendre order {n} outside 1..={MAX_LEGENDRE_ORDER}"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        if n == 1 {
            x = 0.0;
        } else {
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-15 {
                    break;
                }
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // ascending order
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        family: Family::Legendre,
    })
}

/// Gauss-Chebyshev rule: nodes `cos((2i - 1) pi / 2n)`, equal weights `pi / n`.
pub fn gauss_chebyshev_rule(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::Quadrature("Gauss-Chebyshev order must be >= 1".into()));
    }
    let nf = n as f64;
    let nodes = (1..=n)
        .map(|i| {
            let t = ((2 * i - 1) as f64 * PI / (2.0 * nf)).cos();
            // exact zero for the middle node of odd rules
            if 2 * i - 1 == n {
                0.0
            } else {
                t
            }
        })
        .collect();
    Ok(QuadratureRule {
        nodes,
        weights: vec![PI / nf; n],
        family: Family::Chebyshev1,
    })
}

/// Affinely mapped quadrature sum of `f` over `[a, b]`.
///
/// For the Chebyshev family this approximates `int f(x) / sqrt(1 - t(x)^2) dt`
/// with `t` the affine image of `x` in (-1, 1), scaled by `(b - a) / 2`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rule: &QuadratureRule) -> Result<f64> {
    try_integrate(|x| Ok(f(x)), a, b, rule)
}

/// Like [`integrate`] for a fallible integrand.
pub fn try_integrate(
    mut f: impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Quadrature(format!("empty interval [{a}, {b}]")));
    }
    let mut sum = 0.0;
    for (x, w) in rule.mapped(a, b) {
        let v = f(x)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { node: x });
        }
        sum += w * v;
    }
    Ok(sum)
}
