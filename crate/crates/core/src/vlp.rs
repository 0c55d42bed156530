//! Vieta-Lucas polynomials on [-2, 2] and their shifted form on [0, 2].
//!
//! `VL_m` is the degree-`m` polynomial with `VL_m(2 cos d) = 2 cos(m d)`. It obeys
//! `VL_m = t VL_{m-1} - VL_{m-2}` with `VL_0 = 2`, `VL_1 = t`, and is orthogonal on
//! [-2, 2] under the weight `1 / sqrt(4 - t^2)` with squared norm `2 pi alpha_m`.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Highest degree for which the factorial power-series form is produced.
pub const MAX_MONOMIAL_DEGREE: usize = 30;

/// Normalization constant: `alpha_0 = 2`, `alpha_m = 1` otherwise.
#[inline]
pub fn alpha(m: usize) -> f64 {
    if m == 0 {
        2.0
    } else {
        1.0
    }
}

/// Evaluates `VL_m(t)` by the three-term recurrence.
///
/// Defined for every real `t`; values outside [-2, 2] are extrapolation (see
/// [`is_extrapolation`]).
pub fn eval(m: usize, t: f64) -> f64 {
    match m {
        0 => 2.0,
        1 => t,
        _ => {
            let (mut prev, mut cur) = (2.0, t);
            for _ in 2..=m {
                let next = t * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Fills `out[j] = VL_j(t)` for `j < out.len()`.
pub fn eval_all(t: f64, out: &mut [f64]) {
    for j in 0..out.len() {
        out[j] = match j {
            0 => 2.0,
            1 => t,
            _ => t * out[j - 1] - out[j - 2],
        };
    }
}

/// True when `t` lies outside the canonical interval [-2, 2].
pub fn is_extrapolation(t: f64) -> bool {
    t.abs() > 2.0
}

/// Shifted polynomial `VL*_m(t) = VL_m(2t - 2)`, natural domain [0, 2].
pub fn eval_shifted(m: usize, t: f64) -> f64 {
    eval(m, 2.0 * t - 2.0)
}

/// Power-basis coefficients, `coeffs[i]` multiplying `t^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialCoeffs(pub Vec<f64>);

impl MonomialCoeffs {
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    /// Horner evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn derivative(&self) -> MonomialCoeffs {
        if self.0.len() <= 1 {
            return MonomialCoeffs(vec![0.0]);
        }
        MonomialCoeffs(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        )
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Power-series coefficients of `VL_m`:
/// `(-1)^i m (m-i-1)! / (i! (m-2i)!)` at power `m - 2i`.
pub fn monomial_coeffs(m: usize) -> Result<MonomialCoeffs> {
    if m > MAX_MONOMIAL_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: m,
            max: MAX_MONOMIAL_DEGREE,
        });
    }
    if m == 0 {
        return Ok(MonomialCoeffs(vec![2.0]));
    }
    let mut c = vec![0.0; m + 1];
    for i in 0..=m / 2 {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        c[m - 2 * i] =
            sign * m as f64 * factorial(m - i - 1) / (factorial(i) * factorial(m - 2 * i));
    }
    Ok(MonomialCoeffs(c))
}

/// Which Chebyshev-like node family to return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Zeros,
    Extrema,
}

/// Zeros `2 cos((j - 1/2) pi / m)` or extrema `2 cos(j pi / m)`, `j = 1..=m`,
/// in decreasing order.
pub fn nodes(m: usize, kind: NodeKind) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::NoNodes(0));
    }
    let mf = m as f64;
    Ok((1..=m)
        .map(|j| {
            let j = j as f64;
            match kind {
                NodeKind::Zeros => 2.0 * ((j - 0.5) * PI / mf).cos(),
                NodeKind::Extrema => 2.0 * (j * PI / mf).cos(),
            }
        })
        .collect())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Expansion of `t^m` in the Vieta-Lucas basis as `(degree, coefficient)` pairs:
/// `t^m = sum_j C(m, j) VL_{m-2j}(t)`, last term halved when `m` is even.
pub fn monomial_in_vl_basis(m: usize) -> Vec<(usize, f64)> {
    (0..=m / 2)
        .map(|j| {
            let mut c = binomial(m, j);
            if m.is_multiple_of(2) && j == m / 2 {
                c *= 0.5;
            }
            (m - 2 * j, c)
        })
        .collect()
}

/// Generalized binomial `C(a, j)` for real `a` with `a - j + 1 > 0`.
fn general_binomial(a: f64, j: usize) -> f64 {
    (ln_gamma(a + 1.0) - ln_gamma(j as f64 + 1.0) - ln_gamma(a - j as f64 + 1.0)).exp()
}

/// Evaluates `VL_m(t)` through the Rodrigues representation
/// `(-1)^m 2 m!/(2m)! sqrt(4 - t^2) d^m/dt^m (4 - t^2)^(m - 1/2)`,
/// expanded by the Leibniz rule into a finite sum. Requires `|t| < 2`.
pub fn rodrigues_eval(m: usize, t: f64) -> Result<f64> {
    if t.abs() >= 2.0 || !t.is_finite() {
        return Err(Error::Domain {
            what: "Rodrigues evaluation needs |t| < 2",
            value: t,
        });
    }
    let a = m as f64 - 0.5;
    let sum: f64 = (0..=m)
        .map(|j| {
            general_binomial(a, j)
                * general_binomial(a, m - j)
                * (t - 2.0).powi((m - j) as i32)
                * (t + 2.0).powi(j as i32)
        })
        .sum();
    // C_m (-1)^m m! = 2 (m!)^2 / (2m)!
    let scale = 2.0 * (2.0 * ln_gamma(m as f64 + 1.0) - ln_gamma(2.0 * m as f64 + 1.0)).exp();
    Ok(scale * sum)
}

/// Closed form `(2 - x t) / (1 - x t + t^2)` of the generating function.
pub fn generating_fn(t: f64, x: f64) -> Result<f64> {
    let den = 1.0 - x * t + t * t;
    if den.abs() < f64::EPSILON {
        return Err(Error::SingularDenominator { t, x });
    }
    Ok((2.0 - x * t) / den)
}

/// Partial sum `sum_{m=0}^{order} VL_m(x) t^m` of the generating series.
pub fn generating_fn_partial(t: f64, x: f64, order: usize) -> Result<f64> {
    let den = 1.0 - x * t + t * t;
    if den.abs() < f64::EPSILON {
        return Err(Error::SingularDenominator { t, x });
    }
    let mut vals = vec![0.0; order + 1];
    eval_all(x, &mut vals);
    let mut pow = 1.0;
    let mut sum = 0.0;
    for v in vals {
        sum += v * pow;
        pow *= t;
    }
    Ok(sum)
}

/// Residual `(4 - t^2) VL_m'' - t VL_m' + m^2 VL_m` of the Vieta-Lucas ODE,
/// using exact polynomial derivatives. Only `m >= 1` is accepted.
pub fn ode_residual(m: usize, t: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain {
            what: "Vieta-Lucas ODE degree must be >= 1",
            value: 0.0,
        });
    }
    let p = monomial_coeffs(m)?;
    let dp = p.derivative();
    let ddp = dp.derivative();
    let mf = m as f64;
    Ok((4.0 - t * t) * ddp.eval(t) - t * dp.eval(t) + mf * mf * p.eval(t))
}

/// Derivative of a shifted polynomial expressed in shifted polynomials:
/// `d/dt VL*_m = sum_{j < m, j + m odd} (2m / alpha_j) VL*_j`.
///
/// `max_order` plays the role of the truncation cap `M`; it must be at least `m`.
pub fn shifted_derivative_expansion(m: usize, max_order: usize) -> Result<Vec<(usize, f64)>> {
    if max_order < m {
        return Err(Error::Index(format!(
            "degree {m} exceeds truncation cap {max_order}"
        )));
    }
    Ok((0..m)
        .filter(|j| (j + m) % 2 == 1)
        .map(|j| (j, 2.0 * m as f64 / alpha(j)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_chebyshev_rule;
    use approx::assert_abs_diff_eq;

    #[test]
    fn recurrence_seeds_and_listed_polynomials() {
        assert_eq!(eval(0, 1.37), 2.0);
        // x^6 - 6x^4 + 9x^2 - 2 at 1
        assert_abs_diff_eq!(eval(6, 1.0), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eval(3, 2.0 * (PI / 9.0).cos()), 1.0, epsilon = 1e-14);
        assert!(is_extrapolation(2.5));
        assert!(!is_extrapolation(-2.0));
    }

    #[test]
    fn shifted_values() {
        assert_eq!(eval_shifted(0, 0.5), 2.0);
        assert_abs_diff_eq!(eval_shifted(1, 1.5), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eval_shifted(2, 0.0), eval(2, -2.0), epsilon = 1e-15);
        assert_abs_diff_eq!(eval_shifted(2, 0.0), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn monomial_coefficients() {
        assert_eq!(monomial_coeffs(4).unwrap().0, vec![2.0, 0.0, -4.0, 0.0, 1.0]);
        assert_eq!(monomial_coeffs(0).unwrap().0, vec![2.0]);
        let p7 = monomial_coeffs(7).unwrap();
        for i in 0..20 {
            let t = -2.0 + 4.0 * i as f64 / 19.0;
            let r = eval(7, t);
            assert!((p7.eval(t) - r).abs() <= 1e-10 * r.abs().max(1.0));
        }
        assert!(matches!(
            monomial_coeffs(31),
            Err(Error::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn zeros_and_extrema() {
        let z = nodes(2, NodeKind::Zeros).unwrap();
        assert_abs_diff_eq!(z[0], 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(z[1], -(2f64.sqrt()), epsilon = 1e-15);
        let e = nodes(2, NodeKind::Extrema).unwrap();
        assert_abs_diff_eq!(e[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e[1], -2.0, epsilon = 1e-15);
        for r in nodes(5, NodeKind::Zeros).unwrap() {
            assert!(eval(5, r).abs() < 1e-12);
        }
        assert!(matches!(nodes(0, NodeKind::Zeros), Err(Error::NoNodes(0))));
    }

    #[test]
    fn zeros_and_interior_extrema_for_many_degrees() {
        for m in 1..=12 {
            for r in nodes(m, NodeKind::Zeros).unwrap() {
                assert!(eval(m, r).abs() < 1e-10, "m={m} zero {r}");
            }
            if m < 2 {
                continue;
            }
            let dp = monomial_coeffs(m).unwrap().derivative();
            let ext = nodes(m, NodeKind::Extrema).unwrap();
            // j = m is the endpoint -2
            for &e in &ext[..m - 1] {
                assert!(dp.eval(e).abs() < 1e-9, "m={m} extremum {e}");
            }
        }
    }

    #[test]
    fn monomial_to_vl() {
        assert_eq!(monomial_in_vl_basis(2), vec![(2, 1.0), (0, 1.0)]);
        assert_eq!(monomial_in_vl_basis(1), vec![(1, 1.0)]);
        for m in 0..=10 {
            let parts = monomial_in_vl_basis(m);
            for i in 0..10 {
                let t = -1.9 + 3.8 * i as f64 / 9.0;
                let rebuilt: f64 = parts.iter().map(|&(d, c)| c * eval(d, t)).sum();
                assert_abs_diff_eq!(rebuilt, t.powi(m as i32), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn rodrigues_matches_recurrence() {
        assert_abs_diff_eq!(rodrigues_eval(0, 0.3).unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rodrigues_eval(3, 1.0).unwrap(), -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            rodrigues_eval(5, -0.7).unwrap(),
            eval(5, -0.7),
            epsilon = 1e-10
        );
        assert!(rodrigues_eval(2, 2.0).is_err());
        assert!(rodrigues_eval(2, -3.0).is_err());
    }

    #[test]
    fn generating_function() {
        assert_eq!(generating_fn_partial(0.0, 1.0, 5).unwrap(), 2.0);
        let closed = (2.0 - 0.1) / (1.0 - 0.1 + 0.01);
        assert_abs_diff_eq!(
            generating_fn_partial(0.1, 1.0, 40).unwrap(),
            closed,
            epsilon = 1e-12
        );
        let closed = (2.0 + 0.3) / (1.0 + 0.3 + 0.04);
        assert_abs_diff_eq!(
            generating_fn_partial(0.2, -1.5, 60).unwrap(),
            closed,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(generating_fn(0.2, -1.5).unwrap(), closed, epsilon = 1e-15);
        // 1 - 2t + t^2 = 0 at t = 1, x = 2
        assert!(generating_fn_partial(1.0, 2.0, 3).is_err());
    }

    #[test]
    fn vieta_lucas_ode() {
        assert_eq!(ode_residual(1, 0.8).unwrap(), 0.0);
        assert!(ode_residual(4, 1.1).unwrap().abs() < 1e-10);
        assert!(ode_residual(6, -1.9).unwrap().abs() < 1e-9);
        assert!(ode_residual(0, 0.5).is_err());
    }

    #[test]
    fn shifted_derivative() {
        assert_eq!(shifted_derivative_expansion(1, 3).unwrap(), vec![(0, 1.0)]);
        assert_eq!(shifted_derivative_expansion(2, 3).unwrap(), vec![(1, 4.0)]);
        assert!(shifted_derivative_expansion(0, 3).unwrap().is_empty());
        assert!(shifted_derivative_expansion(4, 3).is_err());
        // pointwise check against the power series of VL*_m
        for m in 1..=8 {
            let terms = shifted_derivative_expansion(m, 8).unwrap();
            let dp = monomial_coeffs(m).unwrap().derivative();
            for i in 1..10 {
                let t = 0.2 * i as f64;
                let lhs = 2.0 * dp.eval(2.0 * t - 2.0);
                let rhs: f64 = terms.iter().map(|&(j, c)| c * eval_shifted(j, t)).sum();
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn weighted_orthogonality() {
        let rule = gauss_chebyshev_rule(64).unwrap();
        for n in 0..=10 {
            for m in 0..=10 {
                // t = 2u maps the weight 1/sqrt(4 - t^2) dt to 1/sqrt(1 - u^2) du
                let ip: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&u, &w)| w * eval(n, 2.0 * u) * eval(m, 2.0 * u))
                    .sum();
                let expected = if n != m {
                    0.0
                } else {
                    2.0 * PI * alpha(n)
                };
                assert_abs_diff_eq!(ip, expected, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn endpoints_and_trig_identity() {
        for m in 0..=20 {
            assert_abs_diff_eq!(eval(m, 2.0), 2.0, epsilon = 1e-9);
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            assert_abs_diff_eq!(eval(m, -2.0), 2.0 * sign, epsilon = 1e-9);
            for i in 0..50 {
                let d = PI * i as f64 / 49.0;
                assert_abs_diff_eq!(
                    eval(m, 2.0 * d.cos()),
                    2.0 * (m as f64 * d).cos(),
                    epsilon = 1e-10
                );
            }
        }
    }
}
