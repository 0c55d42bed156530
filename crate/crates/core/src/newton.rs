//! Damped Newton iteration with a central-difference Jacobian and dense LU.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pivots below this magnitude mark the Jacobian as singular.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

/// Number of step halvings tried by the line search (`t = 1, 1/2, ..., 2^-10`).
const MAX_HALVINGS: u32 = 10;

/// A square nonlinear map `R^n -> R^n`.
pub trait ResidualMap {
    fn dim(&self) -> usize;
    fn residual(&self, x: &DVector<f64>) -> Result<DVector<f64>>;
}

/// Adapter turning a closure into a [`ResidualMap`].
pub struct FnMap<F> {
    pub dim: usize,
    pub f: F,
}

impl<F> ResidualMap for FnMap<F>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn residual(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        (self.f)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub damping: bool,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 50,
            damping: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewtonReport {
    pub iterations: usize,
    /// Infinity norm of the final residual.
    pub final_residual_norm: f64,
    pub converged: bool,
    /// Residual norms, starting with the initial guess.
    pub history: Vec<f64>,
}

fn finite_residual(map: &impl ResidualMap, x: &DVector<f64>) -> Result<DVector<f64>> {
    let r = map.residual(x)?;
    if r.len() != map.dim() {
        return Err(Error::NonFiniteResidual(format!(
            "map returned {} entries, expected {}",
            r.len(),
            map.dim()
        )));
    }
    if let Some(i) = r.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteResidual(format!("component {i} is {}", r[i])));
    }
    Ok(r)
}

/// Central-difference Jacobian with per-column step `max(1e-7, 1e-7 |x_j|)`.
pub fn fd_jacobian(map: &impl ResidualMap, x: &DVector<f64>) -> Result<DMatrix<f64>> {
    let n = map.dim();
    let mut jac = DMatrix::zeros(n, n);
    let mut probe = x.clone();
    for j in 0..n {
        let h = 1e-7f64.max(1e-7 * x[j].abs());
        probe[j] = x[j] + h;
        let plus = map.residual(&probe);
        probe[j] = x[j] - h;
        let minus = map.residual(&probe);
        probe[j] = x[j];
        let (plus, minus) = match (plus, minus) {
            (Ok(p), Ok(m)) => (p, m),
            _ => return Err(Error::NonFiniteJacobian { column: j }),
        };
        let col = (plus - minus) / (2.0 * h);
        if col.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteJacobian { column: j });
        }
        jac.set_column(j, &col);
    }
    Ok(jac)
}

/// Solves `J d = r` by LU with partial pivoting, rejecting tiny pivots.
fn lu_solve(jac: DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let lu = jac.lu();
    let pivot = lu.u().diagonal().iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if !(pivot >= PIVOT_TOLERANCE) {
        return Err(Error::SingularJacobian { pivot });
    }
    lu.solve(rhs).ok_or(Error::SingularJacobian { pivot })
}

/// Newton's method from `init`.
///
/// With damping on, each step `x - t J^-1 r` takes the first `t` in
/// `1, 1/2, ..., 2^-10` that lowers the residual infinity norm; if none does, the
/// iteration stops unconverged. Non-convergence is reported, not raised.
pub fn newton_solve(
    map: &impl ResidualMap,
    init: &DVector<f64>,
    config: &NewtonConfig,
) -> Result<(DVector<f64>, NewtonReport)> {
    if init.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteResidual("initial guess is not finite".into()));
    }
    let mut x = init.clone();
    let mut r = finite_residual(map, &x)?;
    let mut norm = r.amax();
    let mut history = vec![norm];
    let mut iterations = 0;
    while norm > config.tol && iterations < config.max_iter {
        let jac = fd_jacobian(map, &x)?;
        let step = lu_solve(jac, &r)?;
        iterations += 1;
        let mut accepted = None;
        let mut t = 1.0;
        for _ in 0..=MAX_HALVINGS {
            let trial = &x - &step * t;
            match finite_residual(map, &trial) {
                Ok(tr) if !config.damping || tr.amax() < norm => {
                    accepted = Some((trial, tr));
                    break;
                }
                Ok(_) | Err(Error::NonFiniteResidual(_)) | Err(Error::Evaluation { .. }) => {
                    if !config.damping {
                        break;
                    }
                }
                Err(e) => return Err(e),
            }
            t *= 0.5;
        }
        let Some((next, next_r)) = accepted else {
            break;
        };
        x = next;
        r = next_r;
        norm = r.amax();
        history.push(norm);
    }
    let report = NewtonReport {
        iterations,
        final_residual_norm: norm,
        converged: norm <= config.tol,
        history,
    };
    Ok((x, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn map<F: Fn(&DVector<f64>) -> Result<DVector<f64>>>(dim: usize, f: F) -> FnMap<F> {
        FnMap { dim, f }
    }

    #[test]
    fn affine_map_converges_after_one_newton_step() {
        let a = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.0, 1.0, 3.0, -1.0, 0.0, 2.0, 5.0]);
        let b = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let m = map(3, |x| Ok(&a * x - &b));
        let (x, rep) = newton_solve(&m, &DVector::zeros(3), &NewtonConfig::default()).unwrap();
        assert!(rep.converged);
        // the first step is exact up to difference-quotient rounding (~1e-9 relative)
        assert!(rep.history[1] <= 1e-8 * rep.history[0]);
        assert!(rep.iterations <= 2);
        assert!((&a * x - &b).amax() <= 1e-12);
        let j1 = fd_jacobian(&m, &DVector::from_vec(vec![0.3, -7.0, 2.0])).unwrap();
        let j2 = fd_jacobian(&m, &DVector::from_vec(vec![10.0, 1.0, -4.0])).unwrap();
        assert!((j1 - j2).amax() < 1e-6);
    }

    #[test]
    fn jacobian_of_quadratic_map() {
        // r_i = x_i^2 + x_{i+1}
        let m = map(3, |x| {
            Ok(DVector::from_fn(3, |i, _| x[i] * x[i] + x[(i + 1) % 3]))
        });
        let x = DVector::from_vec(vec![0.7, -1.2, 2.5]);
        let j = fd_jacobian(&m, &x).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                let want = if i == k { 2.0 * x[i] } else if k == (i + 1) % 3 { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(j[(i, k)], want, epsilon = 1e-5);
            }
        }
        let zero = map(2, |_| Ok(DVector::zeros(2)));
        assert_eq!(fd_jacobian(&zero, &DVector::zeros(2)).unwrap(), DMatrix::zeros(2, 2));
    }

    #[test]
    fn nonlinear_convergence_with_monotone_history() {
        // x^3 - 3 = 0, y = x^2 - 2y
        let m = map(2, |v| {
            Ok(DVector::from_vec(vec![v[0].powi(3) - 3.0, v[0] * v[0] - 2.0 * v[1]]))
        });
        let (x, rep) = newton_solve(&m, &DVector::from_vec(vec![5.0, 0.0]), &NewtonConfig::default()).unwrap();
        assert!(rep.converged);
        assert_abs_diff_eq!(x[0], 3f64.cbrt(), epsilon = 1e-12);
        assert!(rep.history.windows(2).all(|w| w[1] <= w[0]));
        let (x2, rep2) = newton_solve(&m, &x, &NewtonConfig::default()).unwrap();
        assert!(rep2.iterations <= 1);
        assert!((x2 - x).amax() <= 1e-12);
    }

    #[test]
    fn singular_jacobian_is_an_error() {
        let m = map(2, |v| Ok(DVector::from_vec(vec![v[0] + v[1] - 1.0, 2.0 * (v[0] + v[1])])));
        assert!(matches!(
            newton_solve(&m, &DVector::zeros(2), &NewtonConfig::default()),
            Err(Error::SingularJacobian { .. })
        ));
    }

    #[test]
    fn non_convergence_is_reported() {
        // no real root
        let m = map(1, |v| Ok(DVector::from_element(1, v[0] * v[0] + 1.0)));
        let cfg = NewtonConfig { tol: 1e-12, max_iter: 5, damping: true };
        let (_, rep) = newton_solve(&m, &DVector::from_element(1, 0.5), &cfg).unwrap();
        assert!(!rep.converged);
        assert!(rep.final_residual_norm > 1e-12);
        assert!(rep.history.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn non_finite_column_is_named() {
        let m = map(2, |v| {
            if v[1] > 0.0 {
                Ok(DVector::from_vec(vec![f64::NAN, 0.0]))
            } else {
                Ok(v.clone())
            }
        });
        assert!(matches!(
            fd_jacobian(&m, &DVector::zeros(2)),
            Err(Error::NonFiniteJacobian { column: 1 })
        ));
    }
}
