//! Operational matrix of differentiation for the wavelet basis.
//!
//! `dY/dx = D Y(x)` with `D` block-diagonal, one strictly lower-triangular `M x M`
//! block `F` per subinterval. The chain-rule factor `2 / L` of the map `z = 2x / L`
//! is folded into the entries, so `D^n` differentiates `n` times in `x` directly.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::vlp::alpha;
use crate::wavelet::BasisSpec;

/// A dense `eta x eta` derivative operator of a given order.
#[derive(Debug, Clone, PartialEq)]
pub struct OperationalMatrix {
    pub entries: DMatrix<f64>,
    pub order: usize,
    pub spec: BasisSpec,
}

impl OperationalMatrix {
    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }
}

/// The `M x M` block:
/// `F[u][v] = (2/L) 2^k (u - 1) / sqrt(alpha_{u-1} alpha_{v-1})` for `v < u`, `u + v` odd.
pub fn build_f(spec: &BasisSpec) -> DMatrix<f64> {
    let m_cap = spec.order();
    let scale = (1u64 << spec.k()) as f64 * 2.0 / spec.length();
    DMatrix::from_fn(m_cap, m_cap, |r, c| {
        // 0-based r, c correspond to u - 1, v - 1
        if c < r && (r + c) % 2 == 1 {
            scale * r as f64 / (alpha(r) * alpha(c)).sqrt()
        } else {
            0.0
        }
    })
}

/// First-order operational matrix: `F` repeated along the diagonal.
pub fn build_d(spec: &BasisSpec) -> OperationalMatrix {
    let f = build_f(spec);
    let m_cap = spec.order();
    let mut d = DMatrix::zeros(spec.eta(), spec.eta());
    for s in 0..spec.subintervals() {
        d.view_mut((s * m_cap, s * m_cap), (m_cap, m_cap)).copy_from(&f);
    }
    OperationalMatrix {
        entries: d,
        order: 1,
        spec: *spec,
    }
}

/// `D^n` by repeated multiplication; zero once `n` reaches `M`.
pub fn matrix_power(d: &OperationalMatrix, n: usize) -> Result<OperationalMatrix> {
    if n == 0 {
        return Err(Error::UnsupportedOrder(0));
    }
    let mut acc = d.entries.clone();
    for _ in 1..n {
        acc = &acc * &d.entries;
    }
    Ok(OperationalMatrix {
        entries: acc,
        order: d.order * n,
        spec: d.spec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vlp;
    use crate::wavelet::{basis_vector, project, Decoration, SolutionExpansion};
    use approx::assert_abs_diff_eq;

    #[test]
    fn worked_block() {
        let spec = BasisSpec::new(2, 3, 2.0).unwrap();
        let f = build_f(&spec);
        let r8 = 2.0 * 2f64.sqrt();
        let expected = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, r8, 0.0, 0.0, 0.0, 8.0, 0.0]);
        assert!((f - expected).abs().max() < 1e-12);
        let spec = BasisSpec::new(1, 1, 1.0).unwrap();
        assert_eq!(build_f(&spec), DMatrix::zeros(1, 1));
    }

    #[test]
    fn block_acts_like_shifted_derivative() {
        // k = 1, L = 2: z = x and the block is the derivative of VL*_m in shifted form
        // up to the wavelet normalization sqrt(alpha); with L = 1 everything doubles.
        let spec = BasisSpec::new(1, 5, 1.0).unwrap();
        let f = build_f(&spec);
        for m in 0..5 {
            let expected = vlp::shifted_derivative_expansion(m, 5).unwrap();
            for j in 0..5 {
                // F maps Y_m -> sum_j F[m][j] Y_j; in VL* terms the coefficient is
                // F[m][j] sqrt(alpha_m / alpha_j) / (2 / L)
                let got = f[(m, j)] * (alpha(m) / alpha(j)).sqrt() / 2.0;
                let want = expected
                    .iter()
                    .find(|&&(jj, _)| jj == j)
                    .map(|&(_, c)| c)
                    .unwrap_or(0.0);
                assert_abs_diff_eq!(got, want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn powers_and_nilpotency() {
        let spec = BasisSpec::new(2, 3, 2.0).unwrap();
        let d = build_d(&spec);
        let d2 = matrix_power(&d, 2).unwrap();
        assert_eq!(d2.order, 2);
        assert_abs_diff_eq!(d2.entries[(2, 0)], 16.0 * 2f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(d2.entries[(5, 3)], 16.0 * 2f64.sqrt(), epsilon = 1e-12);
        let nonzero = d2.entries.iter().filter(|v| **v != 0.0).count();
        assert_eq!(nonzero, 2);
        assert_eq!(matrix_power(&d, 3).unwrap().entries, DMatrix::zeros(6, 6));
        assert!(matrix_power(&d, 0).is_err());
        let spec = BasisSpec::new(2, 3, 0.5).unwrap();
        let d2 = matrix_power(&build_d(&spec), 2).unwrap();
        assert_abs_diff_eq!(d2.entries[(2, 0)], 16.0 * 2f64.sqrt() * 16.0, epsilon = 1e-10);
    }

    #[test]
    fn derivative_of_projected_quartic() {
        let spec = BasisSpec::new(1, 6, 1.0).unwrap();
        let lambda = project(|x| x.powi(4), &spec);
        let d = build_d(&spec);
        let dl = d.entries.tr_mul(&lambda.0);
        for i in 0..15 {
            let x = i as f64 / 14.0;
            let v = basis_vector(x, &spec).unwrap();
            assert_abs_diff_eq!(dl.dot(&v), 4.0 * x.powi(3), epsilon = 1e-9);
        }
        let e = SolutionExpansion::new(spec, lambda, Decoration::None).unwrap();
        for i in 0..15 {
            let x = i as f64 / 14.0;
            assert_abs_diff_eq!(e.eval(x, 2).unwrap(), 12.0 * x * x, epsilon = 1e-8);
        }
    }

    #[test]
    fn constants_have_zero_derivative() {
        let spec = BasisSpec::new(2, 4, 3.0).unwrap();
        let lambda = project(|_| 2.5, &spec);
        let dl = build_d(&spec).entries.tr_mul(&lambda.0);
        assert!(dl.amax() < 1e-13);
    }
}
