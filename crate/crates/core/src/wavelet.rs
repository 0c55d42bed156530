//! Vieta-Lucas wavelets on the canonical interval [0, 2] and their affine image
//! on a problem domain [0, L].
//!
//! With `s_hat = 2(2s - 1)` the wavelet `(s, m)` is
//! `2^(k/2) VL_m(2^k z - s_hat) / sqrt(2 pi alpha_m)` on `z in [(s_hat - 2)/2^k, (s_hat + 2)/2^k)`
//! and zero elsewhere, where `z = 2x / L`. The last subinterval is closed at `z = 2`
//! so the whole of [0, L] is covered.

use std::f64::consts::PI;
use std::ops::{Deref, DerefMut};
use std::sync::Arc;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::opmat::{build_d, matrix_power};
use crate::quadrature::gauss_chebyshev_rule;
use crate::vlp;

/// Relative slack accepted when an evaluation point sits a rounding error past an end.
const DOMAIN_SLACK: f64 = 1e-12;

/// Resolution `k`, order cap `M` and problem-domain length `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    k: u32,
    order: usize,
    length: f64,
}

impl BasisSpec {
    pub fn new(k: u32, order: usize, length: f64) -> Result<Self> {
        if k == 0 || k > 16 {
            return Err(Error::InvalidBasis(format!("resolution k = {k} must be in 1..=16")));
        }
        if order == 0 {
            return Err(Error::InvalidBasis("order cap M must be >= 1".into()));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidBasis(format!("domain length {length} must be > 0")));
        }
        Ok(Self { k, order, length })
    }

    /// `k = 1`, `M = eta`: one global polynomial of degree `eta - 1`.
    pub fn single(eta: usize, length: f64) -> Result<Self> {
        Self::new(1, eta, length)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Order cap `M`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of dyadic subintervals, `2^(k-1)`.
    pub fn subintervals(&self) -> usize {
        1 << (self.k - 1)
    }

    /// Basis size `eta = 2^(k-1) M`.
    pub fn eta(&self) -> usize {
        self.subintervals() * self.order
    }

    /// Canonical coordinate `z = 2x / L`.
    pub fn to_canonical(&self, x: f64) -> f64 {
        2.0 * x / self.length
    }

    pub fn from_canonical(&self, z: f64) -> f64 {
        0.5 * z * self.length
    }

    /// Problem-domain bounds of subinterval `s` (1-based).
    pub fn subinterval_bounds(&self, s: usize) -> (f64, f64) {
        let width = self.length / self.subintervals() as f64;
        ((s - 1) as f64 * width, s as f64 * width)
    }

    /// Interior subinterval boundaries in problem coordinates.
    pub fn breakpoints(&self) -> Vec<f64> {
        (1..self.subintervals())
            .map(|s| self.subinterval_bounds(s).1)
            .collect()
    }

    fn s_hat(s: usize) -> f64 {
        2.0 * (2 * s - 1) as f64
    }

    /// Local Vieta-Lucas argument `2^k z - s_hat` for subinterval `s`.
    pub fn local_argument(&self, s: usize, x: f64) -> f64 {
        (1u64 << self.k) as f64 * self.to_canonical(x) - Self::s_hat(s)
    }

    /// Checks `x` against [0, L], snapping values within rounding slack onto the ends.
    pub fn check_point(&self, x: f64) -> Result<f64> {
        let slack = DOMAIN_SLACK * self.length;
        if !x.is_finite() || x < -slack || x > self.length + slack {
            return Err(Error::Domain {
                what: "evaluation point outside [0, L]",
                value: x,
            });
        }
        Ok(x.clamp(0.0, self.length))
    }

    /// The subinterval whose (left-closed) support holds `x`.
    pub fn active_subinterval(&self, x: f64) -> Result<usize> {
        let x = self.check_point(x)?;
        let n = self.subintervals();
        let s = (x / self.length * n as f64).floor() as usize + 1;
        Ok(s.min(n))
    }

    fn wavelet_scale(&self, m: usize) -> f64 {
        2f64.powf(self.k as f64 / 2.0) / (2.0 * PI * vlp::alpha(m)).sqrt()
    }
}

/// Translation `s` (1-based) and degree `m` of one wavelet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WaveletIndex {
    pub s: usize,
    pub m: usize,
}

impl WaveletIndex {
    /// Flat 1-based index `u = (s - 1) M + m + 1`.
    pub fn flat(&self, spec: &BasisSpec) -> Result<usize> {
        flat_index(self.s, self.m, spec)
    }
}

pub fn flat_index(s: usize, m: usize, spec: &BasisSpec) -> Result<usize> {
    if s == 0 || s > spec.subintervals() || m >= spec.order() {
        return Err(Error::Index(format!(
            "(s = {s}, m = {m}) outside s in 1..={}, m in 0..{}",
            spec.subintervals(),
            spec.order()
        )));
    }
    Ok((s - 1) * spec.order() + m + 1)
}

pub fn unflat_index(u: usize, spec: &BasisSpec) -> Result<WaveletIndex> {
    if u == 0 || u > spec.eta() {
        return Err(Error::Index(format!("u = {u} outside 1..={}", spec.eta())));
    }
    Ok(WaveletIndex {
        s: (u - 1) / spec.order() + 1,
        m: (u - 1) % spec.order(),
    })
}

/// Value of wavelet `idx` at problem coordinate `x`.
pub fn wavelet_eval(idx: WaveletIndex, x: f64, spec: &BasisSpec) -> Result<f64> {
    idx.flat(spec)?;
    let x = spec.check_point(x)?;
    if spec.active_subinterval(x)? != idx.s {
        return Ok(0.0);
    }
    let y = spec.local_argument(idx.s, x);
    Ok(spec.wavelet_scale(idx.m) * vlp::eval(idx.m, y))
}

/// The full vector `[Y_{1,0}(x), ..., Y_{2^(k-1), M-1}(x)]`; only one block is nonzero.
pub fn basis_vector(x: f64, spec: &BasisSpec) -> Result<DVector<f64>> {
    let mut out = DVector::zeros(spec.eta());
    fill_basis(x, spec, out.as_mut_slice())?;
    Ok(out)
}

/// Writes the basis vector into `out` (length `eta`) and returns the active subinterval.
pub fn fill_basis(x: f64, spec: &BasisSpec, out: &mut [f64]) -> Result<usize> {
    let x = spec.check_point(x)?;
    let s = spec.active_subinterval(x)?;
    out.fill(0.0);
    let m_cap = spec.order();
    let block = &mut out[(s - 1) * m_cap..s * m_cap];
    vlp::eval_all(spec.local_argument(s, x), block);
    for (m, v) in block.iter_mut().enumerate() {
        *v *= spec.wavelet_scale(m);
    }
    Ok(s)
}

/// Orthogonality weight `1 / sqrt(4 - (2^k z - s_hat)^2)` of subinterval `s`.
pub fn weight_eval(s: usize, x: f64, spec: &BasisSpec) -> Result<f64> {
    if s == 0 || s > spec.subintervals() {
        return Err(Error::Index(format!("subinterval {s} out of range")));
    }
    let y = spec.local_argument(s, x);
    if y.abs() >= 2.0 {
        return Err(Error::InfiniteWeight { s, x });
    }
    Ok(1.0 / (4.0 - y * y).sqrt())
}

/// Default projection order, `max(64, 4M)`.
pub fn default_projection_order(spec: &BasisSpec) -> usize {
    64.max(4 * spec.order())
}

/// Weighted orthogonal projection onto the truncated basis with the default order.
pub fn project(f: impl Fn(f64) -> f64, spec: &BasisSpec) -> CoefficientVector {
    project_with_order(f, spec, default_projection_order(spec))
}

pub fn project_with_order(
    f: impl Fn(f64) -> f64,
    spec: &BasisSpec,
    quad_order: usize,
) -> CoefficientVector {
    try_project(|x| Ok(f(x)), spec, quad_order).expect("infallible integrand")
}

/// Projection `Lambda_{s,m} = <f, Y_{s,m}>_{w_s}` for a fallible integrand.
///
/// Substituting `2^k z - s_hat = 2 cos d` turns every coefficient into
/// `2^(-k/2) (2 / sqrt(2 pi alpha_m)) int_0^pi f cos(m d) dd`, evaluated with an
/// `quad_order`-point Gauss-Chebyshev rule per subinterval. Orders below `M`
/// alias and are logged as a warning.
pub fn try_project(
    mut f: impl FnMut(f64) -> Result<f64>,
    spec: &BasisSpec,
    quad_order: usize,
) -> Result<CoefficientVector> {
    if quad_order < spec.order() {
        log::warn!(
            "projection order {quad_order} is below M = {}; coefficients will alias",
            spec.order()
        );
    }
    let rule = gauss_chebyshev_rule(quad_order.max(1))?;
    let m_cap = spec.order();
    let two_k = (1u64 << spec.k()) as f64;
    let mut lambda = CoefficientVector::zeros(spec.eta());
    let mut vl = vec![0.0; m_cap];
    for s in 1..=spec.subintervals() {
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let y = 2.0 * t;
            let z = (y + BasisSpec::s_hat(s)) / two_k;
            let fx = f(spec.from_canonical(z))?;
            if !fx.is_finite() {
                return Err(Error::NonFiniteIntegrand {
                    node: spec.from_canonical(z),
                });
            }
            vlp::eval_all(y, &mut vl);
            for m in 0..m_cap {
                lambda[(s - 1) * m_cap + m] += w * fx * vl[m];
            }
        }
        for m in 0..m_cap {
            // int Y Y_{s,m} w_s dz with dz = dy / 2^k and dy / sqrt(4 - y^2) = dt / sqrt(1 - t^2)
            lambda[(s - 1) * m_cap + m] *= spec.wavelet_scale(m) / two_k;
        }
    }
    Ok(lambda)
}

/// Expansion coefficients, position `u - 1` holding `Lambda_{s,m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector(pub DVector<f64>);

impl CoefficientVector {
    pub fn zeros(n: usize) -> Self {
        Self(DVector::zeros(n))
    }

    pub fn from_vec(v: Vec<f64>) -> Self {
        Self(DVector::from_vec(v))
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.0
    }
}

impl Deref for CoefficientVector {
    type Target = DVector<f64>;
    fn deref(&self) -> &DVector<f64> {
        &self.0
    }
}

impl DerefMut for CoefficientVector {
    fn deref_mut(&mut self) -> &mut DVector<f64> {
        &mut self.0
    }
}

impl From<DVector<f64>> for CoefficientVector {
    fn from(v: DVector<f64>) -> Self {
        Self(v)
    }
}

/// Galerkin trial wrapper: `Y = base(x) + nu(x) * Lambda^T Y(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Decoration {
    None,
    /// `base = alpha0 + alpha1 x`, `nu = x^2`.
    Ivp { alpha0: f64, alpha1: f64 },
    /// `base = beta0 + (beta1 - beta0) x / L`, `nu = x (L - x)`.
    Bvp { beta0: f64, beta1: f64 },
}

impl Decoration {
    /// `(base, base', base'')` at `x`.
    pub fn base(&self, x: f64, length: f64) -> [f64; 3] {
        match *self {
            Decoration::None => [0.0; 3],
            Decoration::Ivp { alpha0, alpha1 } => [alpha0 + alpha1 * x, alpha1, 0.0],
            Decoration::Bvp { beta0, beta1 } => {
                let slope = (beta1 - beta0) / length;
                [beta0 + slope * x, slope, 0.0]
            }
        }
    }

    /// `(nu, nu', nu'')` at `x`.
    pub fn multiplier(&self, x: f64, length: f64) -> [f64; 3] {
        match self {
            Decoration::None => [1.0, 0.0, 0.0],
            Decoration::Ivp { .. } => [x * x, 2.0 * x, 2.0],
            Decoration::Bvp { .. } => [x * (length - x), length - 2.0 * x, -2.0],
        }
    }
}

/// First and second derivative operators for one basis, shared between expansions.
#[derive(Debug)]
pub struct DerivativeOps {
    pub d1: nalgebra::DMatrix<f64>,
    pub d2: nalgebra::DMatrix<f64>,
}

impl DerivativeOps {
    pub fn new(spec: &BasisSpec) -> Arc<Self> {
        let d = build_d(spec);
        let d2 = matrix_power(&d, 2).expect("order 2 is valid");
        Arc::new(Self {
            d1: d.entries,
            d2: d2.entries,
        })
    }
}

/// A truncated expansion `Lambda^T Y(x)` with optional Galerkin decoration.
#[derive(Debug, Clone)]
pub struct SolutionExpansion {
    basis: BasisSpec,
    lambda: CoefficientVector,
    decoration: Decoration,
    ops: Arc<DerivativeOps>,
    // D^T Lambda and (D^2)^T Lambda
    dlambda: DVector<f64>,
    d2lambda: DVector<f64>,
}

impl SolutionExpansion {
    pub fn new(basis: BasisSpec, lambda: CoefficientVector, decoration: Decoration) -> Result<Self> {
        let ops = DerivativeOps::new(&basis);
        Self::with_ops(basis, lambda, decoration, ops)
    }

    pub fn with_ops(
        basis: BasisSpec,
        lambda: CoefficientVector,
        decoration: Decoration,
        ops: Arc<DerivativeOps>,
    ) -> Result<Self> {
        if lambda.len() != basis.eta() {
            return Err(Error::InvalidBasis(format!(
                "coefficient vector has length {}, basis needs {}",
                lambda.len(),
                basis.eta()
            )));
        }
        let dlambda = ops.d1.tr_mul(&lambda.0);
        let d2lambda = ops.d2.tr_mul(&lambda.0);
        Ok(Self {
            basis,
            lambda,
            decoration,
            ops,
            dlambda,
            d2lambda,
        })
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn lambda(&self) -> &CoefficientVector {
        &self.lambda
    }

    pub fn decoration(&self) -> Decoration {
        self.decoration
    }

    pub fn ops(&self) -> &Arc<DerivativeOps> {
        &self.ops
    }

    /// Undecorated series value and its first two derivatives at `x`.
    fn series(&self, x: f64, scratch: &mut [f64]) -> Result<[f64; 3]> {
        let s = fill_basis(x, &self.basis, scratch)?;
        let m_cap = self.basis.order();
        let range = (s - 1) * m_cap..s * m_cap;
        let dot = |v: &DVector<f64>| -> f64 {
            range
                .clone()
                .map(|i| v[i] * scratch[i])
                .sum::<f64>()
        };
        Ok([dot(&self.lambda.0), dot(&self.dlambda), dot(&self.d2lambda)])
    }

    /// `(Y, Y', Y'')` at `x`, including the decoration through the product rule.
    pub fn eval_all(&self, x: f64) -> Result<[f64; 3]> {
        let mut scratch = vec![0.0; self.basis.eta()];
        self.eval_all_with(x, &mut scratch)
    }

    pub(crate) fn eval_all_with(&self, x: f64, scratch: &mut [f64]) -> Result<[f64; 3]> {
        let x = self.basis.check_point(x)?;
        let [p, dp, ddp] = self.series(x, scratch)?;
        if let Decoration::None = self.decoration {
            return Ok([p, dp, ddp]);
        }
        let l = self.basis.length();
        let [b, db, ddb] = self.decoration.base(x, l);
        let [n, dn, ddn] = self.decoration.multiplier(x, l);
        Ok([
            b + n * p,
            db + dn * p + n * dp,
            ddb + ddn * p + 2.0 * dn * dp + n * ddp,
        ])
    }

    /// Value (`order = 0`) or derivative (`order` 1 or 2) at `x`.
    pub fn eval(&self, x: f64, order: usize) -> Result<f64> {
        if order > 2 {
            return Err(Error::UnsupportedOrder(order));
        }
        Ok(self.eval_all(x)?[order])
    }
}
