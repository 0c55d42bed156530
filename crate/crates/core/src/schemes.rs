//! Weighted-residual discretizations: collocation, Tau and Galerkin.
//!
//! Each scheme turns a [`SingularProblem`] and a [`BasisSpec`] into an
//! [`AlgebraicSystem`], an `eta`-dimensional residual map in the coefficients.

use std::sync::Arc;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::newton::{newton_solve, NewtonConfig, NewtonReport, ResidualMap};
use crate::problem::{Conditions, LogCoefficients, SingularProblem, Transform};
use crate::quadrature::{gauss_legendre_rule, DEFAULT_ORDER};
use crate::wavelet::{
    default_projection_order, fill_basis, try_project, BasisSpec, CoefficientVector, Decoration, DerivativeOps, SolutionExpansion,
};

/// Relative offset applied to collocation nodes that land on a breakpoint.
const BREAKPOINT_NUDGE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Collocation,
    Tau,
    Galerkin,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [SchemeKind::Collocation, SchemeKind::Tau, SchemeKind::Galerkin];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Collocation => "collocation",
            SchemeKind::Tau => "tau",
            SchemeKind::Galerkin => "galerkin",
        }
    }
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.name())
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "collocation" => Ok(SchemeKind::Collocation),
            "tau" => Ok(SchemeKind::Tau),
            "galerkin" => Ok(SchemeKind::Galerkin),
            _ => Err(Error::Config(format!("unknown scheme `{s}`"))),
        }
    }
}

/// How the `(mu / x) Y'` term enters the Tau and Galerkin integrands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Treatment {
    /// Integrate `R` as is.
    Raw,
    /// Integrate `x R`.
    MultiplyByZeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub scheme: SchemeKind,
    /// Gauss-Legendre points per subinterval.
    pub quad_order: usize,
    /// `None` picks `MultiplyByZeta` for Tau and Galerkin when `mu != 0`, else `Raw`.
    pub treatment: Option<Treatment>,
    pub newton: NewtonConfig,
}

impl SchemeConfig {
    pub fn new(scheme: SchemeKind) -> Self {
        Self {
            scheme,
            quad_order: DEFAULT_ORDER,
            treatment: None,
            newton: NewtonConfig::default(),
        }
    }

    pub fn validate(&self, basis: &BasisSpec) -> Result<()> {
        if self.quad_order < basis.order() {
            return Err(Error::Config(format!(
                "quad_order {} is below the polynomial order M = {}",
                self.quad_order,
                basis.order()
            )));
        }
        if !(self.newton.tol > 0.0) {
            return Err(Error::Config("newton tolerance must be positive".into()));
        }
        Ok(())
    }

    /// The treatment actually used for `problem`.
    pub fn effective_treatment(&self, problem: &SingularProblem) -> Treatment {
        match (self.treatment, self.scheme) {
            (_, SchemeKind::Collocation) => Treatment::Raw,
            (Some(t), _) => t,
            (None, _) if problem.mu != 0.0 => Treatment::MultiplyByZeta,
            (None, _) => Treatment::Raw,
        }
    }
}

/// `R(x) = Y'' + (mu/x) Y' + f(x, Y) - g(x)` for the expansion `Lambda` (decoration aware).
pub fn residual_at(
    lambda: &CoefficientVector,
    x: f64,
    problem: &SingularProblem,
    basis: &BasisSpec,
    decoration: Decoration,
) -> Result<f64> {
    let e = SolutionExpansion::new(*basis, lambda.clone(), decoration)?;
    let log = log_coefficients(problem)?;
    problem.equation_residual(x, e.eval_all(x)?, log)
}

fn log_coefficients(problem: &SingularProblem) -> Result<Option<LogCoefficients>> {
    match problem.transform {
        Transform::None => Ok(None),
        Transform::LogSubstitution => problem.log_coefficients().map(Some),
    }
}

/// Interior extrema of `VL_{eta-1}` mapped to `(0, L)`, in decreasing order.
pub fn collocation_nodes(basis: &BasisSpec) -> Result<Vec<f64>> {
    let eta = basis.eta();
    if eta < 3 {
        return Err(Error::InvalidBasis(format!("collocation needs eta >= 3, got {eta}")));
    }
    let l = basis.length();
    let n = (eta - 1) as f64;
    let interior = basis.breakpoints();
    Ok((1..eta - 1)
        .map(|j| {
            let t = 2.0 * (j as f64 * std::f64::consts::PI / n).cos();
            let x = l * (t + 2.0) / 4.0;
            if interior.iter().any(|&b| (b - x).abs() <= BREAKPOINT_NUDGE * l) {
                // toward the center of the domain
                x + BREAKPOINT_NUDGE * l * (0.5 * l - x).signum()
            } else {
                x
            }
        })
        .collect())
}

/// Galerkin trial decoration carrying the (solver-variable) side conditions.
pub fn galerkin_trial(problem: &SingularProblem) -> Decoration {
    match problem.solver_conditions() {
        Conditions::Ivp { alpha0, alpha1 } => Decoration::Ivp { alpha0, alpha1 },
        Conditions::Bvp { beta0, beta1 } => Decoration::Bvp { beta0, beta1 },
    }
}

/// A point where the residual is sampled, with its row contributions precomputed.
#[derive(Debug, Clone)]
struct Sample {
    x: f64,
    /// Quadrature weight times the test-function factor (`nu` for Galerkin, `x` under
    /// `MultiplyByZeta`); 1 for collocation.
    scale: f64,
    /// Rows fed by this sample and the test-function value for each.
    rows: Vec<(usize, f64)>,
}

/// The assembled system: `eta` residual rows as a function of `Lambda`.
#[derive(Debug, Clone)]
pub struct AlgebraicSystem {
    pub problem: SingularProblem,
    pub basis: BasisSpec,
    pub decoration: Decoration,
    pub scheme: SchemeKind,
    pub treatment: Treatment,
    ops: Arc<DerivativeOps>,
    log: Option<LogCoefficients>,
    samples: Vec<Sample>,
    /// Number of residual rows before the condition rows.
    equation_rows: usize,
}

impl AlgebraicSystem {
    pub fn expansion(&self, lambda: &CoefficientVector) -> Result<SolutionExpansion> {
        SolutionExpansion::with_ops(self.basis, lambda.clone(), self.decoration, Arc::clone(&self.ops))
    }

    /// Rows that enforce side conditions (2 for collocation and Tau, 0 for Galerkin).
    pub fn condition_rows(&self) -> usize {
        self.basis.eta() - self.equation_rows
    }

    pub fn residual_map(&self, lambda: &CoefficientVector) -> Result<DVector<f64>> {
        let eta = self.basis.eta();
        if lambda.len() != eta {
            return Err(Error::InvalidBasis(format!(
                "coefficient vector has length {}, system needs {eta}",
                lambda.len()
            )));
        }
        let e = self.expansion(lambda)?;
        let mut out = DVector::zeros(eta);
        let mut scratch = vec![0.0; eta];
        for smp in &self.samples {
            let v = e.eval_all_with(smp.x, &mut scratch)?;
            let r = self.problem.equation_residual(smp.x, v, self.log)? * smp.scale;
            if !r.is_finite() {
                return Err(match self.scheme {
                    SchemeKind::Collocation => Error::NonFiniteResidual(format!("residual at x = {}", smp.x)),
                    _ => Error::NonFiniteIntegrand { node: smp.x },
                });
            }
            for &(row, phi) in &smp.rows {
                out[row] += phi * r;
            }
        }
        if self.condition_rows() == 2 {
            let l = self.basis.length();
            let at0 = e.eval_all_with(0.0, &mut scratch)?;
            let (c0, c1) = match self.problem.solver_conditions() {
                Conditions::Ivp { alpha0, alpha1 } => (at0[0] - alpha0, at0[1] - alpha1),
                Conditions::Bvp { beta0, beta1 } => {
                    (at0[0] - beta0, e.eval_all_with(l, &mut scratch)?[0] - beta1)
                }
            };
            out[eta - 2] = c0;
            out[eta - 1] = c1;
        }
        Ok(out)
    }
}

impl ResidualMap for AlgebraicSystem {
    fn dim(&self) -> usize {
        self.basis.eta()
    }

    fn residual(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.residual_map(&CoefficientVector(x.clone()))
    }
}

fn base_system(
    problem: &SingularProblem,
    basis: &BasisSpec,
    config: &SchemeConfig,
    decoration: Decoration,
    samples: Vec<Sample>,
    equation_rows: usize,
) -> Result<AlgebraicSystem> {
    Ok(AlgebraicSystem {
        problem: problem.clone(),
        basis: *basis,
        decoration,
        scheme: config.scheme,
        treatment: config.effective_treatment(problem),
        ops: DerivativeOps::new(basis),
        log: log_coefficients(problem)?,
        samples,
        equation_rows,
    })
}

pub fn assemble_collocation(
    problem: &SingularProblem,
    basis: &BasisSpec,
    config: &SchemeConfig,
) -> Result<AlgebraicSystem> {
    config.validate(basis)?;
    let nodes = collocation_nodes(basis)?;
    let samples = nodes
        .iter()
        .enumerate()
        .map(|(i, &x)| Sample {
            x,
            scale: 1.0,
            rows: vec![(i, 1.0)],
        })
        .collect();
    base_system(problem, basis, config, Decoration::None, samples, basis.eta() - 2)
}

/// Gauss-Legendre samples on every subinterval with the test functions `rows`
/// (flat indices) that are supported there; `nu` is the Galerkin multiplier.
fn quadrature_samples(
    basis: &BasisSpec,
    config: &SchemeConfig,
    treatment: Treatment,
    rows: usize,
    nu: impl Fn(f64) -> f64,
) -> Result<Vec<Sample>> {
    let rule = gauss_legendre_rule(config.quad_order)?;
    let m_cap = basis.order();
    let mut values = vec![0.0; basis.eta()];
    let mut samples = Vec::with_capacity(rule.len() * basis.subintervals());
    for s in 1..=basis.subintervals() {
        let first = (s - 1) * m_cap;
        if first >= rows {
            break;
        }
        let (a, b) = basis.subinterval_bounds(s);
        for (x, w) in rule.mapped(a, b) {
            let active = fill_basis(x, basis, &mut values)?;
            debug_assert_eq!(active, s);
            let mut scale = w * nu(x);
            if treatment == Treatment::MultiplyByZeta {
                scale *= x;
            }
            let rows = (first..(first + m_cap).min(rows)).map(|i| (i, values[i])).collect();
            samples.push(Sample { x, scale, rows });
        }
    }
    Ok(samples)
}

pub fn assemble_tau(problem: &SingularProblem, basis: &BasisSpec, config: &SchemeConfig) -> Result<AlgebraicSystem> {
    config.validate(basis)?;
    let eta = basis.eta();
    if eta < 3 {
        return Err(Error::InvalidBasis(format!("tau needs eta >= 3, got {eta}")));
    }
    let treatment = config.effective_treatment(problem);
    let samples = quadrature_samples(basis, config, treatment, eta - 2, |_| 1.0)?;
    base_system(problem, basis, config, Decoration::None, samples, eta - 2)
}

pub fn assemble_galerkin(
    problem: &SingularProblem,
    basis: &BasisSpec,
    config: &SchemeConfig,
) -> Result<AlgebraicSystem> {
    config.validate(basis)?;
    let decoration = galerkin_trial(problem);
    let treatment = config.effective_treatment(problem);
    let l = basis.length();
    let samples = quadrature_samples(basis, config, treatment, basis.eta(), |x| decoration.multiplier(x, l)[0])?;
    base_system(problem, basis, config, decoration, samples, basis.eta())
}

/// Assembles the configured scheme.
///
/// For `k > 1` the wavelets are discontinuous at the breakpoints and no interface
/// conditions couple neighbouring subintervals, so the system is generally rank
/// deficient (Tau) or poorly determined (collocation, Galerkin).
pub fn assemble(problem: &SingularProblem, basis: &BasisSpec, config: &SchemeConfig) -> Result<AlgebraicSystem> {
    if basis.k() > 1 {
        log::warn!("k = {} > 1: subintervals are not coupled; the solve may be singular", basis.k());
    }
    match config.scheme {
        SchemeKind::Collocation => assemble_collocation(problem, basis, config),
        SchemeKind::Tau => assemble_tau(problem, basis, config),
        SchemeKind::Galerkin => assemble_galerkin(problem, basis, config),
    }
}

/// Starting coefficients: the projection of the problem's guess in the solver
/// variable (undecorated), or zero.
pub fn initial_guess(system: &AlgebraicSystem) -> Result<CoefficientVector> {
    let Some(guess) = system.problem.guess.as_ref() else {
        return Ok(CoefficientVector::zeros(system.basis.eta()));
    };
    let l = system.basis.length();
    let decoration = system.decoration;
    let transform = system.problem.transform;
    try_project(
        |x| {
            let y = guess.eval_x(x)?;
            let v = match transform {
                Transform::None => y,
                Transform::LogSubstitution => y.ln(),
            };
            let base = decoration.base(x, l)[0];
            let nu = decoration.multiplier(x, l)[0];
            Ok((v - base) / nu)
        },
        &system.basis,
        default_projection_order(&system.basis),
    )
}

/// A solved expansion together with the Newton report.
#[derive(Debug, Clone)]
pub struct Solution {
    pub expansion: SolutionExpansion,
    pub transform: Transform,
    pub scheme: SchemeKind,
    pub treatment: Treatment,
    pub report: NewtonReport,
}

impl Solution {
    /// Approximate `Y(x)`, mapped back through the log substitution if used.
    pub fn value(&self, x: f64) -> Result<f64> {
        let v = self.expansion.eval(x, 0)?;
        Ok(match self.transform {
            Transform::None => v,
            Transform::LogSubstitution => v.exp(),
        })
    }
}

/// Assembles the chosen scheme and solves it by Newton's method.
pub fn solve(problem: &SingularProblem, basis: &BasisSpec, config: &SchemeConfig) -> Result<Solution> {
    let system = assemble(problem, basis, config)?;
    let init = initial_guess(&system)?;
    solve_system(&system, &init, &config.newton)
}

pub fn solve_system(system: &AlgebraicSystem, init: &CoefficientVector, newton: &NewtonConfig) -> Result<Solution> {
    let (lambda, report) = newton_solve(system, &init.0, newton)?;
    Ok(Solution {
        expansion: system.expansion(&CoefficientVector(lambda))?,
        transform: system.problem.transform,
        scheme: system.scheme,
        treatment: system.treatment,
        report,
    })
}
