//! Singular problems `Y'' + (mu / x) Y' + f(x, Y) = g(x)` on `[0, L]` with initial
//! or two-point boundary conditions, the JSON problem-file format, and the five
//! built-in benchmark problems.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;

/// Side conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conditions {
    /// `Y(0) = alpha0`, `Y'(0) = alpha1`.
    Ivp { alpha0: f64, alpha1: f64 },
    /// `Y(0) = beta0`, `Y(L) = beta1`.
    Bvp { beta0: f64, beta1: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    None,
    /// Solve for `V = ln Y` when `f = a Y + b Y ln Y` and `g = 0`.
    #[serde(rename = "log")]
    LogSubstitution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularProblem {
    pub name: String,
    pub mu: f64,
    pub f: Expr,
    pub g: Expr,
    pub conditions: Conditions,
    pub length: f64,
    pub exact: Option<Expr>,
    pub transform: Transform,
    /// Optional starting profile for Newton, an expression in `x` for `Y`.
    pub guess: Option<Expr>,
}

/// Coefficients of `f = a Y + b Y ln Y` under the log substitution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogCoefficients {
    pub a: f64,
    pub b: f64,
}

/// Sample points used to check structural requirements numerically.
const PROBE_X: [f64; 3] = [0.173, 0.529, 0.871];
const PROBE_Y: [f64; 3] = [0.61, 1.37, 2.9];

impl SingularProblem {
    /// Validates invariants and returns the problem.
    pub fn validated(self) -> Result<Self> {
        let bad = |field: &'static str, msg: &str| Error::Problem {
            field,
            msg: msg.to_string(),
        };
        if !self.mu.is_finite() {
            return Err(bad("mu", "must be finite"));
        }
        if !(self.length > 0.0) || !self.length.is_finite() {
            return Err(bad("L", "domain length must be positive"));
        }
        if self.g.uses_y() {
            return Err(bad("g", "must not reference Y"));
        }
        if self.exact.as_ref().is_some_and(Expr::uses_y) {
            return Err(bad("exact", "must not reference Y"));
        }
        if self.guess.as_ref().is_some_and(Expr::uses_y) {
            return Err(bad("guess", "must not reference Y"));
        }
        let (c0, c1) = match self.conditions {
            Conditions::Ivp { alpha0, alpha1 } => (alpha0, alpha1),
            Conditions::Bvp { beta0, beta1 } => (beta0, beta1),
        };
        if !c0.is_finite() || !c1.is_finite() {
            return Err(bad("conditions", "values must be finite"));
        }
        if self.transform == Transform::LogSubstitution {
            self.log_coefficients()?;
            let positive = match self.conditions {
                Conditions::Ivp { alpha0, .. } => alpha0 > 0.0,
                Conditions::Bvp { beta0, beta1 } => beta0 > 0.0 && beta1 > 0.0,
            };
            if !positive {
                return Err(bad("conditions", "log substitution needs positive Y values"));
            }
        }
        Ok(self)
    }

    pub fn is_linear(&self) -> bool {
        // f affine in Y: checked on probe points
        if self.transform == Transform::LogSubstitution {
            return false;
        }
        PROBE_X.iter().all(|&x| {
            let v: Vec<f64> = [0.0, 1.0, 2.0]
                .iter()
                .map(|&y| self.f.eval(x, Some(y)).unwrap_or(f64::NAN))
                .collect();
            let second = v[2] - 2.0 * v[1] + v[0];
            second.is_finite() && second.abs() <= 1e-12 * (1.0 + v[2].abs())
        })
    }

    /// Extracts `(a, b)` from `f = a Y + b Y ln Y` and checks `g = 0`.
    pub fn log_coefficients(&self) -> Result<LogCoefficients> {
        let bad = |field: &'static str, msg: String| Error::Problem { field, msg };
        for &x in &PROBE_X {
            let gv = self.g.eval_x(x)?;
            if gv != 0.0 {
                return Err(bad("g", format!("log substitution requires g = 0, got {gv} at x = {x}")));
            }
        }
        // f / Y = a + b ln Y must be affine in ln Y and independent of x
        let q = |x: f64, y: f64| -> Result<f64> { Ok(self.f.eval(x, Some(y))? / y) };
        let (y0, y1) = (PROBE_Y[0], PROBE_Y[1]);
        let b = (q(PROBE_X[0], y1)? - q(PROBE_X[0], y0)?) / (y1.ln() - y0.ln());
        let a = q(PROBE_X[0], y0)? - b * y0.ln();
        for &x in &PROBE_X {
            for &y in &PROBE_Y {
                let want = a + b * y.ln();
                let got = q(x, y)?;
                if (got - want).abs() > 1e-9 * (1.0 + want.abs()) {
                    return Err(bad(
                        "f",
                        format!("log substitution requires f = a*Y + b*Y*ln(Y); mismatch at x = {x}, Y = {y}"),
                    ));
                }
            }
        }
        Ok(LogCoefficients { a, b })
    }

    /// Conditions on the solver variable (`V = ln Y` under the log substitution).
    pub fn solver_conditions(&self) -> Conditions {
        match (self.transform, self.conditions) {
            (Transform::None, c) => c,
            (Transform::LogSubstitution, Conditions::Ivp { alpha0, alpha1 }) => Conditions::Ivp {
                alpha0: alpha0.ln(),
                alpha1: alpha1 / alpha0,
            },
            (Transform::LogSubstitution, Conditions::Bvp { beta0, beta1 }) => Conditions::Bvp {
                beta0: beta0.ln(),
                beta1: beta1.ln(),
            },
        }
    }

    /// Residual of the equation actually solved, given the solver variable and its
    /// first two derivatives at `x`.
    ///
    /// Without transform this is `Y'' + (mu/x) Y' + f(x, Y) - g(x)`; under the log
    /// substitution it is `V'' + V'^2 + (mu/x) V' + a + b V`.
    pub fn equation_residual(&self, x: f64, v: [f64; 3], log: Option<LogCoefficients>) -> Result<f64> {
        let [y, dy, ddy] = v;
        let singular = if self.mu == 0.0 {
            0.0
        } else {
            if x == 0.0 {
                return Err(Error::SingularPoint { mu: self.mu });
            }
            self.mu / x * dy
        };
        match (self.transform, log) {
            (Transform::LogSubstitution, Some(LogCoefficients { a, b })) => {
                Ok(ddy + dy * dy + singular + a + b * y)
            }
            (Transform::LogSubstitution, None) => {
                let c = self.log_coefficients()?;
                self.equation_residual(x, v, Some(c))
            }
            (Transform::None, _) => Ok(ddy + singular + self.f.eval(x, Some(y))? - self.g.eval_x(x)?),
        }
    }

    /// Maps a solver-variable value back to `Y`.
    pub fn to_solution_value(&self, v: f64) -> f64 {
        match self.transform {
            Transform::None => v,
            Transform::LogSubstitution => v.exp(),
        }
    }

    pub fn exact_at(&self, x: f64) -> Result<f64> {
        self.exact.as_ref().ok_or(Error::MissingExact)?.eval_x(x)
    }

    /// Loads and validates a JSON problem file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let mut p = Self::from_json(&text)?;
        if p.name.is_empty() {
            p.name = path.as_ref().display().to_string();
        }
        Ok(p)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ProblemFile = serde_json::from_str(text)?;
        raw.into_problem()
    }

    pub fn to_file(&self) -> ProblemFile {
        let (kind, v0, v1) = match self.conditions {
            Conditions::Ivp { alpha0, alpha1 } => ("ivp", alpha0, alpha1),
            Conditions::Bvp { beta0, beta1 } => ("bvp", beta0, beta1),
        };
        ProblemFile {
            name: Some(self.name.clone()),
            mu: Some(self.mu),
            f: Some(self.f.to_string()),
            g: Some(self.g.to_string()),
            conditions: Some(ConditionsFile {
                kind: Some(kind.to_string()),
                v0: Some(v0),
                v1: Some(v1),
            }),
            length: Some(self.length),
            exact: self.exact.as_ref().map(ToString::to_string),
            transform: Some(self.transform),
            guess: self.guess.as_ref().map(ToString::to_string),
        }
    }
}

/// On-disk problem description.
///
/// Every field is optional at the serde level so that missing fields are
/// reported by name during validation.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub mu: Option<f64>,
    pub f: Option<String>,
    pub g: Option<String>,
    pub conditions: Option<ConditionsFile>,
    #[serde(rename = "L")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(default)]
    pub transform: Option<Transform>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guess: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ConditionsFile {
    #[serde(rename = "type")]
    pub kind: Option<String>,
    pub v0: Option<f64>,
    pub v1: Option<f64>,
}

impl ProblemFile {
    pub fn into_problem(self) -> Result<SingularProblem> {
        fn missing(field: &'static str) -> Error {
            Error::Problem {
                field,
                msg: "missing".into(),
            }
        }
        fn parse(field: &'static str, text: &str) -> Result<Expr> {
            Expr::parse(text).map_err(|e| Error::Problem {
                field,
                msg: e.to_string(),
            })
        }
        let cond = self.conditions.ok_or_else(|| missing("conditions"))?;
        let v0 = cond.v0.ok_or_else(|| missing("conditions.v0"))?;
        let v1 = cond.v1.ok_or_else(|| missing("conditions.v1"))?;
        let conditions = match cond.kind.as_deref() {
            Some("ivp") => Conditions::Ivp {
                alpha0: v0,
                alpha1: v1,
            },
            Some("bvp") => Conditions::Bvp {
                beta0: v0,
                beta1: v1,
            },
            Some(other) => {
                return Err(Error::Problem {
                    field: "conditions.type",
                    msg: format!("expected \"ivp\" or \"bvp\", got {other:?}"),
                })
            }
            None => return Err(missing("conditions.type")),
        };
        SingularProblem {
            name: self.name.unwrap_or_default(),
            mu: self.mu.ok_or_else(|| missing("mu"))?,
            f: parse("f", &self.f.ok_or_else(|| missing("f"))?)?,
            g: parse("g", &self.g.ok_or_else(|| missing("g"))?)?,
            conditions,
            length: self.length.ok_or_else(|| missing("L"))?,
            exact: self.exact.as_deref().map(|t| parse("exact", t)).transpose()?,
            transform: self.transform.unwrap_or(Transform::None),
            guess: self.guess.as_deref().map(|t| parse("guess", t)).transpose()?,
        }
        .validated()
    }
}

fn expr(text: &str) -> Expr {
    Expr::parse(text).expect("builtin expression parses")
}

/// The five benchmark problems, `id` in `1..=5`.
pub fn builtin_problem(id: usize) -> Result<SingularProblem> {
    let p = match id {
        1 => SingularProblem {
            name: "builtin:1".into(),
            mu: 1.0,
            f: expr("0"),
            g: expr("(8/(8-x^2))^2"),
            conditions: Conditions::Ivp {
                alpha0: 0.0,
                alpha1: 0.0,
            },
            length: 1.0,
            exact: Some(expr("2*ln(8/(8-x^2))")),
            transform: Transform::None,
            guess: None,
        },
        2 => SingularProblem {
            name: "builtin:2".into(),
            mu: 0.0,
            f: expr("pi^3*Y^2/sin(pi*x)"),
            g: expr("0"),
            conditions: Conditions::Bvp {
                beta0: 0.0,
                beta1: 0.0,
            },
            length: 1.0,
            exact: Some(expr("sin(pi*x)/pi")),
            transform: Transform::None,
            // Y = 0 also solves this problem; start away from it
            guess: Some(expr("x*(1-x)")),
        },
        3 => SingularProblem {
            name: "builtin:3".into(),
            mu: 8.0,
            f: expr("x*Y"),
            g: expr("x^5 - x^4 + 44*x^2 - 30*x"),
            conditions: Conditions::Ivp {
                alpha0: 0.0,
                alpha1: 0.0,
            },
            length: 2.0,
            exact: Some(expr("x^4 - x^3")),
            transform: Transform::None,
            guess: None,
        },
        4 => SingularProblem {
            name: "builtin:4".into(),
            mu: 8.0,
            f: expr("18*Y + 4*Y*ln(Y)"),
            g: expr("0"),
            conditions: Conditions::Ivp {
                alpha0: 1.0,
                alpha1: 0.0,
            },
            length: 1.0,
            exact: Some(expr("exp(-x^2)")),
            transform: Transform::LogSubstitution,
            guess: None,
        },
        5 => SingularProblem {
            name: "builtin:5".into(),
            mu: 2.0,
            f: expr("-6*Y - 4*Y*ln(Y)"),
            g: expr("0"),
            conditions: Conditions::Ivp {
                alpha0: 1.0,
                alpha1: 0.0,
            },
            length: 1.0,
            exact: Some(expr("exp(x^2)")),
            transform: Transform::LogSubstitution,
            guess: None,
        },
        other => return Err(Error::UnknownBuiltin(other)),
    };
    p.validated()
}

/// Resolves `builtin:N` or a path to a JSON problem file.
pub fn resolve_problem(spec: &str) -> Result<SingularProblem> {
    match spec.strip_prefix("builtin:") {
        Some(id) => {
            let id: usize = id.trim().parse().map_err(|_| Error::Problem {
                field: "problem",
                msg: format!("bad builtin id {id:?}"),
            })?;
            builtin_problem(id)
        }
        None => SingularProblem::load(spec),
    }
}
