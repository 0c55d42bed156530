//! Error tables and norms, convergence sweeps, coefficient-decay checks and the
//! a-priori truncation bound.

use std::io::Write;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::problem::{builtin_problem, SingularProblem};
use crate::quadrature::{gauss_chebyshev_rule, gauss_legendre_rule, DEFAULT_ORDER};
use crate::schemes::{solve, SchemeConfig, SchemeKind, Solution};
use crate::wavelet::{basis_vector, project, unflat_index, BasisSpec, CoefficientVector, WaveletIndex};

pub mod reference;

/// One row of an error table. The absolute error is derived on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub x: f64,
    pub exact: f64,
    pub approx: f64,
}

impl ErrorRow {
    pub fn abs_error(&self) -> f64 {
        (self.exact - self.approx).abs()
    }
}

impl Serialize for ErrorRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ErrorRow", 4)?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("exact", &self.exact)?;
        st.serialize_field("approx", &self.approx)?;
        st.serialize_field("abs_error", &self.abs_error())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorTable {
    pub problem: String,
    pub scheme: SchemeKind,
    pub eta: usize,
    pub rows: Vec<ErrorRow>,
}

impl ErrorTable {
    pub fn max_error(&self) -> f64 {
        self.rows.iter().map(ErrorRow::abs_error).fold(0.0, f64::max)
    }

    /// CSV with header `x,exact,approx,abs_error` and 17 significant digits.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["x", "exact", "approx", "abs_error"])?;
        for r in &self.rows {
            w.write_record([r.x, r.exact, r.approx, r.abs_error()].map(|v| format!("{v:.16e}")))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Tabulates exact and approximate values at `points`.
pub fn error_table(solution: &Solution, problem: &SingularProblem, points: &[f64]) -> Result<ErrorTable> {
    if problem.exact.is_none() {
        return Err(Error::MissingExact);
    }
    let rows = points
        .iter()
        .map(|&x| {
            Ok(ErrorRow {
                x,
                exact: problem.exact_at(x)?,
                approx: solution.value(x)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorTable {
        problem: problem.name.clone(),
        scheme: solution.scheme,
        eta: solution.expansion.basis().eta(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorNorms {
    pub l2: f64,
    pub linf: f64,
}

/// `L_inf` over `grid_n` uniform interior points and `L_2` by Gauss-Legendre on
/// each subinterval.
pub fn error_norms(solution: &Solution, problem: &SingularProblem, grid_n: usize) -> Result<ErrorNorms> {
    if problem.exact.is_none() {
        return Err(Error::MissingExact);
    }
    let err = |x: f64| -> Result<f64> { Ok(problem.exact_at(x)? - solution.value(x)?) };
    let basis = solution.expansion.basis();
    let l = basis.length();
    let mut linf = 0.0f64;
    for i in 1..=grid_n {
        linf = linf.max(err(l * i as f64 / (grid_n + 1) as f64)?.abs());
    }
    let rule = gauss_legendre_rule(DEFAULT_ORDER)?;
    let mut sq = 0.0;
    for s in 1..=basis.subintervals() {
        let (a, b) = basis.subinterval_bounds(s);
        for (x, w) in rule.mapped(a, b) {
            sq += w * err(x)?.powi(2);
        }
    }
    Ok(ErrorNorms { l2: sq.sqrt(), linf })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub eta: usize,
    pub linf: f64,
    pub l2: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set when the solve at this resolution failed.
    pub error: Option<String>,
}

/// Number of interior grid points used for sweep norms.
pub const SWEEP_GRID: usize = 199;

/// Solves at every `eta` (with `k = 1`) concurrently and records the error norms.
pub fn convergence_sweep(problem: &SingularProblem, config: &SchemeConfig, etas: &[usize]) -> Result<Vec<SweepRow>> {
    if etas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("etas must be strictly ascending".into()));
    }
    let run = |eta: usize| -> SweepRow {
        let attempt = || -> Result<(ErrorNorms, usize, bool)> {
            let basis = BasisSpec::single(eta, problem.length)?;
            let sol = solve(problem, &basis, config)?;
            let n = error_norms(&sol, problem, SWEEP_GRID)?;
            Ok((n, sol.report.iterations, sol.report.converged))
        };
        match attempt() {
            Ok((n, iterations, converged)) => SweepRow {
                eta,
                linf: n.linf,
                l2: n.l2,
                iterations,
                converged,
                error: None,
            },
            Err(e) => SweepRow {
                eta,
                linf: f64::NAN,
                l2: f64::NAN,
                iterations: 0,
                converged: false,
                error: Some(e.to_string()),
            },
        }
    };
    Ok(std::thread::scope(|scope| {
        let handles: Vec<_> = etas.iter().map(|&eta| scope.spawn(move || run(eta))).collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    }))
}

/// `H sqrt(pi) / (s^(5/2) (m^2 - 1))` with `s` 1-based.
pub fn coefficient_bound(h: f64, s: usize, m: usize) -> f64 {
    let m = m as f64;
    h * std::f64::consts::PI.sqrt() / ((s as f64).powf(2.5) * (m * m - 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayCheck {
    pub satisfied: bool,
    /// `bound - |Lambda|` for every coefficient with `m >= 2`.
    pub margins: Vec<(WaveletIndex, f64)>,
}

/// Checks `|Lambda_{s,m}| <= H sqrt(pi) / (s^(5/2) (m^2 - 1))` for `m >= 2`.
///
/// `h` bounds `|d^2 Y / dz^2|` in the canonical variable `z = 2x / L`; see
/// [`canonical_h`]. The bound is vacuous for `m = 1` and undefined for `m = 0`.
pub fn coefficient_decay_check(lambda: &CoefficientVector, basis: &BasisSpec, h: f64) -> Result<DecayCheck> {
    let mut margins = Vec::new();
    for (u, &c) in lambda.iter().enumerate() {
        let idx = unflat_index(u + 1, basis)?;
        if idx.m < 2 {
            continue;
        }
        margins.push((idx, coefficient_bound(h, idx.s, idx.m) - c.abs()));
    }
    Ok(DecayCheck {
        satisfied: margins.iter().all(|&(_, m)| m >= 0.0),
        margins,
    })
}

/// Converts a bound on `|Y''(x)|` to one on `|d^2 Y / dz^2|` with `z = 2x / L`.
pub fn canonical_h(h_x: f64, length: f64) -> f64 {
    h_x * (length / 2.0).powi(2)
}

/// `max |Y''|` of a computed solution on a uniform grid, for use when no exact
/// solution is available (a-posteriori estimate in the `x` variable).
pub fn a_posteriori_h(solution: &Solution, grid_n: usize) -> Result<f64> {
    let l = solution.expansion.basis().length();
    let mut h = 0.0f64;
    for i in 0..=grid_n {
        let x = l * i as f64 / grid_n as f64;
        h = h.max(solution.expansion.eval(x, 2)?.abs());
    }
    Ok(h)
}

/// `A(k) = int_{2^(k-1)}^inf 2^-(5t - 5) dt = 1 / (2^(5 (2^(k-1) - 1)) 5 ln 2)`.
pub fn dilation_factor(k: u32) -> f64 {
    let e = 5.0 * ((1u64 << (k - 1)) as f64 - 1.0);
    1.0 / (e.exp2() * 5.0 * std::f64::consts::LN_2)
}

/// `I(M) = int_{M-1}^inf dz / (z^2 - 1)^2`, from the antiderivative
/// `-z / (2 (z^2 - 1)) - ln((z - 1) / (z + 1)) / 4`.
pub fn order_integral(m: usize) -> Result<f64> {
    if m <= 2 {
        return Err(Error::Domain {
            what: "order integral needs M > 2",
            value: m as f64,
        });
    }
    let a = (m - 1) as f64;
    Ok(a / (2.0 * (a * a - 1.0)) + 0.25 * ((a - 1.0) / (a + 1.0)).ln())
}

/// The closed form printed with the error estimate,
/// `((M^2 - 2M) ln M - M^2 ln(M-2) + (2 ln(M-2) - 2) M + 2) / (4M (M-2))`.
///
/// It equals `-I(M)`, so it is negative for every `M > 2` and cannot be used under
/// the square root. Kept only to document the discrepancy.
pub fn printed_order_factor(m: usize) -> f64 {
    let m = m as f64;
    let bracket = (m * m - 2.0 * m) * m.ln() - m * m * (m - 2.0).ln() + (2.0 * (m - 2.0).ln() - 2.0) * m + 2.0;
    bracket / (4.0 * m * (m - 2.0))
}

/// `H sqrt(pi A(k) I(M))`, the bound on the weighted truncation error for `M > 2`.
pub fn theoretical_bound(h: f64, k: u32, m: usize) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain {
            what: "H must be positive",
            value: h,
        });
    }
    Ok(h * (std::f64::consts::PI * dilation_factor(k) * order_integral(m)?).sqrt())
}

/// `||f - P f||_{w_s}` where `P` is the projection onto `basis` and the norm sums
/// the weighted integrals over every subinterval (canonical variable).
pub fn weighted_truncation_error(f: impl Fn(f64) -> f64, basis: &BasisSpec) -> Result<f64> {
    let lambda = project(&f, basis);
    let rule = gauss_chebyshev_rule(256)?;
    let two_k = (1u64 << basis.k()) as f64;
    let mut sq = 0.0;
    for s in 1..=basis.subintervals() {
        let s_hat = 2.0 * (2 * s - 1) as f64;
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            // y = 2^k z - s_hat = 2t, dz w_s(z) = dt / (2^k sqrt(1 - t^2))
            let z = (2.0 * t + s_hat) / two_k;
            let x = basis.from_canonical(z);
            let approx = basis_vector(x, basis)?.dot(&lambda.0);
            sq += w / two_k * (f(x) - approx).powi(2);
        }
    }
    Ok(sq.sqrt())
}

/// One scheme run of a published table against the frozen published errors.
#[derive(Debug, Clone, Serialize)]
pub struct TableRun {
    pub example: usize,
    pub table: ErrorTable,
    pub published_errors: Vec<f64>,
    pub tolerance: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl TableRun {
    pub fn pass(&self) -> bool {
        self.converged && self.table.max_error() <= self.tolerance
    }

    pub fn published_max(&self) -> f64 {
        self.published_errors.iter().copied().fold(0.0, f64::max)
    }
}

/// Re-runs Table 1 (`table = 1`) or the collocation column of Table 2 (`table = 2`).
pub fn reproduce_table(table: usize) -> Result<Vec<TableRun>> {
    let cases = reference::cases(table)?;
    let jobs: Vec<_> = cases
        .iter()
        .flat_map(|c| c.columns.iter().map(move |col| (c, col)))
        .collect();
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(case, col)| {
                scope.spawn(move || -> Result<TableRun> {
                    let problem = builtin_problem(case.example)?;
                    let basis = BasisSpec::single(case.eta, problem.length)?;
                    let sol = solve(&problem, &basis, &SchemeConfig::new(col.scheme))?;
                    let points: Vec<f64> = case.rows.iter().map(|r| r.x).collect();
                    Ok(TableRun {
                        example: case.example,
                        table: error_table(&sol, &problem, &points)?,
                        published_errors: case.rows.iter().map(|r| r.errors[col.column]).collect(),
                        tolerance: col.tolerance,
                        iterations: sol.report.iterations,
                        converged: sol.report.converged,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("table worker panicked"))
            .collect::<Vec<_>>()
    });
    results.into_iter().collect()
}
