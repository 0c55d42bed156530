//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
#![allow(clippy::type_complexity)]

use std::f64::consts::PI;
use std::process::ExitCode;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vlwave::analysis::{
    coefficient_decay_check, convergence_sweep, printed_order_factor, reproduce_table,
    theoretical_bound, weighted_truncation_error,
};
use vlwave::opmat::{build_d, matrix_power};
use vlwave::quadrature::gauss_chebyshev_rule;
use vlwave::vlp;
use vlwave::wavelet::{basis_vector, project};
use vlwave::{builtin_problem, solve, BasisSpec, SchemeConfig, SchemeKind, SingularProblem};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn table_columns(table: usize, example: usize) -> Outcome {
    let runs = reproduce_table(table).map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut parts = Vec::new();
    for run in runs.iter().filter(|r| r.example == example) {
        ok &= run.pass();
        parts.push(format!(
            "{} {:.2e} <= {:.0e}",
            run.table.scheme,
            run.table.max_error(),
            run.tolerance
        ));
    }
    check(ok && !parts.is_empty(), parts.join(", "))
}

fn table1_example1() -> Outcome {
    table_columns(1, 1)
}

fn table1_example2() -> Outcome {
    table_columns(1, 2)
}

fn table2_examples() -> Outcome {
    let mut worst_exact: f64 = 0.0;
    for (id, eta) in [(3, 5), (4, 3), (5, 3)] {
        let p = builtin_problem(id).map_err(|e| e.to_string())?;
        let basis = BasisSpec::single(eta, p.length).map_err(|e| e.to_string())?;
        for scheme in [SchemeKind::Tau, SchemeKind::Galerkin] {
            let sol = solve(&p, &basis, &SchemeConfig::new(scheme)).map_err(|e| e.to_string())?;
            for i in 0..=100 {
                let x = p.length * i as f64 / 100.0;
                let err = (sol.value(x).map_err(|e| e.to_string())? - p.exact_at(x).map_err(|e| e.to_string())?).abs();
                worst_exact = worst_exact.max(err);
            }
        }
    }
    let runs = reproduce_table(2).map_err(|e| e.to_string())?;
    let colloc = runs.iter().map(|r| r.table.max_error()).fold(0.0, f64::max);
    let all_pass = runs.iter().all(|r| r.pass());
    check(
        worst_exact <= 1e-9 && colloc <= 1e-8 && all_pass,
        format!("tau/galerkin pointwise {worst_exact:.2e} <= 1e-9, collocation {colloc:.2e} <= 1e-8"),
    )
}

fn opmat_golden() -> Outcome {
    let spec = BasisSpec::new(2, 3, 2.0).map_err(|e| e.to_string())?;
    let d = build_d(&spec).entries;
    let r8 = 2.0 * 2f64.sqrt();
    #[rustfmt::skip]
    let printed = DMatrix::from_row_slice(6, 6, &[
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        r8,  0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 8.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, r8,  0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 8.0, 0.0,
    ]);
    let diff = (d - printed).amax();
    check(diff <= 1e-12, format!("max entry difference {diff:.1e}"))
}

fn identity_suite() -> Outcome {
    let mut worst_eval: f64 = 0.0;
    for m in 0..=12 {
        let mono = vlp::monomial_coeffs(m).map_err(|e| e.to_string())?;
        for i in 1..40 {
            let d = PI * i as f64 / 40.0;
            let t = 2.0 * d.cos();
            let trig = 2.0 * (m as f64 * d).cos();
            let rec = vlp::eval(m, t);
            let rod = vlp::rodrigues_eval(m, t).map_err(|e| e.to_string())?;
            for v in [rec, mono.eval(t), rod] {
                worst_eval = worst_eval.max((v - trig).abs());
            }
        }
    }

    let rule = gauss_chebyshev_rule(64).map_err(|e| e.to_string())?;
    let mut worst_orth: f64 = 0.0;
    for n in 0..=10 {
        for m in 0..=10 {
            let ip: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&u, &w)| w * vlp::eval(n, 2.0 * u) * vlp::eval(m, 2.0 * u))
                .sum();
            let want = if n == m { 2.0 * PI * vlp::alpha(n) } else { 0.0 };
            worst_orth = worst_orth.max((ip - want).abs());
        }
    }

    let mut worst_ode: f64 = 0.0;
    for m in 1..=12 {
        for i in 0..=20 {
            let t = -2.0 + 0.2 * i as f64;
            worst_ode = worst_ode.max(vlp::ode_residual(m, t).map_err(|e| e.to_string())?.abs());
        }
    }

    let mut worst_gen: f64 = 0.0;
    for i in 0..=8 {
        let t = -0.2 + 0.05 * i as f64;
        for j in 0..=8 {
            let x = -2.0 + 0.5 * j as f64;
            let closed = vlp::generating_fn(t, x).map_err(|e| e.to_string())?;
            let partial = vlp::generating_fn_partial(t, x, 24).map_err(|e| e.to_string())?;
            worst_gen = worst_gen.max((closed - partial).abs());
        }
    }

    let mut worst_mono: f64 = 0.0;
    for m in 0..=10 {
        let expansion = vlp::monomial_in_vl_basis(m);
        for i in 0..=16 {
            let t = -2.0 + 0.25 * i as f64;
            let rebuilt: f64 = expansion.iter().map(|&(j, c)| c * vlp::eval(j, t)).sum();
            worst_mono = worst_mono.max((rebuilt - t.powi(m as i32)).abs());
        }
    }

    check(
        worst_eval <= 1e-9 && worst_orth <= 1e-8 && worst_ode <= 1e-9 && worst_gen <= 1e-10 && worst_mono <= 1e-10,
        format!(
            "eval {worst_eval:.1e}, orthogonality {worst_orth:.1e}, ode {worst_ode:.1e}, generating {worst_gen:.1e}, monomial {worst_mono:.1e}"
        ),
    )
}

/// Polynomial with its first two derivatives.
fn poly(c: &[f64], x: f64) -> [f64; 3] {
    let mut v = [0.0; 3];
    for (i, &a) in c.iter().enumerate() {
        let i = i as i32;
        v[0] += a * x.powi(i);
        if i >= 1 {
            v[1] += a * i as f64 * x.powi(i - 1);
        }
        if i >= 2 {
            v[2] += a * (i * (i - 1)) as f64 * x.powi(i - 2);
        }
    }
    v
}

fn opmat_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut worst: f64 = 0.0;
    let mut nilpotent = true;
    for trial in 0..20 {
        let k = 1 + (trial % 2) as u32;
        let m_cap = if trial % 4 < 2 { 4 } else { 6 };
        let l = if trial % 3 == 0 { 2.0 } else { 1.0 };
        let spec = BasisSpec::new(k, m_cap, l).map_err(|e| e.to_string())?;
        let coeffs: Vec<f64> = (0..m_cap).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lambda = project(|x| poly(&coeffs, x)[0], &spec);
        let d = build_d(&spec);
        let d2 = matrix_power(&d, 2).map_err(|e| e.to_string())?;
        nilpotent &= matrix_power(&d, m_cap).map_err(|e| e.to_string())?.entries.amax() == 0.0;
        let dl = d.entries.tr_mul(&lambda.0);
        let d2l = d2.entries.tr_mul(&lambda.0);
        for i in 0..=50 {
            let x = l * (i as f64 + 0.37) / 51.0;
            if spec.breakpoints().iter().any(|b| (b - x).abs() < 1e-9) {
                continue;
            }
            let v = basis_vector(x, &spec).map_err(|e| e.to_string())?;
            let exact = poly(&coeffs, x);
            worst = worst.max((dl.dot(&v) - exact[1]).abs()).max((d2l.dot(&v) - exact[2]).abs());
        }
    }
    check(
        worst <= 1e-8 && nilpotent,
        format!("max derivative error {worst:.1e}, D^M = 0: {nilpotent}"),
    )
}

fn convergence_monotone() -> Outcome {
    let p = builtin_problem(1).map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut parts = Vec::new();
    for scheme in SchemeKind::ALL {
        let rows = convergence_sweep(&p, &SchemeConfig::new(scheme), &[6, 8, 10, 12]).map_err(|e| e.to_string())?;
        ok &= rows.iter().all(|r| r.error.is_none()) && rows.windows(2).all(|w| w[1].linf < w[0].linf);
        parts.push(format!(
            "{scheme} {}",
            rows.iter().map(|r| format!("{:.1e}", r.linf)).collect::<Vec<_>>().join(" > ")
        ));
    }
    check(ok, parts.join("; "))
}

fn coefficient_decay() -> Outcome {
    // functions on [0, 2] with H = max |Y''|
    let cases: [(&str, fn(f64) -> f64, f64); 2] = [
        ("sin(pi z / 2)", |z| (PI * z / 2.0).sin(), PI * PI / 4.0),
        ("exp(-z^2)", |z| (-z * z).exp(), 2.0),
    ];
    let mut ok = true;
    let mut min_margin = f64::INFINITY;
    for (_, f, h) in cases {
        for (k, m) in [(1, 8), (2, 8), (3, 6)] {
            let spec = BasisSpec::new(k, m, 2.0).map_err(|e| e.to_string())?;
            let c = coefficient_decay_check(&project(f, &spec), &spec, h).map_err(|e| e.to_string())?;
            ok &= c.satisfied;
            min_margin = c.margins.iter().map(|&(_, v)| v).fold(min_margin, f64::min);
        }
    }
    check(ok, format!("all m >= 2 within bound, smallest margin {min_margin:.2e}"))
}

fn error_bound() -> Outcome {
    let f = |z: f64| (PI * z / 2.0).sin();
    let h = PI * PI / 4.0;
    let mut ok = true;
    let mut worst_ratio: f64 = 0.0;
    for k in 1..=2 {
        for m in [4, 6, 8] {
            let spec = BasisSpec::new(k, m, 2.0).map_err(|e| e.to_string())?;
            let measured = weighted_truncation_error(f, &spec).map_err(|e| e.to_string())?;
            let bound = theoretical_bound(h, k, m).map_err(|e| e.to_string())?;
            ok &= measured <= bound;
            worst_ratio = worst_ratio.max(measured / bound);
        }
    }
    let printed_negative = printed_order_factor(3) < 0.0 && printed_order_factor(4) < 0.0;
    check(
        ok && printed_negative,
        format!("max measured/bound {worst_ratio:.2e}; printed closed form negative at M = 3, 4: {printed_negative}"),
    )
}

fn manufactured(rng: &mut ChaCha8Rng, m_cap: usize, case: usize) -> SingularProblem {
    let degree = rng.gen_range(2..m_cap);
    let c: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mu = [0.0, 1.0, 2.0, 5.0][case % 4];
    let f = ["0", "x*Y", "Y^2", "3*Y"][case % 4];
    let term = |coef: f64, power: i64| -> String {
        if power < 0 || coef == 0.0 {
            return String::new();
        }
        format!(" + ({coef:?})*x^{power}")
    };
    let mut p = String::from("0");
    let mut dp = String::from("0");
    let mut ddp = String::from("0");
    for (i, &a) in c.iter().enumerate() {
        let n = i as f64;
        p += &term(a, i as i64);
        dp += &term(a * n, i as i64 - 1);
        ddp += &term(a * n * (n - 1.0), i as i64 - 2);
    }
    let fy = f.replace('Y', &format!("({p})"));
    let g = format!("({ddp}) + {mu:?}*({dp})/x + {fy}");
    let l = 1.0 + case as f64 * 0.25;
    let conditions = if case.is_multiple_of(2) {
        format!(r#"{{"type": "ivp", "v0": {:?}, "v1": {:?}}}"#, c[0], c[1])
    } else {
        let at_l: f64 = c.iter().enumerate().map(|(i, a)| a * l.powi(i as i32)).sum();
        format!(r#"{{"type": "bvp", "v0": {:?}, "v1": {at_l:?}}}"#, c[0])
    };
    // Newton starts off the exact solution; the offset vanishes with the decoration
    let guess = format!("{p} + 0.05*x^2*({l:?} - x)/{:?}", l * l);
    let json = format!(
        r#"{{"name": "manufactured {case}", "mu": {mu:?}, "f": "{f}", "g": "{g}", "conditions": {conditions}, "L": {l:?}, "exact": "{p}", "guess": "{guess}"}}"#
    );
    SingularProblem::from_json(&json).expect("manufactured problem parses")
}

fn exactness_in_span() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut substituted: f64 = 0.0;
    let mut failures = Vec::new();
    let mut cold_hits = 0;
    for case in 0..12 {
        let m_cap = 4 + case % 4;
        let p = manufactured(&mut rng, m_cap, case);
        // the exact polynomial satisfies the equation by direct substitution
        for i in 1..10 {
            let x = p.length * i as f64 / 10.0;
            let ex = p.exact.as_ref().unwrap();
            let h = 1e-4;
            let v = [
                ex.eval_x(x).unwrap(),
                (ex.eval_x(x + h).unwrap() - ex.eval_x(x - h).unwrap()) / (2.0 * h),
                (ex.eval_x(x + h).unwrap() - 2.0 * ex.eval_x(x).unwrap() + ex.eval_x(x - h).unwrap()) / (h * h),
            ];
            substituted = substituted.max(p.equation_residual(x, v, None).unwrap().abs());
        }
        let basis = BasisSpec::single(m_cap, p.length).unwrap();
        for scheme in SchemeKind::ALL {
            match solve(&p, &basis, &SchemeConfig::new(scheme)) {
                Ok(sol) if sol.report.converged => {
                    for i in 0..=40 {
                        let x = p.length * i as f64 / 40.0;
                        worst = worst.max((sol.value(x).unwrap() - p.exact_at(x).unwrap()).abs());
                    }
                }
                Ok(_) => failures.push(format!("{} {scheme}: not converged", p.name)),
                Err(e) => failures.push(format!("{} {scheme}: {e}", p.name)),
            }
            let mut cold = p.clone();
            cold.guess = None;
            if let Ok(sol) = solve(&cold, &basis, &SchemeConfig::new(scheme)) {
                let hit = sol.report.converged
                    && (0..=40).all(|i| {
                        let x = p.length * i as f64 / 40.0;
                        (sol.value(x).unwrap() - p.exact_at(x).unwrap()).abs() <= 1e-9
                    });
                cold_hits += usize::from(hit);
            }
        }
    }
    check(
        worst <= 1e-9 && failures.is_empty() && substituted < 1e-5,
        format!(
            "36 solves, max error {worst:.1e}, substitution residual {substituted:.1e}, zero start reaches exact {cold_hits}/36{}",
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 table 1, example 1 (eta = 12)", table1_example1),
        ("2 table 1, example 2 (eta = 6)", table1_example2),
        ("3 table 2, examples 3-5", table2_examples),
        ("4 operational matrix golden value", opmat_golden),
        ("5 polynomial identity suite", identity_suite),
        ("6 operational matrix exactness", opmat_exactness),
        ("7 convergence monotonicity", convergence_monotone),
        ("8 coefficient decay", coefficient_decay),
        ("9 truncation error bound", error_bound),
        ("10 exactness in span", exactness_in_span),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
