// Solving the five built-in singular problems with all three schemes.

use vlwave::analysis::error_norms;
use vlwave::{builtin_problem, solve, BasisSpec, SchemeConfig, SchemeKind};

pub fn run_example() -> vlwave::Result<()> {
    for (id, eta) in [(1, 12), (2, 6), (3, 5), (4, 3), (5, 3)] {
        let problem = builtin_problem(id)?;
        let basis = BasisSpec::single(eta, problem.length)?;
        for scheme in SchemeKind::ALL {
            let sol = solve(&problem, &basis, &SchemeConfig::new(scheme))?;
            let n = error_norms(&sol, &problem, 99)?;
            println!(
                "{} eta={eta:<2} {scheme:<11} linf={:.2e} l2={:.2e} newton={} ({})",
                problem.name,
                n.linf,
                n.l2,
                sol.report.iterations,
                if sol.report.converged { "converged" } else { "not converged" }
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> vlwave::Result<()> {
    run_example()
}
