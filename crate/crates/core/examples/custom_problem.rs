// A problem defined in JSON with a cubic nonlinearity, Y'' + (2/x) Y' + Y^3 = g.

use vlwave::{solve, BasisSpec, SchemeConfig, SchemeKind, SingularProblem};

const PROBLEM: &str = r#"{
    "name": "cubic",
    "mu": 2,
    "f": "Y^3",
    "g": "6 + (1 + x^2)^3",
    "conditions": {"type": "ivp", "v0": 1, "v1": 0},
    "L": 1,
    "exact": "1 + x^2"
}"#;

pub fn run_example() -> vlwave::Result<()> {
    let problem = SingularProblem::from_json(PROBLEM)?;
    let basis = BasisSpec::single(6, problem.length)?;
    for scheme in SchemeKind::ALL {
        let sol = solve(&problem, &basis, &SchemeConfig::new(scheme))?;
        let x = 0.75;
        println!(
            "{scheme:<11} Y({x}) = {:.15} exact {:.15} newton {}",
            sol.value(x)?,
            problem.exact_at(x)?,
            sol.report.iterations
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> vlwave::Result<()> {
    run_example()
}
