// Error against resolution, and the published table rerun.

use vlwave::analysis::{convergence_sweep, reproduce_table};
use vlwave::{builtin_problem, SchemeConfig, SchemeKind};

pub fn run_example() -> vlwave::Result<()> {
    let problem = builtin_problem(1)?;
    for scheme in SchemeKind::ALL {
        let rows = convergence_sweep(&problem, &SchemeConfig::new(scheme), &[6, 8, 10, 12])?;
        let line: Vec<String> = rows.iter().map(|r| format!("{}:{:.1e}", r.eta, r.linf)).collect();
        println!("{scheme:<11} {}", line.join("  "));
    }
    for run in reproduce_table(1)? {
        println!(
            "example {} {:<11} max error {:.2e} published {:.2e}",
            run.example,
            run.table.scheme,
            run.table.max_error(),
            run.published_max()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> vlwave::Result<()> {
    run_example()
}
