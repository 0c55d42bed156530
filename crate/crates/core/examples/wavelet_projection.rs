// Projecting a function onto the wavelet basis and evaluating the expansion.

use vlwave::analysis::{theoretical_bound, weighted_truncation_error};
use vlwave::wavelet::{project, Decoration};
use vlwave::{BasisSpec, SolutionExpansion};

pub fn run_example() -> vlwave::Result<()> {
    let f = |x: f64| (std::f64::consts::PI * x / 2.0).sin();
    for (k, m) in [(1, 4), (1, 8), (2, 4), (2, 8)] {
        let basis = BasisSpec::new(k, m, 2.0)?;
        let lambda = project(f, &basis);
        let e = SolutionExpansion::new(basis, lambda, Decoration::None)?;
        let max_err = (0..=40)
            .map(|i| {
                let x = i as f64 / 20.0;
                (e.eval(x, 0).unwrap() - f(x)).abs()
            })
            .fold(0.0, f64::max);
        let weighted = weighted_truncation_error(f, &basis)?;
        let bound = theoretical_bound(std::f64::consts::PI.powi(2) / 4.0, k, m)?;
        println!(
            "k={k} M={m} eta={:<2} max|err|={max_err:.2e} weighted={weighted:.2e} bound={bound:.2e}",
            basis.eta()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> vlwave::Result<()> {
    run_example()
}
