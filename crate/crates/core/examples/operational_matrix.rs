// The differentiation matrix D and its square acting on projected coefficients.

use vlwave::opmat::{build_d, matrix_power};
use vlwave::wavelet::{basis_vector, project};
use vlwave::BasisSpec;

pub fn run_example() -> vlwave::Result<()> {
    let spec = BasisSpec::new(2, 3, 2.0)?;
    let d = build_d(&spec);
    println!("D for k=2, M=3, L=2:\n{}", d.entries);

    let spec = BasisSpec::new(1, 6, 1.0)?;
    let lambda = project(|x| x.powi(5) - 2.0 * x * x, &spec);
    let d = build_d(&spec);
    let d2 = matrix_power(&d, 2)?;
    let dl = d.entries.tr_mul(&lambda.0);
    let d2l = d2.entries.tr_mul(&lambda.0);
    for x in [0.1, 0.45, 0.9] {
        let v = basis_vector(x, &spec)?;
        println!(
            "x={x}: Y'={:+.12} (exact {:+.12})  Y''={:+.12} (exact {:+.12})",
            dl.dot(&v),
            5.0 * x.powi(4) - 4.0 * x,
            d2l.dot(&v),
            20.0 * x.powi(3) - 4.0
        );
    }
    let nil = matrix_power(&d, spec.order())?;
    println!("max |D^M| = {}", nil.entries.amax());
    Ok(())
}

#[allow(dead_code)]
fn main() -> vlwave::Result<()> {
    run_example()
}
