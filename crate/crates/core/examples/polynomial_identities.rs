// Vieta-Lucas polynomials: recurrence, closed forms, nodes and expansions.

use vlwave::vlp::{self, NodeKind};

pub fn run_example() -> vlwave::Result<()> {
    let d: f64 = 0.7;
    let t = 2.0 * d.cos();
    println!("VL_m(2 cos d) vs 2 cos(m d) at d = {d}");
    for m in 0..6 {
        println!("  m={m}  {:+.15}  {:+.15}", vlp::eval(m, t), 2.0 * (m as f64 * d).cos());
    }

    let c = vlp::monomial_coeffs(5)?;
    println!("VL_5 monomial coefficients: {:?}", c.coeffs());
    println!("Rodrigues VL_5(0.3) = {:.15}", vlp::rodrigues_eval(5, 0.3)?);
    println!("recurrence VL_5(0.3) = {:.15}", vlp::eval(5, 0.3));

    println!("zeros of VL_4:  {:?}", vlp::nodes(4, NodeKind::Zeros)?);
    println!("extrema of VL_4: {:?}", vlp::nodes(4, NodeKind::Extrema)?);

    // t^4 = sum c_j VL_j(t)
    let expansion = vlp::monomial_in_vl_basis(4);
    let x = 1.3f64;
    let rebuilt: f64 = expansion.iter().map(|&(j, c)| c * vlp::eval(j, x)).sum();
    println!("t^4 at {x}: {} from {} VL terms", rebuilt, expansion.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> vlwave::Result<()> {
    run_example()
}
