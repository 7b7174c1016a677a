//! Partial moduli of continuity, Steklov means and the modulus axioms.

use aniso_rearrange::moduli::{averaged_modulus_bound, modulus_axioms_check, steklov_axis_derivative, steklov_mean, ModulusCurve};
use aniso_rearrange::GridFunction;

fn main() -> aniso_rearrange::Result<()> {
    let l = 32;
    let c = 1.0 / l as f64;
    let vals = (0..l).map(|i| ((i as f64 + 0.5) * c * std::f64::consts::PI).sin()).collect();
    let f = GridFunction::new(vec![l], vec![c], vec![0.0], vals)?;
    let curve = ModulusCurve::new(&f, 0, 2.0)?;
    println!("saturation scale {}", curve.saturation());
    for d in [c / 2.0, c, 4.0 * c, 0.5, 2.0] {
        let (w, avg) = averaged_modulus_bound(&curve, d)?;
        println!("delta = {d:<10} omega = {w:.6}  (3/delta) int_0^delta I = {avg:.6}");
    }
    let axioms = modulus_axioms_check(|d| curve.omega(d), c, 12, 1e-12);
    print!("{}", axioms.to_text());
    let h = 4.0 * c;
    let mean = steklov_mean(&f, h, 0)?;
    let der = steklov_axis_derivative(&f, h, 0)?;
    println!("|f - f_h|_2 = {:.6} <= omega(h) = {:.6}", mean.lp_distance(&f, 2.0)?, curve.omega(h));
    println!("|d f_h|_2 = {:.6} <= omega(h)/h = {:.6}", der.lp_norm(2.0)?, curve.omega(h) / h);
    Ok(())
}
