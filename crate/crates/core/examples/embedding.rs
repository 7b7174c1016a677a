//! Anisotropic exponent algebra, the Besov-to-Lorentz embedding and the
//! limiting sweep beta_j -> 1.

use aniso_rearrange::corpus::{generate_corpus, CorpusSpec, Family};
use aniso_rearrange::norms::derive_params;
use aniso_rearrange::verify::{limiting_sweep, verify_embedding, NormFlavor};
use aniso_rearrange::Permutation;

fn main() -> aniso_rearrange::Result<()> {
    let f = generate_corpus(&CorpusSpec::unit_cube(Family::HatMultilinear, vec![32, 32], 0, 1))?.remove(0).function;
    let params = derive_params(1.0, &[0.5, 0.75], &[1.0, 2.0])?;
    println!("{}", params.to_json());
    for flavor in [NormFlavor::Lorentz, NormFlavor::Mixed(Permutation::identity(2))] {
        for r in verify_embedding(&f, "hat", &params, &flavor, f64::INFINITY, false)? {
            println!("{}: lhs {:.6} rhs {:.6} ratio {:.4}", r.inequality_id, r.lhs, r.rhs, r.ratio);
        }
    }
    let sweep = limiting_sweep(&f, "hat", 1.0, &[0.5, 0.5], &[2.0, 2.0], &[0, 1], 8, &NormFlavor::Lorentz, f64::INFINITY)?;
    println!("{:>10} {:>14} {:>14}", "beta", "with factors", "without");
    for (a, b) in sweep.with_factors.points.iter().zip(&sweep.control.points) {
        println!("{:>10.6} {:>14.6} {:>14.6}", a.parameter, a.value, b.value);
    }
    Ok(())
}
