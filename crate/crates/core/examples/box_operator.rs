//! The dyadic box average T and the bounds around it.

use aniso_rearrange::corpus::{generate_corpus, CorpusSpec, Family};
use aniso_rearrange::geometry::{box_average, monotone_domination_ratio, operator_bound_sides};
use aniso_rearrange::verify::verify_appendix_ops;

fn main() -> aniso_rearrange::Result<()> {
    let phi = generate_corpus(&CorpusSpec::unit_cube(Family::RandomMdec, vec![8, 8], 1, 1))?.remove(0).function;
    println!("T phi at (1/2, 1/2) = {:.6}", box_average(&phi, &[0.5, 0.5])?);
    println!("max phi / T phi = {:.6}", monotone_domination_ratio(&phi)?);
    for (r, a) in [(1, 0.0), (1, 2.0), (2, -0.5)] {
        let (l, rh) = operator_bound_sides(&phi, r, a)?;
        println!("r = {r}, a = {a}: lhs {l:.6} rhs {rh:.6}");
    }
    let reps = verify_appendix_ops(&phi, "mdec", &[1, 2], &[0.0, 1.0], &[2.0], &[0.125, 0.25], 1.0)?;
    for r in reps {
        println!("{} {}: ratio {:.4} budget {} ({})", r.inequality_id, r.params, r.ratio, r.budget, r.verdict);
    }
    Ok(())
}
