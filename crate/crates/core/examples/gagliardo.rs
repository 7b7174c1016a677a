//! Gagliardo double integrals: the limit as alpha -> 1 and the fractional
//! Sobolev bound with its (1-alpha) prefactor.

use aniso_rearrange::corpus::{generate_corpus, CorpusSpec, Family};
use aniso_rearrange::norms::gagliardo_seminorm;
use aniso_rearrange::verify::{verify_bbm, verify_bourgain};

fn main() -> aniso_rearrange::Result<()> {
    let f = generate_corpus(&CorpusSpec::unit_cube(Family::HatMultilinear, vec![64], 0, 1))?.remove(0).function;
    println!("alpha = 1/2, p = 1: {:.6}", gagliardo_seminorm(&f, 0.5, 1.0)?);
    let trace = verify_bbm(&f, "hat", 1.0, 6)?;
    for p in &trace.points {
        println!("alpha = {:.5}: (1-alpha) * integral = {:.6}, target {:.6}", p.parameter, p.value, p.target);
    }
    let g = generate_corpus(&CorpusSpec::unit_cube(Family::HatMultilinear, vec![16, 16], 0, 1))?.remove(0).function;
    for r in verify_bourgain(&g, "hat2d", 1.0, 0.5, (f64::INFINITY, f64::INFINITY))? {
        println!("{}: lhs {:.6} rhs {:.6} ratio {:.4}", r.inequality_id, r.lhs, r.rhs, r.ratio);
    }
    Ok(())
}
