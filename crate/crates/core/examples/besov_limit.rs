//! Besov and Lipschitz seminorms along one axis, and the behaviour of
//! (1-a)^{1/theta} |f|_b as a -> 1.

use aniso_rearrange::corpus::{generate_corpus, CorpusSpec, Family};
use aniso_rearrange::norms::{besov_seminorm, lipschitz_seminorm};
use aniso_rearrange::verify::verify_limit_relations;

fn main() -> aniso_rearrange::Result<()> {
    let f = generate_corpus(&CorpusSpec::unit_cube(Family::HatMultilinear, vec![128], 0, 1))?.remove(0).function;
    for a in [0.25, 0.5, 0.75] {
        let b = besov_seminorm(&f, 0, a, 2.0, 1.0)?;
        let l = lipschitz_seminorm(&f, 0, a, 1.0)?;
        println!("alpha = {a}: besov(theta=2) = {:.6} on window {:?}, lipschitz = {:.6}", b.value, b.window, l.value);
    }
    for theta in [1.0, 2.0] {
        let trace = verify_limit_relations(&f, "hat", 0, 1.0, theta, 8)?;
        println!("theta = {theta}, target {:.6}", trace.points[0].target);
        for p in &trace.points {
            println!("  alpha = {:.6}  scaled = {:.6}  gap = {:.2e}", p.parameter, p.value, p.relative_gap());
        }
    }
    Ok(())
}
