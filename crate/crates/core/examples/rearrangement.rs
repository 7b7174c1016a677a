//! Nonincreasing rearrangement, distribution function and iterated
//! rearrangements of a small 2-D function.

use aniso_rearrange::rearrange::{axis_rearrangement, decreasing_rearrangement, distribution, iterated_rearrangement};
use aniso_rearrange::{GridFunction, Permutation};

fn main() -> aniso_rearrange::Result<()> {
    let f = GridFunction::new(
        vec![3, 3],
        vec![0.5, 0.25],
        vec![0.0, 0.0],
        vec![0.0, 2.0, 1.0, 3.0, 0.0, 2.0, 1.0, 1.0, 0.0],
    )?;
    let star = decreasing_rearrangement(&f);
    println!("f* pieces (a, b, value):");
    for (a, b, v) in star.pieces() {
        println!("  ({a}, {b}] -> {v}");
    }
    for y in [0.0, 1.0, 2.0] {
        println!("lambda_f({y}) = {}", distribution(&f, y)?);
    }
    for p in [1.0, 2.0] {
        println!("p = {p}: |f|_p = {:.6}, |f*|_p = {:.6}", f.lp_norm(p)?, star.lp_norm(p)?);
    }
    println!("rearranged along axis 2: {:?}", axis_rearrangement(&f, 1)?.values());
    for sigma in Permutation::all(2) {
        let g = iterated_rearrangement(&f, &sigma)?;
        println!("R_{sigma} f = {:?} (nonincreasing in each variable: {})", g.values(), g.is_mdec());
    }
    Ok(())
}
