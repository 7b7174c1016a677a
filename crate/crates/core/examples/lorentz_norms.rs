//! Lorentz norms of f* and mixed Lorentz norms of iterated rearrangements.

use aniso_rearrange::norms::{lorentz_norm, mixed_lorentz_norm};
use aniso_rearrange::rearrange::{decreasing_rearrangement, iterated_rearrangement};
use aniso_rearrange::{GridFunction, Permutation};

fn main() -> aniso_rearrange::Result<()> {
    let vals: Vec<f64> = (0..64).map(|i| (((i * 37) % 11) as f64) / 10.0).collect();
    let f = GridFunction::new(vec![8, 8], vec![0.125, 0.125], vec![0.0, 0.0], vals)?;
    let star = decreasing_rearrangement(&f);
    println!("{:>5} {:>5} {:>12} {:>12} {:>12}", "p", "r", "|f|_{p,r}", "sigma=(1,2)", "sigma=(2,1)");
    for (p, r) in [(2.0, 1.0), (2.0, 2.0), (2.0, 4.0), (1.5, f64::INFINITY)] {
        let plain = lorentz_norm(&star, p, r)?;
        let mixed: Vec<f64> = Permutation::all(2)
            .iter()
            .map(|s| mixed_lorentz_norm(&iterated_rearrangement(&f, s)?, p, r))
            .collect::<aniso_rearrange::Result<_>>()?;
        println!("{p:>5} {r:>5} {plain:>12.6} {:>12.6} {:>12.6}", mixed[0], mixed[1]);
    }
    println!("|f|_{{2,2}} equals |f|_2 = {:.6}", f.lp_norm(2.0)?);
    Ok(())
}
