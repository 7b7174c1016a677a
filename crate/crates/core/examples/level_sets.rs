//! Superlevel sets, projections, the Loomis-Whitney count and the
//! minimal-projection chain.

use aniso_rearrange::geometry::{loomis_whitney_check, minimal_projection_chain, projection_profile, superlevel_filling};
use aniso_rearrange::rearrange::{iterated_rearrangement, strictify};
use aniso_rearrange::{GridFunction, Permutation};

fn main() -> aniso_rearrange::Result<()> {
    let vals: Vec<f64> = (0..36).map(|i| ((i * 7) % 5) as f64).collect();
    let f = GridFunction::new(vec![6, 6], vec![1.0, 1.0], vec![0.0, 0.0], vals)?;
    let g = iterated_rearrangement(&f, &Permutation::identity(2))?;
    let s = strictify(&g)?;
    let e = superlevel_filling(&s, 12.0)?;
    println!("E_12 has {} cells, measure {}", e.count(), e.measure());
    print!("{}", e.index_list());
    for axis in 0..2 {
        let prof = projection_profile(&e, axis)?;
        println!("projection along axis {}: {} columns, measure {}", axis + 1, prof.columns(), prof.projection_measure());
    }
    let lw = loomis_whitney_check(&e, "example")?;
    println!("Loomis-Whitney: {} <= {} ({})", lw.lhs, lw.rhs, lw.verdict);
    for (j, set) in minimal_projection_chain(&e)?.iter().enumerate() {
        println!("chain set {j}: {} cells", set.count());
    }
    Ok(())
}
