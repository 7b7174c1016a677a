//! The gauge functions u_j(t) and the integral and supremum estimates built
//! on them.

use aniso_rearrange::corpus::{generate_corpus, CorpusSpec, Family};
use aniso_rearrange::geometry::{build_gauge, GaugeGrid};
use aniso_rearrange::verify::{gauge_reports, verify_anisotropic_estimate};
use aniso_rearrange::Permutation;

fn main() -> aniso_rearrange::Result<()> {
    let f = generate_corpus(&CorpusSpec::unit_cube(Family::SeparableExpStaircase, vec![16, 16], 3, 1))?.remove(0).function;
    let gauge = build_gauge(&f, &Permutation::identity(2), &GaugeGrid::AllEven)?;
    for pt in gauge.points().iter().step_by(32) {
        println!("t = {:.5}  u = {:?}  prod u / t = {:.4}", pt.t, pt.u, pt.u_product() / pt.t);
    }
    for r in gauge_reports(&gauge, "sep") {
        println!("{}: {}", r.inequality_id, r.verdict);
    }
    let hs = [1.0 / 64.0, 1.0 / 16.0, 1.0 / 4.0];
    for r in verify_anisotropic_estimate(&f, "sep", 1.0, &gauge, &hs, (f64::INFINITY, f64::INFINITY))? {
        println!("{} {}: ratio {:.4} ({})", r.inequality_id, r.params, r.ratio, r.verdict);
    }
    let mut csv = Vec::new();
    gauge.write_csv(f.cell_sizes(), &mut csv)?;
    println!("gauge table: {} bytes", csv.len());
    Ok(())
}
