//! Seeded corpus generation and the AGF1 binary round trip.

use aniso_rearrange::corpus::{corpus_hash, generate_corpus, CorpusSpec, Family};
use aniso_rearrange::io::{read_agf, to_agf_bytes};

fn main() -> aniso_rearrange::Result<()> {
    let mut all = Vec::new();
    for fam in Family::ALL {
        let members = generate_corpus(&CorpusSpec::unit_cube(fam, vec![8, 8], 7, 2))?;
        for m in &members {
            let bytes = to_agf_bytes(&m.function);
            let back = read_agf(bytes.as_slice())?;
            assert_eq!(back, m.function);
            println!("{:<40} {:>5} bytes  support {:>3} cells  M_dec {}", m.id, bytes.len(), m.function.support_cells(), m.function.is_mdec());
        }
        all.extend(members);
    }
    println!("corpus hash {}", corpus_hash(&all));
    Ok(())
}
