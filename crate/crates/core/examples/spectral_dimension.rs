//! Spectral dimension estimates for every triple kind on both gaskets.

use gasket_ncg::curves::EdgeLengthTable;
use gasket_ncg::spectral::{spectral_dimension, LengthSequence, HARMONIC_GASKET_REFERENCE_DIMENSION};
use gasket_ncg::Geometry;

fn main() -> gasket_ncg::Result<()> {
    let last = 9;
    println!("log 3 / log 2 = {:.10}; harmonic reference value ~{HARMONIC_GASKET_REFERENCE_DIMENSION}", 3f64.ln() / 2f64.ln());
    for geometry in [Geometry::Euclidean, Geometry::Harmonic] {
        let table = EdgeLengthTable::build(geometry, last, 12)?;
        let sequences = [
            ("edge", LengthSequence::edges(&table, last)?),
            ("cell", LengthSequence::cells(&table, last)?),
        ];
        for (name, seq) in &sequences {
            let d = spectral_dimension(seq, 1, last)?;
            let roots: Vec<String> = d
                .per_level
                .iter()
                .map(|l| l.root.map_or("-".into(), |r| format!("{r:.5}")))
                .collect();
            println!(
                "{geometry:<9} {name}: estimate {:.6}  spread(last 3) {:.1e}  per level [{}]",
                d.estimate,
                d.spread_last3.unwrap_or(f64::NAN),
                roots.join(" ")
            );
        }
        let sum = LengthSequence::direct_sum(&sequences[0].1, &sequences[1].1)?;
        println!("{geometry:<9} sum:  estimate {:.6}", spectral_dimension(&sum, 1, last)?.estimate);
    }
    Ok(())
}
