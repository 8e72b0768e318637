//! Harmonic edge curves: polyline lengths as the refinement grows, and the
//! exact splitting of an edge into its two halves.

use gasket_ncg::curves::harmonic_edge_length;
use gasket_ncg::{EdgeId, Side, Word};

fn main() -> gasket_ncg::Result<()> {
    for e in [EdgeId::new(Word::empty(), Side::B), EdgeId::new("1".parse()?, Side::R)] {
        println!("edge {e}:");
        let mut previous = None;
        for k in 0..=14 {
            let length = harmonic_edge_length(&e, k)?;
            match previous {
                Some(p) => println!("  k = {k:>2}  length {length:.15}  step {:.3e}", length - p),
                None => println!("  k = {k:>2}  length {length:.15}"),
            }
            previous = Some(length);
        }
        let [a, b] = e.children()?;
        let k = 10;
        let whole = harmonic_edge_length(&e, k + 1)?;
        let halves = harmonic_edge_length(&a, k)? + harmonic_edge_length(&b, k)?;
        println!("  L_{}({e}) = {whole:.17}\n  L_{k}({a}) + L_{k}({b}) = {halves:.17}  (bitwise equal: {})\n", k + 1, whole.to_bits() == halves.to_bits());
    }
    Ok(())
}
