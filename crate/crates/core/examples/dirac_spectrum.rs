//! Dirac spectra of the edge, cell and direct-sum triples: eigenvalues,
//! counting function and zeta partial sums.

use gasket_ncg::spectral::{counting_function, eigenvalues, zeta_partial, LengthSequence, SequenceKind};
use gasket_ncg::Geometry;

fn main() -> gasket_ncg::Result<()> {
    let seq = LengthSequence::for_geometry(Geometry::Euclidean, SequenceKind::Edge, 0, 0)?;
    let base = eigenvalues(&seq, 10.0)?;
    println!("unit edge, |lambda| <= 10: {:?}", base.sorted_values());

    for geometry in [Geometry::Euclidean, Geometry::Harmonic] {
        println!("\n{geometry}, levels 0..4:");
        for kind in [SequenceKind::Edge, SequenceKind::Cell, SequenceKind::Sum] {
            let seq = LengthSequence::for_geometry(geometry, kind, 4, 10)?;
            let spectrum = eigenvalues(&seq, 100.0)?;
            let zeta = zeta_partial(&seq, 2.0, 100.0)?;
            println!(
                "  {kind:<5} N(100) = {:>6} (closed form {:>6})  min |lambda| = {:.6}  zeta_100(2) = {:.6}",
                spectrum.len(),
                counting_function(&seq, 100.0),
                spectrum.min_abs().unwrap_or(f64::NAN),
                zeta.value
            );
        }
    }
    Ok(())
}
