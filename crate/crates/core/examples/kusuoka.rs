//! Kusuoka measure of cells and the matrices Z_m along an infinite word.

use gasket_ncg::harmonic::{kusuoka_measure, kusuoka_prefixes, PointAddress};
use gasket_ncg::validate::{kusuoka_additivity_residual, random_word};
use gasket_ncg::{VertexId, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gasket_ncg::Result<()> {
    for w in ["0", "1", "2", "3", "11", "12", "123"] {
        let w: Word = w.parse()?;
        println!("nu(K_{w}) = {:.12}", kusuoka_measure(&w));
    }
    println!("additivity residual over |w| <= 8: {:.2e}", kusuoka_additivity_residual(9)?);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let word = random_word(&mut rng, 20);
    println!("\nZ_m along {word}...:");
    for state in kusuoka_prefixes(&word)? {
        let (lo, hi) = state.z_eigenvalues();
        if [1, 2, 5, 10, 15, 20].contains(&state.word.len()) {
            println!("  m = {:>2}  trace {:.15}  eigenvalues {lo:.3e} {hi:.12}", state.word.len(), state.zm.trace());
        }
    }

    let v: VertexId = "12:3".parse()?;
    let addresses = PointAddress::of_vertex(&v);
    println!("\nboth addresses of vertex {v}:");
    for a in &addresses {
        let z = a.kusuoka_z(20)?;
        println!("  {}{}^inf  Z_20 = [[{:.10}, {:.10}], [{:.10}, {:.10}]]", a.prefix, a.tail, z[(0, 0)], z[(0, 1)], z[(1, 0)], z[(1, 1)]);
    }
    Ok(())
}
