//! Harmonic extension, the coordinate map Phi and its conjugacy with the
//! contractions H_i.

use gasket_ncg::harmonic::{graph_energy, harmonic_extension, phi};
use gasket_ncg::ifs::{apply_word, harmonic_ifs};
use gasket_ncg::validate::conjugacy_error;
use gasket_ncg::{VertexId, Word};

fn main() -> gasket_ncg::Result<()> {
    let u = harmonic_extension([1.0, 0.0, 0.0], 3);
    println!("harmonic extension of (1, 0, 0):");
    for (v, x) in u.iter().filter(|(v, _)| v.level() <= 2) {
        println!("  {v:<6} {x:.6}");
    }
    let energies: Vec<String> = (0..=3).map(|k| graph_energy(&u, k).map(|e| format!("{e:.12}"))).collect::<Result<_, _>>()?;
    println!("renormalised energy by level: {}", energies.join(", "));

    let ifs = harmonic_ifs();
    println!("\nPhi at a few vertices, and H_w(Phi(v)) for comparison:");
    let w: Word = "213".parse()?;
    for v in ["0:1", "1:2", "2:3", "12:3"] {
        let v: VertexId = v.parse()?;
        let moved = VertexId::new(w.concat(v.word())?, v.corner())?;
        let lhs = phi(&moved, moved.level())?;
        let rhs = apply_word(&ifs, &w, &phi(&v, v.level())?);
        println!(
            "  Phi({moved}) = ({:+.8}, {:+.8})   H_{w}(Phi({v})) = ({:+.8}, {:+.8})",
            lhs.x, lhs.y, rhs.x, rhs.y
        );
    }
    println!("\nmax conjugacy error over |w| <= 6: {:.2e}", conjugacy_error(6)?);
    Ok(())
}
