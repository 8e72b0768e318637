//! Kusuoka's metric along the bottom edge of the harmonic gasket: the tangent
//! direction lies in the range of Z, so the Z-weighted length matches the
//! polyline length.

use gasket_ncg::curves::{addressed_edge_polyline, path_energy_integral, tangent_projection_residual, IdentityZ, KusuokaZ};
use gasket_ncg::{EdgeId, Side, Word};

fn main() -> gasket_ncg::Result<()> {
    let edge = EdgeId::new(Word::empty(), Side::B);
    let path = addressed_edge_polyline(&edge, 12)?;
    let n = path.polyline.points().len() - 1;
    println!("edge {edge}, {n} chords, polyline length {:.12}", path.polyline.length());
    for depth in [1, 2, 5, 10, 20] {
        let z = KusuokaZ { depth };
        let integral = path_energy_integral(&path, &z)?;
        let mean_residual: f64 = (0..n).step_by(64).map(|i| tangent_projection_residual(&path, i, &z)).sum::<gasket_ncg::Result<f64>>()? / (n / 64) as f64;
        println!("  depth {depth:>2}: weighted length {integral:.12}  mean |Zv - v|/|v| {mean_residual:.3e}");
    }
    println!("  identity: weighted length {:.12}", path_energy_integral(&path, &IdentityZ)?);
    Ok(())
}
