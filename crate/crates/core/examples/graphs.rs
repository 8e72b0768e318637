//! Level-m graph approximations of both gaskets: counts and edge lengths.

use gasket_ncg::graph::{build_length_graph, edge_count, vertex_count, BuildOptions};
use gasket_ncg::Geometry;

fn main() -> gasket_ncg::Result<()> {
    let opts = BuildOptions::with_refinement(10);
    println!("{:<10} {:>5} {:>8} {:>8} {:>12} {:>12}", "geometry", "level", "vertices", "edges", "min length", "max length");
    for geometry in [Geometry::Euclidean, Geometry::Harmonic] {
        for level in 0..=5 {
            let g = build_length_graph(geometry, level, &opts)?;
            assert_eq!(g.vertices().len() as u64, vertex_count(level));
            assert_eq!(g.edges().len() as u64, edge_count(level));
            println!(
                "{:<10} {:>5} {:>8} {:>8} {:>12.6} {:>12.6}",
                geometry.to_string(),
                level,
                g.vertices().len(),
                g.edges().len(),
                g.min_length(),
                g.max_length()
            );
        }
    }

    let g = build_length_graph(Geometry::Harmonic, 1, &opts)?;
    println!("\nharmonic level-1 edges (refinement {}):", opts.refinement);
    for e in g.edges() {
        let chord = (g.coords()[e.ends.1] - g.coords()[e.ends.0]).norm();
        println!(
            "  {:<4} {} -> {}  length {:.10}  chord {:.10}",
            e.id.to_string(),
            g.vertices()[e.ends.0],
            g.vertices()[e.ends.1],
            e.length,
            chord
        );
    }
    Ok(())
}
