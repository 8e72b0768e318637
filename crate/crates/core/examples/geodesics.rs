//! Shortest paths and graph distances on both gaskets.

use gasket_ncg::geodesic::{distance_matrix, geodesic_path};
use gasket_ncg::graph::{build_length_graph, BuildOptions};
use gasket_ncg::{Geometry, VertexId};

fn main() -> gasket_ncg::Result<()> {
    let opts = BuildOptions::default();
    let (p, q): (VertexId, VertexId) = ("0:1".parse()?, "23:1".parse()?);
    for geometry in [Geometry::Euclidean, Geometry::Harmonic] {
        println!("{geometry}:");
        for level in 2..=6 {
            let g = build_length_graph(geometry, level, &opts)?;
            let path = geodesic_path(&p, &q, &g)?;
            println!("  level {level}: d({p}, {q}) = {:.10} over {} edges", path.length, path.edges.len());
            if level == 3 {
                let steps: Vec<String> = path.edges.iter().map(|e| e.to_string()).collect();
                println!("    path: {}", steps.join(" "));
            }
        }
    }

    let g = build_length_graph(Geometry::Harmonic, 1, &opts)?;
    println!("\nharmonic level-1 distance matrix:");
    let names: Vec<String> = g.vertices().iter().map(|v| format!("{:>8}", v.to_string())).collect();
    println!("{:>6}{}", "", names.join(""));
    for (v, row) in g.vertices().iter().zip(distance_matrix(&g)) {
        let cells: Vec<String> = row.iter().map(|d| format!("{d:>8.4}")).collect();
        println!("{:>6}{}", v.to_string(), cells.join(""));
    }
    Ok(())
}
