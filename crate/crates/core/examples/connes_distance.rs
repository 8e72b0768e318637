//! The spectral (Connes) distance on graph approximations, against the
//! geodesic distance and an independent LP solve.

use gasket_ncg::connes::{
    connes_distance, connes_distance_oracle, linear_function, seminorm_equality_check, witness_function,
};
use gasket_ncg::geodesic::geodesic_distance;
use gasket_ncg::graph::{build_length_graph, BuildOptions};
use gasket_ncg::{Geometry, VertexId};

fn main() -> gasket_ncg::Result<()> {
    let pairs = [("0:1", "0:2"), ("0:1", "23:1"), ("12:3", "3:2")];
    for geometry in [Geometry::Euclidean, Geometry::Harmonic] {
        let g = build_length_graph(geometry, 2, &BuildOptions::default())?;
        println!("{geometry}, level 2:");
        for (p, q) in pairs {
            let (p, q): (VertexId, VertexId) = (p.parse()?, q.parse()?);
            let c = connes_distance(&p, &q, &g)?;
            let d = geodesic_distance(&p, &q, &g)?;
            let lp = connes_distance_oracle(&p, &q, &g)?;
            println!("  {p} -> {q}: connes {c:.12}  geodesic {d:.12}  LP {lp:.12}");
        }
        let h = witness_function(&"0:1".parse()?, &g)?;
        let check = seminorm_equality_check(&h, &g)?;
        println!("  witness d(0:1, .): edge sup {:.12}, pairwise sup {:.12}", check.edge_sup, check.pairwise_sup);
        let x = seminorm_equality_check(&linear_function(&g, 1.0, 0.0), &g)?;
        println!("  f = x:             edge sup {:.12}, pairwise sup {:.12}", x.edge_sup, x.pairwise_sup);
    }

    let g = build_length_graph(Geometry::Harmonic, 5, &BuildOptions::default())?;
    let (p, q): (VertexId, VertexId) = ("0:1".parse()?, "0:3".parse()?);
    println!("\nharmonic level 5 ({} vertices): connes {:.12}, geodesic {:.12}",
        g.vertices().len(),
        connes_distance(&p, &q, &g)?,
        geodesic_distance(&p, &q, &g)?);
    Ok(())
}
