//! Writes SVG drawings: both gaskets side by side, and a harmonic geodesic.
//!
//! Usage: `cargo run --example render_figure [output-dir]` (default: the
//! system temp directory).

use std::path::PathBuf;

use gasket_ncg::geodesic::geodesic_path;
use gasket_ncg::graph::{build_length_graph, BuildOptions};
use gasket_ncg::render::{render_side_by_side, render_svg};
use gasket_ncg::Geometry;

fn main() -> gasket_ncg::Result<()> {
    let dir = std::env::args_os().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir)?;

    let pair = dir.join("gaskets-level5.svg");
    std::fs::write(&pair, render_side_by_side(5)?)?;
    println!("wrote {}", pair.display());

    let g = build_length_graph(Geometry::Harmonic, 4, &BuildOptions::default())?;
    let path = geodesic_path(&"0:1".parse()?, &"0:2".parse()?, &g)?;
    let overlay = dir.join("harmonic-geodesic-level4.svg");
    std::fs::write(&overlay, render_svg(Geometry::Harmonic, 4, Some(&path))?)?;
    println!("wrote {} (geodesic of length {:.6} over {} edges)", overlay.display(), path.length, path.edges.len());
    Ok(())
}
