//! Deterministic SVG drawings of the level-`m` cells, optionally with a
//! geodesic highlighted.

use std::fmt::Write;

use crate::curves::edge_points;
use crate::error::{GasketError, Result};
use crate::geodesic::GeodesicPath;
use crate::ifs::{Geometry, Ifs, Vec2};
use crate::word::{EdgeId, Side, Word};

/// Deepest level drawn (`3^9` cells).
pub const MAX_RENDER_LEVEL: usize = 9;

const PANEL_WIDTH: f64 = 600.0;
const MARGIN: f64 = 20.0;

/// Points per drawn side are `2^sub + 1`; Euclidean sides are straight.
fn sub_refinement(geometry: Geometry, level: usize) -> usize {
    match geometry {
        Geometry::Euclidean => 0,
        Geometry::Harmonic => 5usize.saturating_sub(level).min(4),
    }
}

/// Closed outline of cell `w`: side `b` from corner 1 to 2, `r` from 2 to 3,
/// then `l` back from 3 to 1.
pub fn cell_outline(ifs: &Ifs, w: &Word, sub: usize) -> Vec<Vec2> {
    let bottom = edge_points(ifs, &EdgeId::new(w.clone(), Side::B), sub);
    let right = edge_points(ifs, &EdgeId::new(w.clone(), Side::R), sub);
    let mut left = edge_points(ifs, &EdgeId::new(w.clone(), Side::L), sub);
    left.reverse();
    let mut out = bottom;
    out.pop();
    out.extend_from_slice(&right[..right.len() - 1]);
    out.extend_from_slice(&left[..left.len() - 1]);
    out
}

struct Frame {
    min: Vec2,
    scale: f64,
    height: f64,
    dx: f64,
}

impl Frame {
    fn new(ifs: &Ifs, dx: f64) -> Self {
        let corners = [ifs.corner(1), ifs.corner(2), ifs.corner(3)];
        let min = Vec2::new(
            corners.iter().map(|c| c.x).fold(f64::INFINITY, f64::min),
            corners.iter().map(|c| c.y).fold(f64::INFINITY, f64::min),
        );
        let max = Vec2::new(
            corners.iter().map(|c| c.x).fold(f64::NEG_INFINITY, f64::max),
            corners.iter().map(|c| c.y).fold(f64::NEG_INFINITY, f64::max),
        );
        let scale = (PANEL_WIDTH - 2.0 * MARGIN) / (max.x - min.x);
        Frame {
            min,
            scale,
            height: (max.y - min.y) * scale + 2.0 * MARGIN,
            dx,
        }
    }

    fn point(&self, p: &Vec2) -> (f64, f64) {
        let x = self.dx + MARGIN + (p.x - self.min.x) * self.scale;
        let y = self.height - MARGIN - (p.y - self.min.y) * self.scale;
        (x, y)
    }
}

fn fmt_points(frame: &Frame, pts: &[Vec2]) -> String {
    let mut s = String::new();
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = frame.point(p);
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{x:.3},{y:.3}").expect("string write");
    }
    s
}

fn check_level(level: usize) -> Result<()> {
    if level > MAX_RENDER_LEVEL {
        return Err(GasketError::BudgetExceeded {
            what: "render level",
            requested: level as u64,
            limit: MAX_RENDER_LEVEL as u64,
        });
    }
    Ok(())
}

fn panel(out: &mut String, geometry: Geometry, level: usize, overlay: Option<&GeodesicPath>, frame: &Frame) {
    let ifs = Ifs::for_geometry(geometry);
    let sub = sub_refinement(geometry, level);
    writeln!(out, r#"<g class="cells" data-geometry="{geometry}" data-level="{level}">"#).unwrap();
    for w in Word::all_of_length(level) {
        let pts = cell_outline(&ifs, &w, sub);
        writeln!(out, r#"<polygon data-cell="{w}" points="{}"/>"#, fmt_points(frame, &pts)).unwrap();
    }
    out.push_str("</g>\n");
    if let Some(path) = overlay {
        let sub = sub_refinement(geometry, path.edges.first().map_or(level, |e| e.level()));
        let mut d = String::new();
        for e in &path.edges {
            let pts = edge_points(&ifs, e, sub);
            for (i, p) in pts.iter().enumerate() {
                let (x, y) = frame.point(p);
                write!(d, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" }).unwrap();
            }
        }
        writeln!(
            out,
            r#"<path class="geodesic" data-from="{}" data-to="{}" d="{}"/>"#,
            path.from,
            path.to,
            d.trim_end()
        )
        .unwrap();
    }
}

const STYLE: &str = "<style>.cells polygon{fill:#dde6f2;stroke:#1f3b63;stroke-width:0.6}\
.geodesic{fill:none;stroke:#c0392b;stroke-width:2.5;stroke-linejoin:round}</style>\n";

fn document(width: f64, height: f64, body: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n\
{STYLE}{body}</svg>\n"
    )
}

/// The level-`m` gasket with an optional geodesic overlay.
pub fn render_svg(geometry: Geometry, level: usize, overlay: Option<&GeodesicPath>) -> Result<String> {
    check_level(level)?;
    let frame = Frame::new(&Ifs::for_geometry(geometry), 0.0);
    let mut body = String::new();
    panel(&mut body, geometry, level, overlay, &frame);
    Ok(document(PANEL_WIDTH, frame.height, &body))
}

/// Euclidean and harmonic gaskets next to each other.
pub fn render_side_by_side(level: usize) -> Result<String> {
    check_level(level)?;
    let left = Frame::new(&Ifs::for_geometry(Geometry::Euclidean), 0.0);
    let right = Frame::new(&Ifs::for_geometry(Geometry::Harmonic), PANEL_WIDTH);
    let mut body = String::new();
    panel(&mut body, Geometry::Euclidean, level, None, &left);
    panel(&mut body, Geometry::Harmonic, level, None, &right);
    Ok(document(2.0 * PANEL_WIDTH, left.height.max(right.height), &body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::geodesic_path;
    use crate::graph::{build_length_graph, BuildOptions};

    #[test]
    fn one_polygon_per_cell() {
        let svg = render_svg(Geometry::Euclidean, 3, None).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 27);
        assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn deterministic_with_overlay() {
        let g = build_length_graph(Geometry::Harmonic, 3, &BuildOptions::with_refinement(6)).unwrap();
        let path = geodesic_path(&"0:1".parse().unwrap(), &"0:2".parse().unwrap(), &g).unwrap();
        let a = render_svg(Geometry::Harmonic, 3, Some(&path)).unwrap();
        let b = render_svg(Geometry::Harmonic, 3, Some(&path)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches(r#"class="geodesic""#).count(), 1);
        let plain = render_svg(Geometry::Harmonic, 3, None).unwrap();
        assert_eq!(plain.matches("<polygon").count(), 27);
        assert_eq!(plain, render_svg(Geometry::Harmonic, 3, None).unwrap());
    }

    #[test]
    fn side_by_side_has_both_panels() {
        let svg = render_side_by_side(2).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 18);
        assert!(render_svg(Geometry::Euclidean, 10, None).is_err());
    }
}
