//! Cell-edge curves: polyline approximations of the harmonic edges
//! `Phi(R_j)`, their lengths, and integrals of Kusuoka's metric along them.
//!
//! A harmonic edge at refinement `k` is the polyline through the `2^k + 1`
//! vertices `k` levels below the edge's cell. Its chord vectors are
//! `J_w J_u (q_b - q_a)` for the sub-cells `u` in `{a, b}^k`, always applied
//! innermost letter first, and its length is the pairwise sum of the chord
//! norms. Both choices make the length of an edge at refinement `k + 1`
//! bit-identical to the sum of its two halves at refinement `k`.

use serde::{Deserialize, Serialize};

use crate::error::{GasketError, Result};
use crate::harmonic::{kusuoka_zm, PointAddress};
use crate::ifs::{apply_word, euclid_ifs, harmonic_ifs, Geometry, Ifs, Mat2, Vec2};
use crate::word::{EdgeId, Side, Word};

/// Refinement used when none is configured.
pub const DEFAULT_REFINEMENT: usize = 12;

/// Largest accepted refinement (`2^20` chords per edge).
pub const MAX_REFINEMENT: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    points: Vec<Vec2>,
    length: f64,
}

impl Polyline {
    pub fn from_points(points: Vec<Vec2>) -> Result<Self> {
        if points.len() < 2 {
            return Err(GasketError::InvalidArgument(
                "a polyline needs at least two points".into(),
            ));
        }
        let chords: Vec<Vec2> = points.windows(2).map(|p| p[1] - p[0]).collect();
        let length = pairwise_norm_sum(&chords);
        Ok(Polyline { points, length })
    }

    /// Points `start, start + c_0, start + c_0 + c_1, ...`; the length is
    /// taken from the chord vectors themselves.
    pub fn from_chords(start: Vec2, chords: &[Vec2]) -> Result<Self> {
        if chords.is_empty() {
            return Err(GasketError::InvalidArgument(
                "a polyline needs at least one chord".into(),
            ));
        }
        let mut points = Vec::with_capacity(chords.len() + 1);
        points.push(start);
        let mut at = start;
        for c in chords {
            at += c;
            points.push(at);
        }
        Ok(Polyline {
            points,
            length: pairwise_norm_sum(chords),
        })
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn chords(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.points.windows(2).map(|p| p[1] - p[0])
    }
}

/// Sum of `|v|` over `vs`, split in halves recursively.
pub fn pairwise_norm_sum(vs: &[Vec2]) -> f64 {
    match vs {
        [] => return 0.0,
        [v] => return v.norm(),
        [a, b] => return a.norm() + b.norm(),
        _ => {}
    }
    let (a, b) = vs.split_at(vs.len() / 2);
    pairwise_norm_sum(a) + pairwise_norm_sum(b)
}

/// Sub-cell words `{a, b}^k` of a side in traversal order.
pub fn side_subwords(side: Side, k: usize) -> Vec<Word> {
    let (a, b) = side.corners();
    let mut words = vec![Vec::<u8>::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(words.len() * 2);
        for first in [a, b] {
            for w in &words {
                let mut v = Vec::with_capacity(w.len() + 1);
                v.push(first);
                v.extend_from_slice(w);
                next.push(v);
            }
        }
        words = next;
    }
    words
        .into_iter()
        .map(|w| Word::new(w).expect("refinement bounded"))
        .collect()
}

/// Chord vectors `J_u (q_b - q_a)` of the root side, `u` in traversal order.
pub fn base_side_chords(ifs: &Ifs, side: Side, k: usize) -> Vec<Vec2> {
    let (a, b) = side.corners();
    let (ja, jb) = (ifs.map(a).linear, ifs.map(b).linear);
    let mut chords = vec![ifs.corner(b) - ifs.corner(a)];
    for _ in 0..k {
        let mut next = Vec::with_capacity(chords.len() * 2);
        next.extend(chords.iter().map(|v| ja * v));
        next.extend(chords.iter().map(|v| jb * v));
        chords = next;
    }
    chords
}

fn check_refinement(k: usize) -> Result<()> {
    if k > MAX_REFINEMENT {
        return Err(GasketError::BudgetExceeded {
            what: "refinement levels",
            requested: k as u64,
            limit: MAX_REFINEMENT as u64,
        });
    }
    Ok(())
}

fn edge_chords(ifs: &Ifs, e: &EdgeId, k: usize) -> Vec<Vec2> {
    let mut chords = base_side_chords(ifs, e.side, k);
    for &l in e.cell.letters().iter().rev() {
        let j = ifs.map(l).linear;
        for c in chords.iter_mut() {
            *c = j * *c;
        }
    }
    chords
}

/// `Phi` image of the edge `e` through the vertices `k` levels below it.
pub fn edge_polyline_harmonic(e: &EdgeId, k: usize) -> Result<Polyline> {
    edge_polyline(Geometry::Harmonic, e, k)
}

pub fn edge_polyline(geometry: Geometry, e: &EdgeId, k: usize) -> Result<Polyline> {
    check_refinement(k)?;
    let ifs = Ifs::for_geometry(geometry);
    let start = ifs.vertex_point(&e.cell, e.side.corners().0);
    Polyline::from_chords(start, &edge_chords(&ifs, e, k))
}

/// Length of the harmonic edge at refinement `k`; equals
/// `edge_polyline_harmonic(e, k).length()` bit for bit.
pub fn harmonic_edge_length(e: &EdgeId, k: usize) -> Result<f64> {
    check_refinement(k)?;
    Ok(pairwise_norm_sum(&edge_chords(&harmonic_ifs(), e, k)))
}

/// Euclidean edges are straight: `2^{-m}` exactly.
pub fn euclidean_edge_length(e: &EdgeId) -> f64 {
    0.5f64.powi(e.level() as i32)
}

/// Lengths of every cell edge up to `max_level`, indexed by level and then
/// `3 * word.index() + side.index()`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeLengthTable {
    pub geometry: Geometry,
    /// `None` for Euclidean lengths, which are exact.
    pub refinement: Option<usize>,
    levels: Vec<Vec<f64>>,
}

impl EdgeLengthTable {
    pub fn euclidean(max_level: usize) -> Self {
        let levels = (0..=max_level)
            .map(|m| vec![0.5f64.powi(m as i32); 3usize.pow(m as u32 + 1)])
            .collect();
        EdgeLengthTable {
            geometry: Geometry::Euclidean,
            refinement: None,
            levels,
        }
    }

    /// All harmonic edge lengths up to `max_level` at refinement `k`.
    ///
    /// Walks words by prepending letters, so the chords of `a v` are `J_a`
    /// applied to the chords of `v`; the results are identical to
    /// [`harmonic_edge_length`].
    pub fn harmonic(max_level: usize, k: usize) -> Result<Self> {
        check_refinement(k)?;
        let ifs = harmonic_ifs();
        let base: Vec<Vec<Vec2>> = Side::ALL
            .iter()
            .map(|&s| base_side_chords(&ifs, s, k))
            .collect();
        let mut levels: Vec<Vec<f64>> = (0..=max_level)
            .map(|m| vec![0.0; 3usize.pow(m as u32 + 1)])
            .collect();
        let mut scratch: Vec<Vec<Vec<Vec2>>> = vec![base.clone(); max_level];

        fn record(levels: &mut [Vec<f64>], depth: usize, index: usize, chords: &[Vec<Vec2>]) {
            for (s, side_chords) in chords.iter().enumerate() {
                levels[depth][3 * index + s] = pairwise_norm_sum(side_chords);
            }
        }

        fn visit(
            ifs: &Ifs,
            levels: &mut [Vec<f64>],
            scratch: &mut [Vec<Vec<Vec2>>],
            current: &[Vec<Vec2>],
            depth: usize,
            index: usize,
        ) {
            record(levels, depth, index, current);
            let Some((next, rest)) = scratch.split_first_mut() else {
                return;
            };
            for letter in 1..=3u8 {
                let j = ifs.map(letter).linear;
                for (dst, src) in next.iter_mut().zip(current) {
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d = j * s;
                    }
                }
                let child_index = usize::from(letter - 1) * 3usize.pow(depth as u32) + index;
                visit(ifs, levels, rest, next, depth + 1, child_index);
            }
        }

        visit(&ifs, &mut levels, &mut scratch, &base, 0, 0);
        Ok(EdgeLengthTable {
            geometry: Geometry::Harmonic,
            refinement: Some(k),
            levels,
        })
    }

    pub fn build(geometry: Geometry, max_level: usize, k: usize) -> Result<Self> {
        match geometry {
            Geometry::Euclidean => Ok(Self::euclidean(max_level)),
            Geometry::Harmonic => Self::harmonic(max_level, k),
        }
    }

    /// Table from per-level length vectors, e.g. read back from a cache.
    pub fn from_levels(
        geometry: Geometry,
        refinement: Option<usize>,
        levels: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(GasketError::InvalidArgument("length table needs level 0".into()));
        }
        for (m, lv) in levels.iter().enumerate() {
            let expected = 3usize.pow(m as u32 + 1);
            if lv.len() != expected {
                return Err(GasketError::InvalidArgument(format!(
                    "level {m} has {} lengths, expected {expected}",
                    lv.len()
                )));
            }
            if let Some(bad) = lv.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                return Err(GasketError::InvalidArgument(format!(
                    "level {m} has a non-positive length {bad}"
                )));
            }
        }
        Ok(EdgeLengthTable {
            geometry,
            refinement,
            levels,
        })
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn length(&self, e: &EdgeId) -> Option<f64> {
        self.levels
            .get(e.level())
            .map(|lv| lv[3 * e.cell.index() + e.side.index()])
    }

    /// Lengths of the level-`m` edges in enumeration order.
    pub fn level(&self, m: usize) -> Option<&[f64]> {
        self.levels.get(m).map(|v| v.as_slice())
    }
}

/// A polyline whose points carry infinite-word addresses, so that `Z` can be
/// sampled along it.
#[derive(Clone, Debug, PartialEq)]
pub struct AddressedPolyline {
    pub polyline: Polyline,
    pub addresses: Vec<PointAddress>,
}

/// The harmonic edge `e` at refinement `k` with addresses: point `t` is
/// corner `a` of the `t`-th sub-cell (the last point is corner `b` of the
/// last sub-cell).
pub fn addressed_edge_polyline(e: &EdgeId, k: usize) -> Result<AddressedPolyline> {
    let polyline = edge_polyline_harmonic(e, k)?;
    let (a, b) = e.side.corners();
    let subwords = side_subwords(e.side, k);
    let mut addresses = Vec::with_capacity(subwords.len() + 1);
    for u in &subwords {
        addresses.push(PointAddress::new(e.cell.concat(u)?, a)?);
    }
    let last = subwords.last().expect("at least one sub-cell");
    addresses.push(PointAddress::new(e.cell.concat(last)?, b)?);
    Ok(AddressedPolyline {
        polyline,
        addresses,
    })
}

/// Source of the metric matrix `Z` at an addressed point.
pub trait ZSampler {
    fn z(&self, address: &PointAddress) -> Result<Mat2>;
}

/// `Z = I`; reduces every weighted quantity to its Euclidean counterpart.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityZ;

impl ZSampler for IdentityZ {
    fn z(&self, _: &PointAddress) -> Result<Mat2> {
        Ok(Mat2::identity())
    }
}

/// `Z_depth` along the point's address.
#[derive(Clone, Copy, Debug)]
pub struct KusuokaZ {
    pub depth: usize,
}

impl ZSampler for KusuokaZ {
    fn z(&self, address: &PointAddress) -> Result<Mat2> {
        kusuoka_zm(&address.truncate(self.depth)?)
    }
}

/// `sum_t <d_t, Z_t d_t>^{1/2}` over the forward differences `d_t`, with
/// `Z_t` sampled at the start of each chord.
pub fn path_energy_integral(path: &AddressedPolyline, z: &impl ZSampler) -> Result<f64> {
    path.polyline
        .chords()
        .zip(&path.addresses)
        .map(|(d, addr)| {
            let zm = z.z(addr)?;
            Ok(d.dot(&(zm * d)).max(0.0).sqrt())
        })
        .sum()
}

/// `|Z v - v| / |v|` for the chord `v` leaving point `index`.
pub fn tangent_projection_residual(
    path: &AddressedPolyline,
    index: usize,
    z: &impl ZSampler,
) -> Result<f64> {
    let pts = path.polyline.points();
    if index + 1 >= pts.len() {
        return Err(GasketError::InvalidArgument(format!(
            "sample index {index} has no outgoing chord"
        )));
    }
    let v = pts[index + 1] - pts[index];
    let zm = z.z(&path.addresses[index])?;
    Ok((zm * v - v).norm() / v.norm())
}

/// Ambient points of the cell-edge sub-vertices, for drawing.
pub fn edge_points(ifs: &Ifs, e: &EdgeId, k: usize) -> Vec<Vec2> {
    let (a, b) = e.side.corners();
    let subwords = side_subwords(e.side, k);
    let mut pts: Vec<Vec2> = subwords
        .iter()
        .map(|u| apply_word(ifs, &e.cell.concat(u).expect("bounded"), &ifs.corner(a)))
        .collect();
    pts.push(ifs.vertex_point(&e.cell, b));
    pts
}

/// Straight Euclidean polyline of an edge (for symmetry with the harmonic case).
pub fn euclidean_edge_polyline(e: &EdgeId) -> Polyline {
    let ifs = euclid_ifs();
    let (a, b) = e.side.corners();
    Polyline::from_points(vec![ifs.vertex_point(&e.cell, a), ifs.vertex_point(&e.cell, b)])
        .expect("two points")
}
