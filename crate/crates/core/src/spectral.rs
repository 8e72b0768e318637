//! Dirac spectra of the curve, cell and direct-sum triples, the eigenvalue
//! counting function, zeta partial sums and spectral-dimension estimates.
//!
//! Every triple here is a countable sum of translated interval or circle
//! triples, one per length `alpha > 0`, whose Dirac operator has the
//! eigenvalues `(2k + 1) pi / (2 alpha)` for `k` in `Z`. A spectrum is
//! therefore fully described by its length sequence, truncated at a maximum
//! level, together with a cutoff on `|lambda|`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curves::{edge_polyline, EdgeLengthTable};
use crate::error::{GasketError, Result};
use crate::ifs::Geometry;
use crate::word::{EdgeId, Side, Word};

/// Default limit on materialised eigenvalues.
pub const DEFAULT_MAX_EIGENVALUES: u64 = 20_000_000;

/// Reference value for the geodesic Hausdorff dimension of the harmonic
/// gasket, reported next to the harmonic estimate; not an exact value.
pub const HARMONIC_GASKET_REFERENCE_DIMENSION: f64 = 1.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    /// One curve triple per cell edge.
    Edge,
    /// One circle triple per cell boundary.
    Cell,
    /// Edge and cell triples side by side.
    Sum,
    /// `N^m` lengths `r^m` at level `m`; a closed-form test case.
    Geometric,
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SequenceKind::Edge => "edge",
            SequenceKind::Cell => "cell",
            SequenceKind::Sum => "sum",
            SequenceKind::Geometric => "geometric",
        })
    }
}

impl FromStr for SequenceKind {
    type Err = GasketError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge" => Ok(SequenceKind::Edge),
            "cell" => Ok(SequenceKind::Cell),
            "sum" => Ok(SequenceKind::Sum),
            "geometric" => Ok(SequenceKind::Geometric),
            _ => Err(GasketError::Parse {
                what: "triple kind",
                input: s.to_string(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SourceId {
    Edge(EdgeId),
    Cell(Word),
    Toy { level: usize, index: u64 },
}

impl fmt::Display for SourceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceId::Edge(e) => write!(f, "edge {e}"),
            SourceId::Cell(w) => write!(f, "cell {w}"),
            SourceId::Toy { level, index } => write!(f, "toy {level}.{index}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthSource {
    pub id: SourceId,
    pub alpha: f64,
}

/// The lengths of one level, in enumeration order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelLengths {
    pub level: usize,
    pub sources: Vec<LengthSource>,
}

impl LevelLengths {
    /// `ln sum alpha^p`, shifted by the largest term to stay finite.
    pub fn log_partition_sum(&self, p: f64) -> f64 {
        LogLengths::new(self).log_partition_sum(p)
    }
}

/// Distinct `ln alpha` values of one level with their multiplicities.
struct LogLengths(Vec<(f64, f64)>);

impl LogLengths {
    fn new(level: &LevelLengths) -> Self {
        let mut logs: Vec<f64> = level.sources.iter().map(|s| s.alpha.ln()).collect();
        logs.sort_by(|a, b| b.total_cmp(a));
        let mut out: Vec<(f64, f64)> = Vec::new();
        for l in logs {
            match out.last_mut() {
                Some((v, n)) if v.to_bits() == l.to_bits() => *n += 1.0,
                _ => out.push((l, 1.0)),
            }
        }
        LogLengths(out)
    }

    fn log_partition_sum(&self, p: f64) -> f64 {
        // sorted descending, so the first term is the largest for p > 0
        let max = self
            .0
            .iter()
            .map(|&(l, _)| p * l)
            .fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return max;
        }
        max + self.0.iter().map(|&(l, n)| n * (p * l - max).exp()).sum::<f64>().ln()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthSequence {
    pub geometry: Option<Geometry>,
    pub kind: SequenceKind,
    /// Polyline refinement behind the lengths, when they are approximate.
    pub refinement: Option<usize>,
    levels: Vec<LevelLengths>,
}

impl LengthSequence {
    /// Edge lengths `alpha_j` of every cell edge of level `0..=max_level`.
    pub fn edges(table: &EdgeLengthTable, max_level: usize) -> Result<Self> {
        let levels = (0..=max_level)
            .map(|m| {
                let lengths = level_of(table, m)?;
                let sources = Word::all_of_length(m)
                    .flat_map(|w| Side::ALL.map(|s| EdgeId::new(w.clone(), s)))
                    .zip(lengths)
                    .map(|(e, &alpha)| LengthSource {
                        id: SourceId::Edge(e),
                        alpha,
                    })
                    .collect();
                Ok(LevelLengths { level: m, sources })
            })
            .collect::<Result<_>>()?;
        Ok(LengthSequence {
            geometry: Some(table.geometry),
            kind: SequenceKind::Edge,
            refinement: table.refinement,
            levels,
        })
    }

    /// Cell perimeters `alpha_w = alpha_{w,l} + alpha_{w,r} + alpha_{w,b}`.
    pub fn cells(table: &EdgeLengthTable, max_level: usize) -> Result<Self> {
        let levels = (0..=max_level)
            .map(|m| {
                let lengths = level_of(table, m)?;
                let sources = Word::all_of_length(m)
                    .zip(lengths.chunks_exact(3))
                    .map(|(w, sides)| LengthSource {
                        id: SourceId::Cell(w),
                        alpha: cell_perimeter(sides),
                    })
                    .collect();
                Ok(LevelLengths { level: m, sources })
            })
            .collect::<Result<_>>()?;
        Ok(LengthSequence {
            geometry: Some(table.geometry),
            kind: SequenceKind::Cell,
            refinement: table.refinement,
            levels,
        })
    }

    /// Both sequences, level by level, first `edges` then `cells`.
    pub fn direct_sum(first: &LengthSequence, second: &LengthSequence) -> Result<Self> {
        if first.levels.len() != second.levels.len() {
            return Err(GasketError::InvalidArgument(
                "direct sum needs sequences with the same levels".into(),
            ));
        }
        let levels = first
            .levels
            .iter()
            .zip(&second.levels)
            .map(|(a, b)| LevelLengths {
                level: a.level,
                sources: a.sources.iter().chain(&b.sources).cloned().collect(),
            })
            .collect();
        Ok(LengthSequence {
            geometry: first.geometry,
            kind: SequenceKind::Sum,
            refinement: first.refinement,
            levels,
        })
    }

    /// `copies^m` lengths equal to `ratio^m` at level `m`.
    pub fn geometric(copies: u64, ratio: f64, max_level: usize) -> Result<Self> {
        if copies == 0 || !(ratio > 0.0 && ratio < 1.0) {
            return Err(GasketError::InvalidArgument(format!(
                "geometric sequence needs copies >= 1 and 0 < ratio < 1, got {copies}, {ratio}"
            )));
        }
        let total: u64 = (0..=max_level as u32).map(|m| copies.saturating_pow(m)).sum();
        if total > DEFAULT_MAX_EIGENVALUES {
            return Err(GasketError::BudgetExceeded {
                what: "lengths",
                requested: total,
                limit: DEFAULT_MAX_EIGENVALUES,
            });
        }
        let levels = (0..=max_level)
            .map(|m| LevelLengths {
                level: m,
                sources: (0..copies.pow(m as u32))
                    .map(|index| LengthSource {
                        id: SourceId::Toy { level: m, index },
                        alpha: ratio.powi(m as i32),
                    })
                    .collect(),
            })
            .collect();
        Ok(LengthSequence {
            geometry: None,
            kind: SequenceKind::Geometric,
            refinement: None,
            levels,
        })
    }

    /// Convenience constructor for the gasket sequences.
    pub fn for_geometry(
        geometry: Geometry,
        kind: SequenceKind,
        max_level: usize,
        refinement: usize,
    ) -> Result<Self> {
        let table = EdgeLengthTable::build(geometry, max_level, refinement)?;
        match kind {
            SequenceKind::Edge => Self::edges(&table, max_level),
            SequenceKind::Cell => Self::cells(&table, max_level),
            SequenceKind::Sum => {
                Self::direct_sum(&Self::edges(&table, max_level)?, &Self::cells(&table, max_level)?)
            }
            SequenceKind::Geometric => Err(GasketError::InvalidArgument(
                "geometric sequences are built with LengthSequence::geometric".into(),
            )),
        }
    }

    pub fn levels(&self) -> &[LevelLengths] {
        &self.levels
    }

    pub fn level(&self, m: usize) -> Option<&LevelLengths> {
        self.levels.iter().find(|l| l.level == m)
    }

    pub fn max_level(&self) -> usize {
        self.levels.last().map_or(0, |l| l.level)
    }

    pub fn sources(&self) -> impl Iterator<Item = &LengthSource> {
        self.levels.iter().flat_map(|l| &l.sources)
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(|l| l.sources.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_alpha(&self) -> f64 {
        self.sources().map(|s| s.alpha).fold(0.0, f64::max)
    }
}

fn level_of(table: &EdgeLengthTable, m: usize) -> Result<&[f64]> {
    table.level(m).ok_or_else(|| {
        GasketError::InvalidArgument(format!(
            "length table stops at level {}, level {m} requested",
            table.max_level()
        ))
    })
}

/// Perimeter from side lengths in `l, r, b` order.
pub fn cell_perimeter(sides: &[f64]) -> f64 {
    sides[0] + sides[1] + sides[2]
}

/// `(2k + 1) pi / (2 alpha)`.
pub fn dirac_eigenvalue(alpha: f64, k: i64) -> f64 {
    (2 * k + 1) as f64 * PI / (2.0 * alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub lambda: f64,
    pub k: i64,
    /// Level of the source in the length sequence.
    pub level: usize,
    /// Position of the source within its level.
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiracSpectrum {
    pub cutoff: f64,
    pub max_level: usize,
    pub kind: SequenceKind,
    pub eigenvalues: Vec<Eigenvalue>,
}

impl DiracSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `sum |lambda|^{-p}` over the materialised eigenvalues.
    pub fn zeta(&self, p: f64) -> f64 {
        self.eigenvalues.iter().map(|e| e.lambda.abs().powf(-p)).sum()
    }

    pub fn min_abs(&self) -> Option<f64> {
        self.eigenvalues
            .iter()
            .map(|e| e.lambda.abs())
            .min_by(|a, b| a.total_cmp(b))
    }

    /// Eigenvalues sorted ascending.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.eigenvalues.iter().map(|e| e.lambda).collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }
}

/// Number of `k` in `Z` with `|(2k+1) pi / (2 alpha)| <= cutoff`: the odd
/// integers in `[-X, X]` with `X = 2 alpha cutoff / pi`.
pub fn source_count(alpha: f64, cutoff: f64) -> u64 {
    let x = 2.0 * alpha * cutoff / PI;
    if x < 1.0 {
        return 0;
    }
    2 * ((x + 1.0) / 2.0).floor() as u64
}

/// `|{lambda : |lambda| <= cutoff}|` from the per-source closed form.
pub fn counting_function(seq: &LengthSequence, cutoff: f64) -> u64 {
    seq.sources().map(|s| source_count(s.alpha, cutoff)).sum()
}

/// Every eigenvalue with `|lambda| <= cutoff`, tagged by source and `k`.
pub fn eigenvalues(seq: &LengthSequence, cutoff: f64) -> Result<DiracSpectrum> {
    eigenvalues_with_limit(seq, cutoff, DEFAULT_MAX_EIGENVALUES)
}

pub fn eigenvalues_with_limit(seq: &LengthSequence, cutoff: f64, limit: u64) -> Result<DiracSpectrum> {
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(GasketError::InvalidArgument(format!("cutoff must be positive, got {cutoff}")));
    }
    let expected = counting_function(seq, cutoff);
    if expected > limit {
        return Err(GasketError::BudgetExceeded {
            what: "eigenvalues",
            requested: expected,
            limit,
        });
    }
    let mut out = Vec::with_capacity(expected as usize);
    for level in seq.levels() {
        for (position, s) in level.sources.iter().enumerate() {
            let mut k = 0i64;
            loop {
                let lambda = dirac_eigenvalue(s.alpha, k);
                if lambda > cutoff {
                    break;
                }
                let tag = |k, lambda| Eigenvalue {
                    lambda,
                    k,
                    level: level.level,
                    position,
                };
                out.push(tag(k, lambda));
                out.push(tag(-k - 1, dirac_eigenvalue(s.alpha, -k - 1)));
                k += 1;
            }
        }
    }
    Ok(DiracSpectrum {
        cutoff,
        max_level: seq.max_level(),
        kind: seq.kind,
        eigenvalues: out,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaPartial {
    pub p: f64,
    pub cutoff: f64,
    pub max_level: usize,
    pub terms: usize,
    pub value: f64,
}

/// `sum |lambda|^{-p}` over the spectrum truncated at `cutoff`.
pub fn zeta_partial(seq: &LengthSequence, p: f64, cutoff: f64) -> Result<ZetaPartial> {
    if !(p > 0.0) {
        return Err(GasketError::InvalidArgument(format!("zeta exponent must be positive, got {p}")));
    }
    let spectrum = eigenvalues(seq, cutoff)?;
    Ok(ZetaPartial {
        p,
        cutoff,
        max_level: seq.max_level(),
        terms: spectrum.len(),
        value: spectrum.zeta(p),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDiagnostic {
    /// Growth from level `level` to `level + 1`.
    pub level: usize,
    /// Root of this single growth rate, when bracketed in `(1, 4]`.
    pub root: Option<f64>,
    /// `ln S_level(p)` at the final estimate.
    pub log_partition_sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub estimate: f64,
    /// True when the critical exponent fell at or below 1 and was raised to 1.
    pub clamped: bool,
    pub first_level: usize,
    pub last_level: usize,
    /// Growth rates averaged over levels `window.0 .. window.1`.
    pub window: (usize, usize),
    pub per_level: Vec<LevelDiagnostic>,
    /// `max - min` of the last three per-level roots.
    pub spread_last3: Option<f64>,
}

const BRACKET: (f64, f64) = (1.0, 4.0);

fn bisect(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Critical exponent of the per-level partition sums `S_m(p) = sum alpha^p`.
///
/// The growth rate `g_m(p) = ln(S_{m+1}(p) / S_m(p))` is averaged over the
/// last half of the level range and its zero is found by bisection on
/// `(1, 4]`. A zero at or below 1 is reported as 1.
pub fn spectral_dimension(seq: &LengthSequence, first: usize, last: usize) -> Result<DimensionEstimate> {
    if last < first + 2 {
        return Err(GasketError::InvalidArgument(format!(
            "need at least three levels, got {first}..{last}"
        )));
    }
    let levels: Vec<(usize, LogLengths)> = (first..=last)
        .map(|m| {
            seq.level(m)
                .map(|lv| (m, LogLengths::new(lv)))
                .ok_or_else(|| GasketError::InvalidArgument(format!("sequence has no level {m}")))
        })
        .collect::<Result<_>>()?;

    let growth = |i: usize, p: f64| levels[i + 1].1.log_partition_sum(p) - levels[i].1.log_partition_sum(p);
    let n = levels.len() - 1;
    let window_start = n / 2;
    let averaged = |p: f64| (window_start..n).map(|i| growth(i, p)).sum::<f64>() / (n - window_start) as f64;

    let (lo, hi) = BRACKET;
    let (at_lo, at_hi) = (averaged(lo), averaged(hi));
    if at_hi > 0.0 || !at_hi.is_finite() || !at_lo.is_finite() {
        return Err(GasketError::NonConvergence(format!(
            "growth rate does not change sign on ({lo}, {hi}]: {at_lo} .. {at_hi}"
        )));
    }
    let (estimate, clamped) = if at_lo <= 0.0 {
        (lo, true)
    } else {
        (bisect(averaged, lo, hi), false)
    };

    let per_level: Vec<LevelDiagnostic> = (0..n)
        .map(|i| {
            let g = |p| growth(i, p);
            let root = (g(lo) > 0.0 && g(hi) <= 0.0).then(|| bisect(g, lo, hi));
            LevelDiagnostic {
                level: levels[i].0,
                root,
                log_partition_sum: levels[i].1.log_partition_sum(estimate),
            }
        })
        .collect();
    let tail: Vec<f64> = per_level.iter().rev().take(3).filter_map(|d| d.root).collect();
    let spread_last3 = (tail.len() == 3).then(|| {
        let max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = tail.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    });

    Ok(DimensionEstimate {
        estimate,
        clamped,
        first_level: first,
        last_level: last,
        window: (first + window_start, last),
        per_level,
        spread_last3,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutatorEstimate {
    /// `sup |d(f o r)/d tau|` over all chords of all edges.
    pub sup: f64,
    /// `|a| + |b|`.
    pub bound: f64,
}

/// Largest arclength derivative of `f(x, y) = a x + b y` along the level-`m`
/// edge curves, i.e. the largest tangential component of `(a, b)`.
pub fn commutator_bound_linear(
    a: f64,
    b: f64,
    geometry: Geometry,
    level: usize,
    refinement: usize,
) -> Result<CommutatorEstimate> {
    let k = match geometry {
        Geometry::Euclidean => 0,
        Geometry::Harmonic => refinement,
    };
    let gradient = nalgebra::Vector2::new(a, b);
    let mut sup: f64 = 0.0;
    for w in Word::all_of_length(level) {
        for side in Side::ALL {
            let poly = edge_polyline(geometry, &EdgeId::new(w.clone(), side), k)?;
            for chord in poly.chords() {
                let len = chord.norm();
                if len > 0.0 {
                    sup = sup.max((gradient.dot(&chord) / len).abs());
                }
            }
        }
    }
    Ok(CommutatorEstimate {
        sup,
        bound: a.abs() + b.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(alpha: f64) -> LengthSequence {
        LengthSequence {
            geometry: None,
            kind: SequenceKind::Geometric,
            refinement: None,
            levels: vec![LevelLengths {
                level: 0,
                sources: vec![LengthSource {
                    id: SourceId::Toy { level: 0, index: 0 },
                    alpha,
                }],
            }],
        }
    }

    #[test]
    fn unit_edge_below_ten() {
        let s = eigenvalues(&single(1.0), 10.0).unwrap();
        let v = s.sorted_values();
        let expected = [-5.0, -3.0, -1.0, 1.0, 3.0, 5.0].map(|x| x * PI / 2.0);
        assert_eq!(v.len(), 6);
        for (a, b) in v.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(counting_function(&single(1.0), 10.0), 6);
    }

    #[test]
    fn below_first_eigenvalue_is_empty() {
        let s = eigenvalues(&single(2.0), PI / 4.0 - 1e-9).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.zeta(2.0), 0.0);
        assert_eq!(counting_function(&single(2.0), 1e-12), 0);
    }

    #[test]
    fn bad_cutoff_and_budget() {
        assert!(eigenvalues(&single(1.0), 0.0).is_err());
        assert!(matches!(
            eigenvalues_with_limit(&single(1.0), 1e6, 10),
            Err(GasketError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn geometric_toy_dimension() {
        // log 4 / log 3
        let seq = LengthSequence::geometric(4, 1.0 / 3.0, 8).unwrap();
        let est = spectral_dimension(&seq, 1, 8).unwrap();
        assert!((est.estimate - 4f64.ln() / 3f64.ln()).abs() < 1e-6);
        assert!(!est.clamped);
    }

    #[test]
    fn low_exponent_is_clamped_to_one() {
        let seq = LengthSequence::geometric(2, 0.125, 6).unwrap();
        let est = spectral_dimension(&seq, 1, 6).unwrap();
        assert!(est.clamped);
        assert_eq!(est.estimate, 1.0);
    }

    #[test]
    fn no_sign_change_is_reported() {
        // critical exponent log 3000 / log 2 > 4
        let seq = LengthSequence::geometric(3000, 0.5, 2).unwrap();
        assert!(matches!(
            spectral_dimension(&seq, 0, 2),
            Err(GasketError::NonConvergence(_))
        ));
        assert!(spectral_dimension(&seq, 0, 1).is_err());
    }

    #[test]
    fn commutator_of_x_on_euclidean_gasket() {
        let est = commutator_bound_linear(1.0, 0.0, Geometry::Euclidean, 2, 0).unwrap();
        assert!((est.sup - 1.0).abs() < 1e-15);
        let zero = commutator_bound_linear(0.0, 0.0, Geometry::Harmonic, 1, 4).unwrap();
        assert_eq!(zero.sup, 0.0);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("sum".parse::<SequenceKind>().unwrap(), SequenceKind::Sum);
        assert!("circle".parse::<SequenceKind>().is_err());
    }
}
