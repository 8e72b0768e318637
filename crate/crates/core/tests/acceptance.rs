//! Acceptance run: one pass/fail line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use gasket_ncg::connes::{connes_distance, connes_distance_oracle};
use gasket_ncg::curves::{
    addressed_edge_polyline, harmonic_edge_length, path_energy_integral, tangent_projection_residual,
    EdgeLengthTable, KusuokaZ, DEFAULT_REFINEMENT,
};
use gasket_ncg::geodesic::dijkstra;
use gasket_ncg::graph::LengthGraph;
use gasket_ncg::harmonic::{kusuoka_measure, kusuoka_prefixes, sym_eigenvalues, PointAddress};
use gasket_ncg::spectral::{
    counting_function, eigenvalues, spectral_dimension, LengthSequence, SequenceKind,
    HARMONIC_GASKET_REFERENCE_DIMENSION,
};
use gasket_ncg::validate::{
    conjugacy_error, edge_additivity_residual, energy_profile, kusuoka_additivity_residual, random_word,
};
use gasket_ncg::{EdgeId, GasketError, Geometry, Result, Side, VertexId, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn both() -> [Geometry; 2] {
    [Geometry::Euclidean, Geometry::Harmonic]
}

fn euclidean_dimension() -> Result<Outcome> {
    let start = Instant::now();
    let seq = LengthSequence::for_geometry(Geometry::Euclidean, SequenceKind::Edge, 10, 0)?;
    let d = spectral_dimension(&seq, 1, 10)?;
    let elapsed = start.elapsed();
    let exact = 3f64.ln() / 2f64.ln();
    let err = (d.estimate - exact).abs();
    outcome(
        err < 1e-3 && elapsed < Duration::from_secs(1),
        format!("estimate {:.10}, |error| {err:.1e}, {elapsed:.2?}", d.estimate),
    )
}

fn connes_equals_geodesic() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    let (mut pairs, mut oracle_pairs) = (0usize, 0usize);
    let mut r = rng(2);
    for g in both() {
        let table = EdgeLengthTable::build(g, 6, DEFAULT_REFINEMENT)?;
        for m in 0..=6 {
            let graph = LengthGraph::from_table(&table, m)?;
            let n = graph.vertices().len();
            let selected: Vec<(usize, usize)> = if m <= 3 {
                (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect()
            } else {
                (0..100)
                    .map(|_| {
                        let i = r.gen_range(0..n);
                        (i, (i + r.gen_range(1..n)) % n)
                    })
                    .collect()
            };
            let mut rows: Vec<Option<Vec<f64>>> = vec![None; n];
            for &(i, j) in &selected {
                let (p, q) = (&graph.vertices()[i], &graph.vertices()[j]);
                let d = rows[i].get_or_insert_with(|| dijkstra(&graph, i))[j];
                let c = connes_distance(p, q, &graph)?;
                worst = worst.max((c - d).abs() / d);
                if m <= 2 {
                    let lp = connes_distance_oracle(p, q, &graph)?;
                    worst_oracle = worst_oracle.max((lp - d).abs() / d);
                    oracle_pairs += 1;
                }
            }
            pairs += selected.len();
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-9 && worst_oracle < 1e-9 && elapsed < Duration::from_secs(30),
        format!(
            "{pairs} pairs, max rel gap {worst:.1e}; LP oracle {oracle_pairs} pairs, max rel gap {worst_oracle:.1e}; {elapsed:.2?}"
        ),
    )
}

fn dimension_equality() -> Result<Outcome> {
    let mut gaps = Vec::new();
    let mut identity_defects = 0usize;
    for g in both() {
        let table = EdgeLengthTable::build(g, 8, DEFAULT_REFINEMENT)?;
        let edge = spectral_dimension(&LengthSequence::edges(&table, 8)?, 1, 8)?;
        let cell = spectral_dimension(&LengthSequence::cells(&table, 8)?, 1, 8)?;
        gaps.push((g, edge.estimate, cell.estimate));
        let cells = LengthSequence::cells(&table, 6)?;
        for (m, level) in cells.levels().iter().enumerate() {
            for (w, src) in Word::all_of_length(m).zip(&level.sources) {
                let sum: f64 = Side::ALL
                    .iter()
                    .map(|&s| table.length(&EdgeId::new(w.clone(), s)).expect("in table"))
                    .sum();
                identity_defects += usize::from(src.alpha != sum);
            }
        }
    }
    let ok = gaps.iter().all(|(_, e, c)| (e - c).abs() < 1e-2) && identity_defects == 0;
    let text: Vec<String> = gaps
        .iter()
        .map(|(g, e, c)| format!("{g} edge {e:.5} cell {c:.5}"))
        .collect();
    outcome(ok, format!("{}; perimeter identity defects {identity_defects}", text.join(", ")))
}

fn kusuoka_measure_check() -> Result<Outcome> {
    let start = Instant::now();
    let residual = kusuoka_additivity_residual(9)?;
    let root = kusuoka_measure(&Word::empty());
    let firsts: Vec<f64> = (1..=3).map(|i| kusuoka_measure(&Word::new(vec![i]).expect("letter"))).collect();
    let elapsed = start.elapsed();
    let ok = residual < 1e-12
        && (root - 1.0).abs() < 1e-15
        && firsts.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15)
        && elapsed < Duration::from_secs(5);
    outcome(
        ok,
        format!("residual {residual:.1e} over |w| <= 8, nu(root) {root}, nu(K_i) {firsts:.15?}, {elapsed:.2?}"),
    )
}

fn z_convergence() -> Result<Outcome> {
    let mut r = rng(5);
    let mut worst_trace: f64 = 0.0;
    let mut decreased = 0;
    for _ in 0..100 {
        let states = kusuoka_prefixes(&random_word(&mut r, 20))?;
        for s in &states {
            worst_trace = worst_trace.max((s.zm.trace() - 1.0).abs());
        }
        let small = |depth: usize| sym_eigenvalues(&states[depth - 1].zm).0;
        decreased += usize::from(small(20) < small(5));
    }
    let mut worst_gap: f64 = 0.0;
    let mut sampled = 0;
    while sampled < 20 {
        let len = r.gen_range(1..=6);
        let v = VertexId::new(random_word(&mut r, len), r.gen_range(1..=3))?;
        let addresses = PointAddress::of_vertex(&v);
        if addresses.len() != 2 {
            continue;
        }
        let (a, b) = (addresses[0].kusuoka_z(20)?, addresses[1].kusuoka_z(20)?);
        worst_gap = worst_gap.max((a - b).norm());
        sampled += 1;
    }
    outcome(
        worst_trace < 1e-12 && decreased >= 95 && worst_gap < 1e-8,
        format!("trace error {worst_trace:.1e}; smaller eigenvalue decreased 5 -> 20 in {decreased}/100; address gap {worst_gap:.1e} over 20 vertices"),
    )
}

fn conjugacy() -> Result<Outcome> {
    let err = conjugacy_error(8)?;
    outcome(err < 1e-10, format!("max vertex error {err:.1e} over |w| <= 8"))
}

fn energy() -> Result<Outcome> {
    let mut drift: f64 = 0.0;
    let mut unit_boundary: f64 = 0.0;
    for b in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
        let e = energy_profile(b, 8)?;
        drift = drift.max(e.iter().map(|x| (x - e[0]).abs()).fold(0.0, f64::max));
        if b[0] == 1.0 {
            unit_boundary = e.iter().map(|x| (x - 2.0).abs()).fold(0.0, f64::max);
        }
    }
    outcome(
        drift < 1e-10 && unit_boundary < 1e-10,
        format!("max drift over levels 0..8 {drift:.1e}; |E - 2| for (1,0,0) {unit_boundary:.1e}"),
    )
}

fn harmonic_edge_lengths() -> Result<Outcome> {
    let mut edges = 0;
    let mut non_increasing = 0;
    let mut last_diff: f64 = 0.0;
    for m in 0..=2 {
        for w in Word::all_of_length(m) {
            for side in Side::ALL {
                let e = EdgeId::new(w.clone(), side);
                let lengths: Vec<f64> = (2..=12).map(|k| harmonic_edge_length(&e, k)).collect::<Result<_>>()?;
                non_increasing += lengths.windows(2).filter(|p| p[1] <= p[0]).count();
                last_diff = last_diff.max(lengths[10] - lengths[9]);
                edges += 1;
            }
        }
    }
    let additivity = edge_additivity_residual(2, 12)?;
    outcome(
        non_increasing == 0 && last_diff < 1e-4 && additivity == 0.0,
        format!("{edges} edges strictly increasing k = 2..12 (violations {non_increasing}); max final step {last_diff:.1e}; additivity residual {additivity:e}"),
    )
}

fn spectrum_structure() -> Result<Outcome> {
    let mut r = rng(9);
    let mut defects = 0usize;
    let kinds = [SequenceKind::Edge, SequenceKind::Cell, SequenceKind::Sum];
    for _ in 0..20 {
        let g = both()[r.gen_range(0..2)];
        let kind = kinds[r.gen_range(0..3)];
        let level = r.gen_range(0..=5);
        let cutoff = r.gen_range(1.0..300.0);
        let seq = LengthSequence::for_geometry(g, kind, level, 8)?;
        let spectrum = eigenvalues(&seq, cutoff)?;
        defects += usize::from(spectrum.len() as u64 != counting_function(&seq, cutoff));
        let mut pos: Vec<u64> = spectrum.eigenvalues.iter().filter(|e| e.lambda > 0.0).map(|e| e.lambda.to_bits()).collect();
        let mut neg: Vec<u64> = spectrum.eigenvalues.iter().filter(|e| e.lambda < 0.0).map(|e| (-e.lambda).to_bits()).collect();
        pos.sort_unstable();
        neg.sort_unstable();
        defects += usize::from(pos != neg);
        if let Some(min) = spectrum.min_abs() {
            defects += usize::from(min != PI / (2.0 * seq.max_alpha()));
        }
    }
    let mut union_defects = 0usize;
    for g in both() {
        let table = EdgeLengthTable::build(g, 4, 8)?;
        let (e, c) = (LengthSequence::edges(&table, 4)?, LengthSequence::cells(&table, 4)?);
        let sum = LengthSequence::direct_sum(&e, &c)?;
        let bits = |s: &LengthSequence| -> Result<Vec<u64>> {
            let mut v: Vec<u64> = eigenvalues(s, 120.0)?.eigenvalues.iter().map(|x| x.lambda.to_bits()).collect();
            v.sort_unstable();
            Ok(v)
        };
        let mut union = bits(&e)?;
        union.extend(bits(&c)?);
        union.sort_unstable();
        union_defects += usize::from(bits(&sum)? != union);
    }
    outcome(
        defects == 0 && union_defects == 0,
        format!("20 seeded cases, {defects} symmetry/gap/count defects; direct-sum union defects {union_defects}"),
    )
}

fn tangent_in_z() -> Result<Outcome> {
    let edge = EdgeId::new(Word::empty(), Side::B);
    let path = addressed_edge_polyline(&edge, 12)?;
    let mut r = rng(10);
    let chords = path.polyline.points().len() - 1;
    let mut improved = 0;
    for _ in 0..50 {
        let i = r.gen_range(0..chords);
        let shallow = tangent_projection_residual(&path, i, &KusuokaZ { depth: 5 })?;
        let deep = tangent_projection_residual(&path, i, &KusuokaZ { depth: 20 })?;
        improved += usize::from(deep < shallow);
    }
    let integral = path_energy_integral(&path, &KusuokaZ { depth: 20 })?;
    let length = path.polyline.length();
    let rel = (integral - length).abs() / length;
    outcome(
        improved >= 45 && rel < 0.02,
        format!("depth-20 residual below depth-5 at {improved}/50 points; integral {integral:.6} vs length {length:.6} (rel {rel:.2e})"),
    )
}

fn harmonic_dimension() -> Result<Outcome> {
    let seq = LengthSequence::for_geometry(Geometry::Harmonic, SequenceKind::Edge, 8, DEFAULT_REFINEMENT)?;
    let d = spectral_dimension(&seq, 1, 8)?;
    let spread = d.spread_last3.ok_or_else(|| GasketError::NonConvergence("fewer than three bracketed levels".into()))?;
    outcome(
        !d.clamped && spread < 5e-2 && d.estimate > 1.0 && d.estimate < 2.0,
        format!(
            "estimate {:.5} (reference value ~{HARMONIC_GASKET_REFERENCE_DIMENSION}, not asserted), spread of last 3 roots {spread:.1e}",
            d.estimate
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome>); 11] = [
        ("euclidean spectral dimension", euclidean_dimension),
        ("spectral distance equals geodesic distance", connes_equals_geodesic),
        ("edge and cell dimensions agree", dimension_equality),
        ("kusuoka measure", kusuoka_measure_check),
        ("kusuoka matrix convergence", z_convergence),
        ("harmonic conjugacy", conjugacy),
        ("energy conservation", energy),
        ("harmonic edge lengths", harmonic_edge_lengths),
        ("spectrum structure", spectrum_structure),
        ("tangent lies in the range of Z", tangent_in_z),
        ("harmonic spectral dimension", harmonic_dimension),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = match run() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!passed);
        println!(
            "criterion {:>2} {} {name}: {detail} [{:.2?}]",
            i + 1,
            if passed { "PASS" } else { "FAIL" },
            start.elapsed()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
