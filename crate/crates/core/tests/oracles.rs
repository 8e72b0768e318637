use std::collections::HashMap;

use gasket_ncg::curves::{
    addressed_edge_polyline, harmonic_edge_length, path_energy_integral, tangent_projection_residual,
    IdentityZ,
};
use gasket_ncg::harmonic::{graph_energy, harmonic_extension, kusuoka_measure, phi, vertices_of_level, VertexFunction};
use gasket_ncg::spectral::{commutator_bound_linear, spectral_dimension, LengthSequence};
use gasket_ncg::{EdgeId, Geometry, Side, VertexId, Word};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Minimiser of the level-`m` graph energy with the given boundary values,
/// from the normal equations of the energy (a Dirichlet problem for the
/// graph Laplacian).
fn dirichlet_solve(boundary: [f64; 3], level: usize) -> HashMap<VertexId, f64> {
    let vertices = vertices_of_level(level);
    let index: HashMap<&VertexId, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let n = vertices.len();
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for w in Word::all_of_length(level) {
        for side in Side::ALL {
            let (a, b) = side.corners();
            let i = index[&VertexId::new(w.clone(), a).unwrap()];
            let j = index[&VertexId::new(w.clone(), b).unwrap()];
            lap[(i, i)] += 1.0;
            lap[(j, j)] += 1.0;
            lap[(i, j)] -= 1.0;
            lap[(j, i)] -= 1.0;
        }
    }
    let is_boundary = |v: &VertexId| v.level() == 0;
    let interior: Vec<usize> = (0..n).filter(|&i| !is_boundary(&vertices[i])).collect();
    let mut values = vec![0.0; n];
    for (i, v) in vertices.iter().enumerate() {
        if is_boundary(v) {
            values[i] = boundary[usize::from(v.corner() - 1)];
        }
    }
    let k = interior.len();
    let mut a = DMatrix::<f64>::zeros(k, k);
    let mut rhs = DVector::<f64>::zeros(k);
    for (r, &i) in interior.iter().enumerate() {
        for (c, &j) in interior.iter().enumerate() {
            a[(r, c)] = lap[(i, j)];
        }
        rhs[r] = -(0..n).filter(|&j| is_boundary(&vertices[j])).map(|j| lap[(i, j)] * values[j]).sum::<f64>();
    }
    let x = a.lu().solve(&rhs).expect("Dirichlet problem is nonsingular");
    for (r, &i) in interior.iter().enumerate() {
        values[i] = x[r];
    }
    vertices.into_iter().zip(values).collect()
}

#[test]
fn level_one_rule_matches_three_by_three_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let b = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let solved = dirichlet_solve(b, 1);
        assert_eq!(solved.len(), 6);
        let rule = harmonic_extension(b, 1);
        for (v, x) in &solved {
            assert!((rule.get(v).unwrap() - x).abs() < 1e-13, "{v}");
        }
        let mid = solved[&"1:2".parse::<VertexId>().unwrap()];
        assert!((mid - (2.0 * b[0] + 2.0 * b[1] + b[2]) / 5.0).abs() < 1e-13);
    }
}

#[test]
fn extension_is_the_energy_minimiser() {
    let b = [1.0, -0.25, 0.5];
    for level in 2..=4 {
        let solved = dirichlet_solve(b, level);
        let rule = harmonic_extension(b, level);
        for (v, x) in &solved {
            assert!((rule.get(v).unwrap() - x).abs() < 1e-12, "{v} level {level}");
        }
        // any interior perturbation raises the level energy
        let e0 = graph_energy(&rule, level).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(level as u64);
        for _ in 0..10 {
            let bumped = VertexFunction::from_fn(level, |v| {
                let x = rule.get(v).unwrap();
                if v.level() == 0 { x } else { x + rng.gen_range(-1e-3..1e-3) }
            });
            assert!(graph_energy(&bumped, level).unwrap() > e0);
        }
    }
}

#[test]
fn harmonicity_is_local() {
    let b = [0.3, -1.0, 2.0];
    let level = 5;
    let u = harmonic_extension(b, level);
    for w in ["1", "23", "312"] {
        let w: Word = w.parse().unwrap();
        let corners = [1, 2, 3].map(|c| u.get(&VertexId::new(w.clone(), c).unwrap()).unwrap());
        let local = harmonic_extension(corners, level - w.len());
        for (v, x) in local.iter() {
            for (sub, c) in std::iter::once((v.word().clone(), v.corner())).chain(v.alternate_address()) {
                let global = VertexId::new(w.concat(&sub).unwrap(), c).unwrap();
                assert_eq!(u.get(&global).unwrap(), x, "{w} {v}");
            }
        }
    }
}

#[test]
fn energy_is_constant_over_levels() {
    for b in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
        let u = harmonic_extension(b, 8);
        let energies: Vec<f64> = (0..=8).map(|k| graph_energy(&u, k).unwrap()).collect();
        assert!(energies.iter().all(|e| (e - 2.0).abs() < 1e-10), "{energies:?}");
    }
}

#[test]
fn edge_lengths_match_phi_polylines() {
    // Independent route: Phi at the subdivision vertices through the
    // corner-value matrices, then a plain sum of segment lengths.
    let cases = [("", Side::B), ("1", Side::R), ("1", Side::L), ("23", Side::B), ("312", Side::L)];
    for (cell, side) in cases {
        let cell: Word = if cell.is_empty() { Word::empty() } else { cell.parse().unwrap() };
        let e = EdgeId::new(cell.clone(), side);
        let (a, b) = side.corners();
        let k = 7;
        let n = 1usize << k;
        let mut pts = Vec::with_capacity(n + 1);
        for t in 0..n {
            let mut letters = cell.letters().to_vec();
            letters.extend((0..k).rev().map(|bit| if (t >> bit) & 1 == 1 { b } else { a }));
            let v = VertexId::new(Word::new(letters).unwrap(), a).unwrap();
            pts.push(phi(&v, v.level()).unwrap());
        }
        let end = VertexId::new(cell.clone(), b).unwrap();
        pts.push(phi(&end, end.level()).unwrap());
        let direct: f64 = pts.windows(2).map(|p| (p[1] - p[0]).norm()).sum();
        let length = harmonic_edge_length(&e, k).unwrap();
        assert!((direct - length).abs() < 1e-12 * length, "{e}: {direct} vs {length}");
    }
}

#[test]
fn kusuoka_total_mass_by_enumeration() {
    for len in 0..=8 {
        let total: f64 = Word::all_of_length(len).map(|w| kusuoka_measure(&w)).sum();
        assert!((total - 1.0).abs() < 1e-12, "length {len}: {total}");
    }
    for i in 1..=3 {
        assert!((kusuoka_measure(&Word::new(vec![i]).unwrap()) - 1.0 / 3.0).abs() < 1e-15);
    }
}

#[test]
fn dimension_of_geometric_sequences() {
    for (copies, ratio) in [(3u64, 0.5f64), (2, 0.5), (4, 0.25), (5, 0.3)] {
        let seq = LengthSequence::geometric(copies, ratio, 9).unwrap();
        let d = spectral_dimension(&seq, 1, 9).unwrap();
        let exact = (copies as f64).ln() / (1.0 / ratio).ln();
        if exact > 1.0 {
            assert!((d.estimate - exact).abs() < 1e-12, "{copies} {ratio}");
            assert!(!d.clamped);
        } else {
            assert!(d.clamped && d.estimate == 1.0, "{copies} {ratio}");
        }
    }
    let slow = LengthSequence::geometric(20, 0.5, 5).unwrap();
    assert!(spectral_dimension(&slow, 1, 5).is_err());
}

#[test]
fn linear_commutator_bounds() {
    for g in [Geometry::Euclidean, Geometry::Harmonic] {
        let zero = commutator_bound_linear(0.0, 0.0, g, 2, 6).unwrap();
        assert_eq!(zero.sup, 0.0);
        let sum = commutator_bound_linear(1.0, 1.0, g, 2, 6).unwrap();
        assert!(sum.sup <= 2.0 + 1e-9 && sum.sup > 1.0, "{g}: {}", sum.sup);
    }
    let e = commutator_bound_linear(1.0, 0.0, Geometry::Euclidean, 1, 0).unwrap();
    assert!((e.sup - 1.0).abs() < 1e-15);
}

#[test]
fn identity_metric_integrates_to_length() {
    let e = EdgeId::new(Word::empty(), Side::B);
    let path = addressed_edge_polyline(&e, 8).unwrap();
    let integral = path_energy_integral(&path, &IdentityZ).unwrap();
    assert!((integral - path.polyline.length()).abs() < 1e-12);
    for i in 0..path.addresses.len() - 1 {
        assert_eq!(tangent_projection_residual(&path, i, &IdentityZ).unwrap(), 0.0);
    }
}
