//! Harmonic functions, the harmonic coordinate map `Phi`, the matrix
//! products `J_w`, Kusuoka's measurable Riemannian metric and the Kusuoka
//! measure.

use std::collections::BTreeMap;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{GasketError, Result};
use crate::ifs::{harmonic_ifs, m0_coords, Mat2, Vec2};
use crate::word::{Side, VertexId, Word};

/// Real values on the vertices of `V_m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexFunction {
    pub level: usize,
    values: BTreeMap<VertexId, f64>,
}

impl VertexFunction {
    pub fn new(level: usize, values: BTreeMap<VertexId, f64>) -> Self {
        VertexFunction { level, values }
    }

    /// Evaluates `f` at every vertex of `V_level`.
    pub fn from_fn(level: usize, mut f: impl FnMut(&VertexId) -> f64) -> Self {
        let values = vertices_of_level(level)
            .into_iter()
            .map(|v| {
                let x = f(&v);
                (v, x)
            })
            .collect();
        VertexFunction { level, values }
    }

    pub fn get(&self, v: &VertexId) -> Option<f64> {
        self.values.get(v).copied()
    }

    pub fn value(&self, v: &VertexId) -> Result<f64> {
        self.get(v)
            .ok_or_else(|| GasketError::VertexNotInGraph(v.to_string(), self.level))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, f64)> {
        self.values.iter().map(|(v, &x)| (v, x))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Restriction to `V_level` for `level <= self.level`.
    pub fn restrict(&self, level: usize) -> VertexFunction {
        let values = self
            .values
            .iter()
            .filter(|(v, _)| v.level() <= level)
            .map(|(v, &x)| (v.clone(), x))
            .collect();
        VertexFunction {
            level: level.min(self.level),
            values,
        }
    }
}

/// All vertices of `V_level`, sorted.
pub fn vertices_of_level(level: usize) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = Word::all_of_length(level)
        .flat_map(|w| (1..=3).map(move |c| VertexId::new(w.clone(), c).expect("corner in range")))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Values at the corners of child cell `i` given the corner values of the
/// parent: the new midpoint between corners `a` and `b` (opposite corner `c`)
/// gets `(2 u_a + 2 u_b + u_c) / 5`.
pub fn child_corner_values(parent: &[f64; 3], child: u8) -> [f64; 3] {
    let i = usize::from(child - 1);
    let mut out = [0.0; 3];
    for j in 0..3 {
        out[j] = if j == i {
            parent[i]
        } else {
            let k = 3 - i - j;
            (2.0 * parent[i] + 2.0 * parent[j] + parent[k]) / 5.0
        };
    }
    out
}

/// 3x3 matrix `A_i` with `child_corner_values(u, i) = A_i u`.
pub fn extension_matrix(child: u8) -> Matrix3<f64> {
    let mut m = Matrix3::zeros();
    for col in 0..3 {
        let mut e = [0.0; 3];
        e[col] = 1.0;
        let image = child_corner_values(&e, child);
        for row in 0..3 {
            m[(row, col)] = image[row];
        }
    }
    m
}

/// The energy-minimising extension of `boundary` (values at `p_1, p_2, p_3`)
/// to `V_level`.
pub fn harmonic_extension(boundary: [f64; 3], level: usize) -> VertexFunction {
    fn descend(
        word: &mut Vec<u8>,
        corners: [f64; 3],
        remaining: usize,
        values: &mut BTreeMap<VertexId, f64>,
    ) {
        if remaining == 0 {
            for c in 1..=3u8 {
                let w = Word::new(word.clone()).expect("level bounded by budget");
                let v = VertexId::new(w, c).expect("corner in range");
                values.entry(v).or_insert(corners[usize::from(c - 1)]);
            }
            return;
        }
        for i in 1..=3u8 {
            word.push(i);
            descend(word, child_corner_values(&corners, i), remaining - 1, values);
            word.pop();
        }
    }

    let mut values = BTreeMap::new();
    descend(&mut Vec::new(), boundary, level, &mut values);
    VertexFunction { level, values }
}

/// `(5/3)^k * sum over neighbours p ~ q in Gamma_k of (u(p) - u(q))^2`.
pub fn graph_energy(u: &VertexFunction, k: usize) -> Result<f64> {
    if k > u.level {
        return Err(GasketError::InvalidArgument(format!(
            "energy at level {k} needs a function on V_{k}, got V_{}",
            u.level
        )));
    }
    let mut sum = 0.0;
    for w in Word::all_of_length(k) {
        for side in Side::ALL {
            let (a, b) = side.corners();
            let ua = u.value(&VertexId::new(w.clone(), a)?)?;
            let ub = u.value(&VertexId::new(w.clone(), b)?)?;
            sum += (ua - ub) * (ua - ub);
        }
    }
    Ok((5.0f64 / 3.0).powi(k as i32) * sum)
}

/// Values `(h_1(v), h_2(v), h_3(v))` of the basis harmonic functions.
pub fn basis_harmonic_values(v: &VertexId) -> Vector3<f64> {
    // corner values of cell w for all three basis functions at once: A_{w_m} ... A_{w_1}
    let corners = v
        .word()
        .letters()
        .iter()
        .fold(Matrix3::identity(), |acc, &l| extension_matrix(l) * acc);
    corners.row(usize::from(v.corner() - 1)).transpose()
}

/// `Phi(v) = ((h_1, h_2, h_3)(v) - (1,1,1)/3) / sqrt 2` in `(u_1, u_2)` coordinates.
pub fn phi(v: &VertexId, level: usize) -> Result<Vec2> {
    if v.level() > level {
        return Err(GasketError::VertexNotInGraph(v.to_string(), level));
    }
    let h = basis_harmonic_values(v);
    Ok(phi_from_values(&h))
}

pub fn phi_from_values(h: &Vector3<f64>) -> Vec2 {
    let centered = h - Vector3::repeat(1.0 / 3.0);
    m0_coords(&centered) / 2f64.sqrt()
}

/// `J_w = J_{w_1} ... J_{w_m}`; the empty word gives the identity.
pub fn jw(word: &Word) -> Mat2 {
    let ifs = harmonic_ifs();
    word.letters()
        .iter()
        .fold(Mat2::identity(), |acc, &l| acc * ifs.map(l).linear)
}

/// Kusuoka's normalised Gram matrix for the cell `w`.
///
/// Computed as `J_w J_w^T / |J_w|_HS^2`, i.e. the Gram matrix of the
/// function-side product `J_{w_m} ... J_{w_1}`. Its range is the long axis of
/// the cell `H_w(K_H)`, so it converges along infinite words and agrees on
/// both addresses of a vertex.
pub fn kusuoka_zm(word: &Word) -> Result<Mat2> {
    if word.is_empty() {
        return Err(GasketError::InvalidArgument(
            "the Kusuoka matrix needs a non-empty word".into(),
        ));
    }
    normalized_gram(&jw(word)).ok_or_else(|| GasketError::Degenerate(word.to_string()))
}

fn normalized_gram(j: &Mat2) -> Option<Mat2> {
    let hs2 = j.norm_squared();
    if !(hs2 > f64::MIN_POSITIVE) || !hs2.is_finite() {
        return None;
    }
    Some(j * j.transpose() / hs2)
}

/// `nu(K_w) = (1/2) (5/3)^{|w|} |J_w|_HS^2`.
pub fn kusuoka_measure(word: &Word) -> f64 {
    measure_from_jw(&jw(word), word.len())
}

fn measure_from_jw(j: &Mat2, len: usize) -> f64 {
    0.5 * (5.0f64 / 3.0).powi(len as i32) * j.norm_squared()
}

/// Cell data for one word: `J_w`, `Z_m(w)` and `nu(K_w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KusuokaState {
    pub word: Word,
    pub jw: Mat2,
    pub zm: Mat2,
    pub nu: f64,
}

impl KusuokaState {
    pub fn new(word: &Word) -> Result<Self> {
        let j = jw(word);
        Self::from_parts(word.clone(), j)
    }

    fn from_parts(word: Word, j: Mat2) -> Result<Self> {
        let zm = normalized_gram(&j).ok_or_else(|| GasketError::Degenerate(word.to_string()))?;
        let nu = measure_from_jw(&j, word.len());
        Ok(KusuokaState {
            word,
            jw: j,
            zm,
            nu,
        })
    }

    /// State for `w i`, reusing `J_w`.
    pub fn child(&self, letter: u8) -> Result<Self> {
        let word = self.word.child(letter)?;
        let j = self.jw * harmonic_ifs().map(letter).linear;
        Self::from_parts(word, j)
    }

    /// Eigenvalues of `Z_m`, smaller first.
    pub fn z_eigenvalues(&self) -> (f64, f64) {
        sym_eigenvalues(&self.zm)
    }
}

/// States for every prefix `w_1 ... w_k`, `k = 1..=|w|`.
pub fn kusuoka_prefixes(word: &Word) -> Result<Vec<KusuokaState>> {
    let mut out: Vec<KusuokaState> = Vec::with_capacity(word.len());
    let mut state = KusuokaState::new(&Word::empty())?;
    for &l in word.letters() {
        state = state.child(l)?;
        out.push(state.clone());
    }
    Ok(out)
}

/// Eigenvalues of a symmetric 2x2 matrix, smaller first.
pub fn sym_eigenvalues(m: &Mat2) -> (f64, f64) {
    let tr = m.trace();
    let diff = m[(0, 0)] - m[(1, 1)];
    let off = 0.5 * (m[(0, 1)] + m[(1, 0)]);
    let disc = (0.25 * diff * diff + off * off).sqrt();
    (0.5 * tr - disc, 0.5 * tr + disc)
}

/// An infinite word `prefix tail tail tail ...`, the address of a point
/// `F_prefix(p_tail)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointAddress {
    pub prefix: Word,
    pub tail: u8,
}

impl PointAddress {
    pub fn new(prefix: Word, tail: u8) -> Result<Self> {
        if !(1..=3).contains(&tail) {
            return Err(GasketError::InvalidCorner(tail));
        }
        Ok(PointAddress { prefix, tail })
    }

    /// Both addresses of a vertex (one for the root corners).
    pub fn of_vertex(v: &VertexId) -> Vec<PointAddress> {
        let mut out = vec![PointAddress {
            prefix: v.word().clone(),
            tail: v.corner(),
        }];
        if let Some((w, c)) = v.alternate_address() {
            out.push(PointAddress { prefix: w, tail: c });
        }
        out
    }

    /// First `depth` letters of the infinite word.
    pub fn truncate(&self, depth: usize) -> Result<Word> {
        let mut letters: Vec<u8> = self.prefix.letters().iter().copied().take(depth).collect();
        letters.resize(depth, self.tail);
        Word::new(letters)
    }

    /// `Z_depth` along this address.
    pub fn kusuoka_z(&self, depth: usize) -> Result<Mat2> {
        kusuoka_zm(&self.truncate(depth)?)
    }
}
