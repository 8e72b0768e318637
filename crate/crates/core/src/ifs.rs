//! Contraction systems for the Euclidean gasket `K` and the harmonic gasket `K_H`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{GasketError, Result};
use crate::word::Word;

pub type Vec2 = Vector2<f64>;
pub type Mat2 = Matrix2<f64>;

/// Which realisation of the gasket a computation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Euclidean,
    Harmonic,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometry::Euclidean => "euclidean",
            Geometry::Harmonic => "harmonic",
        })
    }
}

impl FromStr for Geometry {
    type Err = GasketError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Geometry::Euclidean),
            "harmonic" => Ok(Geometry::Harmonic),
            _ => Err(GasketError::Parse {
                what: "geometry",
                input: s.to_string(),
            }),
        }
    }
}

/// `x -> linear * x + offset`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub linear: Mat2,
    pub offset: Vec2,
}

impl AffineMap {
    /// The map `x -> linear (x - fixed) + fixed`.
    pub fn with_fixed_point(linear: Mat2, fixed: Vec2) -> Self {
        AffineMap {
            linear,
            offset: fixed - linear * fixed,
        }
    }

    pub fn apply(&self, x: &Vec2) -> Vec2 {
        self.linear * x + self.offset
    }

    /// `self o other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            linear: self.linear * other.linear,
            offset: self.linear * other.offset + self.offset,
        }
    }
}

/// Three contractions together with the boundary points they fix.
#[derive(Clone, Debug)]
pub struct Ifs {
    pub geometry: Geometry,
    pub maps: [AffineMap; 3],
    pub corners: [Vec2; 3],
}

impl Ifs {
    pub fn for_geometry(geometry: Geometry) -> Ifs {
        match geometry {
            Geometry::Euclidean => euclid_ifs(),
            Geometry::Harmonic => harmonic_ifs(),
        }
    }

    pub fn map(&self, letter: u8) -> &AffineMap {
        &self.maps[usize::from(letter - 1)]
    }

    pub fn corner(&self, corner: u8) -> Vec2 {
        self.corners[usize::from(corner - 1)]
    }

    /// `F_w(p_c)` (or `H_w(q_c)`).
    pub fn vertex_point(&self, word: &Word, corner: u8) -> Vec2 {
        apply_word(self, word, &self.corner(corner))
    }
}

/// Corners of the unit-side base triangle.
pub fn euclid_corners() -> [Vec2; 3] {
    [
        Vec2::new(0.0, 0.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(0.5, 3f64.sqrt() / 2.0),
    ]
}

/// `F_i x = (x - p_i)/2 + p_i`.
pub fn euclid_ifs() -> Ifs {
    let corners = euclid_corners();
    let half = Mat2::identity() * 0.5;
    Ifs {
        geometry: Geometry::Euclidean,
        maps: corners.map(|p| AffineMap::with_fixed_point(half, p)),
        corners,
    }
}

/// Orthonormal basis `u_1 = (1,-1,0)/sqrt 2`, `u_2 = (1,1,-2)/sqrt 6` of the
/// plane `M_0 = {x + y + z = 0}`.
pub fn m0_basis() -> [Vector3<f64>; 2] {
    [
        Vector3::new(1.0, -1.0, 0.0) / 2f64.sqrt(),
        Vector3::new(1.0, 1.0, -2.0) / 6f64.sqrt(),
    ]
}

/// Coordinates in `(u_1, u_2)` of the orthogonal projection of `x` onto `M_0`.
pub fn m0_coords(x: &Vector3<f64>) -> Vec2 {
    let [u1, u2] = m0_basis();
    Vec2::new(u1.dot(x), u2.dot(x))
}

/// `q_i = P(e_i) / sqrt 2`.
pub fn harmonic_corners() -> [Vec2; 3] {
    [0, 1, 2].map(|i| {
        let mut e = Vector3::zeros();
        e[i] = 1.0;
        m0_coords(&e) / 2f64.sqrt()
    })
}

/// The symmetric map `J_i` with `J_i q_i = (3/5) q_i` and `J_i f_i = (1/5) f_i`,
/// where `f_i` is `q_i / |q_i|` rotated by +90 degrees.
pub fn harmonic_linear(corner: &Vec2) -> Mat2 {
    let e = corner.normalize();
    let f = Vec2::new(-e.y, e.x);
    e * e.transpose() * 0.6 + f * f.transpose() * 0.2
}

/// `H_i(x) = J_i (x - q_i) + q_i`.
pub fn harmonic_ifs() -> Ifs {
    let corners = harmonic_corners();
    Ifs {
        geometry: Geometry::Harmonic,
        maps: corners.map(|q| AffineMap::with_fixed_point(harmonic_linear(&q), q)),
        corners,
    }
}

/// `(map_{w_1} o ... o map_{w_m})(x)`, innermost letter first.
pub fn apply_word(ifs: &Ifs, word: &Word, x: &Vec2) -> Vec2 {
    word.letters()
        .iter()
        .rev()
        .fold(*x, |acc, &l| ifs.map(l).apply(&acc))
}

/// Linear part of [`apply_word`] applied to a displacement vector.
pub fn apply_word_linear(ifs: &Ifs, word: &Word, v: &Vec2) -> Vec2 {
    word.letters()
        .iter()
        .rev()
        .fold(*v, |acc, &l| ifs.map(l).linear * acc)
}
