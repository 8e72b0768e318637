//! Spectral triples, Dirac spectra and geodesic metrics on the Sierpinski
//! gasket `K` and its harmonic embedding `K_H`.
//!
//! Cells are addressed by words over `{1, 2, 3}`; vertices by `word:corner`.
//! The level-`m` graph `Gamma_m` carries exact Euclidean edge lengths or
//! polyline approximations of the harmonic edge curves, and everything
//! metric (geodesics, spectral distances, spectra, dimensions) is computed
//! from those lengths.

pub mod cache;
pub mod cli;
pub mod config;
pub mod connes;
pub mod curves;
pub mod error;
pub mod export;
pub mod geodesic;
pub mod graph;
pub mod harmonic;
pub mod ifs;
pub mod render;
pub mod spectral;
pub mod validate;
pub mod word;

pub use error::{GasketError, Result};
pub use ifs::Geometry;
pub use word::{EdgeId, Side, VertexId, Word};
