//! Report types written by the command-line tool, with their JSON and CSV
//! forms. JSON documents follow the schemas in `docs/schemas/`; CSV columns
//! are listed on each `write_csv`.

use serde::{Deserialize, Serialize};

use crate::cache::CacheStats;
use crate::config::OutputFormat;
use crate::error::{GasketError, Result};
use crate::graph::LengthGraph;
use crate::ifs::Geometry;
use crate::spectral::{LevelDiagnostic, SequenceKind};
use crate::validate::ValidationReport;

pub trait Report: Serialize {
    /// Name used in messages and schema file names.
    const NAME: &'static str;

    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<()>;

    fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        self.write_csv(&mut w)?;
        let bytes = w.into_inner().map_err(|e| GasketError::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| GasketError::Invariant(e.to_string()))
    }

    fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Svg => Err(GasketError::InvalidArgument(format!(
                "{} output is json or csv; svg is produced by render",
                Self::NAME
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRow {
    pub edge: String,
    pub from: String,
    pub to: String,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildReport {
    pub geometry: Geometry,
    pub level: usize,
    pub refinement: Option<usize>,
    pub vertices: usize,
    pub edges: usize,
    pub min_length: f64,
    pub max_length: f64,
    pub total_length: f64,
    pub cache: Option<CacheStats>,
    #[serde(skip)]
    pub rows: Vec<EdgeRow>,
}

impl BuildReport {
    pub fn new(graph: &LengthGraph, cache: Option<CacheStats>) -> Self {
        let rows = graph
            .edges()
            .iter()
            .map(|e| EdgeRow {
                edge: e.id.to_string(),
                from: graph.vertices()[e.ends.0].to_string(),
                to: graph.vertices()[e.ends.1].to_string(),
                length: e.length,
            })
            .collect();
        BuildReport {
            geometry: graph.geometry,
            level: graph.level,
            refinement: graph.refinement,
            vertices: graph.vertices().len(),
            edges: graph.edges().len(),
            min_length: graph.min_length(),
            max_length: graph.max_length(),
            total_length: graph.edges().iter().map(|e| e.length).sum(),
            cache,
            rows,
        }
    }
}

impl Report for BuildReport {
    const NAME: &'static str = "build";

    /// `edge,from,to,length`, one row per edge.
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<()> {
        for row in &self.rows {
            w.serialize(row)?;
        }
        if self.rows.is_empty() {
            w.write_record(["edge", "from", "to", "length"])?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenRow {
    pub lambda: f64,
    pub k: i64,
    pub level: usize,
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub geometry: Geometry,
    pub kind: SequenceKind,
    pub max_level: usize,
    pub refinement: Option<usize>,
    pub cutoff: f64,
    pub count: usize,
    pub counting_function: u64,
    pub min_abs: Option<f64>,
    /// Sorted ascending by `lambda`.
    pub eigenvalues: Vec<EigenRow>,
}

impl Report for SpectrumReport {
    const NAME: &'static str = "spectrum";

    /// `lambda,k,level,position`, ascending in `lambda`.
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<()> {
        w.write_record(["lambda", "k", "level", "position"])?;
        for e in &self.eigenvalues {
            w.serialize((e.lambda, e.k, e.level, e.position))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValue {
    pub value: f64,
    /// False for a heuristic value that the estimate is only compared with.
    pub exact: bool,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecdimReport {
    pub geometry: Geometry,
    pub kind: SequenceKind,
    pub first_level: usize,
    pub last_level: usize,
    pub refinement: Option<usize>,
    pub estimate: f64,
    pub clamped: bool,
    pub window: (usize, usize),
    pub spread_last3: Option<f64>,
    pub reference: ReferenceValue,
    pub difference_from_reference: f64,
    pub per_level: Vec<LevelDiagnostic>,
}

impl Report for SpecdimReport {
    const NAME: &'static str = "specdim";

    /// `level,root,log_partition_sum`; `root` is empty when not bracketed.
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<()> {
        w.write_record(["level", "root", "log_partition_sum"])?;
        for d in &self.per_level {
            let root = d.root.map(|r| r.to_string()).unwrap_or_default();
            w.write_record([d.level.to_string(), root, d.log_partition_sum.to_string()])?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathStep {
    pub edge: String,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicReport {
    pub geometry: Geometry,
    pub level: usize,
    pub refinement: Option<usize>,
    pub from: String,
    pub to: String,
    pub length: f64,
    pub edges: Vec<PathStep>,
}

impl Report for GeodesicReport {
    const NAME: &'static str = "geodesic";

    /// `step,edge,length,cumulative`.
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<()> {
        w.write_record(["step", "edge", "length", "cumulative"])?;
        let mut total = 0.0;
        for (i, s) in self.edges.iter().enumerate() {
            total += s.length;
            w.serialize((i, &s.edge, s.length, total))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnesReport {
    pub geometry: Geometry,
    pub level: usize,
    pub refinement: Option<usize>,
    pub from: String,
    pub to: String,
    pub connes: f64,
    pub geodesic: f64,
    pub difference: f64,
    /// Generic LP value, on graphs small enough for it.
    pub oracle: Option<f64>,
}

impl Report for ConnesReport {
    const NAME: &'static str = "connes";

    /// `geometry,level,from,to,connes,geodesic,difference,oracle`.
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<()> {
        w.write_record(["geometry", "level", "from", "to", "connes", "geodesic", "difference", "oracle"])?;
        w.write_record([
            self.geometry.to_string(),
            self.level.to_string(),
            self.from.clone(),
            self.to.clone(),
            self.connes.to_string(),
            self.geodesic.to_string(),
            self.difference.to_string(),
            self.oracle.map(|o| o.to_string()).unwrap_or_default(),
        ])?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellMeasure {
    pub word: String,
    pub measure: f64,
    /// Row-major `Z_m(w)`.
    pub z: [f64; 4],
    /// Eigenvalues of `Z_m(w)`, smaller first.
    pub z_eigenvalues: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KusuokaReport {
    pub cell: CellMeasure,
    pub children: Vec<CellMeasure>,
    pub additivity_residual: Option<f64>,
}

impl Report for KusuokaReport {
    const NAME: &'static str = "kusuoka";

    /// `word,measure,z11,z12,z21,z22,lambda_min,lambda_max`; the cell, then its children.
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<()> {
        w.write_record(["word", "measure", "z11", "z12", "z21", "z22", "lambda_min", "lambda_max"])?;
        for c in std::iter::once(&self.cell).chain(&self.children) {
            w.serialize((
                &c.word,
                c.measure,
                c.z[0],
                c.z[1],
                c.z[2],
                c.z[3],
                c.z_eigenvalues[0],
                c.z_eigenvalues[1],
            ))?;
        }
        Ok(())
    }
}

impl Report for ValidationReport {
    const NAME: &'static str = "validate";

    /// `name,passed,value,tolerance,detail`.
    fn write_csv(&self, w: &mut csv::Writer<Vec<u8>>) -> Result<()> {
        w.write_record(["name", "passed", "value", "tolerance", "detail"])?;
        for c in &self.checks {
            w.serialize((&c.name, c.passed, c.value, c.tolerance, &c.detail))?;
        }
        Ok(())
    }
}
