//! The `gasket` command-line tool: argument parsing and one adapter per
//! subcommand. Each adapter parses, delegates to the library and serialises.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cache::{CacheStats, LengthCache};
use crate::config::{LevelRange, OutputFormat, RunConfig};
use crate::connes::{connes_distance, connes_distance_oracle, ORACLE_MAX_VERTICES};
use crate::curves::EdgeLengthTable;
use crate::error::{GasketError, Result};
use crate::export::{
    BuildReport, CellMeasure, ConnesReport, EigenRow, GeodesicReport, KusuokaReport, PathStep,
    ReferenceValue, Report, SpecdimReport, SpectrumReport,
};
use crate::geodesic::{geodesic_distance, geodesic_path};
use crate::graph::{BuildOptions, LengthGraph};
use crate::harmonic::KusuokaState;
use crate::ifs::Geometry;
use crate::render::{render_side_by_side, render_svg};
use crate::spectral::{
    counting_function, eigenvalues, spectral_dimension, LengthSequence, SequenceKind,
    HARMONIC_GASKET_REFERENCE_DIMENSION,
};
use crate::validate::run_validation;
use crate::word::{VertexId, Word};

#[derive(Debug, Parser)]
#[command(name = "gasket", version, about = "Spectral triples and geodesic metrics on the Sierpinski gasket")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// euclidean or harmonic
    #[arg(long, global = true)]
    pub geometry: Option<Geometry>,
    /// Graph level m
    #[arg(long, global = true)]
    pub level: Option<usize>,
    /// Polyline refinement k for harmonic edge lengths
    #[arg(long = "refine", global = true)]
    pub refinement: Option<usize>,
    /// Dirac eigenvalue cutoff
    #[arg(long, global = true)]
    pub cutoff: Option<f64>,
    /// edge, cell or sum
    #[arg(long, global = true)]
    pub kind: Option<SequenceKind>,
    /// json, csv or svg
    #[arg(long, global = true)]
    pub format: Option<OutputFormat>,
    /// Cache directory (default: $CACHE_DIR, then .gasket-cache)
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Disable the length cache
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Seed for sampled checks
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Inclusive level range a..b
    #[arg(long, global = true)]
    pub levels: Option<LevelRange>,
    /// Start vertex, `word:corner`
    #[arg(long, global = true)]
    pub from: Option<VertexId>,
    /// End vertex, `word:corner`
    #[arg(long, global = true)]
    pub to: Option<VertexId>,
    /// JSON run configuration; flags override its fields
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write output here instead of stdout
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the level-m graph and summarise its edge lengths
    Build,
    /// Dirac eigenvalues up to the cutoff
    Spectrum,
    /// Spectral dimension estimate over --levels
    Specdim,
    /// A shortest path between --from and --to
    Geodesic,
    /// Spectral distance between --from and --to, next to the geodesic distance
    Connes,
    /// Kusuoka measure and matrix of a cell
    Kusuoka {
        /// Cell word, e.g. 123
        #[arg(long)]
        word: Word,
        /// Also report the children and the additivity residual
        #[arg(long)]
        check_additivity: bool,
    },
    /// SVG drawing of the level-m cells, with a geodesic if --from/--to are given
    Render {
        /// Draw both geometries next to each other
        #[arg(long)]
        side_by_side: bool,
    },
    /// Run the invariant suite; exits 4 if any check fails
    Validate,
    /// Print the effective configuration as JSON
    Config,
}

/// Effective configuration: defaults, then `--config`, then flags.
pub fn resolve_config(common: &CommonArgs) -> Result<RunConfig> {
    let mut c = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = common.geometry {
        c.geometry = v;
    }
    if let Some(v) = common.level {
        c.level = v;
    }
    if let Some(v) = common.refinement {
        c.refinement = v;
    }
    if let Some(v) = common.cutoff {
        c.cutoff = v;
    }
    if let Some(v) = common.kind {
        c.kind = v;
    }
    if let Some(v) = common.format {
        c.format = v;
    }
    if let Some(v) = &common.cache_dir {
        c.cache_dir = Some(v.clone());
    }
    if let Some(v) = common.seed {
        c.seed = v;
    }
    if let Some(v) = common.levels {
        c.levels = v;
    }
    c.validate()?;
    Ok(c)
}

struct Context<'a> {
    config: RunConfig,
    common: &'a CommonArgs,
}

impl Context<'_> {
    fn cache(&self) -> Option<LengthCache> {
        (!self.common.no_cache).then(|| LengthCache::new(self.config.resolved_cache_dir()))
    }

    fn table(&self, max_level: usize) -> Result<(EdgeLengthTable, Option<CacheStats>)> {
        let c = &self.config;
        let opts = BuildOptions::with_refinement(c.refinement);
        opts.check(c.geometry, max_level)?;
        match self.cache() {
            Some(cache) => {
                let (t, stats) = cache.table(c.geometry, max_level, c.refinement)?;
                Ok((t, Some(stats)))
            }
            None => Ok((EdgeLengthTable::build(c.geometry, max_level, c.refinement)?, None)),
        }
    }

    fn graph(&self) -> Result<(LengthGraph, Option<CacheStats>)> {
        let (table, stats) = self.table(self.config.level)?;
        Ok((LengthGraph::from_table(&table, self.config.level)?, stats))
    }

    fn sequence(&self, max_level: usize) -> Result<LengthSequence> {
        let (table, _) = self.table(max_level)?;
        match self.config.kind {
            SequenceKind::Edge => LengthSequence::edges(&table, max_level),
            SequenceKind::Cell => LengthSequence::cells(&table, max_level),
            SequenceKind::Sum => LengthSequence::direct_sum(
                &LengthSequence::edges(&table, max_level)?,
                &LengthSequence::cells(&table, max_level)?,
            ),
            SequenceKind::Geometric => Err(GasketError::InvalidArgument("kind must be edge, cell or sum".into())),
        }
    }

    fn endpoints(&self) -> Result<(VertexId, VertexId)> {
        match (&self.common.from, &self.common.to) {
            (Some(p), Some(q)) => Ok((p.clone(), q.clone())),
            _ => Err(GasketError::InvalidArgument("--from and --to are required".into())),
        }
    }

    fn emit(&self, report: &impl Report) -> Result<String> {
        report.render(self.config.format)
    }
}

fn cmd_build(ctx: &Context) -> Result<String> {
    let (graph, stats) = ctx.graph()?;
    ctx.emit(&BuildReport::new(&graph, stats))
}

fn cmd_spectrum(ctx: &Context) -> Result<String> {
    let c = &ctx.config;
    let seq = ctx.sequence(c.level)?;
    let spectrum = eigenvalues(&seq, c.cutoff)?;
    let mut rows: Vec<EigenRow> = spectrum
        .eigenvalues
        .iter()
        .map(|e| EigenRow {
            lambda: e.lambda,
            k: e.k,
            level: e.level,
            position: e.position,
        })
        .collect();
    rows.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.level.cmp(&b.level)).then(a.position.cmp(&b.position)));
    ctx.emit(&SpectrumReport {
        geometry: c.geometry,
        kind: c.kind,
        max_level: c.level,
        refinement: seq.refinement,
        cutoff: c.cutoff,
        count: rows.len(),
        counting_function: counting_function(&seq, c.cutoff),
        min_abs: spectrum.min_abs(),
        eigenvalues: rows,
    })
}

fn cmd_specdim(ctx: &Context) -> Result<String> {
    let c = &ctx.config;
    let seq = ctx.sequence(c.levels.last)?;
    let d = spectral_dimension(&seq, c.levels.first, c.levels.last)?;
    let reference = match c.geometry {
        Geometry::Euclidean => ReferenceValue {
            value: 3f64.ln() / 2f64.ln(),
            exact: true,
            label: "log 3 / log 2".into(),
        },
        Geometry::Harmonic => ReferenceValue {
            value: HARMONIC_GASKET_REFERENCE_DIMENSION,
            exact: false,
            label: "approximate geodesic dimension of the harmonic gasket".into(),
        },
    };
    ctx.emit(&SpecdimReport {
        geometry: c.geometry,
        kind: c.kind,
        first_level: d.first_level,
        last_level: d.last_level,
        refinement: seq.refinement,
        estimate: d.estimate,
        clamped: d.clamped,
        window: d.window,
        spread_last3: d.spread_last3,
        difference_from_reference: d.estimate - reference.value,
        reference,
        per_level: d.per_level,
    })
}

fn cmd_geodesic(ctx: &Context) -> Result<String> {
    let (p, q) = ctx.endpoints()?;
    let (graph, _) = ctx.graph()?;
    let path = geodesic_path(&p, &q, &graph)?;
    let edges = path
        .edges
        .iter()
        .map(|e| {
            let i = graph.edge_index(e)?;
            Ok(PathStep {
                edge: e.to_string(),
                length: graph.edges()[i].length,
            })
        })
        .collect::<Result<_>>()?;
    ctx.emit(&GeodesicReport {
        geometry: graph.geometry,
        level: graph.level,
        refinement: graph.refinement,
        from: p.to_string(),
        to: q.to_string(),
        length: path.length,
        edges,
    })
}

fn cmd_connes(ctx: &Context) -> Result<String> {
    let (p, q) = ctx.endpoints()?;
    let (graph, _) = ctx.graph()?;
    let connes = connes_distance(&p, &q, &graph)?;
    let geodesic = geodesic_distance(&p, &q, &graph)?;
    let oracle = if graph.vertices().len() <= ORACLE_MAX_VERTICES {
        Some(connes_distance_oracle(&p, &q, &graph)?)
    } else {
        None
    };
    ctx.emit(&ConnesReport {
        geometry: graph.geometry,
        level: graph.level,
        refinement: graph.refinement,
        from: p.to_string(),
        to: q.to_string(),
        connes,
        geodesic,
        difference: connes - geodesic,
        oracle,
    })
}

fn cell_measure(state: &KusuokaState) -> CellMeasure {
    let z = state.zm;
    let (lo, hi) = state.z_eigenvalues();
    CellMeasure {
        word: state.word.to_string(),
        measure: state.nu,
        z: [z[(0, 0)], z[(0, 1)], z[(1, 0)], z[(1, 1)]],
        z_eigenvalues: [lo, hi],
    }
}

fn cmd_kusuoka(ctx: &Context, word: &Word, check_additivity: bool) -> Result<String> {
    let state = KusuokaState::new(word)?;
    let (children, residual) = if check_additivity {
        let kids = (1..=3u8).map(|i| state.child(i)).collect::<Result<Vec<_>>>()?;
        let sum: f64 = kids.iter().map(|k| k.nu).sum();
        (kids.iter().map(cell_measure).collect(), Some((state.nu - sum).abs()))
    } else {
        (Vec::new(), None)
    };
    ctx.emit(&KusuokaReport {
        cell: cell_measure(&state),
        children,
        additivity_residual: residual,
    })
}

fn cmd_render(ctx: &Context, side_by_side: bool) -> Result<String> {
    if matches!(ctx.common.format, Some(f) if f != OutputFormat::Svg) {
        return Err(GasketError::InvalidArgument("render only writes svg".into()));
    }
    let c = &ctx.config;
    if side_by_side {
        return render_side_by_side(c.level);
    }
    let overlay = match (&ctx.common.from, &ctx.common.to) {
        (None, None) => None,
        _ => {
            let (p, q) = ctx.endpoints()?;
            let (graph, _) = ctx.graph()?;
            Some(geodesic_path(&p, &q, &graph)?)
        }
    };
    render_svg(c.geometry, c.level, overlay.as_ref())
}

/// Runs the tool on `args` (including the program name), writing the result
/// to `stdout` or `--out` and diagnostics to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let written = match &cli.common.out {
                Some(path) => std::fs::write(path, &text),
                None => stdout.write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    1
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let ctx = Context {
        config: resolve_config(&cli.common)?,
        common: &cli.common,
    };
    let text = match &cli.command {
        Command::Build => cmd_build(&ctx)?,
        Command::Spectrum => cmd_spectrum(&ctx)?,
        Command::Specdim => cmd_specdim(&ctx)?,
        Command::Geodesic => cmd_geodesic(&ctx)?,
        Command::Connes => cmd_connes(&ctx)?,
        Command::Kusuoka { word, check_additivity } => cmd_kusuoka(&ctx, word, *check_additivity)?,
        Command::Render { side_by_side } => cmd_render(&ctx, *side_by_side)?,
        Command::Validate => {
            let report = run_validation(&ctx.config)?;
            let code = if report.passed { 0 } else { 4 };
            return Ok((ctx.emit(&report)?, code));
        }
        Command::Config => ctx.config.to_json()? + "\n",
    };
    Ok((text, 0))
}
