//! The on-disk cache of harmonic edge lengths and the JSON run configuration.

use gasket_ncg::cache::LengthCache;
use gasket_ncg::config::RunConfig;
use gasket_ncg::curves::EdgeLengthTable;
use gasket_ncg::Geometry;
use std::time::Instant;

fn main() -> gasket_ncg::Result<()> {
    let dir = std::env::temp_dir().join(format!("gasket-cache-example-{}", std::process::id()));
    let config = RunConfig {
        geometry: Geometry::Harmonic,
        level: 6,
        refinement: 14,
        cache_dir: Some(dir.clone()),
        ..Default::default()
    };
    println!("configuration:\n{}", config.to_json()?);
    let cache = LengthCache::new(config.resolved_cache_dir());

    for run in ["cold", "warm"] {
        let start = Instant::now();
        let (table, stats) = cache.table(config.geometry, config.level, config.refinement)?;
        println!(
            "{run}: {:?}, read {} levels, wrote {} levels, total level-6 length {:.10}",
            start.elapsed(),
            stats.levels_read,
            stats.levels_written,
            table.level(6).unwrap_or_default().iter().sum::<f64>()
        );
    }
    let fresh = EdgeLengthTable::harmonic(config.level, config.refinement)?;
    let (cached, _) = cache.table(config.geometry, config.level, config.refinement)?;
    println!("cached table bit-identical to recomputation: {}", fresh == cached);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
