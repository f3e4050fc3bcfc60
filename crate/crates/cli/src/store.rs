use std::path::{Path, PathBuf};
use std::time::Instant;

use walltab::density::{load_tower, save_tower, BlockSpec, DensityTower};
use walltab::Result;

/// Directory used for tower caches when `--cache` is not given.
pub const CACHE_DIR_ENV: &str = "WALLTAB_CACHE_DIR";

pub fn cache_path(explicit: Option<&Path>, block: &BlockSpec) -> Option<PathBuf> {
    if let Some(p) = explicit {
        return Some(p.to_path_buf());
    }
    let dir = std::env::var_os(CACHE_DIR_ENV)?;
    Some(PathBuf::from(dir).join(format!("tower-{}.json", &block.model_hash()[..16])))
}

/// Loads the cached tower (if any), extends it to depth `n` and saves it back
/// when new levels were computed. Timing goes to stderr when `verbose`.
pub fn tower(block: &BlockSpec, n: usize, cache: Option<&Path>, verbose: bool) -> Result<DensityTower> {
    let path = cache_path(cache, block);
    let start = Instant::now();
    let (mut tower, loaded) = match &path {
        Some(p) if p.exists() => {
            let t = load_tower(p, block)?;
            let levels = t.depth() + 1;
            (t, levels)
        }
        _ => (DensityTower::new(block.clone())?, 0),
    };
    let load_ms = start.elapsed().as_secs_f64() * 1e3;
    let start = Instant::now();
    let computed = tower.extend_to(n)?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    if computed > 0 || loaded == 0 {
        if let Some(p) = &path {
            save_tower(&tower, p)?;
        }
    }
    if verbose {
        let source = match &path {
            Some(p) => p.display().to_string(),
            None => "none".into(),
        };
        eprintln!("cache: {source}");
        eprintln!("loaded levels: {loaded} ({load_ms:.1} ms)");
        eprintln!("computed levels: {computed} ({build_ms:.1} ms)");
    }
    Ok(tower)
}
