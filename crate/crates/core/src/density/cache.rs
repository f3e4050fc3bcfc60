use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::block::BlockSpec;
use super::tower::{DensityTower, Images, IntPoly};
use crate::error::{Error, Result};
use crate::exactmath::{format_rational, parse_rational, MultiPoly, Polynomial};

pub const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct LevelJson {
    n: usize,
    coeffs: Vec<String>,
}

type TermsJson = Vec<(Vec<u32>, String)>;

#[derive(Serialize, Deserialize)]
struct PartialsJson {
    inner: Vec<TermsJson>,
    outer: Vec<Vec<TermsJson>>,
    images: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    model_hash: String,
    levels: Vec<LevelJson>,
    partials: PartialsJson,
    checksum: String,
}

fn terms_json(p: &MultiPoly) -> TermsJson {
    p.terms()
        .map(|(e, c)| (e.clone(), format_rational(c)))
        .collect()
}

fn parse_terms(vars: &[String], t: &TermsJson) -> Result<MultiPoly> {
    let terms = t
        .iter()
        .map(|(e, c)| Ok((e.clone(), parse_rational(c)?)))
        .collect::<Result<Vec<_>>>()?;
    MultiPoly::from_terms(vars, terms)
}

fn checksum(model_hash: &str, levels: &[LevelJson], partials: &PartialsJson) -> String {
    let mut h = Sha256::new();
    h.update(model_hash.as_bytes());
    h.update(serde_json::to_string(levels).expect("serializable"));
    h.update(serde_json::to_string(partials).expect("serializable"));
    hex::encode(h.finalize())
}

pub fn tower_to_json(tower: &DensityTower) -> String {
    let var = tower.block().interface();
    let levels: Vec<LevelJson> = tower
        .levels()
        .iter()
        .enumerate()
        .map(|(n, l)| LevelJson {
            n,
            coeffs: l.to_poly(var).to_strings(),
        })
        .collect();
    let images = tower.images();
    let partials = PartialsJson {
        inner: images.inner.iter().map(terms_json).collect(),
        outer: images
            .outer
            .iter()
            .map(|per_e| per_e.iter().map(terms_json).collect())
            .collect(),
        images: images.results.iter().map(Polynomial::to_strings).collect(),
    };
    let model_hash = tower.block().model_hash();
    let file = CacheFile {
        version: CACHE_VERSION,
        checksum: checksum(&model_hash, &levels, &partials),
        model_hash,
        levels,
        partials,
    };
    serde_json::to_string(&file).expect("serializable")
}

/// Parses a cache for `block`. Refuses a different version, a cache written
/// for another block, and content that no longer matches its checksum.
pub fn tower_from_json(text: &str, block: &BlockSpec) -> Result<DensityTower> {
    let file: CacheFile =
        serde_json::from_str(text).map_err(|e| Error::Cache(format!("unreadable cache: {e}")))?;
    if file.version != CACHE_VERSION {
        return Err(Error::Cache(format!(
            "cache version {} (expected {CACHE_VERSION})",
            file.version
        )));
    }
    if file.model_hash != block.model_hash() {
        return Err(Error::Cache("model hash mismatch: cache belongs to another block".into()));
    }
    if checksum(&file.model_hash, &file.levels, &file.partials) != file.checksum {
        return Err(Error::Cache("checksum mismatch: cache content was modified".into()));
    }
    let var = block.interface();
    let mut levels = Vec::with_capacity(file.levels.len());
    for (i, l) in file.levels.iter().enumerate() {
        if l.n != i {
            return Err(Error::Cache(format!("level {i} is labelled {}", l.n)));
        }
        levels.push(IntPoly::from_poly(&Polynomial::from_strings(var, &l.coeffs)?));
    }
    if levels.first() != Some(&IntPoly::one()) {
        return Err(Error::Cache("level 0 is not the constant 1".into()));
    }
    let vars = block.poly_vars();
    let m = block.vars().len();
    let c = block.chain_index();
    let p = &file.partials;
    if p.inner.len() != m || p.outer.len() != p.images.len() || p.outer.iter().any(|o| o.len() != c) {
        return Err(Error::Cache("partials do not fit the block".into()));
    }
    let results: Vec<Polynomial> = p
        .images
        .iter()
        .map(|r| Polynomial::from_strings(var, r))
        .collect::<Result<_>>()?;
    let images = Images {
        inner: p
            .inner
            .iter()
            .map(|t| parse_terms(&vars, t))
            .collect::<Result<_>>()?,
        outer: p
            .outer
            .iter()
            .map(|per_e| per_e.iter().map(|t| parse_terms(&vars, t)).collect())
            .collect::<Result<_>>()?,
        scaled: results.iter().map(IntPoly::from_poly).collect(),
        results,
    };
    Ok(DensityTower::from_parts(block.clone(), levels, images))
}

pub fn save_tower(tower: &DensityTower, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    // Write then rename, so an interrupted save never leaves a truncated cache.
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, tower_to_json(tower))?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_tower(path: &Path, block: &BlockSpec) -> Result<DensityTower> {
    tower_from_json(&fs::read_to_string(path)?, block)
}
