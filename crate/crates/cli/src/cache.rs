//! On-disk memo of affine fusion tables under `WFUSION_CACHE_DIR`.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use wfusion_core::fusion::fusion_ring_affine;
use wfusion_core::FusionRing;

pub const CACHE_ENV: &str = "WFUSION_CACHE_DIR";

fn cache_path(r: usize, n: i64) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    Some(PathBuf::from(dir).join(format!("fusion-sl{r}-level{n}.json")))
}

pub fn affine_ring(r: usize, n: i64) -> wfusion_core::Result<Arc<FusionRing>> {
    let Some(path) = cache_path(r, n) else {
        return fusion_ring_affine(r, n);
    };
    if let Ok(text) = fs::read_to_string(&path) {
        match serde_json::from_str(&text).map_err(|e| wfusion_core::Error::Parse(e.to_string())).and_then(FusionRing::from_json_value) {
            Ok(ring) => return Ok(Arc::new(ring)),
            Err(e) => eprintln!("ignoring unreadable cache entry {}: {e}", path.display()),
        }
    }
    let ring = fusion_ring_affine(r, n)?;
    let write = path
        .parent()
        .map_or(Ok(()), fs::create_dir_all)
        .and_then(|_| fs::write(&path, crate::output::json(&ring.to_json_value())));
    if let Err(e) = write {
        eprintln!("could not write cache entry {}: {e}", path.display());
    }
    Ok(ring)
}
