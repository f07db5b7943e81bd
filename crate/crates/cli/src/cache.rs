//! JSON cache for the strong-coupling kernel, keyed by a parameter hash.
//!
//! The cache directory comes from `KMM_CACHE_DIR` (default `.kmm-cache`
//! under the working directory). A corrupt or mismatched entry is rebuilt
//! with a warning rather than failing the run.

use std::fs;
use std::path::PathBuf;

use kmm_core::model::ModelParams;
use kmm_core::wick::{self, ContractionTable};
use kmm_core::C64;
use serde::{Deserialize, Serialize};

pub const CACHE_ENV_VAR: &str = "KMM_CACHE_DIR";
pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Serialized kernel: header plus row-major `K2`, the eigenvalue magnitudes,
/// and the scalar normalization.
#[derive(Debug, Serialize, Deserialize)]
pub struct KernelCacheFile {
    pub format_version: u32,
    pub epsilon: f64,
    pub b: f64,
    pub m: usize,
    pub k2_re: Vec<f64>,
    pub k2_im: Vec<f64>,
    pub lambda: Vec<f64>,
    pub sigma_norm: f64,
}

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".kmm-cache"))
}

fn key(params: &ModelParams) -> String {
    // exact-bits key: two runs with identical parameters share an entry
    format!(
        "k2-{:016x}-{:016x}-{}",
        params.epsilon().to_bits(),
        params.b().to_bits(),
        params.m()
    )
}

fn cache_path(params: &ModelParams) -> PathBuf {
    cache_dir().join(format!("{}.json", key(params)))
}

fn matches(file: &KernelCacheFile, params: &ModelParams) -> bool {
    file.format_version == CACHE_FORMAT_VERSION
        && file.epsilon.to_bits() == params.epsilon().to_bits()
        && file.b.to_bits() == params.b().to_bits()
        && file.m == params.m()
        && file.k2_re.len() == params.m() * params.m()
        && file.k2_im.len() == params.m() * params.m()
}

fn store(params: &ModelParams, table: &ContractionTable) {
    let m = params.m();
    let mut k2_re = Vec::with_capacity(m * m);
    let mut k2_im = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let v = table.k2().get(i, j);
            k2_re.push(v.re);
            k2_im.push(v.im);
        }
    }
    let file = KernelCacheFile {
        format_version: CACHE_FORMAT_VERSION,
        epsilon: params.epsilon(),
        b: params.b(),
        m,
        k2_re,
        k2_im,
        lambda: table.lambda().to_vec(),
        sigma_norm: table.sigma_norm(),
    };
    let path = cache_path(params);
    if let Some(dir) = path.parent() {
        let _ = fs::create_dir_all(dir);
    }
    match serde_json::to_vec(&file) {
        Ok(bytes) => {
            if let Err(e) = fs::write(&path, bytes) {
                eprintln!("warning: could not write kernel cache {}: {e}", path.display());
            }
        }
        Err(e) => eprintln!("warning: could not serialize kernel cache: {e}"),
    }
}

fn load(params: &ModelParams) -> Option<ContractionTable> {
    let path = cache_path(params);
    let bytes = fs::read(&path).ok()?;
    let file: KernelCacheFile = match serde_json::from_slice(&bytes) {
        Ok(f) => f,
        Err(e) => {
            eprintln!(
                "warning: kernel cache {} is corrupt ({e}); rebuilding",
                path.display()
            );
            return None;
        }
    };
    if !matches(&file, params) {
        eprintln!(
            "warning: kernel cache {} does not match requested parameters; rebuilding",
            path.display()
        );
        return None;
    }
    let m = file.m;
    let k2 = (0..m * m)
        .map(|i| C64::new(file.k2_re[i], file.k2_im[i]))
        .collect::<Vec<_>>();
    match wick::ContractionTable::from_cached_kernel(
        params,
        &k2,
        &file.lambda,
        file.sigma_norm,
    ) {
        Ok(t) => Some(t),
        Err(e) => {
            eprintln!(
                "warning: kernel cache {} failed validation ({e}); rebuilding",
                path.display()
            );
            None
        }
    }
}

/// Fetch the kernel through the cache: hit, or solve-and-store.
pub fn cached_solve_k2(params: &ModelParams) -> kmm_core::Result<ContractionTable> {
    if let Some(table) = load(params) {
        return Ok(table);
    }
    let table = wick::solve_k2(params)?;
    store(params, &table);
    Ok(table)
}
