//! On-disk result cache: operators and spectra in their binary formats,
//! keyed by an FNV-1a content hash of (model key, N, kind, code version).
//! The computation is deterministic, so a bypassed cache reproduces the
//! cached bytes exactly; a dedicated test pins that down.

use std::fs;
use std::path::{Path, PathBuf};

use spinlim::models::ModelSpec;
use spinlim::operator::QuantizedOperator;
use spinlim::spectral::Spectrum;

const VERSION_TAG: &str = env!("CARGO_PKG_VERSION");

pub struct Cache {
    dir: Option<PathBuf>,
}

fn fnv1a(data: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in data {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

impl Cache {
    /// `dir = None` disables caching entirely.
    pub fn new(dir: Option<PathBuf>) -> Self {
        if let Some(d) = &dir {
            let _ = fs::create_dir_all(d);
        }
        Self { dir }
    }

    pub fn resolve_dir(
        enabled: bool,
        explicit: Option<PathBuf>,
        out_dir: &Path,
    ) -> Option<PathBuf> {
        if !enabled {
            return None;
        }
        if let Some(d) = explicit {
            return Some(d);
        }
        if let Ok(env_dir) = std::env::var("SPINLIM_CACHE_DIR") {
            if !env_dir.is_empty() {
                return Some(PathBuf::from(env_dir));
            }
        }
        Some(out_dir.join(".cache"))
    }

    fn path_for(&self, spec: &ModelSpec, n: usize, kind: &str) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let key = format!("v{VERSION_TAG};{};N={n};{kind}", spec.cache_key());
        Some(dir.join(format!("{:016x}.bin", fnv1a(key.as_bytes()))))
    }

    pub fn operator(
        &self,
        spec: &ModelSpec,
        n: usize,
        compute: impl FnOnce() -> spinlim::Result<QuantizedOperator>,
    ) -> spinlim::Result<QuantizedOperator> {
        let path = self.path_for(spec, n, "operator");
        if let Some(p) = &path {
            if let Ok(bytes) = fs::read(p) {
                if let Ok(op) = QuantizedOperator::from_binary(&bytes) {
                    return Ok(op);
                }
            }
        }
        let op = compute()?;
        if let Some(p) = &path {
            let _ = fs::write(p, op.to_binary());
        }
        Ok(op)
    }

    pub fn spectrum(
        &self,
        spec: &ModelSpec,
        n: usize,
        compute: impl FnOnce() -> spinlim::Result<Spectrum>,
    ) -> spinlim::Result<Spectrum> {
        let path = self.path_for(spec, n, "spectrum");
        if let Some(p) = &path {
            if let Ok(bytes) = fs::read(p) {
                if let Ok(s) = Spectrum::from_binary(&bytes) {
                    return Ok(s);
                }
            }
        }
        let s = compute()?;
        if let Some(p) = &path {
            let _ = fs::write(p, s.to_binary());
        }
        Ok(s)
    }
}
