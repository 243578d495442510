//! Content-addressed on-disk cache for expensive per-rank artifacts.

use std::fs;
use std::path::PathBuf;

use abideal_core::liealg::REALIZATION_VERSION;
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    pub fn path(&self, kind: &str, rank: usize) -> PathBuf {
        let mut h = Sha256::new();
        h.update(format!("{kind}\0{rank}\0{REALIZATION_VERSION}"));
        self.dir
            .join(format!("{kind}-{}.json", hex::encode(h.finalize())))
    }

    /// Returns the cached value if it loads and passes `valid`, otherwise
    /// computes it and stores it. Storage failures only warn.
    pub fn get_or_compute<T, V, F>(
        &self,
        kind: &str,
        rank: usize,
        valid: V,
        compute: F,
    ) -> anyhow::Result<T>
    where
        T: Serialize + DeserializeOwned,
        V: Fn(&T) -> bool,
        F: FnOnce() -> anyhow::Result<T>,
    {
        let path = self.path(kind, rank);
        if let Ok(bytes) = fs::read(&path) {
            match serde_json::from_slice::<T>(&bytes) {
                Ok(v) if valid(&v) => return Ok(v),
                _ => eprintln!("warning: ignoring unusable cache entry {}", path.display()),
            }
        }
        let value = compute()?;
        if let Err(e) = self.store(&path, &value) {
            eprintln!("warning: could not write {}: {e}", path.display());
        }
        Ok(value)
    }

    fn store<T: Serialize>(&self, path: &PathBuf, value: &T) -> anyhow::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(value)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}
