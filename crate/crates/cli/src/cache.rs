//! Content-addressed result cache under `$RECTSIMPLEX_CACHE`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::Value;
use sha2::{Digest, Sha256};

pub const ENV: &str = "RECTSIMPLEX_CACHE";

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// None when the variable is unset or empty.
    pub fn from_env() -> Option<Cache> {
        let dir = std::env::var_os(ENV).filter(|d| !d.is_empty())?;
        Some(Cache {
            dir: PathBuf::from(dir),
        })
    }

    pub fn key(parts: &[&Value]) -> String {
        let mut h = Sha256::new();
        h.update(env!("CARGO_PKG_VERSION").as_bytes());
        for p in parts {
            h.update([0u8]);
            h.update(p.to_string().as_bytes());
        }
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<Value> {
        let bytes = fs::read(self.path(key)).ok()?;
        match serde_json::from_slice(&bytes) {
            Ok(v) => Some(v),
            Err(e) => {
                log::warn!("ignoring unreadable cache entry {key}: {e}");
                None
            }
        }
    }

    /// Writes to a private temporary file, then renames it into place, so
    /// readers never see a partial entry.
    pub fn put(&self, key: &str, value: &Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos());
        let tmp = self.dir.join(format!(".{key}.{}.{nanos}.tmp", std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(value.to_string().as_bytes())?;
        f.sync_all()?;
        drop(f);
        fs::rename(&tmp, self.path(key)).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }
}
