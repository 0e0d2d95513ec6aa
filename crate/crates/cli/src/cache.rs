//! On-disk cache of solved decomposition tables and Weyl characters.
//!
//! Each file is a JSON envelope holding the payload as a string together with
//! its SHA-256. Anything that fails to parse or verify is treated as a miss.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use pfilt_core::charring::{cached_weyl_characters, seed_weyl_character};
use pfilt_core::rootsys::RootSystem;
use pfilt_core::simples::{DecompTable, Provenance};
use pfilt_core::weights::Weight;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Serialize, Deserialize)]
struct Envelope {
    key: String,
    sha256: String,
    payload: String,
}

#[derive(Serialize, Deserialize)]
struct WeylEntry {
    lambda: Weight,
    dominant: Vec<(Weight, i64)>,
}

pub struct Cache {
    dir: PathBuf,
}

fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).with_context(|| format!("creating cache dir {}", dir.display()))?;
        Ok(Cache { dir })
    }

    pub fn table_path(&self, system: &str, p: u64, bound: i64) -> PathBuf {
        self.dir.join(format!("table-{system}-p{p}-b{bound}.json"))
    }

    pub fn weyl_path(&self, system: &str) -> PathBuf {
        self.dir.join(format!("weyl-{system}.json"))
    }

    fn read(&self, path: &Path, key: &str) -> Option<String> {
        let raw = fs::read_to_string(path).ok()?;
        let env: Envelope = match serde_json::from_str(&raw) {
            Ok(e) => e,
            Err(e) => {
                log::warn!("ignoring unreadable cache file {}: {e}", path.display());
                return None;
            }
        };
        if env.key != key || digest(&env.payload) != env.sha256 {
            log::warn!("ignoring corrupt cache file {}", path.display());
            return None;
        }
        Some(env.payload)
    }

    /// Atomic replace: write a temp file in the same directory, then rename.
    fn write(&self, path: &Path, key: &str, payload: String) -> Result<()> {
        let env = Envelope {
            key: key.to_string(),
            sha256: digest(&payload),
            payload,
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(&env)?.as_bytes())?;
        tmp.persist(path)
            .with_context(|| format!("replacing {}", path.display()))?;
        Ok(())
    }

    pub fn load_table(&self, rs: &RootSystem, p: u64, bound: i64) -> Option<DecompTable> {
        let key = format!("table/{}/{p}/{bound}", rs.name());
        let payload = self.read(&self.table_path(&rs.name(), p, bound), &key)?;
        match DecompTable::from_json(&payload, rs, Provenance::Computed) {
            Ok(t) => Some(t),
            Err(e) => {
                log::warn!("ignoring invalid cached table: {e}");
                None
            }
        }
    }

    pub fn store_table(&self, table: &DecompTable, bound: i64) -> Result<()> {
        let key = format!("table/{}/{}/{bound}", table.system(), table.p());
        self.write(&self.table_path(table.system(), table.p(), bound), &key, table.to_json())
    }

    /// Seeds `rs` with cached Weyl characters; returns how many were loaded.
    pub fn load_weyl(&self, rs: &RootSystem) -> usize {
        let key = format!("weyl/{}", rs.name());
        let Some(payload) = self.read(&self.weyl_path(&rs.name()), &key) else {
            return 0;
        };
        let Ok(entries) = serde_json::from_str::<Vec<WeylEntry>>(&payload) else {
            log::warn!("ignoring malformed Weyl character cache");
            return 0;
        };
        let mut loaded = 0;
        for e in entries {
            match seed_weyl_character(rs, &e.lambda, &e.dominant) {
                Ok(()) => loaded += 1,
                Err(err) => log::warn!("skipping cached χ{}: {err}", e.lambda),
            }
        }
        loaded
    }

    pub fn store_weyl(&self, rs: &RootSystem) -> Result<()> {
        let entries: Vec<WeylEntry> = cached_weyl_characters(rs)
            .into_iter()
            .map(|(lambda, dominant)| WeylEntry { lambda, dominant })
            .collect();
        let key = format!("weyl/{}", rs.name());
        self.write(&self.weyl_path(&rs.name()), &key, serde_json::to_string(&entries)?)
    }
}
