//! On-disk cache of enumerations and content-addressed run artifacts.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use tribilliard_core::enumeration::{enumerate_diagonals, Enumeration, PrecisionConfig};
use tribilliard_core::{TriangleShape, Vertex};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheEntry {
    schema_version: u32,
    code_version: String,
    shape: String,
    vertex: Vertex,
    n_max: usize,
    precision: PrecisionConfig,
    enumeration: Enumeration,
}

pub struct Store {
    root: PathBuf,
}

impl Store {
    pub fn new(root: PathBuf) -> Self {
        Store { root }
    }

    fn cache_path(&self, shape: &TriangleShape, vertex: Vertex, n_max: usize) -> PathBuf {
        let hash = &digest(shape.canonical().as_bytes())[..16];
        self.root
            .join("enumeration")
            .join(format!("{hash}-{vertex}-{n_max}.json"))
    }

    /// Cached enumeration when every recorded setting matches, otherwise a
    /// fresh run that replaces the cache entry.
    pub fn enumeration(
        &self,
        shape: &TriangleShape,
        vertex: Vertex,
        n_max: usize,
        precision: &PrecisionConfig,
    ) -> Result<Enumeration, CliError> {
        let path = self.cache_path(shape, vertex, n_max);
        if let Ok(bytes) = fs::read(&path) {
            match serde_json::from_slice::<CacheEntry>(&bytes) {
                Ok(entry)
                    if entry.schema_version == SCHEMA_VERSION
                        && entry.code_version == CODE_VERSION
                        && entry.shape == shape.canonical()
                        && entry.vertex == vertex
                        && entry.n_max == n_max
                        && entry.precision == *precision =>
                {
                    log::debug!("cache hit {}", path.display());
                    return Ok(entry.enumeration);
                }
                _ => log::info!("stale cache entry {}", path.display()),
            }
        }
        let enumeration = enumerate_diagonals(shape, vertex, n_max, precision)?;
        let entry = CacheEntry {
            schema_version: SCHEMA_VERSION,
            code_version: CODE_VERSION.to_string(),
            shape: shape.canonical(),
            vertex,
            n_max,
            precision: *precision,
            enumeration,
        };
        write_atomic(&path, &serde_json::to_vec(&entry)?)?;
        Ok(entry.enumeration)
    }

    /// Stores `body` as `artifacts/<kind>-<hash>.<ext>` and records it in the
    /// latest-run index. Returns the artifact path.
    pub fn artifact(&self, kind: &str, ext: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let name = format!("{kind}-{}.{ext}", &digest(bytes)[..16]);
        let path = self.root.join("artifacts").join(&name);
        write_atomic(&path, bytes)?;
        self.update_index(kind, ext, &name)?;
        Ok(path)
    }

    fn update_index(&self, kind: &str, ext: &str, name: &str) -> Result<(), CliError> {
        let index = self.root.join("latest.json");
        let mut map: serde_json::Map<String, Value> = fs::read(&index)
            .ok()
            .and_then(|b| serde_json::from_slice(&b).ok())
            .unwrap_or_default();
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        map.insert(
            format!("{kind}.{ext}"),
            serde_json::json!({ "path": format!("artifacts/{name}"), "written_unix": stamp }),
        );
        write_atomic(&index, &serde_json::to_vec_pretty(&map)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tribilliard_core::make_triangle;

    #[test]
    fn cache_round_trips_and_respects_settings() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::new(dir.path().to_path_buf());
        let shape = make_triangle(0.8, 1.1, 0.05).unwrap();
        let p = PrecisionConfig::default();
        let first = store.enumeration(&shape, Vertex::A, 9, &p).unwrap();
        let again = store.enumeration(&shape, Vertex::A, 9, &p).unwrap();
        assert_eq!(first, again);
        let loose = PrecisionConfig {
            extended: false,
            ..p
        };
        store.enumeration(&shape, Vertex::A, 9, &loose).unwrap();
        let bytes = fs::read(store.cache_path(&shape, Vertex::A, 9)).unwrap();
        let entry: CacheEntry = serde_json::from_slice(&bytes).unwrap();
        assert!(!entry.precision.extended);
    }

    #[test]
    fn artifacts_are_content_named() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::new(dir.path().to_path_buf());
        let a = store.artifact("demo", "json", b"{}").unwrap();
        let b = store.artifact("demo", "json", b"{}").unwrap();
        assert_eq!(a, b);
        assert_ne!(a, store.artifact("demo", "json", b"[]").unwrap());
        let index: Value =
            serde_json::from_slice(&fs::read(dir.path().join("latest.json")).unwrap()).unwrap();
        assert!(index["demo.json"]["path"]
            .as_str()
            .unwrap()
            .starts_with("artifacts/demo-"));
    }
}
