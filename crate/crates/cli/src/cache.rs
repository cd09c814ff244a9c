//! One file per computed row, named by the SHA-256 of its canonical
//! parameter string.
//!
//! File layout: a magic line, the canonical key, then the values as a comma
//! separated line. Anything that fails to parse is reported and ignored.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::table::format_float;

const MAGIC: &str = "antikz-cache 1";

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.txt", hex::encode(Sha256::digest(key.as_bytes()))))
    }

    /// Cached values for `key`, or `None` when absent or unreadable.
    pub fn load(&self, key: &str, expected_len: usize) -> Option<Vec<f64>> {
        let path = self.path_for(key);
        let text = fs::read_to_string(&path).ok()?;
        match parse(&text, key, expected_len) {
            Some(v) => Some(v),
            None => {
                log::warn!("ignoring corrupt cache file {}", path.display());
                None
            }
        }
    }

    /// Writes through a temporary file so readers never see partial rows.
    pub fn store(&self, key: &str, values: &[f64]) -> std::io::Result<()> {
        let path = self.path_for(key);
        let cells: Vec<String> = values.iter().map(|&x| format_float(x)).collect();
        let body = format!("{MAGIC}\n{key}\n{}\n", cells.join(","));
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, body)?;
        fs::rename(&tmp, &path)
    }
}

fn parse(text: &str, key: &str, expected_len: usize) -> Option<Vec<f64>> {
    let mut lines = text.split('\n');
    if lines.next()? != MAGIC || lines.next()? != key {
        return None;
    }
    let values: Vec<f64> = lines.next()?.split(',').map(|s| s.parse().ok()).collect::<Option<_>>()?;
    (values.len() == expected_len && lines.all(str::is_empty)).then_some(values)
}
