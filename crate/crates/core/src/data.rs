//! Locating and reading the shipped data directory.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Environment variable that overrides [`default_data_dir`].
pub const DATA_DIR_ENV: &str = "BSLOPE_DATA_DIR";

/// `$BSLOPE_DATA_DIR` if set, else the `data/` directory of the source tree.
pub fn default_data_dir() -> PathBuf {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
