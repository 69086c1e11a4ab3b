pub mod check;
pub mod euclid;
pub mod funk;
pub mod hyperbolic;
pub mod scan;

use std::path::{Path, PathBuf};

use crate::config::{bad, resolve};
use crate::error::CliResult;

/// Sidecar path: explicit, else the sinogram path with a `.json` extension.
pub(crate) fn sidecar_path(base: &Path, sinogram: &Path, sidecar: &Option<PathBuf>) -> PathBuf {
    match sidecar {
        Some(p) => resolve(base, p),
        None => resolve(base, sinogram).with_extension("json"),
    }
}

pub(crate) fn read_sidecar<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| crate::error::CliError::io(format!("cannot read sidecar {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| bad("sidecar", format!("sidecar {}: {e}", path.display())))
}
