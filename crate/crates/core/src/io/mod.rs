//! File formats: GSLIB-style ASCII grids, tab-separated well files, TOML
//! run configuration, the run manifest and the CSV/text exports.
//!
//! Writers are deterministic and replace their target atomically through a
//! temporary file in the same directory. Readers reject short, long or
//! malformed input with the offending line number.

mod config;
mod gslib;
mod manifest;
mod tables;
mod wells;

use std::fs;
use std::path::Path;

pub use config::{
    read_config, read_config_str, write_config, BootstrapSection, ClassSpec, ClassesSection, Config, Distribution,
    GridSection, InitialSection, SeedsSection, TemplateSpec,
};
pub use gslib::{parse_grid, read_grid, render_grid, write_grid};
pub use manifest::{read_manifest, write_manifest, JobStatus, ManifestEntry, RunManifest};
pub use tables::{read_probabilities, render_curves, render_probabilities, render_ranking, write_curves, write_probabilities, write_ranking};
pub use wells::{read_well_set, render_well_set, write_well_set};

use crate::{Error, Result};

/// Writes `contents` to `path` through a sibling temporary file and a rename.
pub fn atomic_write(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}
