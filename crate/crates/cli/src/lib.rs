//! File formats, map rendering and the `psc-smm` command line for
//! [`psc_core`].

pub mod app;
pub mod config;
pub mod dataset;
pub mod labels;
pub mod map;
pub mod model;
pub mod report;
mod text;

pub use app::{run, Cli, CliError};
pub use dataset::{parse_dataset, parse_encoded, write_dataset, write_encoded};
pub use labels::{parse_labels, write_labels, Labels};
pub use map::{render_map, MapError, Rgb, DEFAULT_PALETTE, UNLABELED};
pub use model::{parse_binary_model, parse_multiclass_model, write_binary_model, write_multiclass_model};
pub use report::Report;
pub use text::ParseError;

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<psc_core::Dataset, FileError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_dataset(&text).map_err(|source| FileError::Parse {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_dataset_file(d: &psc_core::Dataset, path: impl AsRef<Path>) -> Result<(), FileError> {
    let path = path.as_ref();
    std::fs::write(path, write_dataset(d)).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}
