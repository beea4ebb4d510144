//! Text formats for states and scale rules, and support rendering.

mod render;
mod rule_file;
mod state_file;

use std::fs;
use std::path::Path;

pub use render::{render_ascii, render_svg, support_intervals, Interval};
pub use rule_file::{parse_rule, read_rule, serialize_rule, RULE_FORMAT_TAG};
pub use state_file::{parse_state, read_state, serialize_state, write_state, STATE_FORMAT_TAG};

use crate::{Error, Result};

/// Writes via a temporary sibling file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
