//! Text formats, benchmark data and reporting.

pub mod bks;
pub mod fleets;
pub mod format;
pub mod legacy;
pub mod report;
pub mod synthetic;

use std::path::Path;

pub use bks::{gap, BksRegistry};
pub use format::{parse_instance, write_instance};
pub use report::{format_solution, BenchRow};

use crate::error::{Error, Result};
use crate::model::{Instance, Variant};

/// Reads an instance file, in the native format or the legacy layout.
/// `variant` overrides the one declared in the file.
pub fn read_instance(path: &Path, variant: Option<Variant>) -> Result<Instance> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    if legacy::looks_legacy(&text) {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
        legacy::convert_legacy(&text, stem, variant, None)
    } else {
        parse_instance(&text, variant)
    }
}
