//! Argument decoding shared by the subcommands.

use std::fs;
use std::path::Path;

use hpk_core::{Alpha, Error};
use serde::de::DeserializeOwned;

/// Parses an inline JSON argument, or the contents of a file when the
/// argument starts with `@`.
pub fn json_arg<T: DeserializeOwned>(name: &str, raw: &str) -> Result<T, Error> {
    let text = match raw.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("--{name}: cannot read {path}: {e}")))?,
        None => raw.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("--{name}: {e}")))
}

/// Alpha must be a nonzero real; complex-looking or zero values are domain
/// errors rather than usage errors.
pub fn alpha_arg(raw: &str) -> Result<Alpha, Error> {
    raw.trim().parse::<f64>().map_err(|_| Error::InvalidAlpha).and_then(Alpha::new)
}

pub fn write_csv<P: AsRef<Path>>(path: P, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), Error> {
    let path = path.as_ref();
    let io_err = |e: csv::Error| Error::InvalidInput(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io_err)?;
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(&row).map_err(io_err)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}
