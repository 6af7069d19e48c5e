//! JSON and CSV rendering.
//!
//! Numbers go through `serde_json` in both formats, so a value prints the
//! same way in either: shortest round-trip decimal, `null` when not finite.

use serde::Serialize;

use crate::CliError;

pub fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("f64 serializes")
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = ::csv::Writer::from_writer(Vec::new());
    let to_io = |e: ::csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(header).map_err(to_io)?;
    for row in rows {
        w.write_record(&row).map_err(to_io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}
