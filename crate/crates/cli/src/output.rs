//! CSV tables with an embedded manifest header.

use std::io::Write;
use std::path::Path;

use crate::error::CliResult;
use crate::settings::RunManifest;

/// In-memory CSV document; written out once when complete.
pub struct Table {
    header: String,
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(manifest: &RunManifest<'_>) -> CliResult<Self> {
        Self::with_header(manifest.render(), manifest.columns)
    }

    /// Table preceded by arbitrary `#` lines.
    pub fn with_header(header: String, columns: &[&str]) -> CliResult<Self> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(columns)?;
        Ok(Self { header, writer })
    }

    pub fn row<I, T>(&mut self, fields: I) -> CliResult<()>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn into_string(self) -> CliResult<String> {
        let body = self
            .writer
            .into_inner()
            .map_err(|e| crate::error::CliError::Config(e.to_string()))?;
        Ok(self.header + &String::from_utf8(body).expect("CSV fields are UTF-8"))
    }

    /// Writes to `out`, or to standard output when `out` is `None`.
    pub fn emit(self, out: Option<&Path>) -> CliResult<()> {
        let text = self.into_string()?;
        match out {
            Some(path) => std::fs::write(path, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

/// Shortest round-trip text of a value; `NaN` for undefined values.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        x.to_string()
    }
}

/// Scientific form for probabilities and other small quantities.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x:e}")
    }
}
