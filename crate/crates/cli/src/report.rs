//! CSV reports: a schema-version comment line, a fixed header row, then data rows.

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub struct Report {
    writer: csv::Writer<Vec<u8>>,
}

impl Report {
    /// `title` names the report type; `context` is free `key=value` provenance that must
    /// itself be deterministic.
    pub fn new(title: &str, context: &[(&str, String)], header: &[&str]) -> Self {
        let mut first = format!("# schurmult {title} schema={SCHEMA_VERSION}");
        for (k, v) in context {
            first.push_str(&format!(" {k}={v}"));
        }
        first.push('\n');
        let mut buf = first.into_bytes();
        buf.reserve(4096);
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(buf);
        writer.write_record(header).expect("writing to memory");
        Self { writer }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("writing to memory");
    }

    pub fn finish(self) -> Result<String, CliError> {
        let bytes = self
            .writer
            .into_inner()
            .map_err(|e| CliError::precondition(format!("report buffer: {e}")))?;
        Ok(String::from_utf8(bytes).expect("reports are UTF-8"))
    }
}
