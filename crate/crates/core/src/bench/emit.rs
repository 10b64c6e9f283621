use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use super::record::{ExperimentRecord, CSV_HEADER};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    JsonLines,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json-lines" | "json" => Ok(Format::JsonLines),
            other => Err(Error::Usage(format!("unknown format {other:?} (csv or jsonl)"))),
        }
    }
}

/// Streams records as CSV (with header) or JSON lines.
pub struct RecordWriter<W: Write> {
    format: Format,
    out: W,
}

impl<W: Write> RecordWriter<W> {
    /// Writes the CSV header straight away, so an empty run still yields a
    /// valid file.
    pub fn new(format: Format, mut out: W) -> Result<Self> {
        if format == Format::Csv {
            writeln!(out, "{CSV_HEADER}")?;
        }
        Ok(Self { format, out })
    }

    pub fn write(&mut self, r: &ExperimentRecord) -> Result<()> {
        match self.format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .has_headers(false)
                    .from_writer(Vec::new());
                w.serialize(r)?;
                let line = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                self.out.write_all(&line)?;
            }
            Format::JsonLines => {
                serde_json::to_writer(&mut self.out, r)?;
                self.out.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Writes all records to `path`.
pub fn emit(records: &[ExperimentRecord], format: Format, path: impl AsRef<Path>) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    let mut w = RecordWriter::new(format, file)?;
    for r in records {
        w.write(r)?;
    }
    w.finish()?;
    Ok(())
}

/// Reads a CSV file written by [`emit`].
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<ExperimentRecord>> {
    let mut rdr = csv::Reader::from_path(path)?;
    Ok(rdr.deserialize().collect::<std::result::Result<_, _>>()?)
}
