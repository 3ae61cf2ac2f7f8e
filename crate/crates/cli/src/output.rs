//! CSV emission: one header comment line, then a column row, then records.

use std::path::{Path, PathBuf};

use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `# planar3b <version> <command> <config-hash>`.
pub fn header_line(command: &str, hash: &str) -> String {
    format!("# planar3b {VERSION} {command} {hash}")
}

/// Seventeen significant digits, `.` decimal separator.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Empty for missing values.
pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Buffered table written in one go, so output files are never half-written.
pub struct Table {
    command: String,
    hash: String,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(command: &str, hash: &str, columns: &[&str]) -> Self {
        Self {
            command: command.to_owned(),
            hash: hash.to_owned(),
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, CliError> {
        let mut buf = header_line(&self.command, &self.hash).into_bytes();
        buf.push(b'\n');
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(buf);
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        writer
            .into_inner()
            .map_err(|e| CliError::Solver(format!("csv flush: {e}")))
    }

    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let path = dir.join(name);
        std::fs::write(&path, self.to_bytes()?).map_err(|e| CliError::io(&path, e))?;
        log::info!("wrote {} ({} rows)", path.display(), self.rows.len());
        Ok(path)
    }
}

/// Parsed CSV: header comment, column names and raw string records.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCsv {
    pub header: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ParsedCsv {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let (header, body) = text.split_once('\n').unwrap_or((text, ""));
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
        let columns = reader.headers()?.iter().map(str::to_owned).collect();
        let rows = reader
            .records()
            .map(|r| r.map(|rec| rec.iter().map(str::to_owned).collect()))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            header: header.to_owned(),
            columns,
            rows,
        })
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric column; empty cells become `None`.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.column_index(name)?;
        Some(
            self.rows
                .iter()
                .map(|r| r.get(i).and_then(|v| v.parse::<f64>().ok()))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.5e-300), "-2.5000000000000000e-300");
        assert_eq!(num(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(opt(None), "");
    }

    #[test]
    fn round_trips_through_parser() {
        let mut t = Table::new("potentials", "0123456789abcdef", &["R", "V"]);
        t.push(vec![num(1.5), opt(None)]);
        t.push(vec![num(2.0), num(-0.25)]);
        let bytes = t.to_bytes().unwrap();
        let parsed = ParsedCsv::parse(std::str::from_utf8(&bytes).unwrap()).unwrap();
        assert_eq!(
            parsed.header,
            format!("# planar3b {VERSION} potentials 0123456789abcdef")
        );
        assert_eq!(parsed.columns, ["R", "V"]);
        assert_eq!(parsed.column("V").unwrap(), vec![None, Some(-0.25)]);
        assert_eq!(parsed.column("R").unwrap(), vec![Some(1.5), Some(2.0)]);
    }
}
