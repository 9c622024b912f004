//! Delimited text tables with a header row. Lines starting with `#` are
//! metadata and skipped on read. Every error names the file and line.

use std::collections::HashMap;
use std::fmt::Display;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

pub struct Table {
    path: PathBuf,
    header: Vec<String>,
    columns: HashMap<String, usize>,
    rows: Vec<(u64, csv::StringRecord)>,
}

pub struct Row<'a> {
    table: &'a Table,
    line: u64,
    record: &'a csv::StringRecord,
}

impl Table {
    pub fn read(path: &Path) -> Result<Table> {
        let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(file);
        let header: Vec<String> = reader
            .headers()
            .with_context(|| format!("{}: cannot read header", path.display()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut columns = HashMap::new();
        for (k, name) in header.iter().enumerate() {
            if columns.insert(name.clone(), k).is_some() {
                bail!("{}: duplicate column `{name}`", path.display());
            }
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                anyhow!("{}:{line}: {e}", path.display())
            })?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            rows.push((line, record));
        }
        Ok(Table {
            path: path.to_path_buf(),
            header,
            columns,
            rows,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn has(&self, column: &str) -> bool {
        self.columns.contains_key(column)
    }

    pub fn require(&self, columns: &[&str]) -> Result<()> {
        for c in columns {
            if !self.has(c) {
                bail!("{}: missing column `{c}`", self.path.display());
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> impl Iterator<Item = Row<'_>> {
        self.rows.iter().map(move |(line, record)| Row {
            table: self,
            line: *line,
            record,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl Row<'_> {
    pub fn line(&self) -> u64 {
        self.line
    }

    /// `file:line` prefix for diagnostics about this row.
    pub fn at(&self) -> String {
        format!("{}:{}", self.table.path.display(), self.line)
    }

    pub fn str(&self, column: &str) -> Result<&str> {
        let k = *self
            .table
            .columns
            .get(column)
            .ok_or_else(|| anyhow!("{}: missing column `{column}`", self.at()))?;
        self.record
            .get(k)
            .ok_or_else(|| anyhow!("{}: row has no field for column `{column}`", self.at()))
    }

    pub fn cell(&self, k: usize) -> Result<&str> {
        self.record.get(k).ok_or_else(|| {
            anyhow!(
                "{}: row has {} fields, expected {}",
                self.at(),
                self.record.len(),
                k + 1
            )
        })
    }

    pub fn width(&self) -> usize {
        self.record.len()
    }

    pub fn parse<T>(&self, column: &str) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        let raw = self.str(column)?;
        raw.parse()
            .map_err(|e| anyhow!("{}: column `{column}`: cannot parse `{raw}`: {e}", self.at()))
    }

    pub fn parse_or<T>(&self, column: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        if !self.table.has(column) || self.str(column)?.is_empty() {
            return Ok(default);
        }
        self.parse(column)
    }

    /// `0`/`1` (also `false`/`true`).
    pub fn flag(&self, column: &str) -> Result<bool> {
        match self.str(column)? {
            "0" | "false" => Ok(false),
            "1" | "true" => Ok(true),
            other => bail!("{}: column `{column}`: expected 0 or 1, got `{other}`", self.at()),
        }
    }
}

/// Buffered writer that emits an optional `#` metadata line first.
pub struct TableWriter {
    path: PathBuf,
    inner: csv::Writer<BufWriter<File>>,
}

impl TableWriter {
    pub fn create(path: &Path, meta: Option<&str>, header: &[&str]) -> Result<TableWriter> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        }
        let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        let mut buf = BufWriter::new(file);
        if let Some(meta) = meta {
            writeln!(buf, "# {meta}").with_context(|| format!("cannot write {}", path.display()))?;
        }
        let mut inner = csv::WriterBuilder::new().from_writer(buf);
        inner
            .write_record(header)
            .with_context(|| format!("cannot write {}", path.display()))?;
        Ok(TableWriter {
            path: path.to_path_buf(),
            inner,
        })
    }

    pub fn row<I, T>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.inner
            .write_record(fields)
            .with_context(|| format!("cannot write {}", self.path.display()))
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner
            .flush()
            .with_context(|| format!("cannot write {}", self.path.display()))
    }
}

/// First `#` line of a file, without the marker.
pub fn read_meta(path: &Path) -> Result<Option<String>> {
    use std::io::BufRead;
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut line = String::new();
    std::io::BufReader::new(file)
        .read_line(&mut line)
        .with_context(|| format!("cannot read {}", path.display()))?;
    Ok(line.strip_prefix('#').map(|m| m.trim().to_string()))
}
