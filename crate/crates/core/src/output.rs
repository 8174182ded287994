//! File emission: stamped delimited text and portable pixmaps.

use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance written at the top of every output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stamp {
    pub version: String,
    /// Hex SHA-256 of the resolved configuration.
    pub digest: String,
}

impl Stamp {
    pub fn new(digest: impl Into<String>) -> Self {
        Self { version: VERSION.to_string(), digest: digest.into() }
    }

    /// Comment lines, each starting with `#`.
    pub fn header(&self) -> String {
        format!("# orbitherm {}\n# config-sha256 {}\n", self.version, self.digest)
    }
}

/// Fixed scientific notation with 9 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.8e}")
    }
}

/// Comma-separated table with stamp and header row.
pub fn csv_table<R, I>(stamp: &Stamp, columns: &[&str], rows: R) -> String
where
    R: IntoIterator<Item = I>,
    I: IntoIterator<Item = f64>,
{
    let mut out = stamp.header();
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        let mut first = true;
        for x in row {
            if !first {
                out.push(',');
            }
            first = false;
            out.push_str(&fmt_num(x));
        }
        out.push('\n');
    }
    out
}

/// Parsed delimited table: column names and numeric rows. Comment lines are
/// skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn parse_csv(text: &str) -> Result<Table> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let columns: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Config("table has no header row".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|f| match f {
                "nan" => Ok(f64::NAN),
                _ => f.parse::<f64>(),
            })
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Config(format!("row {}: {e}", i + 1)))?;
        if row.len() != columns.len() {
            return Err(Error::Config(format!("row {} has {} fields, expected {}", i + 1, row.len(), columns.len())));
        }
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

/// Binary PPM (P6) with the stamp in header comments. `pixels` is row-major
/// RGB, top row first.
pub fn ppm(stamp: &Stamp, width: usize, height: usize, pixels: &[[u8; 3]]) -> Result<Vec<u8>> {
    if pixels.len() != width * height || width == 0 || height == 0 {
        return Err(Error::domain("ppm", format!("{} pixels for a {width}x{height} image", pixels.len())));
    }
    let mut head = String::from("P6\n");
    head.push_str(&stamp.header());
    let _ = write!(head, "{width} {height}\n255\n");
    let mut out = head.into_bytes();
    out.extend(pixels.iter().flatten());
    Ok(out)
}

/// Decode a P6 image written by [`ppm`]: (width, height, pixels).
pub fn parse_ppm(bytes: &[u8]) -> Result<(usize, usize, Vec<[u8; 3]>)> {
    let bad = |what: &str| Error::Config(format!("malformed PPM: {what}"));
    let mut pos = 0;
    let mut fields = Vec::new();
    while fields.len() < 4 {
        let end = bytes[pos..].iter().position(|&b| b == b'\n').ok_or_else(|| bad("truncated header"))? + pos;
        let line = std::str::from_utf8(&bytes[pos..end]).map_err(|_| bad("header is not text"))?;
        pos = end + 1;
        if !line.starts_with('#') {
            fields.extend(line.split_whitespace().map(str::to_string));
        }
    }
    if fields[0] != "P6" || fields[3] != "255" {
        return Err(bad("expected P6 with maxval 255"));
    }
    let w: usize = fields[1].parse().map_err(|_| bad("width"))?;
    let h: usize = fields[2].parse().map_err(|_| bad("height"))?;
    let data = &bytes[pos..];
    if data.len() != 3 * w * h {
        return Err(bad("pixel data length"));
    }
    Ok((w, h, data.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect()))
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}
