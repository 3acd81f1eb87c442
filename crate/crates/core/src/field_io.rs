//! FACF1 field files.
//!
//! Layout: newline-terminated ASCII header lines
//!
//! ```text
//! FACF1
//! dims 2
//! sizes 16 16
//! meshsizes 0.0625 0.0625
//! alpha 1.5
//! eps 0.1
//! time 0.5
//! payload 289
//! ```
//!
//! followed by `payload` little-endian `f64` values in row-major order
//! (last axis fastest), boundary frame included. Reals use Rust's shortest
//! round-trip formatting, so headers read back bit-exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid};

pub const MAGIC: &str = "FACF1";

#[derive(Debug, Clone, PartialEq)]
pub struct FieldFile {
    pub field: Field,
    pub alpha: f64,
    pub eps: f64,
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_field<W: Write>(mut w: W, file: &FieldFile) -> Result<()> {
    let grid = file.field.grid();
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "dims {}", grid.dims())?;
    writeln!(w, "sizes {}", join(grid.sizes()))?;
    writeln!(w, "meshsizes {}", join(grid.spacing()))?;
    writeln!(w, "alpha {}", file.alpha)?;
    writeln!(w, "eps {}", file.eps)?;
    writeln!(w, "time {}", file.field.time())?;
    writeln!(w, "payload {}", grid.len())?;
    let mut bytes = Vec::with_capacity(8 * grid.len());
    for v in file.field.values() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&bytes)?;
    w.flush()?;
    Ok(())
}

fn header_line<R: BufRead>(r: &mut R, key: &str) -> Result<String> {
    let mut line = String::new();
    if r.read_line(&mut line)? == 0 {
        return Err(Error::Format(format!("header ends before `{key}`")));
    }
    let line = line.trim_end_matches(['\n', '\r']);
    match line.split_once(' ') {
        Some((k, rest)) if k == key => Ok(rest.to_string()),
        _ => Err(Error::Format(format!("expected `{key}` line, found `{line}`"))),
    }
}

fn parse_values<T: std::str::FromStr>(key: &str, text: &str) -> Result<Vec<T>> {
    text.split_whitespace()
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Format(format!("{key}: cannot parse `{s}`")))
        })
        .collect()
}

fn parse_one<T: std::str::FromStr>(key: &str, text: &str) -> Result<T> {
    let mut v = parse_values(key, text)?;
    if v.len() != 1 {
        return Err(Error::Format(format!("{key}: expected one value")));
    }
    Ok(v.remove(0))
}

pub fn read_field<R: BufRead>(mut r: R) -> Result<FieldFile> {
    let mut magic = String::new();
    r.read_line(&mut magic)?;
    if magic.trim_end_matches(['\n', '\r']) != MAGIC {
        return Err(Error::Format(format!(
            "bad magic `{}`, expected {MAGIC}",
            magic.trim_end().escape_debug()
        )));
    }
    let dims: usize = parse_one("dims", &header_line(&mut r, "dims")?)?;
    let sizes: Vec<usize> = parse_values("sizes", &header_line(&mut r, "sizes")?)?;
    let spacing: Vec<f64> = parse_values("meshsizes", &header_line(&mut r, "meshsizes")?)?;
    let alpha: f64 = parse_one("alpha", &header_line(&mut r, "alpha")?)?;
    let eps: f64 = parse_one("eps", &header_line(&mut r, "eps")?)?;
    let time: f64 = parse_one("time", &header_line(&mut r, "time")?)?;
    let payload: usize = parse_one("payload", &header_line(&mut r, "payload")?)?;
    if sizes.len() != dims {
        return Err(Error::Format(format!("dims {dims} but {} sizes", sizes.len())));
    }
    let grid = Grid::with_spacing(&sizes, spacing).map_err(|e| Error::Format(e.to_string()))?;
    if payload != grid.len() {
        return Err(Error::Format(format!(
            "payload {payload} does not match grid with {} nodes",
            grid.len()
        )));
    }
    let mut bytes = vec![0u8; 8 * payload];
    r.read_exact(&mut bytes).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => {
            Error::Format(format!("truncated payload, expected {payload} values"))
        }
        _ => Error::Io(e),
    })?;
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(Error::Format("trailing bytes after payload".into()));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Ok(FieldFile {
        field: Field::from_values(grid, values, time)?,
        alpha,
        eps,
    })
}

pub fn save_field(path: &Path, file: &FieldFile) -> Result<()> {
    write_field(BufWriter::new(File::create(path)?), file)
}

pub fn load_field(path: &Path) -> Result<FieldFile> {
    read_field(BufReader::new(File::open(path)?))
}
