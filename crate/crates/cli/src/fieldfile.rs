//! `.mvf` files: a text header followed by one multivector per grid node.
//!
//! ```text
//! MVF 1
//! kind field
//! encoding text
//! p 0
//! q 2
//! m 2
//! dims 8 8
//! origin -4.0 -4.0
//! spacing 1.0 1.0
//! data
//! 0.5 0.0 -1.25 0.0
//! ...
//! ```
//!
//! Text payloads hold one line of `2^n` coefficients per node in blade-index
//! order, written in shortest round-trip form. Binary payloads hold the same
//! numbers as little-endian `f64` immediately after the `data` line.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use gft_core::{Grid, Multivector, SampledField, Signature};

pub const MAGIC: &str = "MVF 1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Field,
    Spectrum,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Field => "field",
            Kind::Spectrum => "spectrum",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Text,
    Binary,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Text => "text",
            Encoding::Binary => "binary",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

fn fail<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError(msg.into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldFile {
    pub kind: Kind,
    pub field: SampledField,
}

fn join<T: fmt::Debug>(values: &[T]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(" ")
}

impl FieldFile {
    pub fn new(kind: Kind, field: SampledField) -> Self {
        FieldFile { kind, field }
    }

    pub fn to_bytes(&self, encoding: Encoding) -> Vec<u8> {
        let sig = self.field.sig();
        let grid = self.field.grid();
        let mut out = String::new();
        writeln!(out, "{MAGIC}").unwrap();
        writeln!(out, "kind {}", self.kind).unwrap();
        writeln!(out, "encoding {encoding}").unwrap();
        writeln!(out, "p {}", sig.p()).unwrap();
        writeln!(out, "q {}", sig.q()).unwrap();
        writeln!(out, "m {}", grid.dim()).unwrap();
        writeln!(out, "dims {}", join(grid.dims())).unwrap();
        writeln!(out, "origin {}", join(grid.origin())).unwrap();
        writeln!(out, "spacing {}", join(grid.spacing())).unwrap();
        writeln!(out, "data").unwrap();
        let mut bytes = match encoding {
            Encoding::Text => {
                for v in self.field.data() {
                    writeln!(out, "{}", join(v.coeffs())).unwrap();
                }
                return out.into_bytes();
            }
            Encoding::Binary => out.into_bytes(),
        };
        for v in self.field.data() {
            for c in v.coeffs() {
                bytes.extend_from_slice(&c.to_le_bytes());
            }
        }
        bytes
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FormatError> {
        let (header, payload) = split_header(bytes)?;
        let kind = match header.kind.as_deref() {
            Some("field") => Kind::Field,
            Some("spectrum") => Kind::Spectrum,
            Some(other) => return fail(format!("unknown kind '{other}'")),
            None => return fail("missing 'kind' line"),
        };
        let encoding = match header.encoding.as_deref() {
            Some("text") => Encoding::Text,
            Some("binary") => Encoding::Binary,
            Some(other) => return fail(format!("unknown encoding '{other}'")),
            None => return fail("missing 'encoding' line"),
        };
        let (p, q) = match (header.p, header.q) {
            (Some(p), Some(q)) => (p, q),
            _ => return fail("missing 'p' or 'q' line"),
        };
        let sig = Signature::new(p, q).map_err(|e| FormatError(e.to_string()))?;
        let grid = header.grid()?;
        let blades = sig.blade_count();
        let expected = grid.len() * blades;
        let numbers: Vec<f64> = match encoding {
            Encoding::Text => {
                let text = std::str::from_utf8(payload).map_err(|_| FormatError("text payload is not UTF-8".into()))?;
                let mut numbers = Vec::with_capacity(expected);
                for (line_no, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                    let row: Vec<f64> = parse_list(line, "data")?;
                    if row.len() != blades {
                        return fail(format!(
                            "data line {} has {} coefficients, expected {blades}",
                            line_no + 1,
                            row.len()
                        ));
                    }
                    numbers.extend(row);
                }
                numbers
            }
            Encoding::Binary => {
                if payload.len() != expected * 8 {
                    return fail(format!("binary payload has {} bytes, expected {}", payload.len(), expected * 8));
                }
                payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect()
            }
        };
        if numbers.len() != expected {
            return fail(format!("payload has {} numbers, expected {expected}", numbers.len()));
        }
        let data = numbers
            .chunks_exact(blades)
            .map(|c| Multivector::from_coeffs(sig, c.to_vec()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| FormatError(e.to_string()))?;
        let field = SampledField::new(sig, grid, data).map_err(|e| FormatError(e.to_string()))?;
        Ok(FieldFile { kind, field })
    }
}

fn parse_list<T: FromStr>(text: &str, key: &str) -> Result<Vec<T>, FormatError> {
    text.split_whitespace()
        .map(|t| t.parse().map_err(|_| FormatError(format!("bad number '{t}' in '{key}'"))))
        .collect()
}

#[derive(Debug, Default)]
struct Header {
    kind: Option<String>,
    encoding: Option<String>,
    p: Option<usize>,
    q: Option<usize>,
    m: Option<usize>,
    dims: Option<Vec<usize>>,
    origin: Option<Vec<f64>>,
    spacing: Option<Vec<f64>>,
}

impl Header {
    fn grid(&self) -> Result<Grid, FormatError> {
        let (dims, origin, spacing) = match (&self.dims, &self.origin, &self.spacing) {
            (Some(d), Some(o), Some(s)) => (d.clone(), o.clone(), s.clone()),
            _ => return fail("header needs 'dims', 'origin' and 'spacing' lines"),
        };
        if let Some(m) = self.m {
            if dims.len() != m {
                return fail(format!("'m {m}' but {} extents", dims.len()));
            }
        }
        Grid::new(dims, origin, spacing).map_err(|e| FormatError(e.to_string()))
    }
}

/// Splits the file at the end of its `data` line.
fn split_header(bytes: &[u8]) -> Result<(Header, &[u8]), FormatError> {
    let mut header = Header::default();
    let mut pos = 0;
    let mut first = true;
    loop {
        let end = match bytes[pos..].iter().position(|&b| b == b'\n') {
            Some(off) => pos + off,
            None if pos < bytes.len() => bytes.len(),
            None => return fail("header ends without a 'data' line"),
        };
        let line = std::str::from_utf8(&bytes[pos..end]).map_err(|_| FormatError("header is not UTF-8".into()))?.trim();
        pos = (end + 1).min(bytes.len());
        if first {
            if line != MAGIC {
                return fail(format!("expected '{MAGIC}' on the first line, found '{line}'"));
            }
            first = false;
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "data" {
            return Ok((header, &bytes[pos..]));
        }
        let (key, value) = line.split_once(' ').unwrap_or((line, ""));
        let one = |v: &str| -> Result<usize, FormatError> {
            v.trim().parse().map_err(|_| FormatError(format!("bad value '{v}' for '{key}'")))
        };
        match key {
            "kind" => header.kind = Some(value.trim().to_string()),
            "encoding" => header.encoding = Some(value.trim().to_string()),
            "p" => header.p = Some(one(value)?),
            "q" => header.q = Some(one(value)?),
            "m" => header.m = Some(one(value)?),
            "dims" => header.dims = Some(parse_list(value, key)?),
            "origin" => header.origin = Some(parse_list(value, key)?),
            "spacing" => header.spacing = Some(parse_list(value, key)?),
            other => return fail(format!("unknown header key '{other}'")),
        }
    }
}

/// Reads only the grid from a grid description: the `dims`, `origin` and
/// `spacing` lines of an `.mvf` header. Other header lines and any payload
/// are ignored.
pub fn parse_grid(text: &[u8]) -> Result<Grid, FormatError> {
    let mut header = Header::default();
    for raw in text.split(|&b| b == b'\n') {
        let Ok(line) = std::str::from_utf8(raw) else {
            break;
        };
        let line = line.trim();
        if line == "data" {
            break;
        }
        let (key, value) = line.split_once(' ').unwrap_or((line, ""));
        match key {
            "dims" => header.dims = Some(parse_list(value, key)?),
            "origin" => header.origin = Some(parse_list(value, key)?),
            "spacing" => header.spacing = Some(parse_list(value, key)?),
            _ => {}
        }
    }
    header.grid()
}
