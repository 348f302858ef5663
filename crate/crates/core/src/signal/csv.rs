//! Plain-text CSV formats.
//!
//! Signal files carry a `# dt=<float> t0=<float>` header and one sample per
//! line. Numbers are written in their shortest round-trip form, so reading a
//! file back reproduces every value bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::Signal;
use crate::error::{Error, Result};

/// Anything that has a CSV representation.
pub trait WriteCsv {
    fn write_csv_to<W: Write>(&self, w: &mut W) -> Result<()>;

    fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv_to(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ASCII")
    }
}

/// Writes `value` to `path`, replacing any existing file.
pub fn write_csv(path: impl AsRef<Path>, value: &impl WriteCsv) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    value.write_csv_to(&mut w)?;
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Signal> {
    read_signal(File::open(path)?)
}

/// Formats a number so that `str::parse::<f64>` recovers it exactly.
/// Negative zero prints as `0`.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl WriteCsv for Signal {
    fn write_csv_to<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "# dt={} t0={}", fmt_num(self.dt()), fmt_num(self.t0()))?;
        for &v in self.samples() {
            writeln!(w, "{}", fmt_num(v))?;
        }
        Ok(())
    }
}

pub fn read_signal(r: impl Read) -> Result<Signal> {
    let mut lines = numbered_lines(r);
    let (line_no, header) = lines
        .next()
        .transpose()?
        .ok_or_else(|| parse_err(1, "empty file, expected `# dt=... t0=...` header"))?;
    let fields = parse_header(line_no, &header)?;
    let dt = header_field(line_no, &fields, "dt")?;
    let t0 = header_field(line_no, &fields, "t0")?;

    let mut samples = Vec::new();
    for item in lines {
        let (line_no, line) = item?;
        let cell = line.trim();
        if cell.is_empty() {
            continue;
        }
        samples.push(parse_number(line_no, cell)?);
    }
    Signal::new(dt, t0, samples).map_err(|e| match e {
        Error::NonPositiveDt(_) | Error::BadParam(_) => parse_err(line_no, &e.to_string()),
        other => other,
    })
}

/// Yields `(1-based line number, line)` with trailing `\r` stripped.
pub(crate) fn numbered_lines(r: impl Read) -> impl Iterator<Item = Result<(usize, String)>> {
    BufReader::new(r).lines().enumerate().map(|(i, l)| {
        l.map(|mut s| {
            if s.ends_with('\r') {
                s.pop();
            }
            (i + 1, s)
        })
        .map_err(Error::from)
    })
}

/// Parses `# key=value key=value ...`.
pub(crate) fn parse_header(line_no: usize, line: &str) -> Result<Vec<(String, String)>> {
    let body = line
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| parse_err(line_no, "expected header starting with `#`"))?;
    body.split_whitespace()
        .map(|tok| {
            tok.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| parse_err(line_no, &format!("malformed header field `{tok}`")))
        })
        .collect()
}

pub(crate) fn header_field(line_no: usize, fields: &[(String, String)], key: &str) -> Result<f64> {
    let (_, v) = fields
        .iter()
        .find(|(k, _)| k == key)
        .ok_or_else(|| parse_err(line_no, &format!("header is missing `{key}`")))?;
    parse_number(line_no, v)
}

pub(crate) fn parse_number(line_no: usize, cell: &str) -> Result<f64> {
    let v: f64 = cell
        .trim()
        .parse()
        .map_err(|_| parse_err(line_no, &format!("`{cell}` is not a number")))?;
    if !v.is_finite() {
        return Err(parse_err(line_no, &format!("`{cell}` is not finite")));
    }
    Ok(v)
}

pub(crate) fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}
