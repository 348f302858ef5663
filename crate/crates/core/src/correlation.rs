//! Common-product functional and cross-correlation.
//!
//! Integrals are plain Riemann sums, `Σ x[i] · dt`, over the sample window.
//! Correlation lags are whole samples; samples falling outside either
//! signal contribute zero.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ops::common_product_at;
use crate::signal::csv::{self, fmt_num, WriteCsv};
use crate::signal::Signal;

/// Pointwise kernel used inside a functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// `s_fg · min(|f|, |g|)`
    Common,
    /// `f · g`
    Classic,
}

impl Kind {
    #[inline]
    fn kernel(self, a: f64, b: f64) -> f64 {
        match self {
            Kind::Common => common_product_at(a, b),
            Kind::Classic => a * b,
        }
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "common" => Ok(Kind::Common),
            "classic" => Ok(Kind::Classic),
            _ => Err(Error::BadParam(format!("unknown correlation kind `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every lag with any overlap.
    Full,
    /// Only lags where the second signal lies entirely inside the first.
    Valid,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Mode::Full),
            "valid" => Ok(Mode::Valid),
            _ => Err(Error::BadParam(format!("unknown correlation mode `{s}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Full => "full",
            Mode::Valid => "valid",
        })
    }
}

/// Correlation values over a contiguous run of integer lags.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationResult {
    dt: f64,
    first_lag: i64,
    values: Vec<f64>,
    mode: Mode,
}

impl CorrelationResult {
    pub fn new(dt: f64, first_lag: i64, values: Vec<f64>, mode: Mode) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::NonPositiveDt(dt));
        }
        if values.is_empty() {
            return Err(Error::EmptySignal);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(CorrelationResult {
            dt,
            first_lag,
            values,
            mode,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn first_lag(&self) -> i64 {
        self.first_lag
    }

    pub fn last_lag(&self) -> i64 {
        self.first_lag + self.values.len() as i64 - 1
    }

    pub fn lags(&self) -> impl Iterator<Item = i64> + '_ {
        self.first_lag..=self.last_lag()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, lag: i64) -> Option<f64> {
        let idx = lag.checked_sub(self.first_lag)?;
        usize::try_from(idx)
            .ok()
            .and_then(|i| self.values.get(i).copied())
    }
}

impl WriteCsv for CorrelationResult {
    fn write_csv_to<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "# dt={}", fmt_num(self.dt))?;
        writeln!(w, "lag_samples,value")?;
        for (lag, &v) in self.lags().zip(&self.values) {
            writeln!(w, "{lag},{}", fmt_num(v))?;
        }
        Ok(())
    }
}

/// Reads a correlation CSV. The file does not record the mode; `Full` is
/// assumed unless the header carries `mode=valid`.
pub fn read_correlation(r: impl Read) -> Result<CorrelationResult> {
    let mut lines = csv::numbered_lines(r);
    let (hdr_line, header) = lines
        .next()
        .transpose()?
        .ok_or_else(|| csv::parse_err(1, "empty file, expected `# dt=...` header"))?;
    let fields = csv::parse_header(hdr_line, &header)?;
    let dt = csv::header_field(hdr_line, &fields, "dt")?;
    let mode = match fields.iter().find(|(k, _)| k == "mode") {
        Some((_, m)) => m
            .parse()
            .map_err(|_| csv::parse_err(hdr_line, "bad mode"))?,
        None => Mode::Full,
    };

    let mut first_lag = None;
    let mut values = Vec::new();
    for item in lines {
        let (line_no, line) = item?;
        let line = line.trim();
        if line.is_empty() || line == "lag_samples,value" {
            continue;
        }
        let (lag, value) = line
            .split_once(',')
            .ok_or_else(|| csv::parse_err(line_no, "expected `lag_samples,value`"))?;
        let lag: i64 = lag
            .trim()
            .parse()
            .map_err(|_| csv::parse_err(line_no, &format!("`{lag}` is not an integer lag")))?;
        let expected = first_lag.map(|f: i64| f + values.len() as i64);
        match expected {
            None => first_lag = Some(lag),
            Some(e) if e != lag => {
                return Err(csv::parse_err(
                    line_no,
                    "lags must be contiguous and increasing",
                ))
            }
            Some(_) => {}
        }
        values.push(csv::parse_number(line_no, value)?);
    }
    let first_lag = first_lag.ok_or_else(|| csv::parse_err(hdr_line, "no rows"))?;
    CorrelationResult::new(dt, first_lag, values, mode)
}

/// `Σ common_product(f, g)[i] · dt`.
pub fn common_functional(f: &Signal, g: &Signal) -> Result<f64> {
    functional(f, g, Kind::Common)
}

/// `Σ f[i] · g[i] · dt`, the inner-product baseline.
pub fn classic_functional(f: &Signal, g: &Signal) -> Result<f64> {
    functional(f, g, Kind::Classic)
}

pub fn functional(f: &Signal, g: &Signal, kind: Kind) -> Result<f64> {
    f.require_same_grid(g)?;
    Ok(overlap_sum(f.samples(), g.samples(), 0, kind) * f.dt())
}

/// Correlates `f` against lag-shifted copies of `g`: the value at lag `k`
/// is the functional of `f(t)` and `g(t - k·dt)` over their overlap.
///
/// `Full` covers lags `-(len g - 1) ..= len f - 1`; `Valid` covers
/// `0 ..= len f - len g`. Lags are evaluated in parallel; output order is
/// always ascending lag.
pub fn cross_correlate(
    f: &Signal,
    g: &Signal,
    kind: Kind,
    mode: Mode,
) -> Result<CorrelationResult> {
    if f.dt() != g.dt() {
        return Err(Error::ShapeMismatch(format!("dt {} vs {}", f.dt(), g.dt())));
    }
    let n = f.len() as i64;
    let m = g.len() as i64;
    let (lo, hi) = match mode {
        Mode::Full => (-(m - 1), n - 1),
        Mode::Valid => {
            if n < m {
                return Err(Error::BadMode(format!(
                    "valid mode needs len(f) >= len(g), got {n} < {m}"
                )));
            }
            (0, n - m)
        }
    };
    let (fs, gs, dt) = (f.samples(), g.samples(), f.dt());
    let values: Vec<f64> = (lo..=hi)
        .into_par_iter()
        .map(|k| overlap_sum(fs, gs, k, kind) * dt)
        .collect();
    CorrelationResult::new(dt, lo, values, mode)
}

/// `Σ_i kernel(f[i], g[i - lag])` over indices valid in both slices.
fn overlap_sum(f: &[f64], g: &[f64], lag: i64, kind: Kind) -> f64 {
    let start = lag.max(0);
    let end = (f.len() as i64).min(g.len() as i64 + lag);
    (start..end)
        .map(|i| kind.kernel(f[i as usize], g[(i - lag) as usize]))
        .sum()
}

/// Real-valued Jaccard index: the common functional over
/// `Σ max(|f|, |g|) · dt`. Lies in `[-1, 1]`.
pub fn jaccard_index(f: &Signal, g: &Signal) -> Result<f64> {
    let num = common_functional(f, g)?;
    let den: f64 = f
        .samples()
        .iter()
        .zip(g.samples())
        .map(|(a, b)| a.abs().max(b.abs()))
        .sum::<f64>()
        * f.dt();
    if den == 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(num / den)
}

/// Shape of the dominant correlation peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakMetrics {
    pub peak_lag: i64,
    pub peak_value: f64,
    /// Width of the peak at half its height, in lags, from linear
    /// interpolation between neighbouring lags. Clamped to the lag range.
    pub half_width: f64,
    /// Largest `|value|` strictly outside the half-height window, over
    /// `|peak_value|`.
    pub secondary_ratio: f64,
}

impl fmt::Display for PeakMetrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "peak_lag={} peak_value={} half_width={} secondary_ratio={}",
            self.peak_lag,
            fmt_num(self.peak_value),
            fmt_num(self.half_width),
            fmt_num(self.secondary_ratio)
        )
    }
}

pub fn peak_metrics(r: &CorrelationResult) -> Result<PeakMetrics> {
    let v = r.values();
    if v.iter().all(|&x| x == v[0]) {
        return Err(Error::FlatResult);
    }
    // first maximum
    let p = v
        .iter()
        .enumerate()
        .fold(0, |best, (i, &x)| if x > v[best] { i } else { best });
    let peak = v[p];

    // fractional index positions of the half-height crossings
    let (left, right) = if peak > 0.0 {
        let half = 0.5 * peak;
        let left = (0..p)
            .rev()
            .find(|&j| v[j] <= half)
            .map(|j| j as f64 + (half - v[j]) / (v[j + 1] - v[j]))
            .unwrap_or(0.0);
        let right = (p + 1..v.len())
            .find(|&j| v[j] <= half)
            .map(|j| j as f64 - (half - v[j]) / (v[j - 1] - v[j]))
            .unwrap_or((v.len() - 1) as f64);
        (left, right)
    } else {
        (p as f64, p as f64)
    };

    let secondary = v
        .iter()
        .enumerate()
        .filter(|&(i, _)| (i as f64) < left || (i as f64) > right)
        .map(|(_, x)| x.abs())
        .fold(0.0, f64::max);
    let secondary_ratio = if secondary == 0.0 {
        0.0
    } else if peak == 0.0 {
        f64::INFINITY
    } else {
        secondary / peak.abs()
    };

    Ok(PeakMetrics {
        peak_lag: r.first_lag() + p as i64,
        peak_value: peak,
        half_width: right - left,
        secondary_ratio,
    })
}
