//! Uniformly sampled signals and sign series.
//!
//! A [`Signal`] is a finite run of real samples on the grid `t0 + k * dt`.
//! The sample window doubles as the integration support for every
//! functional in [`crate::correlation`]. Values are immutable once built.

pub mod csv;
pub mod gen;

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    dt: f64,
    t0: f64,
    samples: Vec<f64>,
}

impl Signal {
    /// Validates and wraps a sample vector.
    pub fn new(dt: f64, t0: f64, samples: Vec<f64>) -> Result<Self> {
        check_grid(dt, t0)?;
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Signal { dt, t0, samples })
    }

    /// Constant signal of `len` samples.
    pub fn constant(dt: f64, t0: f64, len: usize, value: f64) -> Result<Self> {
        Signal::new(dt, t0, vec![value; len])
    }

    /// Caller guarantees the grid is valid and every sample is finite.
    pub(crate) fn from_parts(dt: f64, t0: f64, samples: Vec<f64>) -> Self {
        debug_assert!(dt > 0.0 && dt.is_finite() && t0.is_finite());
        debug_assert!(!samples.is_empty() && samples.iter().all(|v| v.is_finite()));
        Signal { dt, t0, samples }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; signals hold at least one sample.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Time stamp of sample `k`.
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// True when both signals share length, `dt` and `t0` exactly.
    pub fn same_grid(&self, other: &Signal) -> bool {
        self.len() == other.len() && self.dt == other.dt && self.t0 == other.t0
    }

    pub(crate) fn require_same_grid(&self, other: &Signal) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(grid_mismatch(
                (self.len(), self.dt, self.t0),
                (other.len(), other.dt, other.t0),
            )))
        }
    }

    /// Elementwise map for operations that cannot leave the finite reals.
    pub(crate) fn map_finite(&self, f: impl Fn(f64) -> f64) -> Signal {
        Signal::from_parts(
            self.dt,
            self.t0,
            self.samples.iter().map(|&v| f(v)).collect(),
        )
    }

    /// Elementwise map, re-validating the result.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Signal> {
        Signal::new(
            self.dt,
            self.t0,
            self.samples.iter().map(|&v| f(v)).collect(),
        )
    }

    /// Elementwise combination of two signals on the same grid.
    pub fn zip_with(&self, other: &Signal, f: impl Fn(f64, f64) -> f64) -> Result<Signal> {
        self.require_same_grid(other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Signal::new(self.dt, self.t0, samples)
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Signal) -> Result<Signal> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Signal) -> Result<Signal> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, factor: f64) -> Result<Signal> {
        self.map(|v| v * factor)
    }

    /// Moves samples right by `k` (left for negative `k`), zero-filling the
    /// vacated positions. Length and grid are unchanged.
    pub fn shift(&self, k: isize) -> Signal {
        let n = self.len() as isize;
        let samples = (0..n)
            .map(|i| {
                let src = i - k;
                if (0..n).contains(&src) {
                    self.samples[src as usize]
                } else {
                    0.0
                }
            })
            .collect();
        Signal::from_parts(self.dt, self.t0, samples)
    }
}

/// Value of a sign function at one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(i8)]
pub enum Sign {
    Neg = -1,
    Pos = 1,
}

impl Sign {
    /// `Pos` for `v >= 0` (zero included), `Neg` otherwise.
    pub fn of(v: f64) -> Sign {
        if v >= 0.0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn as_f64(self) -> f64 {
        self as i8 as f64
    }

    pub fn product(self, other: Sign) -> Sign {
        if self == other {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Pos => f.write_str("+1"),
            Sign::Neg => f.write_str("-1"),
        }
    }
}

/// A ±1 series on the same kind of grid as [`Signal`].
#[derive(Debug, Clone, PartialEq)]
pub struct SignSeries {
    dt: f64,
    t0: f64,
    values: Vec<Sign>,
}

impl SignSeries {
    pub fn new(dt: f64, t0: f64, values: Vec<Sign>) -> Result<Self> {
        check_grid(dt, t0)?;
        if values.is_empty() {
            return Err(Error::EmptySignal);
        }
        Ok(SignSeries { dt, t0, values })
    }

    /// Reads a series back from a signal whose samples are exactly ±1.
    pub fn from_signal(s: &Signal) -> Result<Self> {
        let values = s
            .samples()
            .iter()
            .enumerate()
            .map(|(i, &v)| match v {
                1.0 => Ok(Sign::Pos),
                -1.0 => Ok(Sign::Neg),
                v => Err(Error::BadParam(format!(
                    "sample {i} is {v}, sign series values must be +1 or -1"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SignSeries {
            dt: s.dt(),
            t0: s.t0(),
            values,
        })
    }

    pub(crate) fn from_parts(dt: f64, t0: f64, values: Vec<Sign>) -> Self {
        SignSeries { dt, t0, values }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn values(&self) -> &[Sign] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_signal(&self) -> Signal {
        Signal::from_parts(
            self.dt,
            self.t0,
            self.values.iter().map(|s| s.as_f64()).collect(),
        )
    }

    pub(crate) fn require_grid_of(&self, s: &Signal) -> Result<()> {
        if self.len() == s.len() && self.dt == s.dt() && self.t0 == s.t0() {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(grid_mismatch(
                (s.len(), s.dt(), s.t0()),
                (self.len(), self.dt, self.t0),
            )))
        }
    }
}

fn check_grid(dt: f64, t0: f64) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::NonPositiveDt(dt));
    }
    if !t0.is_finite() {
        return Err(Error::BadParam(format!("t0 must be finite, got {t0}")));
    }
    Ok(())
}

fn grid_mismatch(a: (usize, f64, f64), b: (usize, f64, f64)) -> String {
    format!(
        "len/dt/t0 {}/{}/{} vs {}/{}/{}",
        a.0, a.1, a.2, b.0, b.1, b.2
    )
}
