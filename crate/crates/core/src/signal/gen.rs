//! Deterministic waveform generators.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::Signal;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Waveform {
    Sine,
    Cosine,
    Square,
    GaussianPulse,
    TrianglePulse,
    WhiteNoise,
}

impl Waveform {
    pub const ALL: [Waveform; 6] = [
        Waveform::Sine,
        Waveform::Cosine,
        Waveform::Square,
        Waveform::GaussianPulse,
        Waveform::TrianglePulse,
        Waveform::WhiteNoise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Waveform::Sine => "sine",
            Waveform::Cosine => "cosine",
            Waveform::Square => "square",
            Waveform::GaussianPulse => "gaussian_pulse",
            Waveform::TrianglePulse => "triangle_pulse",
            Waveform::WhiteNoise => "white_noise",
        }
    }
}

impl fmt::Display for Waveform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Waveform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Waveform::ALL
            .into_iter()
            .find(|w| w.name() == s)
            .ok_or_else(|| Error::BadParam(format!("unknown waveform `{s}`")))
    }
}

/// Generator parameters. Unused fields are ignored by waveforms that do not
/// need them.
#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub amplitude: f64,
    /// Hz.
    pub frequency: f64,
    /// Radians.
    pub phase: f64,
    /// Pulse center, seconds.
    pub center: f64,
    /// Gaussian standard deviation or full triangle base, seconds.
    pub width: f64,
    /// Required for white noise.
    pub seed: Option<u64>,
    pub t0: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            amplitude: 1.0,
            frequency: 1.0,
            phase: 0.0,
            center: 0.0,
            width: 1.0,
            seed: None,
            t0: 0.0,
        }
    }
}

/// Evaluates `kind` at `t0 + k * dt` for `k in 0..n`.
pub fn generate(kind: Waveform, p: &GenParams, dt: f64, n: usize) -> Result<Signal> {
    if !(p.amplitude.is_finite() && p.amplitude >= 0.0) {
        return Err(Error::BadParam(format!(
            "amplitude must be finite and >= 0, got {}",
            p.amplitude
        )));
    }
    if !(p.frequency.is_finite() && p.frequency >= 0.0) {
        return Err(Error::BadParam(format!(
            "frequency must be finite and >= 0, got {}",
            p.frequency
        )));
    }
    if !p.phase.is_finite() || !p.center.is_finite() {
        return Err(Error::BadParam("phase and center must be finite".into()));
    }
    if matches!(kind, Waveform::GaussianPulse | Waveform::TrianglePulse)
        && !(p.width.is_finite() && p.width > 0.0)
    {
        return Err(Error::BadParam(format!(
            "width must be > 0, got {}",
            p.width
        )));
    }
    if n == 0 {
        return Err(Error::EmptySignal);
    }

    let a = p.amplitude;
    let time = |k: usize| p.t0 + k as f64 * dt;
    let turns = |k: usize| p.frequency * time(k) + p.phase / TAU;

    let samples: Vec<f64> = match kind {
        Waveform::Sine => (0..n).map(|k| a * sin_turns(turns(k))).collect(),
        Waveform::Cosine => (0..n).map(|k| a * sin_turns(turns(k) + 0.25)).collect(),
        Waveform::Square => (0..n)
            .map(|k| if sin_turns(turns(k)) >= 0.0 { a } else { -a })
            .collect(),
        Waveform::GaussianPulse => (0..n)
            .map(|k| {
                let z = (time(k) - p.center) / p.width;
                a * (-0.5 * z * z).exp()
            })
            .collect(),
        Waveform::TrianglePulse => (0..n)
            .map(|k| a * (1.0 - (time(k) - p.center).abs() / (0.5 * p.width)).max(0.0))
            .collect(),
        Waveform::WhiteNoise => {
            let seed = p
                .seed
                .ok_or_else(|| Error::BadParam("white_noise requires an explicit seed".into()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let normal = Normal::new(0.0, a).map_err(|e| Error::BadParam(e.to_string()))?;
            (0..n).map(|_| normal.sample(&mut rng)).collect()
        }
    };
    // fold -0.0 into 0.0
    Signal::new(dt, p.t0, samples.into_iter().map(|v| v + 0.0).collect())
}

/// `sin(2π x)` with the argument reduced to the nearest quarter turn first,
/// so that quarter-period samples come out exact.
pub(crate) fn sin_turns(x: f64) -> f64 {
    let r = x - x.floor();
    let q = (r * 4.0).round();
    let theta = TAU * (r - q * 0.25);
    match q as u8 % 4 {
        0 => theta.sin(),
        1 => theta.cos(),
        2 => -theta.sin(),
        _ => -theta.cos(),
    }
}
