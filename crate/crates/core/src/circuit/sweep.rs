use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::netlist::{ComponentKind, Netlist};
use super::sim::{compare_to_math, simulate};
use crate::error::{Error, Result};
use crate::signal::csv::{fmt_num, WriteCsv};
use crate::signal::Signal;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub spread: usize,
    /// Mean over seeds.
    pub rms_error: f64,
    /// One entry per seed, in seed order.
    pub per_seed: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub base_seed: u64,
    pub rows: Vec<SweepRow>,
}

impl WriteCsv for SweepTable {
    fn write_csv_to<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "spread,rms_error")?;
        for r in &self.rows {
            writeln!(w, "{},{}", r.spread, fmt_num(r.rms_error))?;
        }
        Ok(())
    }
}

/// Monte-Carlo delay-mismatch sweep.
///
/// For each spread `s` and each of `seeds` runs, every functional component
/// (alignment delay lines excluded) gets its delay moved by an integer drawn
/// uniformly from `-s..=s`, floored at zero. Seed `i` reuses the same
/// uniform draws at every spread, so a component's offset only grows in
/// magnitude as `s` grows.
///
/// The output is compared against `reference` delayed by the unperturbed
/// netlist latency (see [`Netlist::latency_at`]), so a perfectly synchronized circuit scores zero. The
/// cold-start transient, as long as the worst-case latency at that spread,
/// is left out of the rms.
pub fn delay_sweep(
    net: &Netlist,
    inputs: &[(&str, &Signal)],
    reference: &Signal,
    spreads: impl IntoIterator<Item = usize>,
    seeds: usize,
    base_seed: u64,
) -> Result<SweepTable> {
    let target = reference.shift(net.latency_at(reference.dt()) as isize);
    let seeds = seeds.max(1);
    let draws: Vec<Vec<f64>> = (0..seeds as u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(i));
            net.components()
                .iter()
                .map(|_| rng.random::<f64>())
                .collect()
        })
        .collect();

    let mut rows = Vec::new();
    for spread in spreads {
        let skip = worst_case_latency(net, spread, reference.dt())?;
        if skip >= reference.len() {
            return Err(Error::BadParam(format!(
                "spread {spread} gives a {skip}-sample startup transient, longer than the input"
            )));
        }
        let per_seed = draws
            .par_iter()
            .map(|u| {
                let perturbed = perturb(net, u, spread)?;
                let trace = simulate(&perturbed, inputs)?;
                let err = compare_to_math(&trace, &target)?.error_signal;
                let tail = &err.samples()[skip..];
                Ok((tail.iter().map(|e| e * e).sum::<f64>() / tail.len() as f64).sqrt())
            })
            .collect::<Result<Vec<f64>>>()?;
        let rms_error = per_seed.iter().sum::<f64>() / per_seed.len() as f64;
        rows.push(SweepRow {
            spread,
            rms_error,
            per_seed,
        });
    }
    Ok(SweepTable { base_seed, rows })
}

/// Latency with every functional component slowed by `spread`.
fn worst_case_latency(net: &Netlist, spread: usize, dt: f64) -> Result<usize> {
    let mut slow = net.clone();
    for (i, c) in net.components().iter().enumerate() {
        if c.kind() != ComponentKind::Delay {
            slow.set_params(i, c.params.with_delay(c.params.delay_samples + spread))?;
        }
    }
    Ok(slow.latency_at(dt))
}

fn perturb(net: &Netlist, draws: &[f64], spread: usize) -> Result<Netlist> {
    let mut out = net.clone();
    let width = (2 * spread + 1) as f64;
    for (i, (c, &u)) in net.components().iter().zip(draws).enumerate() {
        if c.kind() == ComponentKind::Delay {
            continue;
        }
        let offset = (u * width).floor() as i64 - spread as i64;
        let delay = (c.params.delay_samples as i64 + offset).max(0) as usize;
        out.set_params(i, c.params.with_delay(delay))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_netlist, ComponentParams, NetlistKind};
    use crate::signal::gen::{generate, GenParams, Waveform};

    #[test]
    fn zero_spread_is_exact() {
        let net = build_netlist(NetlistKind::CommonProduct, ComponentParams::ideal());
        let f = generate(Waveform::Sine, &GenParams::default(), 1e-2, 100).unwrap();
        let g = generate(Waveform::Cosine, &GenParams::default(), 1e-2, 100).unwrap();
        let reference = NetlistKind::CommonProduct.reference(&[&f, &g]).unwrap();
        let t = delay_sweep(&net, &[("f", &f), ("g", &g)], &reference, [0], 5, 1).unwrap();
        assert_eq!(t.rows[0].rms_error, 0.0);
    }

    #[test]
    fn latency_is_compensated() {
        let net = build_netlist(
            NetlistKind::CommonProduct,
            ComponentParams::ideal().with_delay(3),
        );
        let f = generate(Waveform::Sine, &GenParams::default(), 1e-2, 100).unwrap();
        let g = generate(Waveform::Cosine, &GenParams::default(), 1e-2, 100).unwrap();
        let reference = NetlistKind::CommonProduct.reference(&[&f, &g]).unwrap();
        let t = delay_sweep(&net, &[("f", &f), ("g", &g)], &reference, [0], 3, 9).unwrap();
        assert!(t.rows[0].rms_error < 1e-15);
    }

    #[test]
    fn constant_sign_input_is_immune() {
        let net = build_netlist(NetlistKind::Sign, ComponentParams::default());
        let f = Signal::new(
            1e-3,
            0.0,
            (0..200).map(|k| 1.0 + (k as f64 * 0.1).sin()).collect(),
        )
        .unwrap();
        let reference = NetlistKind::Sign.reference(&[&f]).unwrap();
        let t = delay_sweep(&net, &[("f", &f)], &reference, [2], 20, 0).unwrap();
        assert!(t.rows[0].per_seed.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn offsets_are_uniform_and_monotone() {
        for spread in 0..6usize {
            let w = (2 * spread + 1) as f64;
            let mut seen = vec![false; 2 * spread + 1];
            for i in 0..1000 {
                let u = i as f64 / 1000.0;
                let off = (u * w).floor() as i64 - spread as i64;
                assert!(off.unsigned_abs() as usize <= spread);
                seen[(off + spread as i64) as usize] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }
}
