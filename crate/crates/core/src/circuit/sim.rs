use std::collections::HashMap;
use std::f64::consts::TAU;
use std::io::{Read, Write};

use super::netlist::{Component, ComponentParams, Element, Netlist, GROUND};
use crate::error::{Error, Result};
use crate::signal::csv::{self, fmt_num, WriteCsv};
use crate::signal::Signal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimOptions {
    /// Internal steps per input sample. Inputs are held between samples and
    /// the trace keeps the first sub-step of each sample. Component delays
    /// are counted in internal steps.
    pub oversample: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { oversample: 1 }
    }
}

/// Recorded waveforms of a simulation run, one per node, in netlist order
/// (inputs first).
#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    dt: f64,
    t0: f64,
    nodes: Vec<(String, Vec<f64>)>,
    output: String,
}

impl SimTrace {
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn len(&self) -> usize {
        self.nodes.first().map_or(0, |(_, v)| v.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node_names(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|(n, _)| n.as_str())
    }

    pub fn node(&self, name: &str) -> Option<&[f64]> {
        self.nodes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn node_signal(&self, name: &str) -> Option<Signal> {
        self.node(name)
            .map(|v| Signal::from_parts(self.dt, self.t0, v.to_vec()))
    }

    pub fn output_name(&self) -> &str {
        &self.output
    }

    pub fn output(&self) -> Signal {
        self.node_signal(&self.output)
            .expect("trace always records its output node")
    }
}

impl WriteCsv for SimTrace {
    fn write_csv_to<W: Write>(&self, w: &mut W) -> Result<()> {
        // output column last
        let cols: Vec<&(String, Vec<f64>)> = self
            .nodes
            .iter()
            .filter(|(n, _)| *n != self.output)
            .chain(self.nodes.iter().filter(|(n, _)| *n == self.output))
            .collect();
        let mut header = String::from("t");
        for (name, _) in &cols {
            header.push(',');
            header.push_str(name);
        }
        writeln!(w, "{header}")?;
        for k in 0..self.len() {
            let mut row = fmt_num(self.t0 + k as f64 * self.dt);
            for (_, v) in &cols {
                row.push(',');
                row.push_str(&fmt_num(v[k]));
            }
            writeln!(w, "{row}")?;
        }
        Ok(())
    }
}

impl SimTrace {
    /// Reads a trace CSV back. `dt` and `t0` come from the `t` column; the
    /// output node is taken to be the last column.
    pub fn read_csv(r: impl Read) -> Result<SimTrace> {
        let mut lines = csv::numbered_lines(r);
        let (_, header) = lines
            .next()
            .transpose()?
            .ok_or_else(|| csv::parse_err(1, "empty trace file"))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.first() != Some(&"t") || cols.len() < 2 {
            return Err(csv::parse_err(1, "expected `t,<node>,...` header"));
        }
        let mut time = Vec::new();
        let mut nodes: Vec<(String, Vec<f64>)> = cols[1..]
            .iter()
            .map(|c| (c.to_string(), Vec::new()))
            .collect();
        for item in lines {
            let (line_no, line) = item?;
            if line.trim().is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != cols.len() {
                return Err(csv::parse_err(
                    line_no,
                    &format!("expected {} columns, found {}", cols.len(), cells.len()),
                ));
            }
            time.push(csv::parse_number(line_no, cells[0])?);
            for (slot, cell) in nodes.iter_mut().zip(&cells[1..]) {
                slot.1.push(csv::parse_number(line_no, cell)?);
            }
        }
        if time.len() < 2 {
            return Err(csv::parse_err(1, "need at least two rows to recover dt"));
        }
        let dt = time[1] - time[0];
        if dt <= 0.0 || dt.is_nan() {
            return Err(Error::NonPositiveDt(dt));
        }
        let output = nodes.last().map(|(n, _)| n.clone()).unwrap_or_default();
        Ok(SimTrace {
            dt,
            t0: time[0],
            nodes,
            output,
        })
    }
}

pub fn simulate(net: &Netlist, inputs: &[(&str, &Signal)]) -> Result<SimTrace> {
    simulate_with(net, inputs, SimOptions::default())
}

/// Steps every component once per internal time step, in netlist order.
///
/// Each component first computes an undelayed value from its inputs at the
/// current step, then emits the value it computed `delay_samples` steps
/// earlier (zero before that).
pub fn simulate_with(
    net: &Netlist,
    inputs: &[(&str, &Signal)],
    opts: SimOptions,
) -> Result<SimTrace> {
    let by_name: HashMap<&str, &Signal> = inputs.iter().copied().collect();
    let bound: Vec<&Signal> = net
        .inputs()
        .iter()
        .map(|n| {
            by_name
                .get(n.as_str())
                .copied()
                .ok_or_else(|| Error::UnboundInput(n.clone()))
        })
        .collect::<Result<_>>()?;
    let first = bound
        .first()
        .copied()
        .ok_or_else(|| Error::InvalidNetlist("netlist has no inputs".into()))?;
    if let Some(bad) = bound.iter().find(|s| !s.same_grid(first)) {
        return Err(Error::MetadataMismatch(format!(
            "input grids differ: len/dt/t0 {}/{}/{} vs {}/{}/{}",
            first.len(),
            first.dt(),
            first.t0(),
            bad.len(),
            bad.dt(),
            bad.t0()
        )));
    }
    if opts.oversample == 0 {
        return Err(Error::BadParam("oversample must be >= 1".into()));
    }

    let m = opts.oversample;
    let n_out = first.len();
    let steps = n_out * m;
    let step_dt = first.dt() / m as f64;

    // node slots: gnd, inputs, component outputs
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut names: Vec<&str> = vec![GROUND];
    let mut waves: Vec<Vec<f64>> = vec![vec![0.0; steps]];
    index.insert(GROUND, 0);
    for (name, sig) in net.inputs().iter().zip(&bound) {
        index.insert(name, waves.len());
        names.push(name);
        waves.push(
            sig.samples()
                .iter()
                .flat_map(|&v| std::iter::repeat_n(v, m))
                .collect(),
        );
    }
    let mut states: Vec<State> = Vec::with_capacity(net.components().len());
    for c in net.components() {
        let ins = c.element.inputs().iter().map(|n| index[n]).collect();
        states.push(State::new(c, ins, steps));
        index.insert(&c.output, waves.len());
        names.push(&c.output);
        waves.push(vec![0.0; steps]);
    }

    let first_out = 1 + net.inputs().len();
    #[allow(clippy::needless_range_loop)]
    for k in 0..steps {
        for (i, (c, st)) in net.components().iter().zip(states.iter_mut()).enumerate() {
            let x: [f64; 3] = {
                let mut x = [0.0; 3];
                for (slot, &src) in x.iter_mut().zip(&st.inputs) {
                    *slot = waves[src][k];
                }
                x
            };
            let y = st.step(c, &x, k, step_dt);
            waves[first_out + i][k] = y;
        }
    }

    let mut nodes = Vec::with_capacity(waves.len() - 1);
    for (name, wave) in names.into_iter().zip(waves).skip(1) {
        let decimated: Vec<f64> = wave.into_iter().step_by(m).collect();
        if let Some(index) = decimated.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        nodes.push((name.to_string(), decimated));
    }
    Ok(SimTrace {
        dt: first.dt(),
        t0: first.t0(),
        nodes,
        output: net.output().to_string(),
    })
}

/// Per-component run state.
struct State {
    inputs: Vec<usize>,
    /// Undelayed values, indexed by step.
    raw: Vec<f64>,
    /// Pending glitch contributions, indexed by step.
    glitch: Vec<f64>,
    last_ctrl: Option<bool>,
    acc: f64,
}

impl State {
    fn new(c: &Component, inputs: Vec<usize>, steps: usize) -> Self {
        let glitchy = matches!(c.element, Element::AnalogSwitch { .. })
            && c.params.glitch_amplitude > 0.0
            && c.params.glitch_width_samples > 0;
        State {
            inputs,
            raw: Vec::with_capacity(steps),
            glitch: if glitchy {
                vec![0.0; steps]
            } else {
                Vec::new()
            },
            last_ctrl: None,
            acc: 0.0,
        }
    }

    fn step(&mut self, c: &Component, x: &[f64; 3], k: usize, dt: f64) -> f64 {
        let p: &ComponentParams = &c.params;
        let logic = |b: bool| if b { p.logic_high } else { p.logic_low };
        let thr = p.logic_threshold();
        let u = match &c.element {
            Element::Comparator { .. } => logic(x[0] >= x[1]),
            Element::AnalogSwitch { .. } => {
                let high = x[2] >= thr;
                if let Some(prev) = self.last_ctrl {
                    if prev != high && !self.glitch.is_empty() {
                        // biphasic pulse, leading with the edge direction
                        let lead = if high { 1.0 } else { -1.0 };
                        let end = (k + p.glitch_width_samples).min(self.glitch.len());
                        for (j, g) in self.glitch[k..end].iter_mut().enumerate() {
                            let phase = if j % 2 == 0 { lead } else { -lead };
                            *g += phase * p.glitch_amplitude;
                        }
                    }
                }
                self.last_ctrl = Some(high);
                let routed = if high { x[0] } else { x[1] };
                routed + self.glitch.get(k).copied().unwrap_or(0.0)
            }
            Element::InvertingAmp { .. } => -x[0],
            Element::EquivalenceGate { .. } => logic((x[0] >= thr) == (x[1] >= thr)),
            Element::Summer { signs, .. } => signs[0] * x[0] + signs[1] * x[1],
            Element::Integrator { .. } => {
                self.acc += x[0] * dt;
                self.acc
            }
            Element::Lowpass { cutoff_hz, .. } => {
                let alpha = 1.0 - (-TAU * cutoff_hz * dt).exp();
                self.acc += alpha * (x[0] - self.acc);
                self.acc
            }
            Element::Delay { .. } => x[0],
        };
        self.raw.push(u);
        let d = p.delay_samples;
        if k >= d {
            self.raw[k - d]
        } else {
            0.0
        }
    }
}

/// Deviation of a simulated output from the exact operation.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rms_error: f64,
    pub max_error: f64,
    /// `output - reference`, sample by sample.
    pub error_signal: Signal,
}

pub fn compare_to_math(trace: &SimTrace, reference: &Signal) -> Result<Comparison> {
    let out = trace.output();
    if out.len() != reference.len() {
        return Err(Error::ShapeMismatch(format!(
            "trace has {} samples, reference {}",
            out.len(),
            reference.len()
        )));
    }
    let err: Vec<f64> = out
        .samples()
        .iter()
        .zip(reference.samples())
        .map(|(a, b)| a - b)
        .collect();
    let rms_error = (err.iter().map(|e| e * e).sum::<f64>() / err.len() as f64).sqrt();
    let max_error = err.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    Ok(Comparison {
        rms_error,
        max_error,
        error_signal: Signal::new(trace.dt(), trace.t0(), err)?,
    })
}
