use std::collections::{BTreeMap, HashMap, HashSet};
use std::f64::consts::TAU;
use std::fmt;

use crate::error::{Error, Result};

/// Always-zero reference node.
pub const GROUND: &str = "gnd";

/// Per-component behavioral parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentParams {
    pub delay_samples: usize,
    /// Volts, added at each switch control edge. Only switches glitch.
    pub glitch_amplitude: f64,
    pub glitch_width_samples: usize,
    pub logic_high: f64,
    pub logic_low: f64,
}

impl Default for ComponentParams {
    fn default() -> Self {
        ComponentParams {
            delay_samples: 0,
            glitch_amplitude: 0.2,
            glitch_width_samples: 2,
            logic_high: 1.0,
            logic_low: -1.0,
        }
    }
}

impl ComponentParams {
    /// Zero delay, no glitches, ±1 logic.
    pub fn ideal() -> Self {
        ComponentParams {
            glitch_amplitude: 0.0,
            glitch_width_samples: 0,
            ..Default::default()
        }
    }

    pub fn with_delay(self, delay_samples: usize) -> Self {
        ComponentParams {
            delay_samples,
            ..self
        }
    }

    pub fn with_glitch(self, amplitude: f64, width: usize) -> Self {
        ComponentParams {
            glitch_amplitude: amplitude,
            glitch_width_samples: width,
            ..self
        }
    }

    /// Decision threshold for logic inputs, halfway between the levels.
    pub fn logic_threshold(&self) -> f64 {
        0.5 * (self.logic_high + self.logic_low)
    }

    fn validate(&self) -> Result<()> {
        if !(self.glitch_amplitude.is_finite() && self.glitch_amplitude >= 0.0) {
            return Err(Error::InvalidNetlist(format!(
                "glitch amplitude must be finite and >= 0, got {}",
                self.glitch_amplitude
            )));
        }
        if !(self.logic_high.is_finite()
            && self.logic_low.is_finite()
            && self.logic_high > self.logic_low)
        {
            return Err(Error::InvalidNetlist(format!(
                "logic levels must satisfy high > low, got {} / {}",
                self.logic_high, self.logic_low
            )));
        }
        Ok(())
    }
}

/// What a component does and which nodes it reads.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    /// `high` when `plus >= minus`.
    Comparator { plus: String, minus: String },
    /// Routes `on_high` when `ctrl` is at or above the logic threshold,
    /// `on_low` otherwise.
    AnalogSwitch {
        on_high: String,
        on_low: String,
        ctrl: String,
    },
    /// Unit-gain inverter.
    InvertingAmp { input: String },
    /// `high` when both logic inputs sit on the same side of the threshold.
    EquivalenceGate { a: String, b: String },
    /// `signs[0]·a + signs[1]·b` with each sign ±1.
    Summer {
        a: String,
        b: String,
        signs: [f64; 2],
    },
    /// Running sum times `dt`.
    Integrator { input: String },
    /// Single-pole IIR low-pass with cutoff in Hz.
    Lowpass { input: String, cutoff_hz: f64 },
    /// Pure delay line, used to align reconvergent paths.
    Delay { input: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKind {
    Comparator,
    AnalogSwitch,
    InvertingAmp,
    EquivalenceGate,
    Summer,
    Integrator,
    Lowpass,
    Delay,
}

impl ComponentKind {
    pub const ALL: [ComponentKind; 8] = [
        ComponentKind::Comparator,
        ComponentKind::AnalogSwitch,
        ComponentKind::InvertingAmp,
        ComponentKind::EquivalenceGate,
        ComponentKind::Summer,
        ComponentKind::Integrator,
        ComponentKind::Lowpass,
        ComponentKind::Delay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ComponentKind::Comparator => "comparator",
            ComponentKind::AnalogSwitch => "analog_switch",
            ComponentKind::InvertingAmp => "inverting_amp",
            ComponentKind::EquivalenceGate => "equivalence_gate",
            ComponentKind::Summer => "summer",
            ComponentKind::Integrator => "integrator",
            ComponentKind::Lowpass => "lowpass",
            ComponentKind::Delay => "delay",
        }
    }

    pub fn from_name(s: &str) -> Option<ComponentKind> {
        ComponentKind::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Elements built around an operational amplifier in linear mode.
    pub fn is_op_amp(self) -> bool {
        matches!(
            self,
            ComponentKind::InvertingAmp | ComponentKind::Summer | ComponentKind::Integrator
        )
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Element {
    pub fn kind(&self) -> ComponentKind {
        match self {
            Element::Comparator { .. } => ComponentKind::Comparator,
            Element::AnalogSwitch { .. } => ComponentKind::AnalogSwitch,
            Element::InvertingAmp { .. } => ComponentKind::InvertingAmp,
            Element::EquivalenceGate { .. } => ComponentKind::EquivalenceGate,
            Element::Summer { .. } => ComponentKind::Summer,
            Element::Integrator { .. } => ComponentKind::Integrator,
            Element::Lowpass { .. } => ComponentKind::Lowpass,
            Element::Delay { .. } => ComponentKind::Delay,
        }
    }

    /// Input node names in positional order.
    pub fn inputs(&self) -> Vec<&str> {
        match self {
            Element::Comparator { plus, minus } => vec![plus, minus],
            Element::AnalogSwitch {
                on_high,
                on_low,
                ctrl,
            } => vec![on_high, on_low, ctrl],
            Element::EquivalenceGate { a, b } | Element::Summer { a, b, .. } => vec![a, b],
            Element::InvertingAmp { input }
            | Element::Integrator { input }
            | Element::Lowpass { input, .. }
            | Element::Delay { input } => vec![input],
        }
    }

    pub(crate) fn inputs_mut(&mut self) -> Vec<&mut String> {
        match self {
            Element::Comparator { plus, minus } => vec![plus, minus],
            Element::AnalogSwitch {
                on_high,
                on_low,
                ctrl,
            } => vec![on_high, on_low, ctrl],
            Element::EquivalenceGate { a, b } | Element::Summer { a, b, .. } => vec![a, b],
            Element::InvertingAmp { input }
            | Element::Integrator { input }
            | Element::Lowpass { input, .. }
            | Element::Delay { input } => vec![input],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub element: Element,
    pub output: String,
    pub params: ComponentParams,
}

impl Component {
    pub fn new(element: Element, output: &str, params: ComponentParams) -> Self {
        Component {
            element,
            output: output.to_string(),
            params,
        }
    }

    pub fn kind(&self) -> ComponentKind {
        self.element.kind()
    }
}

/// Validated feed-forward circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct Netlist {
    inputs: Vec<String>,
    components: Vec<Component>,
    output: String,
}

impl Netlist {
    /// Checks that every component reads only inputs, `gnd`, or outputs of
    /// earlier components, which also rules out cycles.
    pub fn new(inputs: Vec<String>, components: Vec<Component>, output: &str) -> Result<Self> {
        let mut known: HashSet<&str> = HashSet::new();
        for name in &inputs {
            check_node_name(name)?;
            if name == GROUND {
                return Err(Error::InvalidNetlist(format!(
                    "`{GROUND}` cannot be an input"
                )));
            }
            if !known.insert(name) {
                return Err(Error::InvalidNetlist(format!(
                    "input `{name}` declared twice"
                )));
            }
        }
        for (i, c) in components.iter().enumerate() {
            c.params.validate()?;
            if let Element::Lowpass { cutoff_hz, .. } = c.element {
                if !(cutoff_hz.is_finite() && cutoff_hz > 0.0) {
                    return Err(Error::InvalidNetlist(format!(
                        "component {i}: lowpass cutoff must be > 0, got {cutoff_hz}"
                    )));
                }
            }
            if let Element::Summer { signs, .. } = c.element {
                if signs.iter().any(|s| s.abs() != 1.0) {
                    return Err(Error::InvalidNetlist(format!(
                        "component {i}: summer signs must be +1 or -1"
                    )));
                }
            }
            for input in c.element.inputs() {
                if input != GROUND && !known.contains(input) {
                    return Err(Error::InvalidNetlist(format!(
                        "component {i} ({}) reads `{input}` before it is driven",
                        c.kind()
                    )));
                }
            }
            check_node_name(&c.output)?;
            if c.output == GROUND || !known.insert(&c.output) {
                return Err(Error::InvalidNetlist(format!(
                    "node `{}` is driven more than once",
                    c.output
                )));
            }
        }
        if !known.contains(output) {
            return Err(Error::InvalidNetlist(format!(
                "output node `{output}` is never driven"
            )));
        }
        Ok(Netlist {
            inputs,
            components,
            output: output.to_string(),
        })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn output(&self) -> &str {
        &self.output
    }

    /// Adjusts component parameters in place. Topology stays fixed.
    pub fn set_params(&mut self, index: usize, params: ComponentParams) -> Result<()> {
        params.validate()?;
        let c = self
            .components
            .get_mut(index)
            .ok_or_else(|| Error::InvalidNetlist(format!("no component at index {index}")))?;
        c.params = params;
        Ok(())
    }

    /// Applies `f` to the parameters of every component of `kind`.
    pub fn map_params(
        &mut self,
        kind: ComponentKind,
        f: impl Fn(ComponentParams) -> ComponentParams,
    ) -> Result<()> {
        for i in 0..self.components.len() {
            if self.components[i].kind() == kind {
                self.set_params(i, f(self.components[i].params))?;
            }
        }
        Ok(())
    }

    /// Number of components of each kind present.
    pub fn census(&self) -> BTreeMap<ComponentKind, usize> {
        let mut out = BTreeMap::new();
        for c in &self.components {
            *out.entry(c.kind()).or_insert(0) += 1;
        }
        out
    }

    pub fn count(&self, kind: ComponentKind) -> usize {
        self.components.iter().filter(|c| c.kind() == kind).count()
    }

    /// Samples between an input change and the output reflecting it, along
    /// the slowest path, counting propagation delays only.
    pub fn latency(&self) -> usize {
        self.output_arrival(None)
    }

    /// Like [`Netlist::latency`], plus the low-frequency group delay of each
    /// low-pass stage, `1 / (2π·fc)`, rounded to whole samples of `dt`.
    pub fn latency_at(&self, dt: f64) -> usize {
        self.output_arrival(Some(dt))
    }

    fn output_arrival(&self, dt: Option<f64>) -> usize {
        let arrival = self.arrivals_with(dt);
        arrival
            .get(self.output.as_str())
            .copied()
            .flatten()
            .unwrap_or(0)
    }

    /// Arrival time of every node along its slowest input path; `None` for
    /// nodes that only depend on `gnd`.
    #[cfg(test)]
    pub(crate) fn arrivals(&self) -> HashMap<&str, Option<usize>> {
        self.arrivals_with(None)
    }

    fn arrivals_with(&self, dt: Option<f64>) -> HashMap<&str, Option<usize>> {
        let mut arrival: HashMap<&str, Option<usize>> = HashMap::new();
        arrival.insert(GROUND, None);
        for i in &self.inputs {
            arrival.insert(i, Some(0));
        }
        for c in &self.components {
            let group_delay = match (&c.element, dt) {
                (Element::Lowpass { cutoff_hz, .. }, Some(dt)) => {
                    (1.0 / (TAU * cutoff_hz * dt)).round() as usize
                }
                _ => 0,
            };
            let t = c
                .element
                .inputs()
                .iter()
                .filter_map(|n| arrival[n])
                .max()
                .map(|t| t + c.params.delay_samples + group_delay);
            arrival.insert(&c.output, t);
        }
        arrival
    }

    /// Appends a low-pass stage on the current output, which then becomes
    /// the new output node.
    pub fn with_lowpass(self, cutoff_hz: f64, params: ComponentParams) -> Result<Netlist> {
        let mut name = format!("{}_lp", self.output);
        while self.node_exists(&name) {
            name.push('_');
        }
        let mut components = self.components;
        components.push(Component::new(
            Element::Lowpass {
                input: self.output.clone(),
                cutoff_hz,
            },
            &name,
            params,
        ));
        Netlist::new(self.inputs, components, &name)
    }

    fn node_exists(&self, name: &str) -> bool {
        name == GROUND
            || self.inputs.iter().any(|i| i == name)
            || self.components.iter().any(|c| c.output == name)
    }
}

fn check_node_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.');
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidNetlist(format!("bad node name `{name}`")))
    }
}
