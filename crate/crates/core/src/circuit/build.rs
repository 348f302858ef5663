//! Reference topologies for each multiset operation.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::netlist::{Component, ComponentParams, Element, Netlist, GROUND};
use crate::error::{Error, Result};
use crate::ops;
use crate::signal::Signal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NetlistKind {
    Sign,
    Intersection,
    Union,
    Absolute,
    ConjointSign,
    Signify,
    CommonProduct,
}

impl NetlistKind {
    pub const ALL: [NetlistKind; 7] = [
        NetlistKind::Sign,
        NetlistKind::Intersection,
        NetlistKind::Union,
        NetlistKind::Absolute,
        NetlistKind::ConjointSign,
        NetlistKind::Signify,
        NetlistKind::CommonProduct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NetlistKind::Sign => "sign",
            NetlistKind::Intersection => "intersection",
            NetlistKind::Union => "union",
            NetlistKind::Absolute => "absolute",
            NetlistKind::ConjointSign => "conjoint_sign",
            NetlistKind::Signify => "signify",
            NetlistKind::CommonProduct => "common_product",
        }
    }

    /// Input node names, in the order [`NetlistKind::reference`] expects.
    pub fn input_names(self) -> &'static [&'static str] {
        match self {
            NetlistKind::Sign | NetlistKind::Absolute => &["f"],
            NetlistKind::Signify => &["a", "s"],
            _ => &["f", "g"],
        }
    }

    /// The exact operation this circuit realizes. For `signify` the second
    /// input is reduced to its sign series first.
    pub fn reference(self, inputs: &[&Signal]) -> Result<Signal> {
        let want = self.input_names().len();
        if inputs.len() != want {
            return Err(Error::BadParam(format!(
                "{} takes {want} input(s), got {}",
                self.name(),
                inputs.len()
            )));
        }
        let f = inputs[0];
        Ok(match self {
            NetlistKind::Sign => ops::sign_fn(f).to_signal(),
            NetlistKind::Absolute => ops::absolute(f),
            NetlistKind::Intersection => ops::intersection(f, inputs[1])?,
            NetlistKind::Union => ops::union(f, inputs[1])?,
            NetlistKind::ConjointSign => ops::conjoint_sign(f, inputs[1])?.to_signal(),
            NetlistKind::Signify => ops::signify(f, &ops::sign_fn(inputs[1]))?,
            NetlistKind::CommonProduct => ops::common_product(f, inputs[1])?,
        })
    }
}

impl fmt::Display for NetlistKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NetlistKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NetlistKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::BadParam(format!("unknown netlist kind `{s}`")))
    }
}

/// Builds the circuit for `kind` with every component using `params`.
///
/// When components have nonzero delay, pure delay lines are inserted so
/// that every reconvergent path reaches its consumer at the same time.
pub fn build_netlist(kind: NetlistKind, params: ComponentParams) -> Netlist {
    let mut b = Builder {
        parts: Vec::new(),
        params,
    };
    let out = match kind {
        NetlistKind::Sign => b.comparator("f", GROUND, "s_f"),
        NetlistKind::Intersection => {
            let c = b.comparator("f", "g", "f_ge_g");
            b.switch("g", "f", &c, "min")
        }
        NetlistKind::Union => {
            let c = b.comparator("f", "g", "f_ge_g");
            b.switch("f", "g", &c, "max")
        }
        NetlistKind::Absolute => b.absolute("f"),
        NetlistKind::ConjointSign => b.conjoint("f", "g"),
        NetlistKind::Signify => {
            let neg = b.invert("a", "neg_a");
            b.switch("a", &neg, "s", "signified")
        }
        NetlistKind::CommonProduct => {
            let abs_f = b.absolute("f");
            let abs_g = b.absolute("g");
            let c = b.comparator(&abs_f, &abs_g, "absf_ge_absg");
            let min = b.switch(&abs_g, &abs_f, &c, "min_abs");
            let s_fg = b.conjoint("f", "g");
            let neg = b.invert(&min, "neg_min_abs");
            b.switch(&min, &neg, &s_fg, "cprod")
        }
    };
    let inputs: Vec<String> = kind.input_names().iter().map(|s| s.to_string()).collect();
    let parts = align_delays(&inputs, b.parts);
    Netlist::new(inputs, parts, &out).expect("built-in topologies are well formed")
}

struct Builder {
    parts: Vec<Component>,
    params: ComponentParams,
}

impl Builder {
    fn push(&mut self, element: Element, out: &str) -> String {
        self.parts.push(Component::new(element, out, self.params));
        out.to_string()
    }

    fn comparator(&mut self, plus: &str, minus: &str, out: &str) -> String {
        self.push(
            Element::Comparator {
                plus: plus.into(),
                minus: minus.into(),
            },
            out,
        )
    }

    fn switch(&mut self, on_high: &str, on_low: &str, ctrl: &str, out: &str) -> String {
        self.push(
            Element::AnalogSwitch {
                on_high: on_high.into(),
                on_low: on_low.into(),
                ctrl: ctrl.into(),
            },
            out,
        )
    }

    fn invert(&mut self, input: &str, out: &str) -> String {
        self.push(
            Element::InvertingAmp {
                input: input.into(),
            },
            out,
        )
    }

    /// Comparator against ground selecting between `x` and `-x`.
    fn absolute(&mut self, x: &str) -> String {
        let s = self.comparator(x, GROUND, &format!("s_{x}"));
        let neg = self.invert(x, &format!("neg_{x}"));
        self.switch(x, &neg, &s, &format!("abs_{x}"))
    }

    /// Two zero-referenced comparators feeding an equivalence gate.
    fn conjoint(&mut self, x: &str, y: &str) -> String {
        let sx = self.comparator(x, GROUND, &format!("cs_{x}"));
        let sy = self.comparator(y, GROUND, &format!("cs_{y}"));
        self.push(
            Element::EquivalenceGate { a: sx, b: sy },
            &format!("s_{x}{y}"),
        )
    }
}

/// Inserts delay lines in front of early-arriving inputs so that all
/// inputs of each component arrive together. Pads are shared between
/// consumers of the same node and amount.
fn align_delays(inputs: &[String], parts: Vec<Component>) -> Vec<Component> {
    let mut arrival: HashMap<String, usize> = inputs.iter().map(|i| (i.clone(), 0)).collect();
    let mut pads: HashMap<(String, usize), String> = HashMap::new();
    let mut out = Vec::with_capacity(parts.len());

    for mut c in parts {
        let target = c
            .element
            .inputs()
            .iter()
            .filter_map(|n| arrival.get(*n).copied())
            .max()
            .unwrap_or(0);
        for input in c.element.inputs_mut() {
            let Some(&t) = arrival.get(input.as_str()) else {
                continue; // gnd
            };
            if t == target {
                continue;
            }
            let lag = target - t;
            let key = (input.clone(), lag);
            let pad = match pads.get(&key) {
                Some(p) => p.clone(),
                None => {
                    let name = format!("{input}_pad{lag}");
                    let params = ComponentParams::ideal().with_delay(lag);
                    out.push(Component::new(
                        Element::Delay {
                            input: input.clone(),
                        },
                        &name,
                        params,
                    ));
                    arrival.insert(name.clone(), target);
                    pads.insert(key, name.clone());
                    name
                }
            };
            *input = pad;
        }
        arrival.insert(c.output.clone(), target + c.params.delay_samples);
        out.push(c);
    }
    out
}
