//! Line-oriented netlist text.
//!
//! ```text
//! input f
//! comparator s_f f gnd delay=0 glitch_amp=0 glitch_w=0
//! inverting_amp neg_f f delay=0 glitch_amp=0 glitch_w=0
//! analog_switch abs_f f neg_f s_f delay=0 glitch_amp=0.2 glitch_w=2
//! output abs_f
//! ```
//!
//! Component lines are `<type> <out> <in...>` followed by `key=value`
//! parameters. `high=`/`low=` set logic levels, `fc=` is the low-pass
//! cutoff in Hz and `signs=` gives the two summer signs, e.g. `signs=+-`.
//! `#` starts a comment.

use std::fmt;
use std::str::FromStr;

use super::netlist::{Component, ComponentKind, ComponentParams, Element, Netlist};
use crate::error::{Error, Result};
use crate::signal::csv::fmt_num;

impl fmt::Display for Netlist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let defaults = ComponentParams::default();
        for i in self.inputs() {
            writeln!(f, "input {i}")?;
        }
        for c in self.components() {
            write!(f, "{} {}", c.kind(), c.output)?;
            for i in c.element.inputs() {
                write!(f, " {i}")?;
            }
            let p = &c.params;
            write!(
                f,
                " delay={} glitch_amp={} glitch_w={}",
                p.delay_samples,
                fmt_num(p.glitch_amplitude),
                p.glitch_width_samples
            )?;
            if p.logic_high != defaults.logic_high || p.logic_low != defaults.logic_low {
                write!(
                    f,
                    " high={} low={}",
                    fmt_num(p.logic_high),
                    fmt_num(p.logic_low)
                )?;
            }
            match &c.element {
                Element::Lowpass { cutoff_hz, .. } => write!(f, " fc={}", fmt_num(*cutoff_hz))?,
                Element::Summer { signs, .. } => {
                    let sym = |s: f64| if s < 0.0 { '-' } else { '+' };
                    write!(f, " signs={}{}", sym(signs[0]), sym(signs[1]))?
                }
                _ => {}
            }
            writeln!(f)?;
        }
        writeln!(f, "output {}", self.output())
    }
}

impl FromStr for Netlist {
    type Err = Error;

    fn from_str(text: &str) -> Result<Netlist> {
        let mut inputs = Vec::new();
        let mut components = Vec::new();
        let mut output: Option<String> = None;

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "input" | "output" => {
                    let [_, name] = toks[..] else {
                        return Err(err(format!("`{}` takes exactly one node name", toks[0])));
                    };
                    if toks[0] == "input" {
                        inputs.push(name.to_string());
                    } else if output.replace(name.to_string()).is_some() {
                        return Err(err("output declared twice".into()));
                    }
                }
                ty => {
                    let kind = ComponentKind::from_name(ty)
                        .ok_or_else(|| err(format!("unknown component type `{ty}`")))?;
                    components.push(parse_component(kind, &toks[1..]).map_err(err)?);
                }
            }
        }
        let output = output.ok_or_else(|| Error::Parse {
            line: text.lines().count().max(1),
            msg: "missing `output` declaration".into(),
        })?;
        Netlist::new(inputs, components, &output)
    }
}

fn parse_component(kind: ComponentKind, toks: &[&str]) -> std::result::Result<Component, String> {
    let (positional, keyed): (Vec<&str>, Vec<&str>) = toks.iter().partition(|t| !t.contains('='));
    let arity = match kind {
        ComponentKind::AnalogSwitch => 3,
        ComponentKind::Comparator | ComponentKind::EquivalenceGate | ComponentKind::Summer => 2,
        _ => 1,
    };
    if positional.len() != arity + 1 {
        return Err(format!(
            "{kind} needs an output and {arity} input(s), got {} node name(s)",
            positional.len()
        ));
    }
    let out = positional[0];
    let ins: Vec<String> = positional[1..].iter().map(|s| s.to_string()).collect();

    let mut params = ComponentParams::default();
    let mut cutoff = None;
    let mut signs = [1.0, 1.0];
    for kv in keyed {
        let (k, v) = kv.split_once('=').expect("partitioned on '='");
        let num = || v.parse::<f64>().map_err(|_| format!("bad value in `{kv}`"));
        let int = || {
            v.parse::<usize>()
                .map_err(|_| format!("bad integer in `{kv}`"))
        };
        match k {
            "delay" => params.delay_samples = int()?,
            "glitch_amp" => params.glitch_amplitude = num()?,
            "glitch_w" => params.glitch_width_samples = int()?,
            "high" => params.logic_high = num()?,
            "low" => params.logic_low = num()?,
            "fc" if kind == ComponentKind::Lowpass => cutoff = Some(num()?),
            "signs" if kind == ComponentKind::Summer => {
                let b = v.as_bytes();
                let sign = |c: u8| match c {
                    b'+' => Ok(1.0),
                    b'-' => Ok(-1.0),
                    _ => Err(format!("bad sign in `{kv}`")),
                };
                if b.len() != 2 {
                    return Err(format!("`{kv}` needs two signs"));
                }
                signs = [sign(b[0])?, sign(b[1])?];
            }
            _ => return Err(format!("unknown parameter `{k}` for {kind}")),
        }
    }

    let mut ins = ins.into_iter();
    let mut next = || ins.next().expect("arity checked");
    let element = match kind {
        ComponentKind::Comparator => Element::Comparator {
            plus: next(),
            minus: next(),
        },
        ComponentKind::AnalogSwitch => Element::AnalogSwitch {
            on_high: next(),
            on_low: next(),
            ctrl: next(),
        },
        ComponentKind::InvertingAmp => Element::InvertingAmp { input: next() },
        ComponentKind::EquivalenceGate => Element::EquivalenceGate {
            a: next(),
            b: next(),
        },
        ComponentKind::Summer => Element::Summer {
            a: next(),
            b: next(),
            signs,
        },
        ComponentKind::Integrator => Element::Integrator { input: next() },
        ComponentKind::Lowpass => Element::Lowpass {
            input: next(),
            cutoff_hz: cutoff.ok_or("lowpass needs fc=<Hz>")?,
        },
        ComponentKind::Delay => Element::Delay { input: next() },
    };
    Ok(Component::new(element, out, params))
}
