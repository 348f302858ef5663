//! Behavioral, fixed-step simulation of comparator/switch circuits that
//! realize the multiset operations.
//!
//! A [`Netlist`] is a feed-forward list of components; each one reads nodes
//! written by earlier components (or the circuit inputs, or `gnd`) and
//! drives exactly one output node. [`simulate`] steps all components once
//! per sample in netlist order.
//!
//! Non-idealities are behavioral only: integer propagation delays per
//! component and additive glitches at analog switch control edges.

mod build;
mod netlist;
mod sim;
mod sweep;
mod text;

pub use build::{build_netlist, NetlistKind};
pub use netlist::{Component, ComponentKind, ComponentParams, Element, Netlist, GROUND};
pub use sim::{compare_to_math, simulate, simulate_with, Comparison, SimOptions, SimTrace};
pub use sweep::{delay_sweep, SweepRow, SweepTable};
