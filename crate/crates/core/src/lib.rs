//! Real-valued multiset operations on sampled signals.
//!
//! * [`signal`]: signals, sign series, generators and CSV I/O
//! * [`ops`]: complement, sign, intersection, union, absolute value,
//!   signification and the elementwise common product
//! * [`correlation`]: common-product functional, cross-correlation, Jaccard
//!   index and peak metrics
//! * [`expr`]: parser and evaluator for hybrid expressions
//! * [`circuit`]: behavioral simulation of comparator/switch realizations

pub mod circuit;
pub mod correlation;
pub mod error;
pub mod expr;
pub mod ops;
pub mod signal;

pub use error::{Error, Result};
pub use signal::{Sign, SignSeries, Signal};
