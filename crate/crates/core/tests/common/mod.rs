//! Strategies and reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::fmt::Debug;

use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use mset_core::expr::{BinaryOp, Expr, Func, UnaryOp};
use mset_core::Signal;

pub const DT: f64 = 0.01;

/// Mostly uniform values, with explicit zeros of both signs mixed in.
pub fn sample() -> impl Strategy<Value = f64> {
    prop_oneof![
        1 => Just(0.0),
        1 => Just(-0.0),
        8 => -10.0..10.0f64,
    ]
}

pub fn signal(max_len: usize) -> impl Strategy<Value = Signal> {
    vec(sample(), 1..=max_len).prop_map(to_signal)
}

/// Two signals on one grid. About a quarter of the positions are ties
/// (`g == f`) or mirrors (`g == -f`) to exercise the min/max boundaries.
pub fn signal_pair(max_len: usize) -> impl Strategy<Value = (Signal, Signal)> {
    (1..=max_len)
        .prop_flat_map(|n| (vec(sample(), n), vec(sample(), n), vec(0u8..8, n)))
        .prop_map(|(f, mut g, tie)| {
            for i in 0..f.len() {
                match tie[i] {
                    0 => g[i] = f[i],
                    1 => g[i] = -f[i],
                    _ => {}
                }
            }
            (to_signal(f), to_signal(g))
        })
}

/// Independent lengths, for correlation.
pub fn loose_pair(max_len: usize) -> impl Strategy<Value = (Signal, Signal)> {
    (signal(max_len), signal(max_len))
}

pub fn triple(max_len: usize) -> impl Strategy<Value = (Signal, Signal, Signal)> {
    (1..=max_len)
        .prop_flat_map(|n| (vec(sample(), n), vec(sample(), n), vec(sample(), n)))
        .prop_map(|(f, g, h)| (to_signal(f), to_signal(g), to_signal(h)))
}

pub fn to_signal(v: Vec<f64>) -> Signal {
    Signal::new(DT, 0.0, v).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Plain double loop over every sample pair, bucketed by lag `i - j`.
/// Returns the first lag and one value per lag in `-(m-1) ..= n-1`.
pub fn brute_correlation(
    f: &[f64],
    g: &[f64],
    dt: f64,
    kernel: fn(f64, f64) -> f64,
) -> (i64, Vec<f64>) {
    let (n, m) = (f.len(), g.len());
    let mut out = vec![0.0; n + m - 1];
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in g.iter().enumerate() {
            out[i + m - 1 - j] += kernel(a, b);
        }
    }
    for v in &mut out {
        *v *= dt;
    }
    (1 - m as i64, out)
}

/// Sign-agreeing minimum magnitude, written out case by case.
pub fn common_kernel(a: f64, b: f64) -> f64 {
    let m = if a.abs() < b.abs() { a.abs() } else { b.abs() };
    if (a >= 0.0) == (b >= 0.0) {
        m
    } else {
        -m
    }
}

pub fn classic_kernel(a: f64, b: f64) -> f64 {
    a * b
}

/// Random expression trees of depth at most `1 + levels` over `f`, `g`,
/// `h` and non-negative constants.
pub fn expr(levels: u32) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        3 => prop::sample::select(vec!["f", "g", "h"]).prop_map(Expr::var),
        1 => prop_oneof![0.0..100.0f64, 1e-9..1e-3f64, Just(0.0), Just(2.5e17)].prop_map(Expr::Const),
    ];
    leaf.prop_recursive(levels, 64, 2, |inner| {
        let binop = prop::sample::select(vec![
            BinaryOp::Add,
            BinaryOp::Sub,
            BinaryOp::Mul,
            BinaryOp::Intersect,
            BinaryOp::Union,
            BinaryOp::CommonProduct,
        ]);
        let unop = prop::sample::select(vec![UnaryOp::Neg, UnaryOp::Complement]);
        let func = prop::sample::select(Func::ALL.to_vec());
        prop_oneof![
            2 => (binop, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::binary(op, l, r)),
            1 => (unop, inner.clone()).prop_map(|(op, e)| Expr::unary(op, e)),
            1 => (func, inner).prop_map(|(f, e)| Expr::call(f, e)),
        ]
    })
}

/// Runs a property with a fixed RNG so results are reproducible, returning
/// the shrunk counterexample on failure.
pub fn check<S>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S: Strategy,
    S::Value: Debug,
{
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}
