//! `mset` command-line front end.
//!
//! [`run`] takes the full argument vector and returns the process exit
//! code: 0 on success, 1 on usage errors, 2 when the data or a library call
//! fails.

mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use mset_core::circuit::{
    build_netlist, compare_to_math, delay_sweep, simulate_with, ComponentKind, ComponentParams,
    Netlist, NetlistKind, SimOptions,
};
use mset_core::correlation::{cross_correlate, peak_metrics, Kind, Mode};
use mset_core::expr::{eval, parse, Environment};
use mset_core::ops;
use mset_core::signal::csv::{fmt_num, read_csv, write_csv, WriteCsv};
use mset_core::signal::gen::{generate, GenParams, Waveform};
use mset_core::Signal;

pub use svg::{render as render_svg, Series};

/// Noise seed used when neither `--seed` nor `MSET_SEED` is given.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(
    name = "mset",
    version,
    about = "Real-valued multiset signal operations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a sampled waveform.
    Gen(GenArgs),
    /// Apply an elementwise operation.
    Op(OpArgs),
    /// Cross-correlate two signals.
    Corr(CorrArgs),
    /// Evaluate an expression over bound signals.
    Expr(ExprArgs),
    /// Simulate a circuit netlist.
    Sim(SimArgs),
    /// Monte-Carlo sweep of component delay mismatch.
    Sweep(SweepArgs),
    /// Print the version.
    Version,
}

#[derive(Debug, Args)]
struct Output {
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a line plot.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// sine, cosine, square, gaussian_pulse, triangle_pulse or white_noise.
    #[arg(long)]
    kind: Waveform,
    #[arg(long, default_value_t = 1.0)]
    freq: f64,
    #[arg(long, default_value_t = 1.0)]
    amp: f64,
    /// Radians.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phase: f64,
    /// Pulse center in seconds.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    center: f64,
    /// Gaussian sigma or triangle base, seconds.
    #[arg(long, default_value_t = 1.0)]
    width: f64,
    #[arg(long)]
    dt: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t0: f64,
    /// Noise seed. Falls back to MSET_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct OpArgs {
    /// complement, sign, conjoint_sign, intersection, union, absolute,
    /// signify or common_product.
    #[arg(long)]
    name: String,
    #[arg(long)]
    a: PathBuf,
    /// Second operand; for signify, the signal whose signs are applied.
    #[arg(long)]
    b: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct CorrArgs {
    /// common or classic.
    #[arg(long, default_value = "common")]
    kind: Kind,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// full or valid.
    #[arg(long, default_value = "full")]
    mode: Mode,
    /// Print peak metrics to standard output.
    #[arg(long)]
    metrics: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ExprArgs {
    #[arg(long)]
    text: String,
    /// `name=path`, repeatable.
    #[arg(long = "bind", value_name = "NAME=PATH")]
    binds: Vec<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct CircuitArgs {
    /// Built-in kind (sign, intersection, union, absolute, conjoint_sign,
    /// signify, common_product) or a netlist file.
    #[arg(long)]
    netlist: String,
    /// First netlist input.
    #[arg(long)]
    a: PathBuf,
    /// Second netlist input.
    #[arg(long)]
    b: Option<PathBuf>,
    /// Propagation delay of every component, in samples.
    #[arg(long)]
    delay: Option<usize>,
    /// Switch glitch amplitude.
    #[arg(long = "glitch-amp")]
    glitch_amp: Option<f64>,
    /// Switch glitch width, in samples.
    #[arg(long = "glitch-w")]
    glitch_w: Option<usize>,
    /// Append a low-pass stage with this cutoff in Hz.
    #[arg(long)]
    lowpass: Option<f64>,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[command(flatten)]
    circuit: CircuitArgs,
    #[arg(long, default_value_t = 1)]
    oversample: usize,
    /// Write every node to this CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Print rms and max error against the exact operation.
    #[arg(long)]
    compare: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    circuit: CircuitArgs,
    /// Inclusive range `lo..hi`, or a single value.
    #[arg(long, default_value = "0..5")]
    spread: String,
    #[arg(long, default_value_t = 20)]
    seeds: usize,
    /// Seed of the first perturbation draw.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Usage(String),
    Data(mset_core::Error),
}

impl From<mset_core::Error> for Failure {
    fn from(e: mset_core::Error) -> Self {
        Failure::Data(e)
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Op(a) => cmd_op(a, out),
        Command::Corr(a) => cmd_corr(a, out),
        Command::Expr(a) => cmd_expr(a, out),
        Command::Sim(a) => cmd_sim(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Version => {
            writeln!(out, "mset {}", env!("CARGO_PKG_VERSION")).map_err(|e| Failure::Data(e.into()))
        }
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn emit(value: &impl WriteCsv, output: &Output, out: &mut dyn Write) -> Outcome {
    match &output.out {
        Some(path) => write_csv(path, value)?,
        None => out
            .write_all(value.to_csv_string().as_bytes())
            .map_err(mset_core::Error::from)?,
    }
    Ok(())
}

fn emit_svg(output: &Output, title: &str, series: &[Series]) -> Outcome {
    if let Some(path) = &output.svg {
        fs::write(path, svg::render(title, series)).map_err(mset_core::Error::from)?;
    }
    Ok(())
}

fn time_series<'a>(label: &'a str, s: &Signal) -> Series<'a> {
    Series {
        label,
        x: (0..s.len()).map(|k| s.time(k)).collect(),
        y: s.samples().to_vec(),
    }
}

fn noise_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("MSET_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("MSET_SEED must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> Outcome {
    let p = GenParams {
        amplitude: a.amp,
        frequency: a.freq,
        phase: a.phase,
        center: a.center,
        width: a.width,
        seed: Some(noise_seed(a.seed)?),
        t0: a.t0,
    };
    let s = generate(a.kind, &p, a.dt, a.n)?;
    emit(&s, &a.output, out)?;
    emit_svg(&a.output, a.kind.name(), &[time_series(a.kind.name(), &s)])
}

fn cmd_op(a: OpArgs, out: &mut dyn Write) -> Outcome {
    let f = read_csv(&a.a)?;
    let second = || -> Result<Signal, Failure> {
        let path =
            a.b.as_ref()
                .ok_or_else(|| usage(format!("--name {} needs --b", a.name)))?;
        Ok(read_csv(path)?)
    };
    let unary = |name: &str| -> Outcome {
        if a.b.is_some() {
            return Err(usage(format!("--name {name} takes only --a")));
        }
        Ok(())
    };
    let result = match a.name.as_str() {
        "complement" => {
            unary("complement")?;
            ops::complement(&f)
        }
        "sign" => {
            unary("sign")?;
            ops::sign_fn(&f).to_signal()
        }
        "absolute" => {
            unary("absolute")?;
            ops::absolute(&f)
        }
        "conjoint_sign" => ops::conjoint_sign(&f, &second()?)?.to_signal(),
        "intersection" => ops::intersection(&f, &second()?)?,
        "union" => ops::union(&f, &second()?)?,
        "signify" => ops::signify(&f, &ops::sign_fn(&second()?))?,
        "common_product" => ops::common_product(&f, &second()?)?,
        other => return Err(usage(format!("--name: unknown operation `{other}`"))),
    };
    emit(&result, &a.output, out)?;
    emit_svg(&a.output, &a.name, &[time_series(&a.name, &result)])
}

fn cmd_corr(a: CorrArgs, out: &mut dyn Write) -> Outcome {
    let f = read_csv(&a.a)?;
    let g = read_csv(&a.b)?;
    let r = cross_correlate(&f, &g, a.kind, a.mode)?;
    emit(&r, &a.output, out)?;
    if a.metrics {
        let m = peak_metrics(&r)?;
        writeln!(out, "{m}").map_err(mset_core::Error::from)?;
    }
    let series = Series {
        label: "correlation",
        x: r.lags().map(|k| k as f64).collect(),
        y: r.values().to_vec(),
    };
    emit_svg(&a.output, "cross-correlation", &[series])
}

fn cmd_expr(a: ExprArgs, out: &mut dyn Write) -> Outcome {
    let mut env = Environment::new();
    for b in &a.binds {
        let (name, path) = b
            .split_once('=')
            .ok_or_else(|| usage(format!("--bind expects NAME=PATH, got `{b}`")))?;
        env.bind(name, read_csv(path)?)?;
    }
    let e = parse(&a.text)?;
    let s = eval(&e, &env)?;
    emit(&s, &a.output, out)?;
    emit_svg(&a.output, "expression", &[time_series("result", &s)])
}

/// Netlist plus the built-in kind it came from, if any.
struct Circuit {
    net: Netlist,
    kind: Option<NetlistKind>,
    inputs: Vec<Signal>,
}

impl Circuit {
    fn bound(&self) -> Vec<(&str, &Signal)> {
        self.net
            .inputs()
            .iter()
            .map(String::as_str)
            .zip(&self.inputs)
            .collect()
    }

    fn reference(&self, flag: &str) -> Result<Signal, Failure> {
        let kind = self
            .kind
            .ok_or_else(|| usage(format!("{flag} needs a built-in --netlist kind")))?;
        let refs: Vec<&Signal> = self.inputs.iter().collect();
        Ok(kind.reference(&refs)?)
    }
}

fn load_circuit(a: &CircuitArgs) -> Result<Circuit, Failure> {
    let (mut net, kind) = match a.netlist.parse::<NetlistKind>() {
        Ok(kind) => {
            let mut p = ComponentParams::default();
            if let Some(d) = a.delay {
                p = p.with_delay(d);
            }
            if let Some(amp) = a.glitch_amp {
                p.glitch_amplitude = amp;
            }
            if let Some(w) = a.glitch_w {
                p.glitch_width_samples = w;
            }
            (build_netlist(kind, p), Some(kind))
        }
        Err(_) if Path::new(&a.netlist).is_file() => {
            let text = fs::read_to_string(&a.netlist).map_err(mset_core::Error::from)?;
            let mut net: Netlist = text.parse()?;
            for k in ComponentKind::ALL
                .into_iter()
                .filter(|&k| k != ComponentKind::Delay)
            {
                net.map_params(k, |mut p| {
                    p.delay_samples = a.delay.unwrap_or(p.delay_samples);
                    p.glitch_amplitude = a.glitch_amp.unwrap_or(p.glitch_amplitude);
                    p.glitch_width_samples = a.glitch_w.unwrap_or(p.glitch_width_samples);
                    p
                })?;
            }
            (net, None)
        }
        Err(_) => {
            return Err(usage(format!(
                "--netlist: `{}` is neither a built-in kind nor a readable file",
                a.netlist
            )))
        }
    };
    if let Some(fc) = a.lowpass {
        let p = ComponentParams::default().with_delay(a.delay.unwrap_or(0));
        net = net.with_lowpass(fc, p)?;
    }

    let paths: Vec<&PathBuf> = std::iter::once(&a.a).chain(a.b.as_ref()).collect();
    let want = net.inputs().len();
    if paths.len() != want {
        return Err(usage(format!(
            "netlist has {want} input(s) ({}); pass {}",
            net.inputs().join(", "),
            if want == 1 { "--a only" } else { "--a and --b" }
        )));
    }
    let inputs = paths
        .into_iter()
        .map(read_csv)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Circuit { net, kind, inputs })
}

fn cmd_sim(a: SimArgs, out: &mut dyn Write) -> Outcome {
    if a.oversample == 0 {
        return Err(usage("--oversample must be at least 1"));
    }
    let c = load_circuit(&a.circuit)?;
    let trace = simulate_with(
        &c.net,
        &c.bound(),
        SimOptions {
            oversample: a.oversample,
        },
    )?;
    let output = trace.output();
    let mut series = vec![time_series("output", &output)];

    let mut reference = None;
    if a.compare {
        let dt = output.dt();
        let latency = c.net.latency_at(dt);
        let target = c.reference("--compare")?.shift(latency as isize);
        let cmp = compare_to_math(&trace, &target)?;
        writeln!(
            out,
            "rms_error={} max_error={} latency_samples={latency}",
            fmt_num(cmp.rms_error),
            fmt_num(cmp.max_error)
        )
        .map_err(mset_core::Error::from)?;
        reference = Some(target);
    }
    if let Some(path) = &a.trace {
        write_csv(path, &trace)?;
    }
    if a.output.out.is_some() || (a.trace.is_none() && !a.compare) {
        emit(&output, &a.output, out)?;
    }
    if let Some(r) = &reference {
        series.push(time_series("exact", r));
    }
    emit_svg(&a.output, trace.output_name(), &series)
}

fn parse_spread(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || usage(format!("--spread expects N or LO..HI, got `{text}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match text.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
            if lo > hi {
                return Err(bad());
            }
            Ok((lo..=hi).collect())
        }
        None => Ok(vec![num(text)?]),
    }
}

fn cmd_sweep(a: SweepArgs, out: &mut dyn Write) -> Outcome {
    let spreads = parse_spread(&a.spread)?;
    if a.seeds == 0 {
        return Err(usage("--seeds must be at least 1"));
    }
    let c = load_circuit(&a.circuit)?;
    let reference = c.reference("sweep")?;
    let table = delay_sweep(&c.net, &c.bound(), &reference, spreads, a.seeds, a.seed)?;
    emit(&table, &a.output, out)?;
    let series = Series {
        label: "mean rms error",
        x: table.rows.iter().map(|r| r.spread as f64).collect(),
        y: table.rows.iter().map(|r| r.rms_error).collect(),
    };
    emit_svg(&a.output, "delay sweep", &[series])
}
