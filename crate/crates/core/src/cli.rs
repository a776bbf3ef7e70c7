//! `wallace` command-line front end.
//!
//! Exit codes: 0 success, 1 test failure or runtime error, 2 usage error,
//! 3 state-file error.

use std::ffi::OsString;
use std::io::{self, BufWriter, ErrorKind, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchConfig, Method};
use crate::error::Error;
use crate::stats::suite::{self, Suite, SuiteConfig, Verdict, DEFAULT_BASE_SAMPLES};
use crate::wallace::{load_state, save_state, MAX_POOL_EXPONENT, MIN_POOL_EXPONENT};
use crate::{WallaceConfig, WallaceState};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_STATE: i32 = 3;

const STREAM_BLOCK: usize = 4096;

#[derive(Debug, Parser)]
#[command(name = "wallace", version, about = "Pool-based normal pseudo-random generator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write `count` normal variates to stdout.
    Gen(GenArgs),
    /// Write an unbounded stream of normal variates to stdout.
    Stream(StreamArgs),
    /// Run the statistical suite.
    Test(TestArgs),
    /// Measure nanoseconds per value.
    Bench(BenchArgs),
    /// Contrast unit-stride and recommended pass parameters.
    Diag(DiagArgs),
}

#[derive(Debug, Clone, Args)]
struct GeneratorArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream_id: u64,
    /// Throw-away factor: passes per delivered pool.
    #[arg(long = "f", default_value_t = 3)]
    f: u32,
    /// Pool half-length N = 2^p.
    #[arg(long, default_value_t = 10)]
    pool_exponent: u32,
}

#[derive(Debug, Clone, Args)]
struct OutputArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    sigma: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// One value per line, 17 significant digits.
    Text,
    /// Raw little-endian binary64.
    F64le,
}

#[derive(Debug, Clone, Args)]
struct GenArgs {
    #[command(flatten)]
    gen: GeneratorArgs,
    #[command(flatten)]
    out: OutputArgs,
    #[arg(long, default_value_t = 10)]
    count: u64,
    /// Resume from this state file if it exists, and save back to it.
    #[arg(long)]
    state_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct StreamArgs {
    #[command(flatten)]
    gen: GeneratorArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Uniformity,
    Moments,
    Autocorr,
    Sumsq,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Wallace,
    Polar,
    Boxmuller,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Wallace => Method::Wallace,
            MethodArg::Polar => Method::Polar,
            MethodArg::Boxmuller => Method::BoxMuller,
        }
    }
}

#[derive(Debug, Clone, Args)]
struct TestArgs {
    #[command(flatten)]
    gen: GeneratorArgs,
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "wallace")]
    methods: Vec<MethodArg>,
    /// Base sample count (uniformity pairs); other suites scale from it.
    #[arg(long)]
    samples: Option<u64>,
    /// Also run the unit-stride configuration through the autocorrelation gate.
    #[arg(long)]
    diag_flawed: bool,
    /// Offset for the unit-stride configuration.
    #[arg(long, default_value_t = 1)]
    gamma: u64,
}

#[derive(Debug, Clone, Args)]
struct BenchArgs {
    #[command(flatten)]
    gen: GeneratorArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "wallace,polar,boxmuller")]
    methods: Vec<MethodArg>,
    /// Wall time per method.
    #[arg(long, default_value_t = 1.0)]
    seconds: f64,
}

#[derive(Debug, Clone, Args)]
struct DiagArgs {
    #[command(flatten)]
    gen: GeneratorArgs,
    #[arg(long, default_value_t = DEFAULT_BASE_SAMPLES as u64)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    gamma: u64,
}

/// A failure mapped to an exit code.
struct Exit {
    code: i32,
    message: String,
}

impl Exit {
    fn usage(message: impl Into<String>) -> Self {
        Exit { code: EXIT_USAGE, message: message.into() }
    }

    fn state(message: impl Into<String>) -> Self {
        Exit { code: EXIT_STATE, message: message.into() }
    }

    fn failure(message: impl Into<String>) -> Self {
        Exit { code: EXIT_FAILURE, message: message.into() }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) => Exit::usage(e.to_string()),
            Error::MalformedState(_) => Exit::state(e.to_string()),
            Error::CorruptedState(_) => Exit::failure(e.to_string()),
        }
    }
}

/// Write errors on stdout; a closed pipe is a normal way to stop.
enum Output {
    Closed,
    Failed(io::Error),
}

impl From<io::Error> for Output {
    fn from(e: io::Error) -> Self {
        if e.kind() == ErrorKind::BrokenPipe {
            Output::Closed
        } else {
            Output::Failed(e)
        }
    }
}

impl GeneratorArgs {
    fn validate(&self) -> Result<(), Exit> {
        if self.f == 0 {
            return Err(Exit::usage("--f must be at least 1"));
        }
        if !(MIN_POOL_EXPONENT..=MAX_POOL_EXPONENT).contains(&self.pool_exponent) {
            return Err(Exit::usage(format!(
                "--pool-exponent must be in [{MIN_POOL_EXPONENT}, {MAX_POOL_EXPONENT}]"
            )));
        }
        Ok(())
    }

    fn wallace_config(&self) -> WallaceConfig {
        WallaceConfig {
            throwaway_f: self.f,
            pool_exponent: self.pool_exponent,
            ..WallaceConfig::with_seed(self.seed, self.stream_id)
        }
    }

    fn suite_config(&self, base_samples: usize) -> SuiteConfig {
        SuiteConfig {
            seed: self.seed,
            stream_id: self.stream_id,
            throwaway_f: self.f,
            pool_exponent: self.pool_exponent,
            base_samples,
        }
    }

    fn n(&self) -> u64 {
        1 << self.pool_exponent
    }
}

impl OutputArgs {
    fn validate(&self) -> Result<(), Exit> {
        if !self.mu.is_finite() {
            return Err(Exit::usage("--mu must be finite"));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Exit::usage("--sigma must be finite and non-negative"));
        }
        Ok(())
    }
}

fn write_values(out: &mut impl Write, values: &[f64], format: Format) -> io::Result<()> {
    match format {
        Format::Text => {
            for v in values {
                writeln!(out, "{v:.16e}")?;
            }
        }
        Format::F64le => {
            for v in values {
                out.write_all(&v.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

fn read_state_file(path: &Path) -> Result<Option<WallaceState>, Exit> {
    match std::fs::read(path) {
        Ok(bytes) => load_state(&bytes).map(Some).map_err(|e| Exit::state(format!("{}: {e}", path.display()))),
        Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Exit::state(format!("{}: {e}", path.display()))),
    }
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<(), Exit> {
    args.gen.validate()?;
    args.out.validate()?;
    let mut state = match &args.state_file {
        Some(path) => read_state_file(path)?,
        None => None,
    }
    .map_or_else(|| WallaceState::new(args.gen.wallace_config()), Ok)?;

    let mut out = BufWriter::new(out);
    let mut remaining = args.count;
    let mut buf = vec![0.0; STREAM_BLOCK];
    let mut closed = false;
    while remaining > 0 {
        let take = remaining.min(STREAM_BLOCK as u64) as usize;
        state.fill_into(&mut buf[..take], args.out.mu, args.out.sigma)?;
        remaining -= take as u64;
        if let Err(e) = write_values(&mut out, &buf[..take], args.out.format) {
            match Output::from(e) {
                Output::Closed => {
                    closed = true;
                    break;
                }
                Output::Failed(e) => return Err(Exit::failure(format!("write failed: {e}"))),
            }
        }
    }
    if !closed {
        if let Err(Output::Failed(e)) = out.flush().map_err(Output::from) {
            return Err(Exit::failure(format!("write failed: {e}")));
        }
    }
    if let Some(path) = &args.state_file {
        let bytes = save_state(&state)?;
        std::fs::write(path, bytes).map_err(|e| Exit::state(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_stream(args: &StreamArgs, out: &mut dyn Write) -> Result<(), Exit> {
    args.gen.validate()?;
    args.out.validate()?;
    let mut state = WallaceState::new(args.gen.wallace_config())?;
    let mut out = BufWriter::with_capacity(1 << 16, out);
    let mut buf = vec![0.0; STREAM_BLOCK];
    loop {
        state.fill_into(&mut buf, args.out.mu, args.out.sigma)?;
        if let Err(e) = write_values(&mut out, &buf, args.out.format).and_then(|()| out.flush()) {
            return match Output::from(e) {
                Output::Closed => Ok(()),
                Output::Failed(e) => Err(Exit::failure(format!("write failed: {e}"))),
            };
        }
    }
}

fn render_verdict(out: &mut dyn Write, v: &Verdict) -> io::Result<()> {
    writeln!(
        out,
        "test={} method={} statistic={:.6e} threshold={} result={}",
        v.test,
        v.method,
        v.statistic,
        v.threshold,
        if v.pass { "PASS" } else { "FAIL" }
    )
}

fn cmd_test(args: &TestArgs, out: &mut dyn Write) -> Result<bool, Exit> {
    args.gen.validate()?;
    let base = match args.samples {
        Some(0) => return Err(Exit::usage("--samples must be positive")),
        Some(s) => s as usize,
        None => DEFAULT_BASE_SAMPLES,
    };
    if args.gamma >= args.gen.n() {
        return Err(Exit::usage(format!("--gamma must be below N = {}", args.gen.n())));
    }
    let cfg = args.gen.suite_config(base);
    let suites: Vec<Suite> = match args.suite {
        SuiteArg::Uniformity => vec![Suite::Uniformity],
        SuiteArg::Moments => vec![Suite::Moments],
        SuiteArg::Autocorr => vec![Suite::Autocorr],
        SuiteArg::Sumsq => vec![Suite::Sumsq],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let mut verdicts = Vec::new();
    for &method in &args.methods {
        for &s in &suites {
            verdicts.extend(suite::run_suite(s, method.into(), &cfg)?);
        }
    }
    if args.diag_flawed {
        let gamma = args.gamma as usize;
        let mut flawed = suite::flawed_generator(&cfg, gamma)?;
        let values = suite::draw(&mut flawed, base)?;
        let lag = 2 * (1usize << cfg.pool_exponent) - gamma;
        let r = crate::stats::autocorr_at_lag(&values, lag)?;
        verdicts.push(Verdict {
            test: format!("autocorr_lag_{lag}"),
            method: "wallace-unit-stride".into(),
            statistic: r.r,
            threshold: suite::Threshold::AbsAtMost(suite::autocorr_bound(values.len())),
            pass: r.r.abs() <= suite::autocorr_bound(values.len()),
        });
    }
    let write = |out: &mut dyn Write| -> io::Result<bool> {
        for v in &verdicts {
            render_verdict(out, v)?;
        }
        let passed = verdicts.iter().filter(|v| v.pass).count();
        let ok = passed == verdicts.len();
        writeln!(
            out,
            "summary tests={} passed={} failed={} result={}",
            verdicts.len(),
            passed,
            verdicts.len() - passed,
            if ok { "PASS" } else { "FAIL" }
        )?;
        Ok(ok)
    };
    write(out).map_err(|e| Exit::failure(format!("write failed: {e}")))
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<(), Exit> {
    args.gen.validate()?;
    if !(args.seconds > 0.0 && args.seconds.is_finite()) {
        return Err(Exit::usage("--seconds must be positive"));
    }
    let cfg = BenchConfig {
        seconds: args.seconds,
        seed: args.gen.seed,
        stream_id: args.gen.stream_id,
        throwaway_f: args.gen.f,
        pool_exponent: args.gen.pool_exponent,
        ..BenchConfig::default()
    };
    let results = args
        .methods
        .iter()
        .map(|&m| bench::run(m.into(), &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let render = |out: &mut dyn Write| -> io::Result<()> {
        writeln!(out, "{:<10} {:>3} {:>14} {:>10}", "method", "f", "values", "ns/value")?;
        for r in &results {
            let f = r.throwaway_f.map_or("-".to_string(), |f| f.to_string());
            writeln!(out, "{:<10} {:>3} {:>14} {:>10.3}", r.method, f, r.values, r.ns_per_value)?;
        }
        for r in &results {
            let f = r.throwaway_f.map_or("-".to_string(), |f| f.to_string());
            writeln!(
                out,
                "bench method={} f={} values={} seconds={:.6} ns_per_value={:.6}",
                r.method,
                f,
                r.values,
                r.elapsed.as_secs_f64(),
                r.ns_per_value
            )?;
        }
        Ok(())
    };
    render(out).map_err(|e| Exit::failure(format!("write failed: {e}")))
}

fn cmd_diag(args: &DiagArgs, out: &mut dyn Write) -> Result<(), Exit> {
    args.gen.validate()?;
    let n = args.gen.n();
    if args.gamma >= n {
        return Err(Exit::usage(format!("--gamma must be below N = {n}")));
    }
    let lag = 2 * n - args.gamma;
    if args.samples <= lag + 1 {
        return Err(Exit::usage(format!("--samples must exceed lag + 1 = {}", lag + 1)));
    }
    let cfg = args.gen.suite_config(args.samples as usize);
    let (bad, good) = suite::stride_flaw_reports(&cfg, args.gamma as usize, args.samples as usize)?;
    let render = |out: &mut dyn Write| -> io::Result<()> {
        writeln!(out, "{:<12} {:>8} {:>12} {:>10}", "config", "lag", "r", "pairs")?;
        for (name, r) in [("unit-stride", &bad), ("recommended", &good)] {
            writeln!(out, "{:<12} {:>8} {:>12.6} {:>10}", name, r.lag, r.r, r.n)?;
        }
        for (name, r) in [("unit-stride", &bad), ("recommended", &good)] {
            writeln!(out, "diag config={name} lag={} r={:.6e} pairs={}", r.lag, r.r, r.n)?;
        }
        Ok(())
    };
    render(out).map_err(|e| Exit::failure(format!("write failed: {e}")))
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            return match e.kind() {
                K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand
                    if e.exit_code() == 0 =>
                {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a, out).map(|()| EXIT_OK),
        Command::Stream(a) => cmd_stream(a, out).map(|()| EXIT_OK),
        Command::Test(a) => cmd_test(a, out).map(|ok| if ok { EXIT_OK } else { EXIT_FAILURE }),
        Command::Bench(a) => cmd_bench(a, out).map(|()| EXIT_OK),
        Command::Diag(a) => cmd_diag(a, out).map(|()| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(exit) => {
            let _ = writeln!(err, "error: {}", exit.message);
            if exit.code == EXIT_USAGE {
                let _ = writeln!(err, "\n{}", Cli::command().render_usage());
            }
            exit.code
        }
    }
}
