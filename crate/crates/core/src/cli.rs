//! The `qhoare` command-line interface.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{run_suite, BenchRow, GateSet, Suite};
use crate::circuit::Circuit;
use crate::cond::parse_condition;
use crate::error::{Error, Result};
use crate::metrics::Metrics;
use crate::opt::{compile_opt, optimize, PassConfig, DEFAULT_WINDOW};
use crate::sim::equivalent;
use crate::text;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "qhoare",
    version,
    about = "Assertion-driven quantum circuit optimizer"
)]
pub struct Cli {
    /// Seed for randomized harnesses; the commands themselves are deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimize a circuit file.
    Optimize(OptimizeArgs),
    /// Build a benchmark family and tabulate both compilers.
    Bench(BenchArgs),
    /// Check two circuits for equivalence by simulation.
    Verify(VerifyArgs),
    /// Print width, depth and gate counts.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PassChoice {
    Peephole,
    Hoare,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateSetArg {
    Native,
    CliffordT,
}

impl From<GateSetArg> for GateSet {
    fn from(g: GateSetArg) -> Self {
        match g {
            GateSetArg::Native => GateSet::Native,
            GateSetArg::CliffordT => GateSet::CliffordT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct PassArgs {
    #[arg(long = "pass", value_enum, default_value = "both")]
    pub pass: PassChoice,

    /// Maximum instruction span of a multi-gate group.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
}

impl PassArgs {
    fn config(&self) -> PassConfig {
        let base = match self.pass {
            PassChoice::Peephole => PassConfig::peephole_only(),
            PassChoice::Hoare => PassConfig::hoare_only(),
            PassChoice::Both => PassConfig::default(),
        };
        PassConfig {
            window: self.window,
            ..base
        }
    }
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    pub input: PathBuf,

    /// Output circuit file; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,

    /// Removal log (JSON lines). Defaults to `<output>.log.jsonl`, or stderr.
    #[arg(long)]
    pub log: Option<PathBuf>,

    #[command(flatten)]
    pub passes: PassArgs,

    #[arg(long, value_enum, default_value = "native")]
    pub gate_set: GateSetArg,

    /// `--emit smt2 <dir>` writes one SMT-LIB2 script per solver pass.
    #[arg(long, num_args = 2, value_names = ["KIND", "DIR"])]
    pub emit: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(value_parser = parse_suite)]
    pub suite: Suite,

    /// Sizes, e.g. `4,8,16` or `2-6`. Defaults to the suite's standard sizes.
    #[arg(long = "n", value_parser = parse_sizes)]
    pub sizes: Option<Sizes>,

    #[command(flatten)]
    pub passes: PassArgs,

    #[arg(long, value_enum, default_value = "clifford-t")]
    pub gate_set: GateSetArg,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub original: PathBuf,
    pub optimized: PathBuf,

    /// File holding a condition over the original circuit's qubit names.
    #[arg(long)]
    pub pre: Option<PathBuf>,

    /// Also require one global phase shared by all inputs.
    #[arg(long)]
    pub common_phase: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub input: PathBuf,

    #[arg(long, value_enum, default_value = "native")]
    pub gate_set: GateSetArg,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sizes(pub Vec<usize>);

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_sizes(s: &str) -> std::result::Result<Sizes, String> {
    let bad = || format!("invalid size list {s:?}");
    if let Some((lo, hi)) = s.split_once('-') {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok(Sizes((lo..=hi).collect()));
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect::<std::result::Result<_, _>>()
        .map(Sizes)
}

pub fn default_sizes(s: Suite) -> Vec<usize> {
    match s {
        Suite::Chain => vec![2, 4, 8, 16, 32, 64],
        Suite::Renorm => vec![4, 8, 16],
        Suite::Modred => vec![4, 8, 16, 32],
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. }
        | Error::ConditionSyntax { .. }
        | Error::Invalid(_)
        | Error::DeadQubit(_)
        | Error::Arity { .. }
        | Error::Unsupported(_)
        | Error::Range(_) => EXIT_PARSE,
        Error::Budget { .. } | Error::VariableBudget { .. } => EXIT_BUDGET,
        Error::DirtyDealloc { .. } | Error::AssertionViolated { .. } => EXIT_VERIFY,
        Error::Params(_) | Error::Io(_) | Error::Json(_) => EXIT_USAGE,
    }
}

fn read_circuit(path: &Path) -> Result<Circuit> {
    text::parse(&fs::read_to_string(path)?)
}

fn optimize_cmd(a: &OptimizeArgs, err: &mut dyn Write) -> Result<String> {
    let c = read_circuit(&a.input)?;
    let smt2_dir = match a.emit.as_deref() {
        None => None,
        Some([kind, dir]) if kind == "smt2" => Some(PathBuf::from(dir)),
        Some(other) => return Err(Error::Params(format!("cannot emit {:?}", other[0]))),
    };
    let cfg = PassConfig {
        record_smt2: smt2_dir.is_some(),
        ..a.passes.config()
    };
    let (out, o) = match a.gate_set {
        GateSetArg::Native => {
            let o = optimize(&c, &cfg)?;
            (o.circuit.clone(), o)
        }
        GateSetArg::CliffordT => compile_opt(&c, &cfg)?,
    };
    if let Some(dir) = smt2_dir {
        fs::create_dir_all(&dir)?;
        for (pass, script) in &o.smt2 {
            fs::write(dir.join(format!("{pass}.smt2")), script)?;
        }
    }
    let log = o.log.to_json_lines();
    let log_path = a.log.clone().or_else(|| {
        a.output
            .as_ref()
            .map(|p| PathBuf::from(format!("{}.log.jsonl", p.display())))
    });
    match log_path {
        Some(p) => fs::write(p, &log)?,
        None => err.write_all(log.as_bytes())?,
    }
    let body = text::serialize(&out);
    match &a.output {
        Some(p) => {
            fs::write(p, body)?;
            Ok(String::new())
        }
        None => Ok(body),
    }
}

fn bench_cmd(a: &BenchArgs) -> Result<String> {
    let ns = a
        .sizes
        .clone()
        .map_or_else(|| default_sizes(a.suite), |s| s.0);
    let rows = run_suite(a.suite, &ns, a.gate_set.into(), &a.passes.config())?;
    Ok(match a.format {
        Format::Csv => {
            let mut s = String::from(BenchRow::CSV_HEADER);
            s.push('\n');
            for r in &rows {
                s.push_str(&r.to_csv());
                s.push('\n');
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
    })
}

fn verify_cmd(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let c1 = read_circuit(&a.original)?;
    let c2 = read_circuit(&a.optimized)?;
    let pre = match &a.pre {
        Some(p) => Some(parse_condition(fs::read_to_string(p)?.trim(), &c1.names)?),
        None => None,
    };
    let e = equivalent(&c1, &c2, pre.as_ref())?;
    let ok = e.per_input && (e.common_phase || !a.common_phase);
    if ok {
        writeln!(
            out,
            "equivalent on {} inputs (common phase: {})",
            e.inputs_checked, e.common_phase
        )?;
        return Ok(EXIT_OK);
    }
    match &e.counterexample {
        Some(cx) if cx.is_empty() => {
            writeln!(out, "not equivalent; counterexample: |0> (no input qubits)")?
        }
        Some(cx) => {
            let bits: Vec<String> = cx
                .iter()
                .map(|(n, b)| format!("{n}={}", u8::from(*b)))
                .collect();
            writeln!(out, "not equivalent; counterexample: {}", bits.join(" "))?;
        }
        None if e.per_input => writeln!(out, "equivalent only up to per-input phases")?,
        None => writeln!(out, "not equivalent")?,
    }
    Ok(EXIT_VERIFY)
}

fn stats_cmd(a: &StatsArgs) -> Result<String> {
    let mut c = read_circuit(&a.input)?;
    if a.gate_set == GateSetArg::CliffordT {
        c = crate::decompose::decompose(&c)?;
    }
    let m = Metrics::of(&c)?;
    Ok(match a.format {
        Format::Json => serde_json::to_string_pretty(&m)? + "\n",
        Format::Csv => {
            let mut s = format!(
                "metric,value\nwidth,{}\ndag_depth,{}\n",
                m.width, m.dag_depth
            );
            for (g, k) in &m.gate_counts {
                s.push_str(&format!("count_{g},{k}\n"));
            }
            s
        }
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Optimize(a) => {
            optimize_cmd(a, err).and_then(|s| Ok(out.write_all(s.as_bytes()).map(|_| EXIT_OK)?))
        }
        Command::Bench(a) => {
            bench_cmd(a).and_then(|s| Ok(out.write_all(s.as_bytes()).map(|_| EXIT_OK)?))
        }
        Command::Verify(a) => verify_cmd(a, out),
        Command::Stats(a) => {
            stats_cmd(a).and_then(|s| Ok(out.write_all(s.as_bytes()).map(|_| EXIT_OK)?))
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
