mod config;

use std::fmt;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use towerseq::approx::{best_approx, density_profile, search, SearchMode, TargetSpec};
use towerseq::cantor::{
    diagonal, difference_profile, index_of_value, nested_intervals, DigitRule, SequenceSource,
    SourceKind, Termination,
};
use towerseq::decimal::{format_exact, parse_decimal};
use towerseq::enumerate::{entries_up_to, golden_prefix, verify_prefix, DedupPolicy, EnumCursor};
use towerseq::eval::{decimal_digits, Real};
use towerseq::Tower;

use config::Config;

const EXIT_ERROR: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_FLAGGED: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Jsonl,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format {s:?} (expected text, jsonl or csv)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Jsonl => "jsonl",
            Format::Csv => "csv",
        })
    }
}

/// Enumerate rational power towers, evaluate them rigorously, and run the
/// nested-interval and diagonal constructions over them.
#[derive(Parser)]
#[command(name = "towerseq", version)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, env = "TOWERSEQ_CONFIG")]
    config: Option<PathBuf>,
    /// Precision cap in decimal digits (at least 64).
    #[arg(long, global = true)]
    precision_cap: Option<u32>,
    /// commit-and-flag, skip-and-flag or fail.
    #[arg(long, global = true)]
    dedup_policy: Option<DedupPolicy>,
    /// text, jsonl or csv.
    #[arg(long, global = true)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stream the deduplicated sequence.
    Enumerate(EnumerateArgs),
    /// Decimal digits of an expression.
    Eval(EvalArgs),
    /// Best approximant to a target within a weight bound.
    Approx(ApproxArgs),
    /// Diagonal construction over a source.
    Diagonal(DiagonalArgs),
    /// Nested-interval construction over a source.
    Nested(NestedArgs),
    /// Compare the stream with the golden prefix.
    VerifyPrefix(VerifyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "budget")]
struct Budget {
    /// Number of entries to emit.
    #[arg(long)]
    count: Option<usize>,
    /// Emit every entry up to this weight.
    #[arg(long)]
    max_weight: Option<u32>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    budget: Budget,
    /// Resume from this checkpoint if it exists and save to it afterwards.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Exit with status 3 if any pair was indistinguishable.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct EvalArgs {
    /// Canonical expression, e.g. "(2/1)^[(2/1)^(1/2)]"
    expr: String,
    /// Digits after the decimal point.
    #[arg(long, default_value_t = 30)]
    digits: usize,
}

#[derive(Args)]
struct ApproxArgs {
    /// e, pi, ln2, sqrt2 or a decimal literal.
    #[arg(long)]
    target: TargetSpec,
    /// Largest weight searched
    #[arg(long)]
    max_weight: u32,
    /// Report the best approximant for every weight bound up to the maximum.
    #[arg(long)]
    profile: bool,
    /// Skip entries that provably cannot beat the incumbent.
    #[arg(long)]
    pruned: bool,
}

#[derive(Args)]
struct SourceArgs {
    /// towers, calkin-wilf, straddle or file.
    #[arg(long, default_value = "towers")]
    source: SourceKind,
    /// Input for the file source: one expression or decimal per line.
    #[arg(long, required_if_eq("source", "file"))]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct DiagonalArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Number of diagonal digits.
    #[arg(long)]
    count: usize,
    /// Images of the digits 0 to 9.
    #[arg(long, default_value = "5555545555")]
    rule: String,
    /// Emit the distance profile instead of the digit table.
    #[arg(long)]
    profile: bool,
}

#[derive(Args)]
struct NestedArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Lower end of the starting interval.
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    /// Upper end of the starting interval.
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    /// Number of intervals to construct
    #[arg(long)]
    depth: usize,
    /// Elements examined per level at most.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    /// Also report where this value occurs in the Calkin-Wilf rationals.
    #[arg(long, default_value = "1")]
    locate: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Reference file of canonical strings; defaults to the built-in prefix.
    #[arg(long)]
    reference: Option<PathBuf>,
}

/// A failure mapped to an exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_CONFIG,
            message: message.to_string(),
        }
    }

    fn error(message: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_ERROR,
            message: message.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::error(e)
    }
}

type Out<'a> = &'a mut dyn Write;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|code| {
        out.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let _ = out.flush();
            eprintln!("towerseq: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli, out: Out) -> Result<u8, Failure> {
    let mut config = Config::load(cli.config.as_deref()).map_err(Failure::config)?;
    if let Some(cap) = cli.precision_cap {
        config.precision.cap_digits = cap;
    }
    if let Some(p) = cli.dedup_policy {
        config.policy = p;
    }
    if let Some(f) = cli.format {
        config.format = f;
    }
    config.validate().map_err(Failure::config)?;
    match cli.command {
        Command::Enumerate(args) => enumerate(&config, args, out),
        Command::Eval(args) => eval(&config, args, out),
        Command::Approx(args) => approx(&config, args, out),
        Command::Diagonal(args) => run_diagonal(&config, args, out),
        Command::Nested(args) => nested(&config, args, out),
        Command::VerifyPrefix(args) => verify(&config, args, out),
    }
}

fn enumerate(config: &Config, args: EnumerateArgs, out: Out) -> Result<u8, Failure> {
    let checkpoint = args.checkpoint.or_else(|| config.checkpoint.clone());
    let mut cursor = match &checkpoint {
        Some(path) if path.exists() => EnumCursor::load_checkpoint(path).map_err(Failure::error)?,
        _ => EnumCursor::new(config.enum_config()),
    };
    let flags_before = cursor.flags().len();
    if config.format == Format::Csv {
        writeln!(out, "index,weight,expr,value,exact")?;
    }
    let mut emitted = 0usize;
    loop {
        let entry = match (args.budget.count, args.budget.max_weight) {
            (Some(n), _) if emitted >= n => break,
            (Some(_), _) => cursor.next_entry().map(Some),
            (None, Some(w)) => cursor.next_within(w),
            (None, None) => unreachable!("clap requires a budget"),
        };
        let Some(entry) = entry.map_err(Failure::error)? else {
            break;
        };
        emitted += 1;
        let value = entry.value.to_decimal(20);
        match config.format {
            Format::Jsonl => writeln!(out, "{}", entry.to_jsonl())?,
            Format::Csv => writeln!(
                out,
                "{},{},{},{},{}",
                entry.index,
                entry.weight,
                entry.expr,
                value,
                entry.value.is_exact()
            )?,
            Format::Text => writeln!(out, "{}\t{}\t{}\t{}", entry.index, entry.weight, entry.expr, value)?,
        }
    }
    if let Some(path) = &checkpoint {
        cursor.save_checkpoint(path).map_err(Failure::error)?;
    }
    let new_flags = &cursor.flags()[flags_before..];
    for f in new_flags {
        eprintln!(
            "towerseq: warning: {} not separated from entry {} ({}) at {} digits",
            f.expr, f.other_index, f.other_expr, f.cap_digits
        );
    }
    Ok(if args.strict && !new_flags.is_empty() {
        EXIT_FLAGGED
    } else {
        0
    })
}

fn parse_value(text: &str) -> Result<Real, Failure> {
    let t = text.trim();
    if t.starts_with('(') {
        Tower::parse(t).map(Real::Expr).map_err(|e| Failure::config(format!("{t:?}: {e}")))
    } else {
        parse_decimal(t)
            .map(Real::Exact)
            .ok_or_else(|| Failure::config(format!("{t:?} is neither an expression nor a decimal")))
    }
}

fn eval(config: &Config, args: EvalArgs, out: Out) -> Result<u8, Failure> {
    let expr = Tower::parse(&args.expr).map_err(|e| Failure::config(format!("{:?}: {e}", args.expr)))?;
    let digits = decimal_digits(&Real::Expr(expr.clone()), args.digits, &config.precision)
        .map_err(Failure::error)?;
    let value = if args.digits == 0 {
        digits.integer.clone()
    } else {
        format!("{}.{}", digits.integer, digits.fraction)
    };
    match config.format {
        Format::Jsonl => writeln!(
            out,
            "{}",
            serde_json::json!({"expr": expr.render(), "digits": args.digits, "value": value, "exact": digits.exact})
        )?,
        Format::Csv => {
            writeln!(out, "expr,digits,value,exact")?;
            writeln!(out, "{},{},{},{}", expr, args.digits, value, digits.exact)?;
        }
        Format::Text => writeln!(out, "{value}")?,
    }
    Ok(0)
}

fn approx(config: &Config, args: ApproxArgs, out: Out) -> Result<u8, Failure> {
    if args.max_weight < 2 {
        return Err(Failure::config("--max-weight must be at least 2"));
    }
    let enum_config = config.enum_config();
    if args.profile {
        let weights: Vec<u32> = (2..=args.max_weight).collect();
        let profile = density_profile(&args.target, &weights, enum_config).map_err(Failure::error)?;
        match config.format {
            Format::Jsonl => write!(out, "{}", profile.to_jsonl())?,
            _ => write!(out, "{}", profile.to_csv())?,
        }
        return Ok(0);
    }
    let best = if args.pruned {
        let entries = entries_up_to(args.max_weight, enum_config).map_err(Failure::error)?;
        search(&entries, &args.target, SearchMode::Pruned).expect("nonempty")
    } else {
        best_approx(&args.target, args.max_weight, enum_config).map_err(Failure::error)?
    };
    match config.format {
        Format::Jsonl => writeln!(
            out,
            "{}",
            serde_json::json!({
                "target": args.target.label(),
                "max_weight": args.max_weight,
                "index": best.index,
                "weight": best.weight,
                "expr": best.expr.render(),
                "error_upper_bound": best.error_string(),
            })
        )?,
        Format::Csv => {
            writeln!(out, "weight,expr,error_upper_bound")?;
            writeln!(out, "{},{},{}", best.weight, best.expr, best.error_string())?;
        }
        Format::Text => writeln!(
            out,
            "{} index {} weight {} error <= {}",
            best.expr,
            best.index,
            best.weight,
            best.error_string()
        )?,
    }
    Ok(0)
}

fn open_source(config: &Config, args: &SourceArgs) -> Result<SequenceSource, Failure> {
    Ok(match args.source {
        SourceKind::Towers => SequenceSource::towers(config.enum_config()),
        SourceKind::CalkinWilf => SequenceSource::calkin_wilf(),
        SourceKind::Straddle => SequenceSource::straddle(),
        SourceKind::File => {
            let path = args.file.as_ref().ok_or_else(|| Failure::config("--file is required"))?;
            SequenceSource::from_file(path).map_err(Failure::config)?
        }
    })
}

fn run_diagonal(config: &Config, args: DiagonalArgs, out: Out) -> Result<u8, Failure> {
    let rule: DigitRule = args.rule.parse().map_err(Failure::config)?;
    let mut src = open_source(config, &args.source)?;
    let result = diagonal(&mut src, args.count, &rule, &config.precision).map_err(Failure::error)?;
    if args.profile {
        let rows = difference_profile(&result);
        match config.format {
            Format::Jsonl => {
                for r in rows {
                    writeln!(
                        out,
                        "{}",
                        serde_json::json!({
                            "k": r.k,
                            "first_difference": r.first_difference,
                            "lower": format_exact(&r.lower),
                            "upper": format_exact(&r.upper),
                            "series": format_exact(&r.series),
                        })
                    )?;
                }
            }
            _ => {
                writeln!(out, "k,first_difference,lower,upper,series")?;
                for r in rows {
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        r.k,
                        r.first_difference,
                        format_exact(&r.lower),
                        format_exact(&r.upper),
                        format_exact(&r.series)
                    )?;
                }
            }
        }
        return Ok(0);
    }
    match config.format {
        Format::Jsonl => {
            for row in &result.rows {
                writeln!(out, "{}", serde_json::to_string(row).expect("plain record"))?;
            }
            writeln!(
                out,
                "{}",
                serde_json::json!({"n": result.n, "rule": result.rule, "digits": format!("0.{}", result.digits)})
            )?;
        }
        Format::Csv => {
            writeln!(out, "nu,value,a,b,first_difference,digits")?;
            for r in &result.rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.nu, r.value, r.diagonal_digit, r.new_digit, r.first_difference, r.digits
                )?;
            }
        }
        Format::Text => {
            for r in &result.rows {
                writeln!(
                    out,
                    "{}\t{}\ta={}\tb={}\tfirst_difference={}\t{}.{}",
                    r.nu, r.value, r.diagonal_digit, r.new_digit, r.first_difference, r.integer_part, r.digits
                )?;
            }
            writeln!(out, "0.{}", result.digits)?;
        }
    }
    Ok(0)
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::DepthReached => "depth-reached",
        Termination::BudgetExhausted => "budget-exhausted",
    }
}

fn nested(config: &Config, args: NestedArgs, out: Out) -> Result<u8, Failure> {
    let a = parse_value(&args.a)?;
    let b = parse_value(&args.b)?;
    let locate = parse_value(&args.locate)?;
    let mut src = open_source(config, &args.source)?;
    let trace = nested_intervals(&mut src, a, b, args.depth, args.budget, &config.precision)
        .map_err(|e| match e {
            towerseq::cantor::HarnessError::InvalidInput(m) => Failure::config(m),
            other => Failure::error(other),
        })?;
    let located = index_of_value(&mut SequenceSource::calkin_wilf(), &locate, args.budget, &config.precision)
        .map_err(Failure::error)?;
    let show = |r: &Real| match r {
        Real::Exact(q) => q.to_string(),
        Real::Expr(t) => t.render(),
    };
    match config.format {
        Format::Jsonl => {
            for (nu, l) in trace.levels.iter().enumerate() {
                writeln!(
                    out,
                    "{}",
                    serde_json::json!({
                        "level": nu,
                        "alpha_index": l.alpha_index,
                        "alpha": show(&l.alpha),
                        "beta_index": l.beta_index,
                        "beta": show(&l.beta),
                    })
                )?;
            }
            writeln!(
                out,
                "{}",
                serde_json::json!({
                    "termination": termination_name(trace.termination),
                    "scanned": trace.scanned,
                    "locate": args.locate,
                    "calkin_wilf_index": located,
                })
            )?;
        }
        _ => {
            writeln!(out, "level,alpha_index,alpha,beta_index,beta")?;
            for (nu, l) in trace.levels.iter().enumerate() {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    nu,
                    l.alpha_index,
                    show(&l.alpha),
                    l.beta_index,
                    show(&l.beta)
                )?;
            }
            eprintln!(
                "towerseq: {} after {} levels, {} elements scanned",
                termination_name(trace.termination),
                trace.levels.len(),
                trace.scanned
            );
            match located {
                Some(i) => eprintln!("towerseq: {} is element {i} of the Calkin-Wilf rationals", args.locate),
                None => eprintln!("towerseq: {} not among the first {} Calkin-Wilf rationals", args.locate, args.budget),
            }
        }
    }
    Ok(0)
}

fn verify(config: &Config, args: VerifyArgs, out: Out) -> Result<u8, Failure> {
    let reference = match &args.reference {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("{}: {e}", path.display())))?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(String::from)
            .collect(),
        None => golden_prefix(),
    };
    if reference.is_empty() {
        return Err(Failure::config("reference is empty"));
    }
    let report = verify_prefix(&reference, config.enum_config()).map_err(Failure::error)?;
    match config.format {
        Format::Jsonl => writeln!(out, "{}", serde_json::to_string(&report).expect("plain record"))?,
        _ => {
            writeln!(out, "match: {}/{}", report.matched, report.total)?;
            if let Some(d) = &report.first_divergence {
                writeln!(
                    out,
                    "first divergence at {}: expected {}, found {}",
                    d.index,
                    d.expected,
                    d.found.as_deref().unwrap_or("<end of stream>")
                )?;
                for d in &report.diff {
                    writeln!(
                        out,
                        "  {}: expected {}, found {}",
                        d.index,
                        d.expected,
                        d.found.as_deref().unwrap_or("<end of stream>")
                    )?;
                }
            }
        }
    }
    Ok(if report.is_match() { 0 } else { EXIT_ERROR })
}
