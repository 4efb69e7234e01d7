use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use olpa::ast::parse;
use olpa::engine::{brute_force_max, uniformity_probe, worst_case, OracleMode, ProbeBounds, SweepOptions, Verdict};
use olpa::verify::run_suite;
use olpa::witness::{enumerate_configs, letter_names, WitnessConfig, WitnessFactory};
use olpa::{Dfa, Error, Limits};
use serde::Serialize;

const DEFAULT_MAX_LETTERS: usize = 3125;
const LARGE_MAX_LETTERS: usize = 65536;

#[derive(Parser)]
#[command(name = "olpa", version, about = "Worst-case state complexity via one-letter-per-action witnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Caps {
    /// Raise the witness alphabet cap to 65536 letters
    #[arg(long)]
    allow_large: bool,
    /// Explicit witness alphabet cap (overrides --allow-large)
    #[arg(long)]
    max_letters: Option<usize>,
}

impl Caps {
    fn limits(&self) -> Limits {
        let cap = self
            .max_letters
            .unwrap_or(if self.allow_large { LARGE_MAX_LETTERS } else { DEFAULT_MAX_LETTERS });
        Limits::from_env().with_max_letters(cap)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    AllDfas,
    TransformationSubsets,
}

#[derive(Subcommand)]
enum Command {
    /// Write OLPA witness DFAs for one configuration or a sweep
    Witness {
        /// Single input size (same as --sizes N)
        #[arg(long, conflicts_with = "sizes")]
        n: Option<usize>,
        /// Comma-separated input sizes
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Final-state counts, comma-separated, or "sweep"
        #[arg(long, default_value = "sweep")]
        k: String,
        /// Initial-is-final flags (0/1), comma-separated, or "sweep"
        #[arg(long, default_value = "sweep")]
        l: String,
        #[arg(long, value_enum, default_value = "json")]
        format: WitnessFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Sweep every witness configuration and report the worst case
    Sc {
        /// Operation in s-expression form, e.g. "(star (in 0))"
        ast: String,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Worker threads (0 = one per core)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Exhaustive maximum over an explicit input class
    Oracle {
        ast: String,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Input alphabet size in all-dfas mode
        #[arg(long, default_value_t = 2)]
        sigma: usize,
        #[arg(long, value_enum, default_value = "all-dfas")]
        mode: Mode,
        /// Maximum number of enumerated cases
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Randomized search for a violation of commutation with inverse letter maps
    Uniformity {
        ast: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_states: usize,
        #[arg(long, default_value_t = 3)]
        max_alphabet: usize,
    },
    /// Compare sweeps against known closed forms
    Verify {
        /// reversal, star, boolean or nonuniform
        suite: String,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Convert a JSON DFA to JSON or Graphviz
    Export {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct WitnessOut {
    config: WitnessConfig,
    dfas: Vec<Dfa>,
}

enum Failure {
    Usage(String),
    Budget(String),
    Mismatch(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget { .. } | Error::LetterLimit { .. } | Error::SubsetLimit { .. } => {
                Failure::Budget(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn emit(out: &Option<PathBuf>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses "sweep" or a comma-separated list of `m` values.
fn parse_vector(text: &str, m: usize, what: &str) -> std::result::Result<Option<Vec<usize>>, Failure> {
    if text == "sweep" {
        return Ok(None);
    }
    let v = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Failure::Usage(format!("--{what}: expected \"sweep\" or comma-separated integers")))?;
    if v.len() != m {
        return Err(Failure::Usage(format!("--{what}: expected {m} values, got {}", v.len())));
    }
    Ok(Some(v))
}

fn cmd_witness(
    sizes: Vec<usize>,
    k: &str,
    l: &str,
    format: WitnessFormat,
    out: &Option<PathBuf>,
    caps: &Caps,
) -> CmdResult {
    let m = sizes.len();
    let ks = parse_vector(k, m, "k")?;
    let ls = parse_vector(l, m, "l")?;
    if let Some(ls) = &ls {
        if ls.iter().any(|&x| x > 1) {
            return Err(Failure::Usage("--l values must be 0 or 1".into()));
        }
    }
    let configs: Vec<WitnessConfig> = match (&ks, &ls) {
        (Some(k), Some(l)) => vec![WitnessConfig::new(sizes.clone(), k.clone(), l.iter().map(|&x| x == 1).collect())?],
        _ => enumerate_configs(&sizes)
            .into_iter()
            .filter(|c| ks.as_ref().is_none_or(|k| &c.finals == k))
            .filter(|c| ls.as_ref().is_none_or(|l| c.l_vector().iter().zip(l).all(|(&a, &b)| a as usize == b)))
            .collect(),
    };
    if configs.is_empty() {
        return Err(Failure::Usage("no configuration matches the given --k/--l".into()));
    }
    let factory = WitnessFactory::new(&sizes, &caps.limits())?;
    let names = letter_names(&sizes);
    let mut text = String::new();
    let mut items = Vec::new();
    for (ci, config) in configs.iter().enumerate() {
        let dfas = factory
            .build(config)?
            .dfas
            .into_iter()
            .map(|d| d.with_letter_names(names.clone()))
            .collect::<olpa::Result<Vec<Dfa>>>()?;
        match format {
            WitnessFormat::Json => items.push(WitnessOut { config: config.clone(), dfas }),
            WitnessFormat::Dot => {
                for (j, d) in dfas.iter().enumerate() {
                    text.push_str(&d.to_dot(&format!("witness_{ci}_{j}")));
                }
            }
        }
    }
    if let WitnessFormat::Json = format {
        text = serde_json::to_string_pretty(&items).expect("witnesses serialize");
        text.push('\n');
    }
    emit(out, &text)
}

fn warn_nonuniform(ast: &olpa::OpAst) {
    let bad = ast.nonuniform_primitives();
    if !bad.is_empty() {
        eprintln!(
            "warning: {} not uniform; witness values are not guaranteed worst cases",
            if bad.len() == 1 { format!("{} is", bad[0]) } else { format!("{} are", bad.join(", ")) }
        );
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Witness { n, sizes, k, l, format, out, caps } => {
            let sizes = match (n, sizes) {
                (Some(n), _) => vec![n],
                (None, Some(s)) => s,
                (None, None) => return Err(Failure::Usage("one of --n or --sizes is required".into())),
            };
            if sizes.is_empty() || sizes.contains(&0) {
                return Err(Failure::Usage("sizes must be positive".into()));
            }
            cmd_witness(sizes, &k, &l, format, &out, &caps)
        }
        Command::Sc { ast, sizes, jobs, format, out, caps } => {
            let ast = parse(&ast)?;
            warn_nonuniform(&ast);
            let report = worst_case(&ast, &sizes, &SweepOptions { limits: caps.limits(), jobs })?;
            eprintln!("elapsed: {:.3}s", report.elapsed.as_secs_f64());
            let mut text = match format {
                ReportFormat::Json => report.to_json() + "\n",
                ReportFormat::Table => report.to_table(),
            };
            if report.partial {
                text = format!("PARTIAL: some configurations hit the subset cap\n{text}");
            }
            emit(&out, &text)
        }
        Command::Oracle { ast, sizes, sigma, mode, budget, format, out, caps } => {
            let ast = parse(&ast)?;
            let mode = match mode {
                Mode::AllDfas => OracleMode::AllDfas,
                Mode::TransformationSubsets => OracleMode::TransformationSubsets,
            };
            let r = brute_force_max(&ast, &sizes, sigma, mode, budget, &caps.limits())?;
            let text = match format {
                ReportFormat::Json => r.to_json() + "\n",
                ReportFormat::Table => {
                    let mut t = format!(
                        "operation: {}\nsizes: {:?}\ncases: {}\nmax: {}\ndominance violations: {}\nachiever:\n",
                        r.operation, r.sizes, r.cases, r.max_value, r.dominance_violations
                    );
                    for d in &r.achievers {
                        t.push_str(&d.to_json());
                        t.push('\n');
                    }
                    t
                }
            };
            emit(&out, &text)
        }
        Command::Uniformity { ast, trials, seed, max_states, max_alphabet } => {
            let ast = parse(&ast)?;
            let bounds = ProbeBounds { max_states, max_letters: max_alphabet };
            let verdict = uniformity_probe(&ast, ast.arity(), trials, bounds, seed, &Limits::from_env())?;
            match &verdict {
                Verdict::NoCounterexample { trials } => println!("no-counterexample after {trials} trials"),
                Verdict::Counterexample { trial, .. } => {
                    println!("counterexample at trial {trial}");
                    println!("{}", serde_json::to_string_pretty(&verdict).expect("verdict serializes"));
                }
            }
            Ok(())
        }
        Command::Verify { suite, jobs } => {
            let report = run_suite(&suite, &SweepOptions { limits: Limits::from_env(), jobs })?;
            print!("{}", report.to_table());
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Mismatch(format!("suite {suite} has mismatches")))
            }
        }
        Command::Export { input, format, out } => {
            let text = fs::read_to_string(&input)?;
            let dfa = Dfa::from_json(&text)?;
            let rendered = match format {
                ExportFormat::Json => dfa.to_json() + "\n",
                ExportFormat::Dot => {
                    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("dfa");
                    let name: String =
                        stem.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
                    dfa.to_dot(&name)
                }
            };
            emit(&out, &rendered)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (2, m),
                Failure::Budget(m) => (3, m),
                Failure::Mismatch(m) => (4, m),
                Failure::Io(m) => (1, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
