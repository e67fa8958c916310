use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::json;

use weil_lab::admissibility::{find_admissible_filtrations, Prime};
use weil_lab::analyzer::{self, AnalyzerOptions, BatchInput, WeilPolynomial};
use weil_lab::classify::{self, Aliases, Filters, Options, Preset};
use weil_lab::config::{parse_prime_list, Config};
use weil_lab::group::PermGroup;
use weil_lab::honda_tate::{honda_tate_dimension, ideal_exponents};
use weil_lab::label::IsogenyLabel;
use weil_lab::wpr::{NewtonPolygon, WeightFunction, WeightedPermRep};
use weil_lab::{Error, Result};

#[derive(Parser)]
#[command(
    name = "weil-lab",
    version,
    about = "Weighted permutation representations of abelian varieties over finite fields"
)]
struct Cli {
    /// Machine-readable output; errors go to stderr as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// `key = value` configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TableArgs {
    #[arg(long)]
    g: usize,
    #[arg(long, default_value = "appendix")]
    preset: Preset,
    /// Primes for the admissibility sweep, e.g. `2,3,5,7,generic`.
    #[arg(long, value_name = "LIST")]
    p_sweep: Option<String>,
    /// Alias file mapping canonical labels to external names.
    #[arg(long, value_name = "FILE")]
    aliases: Option<PathBuf>,
    /// Permit g = 6 (slow).
    #[arg(long)]
    allow_g6: bool,
    /// Markdown output (the default unless --json).
    #[arg(long, conflicts_with = "json")]
    markdown: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the WPRs for one Newton polygon.
    Classify {
        #[command(flatten)]
        table: TableArgs,
        /// Slopes, comma separated, e.g. `0,0,1/2,1/2,1,1`.
        #[arg(long)]
        newton: String,
    },
    /// Classify every Newton polygon of dimension g.
    Sweep {
        #[command(flatten)]
        table: TableArgs,
        /// JSON-lines checkpoint; finished polygons are reused on rerun.
        #[arg(long, value_name = "FILE")]
        checkpoint: Option<PathBuf>,
    },
    /// Angle rank and exceptional relations of a Frobenius polynomial.
    #[command(group(ArgGroup::new("input").required(true).args(["label", "coeffs", "batch"])))]
    Analyze {
        #[arg(long)]
        label: Option<String>,
        /// `a_1,…,a_g` or the full list `1,a_1,…,a_2g`.
        #[arg(long, allow_hyphen_values = true, requires = "q")]
        coeffs: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        /// JSON-lines file (`-` for stdin) of `{label}` or `{coefficients, p, q}`.
        #[arg(long, value_name = "FILE")]
        batch: Option<PathBuf>,
        #[arg(long, value_name = "BITS")]
        precision: Option<usize>,
        #[arg(long, value_name = "N")]
        max_unity_order: Option<u64>,
    },
    /// Search for admissible filtrations of a WPR at a prime.
    Admissible {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        newton: String,
        /// Generators of G (ι is adjoined), comma separated cycle notation.
        #[arg(long)]
        group: String,
        /// A prime or `generic`.
        #[arg(long)]
        p: String,
        #[arg(long)]
        strong: bool,
    },
    /// Ideal exponents and Honda–Tate dimension for a decomposition group.
    Dimension {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        newton: String,
        #[arg(long)]
        group: String,
        /// Generators of D (empty string for the trivial group).
        #[arg(long, allow_hyphen_values = true)]
        decomp: String,
        #[arg(long, value_parser = ["+", "-"], allow_hyphen_values = true)]
        trailing_sign: String,
    },
    /// Decode an LMFDB isogeny-class label.
    DecodeLabel { label: String },
    /// Write markdown tables for dimension g.
    EmitTables {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if json {
                let v = json!({ "schema": classify::SCHEMA, "error": e.kind(), "message": e.to_string() });
                eprintln!("{v}");
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn newton_for(g: usize, slopes: &str) -> Result<NewtonPolygon> {
    let np = NewtonPolygon::parse(slopes)?;
    if np.g() != g {
        return Err(Error::SizeMismatch { expected: g, found: np.g() });
    }
    Ok(np)
}

fn table_setup(t: &TableArgs, cfg: &Config) -> Result<(Filters, Options)> {
    let mut filters = Filters::preset(t.preset);
    if let Some(list) = &t.p_sweep {
        filters.primes = parse_prime_list(list)?;
    } else if let Some(p) = cfg.primes()? {
        filters.primes = p;
    }
    let mut opts = Options::default();
    if let Some(m) = cfg.max_g {
        opts.max_g = m;
    }
    opts.allow_g6 = t.allow_g6 || cfg.allow_g6.unwrap_or(false);
    opts.aliases = match t.aliases.as_ref().or(cfg.aliases.as_ref()) {
        Some(path) => Some(Aliases::load(path)?),
        None => Some(Aliases::builtin()),
    };
    Ok((filters, opts))
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(n) = cli.jobs.or(cfg.jobs) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::Input(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Classify { table, newton } => {
            let np = newton_for(table.g, &newton)?;
            let (filters, opts) = table_setup(&table, &cfg)?;
            let t = classify::classify_newton(&np, &filters, &opts)?;
            if cli.json {
                print_json(&t)
            } else {
                print!("{}", classify::to_markdown(&t));
                Ok(())
            }
        }
        Command::Sweep { table, checkpoint } => {
            let (filters, opts) = table_setup(&table, &cfg)?;
            let r = classify::sweep_dimension(table.g, &filters, &opts, checkpoint.as_deref())?;
            if cli.json {
                print_json(&r)
            } else {
                for t in &r.tables {
                    print!("{}", classify::to_markdown(t));
                }
                Ok(())
            }
        }
        Command::Analyze { label, coeffs, p, q, batch, precision, max_unity_order } => {
            let opts = AnalyzerOptions {
                precision_bits: precision.or(cfg.precision).unwrap_or(analyzer::DEFAULT_PRECISION),
                max_unity_order: max_unity_order.or(cfg.max_unity_order),
            };
            if let Some(path) = batch {
                return analyze_batch(&path, &opts);
            }
            let report = if let Some(l) = label {
                analyzer::analyze_label(&l, &opts)?
            } else {
                let c = coeffs.expect("clap group");
                let coefficients = c
                    .split(',')
                    .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad coefficient {t:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                BatchInput { label: None, coefficients: Some(coefficients), p, q }.run(&opts)?
            };
            print_json(&report)
        }
        Command::Admissible { g, newton, group, p, strong } => {
            let np = newton_for(g, &newton)?;
            let rho =
                WeightedPermRep::new(WeightFunction::from_newton(&np), PermGroup::parse_with_conjugation(g, &group)?)?;
            let report = find_admissible_filtrations(&rho, Prime::parse(&p)?, strong)?;
            print_json(&report.to_json(&rho))
        }
        Command::Dimension { g, newton, group, decomp, trailing_sign } => {
            let np = newton_for(g, &newton)?;
            let rho =
                WeightedPermRep::new(WeightFunction::from_newton(&np), PermGroup::parse_with_conjugation(g, &group)?)?;
            let d = PermGroup::parse(g, &decomp)?;
            let sign = if trailing_sign == "-" { -1 } else { 1 };
            let exps = ideal_exponents(&rho, &d)?;
            let dim = honda_tate_dimension(&rho, &d, sign)?;
            print_json(&json!({
                "schema": classify::SCHEMA,
                "exponents": exps.to_json(),
                "epsilon": dim.epsilon,
                "k": dim.k,
                "dimension": dim.dimension,
                "strongly_admissible": dim.strongly_admissible,
            }))
        }
        Command::DecodeLabel { label } => {
            let l: IsogenyLabel = label.parse()?;
            let wp = WeilPolynomial::from_label(&l)?;
            let show = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
            print_json(&json!({
                "schema": classify::SCHEMA,
                "label": l.to_string(),
                "g": l.g,
                "q": l.q,
                "p": wp.p(),
                "a": show(&l.coefficients),
                "coefficients": show(wp.coefficients()),
            }))
        }
        Command::EmitTables { table, out } => {
            let (filters, opts) = table_setup(&table, &cfg)?;
            let path = classify::emit_tables(table.g, &out, &filters, &opts)?;
            if cli.json {
                print_json(&json!({ "schema": classify::SCHEMA, "written": path.display().to_string() }))
            } else {
                println!("{}", path.display());
                Ok(())
            }
        }
    }
}

fn analyze_batch(path: &PathBuf, opts: &AnalyzerOptions) -> Result<()> {
    let lines: Vec<String> = if path.as_os_str() == "-" {
        io::stdin().lock().lines().collect::<io::Result<_>>()?
    } else {
        std::fs::read_to_string(path)?.lines().map(String::from).collect()
    };
    let results: Vec<String> = lines
        .par_iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let r = serde_json::from_str::<BatchInput>(l).map_err(Error::from).and_then(|b| b.run(opts));
            match r {
                Ok(rep) => serde_json::to_string(&rep).expect("serializable"),
                Err(e) => {
                    json!({ "schema": classify::SCHEMA, "error": e.kind(), "message": e.to_string(), "input": l })
                        .to_string()
                }
            }
        })
        .collect();
    let mut out = io::stdout().lock();
    for r in results {
        writeln!(out, "{r}")?;
    }
    Ok(())
}
