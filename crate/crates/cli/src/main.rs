use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctscheme::ctdef::catalog_source;
use ctscheme::evaluator::{cfinite_eval, eval_crt, CFiniteSpec, EvalError};
use ctscheme::expr::{default_vars, format_int, parse_vars};
use ctscheme::scheme_file::{load_scheme, save_scheme, Scheme, SchemeFile, Source};
use ctscheme::{bin_to_ct, generate_auto, generate_linear, BigIndex, BinomialSumSpec, CtPair, GenerateError, Modulus};

#[derive(Parser)]
#[command(name = "ctscheme", version, about = "Congruence schemes for constant-term sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a scheme modulo p^a
    Gen(GenArgs),
    /// Evaluate a scheme at one index
    Eval {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        n: String,
    },
    /// Print the first terms of a scheme's sequence
    Seq {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        count: usize,
    },
    /// Combine schemes for coprime prime powers
    Crt {
        #[arg(long, value_delimiter = ',', required = true)]
        schemes: Vec<PathBuf>,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: String,
    },
    /// Convert a binomial sum to a constant-term pair
    Bin2ct {
        #[arg(long)]
        binsum: String,
    },
    /// Evaluate a linear recurrence with constant coefficients
    Cfinite {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        rec: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        init: Vec<i64>,
        /// Index of the first initial value
        #[arg(long, default_value_t = 0)]
        offset: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Auto,
    Linear,
}

#[derive(Args)]
struct GenArgs {
    /// Builtin sequence: catalan, motzkin, delannoy, apery
    #[arg(long, conflicts_with_all = ["p_expr", "binsum"])]
    seq: Option<String>,
    #[arg(long = "P", id = "p_expr", requires = "q_expr", conflicts_with = "binsum")]
    p_expr: Option<String>,
    #[arg(long = "Q", id = "q_expr", requires = "p_expr")]
    q_expr: Option<String>,
    #[arg(long, requires = "p_expr")]
    vars: Option<String>,
    /// Binomial sum "g; a,b,c,d,e,f; ..."
    #[arg(long)]
    binsum: Option<String>,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    a: u32,
    #[arg(long, value_enum, default_value_t = Kind::Linear)]
    kind: Kind,
    #[arg(long, default_value_t = 10_000)]
    cap: usize,
    /// Output file; the scheme is written to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    msg: String,
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure { code: 1, msg: e.to_string() }
}

fn precondition(e: impl std::fmt::Display) -> Failure {
    Failure { code: 3, msg: e.to_string() }
}

fn parse_index(s: &str) -> Result<BigIndex, Failure> {
    s.parse().map_err(usage)
}

fn load(path: &Path) -> Result<Scheme, Failure> {
    Ok(load_scheme(path).map_err(usage)?.scheme)
}

fn eval_failure(e: EvalError) -> Failure {
    match e {
        EvalError::NotCoprime(..) | EvalError::NotDivisor { .. } | EvalError::IndexBeforeStart { .. } => {
            precondition(e)
        }
        _ => usage(e),
    }
}

fn definition(args: &GenArgs) -> Result<(CtPair, Source), Failure> {
    if let Some(name) = &args.seq {
        let (p, q, vars) = catalog_source(name).map_err(usage)?;
        let pair = CtPair::parse(p, q, &vars).map_err(usage)?;
        let source = Source { p: p.into(), q: q.into(), vars, name: Some(name.to_ascii_lowercase()) };
        return Ok((pair, source));
    }
    if let Some(p) = &args.p_expr {
        let q = args.q_expr.as_deref().unwrap_or("1");
        let vars = match &args.vars {
            Some(list) => parse_vars(list).map_err(usage)?,
            None => default_vars(1),
        };
        let pair = CtPair::parse(p, q, &vars).map_err(usage)?;
        return Ok((pair, Source { p: p.clone(), q: q.into(), vars, name: None }));
    }
    if let Some(spec) = &args.binsum {
        let spec: BinomialSumSpec = spec.parse().map_err(usage)?;
        let pair = bin_to_ct(&spec).map_err(usage)?;
        let vars = default_vars(pair.arity());
        let source = Source {
            p: format_int(pair.p(), &vars),
            q: format_int(pair.q(), &vars),
            vars,
            name: Some(format!("binsum {spec}")),
        };
        return Ok((pair, source));
    }
    Err(usage("one of --seq, --P/--Q or --binsum is required"))
}

fn generate(args: &GenArgs) -> Result<String, Failure> {
    let (pair, source) = definition(args)?;
    let modulus = Modulus::new(args.p, args.a).map_err(usage)?;
    let cap_failure = |e: GenerateError| match e {
        GenerateError::CapExceeded { .. } => Failure { code: 2, msg: format!("FAIL: {e}") },
        GenerateError::ZeroCap => usage(e),
    };
    let scheme = match args.kind {
        Kind::Auto => Scheme::Auto(generate_auto(&pair, modulus, args.cap).map_err(cap_failure)?),
        Kind::Linear => Scheme::Linear(generate_linear(&pair, modulus, args.cap).map_err(cap_failure)?),
    };
    let r = scheme.state_count();
    let summary = format!("{r} {}", if r == 1 { "state" } else { "states" });
    let file = SchemeFile::new(scheme, Some(source));
    match &args.out {
        Some(path) => {
            save_scheme(&file, path).map_err(usage)?;
            Ok(summary)
        }
        None => {
            eprintln!("{summary}");
            Ok(file.to_json().trim_end().to_string())
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Gen(args) => generate(&args),
        Command::Eval { scheme, n } => {
            let n = parse_index(&n)?;
            Ok(load(&scheme)?.eval(&n).to_string())
        }
        Command::Seq { scheme, count } => {
            if count == 0 {
                return Err(usage("--count must be at least 1"));
            }
            let values = load(&scheme)?.seq(count);
            Ok(values.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
        }
        Command::Crt { schemes, m, n } => {
            let n = parse_index(&n)?;
            let schemes = schemes.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
            eval_crt(&schemes, m, &n).map(|v| v.to_string()).map_err(eval_failure)
        }
        Command::Bin2ct { binsum } => {
            let spec: BinomialSumSpec = binsum.parse().map_err(usage)?;
            let pair = bin_to_ct(&spec).map_err(usage)?;
            let vars = default_vars(pair.arity());
            Ok(format!("P = {}\nQ = {}", format_int(pair.p(), &vars), format_int(pair.q(), &vars)))
        }
        Command::Cfinite { rec, init, offset, m, n } => {
            let n = parse_index(&n)?;
            let spec = CFiniteSpec::with_offset(rec, init, offset).map_err(usage)?;
            cfinite_eval(&spec, m, &n).map(|v| v.to_string()).map_err(eval_failure)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
