use std::fmt::Write as _;
use std::io::{ErrorKind, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::{json, Value};

use powsum::arith::{add_mod, parse_natural, pow_mod, Modulus, Natural, PrimePower};
use powsum::powersum::{
    eval, eval_explained, naive_sum_bounded, period, prime_power_congruence, valuation_lower_bound,
    DEFAULT_ORACLE_LIMIT,
};
use powsum::verify::{emit_report, run_suite, Format, Suite, SuiteConfig, DEFAULT_BUDGET};

/// Power sums 1^n + 2^n + ... + m^n modulo k, for arbitrarily large n and m.
#[derive(Debug, Parser)]
#[command(name = "powsum", version)]
struct Cli {
    /// Output format: text, json or csv.
    #[arg(long, global = true, default_value = "text")]
    format: String,

    /// Largest m summed term by term (direct-summation checks, table cells).
    #[arg(long, global = true)]
    oracle_limit: Option<String>,

    /// Largest row period handled by brute-force period searches.
    #[arg(long, global = true, env = "POWSUM_BUDGET")]
    budget: Option<String>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate S_n(m) mod k.
    Eval {
        #[arg(short = 'n')]
        n: String,
        #[arg(short = 'm')]
        m: String,
        #[arg(short = 'k')]
        k: String,
        /// Also print the per-prime-power reduction.
        #[arg(long)]
        explain: bool,
        /// Cross-check against direct summation (m must be within the oracle limit).
        #[arg(long)]
        check: bool,
    },
    /// Exact period of m -> S_n(m) mod k.
    Period {
        #[arg(short = 'n')]
        n: String,
        #[arg(short = 'k')]
        k: String,
    },
    /// Closed form of S_n(q^a) mod q^a.
    Congruence {
        #[arg(short = 'n')]
        n: String,
        #[arg(short = 'q')]
        q: String,
        #[arg(short = 'a')]
        a: String,
    },
    /// Grid of S_n(m) mod k, one row per n.
    Table {
        /// Inclusive range of n, e.g. 1..5.
        #[arg(short = 'n')]
        n: String,
        /// Inclusive range of m, e.g. 1..30.
        #[arg(short = 'm')]
        m: String,
        #[arg(short = 'k')]
        k: String,
        /// Draw a rule after every full period.
        #[arg(long)]
        mark_period: bool,
    },
    /// Run certification sweeps against brute force.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// all, congruence, lemma, power, generator, periods or row-period.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long)]
    k_max: Option<String>,
    #[arg(long)]
    n_max: Option<String>,
    /// Restrict the per-prime suites to this odd prime.
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    prime_power_max: Option<String>,
    #[arg(long)]
    i_max: Option<String>,
    #[arg(long)]
    j_max: Option<String>,
    #[arg(long)]
    t_max: Option<String>,
}

/// Usage error: bad arguments or inputs outside a routine's domain.
struct Failure(String);

impl From<powsum::Error> for Failure {
    fn from(e: powsum::Error) -> Self {
        Failure(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

struct Output {
    text: String,
    /// Set when the command ran but its check did not pass.
    failed: Option<String>,
}

fn natural(name: &str, s: &str) -> CliResult<Natural> {
    parse_natural(s).map_err(|_| Failure(format!("{name}: expected a decimal natural, got {s:?}")))
}

fn small(name: &str, s: &str) -> CliResult<u64> {
    s.parse::<u64>()
        .map_err(|_| Failure(format!("{name}: expected an integer below 2^64, got {s:?}")))
}

fn modulus(s: &str) -> CliResult<Modulus> {
    Ok(Modulus::from_natural(&natural("k", s)?)?)
}

fn range(name: &str, s: &str) -> CliResult<(u64, u64)> {
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (s, s),
    };
    let (lo, hi) = (small(name, lo)?, small(name, hi)?);
    if lo > hi {
        return Err(Failure(format!("{name}: empty range {s:?}")));
    }
    Ok((lo, hi))
}

fn format_of(cli: &Cli) -> CliResult<Format> {
    Ok(cli.format.parse::<Format>()?)
}

fn to_json(v: &Value) -> String {
    let mut s = v.to_string();
    s.push('\n');
    s
}

fn run(cli: &Cli) -> CliResult<Output> {
    let format = format_of(cli)?;
    let oracle_limit = match &cli.oracle_limit {
        Some(s) => small("--oracle-limit", s)?,
        None => DEFAULT_ORACLE_LIMIT,
    };
    let budget = match &cli.budget {
        Some(s) => small("--budget", s)?,
        None => DEFAULT_BUDGET,
    };
    match &cli.command {
        Command::Eval {
            n,
            m,
            k,
            explain,
            check,
        } => cmd_eval(format, n, m, k, *explain, check.then_some(oracle_limit)),
        Command::Period { n, k } => cmd_period(format, n, k),
        Command::Congruence { n, q, a } => cmd_congruence(format, n, q, a),
        Command::Table {
            n,
            m,
            k,
            mark_period,
        } => cmd_table(format, n, m, k, *mark_period, oracle_limit),
        Command::Verify(args) => cmd_verify(format, args, budget),
    }
}

fn cmd_eval(
    format: Format,
    n: &str,
    m: &str,
    k: &str,
    explain: bool,
    check_limit: Option<u64>,
) -> CliResult<Output> {
    let (n, m, k) = (natural("n", n)?, natural("m", m)?, modulus(k)?);
    let e = eval_explained(&n, &m, k)?;
    let mut failed = None;
    if let Some(limit) = check_limit {
        let oracle = naive_sum_bounded(&n, &m, k, limit)?;
        if oracle != e.value {
            failed = Some(format!("direct summation gives {oracle}, fast path gives {}", e.value));
        }
    }
    let text = match format {
        Format::Text => {
            let mut s = format!("{}\n", e.value);
            if explain {
                for c in &e.components {
                    let _ = writeln!(
                        s,
                        "  mod {:<12} period {}  m mod period = {}  partial {}",
                        c.prime_power.to_string(),
                        c.period,
                        c.offset,
                        c.residue
                    );
                }
            }
            s
        }
        Format::Json => {
            let mut v = json!({
                "n": n.to_string(),
                "m": m.to_string(),
                "k": k.to_string(),
                "value": e.value.to_string(),
            });
            if explain {
                v["components"] = e
                    .components
                    .iter()
                    .map(|c| {
                        json!({
                            "q": c.prime_power.prime().to_string(),
                            "a": c.prime_power.exponent().to_string(),
                            "period": c.period.to_string(),
                            "offset": c.offset.to_string(),
                            "residue": c.residue.to_string(),
                        })
                    })
                    .collect();
            }
            to_json(&v)
        }
        Format::Csv => format!("n,m,k,value\n{n},{m},{k},{}\n", e.value),
    };
    Ok(Output { text, failed })
}

fn cmd_period(format: Format, n: &str, k: &str) -> CliResult<Output> {
    let (n, k) = (natural("n", n)?, modulus(k)?);
    let b = period(&n, k)?;
    let text = match format {
        Format::Text => {
            let mut s = format!("{}\n", b.combined);
            for c in &b.per_prime {
                let _ = writeln!(
                    s,
                    "  {:<12} period {:<10} ({})",
                    c.prime_power.to_string(),
                    c.period.to_string(),
                    c.branch
                );
            }
            s
        }
        Format::Json => to_json(&json!({
            "n": n.to_string(),
            "k": k.to_string(),
            "combined": b.combined.to_string(),
            "per_prime": b.per_prime.iter().map(|c| json!({
                "q": c.prime_power.prime().to_string(),
                "a": c.prime_power.exponent().to_string(),
                "period": c.period.to_string(),
                "branch": c.branch.to_string(),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("q,a,period,branch\n");
            for c in &b.per_prime {
                let _ = writeln!(
                    s,
                    "{},{},{},\"{}\"",
                    c.prime_power.prime(),
                    c.prime_power.exponent(),
                    c.period,
                    c.branch
                );
            }
            let _ = writeln!(s, ",,{},combined", b.combined);
            s
        }
    };
    Ok(Output { text, failed: None })
}

fn cmd_congruence(format: Format, n: &str, q: &str, a: &str) -> CliResult<Output> {
    let n = natural("n", n)?;
    let q = small("q", q)?;
    let a = u32::try_from(small("a", a)?).map_err(|_| Failure("a: too large".into()))?;
    let p = PrimePower::new(q, a)?;
    let case = prime_power_congruence(&n, p)?;
    let bound = valuation_lower_bound(&n, q, a as u64)?;
    let text = match format {
        Format::Text => format!("{case}\nvaluation bound: {q}^{bound} | S_{n}({p})\n"),
        Format::Json => to_json(&json!({
            "n": n.to_string(),
            "q": q.to_string(),
            "a": a.to_string(),
            "case": case.kind.to_string(),
            "value": case.value.to_string(),
            "valuation_lower_bound": bound.to_string(),
        })),
        Format::Csv => format!(
            "n,q,a,case,value,valuation_lower_bound\n{n},{q},{a},{},{},{bound}\n",
            case.kind, case.value
        ),
    };
    Ok(Output { text, failed: None })
}

fn cmd_table(
    format: Format,
    n: &str,
    m: &str,
    k: &str,
    mark_period: bool,
    oracle_limit: u64,
) -> CliResult<Output> {
    let (n_lo, n_hi) = range("n", n)?;
    let (m_lo, m_hi) = range("m", m)?;
    let k = modulus(k)?;
    if n_lo == 0 {
        return Err(Failure("n must be at least 1".into()));
    }
    let cells = (n_hi - n_lo + 1).saturating_mul(m_hi - m_lo + 1);
    if cells > oracle_limit {
        return Err(Failure(format!(
            "table has {cells} cells, above the oracle limit {oracle_limit}"
        )));
    }
    let km = k.get();
    let width = (km - 1).to_string().len();

    let mut rows = Vec::new();
    for n in n_lo..=n_hi {
        let n_nat = BigUint::from(n);
        let mut acc = eval(&n_nat, &BigUint::from(m_lo), k)?.value();
        let mut values = vec![acc];
        for mm in m_lo + 1..=m_hi {
            acc = add_mod(acc, pow_mod(mm, n as u128, km), km);
            values.push(acc);
        }
        let l = period(&n_nat, k)?.combined;
        rows.push((n, l, values));
    }

    let text = match format {
        Format::Text => {
            let mut s = String::new();
            for (_, l, values) in &rows {
                let l = u64::try_from(l).ok();
                let mut tokens = Vec::new();
                for (idx, v) in values.iter().enumerate() {
                    tokens.push(format!("{v:>width$}"));
                    let mm = m_lo + idx as u64;
                    if mark_period && mm > 0 && l.is_some_and(|l| mm % l == 0) {
                        tokens.push("|".into());
                    }
                }
                let _ = writeln!(s, "{}", tokens.join(" "));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("n");
            for mm in m_lo..=m_hi {
                let _ = write!(s, ",{mm}");
            }
            s.push('\n');
            for (n, _, values) in &rows {
                let _ = write!(s, "{n}");
                for v in values {
                    let _ = write!(s, ",{v}");
                }
                s.push('\n');
            }
            s
        }
        Format::Json => to_json(&json!({
            "k": k.to_string(),
            "m_start": m_lo.to_string(),
            "rows": rows.iter().map(|(n, l, values)| json!({
                "n": n.to_string(),
                "period": l.to_string(),
                "values": values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Output { text, failed: None })
}

fn cmd_verify(format: Format, args: &VerifyArgs, budget: u64) -> CliResult<Output> {
    let suite: Suite = args.suite.parse()?;
    let mut cfg = SuiteConfig {
        budget,
        ..SuiteConfig::default()
    };
    if let Some(k) = &args.k_max {
        cfg = cfg.with_k_max(small("--k-max", k)?);
    }
    if let Some(n) = &args.n_max {
        cfg = cfg.with_n_max(small("--n-max", n)?);
    }
    if let Some(q) = &args.q {
        cfg = cfg.with_prime(small("--q", q)?);
    }
    if let Some(p) = &args.prime_power_max {
        let p = small("--prime-power-max", p)?;
        cfg.prime_power_max = p;
        cfg.vanishing_max = p;
    }
    if let Some(i) = &args.i_max {
        let i = small("--i-max", i)?;
        cfg.lemma_i_max = i;
        cfg.power_i_max = i;
    }
    if let Some(j) = &args.j_max {
        let j = small("--j-max", j)?;
        cfg.lemma_j_max = j;
        cfg.power_j_max = j;
        cfg.block_j_max = j;
    }
    if let Some(t) = &args.t_max {
        cfg.power_t_max = small("--t-max", t)?;
    }

    let report = run_suite(suite, &cfg)?;
    let bytes = emit_report(&report, format)?;
    let mut text = String::from_utf8(bytes).expect("reports are UTF-8");
    if format == Format::Json {
        text.push('\n');
    }
    let failed = (!report.all_passed())
        .then(|| format!("{} failing records", report.failure_count()));
    Ok(Output { text, failed })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => match std::io::stdout().lock().write_all(out.text.as_bytes()) {
                    Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(format!("stdout: {e}")),
                    _ => Ok(()),
                },
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            match out.failed {
                None => ExitCode::SUCCESS,
                Some(msg) => {
                    eprintln!("verification failed: {msg}");
                    ExitCode::from(1)
                }
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
