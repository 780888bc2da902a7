//! Command-line front end: evaluate statistics on single elements, print
//! generating functions, run the identity registry, run the nonexistence
//! searches, and enumerate overpartitions.
//!
//! Exit codes: 0 on success, 1 when a verification finds an inequality,
//! 2 on usage errors (bad flags, unknown ids, unparseable elements,
//! exceeded rank ceilings).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use oddmaj::enumerate::{overpartition_poly, overpartitions, EnumError, Filter, GroupSpec};
use oddmaj::genfun::{twisted_genfun, Character};
use oddmaj::identities::{
    registry, search_descent_major_a, search_descent_neg_major_b, verify_all, verify_id,
    IdentityReport,
};
use oddmaj::perm::{descent_set_a, descent_set_b, descent_set_d, neg_set, IndexSet, Perm,
    SignedPerm};
use oddmaj::stats::{eval_stat, Element, Family, StatName};

#[derive(Parser)]
#[command(
    name = "oddmaj",
    version,
    about = "Exact enumeration of parity-refined descent statistics on plain, signed, and even-signed permutations, with a registry of verified identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every applicable statistic on one element.
    Stats(StatsArgs),
    /// Print a (possibly character-twisted) generating function.
    Genfun(GenfunArgs),
    /// Verify one registered identity (or all of them with --all).
    Verify(VerifyArgs),
    /// Verify every registered identity over its full rank domain.
    VerifyAll(SuiteArgs),
    /// Exhaustive searches for additive descent-weight statistics.
    Search(SearchArgs),
    /// Enumerate overpartitions, or print a weight polynomial.
    Overpartitions(OverpartitionsArgs),
    /// List the identity registry: id, rank domain, statement.
    List,
}

#[derive(Args)]
struct StatsArgs {
    /// Element literal: a bracketed window like "[-2,5,3,1,-4]" or a
    /// digit string like "81725634".
    #[arg(allow_hyphen_values = true)]
    element: String,
    /// Group family; defaults to B when the literal has signs, else A.
    #[arg(long)]
    family: Option<Family>,
}

#[derive(Args)]
struct GenfunArgs {
    /// Group family.
    #[arg(long, default_value = "A")]
    family: Family,
    /// Rank.
    #[arg(long)]
    n: usize,
    /// Comma-separated stat:variable bindings, e.g. "omaj:q1,emaj:q2".
    #[arg(long)]
    stats: String,
    /// One-dimensional character twist: trivial, sign, sign-neg, or
    /// sign-length-neg.
    #[arg(long = "char", default_value = "trivial")]
    character: Character,
    /// Parabolic quotient: comma-separated descent positions to exclude
    /// (family A only), e.g. "1,3".
    #[arg(long)]
    quotient: Option<String>,
    /// Restrict the sweep: "domino", "neg-set=1,3", "neg-parity=0",
    /// "sign-at=2:-", or "abs-at=3:5" (repeatable).
    #[arg(long)]
    filter: Vec<String>,
    /// Override the per-family rank ceiling.
    #[arg(long)]
    force: bool,
    /// Number of parallel enumeration chunks (default: logical cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Print the polynomial as JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity id (see `list`).
    id: Option<String>,
    /// Verify the whole registry instead of a single id.
    #[arg(long, conflicts_with = "id")]
    all: bool,
    #[command(flatten)]
    suite: SuiteArgs,
}

#[derive(Args)]
struct SuiteArgs {
    /// Skip ranks above this bound.
    #[arg(long)]
    n_max: Option<usize>,
    /// Number of parallel enumeration chunks (default: logical cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Also write the reports as a JSON array to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// Which search to run.
    kind: SearchKind,
    /// Rank of the group swept.
    #[arg(long)]
    n: usize,
    /// Target statistic token; "oddlen" selects the family's odd length.
    #[arg(long)]
    target: String,
}

#[derive(Copy, Clone, ValueEnum)]
enum SearchKind {
    /// Weights on the descent positions of S_n, compared against the
    /// target statistic's distribution.
    DescentMajor,
    /// Pointwise weights on descent and negative positions over B_n.
    DescentNegMajor,
}

#[derive(Args)]
struct OverpartitionsArgs {
    /// Largest allowed part.
    #[arg(long)]
    max_part: u32,
    /// List every overpartition of exactly this weight, one per line.
    #[arg(long, conflicts_with = "parts")]
    weight: Option<u32>,
    /// Print the weight polynomial of overpartitions with exactly this
    /// many parts instead.
    #[arg(long)]
    parts: Option<usize>,
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (e.g. `oddmaj list | head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Stats(args) => cmd_stats(args),
        Command::Genfun(args) => cmd_genfun(args),
        Command::Verify(args) => cmd_verify(args),
        Command::VerifyAll(suite) => cmd_verify_suite(None, suite),
        Command::Search(args) => cmd_search(args),
        Command::Overpartitions(args) => cmd_overpartitions(args),
        Command::List => cmd_list(),
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
}

// ---------------------------------------------------------------------------
// stats

fn cmd_stats(args: StatsArgs) -> Result<ExitCode, String> {
    let family = match args.family {
        Some(f) => f,
        None if args.element.contains('-') => Family::B,
        None => Family::A,
    };
    let element = match family {
        Family::A => Element::A(Perm::parse(&args.element).map_err(|e| e.to_string())?),
        Family::B | Family::D => {
            let s = SignedPerm::parse(&args.element).map_err(|e| e.to_string())?;
            if family == Family::D && !s.is_even_neg() {
                return Err(format!(
                    "{s} has an odd number of negative entries, so it is not an even-signed permutation"
                ));
            }
            Element::B(s)
        }
    };
    println!("window:       {}", fmt_window(element.window()));
    println!("family:       {family}");
    println!("rank:         {}", element.rank());
    match (&element, family) {
        (Element::A(p), _) => {
            println!("descent set:  {}", descent_set_a(p.window()));
        }
        (Element::B(s), Family::B) => {
            println!("descent set:  {}", descent_set_b(s));
            println!("negative set: {}", neg_set(s));
        }
        (Element::B(s), Family::D) => {
            let d = descent_set_d(s).map_err(|e| e.to_string())?;
            println!("descent set:  {d}");
            println!("negative set: {}", neg_set(s));
        }
        _ => unreachable!(),
    }
    for &stat in StatName::ALL {
        if !stat.legal_for(family) {
            continue;
        }
        let value = eval_stat(stat, &element).map_err(|e| e.to_string())?;
        println!("{} = {}", stat.token(), value);
    }
    Ok(ExitCode::SUCCESS)
}

fn fmt_window(window: &[i32]) -> String {
    let strs: Vec<String> = window.iter().map(|v| v.to_string()).collect();
    format!("[{}]", strs.join(","))
}

// ---------------------------------------------------------------------------
// genfun

fn parse_positions(src: &str, what: &str) -> Result<IndexSet, String> {
    let mut set = IndexSet::EMPTY;
    for piece in src.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let v: u32 = piece
            .parse()
            .map_err(|_| format!("invalid {what} position `{piece}`"))?;
        if v == 0 || v > 12 {
            return Err(format!("{what} position {v} outside 1..=12"));
        }
        set.insert(v);
    }
    Ok(set)
}

fn parse_filter(src: &str) -> Result<Filter, String> {
    if src == "domino" {
        return Ok(Filter::Domino);
    }
    let (key, value) = src
        .split_once('=')
        .ok_or_else(|| format!("unknown filter `{src}`"))?;
    match key {
        "neg-set" => Ok(Filter::NegSet(parse_positions(value, "negative-set")?)),
        "neg-parity" => match value {
            "0" => Ok(Filter::NegParity(0)),
            "1" => Ok(Filter::NegParity(1)),
            other => Err(format!("neg-parity must be 0 or 1, got `{other}`")),
        },
        "sign-at" | "abs-at" => {
            let (pos, rest) = value
                .split_once(':')
                .ok_or_else(|| format!("filter `{src}` needs the form {key}=POS:VALUE"))?;
            let pos: usize = pos
                .parse()
                .map_err(|_| format!("invalid position `{pos}`"))?;
            if key == "sign-at" {
                match rest {
                    "+" => Ok(Filter::SignAt {
                        pos,
                        negative: false,
                    }),
                    "-" => Ok(Filter::SignAt {
                        pos,
                        negative: true,
                    }),
                    other => Err(format!("sign must be + or -, got `{other}`")),
                }
            } else {
                let value: u32 = rest
                    .parse()
                    .map_err(|_| format!("invalid absolute value `{rest}`"))?;
                Ok(Filter::AbsAt { pos, value })
            }
        }
        other => Err(format!("unknown filter kind `{other}`")),
    }
}

fn parse_bindings(src: &str) -> Result<Vec<(StatName, String)>, String> {
    let mut out = Vec::new();
    for piece in src.split(',') {
        let piece = piece.trim();
        let (stat, var) = piece
            .split_once(':')
            .ok_or_else(|| format!("binding `{piece}` is not of the form stat:variable"))?;
        let stat: StatName = stat.trim().parse().map_err(|e| format!("{e}"))?;
        let var = var.trim();
        let valid = !var.is_empty()
            && var.chars().next().unwrap().is_ascii_alphabetic()
            && var.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(format!("invalid variable name `{var}`"));
        }
        if out.iter().any(|(_, v)| v == var) {
            return Err(format!("variable `{var}` bound twice"));
        }
        out.push((stat, var.to_string()));
    }
    Ok(out)
}

fn cmd_genfun(args: GenfunArgs) -> Result<ExitCode, String> {
    let bindings = parse_bindings(&args.stats)?;
    let mut spec = GroupSpec::new(args.family, args.n);
    if let Some(q) = &args.quotient {
        spec = spec.with_quotient(parse_positions(q, "quotient")?);
    }
    for f in &args.filter {
        spec = spec.with_filter(parse_filter(f)?);
    }
    if args.force {
        spec = spec.with_force();
    }
    if let Err(e) = spec.validate() {
        if matches!(e, EnumError::CeilingExceeded { .. }) {
            return Err(format!(
                "{e}; the sweep would visit {} elements (use --force)",
                spec.estimated_count()
            ));
        }
        return Err(e.to_string());
    }
    let refs: Vec<(StatName, &str)> = bindings.iter().map(|(s, v)| (*s, v.as_str())).collect();
    let jobs = args.jobs.unwrap_or_else(default_jobs);
    let poly = twisted_genfun(&spec, args.character, &refs, jobs).map_err(|e| e.to_string())?;
    if args.json {
        println!("{}", poly.to_json());
    } else {
        println!("{poly}");
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// verify

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    match (args.id, args.all) {
        (Some(id), false) => cmd_verify_suite(Some(id), args.suite),
        (None, true) => cmd_verify_suite(None, args.suite),
        (None, false) => Err("pass an identity id or --all".to_string()),
        (Some(_), true) => unreachable!("clap rejects id together with --all"),
    }
}

fn cmd_verify_suite(id: Option<String>, suite: SuiteArgs) -> Result<ExitCode, String> {
    let jobs = suite.jobs.unwrap_or_else(default_jobs);
    let reports = match &id {
        Some(id) => verify_id(id, suite.n_max, jobs).map_err(|e| e.to_string())?,
        None => verify_all(suite.n_max, jobs).map_err(|e| e.to_string())?,
    };
    if let Some(path) = &suite.json {
        let array: Vec<serde_json::Value> = reports.iter().map(IdentityReport::to_json).collect();
        let text = serde_json::to_string_pretty(&serde_json::Value::Array(array))
            .map_err(|e| e.to_string())?;
        fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    let mut failures = 0usize;
    for r in &reports {
        if r.equal {
            println!("PASS {} n={} (count={}, {} ms)", r.id, r.rank, r.count, r.ms);
        } else {
            failures += 1;
            println!("FAIL {} n={}", r.id, r.rank);
            println!("  params: {}", r.params);
            println!("  lhs:    {}", r.lhs);
            println!("  rhs:    {}", r.rhs);
        }
    }
    if failures > 0 {
        println!("{failures} of {} checks failed", reports.len());
        Ok(ExitCode::from(1))
    } else {
        println!("all {} checks passed", reports.len());
        Ok(ExitCode::SUCCESS)
    }
}

// ---------------------------------------------------------------------------
// search

fn parse_target(token: &str, fallback: StatName) -> Result<StatName, String> {
    if token == "oddlen" {
        return Ok(fallback);
    }
    token.parse().map_err(|e| format!("{e}"))
}

fn cmd_search(args: SearchArgs) -> Result<ExitCode, String> {
    match args.kind {
        SearchKind::DescentMajor => {
            let stat = parse_target(&args.target, StatName::OddlenA)?;
            if !stat.legal_for(Family::A) {
                return Err(format!("`{stat}` is not defined on plain permutations"));
            }
            let target = twisted_genfun(
                &GroupSpec::new(Family::A, args.n),
                Character::Trivial,
                &[(stat, "q")],
                1,
            )
            .map_err(|e| e.to_string())?;
            match search_descent_major_a(args.n, &target).map_err(|e| e.to_string())? {
                Some(weights) => println!("FOUND j = {weights:?}"),
                None => println!("NONE"),
            }
        }
        SearchKind::DescentNegMajor => {
            let stat = parse_target(&args.target, StatName::OddlenB)?;
            match search_descent_neg_major_b(args.n, stat).map_err(|e| e.to_string())? {
                Some((j, k)) => println!("FOUND j = {j:?}, k = {k:?}"),
                None => println!("NONE"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// overpartitions & list

fn cmd_overpartitions(args: OverpartitionsArgs) -> Result<ExitCode, String> {
    match (args.weight, args.parts) {
        (Some(w), None) => {
            for op in overpartitions(args.max_part, w as usize, w) {
                if op.weight() == w {
                    println!("{op}");
                }
            }
        }
        (None, Some(m)) => {
            let poly = overpartition_poly(args.max_part, m, "q").map_err(|e| e.to_string())?;
            println!("{poly}");
        }
        _ => return Err("pass exactly one of --weight or --parts".to_string()),
    }
    Ok(ExitCode::SUCCESS)
}

fn fmt_ranks(ranks: &[usize]) -> String {
    let contiguous = ranks.windows(2).all(|w| w[1] == w[0] + 1);
    if contiguous && ranks.len() > 2 {
        format!("{}..{}", ranks[0], ranks[ranks.len() - 1])
    } else {
        ranks
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn cmd_list() -> Result<ExitCode, String> {
    for ident in registry() {
        println!(
            "{:<26} n in {:<8} \"{}\"",
            ident.id,
            fmt_ranks(ident.ranks),
            ident.statement
        );
    }
    Ok(ExitCode::SUCCESS)
}
