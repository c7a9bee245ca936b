//! `loopforge` command-line interface.
//!
//! Exit codes: 0 when the checked claim holds or the task completed, 1 when
//! a checked property fails (a witness is printed), 2 on usage or input
//! errors.

mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use loopforge::cayley::LoopTable;
use loopforge::identity::{holds, resolve, Law};
use loopforge::search::{self, Filter, FilterMode, SearchQuery};
use loopforge::InverseConvention;
use serde_json::json;

const AFTER_HELP: &str = "\
Inverse convention: `^l` in identities denotes x^λ. With `right` (the default)
x^λ is the u with x*u = e; with `left` it is the u with u*x = e. `^r` is always
the other inverse.

Polynomials print with terms in descending total degree; ties are broken by
comparing exponents variable by variable in name order (i < k < m < ...), the
earliest variable being most significant. Example: -10i^3-12i^2-2i+2k+m.

Exit codes: 0 = holds / done, 1 = property fails, 2 = usage or input error.";

#[derive(Parser, Debug)]
#[command(name = "loopforge", version, about = "Loop-theory workbench: Osborn loops, isotopes and the Huthnance loop", after_help = AFTER_HELP)]
struct Cli {
    /// Worker threads [default: number of CPUs]
    #[arg(long, global = true, env = "LOOPFORGE_JOBS", value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Re-derive the Huthnance counterexample: universality probe and Osborn audit
    VerifyPaper(VerifyArgs),
    /// Check an identity on a Cayley table (or on all its principal isotopes)
    Check(CheckArgs),
    /// Write the principal isotope x∘y = (x/b)(a\y) of a table
    Isotope(IsotopeArgs),
    /// List the nucleus of a table
    Nucleus(NucleusArgs),
    /// Enumerate loops of a small order and filter them
    Search(SearchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Right,
    Left,
    Both,
}

impl ConventionArg {
    fn conventions(self) -> Vec<InverseConvention> {
        match self {
            ConventionArg::Right => vec![InverseConvention::Right],
            ConventionArg::Left => vec![InverseConvention::Left],
            ConventionArg::Both => InverseConvention::ALL.to_vec(),
        }
    }

    fn single(self) -> Result<InverseConvention> {
        match self {
            ConventionArg::Right => Ok(InverseConvention::Right),
            ConventionArg::Left => Ok(InverseConvention::Left),
            ConventionArg::Both => bail!("--convention both is only supported by verify-paper and check"),
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "right")]
    convention: ConventionArg,
    /// Emit JSON audit reports
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Cayley table file
    table: PathBuf,
    /// Builtin name (osborn, lemma312, associative, commutative, moufang, lip, rip, wip) or a law such as "x*y=y*x"
    #[arg(long)]
    identity: String,
    /// Require the identity on every principal isotope
    #[arg(long)]
    all_isotopes: bool,
    #[arg(long, value_enum, default_value = "right")]
    convention: ConventionArg,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct IsotopeArgs {
    table: PathBuf,
    #[arg(short)]
    a: usize,
    #[arg(short)]
    b: usize,
    /// Output file [default: stdout]
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NucleusArgs {
    table: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Order of the loops (1..=7; 7 requires --count-only)
    #[arg(short = 'n', long = "order")]
    order: usize,
    /// Identity that must hold (repeatable)
    #[arg(long)]
    identity: Vec<String>,
    /// Identity that must fail (repeatable)
    #[arg(long)]
    fails: Vec<String>,
    /// Require the --identity laws on every principal isotope instead
    #[arg(long)]
    universal: bool,
    /// Keep only loops whose nucleus is {e}
    #[arg(long)]
    trivial_nucleus: bool,
    #[arg(long)]
    count_only: bool,
    /// Directory for matching tables (loop_n{N}_{index}.txt)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "right")]
    convention: ConventionArg,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        pool = pool.num_threads(jobs as usize);
    }
    let pool = match pool.build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::VerifyPaper(args) => verify::run(&args.convention.conventions(), args.json),
        Command::Check(args) => check(args),
        Command::Isotope(args) => isotope(args),
        Command::Nucleus(args) => nucleus(args),
        Command::Search(args) => search_cmd(args),
    }
}

fn load_table(path: &Path) -> Result<LoopTable> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    LoopTable::from_text(&text).with_context(|| format!("invalid table {}", path.display()))
}

fn load_law(spec: &str) -> Result<Law> {
    resolve(spec).with_context(|| format!("invalid identity `{spec}`"))
}

fn code(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn check(args: CheckArgs) -> Result<ExitCode> {
    let table = load_table(&args.table)?;
    let law = load_law(&args.identity)?;
    let mut all_ok = true;
    let mut results = Vec::new();
    for conv in args.convention.conventions() {
        if args.all_isotopes {
            let witness = table.is_universal(&law, conv);
            all_ok &= witness.is_none();
            if args.json {
                results.push(json!({
                    "convention": conv,
                    "mode": "universal",
                    "holds": witness.is_none(),
                    "witness": witness.as_ref().map(|w| json!({
                        "a": w.a,
                        "b": w.b,
                        "assignment": w.counterexample.assignment.iter().map(|(v, x)| (v.to_string(), *x)).collect::<Vec<_>>(),
                        "lhs": w.counterexample.lhs,
                        "rhs": w.counterexample.rhs,
                    })),
                }));
            } else {
                match witness {
                    None => {
                        println!("{law} holds on all {} principal isotopes (convention {conv})", table.order().pow(2))
                    }
                    Some(w) => println!(
                        "{law} FAILS on principal isotope (a, b) = ({}, {}) (convention {conv}): {}",
                        w.a, w.b, w.counterexample
                    ),
                }
            }
        } else {
            let cex = holds(&table, &law, conv);
            all_ok &= cex.is_none();
            if args.json {
                results.push(json!({
                    "convention": conv,
                    "mode": "holds",
                    "holds": cex.is_none(),
                    "witness": cex.as_ref().map(|c| json!({
                        "assignment": c.assignment.iter().map(|(v, x)| (v.to_string(), *x)).collect::<Vec<_>>(),
                        "lhs": c.lhs,
                        "rhs": c.rhs,
                    })),
                }));
            } else {
                match cex {
                    None => println!("{law} holds (convention {conv})"),
                    Some(c) => println!("{law} FAILS (convention {conv}): {c}"),
                }
            }
        }
    }
    if args.json {
        let out = json!({ "identity": law.to_string(), "order": table.order(), "results": results });
        println!("{}", serde_json::to_string_pretty(&out)?);
    }
    Ok(code(all_ok))
}

fn isotope(args: IsotopeArgs) -> Result<ExitCode> {
    let table = load_table(&args.table)?;
    let n = table.order();
    if args.a >= n || args.b >= n {
        bail!("isotope parameters must be below the order {n}");
    }
    let iso = table.principal_isotope(args.a, args.b);
    let text = format!(
        "# principal isotope a={} b={}, identity {}\n{}",
        args.a,
        args.b,
        iso.identity_element(),
        iso.to_text()
    );
    match args.out {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn nucleus(args: NucleusArgs) -> Result<ExitCode> {
    let table = load_table(&args.table)?;
    let nuc = table.nucleus();
    let trivial = nuc == [table.identity_element()];
    if args.json {
        let out =
            json!({ "order": table.order(), "identity": table.identity_element(), "nucleus": nuc, "trivial": trivial });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        let list: Vec<String> = nuc.iter().map(usize::to_string).collect();
        println!("nucleus: {{{}}}", list.join(", "));
        println!("trivial: {}", if trivial { "yes" } else { "no" });
    }
    Ok(ExitCode::SUCCESS)
}

fn search_cmd(args: SearchArgs) -> Result<ExitCode> {
    let conv = args.convention.single()?;
    if args.universal && args.identity.is_empty() {
        bail!("--universal needs at least one --identity");
    }
    let mut query = SearchQuery::new(args.order).count_only(args.count_only);
    query.convention = conv;
    let mode = if args.universal { FilterMode::Universal } else { FilterMode::Holds };
    for spec in &args.identity {
        query = query.filter(Filter::law(spec.trim(), load_law(spec)?, mode));
    }
    for spec in &args.fails {
        query = query.filter(Filter::law(spec.trim(), load_law(spec)?, FilterMode::Fails));
    }
    if args.trivial_nucleus {
        query = query.filter(Filter::TrivialNucleus);
    }
    let report = search::run(&query)?;
    if let Some(dir) = &args.out {
        let written = report.write_tables(dir)?;
        eprintln!("wrote {} tables to {}", written.len(), dir.display());
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("order {}", report.order);
        println!("total {}", report.total_enumerated);
        for fc in &report.filter_counts {
            println!("filter {}: {}", fc.filter, fc.passed);
        }
        println!("matched {}", report.matched);
        if !args.count_only && args.out.is_none() {
            for (idx, table) in report.tables().iter().enumerate() {
                print!("# match {idx}\n{}", table.to_text());
            }
        }
    }
    eprintln!("elapsed {:.3}s", report.elapsed.as_secs_f64());
    Ok(ExitCode::SUCCESS)
}
