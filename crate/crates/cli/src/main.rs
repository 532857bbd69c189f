//! Command-line front end: evaluate queries, list matches, test
//! isomorphism, and cross-check the two calculi against the direct
//! definition.
//!
//! Exit codes: 0 success; 1 usage or parse error; 2 semantic error
//! (e.g. unbound template variables); 3 difference found (`diff`
//! disagreement or `iso` mismatch). Results go to standard output,
//! diagnostics to standard error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use poim_core::fixed::FixedSet;
use poim_core::fresh::FreshSupply;
use poim_core::graph::Graph;
use poim_core::iso::find_isomorphism;
use poim_core::matcher::enumerate_matches;
use poim_core::oracle::{direct_construct, sparql_select_answer};
use poim_core::poim::{construct_eval, Calculus, ConstructRule, UnboundPolicy};
use poim_core::select::select_eval;
use poim_core::syntax::{parse_data, parse_query, serialize_graph, ParsedQuery};
use poim_core::term::Term;

#[derive(Parser)]
#[command(name = "poim", version, about = "Query engine for triple graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CalculusArg {
    High,
    Low,
}

impl From<CalculusArg> for Calculus {
    fn from(c: CalculusArg) -> Calculus {
        match c {
            CalculusArg::High => Calculus::High,
            CalculusArg::Low => Calculus::Low,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
#[allow(clippy::upper_case_acronyms)]
enum FixingArg {
    #[value(name = "I")]
    I,
    #[value(name = "IV")]
    IV,
    #[value(name = "IB")]
    IB,
    #[value(name = "IBV")]
    IBV,
}

impl From<FixingArg> for FixedSet {
    fn from(f: FixingArg) -> FixedSet {
        match f {
            FixingArg::I => FixedSet::I,
            FixingArg::IV => FixedSet::Iv,
            FixingArg::IB => FixedSet::Ib,
            FixingArg::IBV => FixedSet::Ibv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a query file against a data file
    Query {
        data: PathBuf,
        query: PathBuf,
        /// Evaluation strategy: one global rewrite step, or one per match
        #[arg(long, value_enum, default_value = "low")]
        calculus: CalculusArg,
        /// Drop template triples with unbound variables instead of failing
        #[arg(long)]
        compat_drop_unbound: bool,
        /// Restrict CONSTRUCT output to well-formed RDF triples
        #[arg(long)]
        rdf_strict: bool,
        /// Offset for generated blank labels
        #[arg(long, default_value = "0")]
        seed: u64,
        /// Output format for SELECT results
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// List the matches of a query pattern in a data file
    Match { data: PathBuf, query: PathBuf },
    /// Decide whether two data files are isomorphic
    Iso {
        first: PathBuf,
        second: PathBuf,
        /// Attributes treated as fixed (identity) by the comparison
        #[arg(long, value_enum, ignore_case = true, default_value = "I")]
        fixing: FixingArg,
    },
    /// Cross-check both calculi against the direct definition
    Diff {
        data: PathBuf,
        query: PathBuf,
        #[arg(long)]
        compat_drop_unbound: bool,
        #[arg(long, default_value = "0")]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }

    fn semantic(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }

    fn difference(message: impl Into<String>) -> Failure {
        Failure { code: 3, message: message.into() }
    }
}

fn read_data(path: &PathBuf) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_data(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_query(path: &PathBuf) -> Result<ParsedQuery, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_query(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn policy(compat: bool) -> UnboundPolicy {
    if compat { UnboundPolicy::DropTriples } else { UnboundPolicy::Strict }
}

fn cmd_query(
    data: &PathBuf,
    query: &PathBuf,
    calculus: Calculus,
    compat: bool,
    rdf_strict: bool,
    seed: u64,
    format: FormatArg,
) -> Result<(), Failure> {
    let g = read_data(data)?;
    let mut supply = FreshSupply::with_offset(seed);
    match read_query(query)? {
        ParsedQuery::Construct { pattern, template } => {
            let rule = ConstructRule::with_policy(pattern, template, policy(compat), &mut supply)
                .map_err(|e| Failure::semantic(e.to_string()))?;
            let h = construct_eval(&rule, &g, &mut supply, calculus)
                .map_err(|e| Failure::semantic(e.to_string()))?;
            let h = if rdf_strict { h.rdf_triples() } else { h };
            let text = serialize_graph(&h, true);
            if !text.is_empty() {
                println!("{text}");
            }
        }
        ParsedQuery::Select(q) => {
            let table = select_eval(&q, &g, &mut supply, calculus)
                .map_err(|e| Failure::semantic(e.to_string()))?;
            match format {
                FormatArg::Csv => print!("{}", table.to_csv()),
                FormatArg::Text => print!("{}", table.to_text()),
            }
        }
    }
    Ok(())
}

fn cmd_match(data: &PathBuf, query: &PathBuf) -> Result<(), Failure> {
    let g = read_data(data)?;
    let pattern = match read_query(query)? {
        ParsedQuery::Construct { pattern, .. } => pattern,
        ParsedQuery::Select(q) => q.pattern().clone(),
    };
    let matches =
        enumerate_matches(&pattern, &g).map_err(|e| Failure::semantic(e.to_string()))?;
    let columns: Vec<Term> =
        pattern.attributes().into_iter().filter(|a| !a.is_resource()).collect();
    if !columns.is_empty() {
        let header: Vec<String> = columns.iter().map(|c| c.to_string()).collect();
        println!("{}", header.join(" "));
        for m in &matches {
            let row: Vec<String> = columns.iter().map(|c| m.apply(c).to_string()).collect();
            println!("{}", row.join(" "));
        }
    }
    println!("{} matches", matches.len());
    Ok(())
}

fn cmd_iso(first: &PathBuf, second: &PathBuf, fixing: FixedSet) -> Result<(), Failure> {
    let g1 = read_data(first)?;
    let g2 = read_data(second)?;
    match find_isomorphism(&g1, &g2, &fixing) {
        Some(iso) => {
            println!("isomorphic");
            for (from, to) in iso.map() {
                if from != to {
                    println!("{from} -> {to}");
                }
            }
            Ok(())
        }
        None => Err(Failure::difference("not isomorphic")),
    }
}

fn cmd_diff(data: &PathBuf, query: &PathBuf, compat: bool, seed: u64) -> Result<(), Failure> {
    let g = read_data(data)?;
    let mut supply = FreshSupply::with_offset(seed);
    match read_query(query)? {
        ParsedQuery::Construct { pattern, template } => {
            let rule = ConstructRule::with_policy(
                pattern.clone(),
                template.clone(),
                policy(compat),
                &mut supply,
            )
            .map_err(|e| Failure::semantic(e.to_string()))?;
            let high = construct_eval(&rule, &g, &mut supply, Calculus::High)
                .map_err(|e| Failure::semantic(e.to_string()))?;
            let low = construct_eval(&rule, &g, &mut supply, Calculus::Low)
                .map_err(|e| Failure::semantic(e.to_string()))?;
            // the oracle sees the effective template, after any drops
            let direct = direct_construct(rule.pattern(), rule.template(), &g)
                .map_err(|e| Failure::semantic(e.to_string()))?;
            let pairs =
                [("high", &high, "low", &low), ("high", &high, "direct", &direct)];
            for (n1, h1, n2, h2) in pairs {
                if find_isomorphism(h1, h2, &FixedSet::I).is_none() {
                    return Err(Failure::difference(format!(
                        "{n1} and {n2} disagree\n{n1}: {}\n{n2}: {}",
                        serialize_graph(h1, true),
                        serialize_graph(h2, true),
                    )));
                }
            }
            println!("agree: high, low, direct");
        }
        ParsedQuery::Select(q) => {
            for calculus in [Calculus::High, Calculus::Low] {
                let engine = select_eval(&q, &g, &mut supply, calculus)
                    .map_err(|e| Failure::semantic(e.to_string()))?;
                let oracle = sparql_select_answer(q.pattern(), q.projection(), &g)
                    .map_err(|e| Failure::semantic(e.to_string()))?;
                if engine != oracle {
                    return Err(Failure::difference(format!(
                        "engine and oracle tables disagree\nengine:\n{}oracle:\n{}",
                        engine.to_csv(),
                        oracle.to_csv(),
                    )));
                }
            }
            println!("agree: high, low, oracle");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Query { data, query, calculus, compat_drop_unbound, rdf_strict, seed, format } => {
            cmd_query(
                data,
                query,
                (*calculus).into(),
                *compat_drop_unbound,
                *rdf_strict,
                *seed,
                *format,
            )
        }
        Command::Match { data, query } => cmd_match(data, query),
        Command::Iso { first, second, fixing } => cmd_iso(first, second, (*fixing).into()),
        Command::Diff { data, query, compat_drop_unbound, seed } => {
            cmd_diff(data, query, *compat_drop_unbound, *seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not failures
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
