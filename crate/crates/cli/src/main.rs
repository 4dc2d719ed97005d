use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use krasner::classify::{self, ClassificationReport, STRONG_LATTICE_CAP};
use krasner::construct::{build_product, build_quotient};
use krasner::expansion::{DELTA0, DELTA1, DELTA_R};
use krasner::harness::{self, HarnessConfig, DEFAULT_TS};
use krasner::ideal;
use krasner::instance::{self, table_to_json, Instance};
use krasner::{Error, Expansion, HyperringTable};

/// Finite Krasner (m,n)-hyperrings: validation, hyperideals, absorbing
/// semiprimary classification and theorem checks.
#[derive(Parser)]
#[command(name = "krasner", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Krasner axioms of an instance file.
    Validate { path: PathBuf },
    /// List the hyperideals with prime and primary flags.
    Ideals { path: PathBuf },
    /// Classify a hyperideal given by name or as comma-separated labels.
    Classify(ClassifyArgs),
    /// Run the theorem suite over instance files, directories or manifests;
    /// the built-in corpus when no path is given.
    CheckTheorems(CheckArgs),
    /// Build a quotient or product and write it as an instance file.
    #[command(subcommand)]
    Construct(Construct),
}

#[derive(Args)]
struct ClassifyArgs {
    path: PathBuf,
    ideal: String,
    /// Values of t; all of 1, 2, 3 when omitted.
    #[arg(long = "t")]
    t: Vec<usize>,
    /// Expansions by name; every built-in and file-defined one when omitted.
    #[arg(long)]
    delta: Vec<String>,
    #[arg(long)]
    weakly: bool,
    /// Quantify over hyperideals instead of elements.
    #[arg(long)]
    strongly: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    paths: Vec<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random candidates for the counterexample search.
    #[arg(long, default_value_t = 0)]
    budget: usize,
    #[arg(long = "t")]
    t: Vec<usize>,
    /// Skip the product theorems.
    #[arg(long)]
    no_products: bool,
    #[arg(long)]
    json: bool,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Construct {
    /// G/P for a hyperideal P; cosets are labelled "rep+NAME".
    Quotient {
        path: PathBuf,
        ideal: String,
        #[arg(long, default_value = "P")]
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Product of two or more rings with labels "a|b".
    Product {
        #[arg(required = true, num_args = 2..)]
        paths: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Exit statuses: 0 pass, 1 predicate or theorem failure, 2 usage or input error.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn verdict(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn run(cmd: Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Validate { path } => validate(&path),
        Command::Ideals { path } => ideals(&path),
        Command::Classify(args) => classify_cmd(args),
        Command::CheckTheorems(args) => check(args),
        Command::Construct(c) => construct(c),
    }
}

fn validate(path: &Path) -> Result<Outcome, Error> {
    let file = instance::read_table(path)?;
    let report = file.table.validate();
    print!("{report}");
    if !report.passed() {
        return Ok(Outcome::Fail);
    }
    let inst = file.into_instance()?;
    println!("{}: {} elements, ({},{})-hyperring, valid", inst.ring.name, inst.ring.size(), inst.ring.m(), inst.ring.n());
    Ok(Outcome::Pass)
}

fn ideals(path: &Path) -> Result<Outcome, Error> {
    let inst = instance::load(path)?;
    let r = &inst.ring;
    let l = ideal::lattice(r)?;
    println!("{} has {} hyperideals", r.name, l.len());
    let has_one = r.one().is_some();
    for q in l.ideals() {
        let mut line = r.display_set(q);
        if q.is_full() {
            line.push_str("  whole ring");
        } else if has_one {
            let prime = ideal::is_prime(r, q)?.verdict;
            let primary = ideal::is_primary(r, q)?.verdict;
            line.push_str(&format!("  prime={}  primary={}", yes(prime), yes(primary)));
        }
        for (name, s) in &inst.ideals {
            if s == q {
                line.push_str(&format!("  [{name}]"));
            }
        }
        println!("{line}");
    }
    Ok(Outcome::Pass)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn expansions(inst: &Instance, names: &[String]) -> Result<Vec<Expansion>, Error> {
    if names.is_empty() {
        let mut all: Vec<Expansion> =
            [DELTA0, DELTA1, DELTA_R].iter().map(|d| Expansion::builtin(d, &inst.ring)).collect::<Result<_, _>>()?;
        all.extend(inst.expansions.iter().cloned());
        return Ok(all);
    }
    names.iter().map(|n| inst.expansion(n)).collect()
}

fn classify_cmd(args: ClassifyArgs) -> Result<Outcome, Error> {
    let inst = instance::load(&args.path)?;
    let q = inst.resolve_subset(&args.ideal)?;
    let deltas = expansions(&inst, &args.delta)?;
    let ts = if args.t.is_empty() { DEFAULT_TS.to_vec() } else { args.t.clone() };
    let mut reports: Vec<ClassificationReport> = Vec::new();
    for &t in &ts {
        for d in &deltas {
            let r = &inst.ring;
            reports.push(match (args.strongly, args.weakly) {
                (true, weakly) => classify::is_strongly_variant(r, &q, t, d, weakly, STRONG_LATTICE_CAP)?,
                (false, true) => classify::is_weakly_tn_absorbing_delta_semiprimary(r, &q, t, d)?,
                (false, false) => classify::is_tn_absorbing_delta_semiprimary(r, &q, t, d)?,
            });
        }
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
    } else {
        println!("{} Q={}", inst.ring.name, inst.ring.display_set(&q));
        for r in &reports {
            println!("{}", r.render(&inst.ring));
        }
    }
    Ok(verdict(reports.iter().all(|r| r.verdict)))
}

fn check(args: CheckArgs) -> Result<Outcome, Error> {
    let start = Instant::now();
    let corpus = if args.paths.is_empty() { harness::shipped_corpus()? } else { harness::load_corpus(&args.paths)? };
    let config = HarnessConfig {
        ts: if args.t.is_empty() { DEFAULT_TS.to_vec() } else { args.t },
        seed: args.seed,
        budget: args.budget,
        products: !args.no_products,
    };
    let mut report = harness::check_theorems(&corpus, &config);
    if args.timings {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    if args.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }
    Ok(verdict(report.total_violations() == 0))
}

fn write_table(out: &Path, table: &HyperringTable) -> Result<Outcome, Error> {
    fs::write(out, table_to_json(table))?;
    // Reload what was written so a bad file never passes silently.
    instance::load(out)?;
    println!("wrote {} ({} elements) to {}", table.name, table.size(), out.display());
    Ok(Outcome::Pass)
}

fn construct(c: Construct) -> Result<Outcome, Error> {
    match c {
        Construct::Quotient { path, ideal, name, out } => {
            let inst = instance::load(&path)?;
            let p = inst.resolve_subset(&ideal)?;
            let q = build_quotient(&inst.ring, &p, &name)?;
            write_table(&out, q.ring.table())
        }
        Construct::Product { paths, out } => {
            let rings = paths.iter().map(|p| instance::load(p)).collect::<Result<Vec<_>, _>>()?;
            let tables: Vec<&HyperringTable> = rings.iter().map(|i| i.ring.table()).collect();
            let p = build_product(&tables)?;
            write_table(&out, p.ring.table())
        }
    }
}
