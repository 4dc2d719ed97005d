//! Acceptance run: one line per criterion, nonzero exit if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use krasner::classify;
use krasner::expansion::DELTA1;
use krasner::ideal;
use krasner::instance::{self, Instance};
use krasner::Expansion;
use serde_json::Value;

const FAST: Duration = Duration::from_secs(1);
const SWEEP: Duration = Duration::from_secs(60);
const SUITE: Duration = Duration::from_secs(300);

/// Theorems whose hypotheses must be met at least once.
const NON_VACUOUS: [&str; 5] =
    ["THM-RADICAL", "THM-QUOTIENT", "THM-HOM-PREIMAGE", "THM-PRODUCT-CART2", "THM-ZERO-PRODUCT"];

/// The ⊕ table of ℤ₁₂ modulo its units, transcribed by hand. Rows and
/// columns run over 0 1 2 3 4 6.
const OPLUS: [[&str; 6]; 6] = [
    ["0", "1", "2", "3", "4", "6"],
    ["1", "0 2 4 6", "1 3", "2 4", "1 3", "1"],
    ["2", "1 3", "0 4", "1", "2 6", "4"],
    ["3", "2 4", "1", "0 6", "1", "3"],
    ["4", "1 3", "2 6", "1", "0 4", "2"],
    ["6", "1", "4", "3", "2", "0"],
];
const CLASSES: [&str; 6] = ["0", "1", "2", "3", "4", "6"];
const UNITS: [usize; 4] = [1, 5, 7, 11];

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn fixture(name: &str) -> Instance {
    instance::load(&fixtures_dir().join(format!("{name}.json"))).expect("fixture loads")
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krasner")).args(args).output().expect("binary runs")
}

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, bound: Duration) -> Result<(), String> {
    ensure(elapsed < bound, format!("took {elapsed:.2?}, bound {bound:?}"))
}

/// Label of the class of an integer modulo 12 under multiplication by units.
fn class_of(x: usize) -> String {
    UNITS.iter().map(|u| x * u % 12).min().unwrap().to_string()
}

fn fixture_fidelity() -> Verdict {
    let start = Instant::now();
    let inst = fixture("z12modH");
    let r = &inst.ring;
    ensure(r.labels() == CLASSES, format!("carrier {:?}", r.labels()))?;
    let mut cells = 0;
    for (i, a) in CLASSES.iter().enumerate() {
        for (j, b) in CLASSES.iter().enumerate() {
            let (x, y) = (r.elem(a).unwrap(), r.elem(b).unwrap());
            let got = common::labels(r, &r.h(&[x, y]).to_vec()).join(" ");
            ensure(got == OPLUS[i][j], format!("{a}⊕{b} = {got}, expected {}", OPLUS[i][j]))?;
            let prod = class_of(a.parse::<usize>().unwrap() * b.parse::<usize>().unwrap());
            ensure(r.label(r.k(&[x, y])) == prod, format!("{a}⋆{b} = {}, expected {prod}", r.label(r.k(&[x, y]))))?;
            cells += 1;
        }
    }
    let o = cli(&["validate", fixtures_dir().join("z12modH.json").to_str().unwrap()]);
    ensure(o.status.code() == Some(0), "validate did not pass")?;
    within(start.elapsed(), FAST)?;
    Ok(format!("{cells} cells of ⊕ and ⋆ match, validate passes"))
}

fn worked_classification() -> Verdict {
    let start = Instant::now();
    let inst = fixture("z12modH");
    let r = &inst.ring;
    let q = inst.resolve_subset("0,2,4,6").map_err(|e| e.to_string())?;
    let d = Expansion::builtin(DELTA1, r).map_err(|e| e.to_string())?;
    let rep = classify::is_tn_absorbing_delta_semiprimary(r, &q, 2, &d).map_err(|e| e.to_string())?;
    ensure(rep.verdict, format!("verdict fail: {}", rep.render(r)))?;
    let qs = q.to_vec();
    let oracle = common::semiprimary(r, 2, &qs, &common::delta(r, "delta1", &qs), false);
    ensure(oracle, "brute-force oracle disagrees")?;
    within(start.elapsed(), FAST)?;
    Ok("Q={0,2,4,6} is (2,2)-absorbing delta1-semiprimary".into())
}

fn outcome<'a>(report: &'a Value, id: &str) -> &'a Value {
    report["theorems"].as_array().unwrap().iter().find(|t| t["id"] == id).unwrap_or_else(|| panic!("{id} missing"))
}

fn counts(report: &Value, id: &str) -> (u64, u64) {
    let o = outcome(report, id);
    (o["hypothesis_met"].as_u64().unwrap(), o["violations"].as_u64().unwrap())
}

fn elapsed(report: &Value) -> Duration {
    Duration::from_millis(report["elapsed_ms"].as_u64().unwrap())
}

fn implication_chain(report: &Value) -> Verdict {
    let rings = report["rings"].as_array().unwrap().len();
    ensure(rings >= 6, format!("only {rings} rings"))?;
    ensure(report["ts"] == serde_json::json!([1, 2, 3]), "t range")?;
    let (met, bad) = counts(report, "CHAIN-IMPLICATIONS");
    ensure(bad == 0, format!("{bad} violations"))?;
    ensure(met > 0, "vacuous")?;
    within(elapsed(report), SWEEP)?;
    Ok(format!("{met} configurations over {rings} rings, no violations"))
}

fn parse_set(inst: &Instance, shown: &str) -> Vec<usize> {
    let inner = shown.trim_start_matches('{').trim_end_matches('}');
    let mut v: Vec<usize> = inner.split(',').map(|l| inst.ring.elem(l).unwrap()).collect();
    v.sort_unstable();
    v
}

fn strictness(report: &Value) -> Verdict {
    let found = report["strictness"].as_array().unwrap();
    ensure(!found.is_empty(), "no witness")?;
    let mut rings = BTreeMap::new();
    for w in found {
        let name = w["ring"].as_str().unwrap();
        let inst = rings.entry(name.to_string()).or_insert_with(|| fixture(name));
        let r = &inst.ring;
        let q = parse_set(inst, w["ideal"].as_str().unwrap());
        let t = w["t"].as_u64().unwrap() as usize;
        let target = common::delta(r, w["delta"].as_str().unwrap(), &q);
        ensure(
            common::semiprimary(r, t, &q, &target, false) && !common::is_prime(r, &q),
            format!("oracle rejects {w}"),
        )?;
    }
    let first = &found[0];
    Ok(format!(
        "{} witnesses confirmed by brute force, e.g. {} {} t={} {}",
        found.len(),
        first["ring"].as_str().unwrap(),
        first["ideal"].as_str().unwrap(),
        first["t"],
        first["delta"].as_str().unwrap()
    ))
}

/// Brute-force sweep of every proper ideal, t and built-in expansion.
fn zero_product_oracle() -> Result<usize, String> {
    let mut hits = 0;
    for name in shipped() {
        let inst = fixture(&name);
        let r = &inst.ring;
        if r.one().is_none() {
            continue;
        }
        let zero = vec![r.zero()];
        let rad0 = common::radical(r, &zero);
        for q in common::ideals(r).into_iter().filter(|q| q.len() < r.size()) {
            for t in 1..=3 {
                let w = t * r.n() - t + 1;
                for d in ["delta0", "delta1", "deltaR"] {
                    let target = common::delta(r, d, &q);
                    if !common::semiprimary(r, t, &q, &target, true) || common::semiprimary(r, t, &q, &target, false) {
                        continue;
                    }
                    hits += 1;
                    let idx: Vec<Vec<usize>> = common::tuples(q.len(), w);
                    let killed = idx.iter().all(|p| {
                        let word: Vec<usize> = p.iter().map(|&i| q[i]).collect();
                        common::word(r, &word) == r.zero()
                    });
                    ensure(killed, format!("{name} Q={q:?} t={t} {d}: product not zero"))?;
                    ensure(q.iter().all(|x| rad0.contains(x)), format!("{name} Q={q:?}: not in rad(0)"))?;
                }
            }
        }
    }
    Ok(hits)
}

fn zero_product(report: &Value) -> Verdict {
    let start = Instant::now();
    let (met, bad) = counts(report, "THM-ZERO-PRODUCT");
    let (met_rad, bad_rad) = counts(report, "COR-RAD-ZERO");
    ensure(bad == 0 && bad_rad == 0, format!("{bad} product and {bad_rad} radical violations"))?;
    ensure(met > 0 && met_rad > 0, "vacuous")?;
    let hits = zero_product_oracle()?;
    ensure(hits > 0, "oracle found no weakly-only configuration")?;
    within(elapsed(report) + start.elapsed(), SWEEP)?;
    Ok(format!("{met} harness and {hits} oracle configurations, no violations"))
}

fn shipped() -> Vec<String> {
    let text = std::fs::read_to_string(fixtures_dir().join("manifest.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    v["fixtures"].as_array().unwrap().iter().map(|f| f.as_str().unwrap().trim_end_matches(".json").to_string()).collect()
}

fn radical_double_oracle() -> Verdict {
    let mut checked = 0;
    let mut refused = Vec::new();
    for name in shipped() {
        let inst = fixture(&name);
        let r = &inst.ring;
        // The power criterion needs an identity and refuses without one.
        if r.one().is_none() {
            let zero = r.zero_set();
            ensure(ideal::radical_by_powers(r, &zero).is_err(), format!("{name}: power route did not refuse"))?;
            refused.push(name);
            continue;
        }
        for i in ideal::lattice(r).map_err(|e| e.to_string())?.ideals() {
            let by_primes = ideal::radical(r, i).map_err(|e| e.to_string())?;
            let by_powers = ideal::radical_by_powers(r, i).map_err(|e| e.to_string())?;
            ensure(by_primes == by_powers, format!("{name} {}: {} vs {}", r.display_set(i), r.display_set(&by_primes), r.display_set(&by_powers)))?;
            ensure(by_powers.to_vec() == common::radical(r, &i.to_vec()), format!("{name} {}: oracle", r.display_set(i)))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} ideals, both routes equal; no identity, power route refused: {}", refused.join(",")))
}

fn theorem_suite(report: &Value, status: Option<i32>) -> Verdict {
    let mut problems = Vec::new();
    for t in report["theorems"].as_array().unwrap() {
        let v = t["violations"].as_u64().unwrap();
        if v > 0 {
            problems.push(format!("{} {v}", t["id"].as_str().unwrap()));
        }
    }
    for id in NON_VACUOUS {
        if counts(report, id).0 == 0 {
            problems.push(format!("{id} vacuous"));
        }
    }
    if status != Some(0) {
        problems.push(format!("exit status {status:?}"));
    }
    within(elapsed(report), SUITE)?;
    ensure(problems.is_empty(), format!("violations: {}", problems.join(", ")))?;
    Ok(format!("{} theorems, no violations", report["theorems"].as_array().unwrap().len()))
}

fn determinism() -> Verdict {
    let dir = fixtures_dir();
    let args = ["check-theorems", dir.to_str().unwrap(), "--seed", "2024", "--budget", "40", "--json"];
    let a = cli(&args);
    let b = cli(&args);
    ensure(!a.stdout.is_empty(), "empty report")?;
    ensure(a.stdout == b.stdout, "JSON reports differ")?;
    let text: Vec<&str> = args.iter().copied().filter(|&a| a != "--json").collect();
    ensure(cli(&text).stdout == cli(&text).stdout, "text reports differ")?;
    Ok(format!("{} identical bytes, seed 2024, budget 40", a.stdout.len()))
}

fn main() -> ExitCode {
    let dir = fixtures_dir();
    let suite = cli(&["check-theorems", dir.to_str().unwrap(), "--json", "--timings"]);
    let report: Value = serde_json::from_slice(&suite.stdout).expect("report parses");
    let results: [(&str, Verdict); 8] = [
        ("fixture fidelity", fixture_fidelity()),
        ("worked classification", worked_classification()),
        ("implication chain", implication_chain(&report)),
        ("strictness", strictness(&report)),
        ("zero-product theorem", zero_product(&report)),
        ("radical double oracle", radical_double_oracle()),
        ("theorem suite", theorem_suite(&report, suite.status.code())),
        ("determinism", determinism()),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(msg) => println!("criterion {} {name}: PASS ({msg})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({msg})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
