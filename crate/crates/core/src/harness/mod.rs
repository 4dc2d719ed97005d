//! Exhaustive theorem checks over a corpus of finite hyperrings, and a seeded
//! search for counterexamples among small random instances.
//!
//! Every theorem is checked in the "hypothesis implies conclusion" form over
//! all admissible configurations of every corpus ring. A theorem whose
//! hypothesis never holds is reported as vacuous through its
//! `hypothesis_met` count.

mod context;
mod families;
pub mod search;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{Expansion, DELTA0, DELTA1, DELTA_R};
use crate::fixtures;
use crate::instance;
use crate::ring::Hyperring;

use context::{Ctx, Tallies};
pub use search::SearchSummary;

/// Carriers above this size are sampled instead of enumerated in the
/// element-quantified structure theorems.
pub const EXHAUSTIVE_LIMIT: usize = 12;
/// Element tuples drawn per configuration when sampling.
pub const SAMPLE_SIZE: usize = 2000;
/// Violations kept per theorem in a report.
pub const WITNESS_LIMIT: usize = 10;
pub const DEFAULT_TS: [usize; 3] = [1, 2, 3];

pub const THM_RADICAL: &str = "THM-RADICAL";
pub const THM_RADICAL_DELTA1: &str = "THM-RADICAL-DELTA1";
pub const THM_PRINCIPAL: &str = "THM-PRINCIPAL";
pub const THM_INTERSECTION: &str = "THM-INTERSECTION";
pub const THM_T_MONOTONE: &str = "THM-T-MONOTONE";
pub const THM_DELTA_ABSORBING: &str = "THM-DELTA-ABSORBING";
pub const THM_IDEMPOTENT: &str = "THM-IDEMPOTENT-BICONDITIONAL";
pub const THM_DESCENT: &str = "THM-DESCENT";
pub const THM_STR: &str = "THM-STR";
pub const THM_STR2: &str = "THM-STR2";
pub const THM_STR3: &str = "THM-STR3";
pub const THM_STR4: &str = "THM-STR4";
pub const THM_AZAD: &str = "THM-AZAD";
pub const THM_ZERO_ANNIHILATION_22: &str = "THM-ZERO-ANNIHILATION-22";
pub const THM_ZERO_ANNIHILATION: &str = "THM-ZERO-ANNIHILATION";
pub const THM_ZERO_PRODUCT_22: &str = "THM-ZERO-PRODUCT-22";
pub const THM_ZERO_PRODUCT: &str = "THM-ZERO-PRODUCT";
pub const COR_RAD_ZERO: &str = "COR-RAD-ZERO";
pub const COR_REDUCED: &str = "COR-REDUCED";
pub const THM_ZERO_TRIPLE: &str = "THM-ZERO-TRIPLE";
pub const THM_HOM_PREIMAGE: &str = "THM-HOM-PREIMAGE";
pub const THM_HOM_PREIMAGE_WEAK: &str = "THM-HOM-PREIMAGE-WEAK";
pub const THM_HOM_IMAGE: &str = "THM-HOM-IMAGE";
pub const THM_QUOTIENT: &str = "THM-QUOTIENT";
pub const THM_SUBHYPERRING: &str = "THM-SUBHYPERRING";
pub const THM_PRODUCT_CART: &str = "THM-PRODUCT-CART";
pub const THM_PRODUCT_CART3: &str = "THM-PRODUCT-CART3";
pub const THM_PRODUCT_CART2: &str = "THM-PRODUCT-CART2";
pub const THM_PRODUCT_FULL_FACTOR: &str = "THM-PRODUCT-FULL-FACTOR";
pub const THM_PRODUCT_WEAKLY: &str = "THM-PRODUCT-WEAKLY";
pub const CHAIN_IMPLICATIONS: &str = "CHAIN-IMPLICATIONS";
pub const DEF_DELTA_ZERO: &str = "DEF-DELTA-ZERO";

/// Identifier and statement of every checked result, in report order.
/// "S" abbreviates "(t,n)-absorbing δ-semiprimary" and "W" its weakly form.
pub const THEOREMS: &[(&str, &str)] = &[
    (THM_RADICAL, "If Q is S and rad(δ(Q)) ⊆ δ(rad(Q)), then rad(Q) is S."),
    (THM_RADICAL_DELTA1, "If Q is (t,n)-absorbing δ1-semiprimary, then rad(Q) is (t,n)-absorbing."),
    (THM_PRINCIPAL, "Every proper hyperideal is S if and only if every proper principal hyperideal is S."),
    (
        THM_INTERSECTION,
        "For an intersection preserving δ, if Q_1..Q_s are S with δ(Q_i) = P, then their intersection Q is S with δ(Q) = P.",
    ),
    (THM_T_MONOTONE, "A (weakly) (t,n)-absorbing δ-semiprimary hyperideal is (weakly) (t+1,n)-absorbing δ-semiprimary."),
    (THM_DELTA_ABSORBING, "If δ(Q) is (weakly) (t,n)-absorbing, then Q is (weakly) (t,n)-absorbing δ-semiprimary."),
    (
        THM_IDEMPOTENT,
        "If δ(δ(Q)) = δ(Q), then δ(Q) is (weakly) (t,n)-absorbing if and only if δ(Q) is (weakly) (t,n)-absorbing δ-semiprimary.",
    ),
    (
        THM_DESCENT,
        "If Q is (weakly) (t,n)-absorbing δ-semiprimary and P ⊆ Q is a proper hyperideal with δ(P) = δ(Q), then P is (weakly) (t,n)-absorbing δ-semiprimary.",
    ),
    (
        THM_STR,
        "In an (m,2)-hyperring, let Q be weakly (2,2)-absorbing δ-semiprimary. If k(Q_1,x,y) ⊆ Q, no (q,x,y) with q ∈ Q_1 is a δ-(2,2)-zero of Q and k(x,y) ∉ δ(Q), then k(Q_1,x) ⊆ δ(Q) or k(Q_1,y) ⊆ δ(Q).",
    ),
    (
        THM_STR2,
        "In an (m,2)-hyperring, let Q be weakly (2,2)-absorbing δ-semiprimary. If k(Q_1,Q_2,x) ⊆ Q and no (q_1,q_2,x) is a δ-(2,2)-zero of Q, then k(Q_1,x), k(Q_2,x) or k(Q_1,Q_2) lies in δ(Q).",
    ),
    (
        THM_STR3,
        "In an (m,2)-hyperring, let Q be weakly (2,2)-absorbing δ-semiprimary and a free δ-(2,2)-zero with respect to Q_1, Q_2, Q_3. If 0 ≠ k(Q_1,Q_2,Q_3) ⊆ Q, then k(Q_1,Q_2), k(Q_2,Q_3) or k(Q_1,Q_3) lies in δ(Q).",
    ),
    (
        THM_STR4,
        "Let Q be W. If the product of a_1..a_(w-s) and hyperideals Q_1..Q_s lies in Q and no choice from it is a δ-(t,n)-zero of Q, then some product of u of these terms, including at least one Q_i, lies in δ(Q).",
    ),
    (
        THM_AZAD,
        "Let Q be W and a free δ-(t,n)-zero with respect to Q_1..Q_w. If 0 ≠ k(Q_1..Q_w) ⊆ Q, then the product of some u of the Q_i lies in δ(Q).",
    ),
    (
        THM_ZERO_ANNIHILATION_22,
        "If (x,y,z) is a δ-(2,2)-zero of Q, then k(x,y,Q) = k(y,z,Q) = k(x,z,Q) = 0 and k(x,Q,Q) = k(y,Q,Q) = k(z,Q,Q) = 0.",
    ),
    (
        THM_ZERO_ANNIHILATION,
        "If (a_1..a_w) is a δ-(t,n)-zero of Q, then replacing any s ≤ u of the a_i by Q gives product 0.",
    ),
    (THM_ZERO_PRODUCT_22, "If Q is weakly (2,2)-absorbing δ-semiprimary but not (2,2)-absorbing δ-semiprimary, then k(Q,Q,Q) = 0."),
    (THM_ZERO_PRODUCT, "If Q is W but not S, then k(Q^(w)) = 0."),
    (COR_RAD_ZERO, "If Q is W but not S, then Q ⊆ rad(0)."),
    (COR_REDUCED, "If G has no nonzero nilpotent elements, every W hyperideal is S."),
    (
        THM_ZERO_TRIPLE,
        "If Q is W with δ(Q) = δ(0), then Q is not S if and only if 0 has a δ-(t,n)-zero.",
    ),
    (
        THM_HOM_PREIMAGE,
        "For a δδ'-homomorphism f: G_1 → G_2, if Q_2 is (t,n)-absorbing δ'-semiprimary, then f^(-1)(Q_2) is (t,n)-absorbing δ-semiprimary.",
    ),
    (
        THM_HOM_PREIMAGE_WEAK,
        "For a δδ'-homomorphism f whose kernel is weakly (t,n)-absorbing δ-semiprimary, if Q_2 is weakly (t,n)-absorbing δ'-semiprimary, then so is f^(-1)(Q_2) for δ.",
    ),
    (
        THM_HOM_IMAGE,
        "For a surjective δδ'-homomorphism f and Q_1 ⊇ Ker f (weakly) (t,n)-absorbing δ-semiprimary, f(Q_1) is (weakly) (t,n)-absorbing δ'-semiprimary.",
    ),
    (THM_QUOTIENT, "If P ⊆ Q are proper hyperideals and Q is S, then Q/P is (t,n)-absorbing δ_q-semiprimary in G/P."),
    (
        THM_SUBHYPERRING,
        "For a subhyperring G' with G' ⊄ Q and an inclusion that is a δδ'-homomorphism, if Q is S, then Q ∩ G' is S in G'.",
    ),
    (
        THM_PRODUCT_CART,
        "If Q_1 × Q_2 is (t+1,n)-absorbing δ-semiprimary, then Q_1 is (t+1,n)-absorbing δ_1-semiprimary with δ_2(Q_2) = G_2, or the symmetric case holds, or each Q_i is (t,n)-absorbing δ_i-semiprimary.",
    ),
    (
        THM_PRODUCT_CART3,
        "If Q_1 × ... × Q_w is (t+1,n)-absorbing δ-semiprimary, then one Q_u is (t+1,n)-absorbing δ_u-semiprimary with δ_i(Q_i) = G_i elsewhere, or two Q_u, Q_v are (t,n)-absorbing δ-semiprimary with δ_i(Q_i) = G_i elsewhere.",
    ),
    (
        THM_PRODUCT_CART2,
        "If every δ_i has property (P) and Q_1 × ... × Q_w is W, then it is S.",
    ),
    (THM_PRODUCT_FULL_FACTOR, "If Q_1 × G_2 is W, then it is S."),
    (
        THM_PRODUCT_WEAKLY,
        "If every δ_i has property (P) and Q_1 × ... × Q_w is weakly (t+1,n)-absorbing δ-semiprimary, then one Q_u is (t+1,n)-absorbing δ_u-semiprimary with Q_i = G_i elsewhere, or two Q_u, Q_v are (t,n)-absorbing δ-semiprimary with Q_i = G_i elsewhere.",
    ),
    (
        CHAIN_IMPLICATIONS,
        "prime ⇒ δ-primary ⇒ (t,n)-absorbing δ-primary ⇒ S ⇒ W.",
    ),
    (DEF_DELTA_ZERO, "If Q is W, then Q has a δ-(t,n)-zero if and only if Q is not S."),
];

pub fn statement(id: &str) -> Option<&'static str> {
    THEOREMS.iter().find(|(i, _)| *i == id).map(|(_, s)| *s)
}

#[derive(Debug, Clone)]
pub struct HarnessConfig {
    pub ts: Vec<usize>,
    pub seed: u64,
    /// Random candidates to generate; zero disables the search.
    pub budget: usize,
    /// Run the product theorems over products of small corpus rings.
    pub products: bool,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self { ts: DEFAULT_TS.to_vec(), seed: 0, budget: 0, products: true }
    }
}

/// A corpus entry: a validated ring and the expansions to check it with.
#[derive(Debug)]
pub struct CorpusRing {
    pub ring: Hyperring,
    pub expansions: Vec<Expansion>,
}

impl CorpusRing {
    /// The ring with the three built-in expansions, when it has an identity.
    pub fn builtin(ring: Hyperring) -> Self {
        let expansions = builtin_expansions(&ring);
        Self { ring, expansions }
    }

    pub fn from_instance(inst: instance::Instance) -> Self {
        let mut expansions = builtin_expansions(&inst.ring);
        if !expansions.is_empty() {
            expansions.extend(inst.expansions);
        }
        Self { ring: inst.ring, expansions }
    }

    pub fn name(&self) -> &str {
        &self.ring.name
    }
}

pub(crate) fn builtin_expansions(ring: &Hyperring) -> Vec<Expansion> {
    if ring.one().is_none() {
        return vec![];
    }
    [DELTA0, DELTA1, DELTA_R].iter().filter_map(|d| Expansion::builtin(d, ring).ok()).collect()
}

/// The built-in corpus, validated.
pub fn shipped_corpus() -> Result<Vec<CorpusRing>> {
    fixtures::builtin_corpus().into_iter().map(|t| Ok(CorpusRing::builtin(t.into_validated()?))).collect()
}

/// Name of the optional manifest in a corpus directory.
pub const MANIFEST: &str = "manifest.json";

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    fixtures: Vec<PathBuf>,
}

/// Instance files listed by a manifest, resolved against its directory.
/// `None` when the text is not a manifest.
fn manifest_entries(path: &Path, text: &str) -> Option<Vec<PathBuf>> {
    let m: Manifest = serde_json::from_str(text).ok()?;
    let dir = path.parent().unwrap_or(Path::new("."));
    Some(m.fixtures.iter().map(|f| dir.join(f)).collect())
}

/// Loads instance files. A directory contributes the files named by its
/// `manifest.json`, or else all of its `*.json` files in name order; a
/// manifest file may also be passed directly.
pub fn load_corpus(paths: &[PathBuf]) -> Result<Vec<CorpusRing>> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let manifest = p.join(MANIFEST);
            if manifest.is_file() {
                files.extend(read_manifest(&manifest)?);
                continue;
            }
            let mut inner: Vec<PathBuf> = fs::read_dir(p)?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<_>>()?;
            inner.retain(|f| f.extension().is_some_and(|x| x == "json"));
            inner.sort();
            files.extend(inner);
        } else {
            let text = fs::read_to_string(p)?;
            match manifest_entries(p, &text) {
                Some(entries) => files.extend(entries),
                None => files.push(p.clone()),
            }
        }
    }
    files.iter().map(|f| load_one(f)).collect()
}

fn read_manifest(path: &Path) -> Result<Vec<PathBuf>> {
    let text = fs::read_to_string(path)?;
    manifest_entries(path, &text)
        .ok_or_else(|| Error::Load { field: "fixtures".into(), message: format!("{}: not a manifest", path.display()) })
}

fn load_one(path: &Path) -> Result<CorpusRing> {
    instance::load(path).map(CorpusRing::from_instance).map_err(|e| match e {
        Error::Load { field, message } => Error::Load { field, message: format!("{}: {message}", path.display()) },
        other => other,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub ring: String,
    pub config: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremOutcome {
    pub id: String,
    pub statement: String,
    pub cases: u64,
    pub hypothesis_met: u64,
    pub conclusion_held: u64,
    pub violations: u64,
    /// Element configurations in scope and how many were drawn, for rings
    /// above [`EXHAUSTIVE_LIMIT`].
    pub population: u64,
    pub sampled: u64,
    pub witnesses: Vec<Violation>,
}

impl TheoremOutcome {
    pub fn held(&self) -> bool {
        self.violations == 0
    }

    pub fn vacuous(&self) -> bool {
        self.hypothesis_met == 0
    }
}

/// A hyperideal that is (t,n)-absorbing δ-semiprimary but not prime.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct StrictnessWitness {
    pub ring: String,
    pub ideal: String,
    pub t: usize,
    pub delta: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub seed: u64,
    pub ts: Vec<usize>,
    pub rings: Vec<String>,
    /// Rings without a scalar identity, left out of every check.
    pub skipped: Vec<String>,
    pub products: Vec<String>,
    pub theorems: Vec<TheoremOutcome>,
    pub strictness: Vec<StrictnessWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSummary>,
    /// Instance JSON of every ring involved in a violation.
    pub instances: BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl TheoremReport {
    pub fn total_violations(&self) -> u64 {
        self.theorems.iter().map(|t| t.violations).sum()
    }

    pub fn outcome(&self, id: &str) -> Option<&TheoremOutcome> {
        self.theorems.iter().find(|t| t.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, line: String| {
            out.push_str(&line);
            out.push('\n');
        };
        push(&mut out, format!("seed {}", self.seed));
        push(&mut out, format!("t values {:?}", self.ts));
        push(&mut out, format!("rings ({}): {}", self.rings.len(), self.rings.join(" ")));
        if !self.skipped.is_empty() {
            push(&mut out, format!("skipped, no scalar identity: {}", self.skipped.join(" ")));
        }
        if !self.products.is_empty() {
            push(&mut out, format!("products ({}): {}", self.products.len(), self.products.join(" ")));
        }
        for t in &self.theorems {
            let verdict = match (t.held(), t.vacuous()) {
                (false, _) => "VIOLATED",
                (true, true) => "vacuous",
                (true, false) => "held",
            };
            push(&mut out, format!("{}: {verdict}", t.id));
            push(&mut out, format!("  statement: {}", t.statement));
            push(
                &mut out,
                format!(
                    "  cases {}, hypothesis met {}, conclusion held {}, violations {}",
                    t.cases, t.hypothesis_met, t.conclusion_held, t.violations
                ),
            );
            if t.sampled > 0 {
                push(&mut out, format!("  sampled {} of {} element configurations", t.sampled, t.population));
            }
            for v in &t.witnesses {
                push(&mut out, format!("  violation in {} at {}: {}", v.ring, v.config, v.detail));
            }
        }
        push(&mut out, format!("strictness witnesses: {}", self.strictness.len()));
        for s in self.strictness.iter().take(WITNESS_LIMIT) {
            push(&mut out, format!("  {} Q={} t={} {} is semiprimary, not prime", s.ring, s.ideal, s.t, s.delta));
        }
        if let Some(s) = &self.search {
            push(
                &mut out,
                format!(
                    "search: seed {} budget {} generated {} valid {} rejected {}",
                    s.seed, s.budget, s.generated, s.valid, s.rejected
                ),
            );
        }
        if let Some(ms) = self.elapsed_ms {
            push(&mut out, format!("elapsed {ms} ms"));
        }
        push(&mut out, format!("total violations: {}", self.total_violations()));
        out
    }
}

struct UnitOut {
    tallies: Tallies,
    strictness: Vec<StrictnessWitness>,
}

type Family = fn(&Ctx<'_>, &mut Tallies, &mut Vec<StrictnessWitness>);

const FAMILIES: &[Family] = &[
    families::lattice_level,
    families::structure,
    families::zeros,
    families::chain,
    families::homomorphisms,
];

struct Suite {
    tallies: Tallies,
    strictness: Vec<StrictnessWitness>,
    rings: Vec<String>,
    skipped: Vec<String>,
    products: Vec<String>,
}

fn run_suite(corpus: &[CorpusRing], config: &HarnessConfig, products: bool) -> Suite {
    let mut rings = Vec::new();
    let mut skipped = Vec::new();
    let mut ctxs = Vec::new();
    for c in corpus {
        match Ctx::new(&c.ring, c.expansions.clone(), &config.ts, config.seed) {
            Some(ctx) if !c.expansions.is_empty() => {
                rings.push(c.name().to_string());
                ctxs.push(ctx);
            }
            _ => skipped.push(c.name().to_string()),
        }
    }
    let cases = if products { families::product_cases(corpus) } else { vec![] };
    let product_names = cases.iter().map(|c| c.product.ring.name.clone()).collect();

    let ring_units: Vec<(usize, usize)> =
        (0..ctxs.len()).flat_map(|r| (0..FAMILIES.len()).map(move |f| (r, f))).collect();
    let mut outs: Vec<UnitOut> = ring_units
        .par_iter()
        .map(|&(r, f)| {
            let mut out = UnitOut { tallies: Tallies::default(), strictness: vec![] };
            FAMILIES[f](&ctxs[r], &mut out.tallies, &mut out.strictness);
            out
        })
        .collect();
    outs.extend(cases.par_iter().map(|case| {
        let mut tallies = Tallies::default();
        families::products(case, corpus, &config.ts, config.seed, &mut tallies);
        UnitOut { tallies, strictness: vec![] }
    }).collect::<Vec<_>>());

    let mut tallies = Tallies::default();
    let mut strictness = Vec::new();
    for o in outs {
        tallies.merge(o.tallies);
        strictness.extend(o.strictness);
    }
    Suite { tallies, strictness, rings, skipped, products: product_names }
}

/// Runs every theorem over the corpus and, with a positive budget, over the
/// valid instances found by the seeded search.
pub fn check_theorems(corpus: &[CorpusRing], config: &HarnessConfig) -> TheoremReport {
    let mut suite = run_suite(corpus, config, config.products);
    let mut summary = None;
    if config.budget > 0 {
        let (s, found) = search::generate(config.seed, config.budget, search::MAX_SEARCH_SIZE);
        let extra = run_suite(&found, config, false);
        suite.tallies.merge(extra.tallies);
        suite.strictness.extend(extra.strictness);
        summary = Some(s);
    }
    suite.strictness.sort();
    suite.strictness.dedup();

    let mut instances = BTreeMap::new();
    let theorems = THEOREMS
        .iter()
        .map(|&(id, statement)| {
            let tally = suite.tallies.take(id);
            for (name, json) in &tally.archive {
                instances
                    .entry(name.clone())
                    .or_insert_with(|| serde_json::from_str(json).expect("archived instance is valid JSON"));
            }
            let mut witnesses = tally.violations;
            witnesses.sort();
            let violations = witnesses.len() as u64;
            witnesses.truncate(WITNESS_LIMIT);
            TheoremOutcome {
                id: id.into(),
                statement: statement.into(),
                cases: tally.cases,
                hypothesis_met: tally.hypothesis_met,
                conclusion_held: tally.conclusion_held,
                violations,
                population: tally.population,
                sampled: tally.sampled,
                witnesses,
            }
        })
        .collect();
    TheoremReport {
        seed: config.seed,
        ts: config.ts.clone(),
        rings: suite.rings,
        skipped: suite.skipped,
        products: suite.products,
        theorems,
        strictness: suite.strictness,
        search: summary,
        instances,
        elapsed_ms: None,
    }
}

/// Proper hyperideals that satisfy the semiprimary condition without being
/// prime, over every corpus ring, `t` and expansion.
pub fn strictness_witnesses(corpus: &[CorpusRing], ts: &[usize]) -> Vec<StrictnessWitness> {
    let mut out = Vec::new();
    for c in corpus {
        if let Some(ctx) = Ctx::new(&c.ring, c.expansions.clone(), ts, 0) {
            families::strictness(&ctx, &mut out);
        }
    }
    out.sort();
    out
}
