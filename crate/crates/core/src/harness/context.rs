use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Violation, EXHAUSTIVE_LIMIT, SAMPLE_SIZE};
use crate::classify::{self, AbsorbingParams};
use crate::expansion::Expansion;
use crate::ideal::{self, IdealLattice};
use crate::instance::table_to_json;
use crate::ring::{for_each_multiset, Hyperring, HyperringTable};
use crate::subset::Subset;
use crate::Elem;

/// Counts for one theorem.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    pub cases: u64,
    pub hypothesis_met: u64,
    pub conclusion_held: u64,
    pub population: u64,
    pub sampled: u64,
    pub violations: Vec<Violation>,
    /// Ring name to instance JSON for rings with violations.
    pub archive: BTreeMap<String, String>,
}

impl Tally {
    /// Records one configuration. The conclusion is only evaluated when the
    /// hypothesis holds; config and detail only on a violation.
    pub fn judge(
        &mut self,
        ring: &HyperringTable,
        hypothesis: bool,
        conclusion: impl FnOnce() -> bool,
        config: impl FnOnce() -> String,
        detail: impl FnOnce() -> String,
    ) {
        self.cases += 1;
        if !hypothesis {
            return;
        }
        self.hypothesis_met += 1;
        if conclusion() {
            self.conclusion_held += 1;
        } else {
            self.violations.push(Violation { ring: ring.name.clone(), config: config(), detail: detail() });
            self.archive.entry(ring.name.clone()).or_insert_with(|| table_to_json(ring));
        }
    }

    /// A configuration whose outer hypothesis fails, so nothing inside it is
    /// enumerated.
    pub fn miss(&mut self) {
        self.cases += 1;
    }

    fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.hypothesis_met += other.hypothesis_met;
        self.conclusion_held += other.conclusion_held;
        self.population += other.population;
        self.sampled += other.sampled;
        self.violations.extend(other.violations);
        for (k, v) in other.archive {
            self.archive.entry(k).or_insert(v);
        }
    }
}

#[derive(Debug, Default)]
pub(crate) struct Tallies(BTreeMap<&'static str, Tally>);

impl Tallies {
    pub fn get(&mut self, id: &'static str) -> &mut Tally {
        self.0.entry(id).or_default()
    }

    pub fn merge(&mut self, other: Tallies) {
        for (id, t) in other.0 {
            self.get(id).merge(t);
        }
    }

    pub fn take(&mut self, id: &str) -> Tally {
        self.0.remove(id).unwrap_or_default()
    }
}

type MemoKey = (usize, Subset, Subset, bool);

/// One ring under test: its lattice, expansions, usable `t` values and a
/// memo of semiprimary checks.
pub(crate) struct Ctx<'a> {
    pub ring: &'a Hyperring,
    pub lattice: Arc<IdealLattice>,
    radicals: Vec<usize>,
    pub deltas: Vec<Expansion>,
    /// The requested `t` values whose tuple tables fit under the cap.
    pub ts: Vec<usize>,
    pub seed: u64,
    memo: Mutex<HashMap<MemoKey, bool>>,
}

impl<'a> Ctx<'a> {
    /// `None` for rings without a scalar identity or with too many ideals.
    pub fn new(ring: &'a Hyperring, deltas: Vec<Expansion>, ts: &[usize], seed: u64) -> Option<Self> {
        ring.one()?;
        let lattice = ideal::lattice(ring).ok()?;
        let radicals = ideal::radical_indices(ring).ok()?;
        let ts = ts.iter().copied().filter(|&t| classify::tuple_table(ring, t).is_ok()).collect();
        Some(Self { ring, lattice, radicals, deltas, ts, seed, memo: Mutex::new(HashMap::new()) })
    }

    pub fn name(&self) -> &str {
        &self.ring.name
    }

    pub fn has_t(&self, t: usize) -> bool {
        self.ts.contains(&t)
    }

    pub fn params(&self, t: usize) -> AbsorbingParams {
        AbsorbingParams::new(t, self.ring.n()).expect("t is positive")
    }

    pub fn ideals(&self) -> &[Subset] {
        self.lattice.ideals()
    }

    pub fn proper(&self) -> Vec<&Subset> {
        self.lattice.proper().map(|i| self.lattice.get(i)).collect()
    }

    pub fn show(&self, s: &Subset) -> String {
        self.ring.display_set(s)
    }

    pub fn config(&self, t: usize, delta: &Expansion, q: &Subset) -> String {
        format!("t={t} delta={} Q={}", delta.name(), self.show(q))
    }

    /// `δ(Q)`; the argument must be a hyperideal of this ring.
    pub fn img(&self, delta: &Expansion, q: &Subset) -> Subset {
        delta.apply(q).expect("argument is a hyperideal")
    }

    pub fn rad(&self, q: &Subset) -> Subset {
        let i = self.lattice.index_of(q).expect("argument is a hyperideal");
        self.lattice.get(self.radicals[i]).clone()
    }

    /// Semiprimary condition for `q` with explicit target, false for the
    /// whole ring.
    pub fn semi(&self, t: usize, q: &Subset, target: &Subset, weakly: bool) -> bool {
        if q.is_full() {
            return false;
        }
        let key = (t, q.clone(), target.clone(), weakly);
        if let Some(&v) = self.memo.lock().expect("memo poisoned").get(&key) {
            return v;
        }
        let v = classify::semiprimary_holds(self.ring, t, q, target, weakly).expect("t was checked");
        self.memo.lock().expect("memo poisoned").insert(key, v);
        v
    }

    /// (t,n)-absorbing δ-semiprimary.
    pub fn s(&self, t: usize, delta: &Expansion, q: &Subset) -> bool {
        !q.is_full() && self.semi(t, q, &self.img(delta, q), false)
    }

    /// Weakly (t,n)-absorbing δ-semiprimary.
    pub fn w(&self, t: usize, delta: &Expansion, q: &Subset) -> bool {
        !q.is_full() && self.semi(t, q, &self.img(delta, q), true)
    }

    /// (Weakly) (t,n)-absorbing: the target is `q` itself.
    pub fn absorbing(&self, t: usize, q: &Subset, weakly: bool) -> bool {
        self.semi(t, q, q, weakly)
    }

    /// Why the semiprimary condition fails, for violation details.
    pub fn why(&self, t: usize, q: &Subset, target: &Subset, weakly: bool) -> String {
        if q.is_full() {
            return "ideal is not proper".into();
        }
        match classify::semiprimary_failure(self.ring, t, q, target, weakly) {
            Ok(Some(tuple)) => format!("tuple {} has no sub-product in {}", self.ring.display_tuple(&tuple), self.show(target)),
            _ => "condition holds".into(),
        }
    }

    pub fn prod(&self, sets: &[Subset]) -> Subset {
        self.ring.iterated_k_set(sets).expect("admissible product length")
    }

    pub fn zero_choice(&self, t: usize, target: &Subset, sets: &[Subset]) -> bool {
        classify::has_delta_zero_choice(self.ring, t, target, sets).expect("t was checked")
    }

    pub fn singleton(&self, x: Elem) -> Subset {
        Subset::singleton(self.ring.size(), x)
    }

    /// Sorted element tuples of the given length: all of them up to
    /// [`EXHAUSTIVE_LIMIT`] elements, a seeded sample beyond. Sampling is
    /// recorded in the tally.
    pub fn element_tuples(&self, arity: usize, salt: u64, tally: &mut Tally) -> Vec<Vec<Elem>> {
        let n = self.ring.size();
        let mut out = Vec::new();
        if n <= EXHAUSTIVE_LIMIT {
            for_each_multiset(n, arity, |t| out.push(t.to_vec()));
            return out;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ fnv(self.name().as_bytes()) ^ salt.rotate_left(17));
        for _ in 0..SAMPLE_SIZE {
            let mut t: Vec<Elem> = (0..arity).map(|_| rng.gen_range(0..n)).collect();
            t.sort_unstable();
            out.push(t);
        }
        tally.population += multisets(n, arity);
        tally.sampled += SAMPLE_SIZE as u64;
        out
    }
}

pub(crate) fn fnv(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn multisets(n: usize, k: usize) -> u64 {
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * (n as u128 + i) / (i + 1);
    }
    c.min(u64::MAX as u128) as u64
}
