//! Decision procedures for the absorbing/semiprimary family of hyperideal
//! predicates, with replayable witnesses.
//!
//! Commutativity of `k` means every predicate over `w`-tuples depends only on
//! the multiset of entries, so the scans run over nondecreasing tuples. A
//! [`TupleTable`] caches the full product and every `u`-sub-product of each
//! multiset, per ring and per `t`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::ideal::{self, lattice};
use crate::ring::{for_each_multiset, Hyperring, HyperringTable, MultisetIndex};
use crate::subset::Subset;
use crate::Elem;

/// Largest number of multisets a [`TupleTable`] will hold.
pub const TUPLE_CAP: usize = 4_000_000;
/// Default cap on the ideal lattice for the strongly variant.
pub const STRONG_LATTICE_CAP: usize = 32;

/// Widths for a given `t`: full width `w = tn-t+1`, sub width `u = (t-1)n-t+2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AbsorbingParams {
    pub t: usize,
    pub n: usize,
    pub w: usize,
    pub u: usize,
}

impl AbsorbingParams {
    pub fn new(t: usize, n: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::Precondition("t must be positive".into()));
        }
        Ok(Self { t, n, w: t * n - t + 1, u: (t - 1) * n + 2 - t })
    }

    /// Every `u`-subset of `0..w`, in lexicographic order.
    pub fn subsets(&self) -> Vec<Vec<usize>> {
        combinations(self.w, self.u)
    }
}

pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push(cur.clone());
        let mut i = r;
        while i > 0 && cur[i - 1] == n - r + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubProduct {
    /// Zero-based positions in the witness tuple.
    pub positions: Vec<usize>,
    /// The product: one element, or a set for ideal tuples.
    pub value: Vec<Elem>,
    pub in_target: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub tuple: Vec<Elem>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ideals: Vec<Vec<Elem>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sub_products: Vec<SubProduct>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Witness {
    pub fn tuple(tuple: Vec<Elem>) -> Self {
        Self { tuple, ..Self::default() }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub predicate: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl ClassificationReport {
    pub fn new(predicate: &str) -> Self {
        Self { predicate: predicate.into(), t: None, delta: None, verdict: true, witness: None }
    }

    fn with(predicate: &str, t: Option<usize>, delta: Option<&Expansion>) -> Self {
        Self { t, delta: delta.map(|d| d.name().to_string()), ..Self::new(predicate) }
    }

    pub fn fail(&mut self, witness: Witness) {
        self.verdict = false;
        self.witness = Some(witness);
    }

    pub fn render(&self, ring: &HyperringTable) -> String {
        let mut s = self.predicate.clone();
        if let Some(t) = self.t {
            let _ = write!(s, " t={t}");
        }
        if let Some(d) = &self.delta {
            let _ = write!(s, " delta={d}");
        }
        let _ = write!(s, ": {}", if self.verdict { "pass" } else { "fail" });
        if let Some(w) = &self.witness {
            if !w.ideals.is_empty() {
                let ideals: Vec<String> = w.ideals.iter().map(|i| ring.display_set(&ring.set_of(i.iter().copied()))).collect();
                let _ = write!(s, "\n  ideals ({})", ideals.join(", "));
            } else if !w.tuple.is_empty() {
                let _ = write!(s, "\n  tuple {}", ring.display_tuple(&w.tuple));
            }
            if !w.detail.is_empty() {
                let _ = write!(s, "\n  {}", w.detail);
            }
            for sp in &w.sub_products {
                let pos: Vec<String> = sp.positions.iter().map(|p| (p + 1).to_string()).collect();
                let _ = write!(
                    s,
                    "\n  [{}] -> {} {}",
                    pos.join(","),
                    ring.display_set(&ring.set_of(sp.value.iter().copied())),
                    if sp.in_target { "in target" } else { "not in target" }
                );
            }
        }
        s
    }
}

/// Full products and all sub-products of every `w`-multiset of a ring.
#[derive(Debug)]
pub struct TupleTable {
    params: AbsorbingParams,
    carrier: usize,
    index: MultisetIndex,
    subsets: Vec<Vec<usize>>,
    tuples: Vec<u16>,
    full: Vec<u16>,
    subs: Vec<u16>,
}

impl TupleTable {
    fn build(ring: &HyperringTable, t: usize) -> Result<Self> {
        let params = AbsorbingParams::new(t, ring.n())?;
        let carrier = ring.size();
        if carrier > u16::MAX as usize {
            return Err(Error::CarrierCap { size: carrier, cap: u16::MAX as usize });
        }
        let index = MultisetIndex::new(carrier, params.w);
        if index.len > TUPLE_CAP {
            return Err(Error::TupleCap { count: index.len, cap: TUPLE_CAP });
        }
        let subsets = params.subsets();
        let mut tuples = Vec::with_capacity(index.len * params.w);
        let mut full = Vec::with_capacity(index.len);
        let mut subs = Vec::with_capacity(index.len * subsets.len());
        let mut pick = vec![0; params.u];
        for_each_multiset(carrier, params.w, |tup| {
            tuples.extend(tup.iter().map(|&x| x as u16));
            full.push(ring.iterated_k_unchecked(tup) as u16);
            for d in &subsets {
                for (slot, &p) in pick.iter_mut().zip(d) {
                    *slot = tup[p];
                }
                subs.push(ring.iterated_k_unchecked(&pick) as u16);
            }
        });
        Ok(Self { params, carrier, index, subsets, tuples, full, subs })
    }

    pub fn params(&self) -> AbsorbingParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.full.len()
    }

    pub fn is_empty(&self) -> bool {
        self.full.is_empty()
    }

    pub fn tuple(&self, i: usize) -> Vec<Elem> {
        let w = self.params.w;
        self.tuples[i * w..(i + 1) * w].iter().map(|&x| x as Elem).collect()
    }

    pub fn full_product(&self, i: usize) -> Elem {
        self.full[i] as Elem
    }

    pub fn sub_products(&self, i: usize) -> impl Iterator<Item = Elem> + '_ {
        let c = self.subsets.len();
        self.subs[i * c..(i + 1) * c].iter().map(|&x| x as Elem)
    }

    /// Position of an arbitrary (unsorted) tuple.
    pub fn locate(&self, tuple: &[Elem]) -> usize {
        debug_assert!(tuple.iter().all(|&x| x < self.carrier));
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        self.index.rank(&sorted)
    }

    fn any_sub_in(&self, i: usize, target: &Subset) -> bool {
        self.sub_products(i).any(|x| target.contains(x))
    }
}

/// The cached [`TupleTable`] of a ring for a given `t`.
pub fn tuple_table(ring: &Hyperring, t: usize) -> Result<Arc<TupleTable>> {
    if let Some(tt) = ring.cache.tuples.lock().expect("cache poisoned").get(&t) {
        return Ok(tt.clone());
    }
    let built = Arc::new(TupleTable::build(ring, t)?);
    Ok(ring.cache.tuples.lock().expect("cache poisoned").entry(t).or_insert(built).clone())
}

/// Every sub-product of `elems` over the `u`-subsets of its positions.
pub fn sub_products(ring: &HyperringTable, elems: &[Elem], u: usize) -> Result<Vec<(Vec<usize>, Elem)>> {
    let n = ring.n();
    if elems.is_empty() || !(elems.len() - 1).is_multiple_of(n - 1) {
        return Err(Error::InadmissibleLength { len: elems.len(), n });
    }
    if u == 0 || u > elems.len() || !(u - 1).is_multiple_of(n - 1) {
        return Err(Error::InadmissibleLength { len: u, n });
    }
    combinations(elems.len(), u)
        .into_iter()
        .map(|d| {
            let picked: Vec<Elem> = d.iter().map(|&p| elems[p]).collect();
            Ok((d, ring.iterated_k(&picked)?))
        })
        .collect()
}

fn element_witness(ring: &HyperringTable, tuple: Vec<Elem>, u: usize, target: &Subset) -> Witness {
    let subs = sub_products(ring, &tuple, u).expect("admissible widths");
    let full = ring.iterated_k(&tuple).expect("admissible width");
    Witness {
        detail: format!("full product {}", ring.label(full)),
        sub_products: subs
            .into_iter()
            .map(|(positions, v)| SubProduct { positions, value: vec![v], in_target: target.contains(v) })
            .collect(),
        tuple,
        ideals: vec![],
    }
}

/// Validated inputs for a classifier run: proper hyperideal, identity present.
fn prepare(ring: &Hyperring, q: &Subset) -> Result<()> {
    ring.require_identity()?;
    lattice(ring)?.require(ring, q)?;
    if q.is_full() {
        return Err(Error::NotProper);
    }
    Ok(())
}

/// First multiset whose full product lies in `q` (and is nonzero when
/// `weakly`) with no sub-product in `target`.
pub fn semiprimary_failure(ring: &Hyperring, t: usize, q: &Subset, target: &Subset, weakly: bool) -> Result<Option<Vec<Elem>>> {
    let tt = tuple_table(ring, t)?;
    let zero = ring.zero();
    Ok((0..tt.len())
        .find(|&i| {
            let f = tt.full_product(i);
            q.contains(f) && !(weakly && f == zero) && !tt.any_sub_in(i, target)
        })
        .map(|i| tt.tuple(i)))
}

/// Table-level semiprimary check with an explicit target; no precondition
/// checks. Used by the theorem harness.
pub fn semiprimary_holds(ring: &Hyperring, t: usize, q: &Subset, target: &Subset, weakly: bool) -> Result<bool> {
    Ok(semiprimary_failure(ring, t, q, target, weakly)?.is_none())
}

fn semiprimary_report(ring: &Hyperring, q: &Subset, t: usize, delta: &Expansion, weakly: bool) -> Result<ClassificationReport> {
    prepare(ring, q)?;
    let target = delta.apply(q)?;
    let name = if weakly { "weakly-tn-absorbing-delta-semiprimary" } else { "tn-absorbing-delta-semiprimary" };
    let mut report = ClassificationReport::with(name, Some(t), Some(delta));
    if let Some(tuple) = semiprimary_failure(ring, t, q, &target, weakly)? {
        let u = AbsorbingParams::new(t, ring.n())?.u;
        report.fail(element_witness(ring, tuple, u, &target));
    }
    Ok(report)
}

/// Whenever `k(a_1..a_w) ∈ Q`, some `u` of the `a_i` have product in `δ(Q)`.
pub fn is_tn_absorbing_delta_semiprimary(ring: &Hyperring, q: &Subset, t: usize, delta: &Expansion) -> Result<ClassificationReport> {
    semiprimary_report(ring, q, t, delta, false)
}

/// As [`is_tn_absorbing_delta_semiprimary`], for nonzero full products only.
pub fn is_weakly_tn_absorbing_delta_semiprimary(ring: &Hyperring, q: &Subset, t: usize, delta: &Expansion) -> Result<ClassificationReport> {
    semiprimary_report(ring, q, t, delta, true)
}

/// Whenever `k(a_1..a_w) ∈ Q`, some `u` of the `a_i` have product in `Q`.
pub fn is_tn_absorbing(ring: &Hyperring, q: &Subset, t: usize) -> Result<ClassificationReport> {
    prepare(ring, q)?;
    let mut report = ClassificationReport::with("tn-absorbing", Some(t), None);
    if let Some(tuple) = semiprimary_failure(ring, t, q, q, false)? {
        let u = AbsorbingParams::new(t, ring.n())?.u;
        report.fail(element_witness(ring, tuple, u, q));
    }
    Ok(report)
}

/// Whenever `k(a_1..a_n) ∈ Q`, every position `i` has `a_i ∈ Q` or
/// `k(a_1..a_{i-1}, 1, a_{i+1}..a_n) ∈ δ(Q)`.
pub fn is_delta_primary(ring: &Hyperring, q: &Subset, delta: &Expansion) -> Result<ClassificationReport> {
    prepare(ring, q)?;
    let one = ring.require_identity()?;
    let target = delta.apply(q)?;
    let mut report = ClassificationReport::with("delta-primary", None, Some(delta));
    let mut found = None;
    for_each_multiset(ring.size(), ring.n(), |t| {
        if found.is_some() || !q.contains(ring.k(t)) {
            return;
        }
        for pos in 0..t.len() {
            if q.contains(t[pos]) {
                continue;
            }
            let mut rest = t.to_vec();
            rest[pos] = one;
            if !target.contains(ring.k(&rest)) {
                found = Some((t.to_vec(), pos));
                return;
            }
        }
    });
    if let Some((t, pos)) = found {
        report.fail(Witness::tuple(t).with_detail(format!("position {} not in Q, cofactor not in delta(Q)", pos + 1)));
    }
    Ok(report)
}

/// Sub-product test for the (t,n)-absorbing δ-primary predicate, read over
/// every ordering of the tuple: for each `u`-subset `D`, the product over `D`
/// is in `Q` or some other `u`-subset has product in `δ(Q)`.
fn absorbing_primary_ok(subs: impl Iterator<Item = Elem>, q: &Subset, target: &Subset) -> bool {
    let mut hits = 0;
    let mut last = None;
    let mut any_outside_q = false;
    for v in subs {
        if target.contains(v) {
            hits += 1;
            last = Some(v);
        }
        any_outside_q |= !q.contains(v);
    }
    match hits {
        0 => !any_outside_q,
        1 => last.is_some_and(|v| q.contains(v)) || !any_outside_q,
        _ => true,
    }
}

pub fn is_tn_absorbing_delta_primary(ring: &Hyperring, q: &Subset, t: usize, delta: &Expansion) -> Result<ClassificationReport> {
    prepare(ring, q)?;
    let target = delta.apply(q)?;
    let tt = tuple_table(ring, t)?;
    let mut report = ClassificationReport::with("tn-absorbing-delta-primary", Some(t), Some(delta));
    let bad = (0..tt.len()).find(|&i| q.contains(tt.full_product(i)) && !absorbing_primary_ok(tt.sub_products(i), q, &target));
    if let Some(i) = bad {
        report.fail(element_witness(ring, tt.tuple(i), tt.params().u, &target));
    }
    Ok(report)
}

/// Ideal-tuple variant: whenever the product set of `Q_1..Q_w` lies in `Q`
/// (and is not `{0}` when `weakly`), some `u` of the `Q_i` have product set
/// inside `δ(Q)`. Refuses lattices larger than `cap`.
pub fn is_strongly_variant(
    ring: &Hyperring,
    q: &Subset,
    t: usize,
    delta: &Expansion,
    weakly: bool,
    cap: usize,
) -> Result<ClassificationReport> {
    prepare(ring, q)?;
    let l = lattice(ring)?;
    if l.len() > cap {
        return Err(Error::LatticeCap { size: l.len(), cap });
    }
    let target = delta.apply(q)?;
    let params = AbsorbingParams::new(t, ring.n())?;
    let subsets = params.subsets();
    let zero = ring.zero_set();
    let mut memo: HashMap<Vec<usize>, Subset> = HashMap::new();
    let mut product = |idx: &[usize]| -> Subset {
        let mut key = idx.to_vec();
        key.sort_unstable();
        memo.entry(key)
            .or_insert_with_key(|k| {
                let sets: Vec<Subset> = k.iter().map(|&i| l.get(i).clone()).collect();
                ring.iterated_k_set(&sets).expect("admissible width")
            })
            .clone()
    };
    let name = if weakly { "strongly-weakly-tn-absorbing-delta-semiprimary" } else { "strongly-tn-absorbing-delta-semiprimary" };
    let mut report = ClassificationReport::with(name, Some(t), Some(delta));
    let mut failure = None;
    for_each_multiset(l.len(), params.w, |idx| {
        if failure.is_some() {
            return;
        }
        let full = product(idx);
        if !full.is_subset(q) || (weakly && full == zero) {
            return;
        }
        let subs: Vec<(Vec<usize>, Subset)> = subsets
            .iter()
            .map(|d| {
                let picked: Vec<usize> = d.iter().map(|&p| idx[p]).collect();
                (d.clone(), product(&picked))
            })
            .collect();
        if !subs.iter().any(|(_, s)| s.is_subset(&target)) {
            failure = Some((idx.to_vec(), full, subs));
        }
    });
    if let Some((idx, full, subs)) = failure {
        report.fail(Witness {
            tuple: vec![],
            ideals: idx.iter().map(|&i| l.get(i).to_vec()).collect(),
            sub_products: subs
                .into_iter()
                .map(|(positions, s)| SubProduct { in_target: s.is_subset(&target), positions, value: s.to_vec() })
                .collect(),
            detail: format!("product set {}", ring.display_set(&full)),
        });
    }
    Ok(report)
}

/// Zero-product tuples of a hyperideal with no sub-product in `δ(Q)`, one
/// sorted representative per multiset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaZeros {
    pub tuples: Vec<Vec<Elem>>,
    /// Whether `Q` is weakly (t,n)-absorbing δ-semiprimary, the setting in
    /// which the notion is defined.
    pub hypothesis_met: bool,
}

pub fn delta_zeros_for_target(ring: &Hyperring, t: usize, target: &Subset) -> Result<Vec<Vec<Elem>>> {
    let tt = tuple_table(ring, t)?;
    let zero = ring.zero();
    Ok((0..tt.len())
        .filter(|&i| tt.full_product(i) == zero && !tt.any_sub_in(i, target))
        .map(|i| tt.tuple(i))
        .collect())
}

pub fn find_delta_tn_zeros(ring: &Hyperring, q: &Subset, t: usize, delta: &Expansion) -> Result<DeltaZeros> {
    prepare(ring, q)?;
    let target = delta.apply(q)?;
    Ok(DeltaZeros {
        tuples: delta_zeros_for_target(ring, t, &target)?,
        hypothesis_met: semiprimary_holds(ring, t, q, &target, true)?,
    })
}

/// Whether some choice `(q_1..q_w)` with `q_i ∈ Q_i` is a δ-(t,n)-zero of a
/// hyperideal with expansion image `target`.
pub fn has_delta_zero_choice(ring: &Hyperring, t: usize, target: &Subset, ideals: &[Subset]) -> Result<bool> {
    let tt = tuple_table(ring, t)?;
    let members: Vec<Vec<Elem>> = ideals.iter().map(Subset::to_vec).collect();
    let zero = ring.zero();
    let mut pick = vec![0; members.len()];
    Ok(any_choice(&members, &mut pick, 0, &mut |c| {
        let i = tt.locate(c);
        tt.full_product(i) == zero && !tt.any_sub_in(i, target)
    }))
}

pub(crate) fn any_choice(members: &[Vec<Elem>], pick: &mut Vec<Elem>, depth: usize, f: &mut impl FnMut(&[Elem]) -> bool) -> bool {
    if depth == members.len() {
        return f(pick);
    }
    for &x in &members[depth] {
        pick[depth] = x;
        if any_choice(members, pick, depth + 1, f) {
            return true;
        }
    }
    false
}

/// True iff no choice tuple from `ideals` is a δ-(t,n)-zero of `Q`. The
/// product set of the ideals must lie in `Q`.
pub fn is_free_delta_tn_zero(ring: &Hyperring, q: &Subset, t: usize, delta: &Expansion, ideals: &[Subset]) -> Result<bool> {
    prepare(ring, q)?;
    let params = AbsorbingParams::new(t, ring.n())?;
    if ideals.len() != params.w {
        return Err(Error::ArityMismatch { expected: params.w, got: ideals.len() });
    }
    let l = lattice(ring)?;
    for i in ideals {
        l.require(ring, i)?;
    }
    if !ring.iterated_k_set(ideals)?.is_subset(q) {
        return Err(Error::Precondition("product of the ideals is not contained in Q".into()));
    }
    let target = delta.apply(q)?;
    Ok(!has_delta_zero_choice(ring, t, &target, ideals)?)
}

/// Every predicate for one hyperideal, over the given `t` values and
/// expansions, in a fixed order. The strongly variants are included when the
/// lattice is within [`STRONG_LATTICE_CAP`].
pub fn classify_all(ring: &Hyperring, q: &Subset, ts: &[usize], deltas: &[Expansion]) -> Result<Vec<ClassificationReport>> {
    prepare(ring, q)?;
    let mut out = vec![ideal::is_prime(ring, q)?, ideal::is_primary(ring, q)?];
    for d in deltas {
        out.push(is_delta_primary(ring, q, d)?);
    }
    let small = lattice(ring)?.len() <= STRONG_LATTICE_CAP;
    for &t in ts {
        out.push(is_tn_absorbing(ring, q, t)?);
        for d in deltas {
            out.push(is_tn_absorbing_delta_primary(ring, q, t, d)?);
            out.push(is_tn_absorbing_delta_semiprimary(ring, q, t, d)?);
            out.push(is_weakly_tn_absorbing_delta_semiprimary(ring, q, t, d)?);
            if small {
                out.push(is_strongly_variant(ring, q, t, d, false, STRONG_LATTICE_CAP)?);
                out.push(is_strongly_variant(ring, q, t, d, true, STRONG_LATTICE_CAP)?);
            }
        }
    }
    Ok(out)
}

/// Replays a witness tuple: whether it still breaks the semiprimary condition
/// for `q` with expansion image `target`, under any ordering of its entries.
pub fn replays_as_failure(ring: &HyperringTable, tuple: &[Elem], t: usize, q: &Subset, target: &Subset, weakly: bool) -> Result<bool> {
    let params = AbsorbingParams::new(t, ring.n())?;
    let full = ring.iterated_k(tuple)?;
    if !q.contains(full) || (weakly && full == ring.zero()) {
        return Ok(false);
    }
    Ok(sub_products(ring, tuple, params.u)?.iter().all(|(_, v)| !target.contains(*v)))
}
