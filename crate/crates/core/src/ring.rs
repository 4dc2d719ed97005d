//! Finite Krasner (m,n)-hyperring tables.
//!
//! Both operations are commutative, so each table stores one entry per sorted
//! argument tuple (a multiset over the carrier). Lookups sort their arguments
//! and rank the resulting multiset.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use smallvec::SmallVec;

use crate::axioms::{self, AxiomReport};
use crate::error::{Error, Result};
use crate::subset::Subset;
use crate::Elem;

type Args = SmallVec<[Elem; 8]>;

/// Colex ranking of sorted tuples (multisets) of a fixed arity.
#[derive(Debug, Clone)]
pub(crate) struct MultisetIndex {
    arity: usize,
    binom: Vec<Vec<usize>>,
    pub(crate) len: usize,
}

impl MultisetIndex {
    pub(crate) fn new(carrier: usize, arity: usize) -> Self {
        let rows = carrier + arity + 1;
        let mut binom = vec![vec![0usize; arity + 2]; rows];
        for r in 0..rows {
            binom[r][0] = 1;
            if r > 0 {
                for c in 1..=arity + 1 {
                    binom[r][c] = binom[r - 1][c - 1] + binom[r - 1][c];
                }
            }
        }
        let len = if carrier == 0 { 0 } else { binom[carrier + arity - 1][arity] };
        Self { arity, binom, len }
    }

    #[inline]
    pub(crate) fn rank(&self, sorted: &[Elem]) -> usize {
        sorted.iter().enumerate().map(|(i, &c)| self.binom[c + i][i + 1]).sum()
    }
}

/// Calls `f` on every nondecreasing tuple of length `arity` over `0..carrier`,
/// in colex rank order.
pub fn for_each_multiset(carrier: usize, arity: usize, mut f: impl FnMut(&[Elem])) {
    if carrier == 0 {
        return;
    }
    if arity == 0 {
        f(&[]);
        return;
    }
    let mut cur = vec![0usize; arity];
    loop {
        f(&cur);
        // colex successor: bump the lowest position that can grow
        let mut i = 0;
        loop {
            if i == arity {
                return;
            }
            let cap = if i + 1 < arity { cur[i + 1] } else { carrier - 1 };
            if cur[i] < cap {
                cur[i] += 1;
                for c in cur.iter_mut().take(i) {
                    *c = 0;
                }
                break;
            }
            i += 1;
        }
    }
}

/// Calls `f` on every tuple in `0..carrier` of length `arity` (lexicographic).
pub fn for_each_tuple(carrier: usize, arity: usize, mut f: impl FnMut(&[Elem])) {
    if carrier == 0 && arity > 0 {
        return;
    }
    let mut cur = vec![0usize; arity];
    loop {
        f(&cur);
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < carrier {
                break;
            }
            cur[i] = 0;
        }
    }
}

fn sorted_args(args: &[Elem]) -> Args {
    let mut a: Args = args.iter().copied().collect();
    a.sort_unstable();
    a
}

/// An m-ary hyperoperation: each sorted m-tuple maps to a nonempty subset.
#[derive(Debug, Clone)]
pub struct HyperOpTable {
    carrier: usize,
    index: MultisetIndex,
    entries: Vec<Subset>,
}

impl HyperOpTable {
    /// Builds the table by evaluating `f` on every sorted m-tuple.
    pub fn from_fn(carrier: usize, arity: usize, mut f: impl FnMut(&[Elem]) -> Subset) -> Self {
        assert!(arity >= 2, "hyperoperation arity must be at least 2");
        let index = MultisetIndex::new(carrier, arity);
        let mut entries = Vec::with_capacity(index.len);
        for_each_multiset(carrier, arity, |t| entries.push(f(t)));
        Self { carrier, index, entries }
    }

    pub fn arity(&self) -> usize {
        self.index.arity
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    #[inline]
    pub fn get(&self, args: &[Elem]) -> &Subset {
        debug_assert_eq!(args.len(), self.arity());
        if args.len() == 2 {
            let (a, b) = if args[0] <= args[1] { (args[0], args[1]) } else { (args[1], args[0]) };
            return &self.entries[a + (b + 1) * b / 2];
        }
        let s = sorted_args(args);
        &self.entries[self.index.rank(&s)]
    }

    /// Sorted tuples with their entries, in storage order.
    pub fn entries(&self) -> Vec<(Vec<Elem>, &Subset)> {
        let mut out = Vec::with_capacity(self.entries.len());
        let mut i = 0;
        for_each_multiset(self.carrier, self.arity(), |t| {
            out.push((t.to_vec(), &self.entries[i]));
            i += 1;
        });
        out
    }
}

/// An n-ary operation: each sorted n-tuple maps to one element.
#[derive(Debug, Clone)]
pub struct NaryOpTable {
    carrier: usize,
    index: MultisetIndex,
    entries: Vec<Elem>,
}

impl NaryOpTable {
    pub fn from_fn(carrier: usize, arity: usize, mut f: impl FnMut(&[Elem]) -> Elem) -> Self {
        assert!(arity >= 2, "operation arity must be at least 2");
        let index = MultisetIndex::new(carrier, arity);
        let mut entries = Vec::with_capacity(index.len);
        for_each_multiset(carrier, arity, |t| entries.push(f(t)));
        Self { carrier, index, entries }
    }

    pub fn arity(&self) -> usize {
        self.index.arity
    }

    #[inline]
    pub fn get(&self, args: &[Elem]) -> Elem {
        debug_assert_eq!(args.len(), self.arity());
        if args.len() == 2 {
            let (a, b) = if args[0] <= args[1] { (args[0], args[1]) } else { (args[1], args[0]) };
            return self.entries[a + (b + 1) * b / 2];
        }
        let s = sorted_args(args);
        self.entries[self.index.rank(&s)]
    }

    pub fn entries(&self) -> Vec<(Vec<Elem>, Elem)> {
        let mut out = Vec::with_capacity(self.entries.len());
        let mut i = 0;
        for_each_multiset(self.carrier, self.arity(), |t| {
            out.push((t.to_vec(), self.entries[i]));
            i += 1;
        });
        out
    }
}

/// Raw tables of a candidate hyperring, before axiom validation.
#[derive(Debug, Clone)]
pub struct HyperringTable {
    pub name: String,
    labels: Vec<String>,
    h: HyperOpTable,
    k: NaryOpTable,
    zero: Elem,
    one: Option<Elem>,
}

impl HyperringTable {
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        h: HyperOpTable,
        k: NaryOpTable,
        zero: Elem,
        one: Option<Elem>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::load("carrier", "carrier is empty"));
        }
        if h.carrier != n || k.carrier != n {
            return Err(Error::load("carrier", "table carrier size differs from label count"));
        }
        if zero >= n {
            return Err(Error::load("zero", "zero outside carrier"));
        }
        if one.is_some_and(|o| o >= n) {
            return Err(Error::load("one", "identity outside carrier"));
        }
        for (t, s) in h.entries() {
            if s.is_empty() {
                return Err(Error::load("h", format!("entry {t:?} is empty")));
            }
        }
        Ok(Self { name: name.into(), labels, h, k, zero, one })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Arity of the hyperaddition.
    pub fn m(&self) -> usize {
        self.h.arity()
    }

    /// Arity of the multiplication.
    pub fn n(&self) -> usize {
        self.k.arity()
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Option<Elem> {
        self.one
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: Elem) -> &str {
        &self.labels[e]
    }

    pub fn elem(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn h_table(&self) -> &HyperOpTable {
        &self.h
    }

    pub fn k_table(&self) -> &NaryOpTable {
        &self.k
    }

    #[inline]
    pub fn h(&self, args: &[Elem]) -> &Subset {
        self.h.get(args)
    }

    #[inline]
    pub fn k(&self, args: &[Elem]) -> Elem {
        self.k.get(args)
    }

    pub fn empty_set(&self) -> Subset {
        Subset::empty(self.size())
    }

    pub fn full_set(&self) -> Subset {
        Subset::full(self.size())
    }

    pub fn zero_set(&self) -> Subset {
        Subset::singleton(self.size(), self.zero)
    }

    pub fn set_of<I: IntoIterator<Item = Elem>>(&self, elems: I) -> Subset {
        Subset::from_elems(self.size(), elems)
    }

    /// h applied to subsets: the union of h over all choice tuples.
    pub fn extend_h(&self, args: &[Subset]) -> Result<Subset> {
        if args.len() != self.m() {
            return Err(Error::ArityMismatch { expected: self.m(), got: args.len() });
        }
        if let Some(i) = args.iter().position(Subset::is_empty) {
            return Err(Error::EmptyArgument(i));
        }
        let members: Vec<Vec<Elem>> = args.iter().map(Subset::to_vec).collect();
        let mut out = self.empty_set();
        let mut pick: Args = SmallVec::from_elem(0, args.len());
        choice_product(&members, &mut pick, 0, &mut |t| out.union_with(self.h(t)));
        Ok(out)
    }

    /// k applied elementwise to subsets: `{k(x_1..x_n) : x_i ∈ X_i}`.
    pub fn k_set(&self, args: &[Subset]) -> Subset {
        assert_eq!(args.len(), self.n());
        let members: Vec<Vec<Elem>> = args.iter().map(Subset::to_vec).collect();
        let mut out = self.empty_set();
        if members.iter().any(Vec::is_empty) {
            return out;
        }
        let mut pick: Args = SmallVec::from_elem(0, args.len());
        choice_product(&members, &mut pick, 0, &mut |t| {
            out.insert(self.k(t));
        });
        out
    }

    /// Left-nested iterated product of `l(n-1)+1` elements.
    pub fn iterated_k(&self, elems: &[Elem]) -> Result<Elem> {
        let n = self.n();
        if elems.is_empty() || !(elems.len() - 1).is_multiple_of(n - 1) {
            return Err(Error::InadmissibleLength { len: elems.len(), n });
        }
        Ok(self.iterated_k_unchecked(elems))
    }

    #[inline]
    pub(crate) fn iterated_k_unchecked(&self, elems: &[Elem]) -> Elem {
        let n = self.n();
        let mut acc = elems[0];
        if n == 2 {
            for &e in &elems[1..] {
                acc = self.k.get(&[acc, e]);
            }
            return acc;
        }
        let mut buf: Args = SmallVec::with_capacity(n);
        for chunk in elems[1..].chunks(n - 1) {
            buf.clear();
            buf.push(acc);
            buf.extend_from_slice(chunk);
            acc = self.k.get(&buf);
        }
        acc
    }

    /// Elementwise iterated product of `l(n-1)+1` subsets.
    pub fn iterated_k_set(&self, sets: &[Subset]) -> Result<Subset> {
        let n = self.n();
        if sets.is_empty() || !(sets.len() - 1).is_multiple_of(n - 1) {
            return Err(Error::InadmissibleLength { len: sets.len(), n });
        }
        let mut acc = sets[0].clone();
        for chunk in sets[1..].chunks(n - 1) {
            let mut args = Vec::with_capacity(n);
            args.push(acc);
            args.extend(chunk.iter().cloned());
            acc = self.k_set(&args);
        }
        Ok(acc)
    }

    /// `k(g_1..g_s, 1^(n-s))` for `1 <= s <= n`.
    pub fn pad_product(&self, elems: &[Elem]) -> Result<Elem> {
        let one = self.one.ok_or(Error::MissingIdentity)?;
        let n = self.n();
        if elems.is_empty() || elems.len() > n {
            return Err(Error::PadLength { len: elems.len(), n });
        }
        let mut args: Args = elems.iter().copied().collect();
        args.resize(n, one);
        Ok(self.k(&args))
    }

    /// The unique `e` with `k(g, e^(n-1)) = g` for every `g`, if any.
    pub fn find_scalar_identity(&self) -> Option<Elem> {
        let n = self.n();
        (0..self.size()).find(|&e| {
            (0..self.size()).all(|g| {
                let mut args: Args = SmallVec::from_elem(e, n);
                args[0] = g;
                self.k(&args) == g
            })
        })
    }

    /// Sets the scalar identity from the tables when none was declared.
    pub fn record_scalar_identity(&mut self) -> Option<Elem> {
        if self.one.is_none() {
            self.one = self.find_scalar_identity();
        }
        self.one
    }

    pub fn validate(&self) -> AxiomReport {
        axioms::validate_krasner(self)
    }

    /// Checks every axiom and freezes the tables into a [`Hyperring`].
    pub fn into_validated(mut self) -> Result<Hyperring> {
        self.record_scalar_identity();
        let report = self.validate();
        if !report.passed() {
            return Err(Error::Axioms(Box::new(report)));
        }
        let inverses = (0..self.size())
            .map(|x| axioms::inverse_of(&self, x).expect("validated ring has inverses"))
            .collect();
        Ok(Hyperring {
            table: self,
            inverses,
            extend_memo: Mutex::new(HashMap::new()),
            cache: RingCache::default(),
        })
    }

    pub fn display_set(&self, s: &Subset) -> String {
        let labels: Vec<&str> = s.iter().map(|e| self.label(e)).collect();
        format!("{{{}}}", labels.join(","))
    }

    pub fn display_tuple(&self, t: &[Elem]) -> String {
        let labels: Vec<&str> = t.iter().map(|&e| self.label(e)).collect();
        format!("({})", labels.join(","))
    }
}

fn choice_product(members: &[Vec<Elem>], pick: &mut Args, depth: usize, f: &mut impl FnMut(&[Elem])) {
    if depth == members.len() {
        f(pick);
        return;
    }
    for &x in &members[depth] {
        pick[depth] = x;
        choice_product(members, pick, depth + 1, f);
    }
}

#[derive(Default)]
pub(crate) struct RingCache {
    pub(crate) lattice: OnceLock<Arc<crate::ideal::IdealLattice>>,
    pub(crate) radicals: OnceLock<Vec<usize>>,
    pub(crate) tuples: Mutex<HashMap<usize, Arc<crate::classify::TupleTable>>>,
}

/// A validated, immutable Krasner (m,n)-hyperring.
pub struct Hyperring {
    table: HyperringTable,
    inverses: Vec<Elem>,
    extend_memo: Mutex<HashMap<Vec<Subset>, Subset>>,
    pub(crate) cache: RingCache,
}

impl std::fmt::Debug for Hyperring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Hyperring")
            .field("name", &self.table.name)
            .field("size", &self.size())
            .field("m", &self.m())
            .field("n", &self.n())
            .finish()
    }
}

impl std::ops::Deref for Hyperring {
    type Target = HyperringTable;

    fn deref(&self) -> &HyperringTable {
        &self.table
    }
}

impl Hyperring {
    pub fn table(&self) -> &HyperringTable {
        &self.table
    }

    pub fn into_table(self) -> HyperringTable {
        self.table
    }

    /// The unique additive inverse of `x`.
    pub fn neg(&self, x: Elem) -> Elem {
        self.inverses[x]
    }

    /// Memoized [`HyperringTable::extend_h`]. Argument order is normalized,
    /// since h is commutative.
    pub fn extend_hyperop_to_subsets(&self, args: &[Subset]) -> Result<Subset> {
        if args.len() != self.m() {
            return Err(Error::ArityMismatch { expected: self.m(), got: args.len() });
        }
        if let Some(i) = args.iter().position(Subset::is_empty) {
            return Err(Error::EmptyArgument(i));
        }
        let mut key = args.to_vec();
        key.sort();
        if let Some(hit) = self.extend_memo.lock().expect("memo poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let value = self.table.extend_h(args)?;
        self.extend_memo.lock().expect("memo poisoned").insert(key, value.clone());
        Ok(value)
    }

    pub fn require_identity(&self) -> Result<Elem> {
        self.one().ok_or(Error::MissingIdentity)
    }

    /// True when no nonzero element has a power equal to zero.
    pub fn is_reduced(&self) -> Result<bool> {
        let zero = self.zero_set();
        for g in 0..self.size() {
            if g != self.zero() && crate::ideal::radical_membership(self, g, &zero)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Builds a commutative ring's table pair (singleton-valued hyperaddition)
/// from binary addition and multiplication closures, with multiplication
/// lifted to arity `n` by left folding.
pub fn ring_from_ops(
    name: &str,
    labels: Vec<String>,
    m: usize,
    n: usize,
    zero: Elem,
    add: impl Fn(Elem, Elem) -> Elem,
    mul: impl Fn(Elem, Elem) -> Elem,
) -> Result<HyperringTable> {
    let size = labels.len();
    let h = HyperOpTable::from_fn(size, m, |t| {
        let s = t[1..].iter().fold(t[0], |acc, &x| add(acc, x));
        Subset::singleton(size, s)
    });
    let k = NaryOpTable::from_fn(size, n, |t| t[1..].iter().fold(t[0], |acc, &x| mul(acc, x)));
    HyperringTable::new(name, labels, h, k, zero, None)
}
