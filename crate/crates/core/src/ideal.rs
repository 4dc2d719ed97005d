//! Hyperideals: membership tests, closures, the ideal lattice, primes,
//! primaries and radicals.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use crate::classify::{ClassificationReport, Witness};
use crate::error::{Error, Result};
use crate::ring::{for_each_multiset, Hyperring};
use crate::subset::Subset;
use crate::Elem;

/// Carriers up to this size are enumerated by filtering every subset.
pub const FILTER_LIMIT: usize = 16;
/// Largest carrier for which ideal enumeration is attempted at all.
pub const CARRIER_CAP: usize = 256;
/// Largest ideal lattice the closure search will build.
pub const LATTICE_CAP: usize = 4096;

/// Checks the three hyperideal conditions, returning the first violation.
fn first_violation(ring: &Hyperring, s: &Subset) -> Option<(String, Vec<Elem>)> {
    let zero = ring.zero();
    if !s.contains(zero) {
        return Some(("does not contain zero".into(), vec![]));
    }
    let members = s.to_vec();
    for &x in &members {
        if !s.contains(ring.neg(x)) {
            return Some((format!("inverse of {} missing", ring.label(x)), vec![x]));
        }
    }
    let mut found = None;
    for_each_multiset(members.len(), ring.m(), |idx| {
        if found.is_some() {
            return;
        }
        let t: Vec<Elem> = idx.iter().map(|&i| members[i]).collect();
        if !ring.h(&t).is_subset(s) {
            found = Some(("not closed under h".to_string(), t));
        }
    });
    if found.is_some() {
        return found;
    }
    // k is stored on sorted tuples, so one absorbing position covers all of them
    for &q in &members {
        for_each_multiset(ring.size(), ring.n() - 1, |g| {
            if found.is_some() {
                return;
            }
            let mut t = Vec::with_capacity(ring.n());
            t.push(q);
            t.extend_from_slice(g);
            if !s.contains(ring.k(&t)) {
                found = Some(("not absorbing under k".to_string(), t));
            }
        });
        if found.is_some() {
            break;
        }
    }
    found
}

pub fn is_ideal_set(ring: &Hyperring, s: &Subset) -> bool {
    first_violation(ring, s).is_none()
}

pub fn is_hyperideal(ring: &Hyperring, s: &Subset) -> Result<ClassificationReport> {
    if s.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut report = ClassificationReport::new("hyperideal");
    if let Some((detail, tuple)) = first_violation(ring, s) {
        report.fail(Witness::tuple(tuple).with_detail(detail));
    }
    Ok(report)
}

pub(crate) fn require_ideal(ring: &Hyperring, s: &Subset) -> Result<()> {
    match first_violation(ring, s) {
        None => Ok(()),
        Some((detail, tuple)) => {
            Err(Error::NotHyperideal(format!("{} {}: {detail}", ring.display_set(s), ring.display_tuple(&tuple))))
        }
    }
}

/// Least hyperideal containing `s`. Needs no scalar identity: products are
/// taken against every (n-1)-tuple of ring elements.
pub fn closure(ring: &Hyperring, s: &Subset) -> Subset {
    let mut cur = s.clone();
    cur.insert(ring.zero());
    loop {
        let before = cur.len();
        let members = cur.to_vec();
        for &q in &members {
            cur.insert(ring.neg(q));
            for_each_multiset(ring.size(), ring.n() - 1, |g| {
                let mut t = Vec::with_capacity(ring.n());
                t.push(q);
                t.extend_from_slice(g);
                cur.insert(ring.k(&t));
            });
        }
        let members = cur.to_vec();
        let mut add = ring.empty_set();
        for_each_multiset(members.len(), ring.m(), |idx| {
            let t: Vec<Elem> = idx.iter().map(|&i| members[i]).collect();
            add.union_with(ring.h(&t));
        });
        cur.union_with(&add);
        if cur.len() == before {
            return cur;
        }
    }
}

/// `<g> = {k(r, g, 1^(n-2)) : r ∈ G}`, which may fail to be closed under h
/// in a general hyperring.
pub fn principal_set(ring: &Hyperring, g: Elem) -> Result<Subset> {
    let one = ring.require_identity()?;
    let n = ring.n();
    let mut out = ring.empty_set();
    for r in 0..ring.size() {
        let mut t = vec![one; n];
        t[0] = r;
        t[1] = g;
        out.insert(ring.k(&t));
    }
    Ok(out)
}

/// The least hyperideal containing `gens`, built by closing the principal
/// products under h and inverses.
pub fn generated_ideal(ring: &Hyperring, gens: &Subset) -> Result<Subset> {
    let mut start = ring.zero_set();
    for g in gens.iter() {
        start.union_with(&principal_set(ring, g)?);
    }
    Ok(closure(ring, &start))
}

pub fn principal_ideal(ring: &Hyperring, g: Elem) -> Result<Subset> {
    generated_ideal(ring, &Subset::singleton(ring.size(), g))
}

/// Every hyperideal of a ring, sorted by size and then by member list.
#[derive(Debug)]
pub struct IdealLattice {
    ideals: Vec<Subset>,
    index: HashMap<Subset, usize>,
    primes: OnceLock<Vec<bool>>,
}

impl IdealLattice {
    fn from_ideals(mut ideals: Vec<Subset>) -> Self {
        ideals.sort();
        ideals.dedup();
        let index = ideals.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Self { ideals, index, primes: OnceLock::new() }
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn ideals(&self) -> &[Subset] {
        &self.ideals
    }

    pub fn get(&self, i: usize) -> &Subset {
        &self.ideals[i]
    }

    pub fn index_of(&self, s: &Subset) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Index of the whole ring, always the last entry.
    pub fn full_index(&self) -> usize {
        self.ideals.len() - 1
    }

    /// Index of the zero ideal, always the first entry.
    pub fn zero_index(&self) -> usize {
        0
    }

    pub fn proper(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.ideals.len()).filter(|&i| !self.ideals[i].is_full())
    }

    pub fn require(&self, ring: &Hyperring, s: &Subset) -> Result<usize> {
        match self.index_of(s) {
            Some(i) => Ok(i),
            None => {
                require_ideal(ring, s)?;
                Err(Error::Structural(format!("ideal {} missing from lattice", ring.display_set(s))))
            }
        }
    }
}

/// Filters every subset containing zero. Exponential; for small carriers.
pub fn enumerate_by_filter(ring: &Hyperring) -> Result<Vec<Subset>> {
    let n = ring.size();
    if n > FILTER_LIMIT + 4 {
        return Err(Error::CarrierCap { size: n, cap: FILTER_LIMIT + 4 });
    }
    let zero = ring.zero();
    let others: Vec<Elem> = (0..n).filter(|&x| x != zero).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << others.len()) {
        let mut s = ring.zero_set();
        for (bit, &x) in others.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                s.insert(x);
            }
        }
        if is_ideal_set(ring, &s) {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

/// Breadth-first search over joins of principal closures. Every hyperideal
/// of a finite ring is the join of the closures of its members, so this
/// reaches all of them.
pub fn enumerate_by_closure(ring: &Hyperring) -> Result<Vec<Subset>> {
    let n = ring.size();
    if n > CARRIER_CAP {
        return Err(Error::CarrierCap { size: n, cap: CARRIER_CAP });
    }
    let mut atoms: Vec<Subset> = (0..n).map(|g| closure(ring, &Subset::singleton(n, g))).collect();
    atoms.sort();
    atoms.dedup();
    let mut seen: BTreeSet<Subset> = atoms.iter().cloned().collect();
    seen.insert(ring.zero_set());
    let mut frontier: Vec<Subset> = seen.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for a in &atoms {
                if a.is_subset(s) {
                    continue;
                }
                let joined = closure(ring, &s.union(a));
                if seen.insert(joined.clone()) {
                    if seen.len() > LATTICE_CAP {
                        return Err(Error::LatticeCap { size: seen.len(), cap: LATTICE_CAP });
                    }
                    next.push(joined);
                }
            }
        }
        frontier = next;
    }
    Ok(seen.into_iter().collect())
}

pub fn enumerate_hyperideals(ring: &Hyperring) -> Result<Vec<Subset>> {
    if ring.size() <= FILTER_LIMIT {
        enumerate_by_filter(ring)
    } else {
        enumerate_by_closure(ring)
    }
}

/// The cached ideal lattice of `ring`.
pub fn lattice(ring: &Hyperring) -> Result<Arc<IdealLattice>> {
    if let Some(l) = ring.cache.lattice.get() {
        return Ok(l.clone());
    }
    let built = Arc::new(IdealLattice::from_ideals(enumerate_hyperideals(ring)?));
    Ok(ring.cache.lattice.get_or_init(|| built).clone())
}

fn prime_witness(ring: &Hyperring, p: &Subset) -> Option<Vec<Elem>> {
    let mut found = None;
    for_each_multiset(ring.size(), ring.n(), |t| {
        if found.is_none() && p.contains(ring.k(t)) && t.iter().all(|&g| !p.contains(g)) {
            found = Some(t.to_vec());
        }
    });
    found
}

pub fn is_prime(ring: &Hyperring, p: &Subset) -> Result<ClassificationReport> {
    require_ideal(ring, p)?;
    if p.is_full() {
        return Err(Error::NotProper);
    }
    let mut report = ClassificationReport::new("prime");
    if let Some(t) = prime_witness(ring, p) {
        report.fail(Witness::tuple(t).with_detail("product in P, no factor in P"));
    }
    Ok(report)
}

/// Prime flags for every lattice entry (the whole ring is never prime).
pub fn prime_flags(ring: &Hyperring) -> Result<Vec<bool>> {
    let l = lattice(ring)?;
    Ok(l.primes
        .get_or_init(|| l.ideals().iter().map(|p| !p.is_full() && prime_witness(ring, p).is_none()).collect())
        .clone())
}

/// Intersection of the prime hyperideals containing `i`, or the whole ring
/// when there are none.
pub fn radical(ring: &Hyperring, i: &Subset) -> Result<Subset> {
    let l = lattice(ring)?;
    l.require(ring, i)?;
    let flags = prime_flags(ring)?;
    let mut out = ring.full_set();
    for (p, &prime) in l.ideals().iter().zip(&flags) {
        if prime && i.is_subset(p) {
            out.intersect_with(p);
        }
    }
    Ok(out)
}

/// Lattice index of the radical of each lattice entry.
pub fn radical_indices(ring: &Hyperring) -> Result<Vec<usize>> {
    if let Some(r) = ring.cache.radicals.get() {
        return Ok(r.clone());
    }
    let l = lattice(ring)?;
    let mut out = Vec::with_capacity(l.len());
    for i in l.ideals() {
        let r = radical(ring, i)?;
        out.push(l.index_of(&r).ok_or_else(|| Error::Structural("radical is not a lattice member".into()))?);
    }
    Ok(ring.cache.radicals.get_or_init(|| out).clone())
}

/// Whether some power of `g` lies in `i`: a padded power `k(g^(s), 1^(n-s))`
/// for `s <= n`, or an iterated power `k_(l)(g^(s))` with `s = l(n-1)+1`.
/// The iterated powers are followed until they repeat.
pub fn radical_membership(ring: &Hyperring, g: Elem, i: &Subset) -> Result<bool> {
    let one = ring.require_identity()?;
    let n = ring.n();
    for s in 1..=n {
        let mut args = vec![one; n];
        args[..s].fill(g);
        if i.contains(ring.k(&args)) {
            return Ok(true);
        }
    }
    let mut seen = ring.empty_set();
    let mut p = g;
    let mut args = vec![g; n];
    while seen.insert(p) {
        if i.contains(p) {
            return Ok(true);
        }
        args[0] = p;
        p = ring.k(&args);
    }
    Ok(false)
}

pub fn radical_by_powers(ring: &Hyperring, i: &Subset) -> Result<Subset> {
    let mut out = ring.empty_set();
    for g in 0..ring.size() {
        if radical_membership(ring, g, i)? {
            out.insert(g);
        }
    }
    Ok(out)
}

/// Primary test: whenever `k(g_1..g_n) ∈ I`, every position `i` with
/// `g_i ∉ I` has `k(g_1..g_{i-1}, 1, g_{i+1}..g_n) ∈ rad(I)`.
pub fn is_primary(ring: &Hyperring, i: &Subset) -> Result<ClassificationReport> {
    let one = ring.require_identity()?;
    require_ideal(ring, i)?;
    if i.is_full() {
        return Err(Error::NotProper);
    }
    let rad = radical(ring, i)?;
    let mut report = ClassificationReport::new("primary");
    let mut found = None;
    for_each_multiset(ring.size(), ring.n(), |t| {
        if found.is_some() || !i.contains(ring.k(t)) {
            return;
        }
        for pos in 0..t.len() {
            if i.contains(t[pos]) {
                continue;
            }
            let mut rest = t.to_vec();
            rest[pos] = one;
            if !rad.contains(ring.k(&rest)) {
                found = Some((t.to_vec(), pos));
                return;
            }
        }
    });
    if let Some((t, pos)) = found {
        report.fail(Witness::tuple(t).with_detail(format!("position {pos}: cofactor outside rad(I)")));
    }
    Ok(report)
}

/// Elementwise product set `{k_(l)(q_1..q_s) : q_i ∈ Q_i}`.
pub fn ideal_product(ring: &Hyperring, ideals: &[Subset]) -> Result<Subset> {
    ring.iterated_k_set(ideals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn labels(r: &Hyperring, s: &Subset) -> Vec<String> {
        s.iter().map(|e| r.label(e).to_string()).collect()
    }

    fn set(r: &Hyperring, ls: &[&str]) -> Subset {
        r.set_of(ls.iter().map(|l| r.elem(l).unwrap()))
    }

    #[test]
    fn membership_examples() {
        let r = fixtures::z12_mod_units().into_validated().unwrap();
        assert!(is_hyperideal(&r, &set(&r, &["0", "2", "4", "6"])).unwrap().verdict);
        assert!(is_hyperideal(&r, &r.zero_set()).unwrap().verdict);
        let bad = is_hyperideal(&r, &set(&r, &["0", "3"])).unwrap();
        assert!(!bad.verdict);
        let w = bad.witness.unwrap();
        assert!(!r.h(&w.tuple).is_subset(&set(&r, &["0", "3"])));
        assert!(matches!(is_hyperideal(&r, &r.empty_set()), Err(Error::EmptySubset)));
    }

    #[test]
    fn generated_examples() {
        let r = fixtures::z12_mod_units().into_validated().unwrap();
        assert_eq!(labels(&r, &generated_ideal(&r, &set(&r, &["6"])).unwrap()), ["0", "6"]);
        assert_eq!(generated_ideal(&r, &r.zero_set()).unwrap(), r.zero_set());
        assert!(generated_ideal(&r, &set(&r, &["1"])).unwrap().is_full());
        let rng = fixtures::even_z8().into_validated().unwrap();
        assert!(matches!(generated_ideal(&rng, &rng.zero_set()), Err(Error::MissingIdentity)));
    }

    #[test]
    fn lattice_of_z4_and_zero_ring() {
        let r = fixtures::zn(4).into_validated().unwrap();
        let l = enumerate_hyperideals(&r).unwrap();
        let got: Vec<Vec<Elem>> = l.iter().map(Subset::to_vec).collect();
        assert_eq!(got, vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]);
        let z = fixtures::zero_ring().into_validated().unwrap();
        assert_eq!(enumerate_hyperideals(&z).unwrap().len(), 1);
    }

    #[test]
    fn both_enumeration_paths_agree() {
        for t in fixtures::builtin_corpus() {
            let r = t.into_validated().unwrap();
            assert_eq!(enumerate_by_filter(&r).unwrap(), enumerate_by_closure(&r).unwrap(), "{}", r.name);
        }
    }

    #[test]
    fn prime_examples() {
        let z4 = fixtures::zn(4).into_validated().unwrap();
        assert!(is_prime(&z4, &z4.set_of([0, 2])).unwrap().verdict);
        let rep = is_prime(&z4, &z4.zero_set()).unwrap();
        assert_eq!(rep.witness.unwrap().tuple, vec![2, 2]);
        assert!(matches!(is_prime(&z4, &z4.full_set()), Err(Error::NotProper)));
        let r = fixtures::z12_mod_units().into_validated().unwrap();
        assert!(is_prime(&r, &set(&r, &["0", "2", "4", "6"])).unwrap().verdict);
    }

    #[test]
    fn primary_examples() {
        let z4 = fixtures::zn(4).into_validated().unwrap();
        assert!(is_primary(&z4, &z4.zero_set()).unwrap().verdict);
        let z12 = fixtures::zn(12).into_validated().unwrap();
        let rep = is_primary(&z12, &z12.set_of([0, 6])).unwrap();
        assert!(!rep.verdict);
        assert_eq!(rep.witness.unwrap().tuple, vec![2, 3]);
    }

    #[test]
    fn radical_examples() {
        let z4 = fixtures::zn(4).into_validated().unwrap();
        assert_eq!(radical(&z4, &z4.zero_set()).unwrap().to_vec(), vec![0, 2]);
        let r = fixtures::z12_mod_units().into_validated().unwrap();
        let e = |l: &str| r.elem(l).unwrap();
        assert!(radical_membership(&r, e("6"), &r.zero_set()).unwrap());
        assert!(!radical_membership(&r, e("2"), &r.zero_set()).unwrap());
        let rng = fixtures::even_z8().into_validated().unwrap();
        assert!(matches!(radical_by_powers(&rng, &rng.zero_set()), Err(Error::MissingIdentity)));
        assert!(radical(&rng, &rng.zero_set()).unwrap().is_full());
    }

    #[test]
    fn products() {
        let z4 = fixtures::zn(4).into_validated().unwrap();
        let q = z4.set_of([0, 2]);
        assert_eq!(ideal_product(&z4, &[q.clone(), q.clone(), q.clone()]).unwrap(), z4.zero_set());
        assert_eq!(ideal_product(&z4, &[q.clone(), z4.zero_set(), z4.full_set()]).unwrap(), z4.zero_set());
        assert!(ideal_product(&z4, &[q.clone(), q]).is_ok());
        assert!(matches!(ideal_product(&z4, &[]), Err(Error::InadmissibleLength { .. })));
    }
}
