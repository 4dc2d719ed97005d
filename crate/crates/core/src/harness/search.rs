//! Seeded generation of small random hyperrings for the counterexample
//! search. Candidates come from three generators: quotients of ℤ_n by a
//! random group of units, the same over ℤ_a × ℤ_b, and raw random tables
//! on two or three elements filtered by the axiom checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::CorpusRing;
use crate::construct::build_product;
use crate::fixtures::{unit_quotient, zn};
use crate::ring::{for_each_multiset, HyperOpTable, HyperringTable, NaryOpTable};
use crate::subset::Subset;
use crate::Elem;

/// Largest carrier kept by the search.
pub const MAX_SEARCH_SIZE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    pub seed: u64,
    pub budget: usize,
    /// Candidates produced; every one counts against the budget.
    pub generated: usize,
    pub valid: usize,
    /// Candidates failing the axioms or over the size limit.
    pub rejected: usize,
    pub rings: Vec<String>,
}

/// Generates `budget` candidates and keeps the valid ones of size at most
/// `max_size`. Deterministic in `seed`.
pub fn generate(seed: u64, budget: usize, max_size: usize) -> (SearchSummary, Vec<CorpusRing>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Vec::new();
    let mut summary = SearchSummary { seed, budget, generated: 0, valid: 0, rejected: 0, rings: vec![] };
    for i in 0..budget {
        summary.generated += 1;
        let candidate = match rng.gen_range(0..3) {
            0 => cyclic_unit_quotient(&mut rng),
            1 => product_unit_quotient(&mut rng),
            _ => Some(raw_table(&mut rng)),
        };
        let valid = candidate
            .filter(|t| t.size() <= max_size)
            .and_then(|mut t| {
                t.name = format!("search{i:04}-{}", t.name);
                t.into_validated().ok()
            });
        match valid {
            Some(r) => {
                summary.valid += 1;
                summary.rings.push(r.name.clone());
                found.push(CorpusRing::builtin(r));
            }
            None => summary.rejected += 1,
        }
    }
    (summary, found)
}

fn units(base: &HyperringTable) -> Vec<Elem> {
    let one = base.one().expect("base has an identity");
    (0..base.size()).filter(|&x| (0..base.size()).any(|y| base.k(&[x, y]) == one)).collect()
}

/// Closure of the generators under the binary product.
fn subgroup(base: &HyperringTable, gens: &[Elem]) -> Vec<Elem> {
    let one = base.one().expect("base has an identity");
    let mut group = vec![one];
    let mut i = 0;
    while i < group.len() {
        for &g in gens {
            let next = base.k(&[group[i], g]);
            if !group.contains(&next) {
                group.push(next);
            }
        }
        i += 1;
    }
    group.sort_unstable();
    group
}

fn random_quotient(rng: &mut ChaCha8Rng, base: &HyperringTable, label: &str) -> Option<HyperringTable> {
    let us = units(base);
    let count = rng.gen_range(1..=2);
    let gens: Vec<Elem> = us.choose_multiple(rng, count).copied().collect();
    let group = subgroup(base, &gens);
    let names: Vec<&str> = group.iter().map(|&g| base.label(g)).collect();
    Some(unit_quotient(base, &group, &format!("{label}/<{}>", names.join(","))))
}

fn cyclic_unit_quotient(rng: &mut ChaCha8Rng) -> Option<HyperringTable> {
    let n = rng.gen_range(2..=16);
    random_quotient(rng, &zn(n), &format!("Z{n}"))
}

fn product_unit_quotient(rng: &mut ChaCha8Rng) -> Option<HyperringTable> {
    let a = rng.gen_range(2..=5);
    let b = rng.gen_range(2..=5);
    let p = build_product(&[&zn(a), &zn(b)]).ok()?;
    random_quotient(rng, p.ring.table(), &format!("Z{a}xZ{b}"))
}

/// Random commutative tables on two or three elements with `0` neutral for
/// the hyperoperation and absorbing for the product, and `1` a two-sided
/// identity for the product.
fn raw_table(rng: &mut ChaCha8Rng) -> HyperringTable {
    let size = rng.gen_range(2..=3);
    let mut h_vals = std::collections::HashMap::new();
    for_each_multiset(size, 2, |t| {
        let v = if t[0] == 0 {
            Subset::singleton(size, t[1])
        } else {
            let mask = rng.gen_range(1u64..(1 << size));
            Subset::from_mask(size, mask)
        };
        h_vals.insert(t.to_vec(), v);
    });
    let mut k_vals = std::collections::HashMap::new();
    for_each_multiset(size, 2, |t| {
        let v = match t {
            [0, _] => 0,
            [1, x] => *x,
            _ => rng.gen_range(0..size),
        };
        k_vals.insert(t.to_vec(), v);
    });
    let h = HyperOpTable::from_fn(size, 2, |t| h_vals[t].clone());
    let k = NaryOpTable::from_fn(size, 2, |t| k_vals[t]);
    let labels = (0..size).map(|x| x.to_string()).collect();
    HyperringTable::new(format!("raw{size}"), labels, h, k, 0, Some(1)).expect("well-formed tables")
}
