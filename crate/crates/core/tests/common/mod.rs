//! Brute-force reference implementations that share nothing with the
//! library beyond raw table lookups. They enumerate ordered tuples and
//! arbitrary subsets directly from the definitions.

#![allow(dead_code)]

use krasner::{Elem, HyperringTable};

/// Every ordered tuple of the given length.
pub fn tuples(size: usize, len: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t: Vec<Elem>| {
                (0..size).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// `k` applied to a word of length `l(n-1)+1`, folding from the left.
pub fn word(r: &HyperringTable, xs: &[Elem]) -> Elem {
    let n = r.n();
    assert_eq!((xs.len() - 1) % (n - 1), 0);
    let mut acc = xs[0];
    let mut rest = &xs[1..];
    while !rest.is_empty() {
        let mut args = vec![acc];
        args.extend_from_slice(&rest[..n - 1]);
        acc = r.k(&args);
        rest = &rest[n - 1..];
    }
    acc
}

pub fn members(mask: u64, size: usize) -> Vec<Elem> {
    (0..size).filter(|&x| mask >> x & 1 == 1).collect()
}

/// Hyperideal by the definition: contains 0, closed under h, under
/// inverses (the y with 0 ∈ h(x, y, 0, ..)), and absorbing k in every
/// position.
pub fn is_ideal(r: &HyperringTable, s: &[Elem]) -> bool {
    let size = r.size();
    let inside = |x: Elem| s.contains(&x);
    if !inside(r.zero()) {
        return false;
    }
    let m = r.m();
    for t in tuples(s.len(), m) {
        let xs: Vec<Elem> = t.iter().map(|&i| s[i]).collect();
        if !r.h(&xs).iter().all(inside) {
            return false;
        }
    }
    for &x in s {
        let inv = (0..size).find(|&y| {
            let mut args = vec![r.zero(); m];
            args[0] = x;
            args[1] = y;
            r.h(&args).contains(r.zero())
        });
        if !inv.is_some_and(inside) {
            return false;
        }
    }
    let n = r.n();
    for &x in s {
        for rest in tuples(size, n - 1) {
            for pos in 0..n {
                let mut args = rest.clone();
                args.insert(pos, x);
                if !inside(r.k(&args)) {
                    return false;
                }
            }
        }
    }
    true
}

/// All hyperideals by scanning every subset.
pub fn ideals(r: &HyperringTable) -> Vec<Vec<Elem>> {
    let size = r.size();
    assert!(size <= 16, "oracle scans all subsets");
    let mut out: Vec<Vec<Elem>> =
        (0u64..1 << size).map(|mask| members(mask, size)).filter(|s| is_ideal(r, s)).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// n-ary prime: proper, and `k(a_1..a_n) ∈ P` forces some `a_i ∈ P`.
pub fn is_prime(r: &HyperringTable, p: &[Elem]) -> bool {
    p.len() < r.size() && tuples(r.size(), r.n()).iter().all(|t| !p.contains(&r.k(t)) || t.iter().any(|x| p.contains(x)))
}

/// Elements with some power in `q`: padded powers `k(g^(s), 1^(n-s))` for
/// `s ≤ n`, and iterated powers of every length up to the carrier size.
pub fn radical(r: &HyperringTable, q: &[Elem]) -> Vec<Elem> {
    let one = r.one().expect("identity");
    let n = r.n();
    (0..r.size())
        .filter(|&g| {
            (1..=n).any(|s| {
                let mut args = vec![one; n];
                args[..s].fill(g);
                q.contains(&r.k(&args))
            }) || (1..=r.size() + 1).any(|l| q.contains(&word(r, &vec![g; l * (n - 1) + 1])))
        })
        .collect()
}

fn positions(w: usize, u: usize) -> Vec<Vec<usize>> {
    (0u64..1 << w).map(|mask| members(mask, w)).filter(|p| p.len() == u).collect()
}

/// The (weakly) (t,n)-absorbing semiprimary condition for `q` relative to
/// `target`, over every ordered tuple.
pub fn semiprimary(r: &HyperringTable, t: usize, q: &[Elem], target: &[Elem], weakly: bool) -> bool {
    if q.len() == r.size() {
        return false;
    }
    let n = r.n();
    let w = t * n - t + 1;
    let u = (t - 1) * n + 2 - t;
    let subs = positions(w, u);
    tuples(r.size(), w).iter().all(|a| {
        let full = word(r, a);
        if !q.contains(&full) || (weakly && full == r.zero()) {
            return true;
        }
        subs.iter().any(|p| {
            let picked: Vec<Elem> = p.iter().map(|&i| a[i]).collect();
            target.contains(&word(r, &picked))
        })
    })
}

/// Images of the three built-in expansions.
pub fn delta(r: &HyperringTable, name: &str, q: &[Elem]) -> Vec<Elem> {
    match name {
        "delta0" => q.to_vec(),
        "delta1" => radical(r, q),
        "deltaR" => (0..r.size()).collect(),
        _ => panic!("unknown expansion {name}"),
    }
}

pub fn labels(r: &HyperringTable, s: &[Elem]) -> Vec<String> {
    s.iter().map(|&x| r.label(x).to_string()).collect()
}
