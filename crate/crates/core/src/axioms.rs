//! Axiom checks for canonical m-ary hypergroups and Krasner (m,n)-hyperrings.
//!
//! Each check is exhaustive over the finite carrier. A failing check carries
//! the offending tuple and the two evaluations that differ, so it can be
//! replayed through [`HyperringTable::h`], [`HyperringTable::extend_h`] and
//! [`HyperringTable::k`].

use std::fmt;

use serde::Serialize;
use smallvec::SmallVec;

use crate::ring::{for_each_tuple, HyperringTable};
use crate::subset::Subset;
use crate::Elem;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomWitness {
    pub tuple: Vec<Elem>,
    /// Nesting position, argument position or element under test, when relevant.
    pub position: Option<usize>,
    pub left: Vec<Elem>,
    pub right: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<AxiomWitness>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: &'static str, witness: Option<AxiomWitness>) {
        self.checks.push(AxiomCheck { name, passed: witness.is_none(), witness });
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{:<28} {}", c.name, if c.passed { "pass" } else { "FAIL" })?;
            if let Some(w) = &c.witness {
                write!(f, "  tuple={:?}", w.tuple)?;
                if let Some(p) = w.position {
                    write!(f, " position={p}")?;
                }
                write!(f, " left={:?} right={:?}", w.left, w.right)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn witness(tuple: &[Elem], position: Option<usize>, left: &Subset, right: &Subset) -> AxiomWitness {
    AxiomWitness { tuple: tuple.to_vec(), position, left: left.to_vec(), right: right.to_vec() }
}

/// Finds the first tuple where `f` reports a mismatch.
fn first_failure(
    carrier: usize,
    arity: usize,
    mut f: impl FnMut(&[Elem]) -> Option<AxiomWitness>,
) -> Option<AxiomWitness> {
    let mut found = None;
    for_each_tuple(carrier, arity, |t| {
        if found.is_none() {
            found = f(t);
        }
    });
    found
}

/// The element `y` with `0 ∈ h(x, y, 0^(m-2))`, when exactly one exists.
pub fn inverse_of(ring: &HyperringTable, x: Elem) -> Option<Elem> {
    let candidates = inverse_candidates(ring, x);
    (candidates.len() == 1).then(|| candidates[0])
}

fn inverse_candidates(ring: &HyperringTable, x: Elem) -> Vec<Elem> {
    let m = ring.m();
    let mut args: SmallVec<[Elem; 8]> = SmallVec::from_elem(ring.zero(), m);
    args[0] = x;
    (0..ring.size())
        .filter(|&y| {
            args[1] = y;
            ring.h(&args).contains(ring.zero())
        })
        .collect()
}

fn singleton(ring: &HyperringTable, x: Elem) -> Subset {
    Subset::singleton(ring.size(), x)
}

/// Evaluates `h` with the inner hyperoperation nested at argument `pos` of
/// the outer one, for a `(2m-1)`-tuple.
fn nested_h(ring: &HyperringTable, t: &[Elem], pos: usize) -> Subset {
    let m = ring.m();
    let inner = ring.h(&t[pos..pos + m]).clone();
    let mut args: Vec<Subset> = Vec::with_capacity(m);
    args.extend(t[..pos].iter().map(|&x| singleton(ring, x)));
    args.push(inner);
    args.extend(t[pos + m..].iter().map(|&x| singleton(ring, x)));
    ring.extend_h(&args).expect("arity and nonempty arguments hold")
}

fn nested_k(ring: &HyperringTable, t: &[Elem], pos: usize) -> Elem {
    let n = ring.n();
    let inner = ring.k(&t[pos..pos + n]);
    let mut args: SmallVec<[Elem; 8]> = SmallVec::new();
    args.extend_from_slice(&t[..pos]);
    args.push(inner);
    args.extend_from_slice(&t[pos + n..]);
    ring.k(&args)
}

/// Canonical m-ary hypergroup axioms, each reported under its own name.
pub fn validate_canonical_hypergroup(ring: &HyperringTable) -> AxiomReport {
    let n = ring.size();
    let m = ring.m();
    let zero = ring.zero();
    let mut report = AxiomReport::default();

    // Tables are keyed by sorted tuples, so every permutation reads the same
    // entry; the check still goes through the public lookup.
    let comm = first_failure(n, m, |t| {
        let base = ring.h(t);
        let mut rev: Vec<Elem> = t.to_vec();
        rev.reverse();
        let other = ring.h(&rev);
        (base != other).then(|| witness(t, None, base, other))
    });
    report.push("h-commutativity", comm);

    let assoc = first_failure(n, 2 * m - 1, |t| {
        let first = nested_h(ring, t, 0);
        (1..m).find_map(|pos| {
            let other = nested_h(ring, t, pos);
            (other != first).then(|| witness(t, Some(pos), &first, &other))
        })
    });
    report.push("h-associativity", assoc);

    let neutral = (0..n).find_map(|x| {
        let mut args = vec![zero; m];
        args[0] = x;
        let got = ring.h(&args);
        (*got != singleton(ring, x)).then(|| witness(&args, None, got, &singleton(ring, x)))
    });
    report.push("h-neutral-zero", neutral);

    let inverses = (0..n).find_map(|x| {
        let c = inverse_candidates(ring, x);
        (c.len() != 1).then(|| AxiomWitness { tuple: vec![x], position: None, left: c, right: vec![] })
    });
    let has_inverses = inverses.is_none();
    report.push("h-unique-inverse", inverses);

    let reversibility = if has_inverses {
        let neg: Vec<Elem> = (0..n).map(|x| inverse_of(ring, x).expect("checked")).collect();
        first_failure(n, m, |t| {
            for y in ring.h(t).iter() {
                for i in 0..m {
                    let mut args: Vec<Elem> = Vec::with_capacity(m);
                    args.push(y);
                    args.extend(t.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| neg[x]));
                    let back = ring.h(&args);
                    if !back.contains(t[i]) {
                        return Some(AxiomWitness {
                            tuple: t.to_vec(),
                            position: Some(i),
                            left: vec![y],
                            right: back.to_vec(),
                        });
                    }
                }
            }
            None
        })
    } else {
        Some(AxiomWitness { tuple: vec![], position: None, left: vec![], right: vec![] })
    };
    report.push("h-reversibility", reversibility);
    report
}

/// Every Krasner (m,n)-hyperring axiom, plus the scalar identity when declared.
pub fn validate_krasner(ring: &HyperringTable) -> AxiomReport {
    let mut report = validate_canonical_hypergroup(ring);
    let n = ring.size();
    let na = ring.n();
    let m = ring.m();
    let zero = ring.zero();

    let comm = first_failure(n, na, |t| {
        let mut rev = t.to_vec();
        rev.reverse();
        let (a, b) = (ring.k(t), ring.k(&rev));
        (a != b).then(|| witness(t, None, &singleton(ring, a), &singleton(ring, b)))
    });
    report.push("k-commutativity", comm);

    let assoc = first_failure(n, 2 * na - 1, |t| {
        let first = nested_k(ring, t, 0);
        (1..na).find_map(|pos| {
            let other = nested_k(ring, t, pos);
            (other != first)
                .then(|| witness(t, Some(pos), &singleton(ring, first), &singleton(ring, other)))
        })
    });
    report.push("k-associativity", assoc);

    // k(g_1..g_{i-1}, h(x_1..x_m), g_{i+1}..g_n) against h(k(.., x_1, ..), .., k(.., x_m, ..)).
    // The tuple is g (n-1 entries) followed by x (m entries).
    let distributive = first_failure(n, na - 1 + m, |t| {
        let (g, x) = t.split_at(na - 1);
        let sum = ring.h(x);
        for pos in 0..na {
            let with = |v: Elem| {
                let mut args: SmallVec<[Elem; 8]> = SmallVec::new();
                args.extend_from_slice(&g[..pos]);
                args.push(v);
                args.extend_from_slice(&g[pos..]);
                ring.k(&args)
            };
            let left: Subset = Subset::from_elems(n, sum.iter().map(with));
            let prods: Vec<Elem> = x.iter().map(|&v| with(v)).collect();
            let right = ring.h(&prods);
            if left != *right {
                return Some(witness(t, Some(pos), &left, right));
            }
        }
        None
    });
    report.push("distributivity", distributive);

    let absorbing = first_failure(n, na - 1, |g| {
        (0..na).find_map(|pos| {
            let mut args: SmallVec<[Elem; 8]> = SmallVec::new();
            args.extend_from_slice(&g[..pos]);
            args.push(zero);
            args.extend_from_slice(&g[pos..]);
            let v = ring.k(&args);
            (v != zero).then(|| witness(&args, Some(pos), &singleton(ring, v), &singleton(ring, zero)))
        })
    });
    report.push("zero-absorption", absorbing);

    if let Some(one) = ring.one() {
        let unit = (0..n).find_map(|g| {
            let mut args = vec![one; na];
            args[0] = g;
            let v = ring.k(&args);
            (v != g).then(|| witness(&args, None, &singleton(ring, v), &singleton(ring, g)))
        });
        report.push("scalar-identity", unit);
    }
    report
}
