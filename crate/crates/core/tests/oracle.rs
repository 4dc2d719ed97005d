mod common;

use krasner::classify;
use krasner::fixtures::{builtin_corpus, z12_mod_units};
use krasner::ideal;
use krasner::{Expansion, Hyperring, Subset};

const DELTAS: [&str; 3] = ["delta0", "delta1", "deltaR"];

fn corpus() -> Vec<Hyperring> {
    builtin_corpus().into_iter().map(|t| t.into_validated().unwrap()).collect()
}

fn vecs(sets: &[Subset]) -> Vec<Vec<usize>> {
    sets.iter().map(Subset::to_vec).collect()
}

/// Hyperideal counts and prime hyperideals, frozen from the subset-scanning oracle.
const LATTICES: &[(&str, usize, &[&str])] = &[
    ("z12modH", 6, &["0,3,6", "0,2,4,6"]),
    ("Z2", 2, &["0"]),
    ("Z3", 2, &["0"]),
    ("Z4", 3, &["0,2"]),
    ("Z6", 4, &["0,3", "0,2,4"]),
    ("Z8", 4, &["0,2,4,6"]),
    ("Z12", 6, &["0,3,6,9", "0,2,4,6,8,10"]),
    ("zero", 1, &[]),
    ("krasner", 2, &["0"]),
    ("sign", 2, &["0"]),
    ("z8modU", 4, &["0,2,4"]),
    ("z9modS", 3, &["0,3"]),
    ("F2xy", 6, &["0,x,y,x+y"]),
    ("Z6_m2_n3", 4, &["0,3", "0,2,4"]),
    ("Z4_m3_n2", 3, &["0,2"]),
    ("2Z8", 3, &[]),
];

#[test]
fn lattices_match_frozen_oracle_values() {
    let rings = corpus();
    assert_eq!(rings.len(), LATTICES.len());
    for (r, &(name, count, primes)) in rings.iter().zip(LATTICES) {
        assert_eq!(r.name, name);
        let brute = common::ideals(r);
        assert_eq!(brute.len(), count, "{name}");
        let got: Vec<String> = brute.iter().filter(|q| common::is_prime(r, q)).map(|q| common::labels(r, q).join(",")).collect();
        assert_eq!(got, primes, "{name}");
    }
}

#[test]
fn library_lattice_and_primes_agree_with_oracle() {
    for r in corpus() {
        let l = ideal::lattice(&r).unwrap();
        let mut lib = vecs(l.ideals());
        lib.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        assert_eq!(lib, common::ideals(&r), "{}", r.name);
        let flags = ideal::prime_flags(&r).unwrap();
        for (q, prime) in l.ideals().iter().zip(flags) {
            assert_eq!(prime, common::is_prime(&r, &q.to_vec()), "{} {}", r.name, r.display_set(q));
        }
    }
}

#[test]
fn semiprimary_verdicts_agree_with_oracle() {
    for r in corpus().into_iter().filter(|r| r.one().is_some()) {
        let l = ideal::lattice(&r).unwrap();
        for name in DELTAS {
            let d = Expansion::builtin(name, &r).unwrap();
            for q in l.ideals() {
                let qs = q.to_vec();
                let target = common::delta(&r, name, &qs);
                assert_eq!(d.apply(q).unwrap().to_vec(), target, "{} {name}", r.name);
                if q.is_full() {
                    assert!(classify::is_tn_absorbing_delta_semiprimary(&r, q, 1, &d).is_err());
                    continue;
                }
                for t in 1..=3 {
                    let strong = classify::is_tn_absorbing_delta_semiprimary(&r, q, t, &d).unwrap().verdict;
                    let weak = classify::is_weakly_tn_absorbing_delta_semiprimary(&r, q, t, &d).unwrap().verdict;
                    let ctx = format!("{} Q={} t={t} {name}", r.name, r.display_set(q));
                    assert_eq!(strong, common::semiprimary(&r, t, &qs, &target, false), "{ctx}");
                    assert_eq!(weak, common::semiprimary(&r, t, &qs, &target, true), "{ctx}");
                }
            }
        }
    }
}

/// Failing (ideal, t, expansion, weakly) configurations of the ℤ₁₂ unit quotient.
const Z12MODH_FAILURES: &[(&str, usize, &str, bool)] = &[
    ("0", 1, "delta0", false),
    ("0", 1, "delta1", false),
    ("0", 2, "delta0", false),
    ("0,4", 1, "delta0", false),
    ("0,4", 1, "delta0", true),
    ("0,6", 1, "delta0", false),
    ("0,6", 1, "delta0", true),
    ("0,6", 1, "delta1", false),
    ("0,6", 1, "delta1", true),
];

#[test]
fn z12modh_verdict_matrix() {
    let r = z12_mod_units().into_validated().unwrap();
    let mut failures = Vec::new();
    for q in ideal::lattice(&r).unwrap().ideals().iter().filter(|q| !q.is_full()) {
        for t in 1..=3 {
            for name in DELTAS {
                let d = Expansion::builtin(name, &r).unwrap();
                for weakly in [false, true] {
                    let rep = if weakly {
                        classify::is_weakly_tn_absorbing_delta_semiprimary(&r, q, t, &d)
                    } else {
                        classify::is_tn_absorbing_delta_semiprimary(&r, q, t, &d)
                    };
                    if !rep.unwrap().verdict {
                        failures.push((common::labels(&r, &q.to_vec()).join(","), t, name, weakly));
                    }
                }
            }
        }
    }
    failures.sort();
    let mut frozen: Vec<(String, usize, &str, bool)> =
        Z12MODH_FAILURES.iter().map(|&(q, t, d, w)| (q.to_string(), t, d, w)).collect();
    frozen.sort();
    assert_eq!(failures, frozen);
}

#[test]
fn failure_witnesses_replay() {
    let r = z12_mod_units().into_validated().unwrap();
    let q = r.set_of([r.zero()]);
    let d = Expansion::builtin("delta1", &r).unwrap();
    let rep = classify::is_tn_absorbing_delta_semiprimary(&r, &q, 1, &d).unwrap();
    let tuple = rep.witness.unwrap().tuple;
    assert_eq!(common::word(&r, &tuple), r.zero());
    let rad = common::radical(&r, &[r.zero()]);
    assert!(tuple.iter().all(|x| !rad.contains(x)));
}
