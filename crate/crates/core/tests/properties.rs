use krasner::classify;
use krasner::construct::build_product;
use krasner::expansion::{validate_expansion, DELTA0, DELTA1, DELTA_R};
use krasner::fixtures::{builtin_corpus, unit_quotient, zn};
use krasner::ideal;
use krasner::instance::{parse_instance, table_to_json};
use krasner::{Expansion, Hyperring, HyperringTable, Subset};
use proptest::prelude::*;

fn subset() -> impl Strategy<Value = (usize, u64, u64)> {
    (1usize..=24).prop_flat_map(|n| (Just(n), 0u64..1 << n, 0u64..1 << n))
}

fn subgroup(base: &HyperringTable, g: usize) -> Vec<usize> {
    let one = base.one().unwrap();
    let mut group = vec![one];
    let mut x = g;
    while x != one {
        group.push(x);
        x = base.k(&[x, g]);
    }
    group.sort_unstable();
    group
}

fn units(base: &HyperringTable) -> Vec<usize> {
    let one = base.one().unwrap();
    (0..base.size()).filter(|&x| (0..base.size()).any(|y| base.k(&[x, y]) == one)).collect()
}

/// Either a shipped ring with an identity, a quotient of ℤ_n by the
/// units generated by one element, or such a quotient of ℤ_a × ℤ_b.
fn ring() -> impl Strategy<Value = HyperringTable> {
    prop_oneof![
        (0usize..16).prop_map(|i| builtin_corpus().swap_remove(i)).prop_filter("identity", |t| t.one().is_some()),
        (2usize..=12, any::<prop::sample::Index>()).prop_map(|(n, pick)| {
            let base = zn(n);
            let g = *pick.get(&units(&base));
            unit_quotient(&base, &subgroup(&base, g), &format!("Z{n}/<{g}>"))
        }),
        (2usize..=4, 2usize..=3, any::<prop::sample::Index>()).prop_map(|(a, b, pick)| {
            let p = build_product(&[&zn(a), &zn(b)]).unwrap().ring.into_table();
            let g = *pick.get(&units(&p));
            unit_quotient(&p, &subgroup(&p, g), &format!("Z{a}xZ{b}/<{g}>"))
        }),
    ]
}

fn builtins(r: &Hyperring) -> Vec<Expansion> {
    [DELTA0, DELTA1, DELTA_R].iter().map(|d| Expansion::builtin(d, r).unwrap()).collect()
}

fn s(r: &Hyperring, q: &Subset, t: usize, d: &Expansion) -> bool {
    classify::is_tn_absorbing_delta_semiprimary(r, q, t, d).unwrap().verdict
}

fn w(r: &Hyperring, q: &Subset, t: usize, d: &Expansion) -> bool {
    classify::is_weakly_tn_absorbing_delta_semiprimary(r, q, t, d).unwrap().verdict
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subset_algebra((n, a, b) in subset()) {
        let x = Subset::from_mask(n, a);
        let y = Subset::from_mask(n, b);
        prop_assert_eq!(x.union(&y), y.union(&x));
        prop_assert_eq!(x.intersection(&y), y.intersection(&x));
        prop_assert!(x.intersection(&y).is_subset(&x));
        prop_assert!(x.is_subset(&x.union(&y)));
        prop_assert_eq!(x.union(&y).len() + x.intersection(&y).len(), x.len() + y.len());
        prop_assert_eq!(Subset::from_elems(n, x.to_vec()), x.clone());
        prop_assert_eq!(x.len(), a.count_ones() as usize);
        let v = x.to_vec();
        prop_assert!(v.windows(2).all(|p| p[0] < p[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_rings_validate_and_round_trip(t in ring()) {
        prop_assert!(t.validate().passed(), "{}", t.name);
        let json = table_to_json(&t);
        let back = parse_instance(&json).unwrap();
        prop_assert_eq!(table_to_json(back.ring.table()), json);
    }

    #[test]
    fn lattice_and_radical_laws(t in ring()) {
        let r = t.into_validated().unwrap();
        let l = ideal::lattice(&r).unwrap();
        for a in l.ideals() {
            for b in l.ideals() {
                prop_assert!(l.index_of(&a.intersection(b)).is_some());
            }
            let rad = ideal::radical(&r, a).unwrap();
            prop_assert!(a.is_subset(&rad));
            prop_assert_eq!(ideal::radical(&r, &rad).unwrap(), rad.clone());
            prop_assert_eq!(ideal::radical_by_powers(&r, a).unwrap(), rad);
        }
    }

    #[test]
    fn builtin_expansions_are_expansions(t in ring()) {
        let r = t.into_validated().unwrap();
        let l = ideal::lattice(&r).unwrap();
        for d in builtins(&r) {
            prop_assert!(validate_expansion(&d).verdict, "{}", d.name());
            for a in l.ideals() {
                let da = d.apply(a).unwrap();
                prop_assert!(a.is_subset(&da));
                for b in l.ideals() {
                    if a.is_subset(b) {
                        prop_assert!(da.is_subset(&d.apply(b).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn semiprimary_implications(t in ring()) {
        let r = t.into_validated().unwrap();
        let l = ideal::lattice(&r).unwrap();
        let ds = builtins(&r);
        for q in l.ideals().iter().filter(|q| !q.is_full()) {
            let prime = ideal::is_prime(&r, q).unwrap().verdict;
            for t in 1..=2 {
                for (i, d) in ds.iter().enumerate() {
                    let strong = s(&r, q, t, d);
                    prop_assert!(!strong || w(&r, q, t, d));
                    prop_assert!(!prime || strong);
                    prop_assert!(!strong || s(&r, q, t + 1, d));
                    // δ0 ≤ δ1 ≤ δR pointwise, so the condition only weakens.
                    if let Some(bigger) = ds.get(i + 1) {
                        prop_assert!(!strong || s(&r, q, t, bigger));
                    }
                }
            }
        }
    }
}
