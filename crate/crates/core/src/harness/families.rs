use super::context::{Ctx, Tallies};
use super::*;
use crate::classify::{self, combinations, AbsorbingParams};
use crate::construct::{build_product, build_quotient, enumerate_subhyperrings, Homomorphism, ProductRing, SUBRING_CAP};
use crate::expansion::{has_p_property, is_intersection_preserving, product_expansion, quotient_expansion};
use crate::ideal;
use crate::ring::{for_each_multiset, HyperringTable};
use crate::subset::Subset;
use crate::Elem;

const WEAKLY: [bool; 2] = [false, true];

fn label(weakly: bool) -> &'static str {
    if weakly {
        " weakly"
    } else {
        ""
    }
}

/// Radical, principal, intersection, monotonicity and descent results.
pub(super) fn lattice_level(c: &Ctx<'_>, out: &mut Tallies, _: &mut Vec<StrictnessWitness>) {
    radical(c, out);
    principal(c, out);
    intersection(c, out);
    for &t in &c.ts {
        for d in &c.deltas {
            for q in c.proper() {
                let dq = c.img(d, q);
                for weakly in WEAKLY {
                    let cfg = || format!("{}{}", c.config(t, d, q), label(weakly));
                    if c.has_t(t + 1) {
                        out.get(THM_T_MONOTONE).judge(
                            c.ring,
                            c.semi(t, q, &dq, weakly),
                            || c.semi(t + 1, q, &dq, weakly),
                            cfg,
                            || c.why(t + 1, q, &dq, weakly),
                        );
                    }
                    out.get(THM_DELTA_ABSORBING).judge(
                        c.ring,
                        c.absorbing(t, &dq, weakly),
                        || c.semi(t, q, &dq, weakly),
                        cfg,
                        || c.why(t, q, &dq, weakly),
                    );
                    let ddq = c.img(d, &dq);
                    out.get(THM_IDEMPOTENT).judge(
                        c.ring,
                        ddq == dq && !dq.is_full(),
                        || c.absorbing(t, &dq, weakly) == c.semi(t, &dq, &ddq, weakly),
                        cfg,
                        || "absorbing and semiprimary verdicts differ".into(),
                    );
                    for p in c.proper() {
                        if !p.is_subset(q) {
                            continue;
                        }
                        let dp = c.img(d, p);
                        out.get(THM_DESCENT).judge(
                            c.ring,
                            dp == dq && c.semi(t, q, &dq, weakly),
                            || c.semi(t, p, &dp, weakly),
                            || format!("{} P={}", cfg(), c.show(p)),
                            || c.why(t, p, &dp, weakly),
                        );
                    }
                }
            }
        }
    }
}

fn radical(c: &Ctx<'_>, out: &mut Tallies) {
    for &t in &c.ts {
        for q in c.proper() {
            let rq = c.rad(q);
            for d in &c.deltas {
                let dq = c.img(d, q);
                let drq = c.img(d, &rq);
                out.get(THM_RADICAL).judge(
                    c.ring,
                    c.semi(t, q, &dq, false) && c.rad(&dq).is_subset(&drq),
                    || c.semi(t, &rq, &drq, false),
                    || c.config(t, d, q),
                    || c.why(t, &rq, &drq, false),
                );
            }
            out.get(THM_RADICAL_DELTA1).judge(
                c.ring,
                c.semi(t, q, &rq, false),
                || c.absorbing(t, &rq, false),
                || format!("t={t} Q={}", c.show(q)),
                || c.why(t, &rq, &rq, false),
            );
        }
    }
}

fn principal(c: &Ctx<'_>, out: &mut Tallies) {
    let mut principals: Vec<Subset> = (0..c.ring.size())
        .map(|g| ideal::principal_ideal(c.ring, g).expect("ring has an identity"))
        .filter(|p| !p.is_full())
        .collect();
    principals.sort();
    principals.dedup();
    for &t in &c.ts {
        for d in &c.deltas {
            let all = c.proper().into_iter().all(|q| c.s(t, d, q));
            let all_principal = principals.iter().all(|q| c.s(t, d, q));
            out.get(THM_PRINCIPAL).judge(
                c.ring,
                true,
                || all == all_principal,
                || format!("t={t} delta={}", d.name()),
                || format!("all proper: {all}, all principal: {all_principal}"),
            );
        }
    }
}

fn intersection(c: &Ctx<'_>, out: &mut Tallies) {
    let proper = c.proper();
    for d in &c.deltas {
        if !is_intersection_preserving(d).map(|r| r.verdict).unwrap_or(false) {
            continue;
        }
        for &t in &c.ts {
            let good: Vec<bool> = proper.iter().map(|q| c.s(t, d, q)).collect();
            for size in 2..=3 {
                for combo in combinations(proper.len(), size) {
                    let p = c.img(d, proper[combo[0]]);
                    let hyp = combo.iter().all(|&i| good[i] && c.img(d, proper[i]) == p);
                    let mut meet = proper[combo[0]].clone();
                    for &i in &combo[1..] {
                        meet.intersect_with(proper[i]);
                    }
                    let names: Vec<String> = combo.iter().map(|&i| c.show(proper[i])).collect();
                    out.get(THM_INTERSECTION).judge(
                        c.ring,
                        hyp,
                        || c.semi(t, &meet, &p, false) && c.img(d, &meet) == p,
                        || format!("t={t} delta={} family {}", d.name(), names.join(" ")),
                        || format!("intersection {} with image {}", c.show(&meet), c.show(&c.img(d, &meet))),
                    );
                }
            }
        }
    }
}

/// Whether the product over some `u`-subset of positions, containing at
/// least one position from `required` (all positions when `None`), lies in
/// `target`.
fn some_sub_product_in(c: &Ctx<'_>, sets: &[Subset], u: usize, target: &Subset, required: Option<usize>) -> bool {
    combinations(sets.len(), u).into_iter().any(|pos| {
        if let Some(first) = required {
            if pos.iter().all(|&p| p < first) {
                return false;
            }
        }
        let picked: Vec<Subset> = pos.iter().map(|&p| sets[p].clone()).collect();
        c.prod(&picked).is_subset(target)
    })
}

/// Structure results for δ-zeros: the (2,2) forms on (m,2)-hyperrings and
/// the general (t,n) forms.
pub(super) fn structure(c: &Ctx<'_>, out: &mut Tallies, _: &mut Vec<StrictnessWitness>) {
    if c.ring.n() == 2 && c.has_t(2) {
        str22(c, out);
    }
    str_general(c, out);
    azad(c, out);
}

fn str22(c: &Ctx<'_>, out: &mut Tallies) {
    let all = c.ideals();
    let proper = c.proper();
    for d in &c.deltas {
        for q in c.proper() {
            if !c.w(2, d, q) {
                out.get(THM_STR).miss();
                out.get(THM_STR2).miss();
                out.get(THM_STR3).miss();
                continue;
            }
            let dq = c.img(d, q);
            let base = c.config(2, d, q);
            let pairs = {
                let tally = out.get(THM_STR);
                c.element_tuples(2, 1, tally)
            };
            for q1 in all {
                for xy in &pairs {
                    let (x, y) = (c.singleton(xy[0]), c.singleton(xy[1]));
                    let sets = [q1.clone(), x.clone(), y.clone()];
                    let xy_prod = c.ring.k(&[xy[0], xy[1]]);
                    let hyp = c.prod(&sets).is_subset(q) && !dq.contains(xy_prod) && !c.zero_choice(2, &dq, &sets);
                    out.get(THM_STR).judge(
                        c.ring,
                        hyp,
                        || c.prod(&[q1.clone(), x.clone()]).is_subset(&dq) || c.prod(&[q1.clone(), y.clone()]).is_subset(&dq),
                        || format!("{base} Q1={} x={} y={}", c.show(q1), c.ring.label(xy[0]), c.ring.label(xy[1])),
                        || "neither k(Q1,x) nor k(Q1,y) lies in delta(Q)".into(),
                    );
                }
            }
            let singles = {
                let tally = out.get(THM_STR2);
                c.element_tuples(1, 2, tally)
            };
            for (i, q1) in all.iter().enumerate() {
                for q2 in &all[i..] {
                    for x in &singles {
                        let xs = c.singleton(x[0]);
                        let sets = [q1.clone(), q2.clone(), xs.clone()];
                        let hyp = c.prod(&sets).is_subset(q) && !c.zero_choice(2, &dq, &sets);
                        out.get(THM_STR2).judge(
                            c.ring,
                            hyp,
                            || {
                                c.prod(&[q1.clone(), xs.clone()]).is_subset(&dq)
                                    || c.prod(&[q2.clone(), xs.clone()]).is_subset(&dq)
                                    || c.prod(&[q1.clone(), q2.clone()]).is_subset(&dq)
                            },
                            || format!("{base} Q1={} Q2={} x={}", c.show(q1), c.show(q2), c.ring.label(x[0])),
                            || "no pairwise product lies in delta(Q)".into(),
                        );
                    }
                }
            }
            for_each_multiset(proper.len(), 3, |idx| {
                let sets: Vec<Subset> = idx.iter().map(|&i| proper[i].clone()).collect();
                let p = c.prod(&sets);
                let hyp = p != c.ring.zero_set() && p.is_subset(q) && !c.zero_choice(2, &dq, &sets);
                out.get(THM_STR3).judge(
                    c.ring,
                    hyp,
                    || some_sub_product_in(c, &sets, 2, &dq, None),
                    || {
                        let names: Vec<String> = sets.iter().map(|s| c.show(s)).collect();
                        format!("{base} Q_i {}", names.join(" "))
                    },
                    || "no pairwise product lies in delta(Q)".into(),
                );
            });
        }
    }
}

fn str_general(c: &Ctx<'_>, out: &mut Tallies) {
    let all = c.ideals();
    for &t in &c.ts {
        let p = c.params(t);
        for d in &c.deltas {
            for q in c.proper() {
                if !c.w(t, d, q) {
                    out.get(THM_STR4).miss();
                    continue;
                }
                let dq = c.img(d, q);
                for s in 1..=p.u {
                    let elems = c.element_tuples(p.w - s, 100 + s as u64, out.get(THM_STR4));
                    for es in &elems {
                        for_each_multiset(all.len(), s, |idx| {
                            let mut sets: Vec<Subset> = es.iter().map(|&e| c.singleton(e)).collect();
                            sets.extend(idx.iter().map(|&i| all[i].clone()));
                            let hyp = c.prod(&sets).is_subset(q) && !c.zero_choice(t, &dq, &sets);
                            out.get(THM_STR4).judge(
                                c.ring,
                                hyp,
                                || some_sub_product_in(c, &sets, p.u, &dq, Some(p.w - s)),
                                || {
                                    let names: Vec<String> = idx.iter().map(|&i| c.show(&all[i])).collect();
                                    format!("{} a={} Q_i {}", c.config(t, d, q), c.ring.display_tuple(es), names.join(" "))
                                },
                                || "no product of u terms including some Q_i lies in delta(Q)".into(),
                            );
                        });
                    }
                }
            }
        }
    }
}

fn azad(c: &Ctx<'_>, out: &mut Tallies) {
    let proper = c.proper();
    let zero = c.ring.zero_set();
    for &t in &c.ts {
        let p = c.params(t);
        for d in &c.deltas {
            for q in c.proper() {
                if !c.w(t, d, q) {
                    out.get(THM_AZAD).miss();
                    continue;
                }
                let dq = c.img(d, q);
                for_each_multiset(proper.len(), p.w, |idx| {
                    let sets: Vec<Subset> = idx.iter().map(|&i| proper[i].clone()).collect();
                    let prod = c.prod(&sets);
                    let hyp = prod != zero && prod.is_subset(q) && !c.zero_choice(t, &dq, &sets);
                    out.get(THM_AZAD).judge(
                        c.ring,
                        hyp,
                        || some_sub_product_in(c, &sets, p.u, &dq, None),
                        || {
                            let names: Vec<String> = sets.iter().map(|s| c.show(s)).collect();
                            format!("{} Q_i {}", c.config(t, d, q), names.join(" "))
                        },
                        || "no product of u of the Q_i lies in delta(Q)".into(),
                    );
                });
            }
        }
    }
}

/// First zero tuple and positions where replacing by `Q` leaves a nonzero
/// product.
fn annihilation_failure(c: &Ctx<'_>, t: usize, q: &Subset, zeros: &[Vec<Elem>]) -> Option<String> {
    let p = c.params(t);
    let zero = c.ring.zero_set();
    for z in zeros {
        for s in 1..=p.u {
            for pos in combinations(p.w, s) {
                let sets: Vec<Subset> =
                    (0..p.w).map(|i| if pos.contains(&i) { q.clone() } else { c.singleton(z[i]) }).collect();
                let prod = c.prod(&sets);
                if prod != zero {
                    return Some(format!(
                        "zero {} with positions {:?} replaced gives {}",
                        c.ring.display_tuple(z),
                        pos,
                        c.show(&prod)
                    ));
                }
            }
        }
    }
    None
}

/// Results about δ-zeros and the gap between the weakly and plain forms.
pub(super) fn zeros(c: &Ctx<'_>, out: &mut Tallies, _: &mut Vec<StrictnessWitness>) {
    let zero = c.ring.zero_set();
    let rad0 = c.rad(&zero);
    let reduced = c.ring.is_reduced().expect("ring has an identity");
    for &t in &c.ts {
        let p = c.params(t);
        let is22 = c.ring.n() == 2 && t == 2;
        for d in &c.deltas {
            let d0 = c.img(d, &zero);
            for q in c.proper() {
                let dq = c.img(d, q);
                let weak = c.semi(t, q, &dq, true);
                let strong = c.semi(t, q, &dq, false);
                let zs = if weak { classify::delta_zeros_for_target(c.ring, t, &dq).expect("t was checked") } else { vec![] };
                let cfg = || c.config(t, d, q);

                let failure = if zs.is_empty() { None } else { annihilation_failure(c, t, q, &zs) };
                let ids: &[&'static str] =
                    if is22 { &[THM_ZERO_ANNIHILATION, THM_ZERO_ANNIHILATION_22] } else { &[THM_ZERO_ANNIHILATION] };
                for &id in ids {
                    out.get(id).judge(c.ring, !zs.is_empty(), || failure.is_none(), cfg, || failure.clone().unwrap_or_default());
                }

                let power = c.prod(&vec![q.clone(); p.w]);
                let ids: &[&'static str] =
                    if is22 { &[THM_ZERO_PRODUCT, THM_ZERO_PRODUCT_22] } else { &[THM_ZERO_PRODUCT] };
                for &id in ids {
                    out.get(id).judge(c.ring, weak && !strong, || power == zero, cfg, || {
                        format!("k(Q^(w)) = {}", c.show(&power))
                    });
                }
                out.get(COR_RAD_ZERO).judge(c.ring, weak && !strong, || q.is_subset(&rad0), cfg, || {
                    format!("rad(0) = {}", c.show(&rad0))
                });
                out.get(COR_REDUCED).judge(c.ring, reduced && weak, || strong, cfg, || c.why(t, q, &dq, false));
                out.get(THM_ZERO_TRIPLE).judge(c.ring, weak && dq == d0, || strong == zs.is_empty(), cfg, || {
                    format!("semiprimary {strong}, delta-zeros of 0 {}", zs.len())
                });
                out.get(DEF_DELTA_ZERO).judge(c.ring, weak, || strong == zs.is_empty(), cfg, || {
                    format!("semiprimary {strong}, delta-zeros {}", zs.len())
                });
            }
        }
    }
}

/// prime ⇒ δ-primary ⇒ (t,n)-absorbing δ-primary ⇒ S ⇒ W, plus the
/// strictness witnesses (S but not prime).
pub(super) fn chain(c: &Ctx<'_>, out: &mut Tallies, strict: &mut Vec<StrictnessWitness>) {
    let primes = ideal::prime_flags(c.ring).expect("lattice is available");
    for (qi, q) in c.ideals().iter().enumerate() {
        if q.is_full() {
            continue;
        }
        for d in &c.deltas {
            let dprimary = classify::is_delta_primary(c.ring, q, d).expect("proper hyperideal").verdict;
            let tally = out.get(CHAIN_IMPLICATIONS);
            tally.judge(
                c.ring,
                primes[qi],
                || dprimary,
                || format!("delta={} Q={} prime => delta-primary", d.name(), c.show(q)),
                || "prime but not delta-primary".into(),
            );
            for &t in &c.ts {
                let ap = classify::is_tn_absorbing_delta_primary(c.ring, q, t, d).expect("proper hyperideal").verdict;
                let s = c.s(t, d, q);
                let w = c.w(t, d, q);
                let cfg = |step: &str| format!("{} {step}", c.config(t, d, q));
                tally.judge(c.ring, dprimary, || ap, || cfg("delta-primary => absorbing delta-primary"), || {
                    "delta-primary but not (t,n)-absorbing delta-primary".into()
                });
                tally.judge(c.ring, ap, || s, || cfg("absorbing delta-primary => semiprimary"), || {
                    c.why(t, q, &c.img(d, q), false)
                });
                tally.judge(c.ring, s, || w, || cfg("semiprimary => weakly semiprimary"), || {
                    c.why(t, q, &c.img(d, q), true)
                });
            }
        }
    }
    strictness(c, strict);
}

pub(super) fn strictness(c: &Ctx<'_>, strict: &mut Vec<StrictnessWitness>) {
    let primes = ideal::prime_flags(c.ring).expect("lattice is available");
    for &t in &c.ts {
        for d in &c.deltas {
            for (qi, q) in c.ideals().iter().enumerate() {
                if !q.is_full() && !primes[qi] && c.s(t, d, q) {
                    strict.push(StrictnessWitness {
                        ring: c.name().into(),
                        ideal: c.show(q),
                        t,
                        delta: d.name().into(),
                    });
                }
            }
        }
    }
}

/// The three transport results for one map and expansion pair.
fn check_hom(f: &Homomorphism<'_>, src: &Ctx<'_>, tgt: &Ctx<'_>, d: &Expansion, dp: &Expansion, name: &str, out: &mut Tallies) {
    let ok = f.is_delta_deltaprime(d, dp).map(|r| r.verdict).unwrap_or(false);
    let kernel = f.kernel();
    let surjective = f.is_surjective();
    let head = |t: usize| format!("{name} t={t} delta={} delta'={}", d.name(), dp.name());
    for &t in src.ts.iter().filter(|t| tgt.has_t(**t)) {
        let kernel_weak = ok && !kernel.is_full() && src.w(t, d, &kernel);
        for q2 in tgt.proper() {
            let pre = f.preimage(q2);
            let cfg = || format!("{} Q2={}", head(t), tgt.show(q2));
            out.get(THM_HOM_PREIMAGE).judge(
                src.ring,
                ok && !pre.is_full() && tgt.s(t, dp, q2),
                || src.s(t, d, &pre),
                cfg,
                || src.why(t, &pre, &src.img(d, &pre), false),
            );
            out.get(THM_HOM_PREIMAGE_WEAK).judge(
                src.ring,
                kernel_weak && !pre.is_full() && tgt.w(t, dp, q2),
                || src.w(t, d, &pre),
                cfg,
                || src.why(t, &pre, &src.img(d, &pre), true),
            );
        }
        for q1 in src.proper() {
            let image = if ok && surjective { f.image_ideal(q1).ok() } else { None };
            let dq1 = src.img(d, q1);
            for weakly in WEAKLY {
                let hyp = image.as_ref().is_some_and(|i| !i.is_full()) && src.semi(t, q1, &dq1, weakly);
                out.get(THM_HOM_IMAGE).judge(
                    src.ring,
                    hyp,
                    || {
                        let i = image.as_ref().expect("checked");
                        tgt.semi(t, i, &tgt.img(dp, i), weakly)
                    },
                    || format!("{} Q1={}{}", head(t), src.show(q1), label(weakly)),
                    || {
                        let i = image.as_ref().expect("checked");
                        tgt.why(t, i, &tgt.img(dp, i), weakly)
                    },
                );
            }
        }
    }
}

/// Transport along identity maps, coset maps and subhyperring inclusions,
/// with the quotient and subhyperring results.
pub(super) fn homomorphisms(c: &Ctx<'_>, out: &mut Tallies, _: &mut Vec<StrictnessWitness>) {
    let id = Homomorphism::identity(c.ring);
    for d in &c.deltas {
        check_hom(&id, c, c, d, d, "identity", out);
    }
    for (pi_idx, p) in c.proper().into_iter().enumerate() {
        let Ok(qr) = build_quotient(c.ring, p, &format!("P{pi_idx}")) else {
            continue;
        };
        let pi = qr.projection(c.ring);
        let pairs: Vec<(&Expansion, Expansion)> =
            c.deltas.iter().filter_map(|d| quotient_expansion(d, &pi).ok().map(|q| (d, q))).collect();
        let qdeltas = pairs.iter().map(|(_, q)| q.clone()).collect();
        let Some(qc) = Ctx::new(&qr.ring, qdeltas, &c.ts, c.seed) else {
            continue;
        };
        let name = format!("coset map onto {}", qr.ring.name);
        for (d, dq) in &pairs {
            check_hom(&pi, c, &qc, d, dq, &name, out);
            for &t in qc.ts.iter().filter(|t| c.has_t(**t)) {
                for q in c.proper() {
                    if !p.is_subset(q) {
                        continue;
                    }
                    let image = qr.image_of(q);
                    out.get(THM_QUOTIENT).judge(
                        c.ring,
                        c.s(t, d, q),
                        || qc.s(t, dq, &image),
                        || format!("{} P={}", c.config(t, d, q), c.show(p)),
                        || qc.why(t, &image, &qc.img(dq, &image), false),
                    );
                }
            }
        }
    }
    subhyperrings(c, out);
}

fn subhyperrings(c: &Ctx<'_>, out: &mut Tallies) {
    if c.ring.size() > SUBRING_CAP {
        return;
    }
    let Ok(subs) = enumerate_subhyperrings(c.ring) else {
        return;
    };
    let ambient: Vec<&Expansion> = [DELTA0, DELTA1]
        .iter()
        .filter_map(|n| c.deltas.iter().find(|d| d.name() == *n))
        .collect();
    for sub in &subs {
        let inner = builtin_expansions(&sub.ring);
        let Some(sc) = Ctx::new(&sub.ring, inner, &c.ts, c.seed) else {
            continue;
        };
        let incl = sub.inclusion(c.ring);
        let members = Subset::from_elems(c.ring.size(), sub.members.iter().copied());
        for gd in &ambient {
            let Some(sd) = sc.deltas.iter().find(|d| d.name() == gd.name()) else {
                continue;
            };
            let ok = incl.is_delta_deltaprime(sd, gd).map(|r| r.verdict).unwrap_or(false);
            for &t in sc.ts.iter().filter(|t| c.has_t(**t)) {
                for q in c.proper() {
                    if members.is_subset(q) {
                        continue;
                    }
                    let r = sub.restrict(q);
                    out.get(THM_SUBHYPERRING).judge(
                        c.ring,
                        ok && c.s(t, gd, q),
                        || sc.s(t, sd, &r),
                        || format!("{} G'={}", c.config(t, gd, q), c.show(&members)),
                        || sc.why(t, &r, &sc.img(sd, &r), false),
                    );
                }
            }
        }
    }
}

pub(super) struct ProductCase {
    pub factors: Vec<usize>,
    pub product: ProductRing,
}

const PAIR_FACTOR_MAX: usize = 4;
const TRIPLE_FACTOR_MAX: usize = 3;
const FACTOR_POOL: usize = 6;

/// Products of two small corpus rings, and of three even smaller ones.
/// Factors need an identity and at least two elements.
pub(super) fn product_cases(corpus: &[CorpusRing]) -> Vec<ProductCase> {
    let mut pool: Vec<usize> = (0..corpus.len())
        .filter(|&i| {
            let r = &corpus[i].ring;
            r.one().is_some() && (2..=PAIR_FACTOR_MAX).contains(&r.size())
        })
        .collect();
    pool.sort_by(|&a, &b| (corpus[a].ring.size(), corpus[a].name()).cmp(&(corpus[b].ring.size(), corpus[b].name())));
    pool.truncate(FACTOR_POOL);
    let small: Vec<usize> = pool.iter().copied().filter(|&i| corpus[i].ring.size() <= TRIPLE_FACTOR_MAX).collect();
    let mut cases = Vec::new();
    for (group, arity) in [(&pool, 2), (&small, 3)] {
        for_each_multiset(group.len(), arity, |idx| {
            let factors: Vec<usize> = idx.iter().map(|&i| group[i]).collect();
            let tables: Vec<&HyperringTable> = factors.iter().map(|&i| corpus[i].ring.table()).collect();
            if let Ok(product) = build_product(&tables) {
                cases.push(ProductCase { factors, product });
            }
        });
    }
    cases
}

/// `∃u: one[u] ∧ rest full` or `∃u<v: two[u] ∧ two[v] ∧ rest full`.
fn split_conclusion(one: &[bool], two: &[bool], full: &[bool]) -> bool {
    let s = full.len();
    let others_full = |skip: &[usize]| (0..s).all(|i| skip.contains(&i) || full[i]);
    (0..s).any(|u| one[u] && others_full(&[u]))
        || (0..s).any(|u| (u + 1..s).any(|v| two[u] && two[v] && others_full(&[u, v])))
}

/// Componentwise results over one product ring, and transport along the
/// projections of two-factor products.
pub(super) fn products(case: &ProductCase, corpus: &[CorpusRing], ts: &[usize], seed: u64, out: &mut Tallies) {
    let factors: Vec<&Hyperring> = case.factors.iter().map(|&i| &corpus[i].ring).collect();
    let s = factors.len();
    let fctx: Vec<Ctx<'_>> = match factors.iter().map(|f| Ctx::new(f, builtin_expansions(f), ts, seed)).collect() {
        Some(v) => v,
        None => return,
    };
    let pr = &case.product;
    let mut combos: Vec<Vec<usize>> = Vec::new();
    for_each_tuple_of(&fctx.iter().map(|f| f.deltas.len()).collect::<Vec<_>>(), &mut combos);
    let mut pdeltas = Vec::new();
    let mut kept = Vec::new();
    for combo in combos {
        let parts: Vec<&Expansion> = combo.iter().enumerate().map(|(i, &j)| &fctx[i].deltas[j]).collect();
        if let Ok(d) = product_expansion(&parts, pr) {
            pdeltas.push(d);
            kept.push(combo);
        }
    }
    let Some(pc) = Ctx::new(&pr.ring, pdeltas, ts, seed) else {
        return;
    };
    let mut ideal_tuples: Vec<Vec<usize>> = Vec::new();
    for_each_tuple_of(&fctx.iter().map(|f| f.ideals().len()).collect::<Vec<_>>(), &mut ideal_tuples);
    let n = pr.ring.n();

    for (combo, pd) in kept.iter().zip(&pc.deltas) {
        let fd: Vec<&Expansion> = combo.iter().enumerate().map(|(i, &j)| &fctx[i].deltas[j]).collect();
        let all_p = fd.iter().all(|d| has_p_property(d));
        for it in &ideal_tuples {
            let parts: Vec<&Subset> = it.iter().enumerate().map(|(i, &j)| &fctx[i].ideals()[j]).collect();
            let q = pr.product_set(&parts);
            if q.is_full() {
                continue;
            }
            let delta_full: Vec<bool> = (0..s).map(|i| fctx[i].img(fd[i], parts[i]).is_full()).collect();
            let full: Vec<bool> = parts.iter().map(|p| p.is_full()).collect();
            let fs = |t: usize| -> Vec<bool> { (0..s).map(|i| fctx[i].s(t, fd[i], parts[i])).collect() };
            let names: Vec<String> = (0..s).map(|i| fctx[i].show(parts[i])).collect();
            for &t in &pc.ts {
                let w = AbsorbingParams::new(t, n).expect("t is positive").w;
                let cfg = || format!("t={t} delta={} Q={}", pd.name(), names.join(" x "));
                let next = pc.has_t(t + 1) && fctx.iter().all(|f| f.has_t(t + 1));
                if next && s == 2 {
                    out.get(THM_PRODUCT_CART).judge(
                        &pr.ring,
                        pc.s(t + 1, pd, &q),
                        || split_conclusion(&fs(t + 1), &fs(t), &delta_full),
                        cfg,
                        || "no admissible split over the factors".into(),
                    );
                }
                if next && s == w {
                    out.get(THM_PRODUCT_CART3).judge(
                        &pr.ring,
                        pc.s(t + 1, pd, &q),
                        || split_conclusion(&fs(t + 1), &fs(t), &delta_full),
                        cfg,
                        || "no admissible split over the factors".into(),
                    );
                    out.get(THM_PRODUCT_WEAKLY).judge(
                        &pr.ring,
                        all_p && pc.w(t + 1, pd, &q),
                        || split_conclusion(&fs(t + 1), &fs(t), &full),
                        cfg,
                        || "no admissible split over the factors".into(),
                    );
                }
                if s == w {
                    out.get(THM_PRODUCT_CART2).judge(&pr.ring, all_p && pc.w(t, pd, &q), || pc.s(t, pd, &q), cfg, || {
                        pc.why(t, &q, &pc.img(pd, &q), false)
                    });
                }
                if s == 2 && full[1] {
                    out.get(THM_PRODUCT_FULL_FACTOR).judge(&pr.ring, pc.w(t, pd, &q), || pc.s(t, pd, &q), cfg, || {
                        pc.why(t, &q, &pc.img(pd, &q), false)
                    });
                }
            }
        }
        if s == 2 {
            let proj = Homomorphism::new(&pr.ring, factors[0], pr.projection_map(0));
            let name = format!("projection of {} onto {}", pr.ring.name, factors[0].name);
            check_hom(&proj, &pc, &fctx[0], pd, fd[0], &name, out);
        }
    }
}

/// Every tuple `(i_1..i_s)` with `i_j < bounds[j]`, first coordinate slowest.
fn for_each_tuple_of(bounds: &[usize], out: &mut Vec<Vec<usize>>) {
    let mut cur = vec![0; bounds.len()];
    if bounds.contains(&0) {
        return;
    }
    loop {
        out.push(cur.clone());
        let mut i = bounds.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}
