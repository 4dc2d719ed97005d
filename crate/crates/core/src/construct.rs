//! Quotients, finite products, homomorphisms and subhyperrings.

use serde::Serialize;

use crate::classify::{ClassificationReport, Witness};
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::ideal::{self, lattice};
use crate::ring::{for_each_multiset, for_each_tuple, HyperOpTable, Hyperring, HyperringTable, NaryOpTable};
use crate::subset::Subset;
use crate::Elem;

/// Largest carrier a product construction will build.
pub const PRODUCT_CAP: usize = 256;
/// Largest carrier whose subhyperrings are enumerated.
pub const SUBRING_CAP: usize = 8;

/// `G/P`: cosets `h(g, P, 0^(m-2))`, each represented by its least member.
#[derive(Debug)]
pub struct QuotientRing {
    pub ring: Hyperring,
    pub modulus: Subset,
    /// Base element to coset index.
    pub coset_of: Vec<Elem>,
    /// Coset index to its least base member.
    pub reps: Vec<Elem>,
}

fn coset(base: &HyperringTable, p: &Subset, g: Elem) -> Subset {
    let mut args = vec![base.zero_set(); base.m()];
    args[0] = Subset::singleton(base.size(), g);
    args[1] = p.clone();
    base.extend_h(&args).expect("nonempty arguments")
}

/// Builds `G/P`, labelling each coset `rep+name`.
pub fn build_quotient(base: &Hyperring, p: &Subset, name: &str) -> Result<QuotientRing> {
    ideal::require_ideal(base, p)?;
    let size = base.size();
    let mut coset_of = vec![usize::MAX; size];
    let mut reps = Vec::new();
    let mut cosets: Vec<Subset> = Vec::new();
    for g in 0..size {
        let c = coset(base, p, g);
        if !c.contains(g) {
            return Err(Error::Structural(format!("coset of {} omits it", base.label(g))));
        }
        match cosets.iter().position(|x| *x == c) {
            Some(i) => coset_of[g] = i,
            None => {
                if c.iter().any(|x| coset_of[x] != usize::MAX) {
                    return Err(Error::Structural("cosets overlap".into()));
                }
                coset_of[g] = cosets.len();
                reps.push(c.first().expect("nonempty coset"));
                cosets.push(c);
            }
        }
    }
    let q = cosets.len();
    let members: Vec<Vec<Elem>> = cosets.iter().map(Subset::to_vec).collect();

    let mut ill_defined = None;
    let h = HyperOpTable::from_fn(q, base.m(), |t| {
        let mut result: Option<Subset> = None;
        let mut pick = vec![0; t.len()];
        each_choice(&members, t, &mut pick, 0, &mut |xs| {
            let s = Subset::from_elems(q, base.h(xs).iter().map(|z| coset_of[z]));
            match &result {
                None => result = Some(s),
                Some(r) if *r != s => ill_defined = Some(format!("h on cosets {t:?}")),
                _ => {}
            }
        });
        result.expect("cosets are nonempty")
    });
    let k = NaryOpTable::from_fn(q, base.n(), |t| {
        let mut result = None;
        let mut pick = vec![0; t.len()];
        each_choice(&members, t, &mut pick, 0, &mut |xs| {
            let c = coset_of[base.k(xs)];
            match result {
                None => result = Some(c),
                Some(r) if r != c => ill_defined = Some(format!("k on cosets {t:?}")),
                _ => {}
            }
        });
        result.expect("cosets are nonempty")
    });
    if let Some(msg) = ill_defined {
        return Err(Error::Structural(format!("induced table ill-defined: {msg}")));
    }
    let labels = reps.iter().map(|&r| format!("{}+{name}", base.label(r))).collect();
    let one = base.one().map(|o| coset_of[o]);
    let table = HyperringTable::new(format!("{}/{name}", base.name), labels, h, k, coset_of[base.zero()], one)?;
    Ok(QuotientRing { ring: table.into_validated()?, modulus: p.clone(), coset_of, reps })
}

fn each_choice(members: &[Vec<Elem>], classes: &[Elem], pick: &mut Vec<Elem>, depth: usize, f: &mut impl FnMut(&[Elem])) {
    if depth == classes.len() {
        f(pick);
        return;
    }
    for &x in &members[classes[depth]] {
        pick[depth] = x;
        each_choice(members, classes, pick, depth + 1, f);
    }
}

impl QuotientRing {
    /// The natural map `g ↦ h(g, P, 0^(m-2))`.
    pub fn projection<'a>(&'a self, base: &'a Hyperring) -> Homomorphism<'a> {
        Homomorphism::new(base, &self.ring, self.coset_of.clone())
    }

    /// `I/P` for a hyperideal `I ⊇ P` of the base.
    pub fn image_of(&self, i: &Subset) -> Subset {
        Subset::from_elems(self.ring.size(), i.iter().map(|g| self.coset_of[g]))
    }

    /// The union of the cosets in `x`, an ideal of the base containing `P`.
    pub fn preimage_of(&self, x: &Subset) -> Subset {
        Subset::from_elems(self.coset_of.len(), (0..self.coset_of.len()).filter(|&g| x.contains(self.coset_of[g])))
    }
}

/// A finite product with elements indexed in mixed radix over the factors.
#[derive(Debug)]
pub struct ProductRing {
    pub ring: Hyperring,
    pub factor_sizes: Vec<usize>,
}

fn product_table(a: &HyperringTable, b: &HyperringTable) -> Result<HyperringTable> {
    if a.m() != b.m() || a.n() != b.n() {
        return Err(Error::Incompatible(format!(
            "arities ({},{}) and ({},{})",
            a.m(),
            a.n(),
            b.m(),
            b.n()
        )));
    }
    let (na, nb) = (a.size(), b.size());
    let size = na * nb;
    if size > PRODUCT_CAP {
        return Err(Error::CarrierCap { size, cap: PRODUCT_CAP });
    }
    let split = |t: &[Elem]| -> (Vec<Elem>, Vec<Elem>) { t.iter().map(|&e| (e / nb, e % nb)).unzip() };
    let h = HyperOpTable::from_fn(size, a.m(), |t| {
        let (xs, ys) = split(t);
        let (sa, sb) = (a.h(&xs), b.h(&ys));
        Subset::from_elems(size, sa.iter().flat_map(|x| sb.iter().map(move |y| x * nb + y)))
    });
    let k = NaryOpTable::from_fn(size, a.n(), |t| {
        let (xs, ys) = split(t);
        a.k(&xs) * nb + b.k(&ys)
    });
    let labels = (0..size).map(|e| format!("{}|{}", a.label(e / nb), b.label(e % nb))).collect();
    let one = a.one().zip(b.one()).map(|(x, y)| x * nb + y);
    HyperringTable::new(
        format!("{}x{}", a.name, b.name),
        labels,
        h,
        k,
        a.zero() * nb + b.zero(),
        one,
    )
}

/// Product of the factors, folded left to right.
pub fn build_product(factors: &[&HyperringTable]) -> Result<ProductRing> {
    let (first, rest) = factors.split_first().ok_or_else(|| Error::Precondition("no factors".into()))?;
    let mut acc = (*first).clone();
    for f in rest {
        acc = product_table(&acc, f)?;
    }
    Ok(ProductRing { ring: acc.into_validated()?, factor_sizes: factors.iter().map(|f| f.size()).collect() })
}

impl ProductRing {
    pub fn coords(&self, e: Elem) -> Vec<Elem> {
        let mut out = vec![0; self.factor_sizes.len()];
        let mut rest = e;
        for (slot, &s) in out.iter_mut().zip(&self.factor_sizes).rev() {
            *slot = rest % s;
            rest /= s;
        }
        out
    }

    pub fn elem(&self, coords: &[Elem]) -> Elem {
        coords.iter().zip(&self.factor_sizes).fold(0, |acc, (&c, &s)| acc * s + c)
    }

    /// `Q_1 × ... × Q_s` as a subset of the product carrier.
    pub fn product_set(&self, parts: &[&Subset]) -> Subset {
        let mut out = self.ring.empty_set();
        let members: Vec<Vec<Elem>> = parts.iter().map(|p| p.to_vec()).collect();
        let mut pick = vec![0; members.len()];
        crate::classify::any_choice(&members, &mut pick, 0, &mut |c| {
            out.insert(self.elem(c));
            false
        });
        out
    }

    /// Coordinate projections of a subset, one per factor.
    pub fn components(&self, s: &Subset) -> Vec<Subset> {
        let mut out: Vec<Subset> = self.factor_sizes.iter().map(|&n| Subset::empty(n)).collect();
        for e in s.iter() {
            for (part, c) in out.iter_mut().zip(self.coords(e)) {
                part.insert(c);
            }
        }
        out
    }

    /// Splits a hyperideal of the product into its factors, failing when it
    /// is not a product of subsets.
    pub fn decompose(&self, s: &Subset) -> Result<Vec<Subset>> {
        let parts = self.components(s);
        let refs: Vec<&Subset> = parts.iter().collect();
        if self.product_set(&refs) != *s {
            return Err(Error::Structural(format!("{} is not a product of ideals", self.ring.display_set(s))));
        }
        Ok(parts)
    }

    /// Projection onto factor `i`, as a map on carriers.
    pub fn projection_map(&self, i: usize) -> Vec<Elem> {
        (0..self.ring.size()).map(|e| self.coords(e)[i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomomorphismInfo {
    pub surjective: bool,
    pub kernel: Vec<Elem>,
}

/// A map between carriers, checked against both preservation laws on demand.
#[derive(Debug, Clone)]
pub struct Homomorphism<'a> {
    pub source: &'a Hyperring,
    pub target: &'a Hyperring,
    pub map: Vec<Elem>,
}

impl<'a> Homomorphism<'a> {
    pub fn new(source: &'a Hyperring, target: &'a Hyperring, map: Vec<Elem>) -> Self {
        assert_eq!(map.len(), source.size());
        Self { source, target, map }
    }

    pub fn identity(ring: &'a Hyperring) -> Self {
        Self::new(ring, ring, (0..ring.size()).collect())
    }

    pub fn apply(&self, g: Elem) -> Elem {
        self.map[g]
    }

    pub fn image_set(&self, s: &Subset) -> Subset {
        Subset::from_elems(self.target.size(), s.iter().map(|g| self.map[g]))
    }

    pub fn preimage(&self, s: &Subset) -> Subset {
        Subset::from_elems(self.source.size(), (0..self.source.size()).filter(|&g| s.contains(self.map[g])))
    }

    pub fn is_surjective(&self) -> bool {
        Subset::from_elems(self.target.size(), self.map.iter().copied()).is_full()
    }

    pub fn kernel(&self) -> Subset {
        self.preimage(&self.target.zero_set())
    }

    pub fn info(&self) -> HomomorphismInfo {
        HomomorphismInfo { surjective: self.is_surjective(), kernel: self.kernel().to_vec() }
    }

    /// `f(h(a_1..a_m)) = h(f(a_1)..f(a_m))` as sets and
    /// `f(k(b_1..b_n)) = k(f(b_1)..f(b_n))`, on every tuple.
    pub fn validate(&self) -> ClassificationReport {
        let mut report = ClassificationReport::new("homomorphism");
        let (s, t) = (self.source, self.target);
        let mut bad = None;
        for_each_multiset(s.size(), s.m(), |a| {
            if bad.is_some() {
                return;
            }
            let fa: Vec<Elem> = a.iter().map(|&x| self.map[x]).collect();
            if self.image_set(s.h(a)) != *t.h(&fa) {
                bad = Some((a.to_vec(), "h"));
            }
        });
        if bad.is_none() {
            for_each_multiset(s.size(), s.n(), |b| {
                if bad.is_some() {
                    return;
                }
                let fb: Vec<Elem> = b.iter().map(|&x| self.map[x]).collect();
                if self.map[s.k(b)] != t.k(&fb) {
                    bad = Some((b.to_vec(), "k"));
                }
            });
        }
        if let Some((tuple, op)) = bad {
            report.fail(Witness::tuple(tuple).with_detail(format!("{op} not preserved")));
        }
        report
    }

    /// `f^(-1)(Q)` for a hyperideal `Q` of the target, checked to be a hyperideal.
    pub fn preimage_ideal(&self, q: &Subset) -> Result<Subset> {
        ideal::require_ideal(self.target, q)?;
        let p = self.preimage(q);
        ideal::require_ideal(self.source, &p)?;
        Ok(p)
    }

    /// `f(Q)` for a surjective map and a hyperideal `Q` containing the kernel.
    pub fn image_ideal(&self, q: &Subset) -> Result<Subset> {
        ideal::require_ideal(self.source, q)?;
        if !self.is_surjective() {
            return Err(Error::Precondition("image transport needs a surjective map".into()));
        }
        if !self.kernel().is_subset(q) {
            return Err(Error::Precondition("ideal does not contain the kernel".into()));
        }
        let img = self.image_set(q);
        ideal::require_ideal(self.target, &img)?;
        Ok(img)
    }

    /// `δ(f^(-1)(Q)) = f^(-1)(δ'(Q))` for every hyperideal `Q` of the target.
    pub fn is_delta_deltaprime(&self, delta: &Expansion, delta_prime: &Expansion) -> Result<ClassificationReport> {
        let mut report = ClassificationReport::new("delta-deltaprime-homomorphism");
        report.delta = Some(format!("{}/{}", delta.name(), delta_prime.name()));
        for q in lattice(self.target)?.ideals() {
            let left = delta.apply(&self.preimage_ideal(q)?)?;
            let right = self.preimage(&delta_prime.apply(q)?);
            if left != right {
                report.fail(Witness {
                    ideals: vec![q.to_vec(), left.to_vec(), right.to_vec()],
                    detail: "target ideal, delta of preimage, preimage of delta'".into(),
                    ..Witness::default()
                });
                break;
            }
        }
        Ok(report)
    }
}

/// A subset containing 0 and 1 closed under h, inverses and k, with the
/// restricted tables and original labels.
#[derive(Debug)]
pub struct Subhyperring {
    pub members: Vec<Elem>,
    pub ring: Hyperring,
}

impl Subhyperring {
    pub fn inclusion<'a>(&'a self, ambient: &'a Hyperring) -> Homomorphism<'a> {
        Homomorphism::new(&self.ring, ambient, self.members.clone())
    }

    /// `Q ∩ G'` as a subset of the subhyperring's carrier.
    pub fn restrict(&self, q: &Subset) -> Subset {
        Subset::from_elems(self.members.len(), (0..self.members.len()).filter(|&i| q.contains(self.members[i])))
    }
}

fn is_closed(ring: &Hyperring, s: &Subset) -> bool {
    let members = s.to_vec();
    if members.iter().any(|&x| !s.contains(ring.neg(x))) {
        return false;
    }
    let mut ok = true;
    for_each_multiset(members.len(), ring.m(), |idx| {
        if ok {
            let t: Vec<Elem> = idx.iter().map(|&i| members[i]).collect();
            ok = ring.h(&t).is_subset(s);
        }
    });
    for_each_multiset(members.len(), ring.n(), |idx| {
        if ok {
            let t: Vec<Elem> = idx.iter().map(|&i| members[i]).collect();
            ok = s.contains(ring.k(&t));
        }
    });
    ok
}

fn restrict_table(ring: &Hyperring, members: &[Elem]) -> Result<HyperringTable> {
    let size = members.len();
    let pos = |x: Elem| members.iter().position(|&m| m == x).expect("closed subset");
    let h = HyperOpTable::from_fn(size, ring.m(), |t| {
        let xs: Vec<Elem> = t.iter().map(|&i| members[i]).collect();
        Subset::from_elems(size, ring.h(&xs).iter().map(pos))
    });
    let k = NaryOpTable::from_fn(size, ring.n(), |t| {
        let xs: Vec<Elem> = t.iter().map(|&i| members[i]).collect();
        pos(ring.k(&xs))
    });
    let labels = members.iter().map(|&x| ring.label(x).to_string()).collect();
    let one = ring.one().map(pos);
    HyperringTable::new(format!("{}[{}]", ring.name, members.len()), labels, h, k, pos(ring.zero()), one)
}

/// Every subhyperring containing the scalar identity, smallest first.
pub fn enumerate_subhyperrings(ring: &Hyperring) -> Result<Vec<Subhyperring>> {
    let one = ring.require_identity()?;
    let n = ring.size();
    if n > SUBRING_CAP {
        return Err(Error::CarrierCap { size: n, cap: SUBRING_CAP });
    }
    let mut sets = Vec::new();
    for mask in 0u64..(1 << n) {
        let s = Subset::from_mask(n, mask);
        if s.contains(ring.zero()) && s.contains(one) && is_closed(ring, &s) {
            sets.push(s);
        }
    }
    sets.sort();
    sets.into_iter()
        .map(|s| {
            let members = s.to_vec();
            let table = restrict_table(ring, &members)?;
            Ok(Subhyperring { ring: table.into_validated()?, members })
        })
        .collect()
}

/// Checks every tuple of the source for a map given as a function; used by
/// tests to confirm a candidate map before wrapping it.
pub fn preserves_operations(source: &Hyperring, target: &Hyperring, f: impl Fn(Elem) -> Elem) -> bool {
    let mut ok = true;
    for_each_tuple(source.size(), source.m(), |a| {
        if ok {
            let fa: Vec<Elem> = a.iter().map(|&x| f(x)).collect();
            ok = Subset::from_elems(target.size(), source.h(a).iter().map(&f)) == *target.h(&fa);
        }
    });
    for_each_tuple(source.size(), source.n(), |b| {
        if ok {
            let fb: Vec<Elem> = b.iter().map(|&x| f(x)).collect();
            ok = f(source.k(b)) == target.k(&fb);
        }
    });
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn quotient_by_zero_and_whole() {
        let z6 = fixtures::zn(6).into_validated().unwrap();
        let q = build_quotient(&z6, &z6.zero_set(), "0").unwrap();
        assert_eq!(q.ring.size(), 6);
        assert!(q.projection(&z6).validate().verdict);
        let all = build_quotient(&z6, &z6.full_set(), "G").unwrap();
        assert_eq!(all.ring.size(), 1);
    }

    #[test]
    fn z12_mod_six_is_z6() {
        let z12 = fixtures::zn(12).into_validated().unwrap();
        let q = build_quotient(&z12, &z12.set_of([0, 6]), "P").unwrap();
        assert_eq!(q.ring.size(), 6);
        assert_eq!(q.reps, vec![0, 1, 2, 3, 4, 5]);
        let z6 = fixtures::zn(6).into_validated().unwrap();
        assert!(preserves_operations(&q.ring, &z6, |c| q.reps[c] % 6));
        let pi = q.projection(&z12);
        assert!(pi.validate().verdict);
        assert_eq!(pi.kernel().to_vec(), vec![0, 6]);
        let evens = z12.set_of([0, 2, 4, 6, 8, 10]);
        let img = pi.image_ideal(&evens).unwrap();
        assert_eq!(img, q.ring.set_of([0, 2, 4]));
        assert_eq!(q.ring.label(1), "1+P");
    }

    #[test]
    fn product_of_z4_has_nine_ideals() {
        let z4 = fixtures::zn(4);
        let p = build_product(&[&z4, &z4]).unwrap();
        assert_eq!(p.ring.size(), 16);
        assert_eq!(lattice(&p.ring).unwrap().len(), 9);
        for i in lattice(&p.ring).unwrap().ideals() {
            p.decompose(i).unwrap();
        }
        assert_eq!(p.ring.label(p.elem(&[2, 3])), "2|3");
    }

    #[test]
    fn product_with_zero_ring_and_hyperring() {
        let z = fixtures::zero_ring();
        let r = fixtures::z12_mod_units();
        let p = build_product(&[&r, &z]).unwrap();
        assert_eq!(p.ring.size(), 6);
        let p2 = build_product(&[&r, &fixtures::zn(4)]).unwrap();
        assert!(p2.ring.validate().passed());
    }

    #[test]
    fn folding_is_associative() {
        let (a, b, c) = (fixtures::zn(2), fixtures::zn(3), fixtures::krasner_hyperfield());
        let left = build_product(&[&a, &b, &c]).unwrap();
        let ab = build_product(&[&a, &b]).unwrap().ring.into_table();
        let bc = build_product(&[&b, &c]).unwrap().ring.into_table();
        let left2 = build_product(&[&ab, &c]).unwrap();
        let right = build_product(&[&a, &bc]).unwrap();
        assert_eq!(left.ring.labels(), left2.ring.labels());
        assert_eq!(left.ring.labels(), right.ring.labels());
        for_each_tuple(left.ring.size(), 2, |t| {
            assert_eq!(left.ring.h(t), right.ring.h(t));
            assert_eq!(left.ring.k(t), right.ring.k(t));
        });
    }

    #[test]
    fn bad_map_fails() {
        let r = fixtures::z12_mod_units().into_validated().unwrap();
        let mut map: Vec<Elem> = (0..r.size()).collect();
        map[r.elem("2").unwrap()] = r.elem("3").unwrap();
        let f = Homomorphism::new(&r, &r, map);
        let rep = f.validate();
        assert!(!rep.verdict);
        assert!(Homomorphism::identity(&r).validate().verdict);
    }

    #[test]
    fn subhyperrings_of_z12_mod_units() {
        let r = fixtures::z12_mod_units().into_validated().unwrap();
        let subs = enumerate_subhyperrings(&r).unwrap();
        assert!(subs.iter().any(|s| s.members.len() == r.size()));
        for s in &subs {
            assert!(s.inclusion(&r).validate().verdict);
        }
        assert!(matches!(enumerate_subhyperrings(&fixtures::zn(12).into_validated().unwrap()), Err(Error::CarrierCap { .. })));
    }
}
