//! Hyperideal expansions: inflationary, monotone maps on the ideal lattice.

use std::sync::Arc;

use crate::classify::{ClassificationReport, Witness};
use crate::construct::{Homomorphism, ProductRing};
use crate::error::{Error, Result};
use crate::ideal::{self, lattice, IdealLattice};
use crate::ring::Hyperring;
use crate::subset::Subset;

pub const DELTA0: &str = "delta0";
pub const DELTA1: &str = "delta1";
pub const DELTA_R: &str = "deltaR";

/// A total map from the hyperideals of one ring to hyperideals of the same
/// ring, stored as lattice indices. Construction only checks that images are
/// hyperideals; [`validate_expansion`] checks the expansion axioms.
#[derive(Debug, Clone)]
pub struct Expansion {
    name: String,
    lattice: Arc<IdealLattice>,
    images: Vec<usize>,
}

impl Expansion {
    pub fn from_fn(ring: &Hyperring, name: &str, mut f: impl FnMut(&Subset) -> Result<Subset>) -> Result<Self> {
        let l = lattice(ring)?;
        let images = l
            .ideals()
            .iter()
            .map(|i| {
                let img = f(i)?;
                l.index_of(&img).ok_or_else(|| Error::Expansion {
                    name: name.into(),
                    reason: format!("image {} of {} is not a hyperideal", ring.display_set(&img), ring.display_set(i)),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { name: name.into(), lattice: l, images })
    }

    /// Builds an expansion from explicit `(ideal, image)` pairs, which must
    /// cover every hyperideal exactly once.
    pub fn from_pairs(ring: &Hyperring, name: &str, pairs: &[(Subset, Subset)]) -> Result<Self> {
        let l = lattice(ring)?;
        let err = |reason: String| Error::Expansion { name: name.into(), reason };
        let mut images = vec![None; l.len()];
        for (i, img) in pairs {
            let idx = l.index_of(i).ok_or_else(|| err(format!("{} is not a hyperideal", ring.display_set(i))))?;
            let img_idx = l.index_of(img).ok_or_else(|| err(format!("image {} is not a hyperideal", ring.display_set(img))))?;
            if images[idx].replace(img_idx).is_some() {
                return Err(err(format!("{} listed twice", ring.display_set(i))));
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| img.ok_or_else(|| err(format!("no image for {}", ring.display_set(l.get(i))))))
            .collect::<Result<_>>()?;
        Ok(Self { name: name.into(), lattice: l, images })
    }

    pub fn delta0(ring: &Hyperring) -> Result<Self> {
        Self::from_fn(ring, DELTA0, |i| Ok(i.clone()))
    }

    pub fn delta1(ring: &Hyperring) -> Result<Self> {
        let l = lattice(ring)?;
        let radicals = ideal::radical_indices(ring)?;
        Ok(Self { name: DELTA1.into(), lattice: l, images: radicals })
    }

    pub fn delta_r(ring: &Hyperring) -> Result<Self> {
        Self::from_fn(ring, DELTA_R, |_| Ok(ring.full_set()))
    }

    pub fn builtin(name: &str, ring: &Hyperring) -> Result<Self> {
        match name {
            DELTA0 => Self::delta0(ring),
            DELTA1 => Self::delta1(ring),
            DELTA_R => Self::delta_r(ring),
            _ => Err(Error::Expansion { name: name.into(), reason: "unknown built-in".into() }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    pub fn lattice(&self) -> &IdealLattice {
        &self.lattice
    }

    pub fn apply_index(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn apply(&self, i: &Subset) -> Result<Subset> {
        let idx = self.lattice.index_of(i).ok_or_else(|| Error::Expansion {
            name: self.name.clone(),
            reason: format!("argument {:?} is not a hyperideal of this ring", i),
        })?;
        Ok(self.lattice.get(self.images[idx]).clone())
    }

    /// Pairs `(ideal, image)` in lattice order.
    pub fn pairs(&self) -> impl Iterator<Item = (&Subset, &Subset)> + '_ {
        self.images.iter().enumerate().map(|(i, &j)| (self.lattice.get(i), self.lattice.get(j)))
    }

    /// `δ(δ(I)) = δ(I)`.
    pub fn is_idempotent_at(&self, i: usize) -> bool {
        self.images[self.images[i]] == self.images[i]
    }
}

/// Checks `I ⊆ δ(I)` and `I ⊆ J ⇒ δ(I) ⊆ δ(J)` over the whole lattice.
pub fn validate_expansion(delta: &Expansion) -> ClassificationReport {
    let l = delta.lattice();
    let mut report = ClassificationReport::new("expansion");
    report.delta = Some(delta.name.clone());
    for i in 0..l.len() {
        let img = l.get(delta.images[i]);
        if !l.get(i).is_subset(img) {
            report.fail(Witness {
                ideals: vec![l.get(i).to_vec(), img.to_vec()],
                detail: "not inflationary".into(),
                ..Witness::default()
            });
            return report;
        }
    }
    for i in 0..l.len() {
        for j in 0..l.len() {
            if l.get(i).is_subset(l.get(j)) && !l.get(delta.images[i]).is_subset(l.get(delta.images[j])) {
                report.fail(Witness {
                    ideals: vec![l.get(i).to_vec(), l.get(j).to_vec()],
                    detail: "not monotone".into(),
                    ..Witness::default()
                });
                return report;
            }
        }
    }
    report
}

/// `δ(P ∩ Q) = δ(P) ∩ δ(Q)` for every pair of hyperideals.
pub fn is_intersection_preserving(delta: &Expansion) -> Result<ClassificationReport> {
    let l = delta.lattice();
    let mut report = ClassificationReport::new("intersection-preserving");
    report.delta = Some(delta.name.clone());
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            let meet = l.get(i).intersection(l.get(j));
            let m = l.index_of(&meet).ok_or_else(|| Error::Structural("intersection of ideals is not an ideal".into()))?;
            let lhs = l.get(delta.images[m]);
            let rhs = l.get(delta.images[i]).intersection(l.get(delta.images[j]));
            if *lhs != rhs {
                report.fail(Witness {
                    ideals: vec![l.get(i).to_vec(), l.get(j).to_vec()],
                    detail: format!("delta of meet {:?}, meet of deltas {:?}", lhs, rhs),
                    ..Witness::default()
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// `δ(Q) = G` exactly when `Q = G`.
pub fn has_p_property(delta: &Expansion) -> bool {
    let l = delta.lattice();
    let full = l.full_index();
    (0..l.len()).all(|i| (delta.images[i] == full) == (i == full))
}

/// `δ_q(I/J) = δ(I)/J` on the target of a surjective map with kernel `J`,
/// transported through the map.
pub fn quotient_expansion(delta: &Expansion, pi: &Homomorphism<'_>) -> Result<Expansion> {
    if !pi.is_surjective() {
        return Err(Error::Precondition("quotient expansion needs a surjective map".into()));
    }
    let kernel = pi.kernel();
    let name = format!("{}_q", delta.name());
    Expansion::from_fn(pi.target, &name, |x| {
        let pre = pi.preimage(x);
        if !kernel.is_subset(&pre) {
            return Err(Error::Structural("preimage misses the kernel".into()));
        }
        Ok(pi.image_set(&delta.apply(&pre)?))
    })
}

/// The componentwise expansion `δ(Q_1 × ... × Q_s) = δ_1(Q_1) × ... × δ_s(Q_s)`.
/// Every hyperideal of the product must split as a product of ideals.
pub fn product_expansion(deltas: &[&Expansion], product: &ProductRing) -> Result<Expansion> {
    if deltas.len() != product.factor_sizes.len() {
        return Err(Error::ArityMismatch { expected: product.factor_sizes.len(), got: deltas.len() });
    }
    let names: Vec<&str> = deltas.iter().map(|d| d.name()).collect();
    Expansion::from_fn(&product.ring, &names.join("x"), |i| {
        let parts = product.decompose(i)?;
        let images = parts.iter().zip(deltas).map(|(p, d)| d.apply(p)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Subset> = images.iter().collect();
        Ok(product.product_set(&refs))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_product, build_quotient};
    use crate::fixtures;

    #[test]
    fn builtins_validate_everywhere() {
        for t in fixtures::builtin_corpus() {
            let r = t.into_validated().unwrap();
            if r.one().is_none() {
                continue;
            }
            for d in [Expansion::delta0(&r), Expansion::delta1(&r), Expansion::delta_r(&r)] {
                let d = d.unwrap();
                assert!(validate_expansion(&d).verdict, "{} {}", r.name, d.name());
                assert!(is_intersection_preserving(&d).unwrap().verdict, "{} {}", r.name, d.name());
            }
        }
    }

    #[test]
    fn builtin_values() {
        let z4 = fixtures::zn(4).into_validated().unwrap();
        let d1 = Expansion::delta1(&z4).unwrap();
        assert_eq!(d1.apply(&z4.zero_set()).unwrap().to_vec(), vec![0, 2]);
        let dr = Expansion::delta_r(&z4).unwrap();
        assert!(dr.apply(&z4.zero_set()).unwrap().is_full());
        assert!(has_p_property(&Expansion::delta0(&z4).unwrap()));
        assert!(has_p_property(&d1));
        assert!(!has_p_property(&dr));
    }

    #[test]
    fn non_monotone_map_is_rejected() {
        let z4 = fixtures::zn(4).into_validated().unwrap();
        let bad = Expansion::from_fn(&z4, "bad", |i| Ok(if i.len() == 1 { z4.full_set() } else { i.clone() })).unwrap();
        let rep = validate_expansion(&bad);
        assert!(!rep.verdict);
        assert_eq!(rep.witness.unwrap().ideals, vec![vec![0], vec![0, 2]]);
    }

    #[test]
    fn non_ideal_image_is_an_error() {
        let z4 = fixtures::zn(4).into_validated().unwrap();
        let err = Expansion::from_fn(&z4, "bad", |_| Ok(z4.set_of([0, 1]))).unwrap_err();
        assert!(matches!(err, Error::Expansion { .. }));
    }

    #[test]
    fn quotient_lift_of_radical() {
        let z12 = fixtures::zn(12).into_validated().unwrap();
        let j = z12.set_of([0, 6]);
        let q = build_quotient(&z12, &j, "J").unwrap();
        let pi = q.projection(&z12);
        let d1 = Expansion::delta1(&z12).unwrap();
        let dq = quotient_expansion(&d1, &pi).unwrap();
        assert!(validate_expansion(&dq).verdict);
        assert_eq!(dq.apply(&q.ring.zero_set()).unwrap(), q.image_of(&j));
        let d0q = quotient_expansion(&Expansion::delta0(&z12).unwrap(), &pi).unwrap();
        assert!(d0q.pairs().all(|(a, b)| a == b));
    }

    #[test]
    fn componentwise_radical_on_z4_squared() {
        let z4 = fixtures::zn(4).into_validated().unwrap();
        let p = build_product(&[z4.table(), z4.table()]).unwrap();
        let d1 = Expansion::delta1(&z4).unwrap();
        let d = product_expansion(&[&d1, &d1], &p).unwrap();
        let zero = z4.zero_set();
        let two = z4.set_of([0, 2]);
        let arg = p.product_set(&[&zero, &two]);
        assert_eq!(d.apply(&arg).unwrap(), p.product_set(&[&two, &two]));
        assert!(validate_expansion(&d).verdict);
        let d0 = Expansion::delta0(&z4).unwrap();
        assert!(product_expansion(&[&d0, &d0], &p).unwrap().pairs().all(|(a, b)| a == b));
    }
}
