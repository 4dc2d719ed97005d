//! Small hyperrings used as a standing corpus.
//!
//! Everything here is built from arithmetic rules. The JSON files under
//! `fixtures/` are the canonical on-disk corpus; tests check that the two
//! agree.

use crate::ring::{ring_from_ops, HyperOpTable, HyperringTable, NaryOpTable};
use crate::subset::Subset;
use crate::Elem;

fn numeric_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// ℤ_n with singleton-valued addition, as a Krasner (2,2)-hyperring.
pub fn zn(n: usize) -> HyperringTable {
    zn_with_arities(n, 2, 2)
}

/// ℤ_n with binary addition and an `arity`-ary product.
pub fn zn_nary(n: usize, arity: usize) -> HyperringTable {
    zn_with_arities(n, 2, arity)
}

/// ℤ_n with m-ary addition and n-ary multiplication.
pub fn zn_with_arities(n: usize, m: usize, arity: usize) -> HyperringTable {
    let mut t = ring_from_ops(
        &format!("Z{n}"),
        numeric_labels(n),
        m,
        arity,
        0,
        |a, b| (a + b) % n,
        |a, b| (a * b) % n,
    )
    .expect("well-formed tables");
    if m != 2 || arity != 2 {
        t.name = format!("Z{n}_m{m}_n{arity}");
    }
    t.record_scalar_identity();
    t
}

/// The rng 2ℤ₈ = {0,2,4,6} with operations mod 8. It has no scalar identity.
pub fn even_z8() -> HyperringTable {
    let labels = ["0", "2", "4", "6"].map(String::from).to_vec();
    ring_from_ops("2Z8", labels, 2, 2, 0, |a, b| (a + b) % 4, |a, b| (2 * a * b) % 4)
        .expect("well-formed tables")
}

pub fn zero_ring() -> HyperringTable {
    let mut t = ring_from_ops("zero", vec!["0".into()], 2, 2, 0, |_, _| 0, |_, _| 0)
        .expect("well-formed tables");
    t.record_scalar_identity();
    t
}

/// Quotient of a (hyper)ring by a multiplicative group of units acting by
/// multiplication. Classes are labelled by their least member.
///
/// `units` must be a subgroup of the unit group of `base`; the base needs a
/// scalar identity.
pub fn unit_quotient(base: &HyperringTable, units: &[Elem], name: &str) -> HyperringTable {
    let one = base.one().or_else(|| base.find_scalar_identity()).expect("base needs an identity");
    let n = base.n();
    let mul_by = |u: Elem, x: Elem| {
        let mut args = vec![one; n];
        args[0] = u;
        args[1] = x;
        base.k(&args)
    };
    let size = base.size();
    let mut class_of = vec![usize::MAX; size];
    let mut reps = Vec::new();
    for x in 0..size {
        if class_of[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &u in units {
            class_of[mul_by(u, x)] = c;
        }
        class_of[x] = c;
    }
    let classes = reps.len();
    let members: Vec<Vec<Elem>> =
        (0..classes).map(|c| (0..size).filter(|&x| class_of[x] == c).collect()).collect();

    let m = base.m();
    let h = HyperOpTable::from_fn(classes, m, |t| {
        let mut out = Subset::empty(classes);
        let mut pick = vec![0; m];
        fill_choices(&members, t, &mut pick, 0, &mut |xs| {
            for z in base.h(xs).iter() {
                out.insert(class_of[z]);
            }
        });
        out
    });
    let k = NaryOpTable::from_fn(classes, n, |t| {
        let xs: Vec<Elem> = t.iter().map(|&c| reps[c]).collect();
        class_of[base.k(&xs)]
    });
    let labels = reps.iter().map(|&r| base.label(r).to_string()).collect();
    let mut t = HyperringTable::new(name, labels, h, k, class_of[base.zero()], Some(class_of[one]))
        .expect("well-formed tables");
    t.record_scalar_identity();
    t
}

fn fill_choices(
    members: &[Vec<Elem>],
    classes: &[Elem],
    pick: &mut Vec<Elem>,
    depth: usize,
    f: &mut impl FnMut(&[Elem]),
) {
    if depth == classes.len() {
        f(pick);
        return;
    }
    for &x in &members[classes[depth]] {
        pick[depth] = x;
        fill_choices(members, classes, pick, depth + 1, f);
    }
}

/// ℤ₁₂ modulo the unit group {1,5,7,11}: six classes 0,1,2,3,4,6.
pub fn z12_mod_units() -> HyperringTable {
    unit_quotient(&zn(12), &[1, 5, 7, 11], "z12modH")
}

/// ℤ₈ modulo its unit group {1,3,5,7}: classes 0,1,2,4.
pub fn z8_mod_units() -> HyperringTable {
    unit_quotient(&zn(8), &[1, 3, 5, 7], "z8modU")
}

/// ℤ₉ modulo {1,8}: five classes 0,1,2,3,4.
pub fn z9_mod_sign() -> HyperringTable {
    unit_quotient(&zn(9), &[1, 8], "z9modS")
}

/// The Krasner hyperfield {0,1} with 1 ⊕ 1 = {0,1}.
pub fn krasner_hyperfield() -> HyperringTable {
    let labels = vec!["0".to_string(), "1".to_string()];
    let h = HyperOpTable::from_fn(2, 2, |t| match t {
        [0, x] => Subset::singleton(2, *x),
        _ => Subset::full(2),
    });
    let k = NaryOpTable::from_fn(2, 2, |t| t[0] * t[1]);
    HyperringTable::new("krasner", labels, h, k, 0, Some(1)).expect("well-formed tables")
}

/// The sign hyperfield {0,1,-1} with 1 ⊕ -1 = {0,1,-1}.
pub fn sign_hyperfield() -> HyperringTable {
    // indices: 0 -> 0, 1 -> 1, 2 -> -1
    let labels = ["0", "1", "-1"].map(String::from).to_vec();
    let h = HyperOpTable::from_fn(3, 2, |t| match t {
        [0, x] => Subset::singleton(3, *x),
        [a, b] if a == b => Subset::singleton(3, *a),
        _ => Subset::full(3),
    });
    let k = NaryOpTable::from_fn(3, 2, |t| match t {
        [0, _] => 0,
        [a, b] if a == b => 1,
        _ => 2,
    });
    HyperringTable::new("sign", labels, h, k, 0, Some(1)).expect("well-formed tables")
}

/// 𝔽₂[x,y]/(x,y)², eight elements a + bx + cy stored as the bits of `a | b<<1 | c<<2`.
pub fn f2_xy_square_zero() -> HyperringTable {
    let names = ["0", "1", "x", "1+x", "y", "1+y", "x+y", "1+x+y"];
    let labels = names.map(String::from).to_vec();
    let mul = |p: Elem, q: Elem| {
        let (a, b, c) = (p & 1, p >> 1 & 1, p >> 2 & 1);
        let (d, e, f) = (q & 1, q >> 1 & 1, q >> 2 & 1);
        (a & d) | ((a & e) ^ (b & d)) << 1 | ((a & f) ^ (c & d)) << 2
    };
    let mut t = ring_from_ops("F2xy", labels, 2, 2, 0, |a, b| a ^ b, mul).expect("well-formed tables");
    t.record_scalar_identity();
    t
}

/// Every builder above at its default parameters, in a fixed order.
pub fn builtin_corpus() -> Vec<HyperringTable> {
    vec![
        z12_mod_units(),
        zn(2),
        zn(3),
        zn(4),
        zn(6),
        zn(8),
        zn(12),
        zero_ring(),
        krasner_hyperfield(),
        sign_hyperfield(),
        z8_mod_units(),
        z9_mod_sign(),
        f2_xy_square_zero(),
        zn_nary(6, 3),
        zn_with_arities(4, 3, 2),
        even_z8(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z12_mod_units_matches_hand_table() {
        let r = z12_mod_units();
        let labels: Vec<&str> = r.labels().iter().map(String::as_str).collect();
        assert_eq!(labels, ["0", "1", "2", "3", "4", "6"]);
        let e = |l: &str| r.elem(l).unwrap();
        let sum = |a: &str, b: &str| -> Vec<&str> { r.h(&[e(a), e(b)]).iter().map(|x| r.label(x)).collect() };
        assert_eq!(sum("1", "1"), ["0", "2", "4", "6"]);
        assert_eq!(sum("2", "4"), ["2", "6"]);
        assert_eq!(sum("3", "3"), ["0", "6"]);
        assert_eq!(sum("6", "2"), ["4"]);
        assert_eq!(r.one(), Some(e("1")));
    }

    #[test]
    fn sizes() {
        assert_eq!(z8_mod_units().size(), 4);
        assert_eq!(z9_mod_sign().size(), 5);
        assert_eq!(f2_xy_square_zero().size(), 8);
        assert_eq!(even_z8().one(), None);
    }
}
