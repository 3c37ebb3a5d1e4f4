use std::cmp::Ordering;

use csa_core::algebra::{AlgElem, Algebra, LinMap};
use csa_core::becher::{splitting_sequence_less, SplittingSequence};
use csa_core::involution::{classify_first_kind, plus_minus_split, Involution, InvolutionKind};
use csa_core::linalg::Matrix;
use csa_core::quaternion::{make_quaternion, quat_conj, QuaternionParams};
use csa_core::splitting::reduced_char_poly;
use csa_core::wedderburn::MatrixDecomposition;
use csa_core::{Elem, Field, Inversion, Poly};
use proptest::prelude::*;

fn sqrt2() -> Field {
    let q = Field::rationals();
    q.adjoin_root(&Poly::from_ints(&q, &[-2, 0, 1])).unwrap()
}

fn tower_elem(k: &Field, c: (i64, i64)) -> Elem {
    k.from_coeffs(vec![k.base().from_i64(c.0), k.base().from_i64(c.1)])
}

fn seq(v: Vec<u32>) -> SplittingSequence {
    SplittingSequence::new(v).unwrap()
}

fn m2_transpose() -> (Algebra, Involution) {
    let k = Field::rationals();
    let a = Algebra::matrix_algebra(&k, 2);
    let units = (0..4)
        .map(|p| {
            let mut m = Matrix::zeros(&k, 2, 2);
            m.set(p / 2, p % 2, k.one());
            a.matrix_to_elem(2, &m)
        })
        .collect();
    let t = Involution::transpose(&a, &MatrixDecomposition::new(2, units).unwrap()).unwrap();
    (a, t)
}

proptest! {
    #[test]
    fn prime_field_axioms(x in 0i64..101, y in 0i64..101, z in 0i64..101) {
        let k = Field::prime(101).unwrap();
        let (x, y, z) = (k.from_i64(x), k.from_i64(y), k.from_i64(z));
        prop_assert_eq!(k.mul(&x, &k.add(&y, &z)), k.add(&k.mul(&x, &y), &k.mul(&x, &z)));
        prop_assert_eq!(k.mul(&k.mul(&x, &y), &z), k.mul(&x, &k.mul(&y, &z)));
        match k.invert_or_witness(&x) {
            Inversion::Inverse(v) => prop_assert!(k.is_one(&k.mul(&x, &v))),
            Inversion::Zero => prop_assert!(x.is_zero()),
            Inversion::Witness(_) => prop_assert!(false, "F_p has no zero divisors"),
        }
    }

    #[test]
    fn tower_field_axioms(a in (-9i64..9, -9i64..9), b in (-9i64..9, -9i64..9), c in (-9i64..9, -9i64..9)) {
        let k = sqrt2();
        let (x, y, z) = (tower_elem(&k, a), tower_elem(&k, b), tower_elem(&k, c));
        prop_assert_eq!(k.mul(&x, &y), k.mul(&y, &x));
        prop_assert_eq!(k.mul(&x, &k.add(&y, &z)), k.add(&k.mul(&x, &y), &k.mul(&x, &z)));
        prop_assert_eq!(k.mul(&k.mul(&x, &y), &z), k.mul(&x, &k.mul(&y, &z)));
        prop_assert_eq!(k.add(&x, &k.neg(&x)), k.zero());
        if !x.is_zero() {
            let v = k.inverse(&x).unwrap();
            prop_assert!(k.is_one(&k.mul(&x, &v)));
        }
    }

    #[test]
    fn multiset_order_is_strict_total(
        s in prop::collection::vec(2u32..7, 0..8),
        t in prop::collection::vec(2u32..7, 0..8),
        u in prop::collection::vec(2u32..7, 0..8),
    ) {
        let (s, t, u) = (seq(s), seq(t), seq(u));
        prop_assert!(!splitting_sequence_less(&s, &s));
        prop_assert!(!(splitting_sequence_less(&s, &t) && splitting_sequence_less(&t, &s)));
        if splitting_sequence_less(&s, &t) && splitting_sequence_less(&t, &u) {
            prop_assert!(splitting_sequence_less(&s, &u));
        }
        let mut ss = s.entries().to_vec();
        let mut ts = t.entries().to_vec();
        ss.sort_unstable();
        ts.sort_unstable();
        prop_assert_eq!(s.multiset_cmp(&t) == Ordering::Equal, ss == ts);
    }

    #[test]
    fn replacing_an_entry_by_smaller_ones_decreases(
        s in prop::collection::vec(3u32..7, 1..6),
        pick in 0usize..6,
        smaller in prop::collection::vec(0u32..100, 0..5),
    ) {
        let i = pick % s.len();
        let n = s[i];
        let mut t = s.clone();
        t.remove(i);
        t.extend(smaller.iter().map(|r| 2 + r % (n - 2)));
        prop_assert!(splitting_sequence_less(&seq(t), &seq(s)));
    }

    #[test]
    fn quaternion_reduced_norm(c in prop::array::uniform8(-6i64..6), a in -5i64..5, b in -5i64..5) {
        prop_assume!(a != 0 && b != 0);
        let k = Field::rationals();
        let h = make_quaternion(&QuaternionParams::from_ints(&k, a, b).unwrap()).unwrap();
        let x = h.from_ints(&c[..4]);
        let y = h.from_ints(&c[4..]);
        let nx = reduced_char_poly(&h, &x).unwrap().nrd;
        let ny = reduced_char_poly(&h, &y).unwrap().nrd;
        prop_assert_eq!(reduced_char_poly(&h, &h.mul(&x, &y)).unwrap().nrd, k.mul(&nx, &ny));
        prop_assert_eq!(h.as_scalar(&h.mul(&x, &quat_conj(&h, &x))), Some(nx));
    }

    #[test]
    fn twisted_transpose_eigenspaces(c in prop::array::uniform3(-5i64..5), skew in -5i64..5) {
        let (a, t) = m2_transpose();
        let k = a.field().clone();
        // symmetric twists stay orthogonal, skew ones become symplectic
        let sym = a.matrix_to_elem(2, &Matrix::from_ints(&k, &[&[c[0], c[1]], &[c[1], c[2]]]));
        if let Ok(j) = t.twist(&sym) {
            let (p, m) = plus_minus_split(&j).unwrap();
            prop_assert_eq!((p.len(), m.len()), (3, 1));
            prop_assert_eq!(classify_first_kind(&j).unwrap(), InvolutionKind::Orthogonal);
        }
        prop_assume!(skew != 0);
        let alt = a.matrix_to_elem(2, &Matrix::from_ints(&k, &[&[0, skew], &[-skew, 0]]));
        let j = t.twist(&alt).unwrap();
        prop_assert_eq!(plus_minus_split(&j).unwrap().0.len(), 1);
    }

    #[test]
    fn inner_automorphisms_are_recovered(c in prop::array::uniform4(-4i64..4)) {
        let k = Field::rationals();
        let a = make_quaternion(&QuaternionParams::from_ints(&k, -1, -3).unwrap()).unwrap();
        let u = a.from_ints(&c);
        let Some(u_inv) = a.inverse(&u).unwrap() else { return Ok(()) };
        let images: Vec<AlgElem> = (0..4).map(|i| a.mul3(&u, &a.basis(i), &u_inv)).collect();
        let inner = a.skolem_noether(&LinMap::from_images(4, &images)).unwrap();
        for (i, img) in images.iter().enumerate() {
            prop_assert_eq!(a.mul3(&inner.conjugator, &a.basis(i), &inner.inverse), img.clone());
        }
        // w is unique up to a scalar, so w⁻¹ u is central
        prop_assert!(a.as_scalar(&a.mul(&inner.inverse, &u)).is_some());
    }
}
