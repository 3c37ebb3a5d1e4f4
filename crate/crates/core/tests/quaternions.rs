use csa_core::algebra::{AlgElem, Algebra};
use csa_core::linalg::{self, Matrix};
use csa_core::quaternion::{
    conic_point, make_quaternion, quat_conj, recognize_quaternion, split_from_conic, ConicPoint, ConicSearch,
    QuaternionParams, Recognition,
};
use csa_core::{Field, Inversion};

fn params(k: &Field, a: i64, b: i64) -> QuaternionParams {
    QuaternionParams::from_ints(k, a, b).unwrap()
}

#[test]
fn generator_relations() {
    let k = Field::rationals();
    for (a, b) in [(-1, -1), (2, 3), (-5, 7)] {
        let h = make_quaternion(&params(&k, a, b)).unwrap();
        assert!(h.central_simple_check().unwrap().is_central_simple());
        let (i, j, g) = (h.basis(1), h.basis(2), h.basis(3));
        assert_eq!(h.mul(&i, &i), h.from_ints(&[a, 0, 0, 0]));
        assert_eq!(h.mul(&j, &j), h.from_ints(&[b, 0, 0, 0]));
        assert_eq!(h.mul(&i, &j), g);
        assert_eq!(h.mul(&j, &i), h.neg(&g));
        assert_eq!(h.mul(&g, &g), h.from_ints(&[-a * b, 0, 0, 0]));
    }
}

#[test]
fn conjugation_reverses_products() {
    let k = Field::rationals();
    let h = make_quaternion(&params(&k, 2, -3)).unwrap();
    let xs = [[1, 2, 0, -1], [0, 3, 1, 1], [2, -1, 4, 0]];
    for x in &xs {
        for y in &xs {
            let (x, y) = (h.from_ints(x), h.from_ints(y));
            assert_eq!(quat_conj(&h, &h.mul(&x, &y)), h.mul(&quat_conj(&h, &y), &quat_conj(&h, &x)));
        }
    }
}

#[test]
fn finite_field_conics_always_have_points() {
    for p in [3u64, 5, 7, 11] {
        let k = Field::prime(p).unwrap();
        for a in 1..p as i64 {
            for b in 1..p as i64 {
                let qp = params(&k, a, b);
                let ConicSearch::Point(pt) = conic_point(&qp, 0) else { panic!("F_{p}: h({a},{b}) has no point") };
                let lhs = k.add(&k.mul(&k.from_i64(a), &k.mul(&pt.x, &pt.x)), &k.mul(&k.from_i64(b), &k.mul(&pt.y, &pt.y)));
                assert_eq!(lhs, k.mul(&pt.z, &pt.z));
                let h = make_quaternion(&qp).unwrap();
                split_from_conic(&qp, &pt).unwrap().verify(&h).unwrap();
            }
        }
    }
}

#[test]
fn h_a_one_minus_a_splits_at_one_one_one() {
    let k = Field::rationals();
    let one = ConicPoint { x: k.one(), y: k.one(), z: k.one() };
    for a in [2, -3, 5, 7] {
        let qp = params(&k, a, 1 - a);
        let d = split_from_conic(&qp, &one).unwrap();
        assert_eq!(d.q(), 2);
        d.verify(&make_quaternion(&qp).unwrap()).unwrap();
    }
}

#[test]
fn rational_point_with_denominator() {
    let k = Field::rationals();
    let qp = params(&k, 4, 7);
    let half = k.parse_scalar("1/2").unwrap();
    let d = split_from_conic(&qp, &ConicPoint { x: half, y: k.zero(), z: k.one() }).unwrap();
    d.verify(&make_quaternion(&qp).unwrap()).unwrap();
}

#[test]
fn invalid_point_rejected() {
    let k = Field::rationals();
    let qp = params(&k, 2, 3);
    assert!(split_from_conic(&qp, &ConicPoint { x: k.one(), y: k.one(), z: k.one() }).is_err());
}

#[test]
fn norm_difference_parameters_split() {
    // a = c² − d² b puts (1, d, c) on a x² + b y² = z²
    let k = Field::rationals();
    for b in [2i64, 3, 5, -2] {
        for (c, d) in [(1i64, 1i64), (2, 1), (1, 2), (3, 2)] {
            let a = c * c - d * d * b;
            if a == 0 || [1, 4, 9, 16, 25].contains(&a) {
                continue;
            }
            let qp = params(&k, a, b);
            let ConicSearch::Point(pt) = conic_point(&qp, 20) else { panic!("h({a},{b}) point not found") };
            split_from_conic(&qp, &pt).unwrap().verify(&make_quaternion(&qp).unwrap()).unwrap();
        }
    }
}

#[test]
fn invertible_iff_nonzero_norm_over_f5() {
    let k = Field::prime(5).unwrap();
    let h = make_quaternion(&params(&k, 2, 3)).unwrap();
    let mut singular = 0;
    for n in 0..625u32 {
        let c: Vec<i64> = (0..4).map(|t| ((n / 5u32.pow(t)) % 5) as i64).collect();
        let x = h.from_ints(&c);
        let norm = h.as_scalar(&h.mul(&x, &quat_conj(&h, &x))).unwrap();
        let invertible = h.is_invertible(&x).unwrap();
        assert_eq!(invertible, !norm.is_zero());
        if !invertible && !x.is_zero() {
            singular += 1;
            assert!(matches!(k.invert_or_witness(&norm), Inversion::Zero));
        }
    }
    // h(2,3) over F_5 is M₂(F₅): 625 − |GL₂(F₅)| − 1 = 625 − 480 − 1
    assert_eq!(singular, 144);
}

fn scramble(a: &Algebra, cols: &[[i64; 4]; 3]) -> Algebra {
    let k = a.field();
    let mut columns = vec![a.one().coords().to_vec()];
    columns.extend(cols.iter().map(|c| c.iter().map(|&n| k.from_i64(n)).collect::<Vec<_>>()));
    let c = Matrix::from_columns(4, &columns);
    let c_inv = linalg::inverse(k, &c).unwrap().expect("invertible change of basis");
    let new: Vec<AlgElem> = columns.into_iter().map(AlgElem::new).collect();
    let mut products = Vec::new();
    for x in &new {
        for y in &new {
            products.push(c_inv.mul_vec(a.mul(x, y).coords(), k));
        }
    }
    Algebra::from_products(k, vec!["1".into(), "p".into(), "q".into(), "r".into()], products).unwrap()
}

#[test]
fn recognize_scrambled_hamilton() {
    let k = Field::rationals();
    let h = make_quaternion(&params(&k, -1, -1)).unwrap();
    let a = scramble(&h, &[[1, 1, 0, 0], [2, 0, 1, 1], [0, 1, -1, 3]]);
    let Recognition::Quaternion { params, iso, .. } = recognize_quaternion(&a).unwrap() else {
        panic!("division algebra produced a zero divisor")
    };
    let mut iso = iso;
    iso.verify_homomorphism(&make_quaternion(&params).unwrap(), &a).unwrap();
    assert!(iso.is_bijective(&k).unwrap());
    // Hamilton's quaternions stay non-split: both parameters negative.
    assert_eq!(conic_point(&params, 5), ConicSearch::ProvablyNone);
}
