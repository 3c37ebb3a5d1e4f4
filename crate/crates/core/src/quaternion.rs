//! Quaternion algebras `h(a, b)`: construction, conjugation and norm, the
//! standard isomorphisms, rational points on the associated conic, explicit
//! splitting, and recognition of 4-dimensional central algebras.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{AlgElem, Algebra, LinMap};
use crate::error::{contract, invalid, Error, Result};
use crate::field::{Elem, Field, SquareRoot};
use crate::linalg;
use crate::wedderburn::{peel_matrix_subalgebra, refine_to_matrix_decomposition, MatrixDecomposition, Peel, ProbeStrategy};

/// Basis labels of [`make_quaternion`]: `1, i, j, k` with `i² = a`, `j² = b`, `k = ij`.
pub const QUATERNION_LABELS: [&str; 4] = ["1", "i", "j", "k"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionParams {
    field: Field,
    a: Elem,
    b: Elem,
}

impl QuaternionParams {
    pub fn new(field: &Field, a: Elem, b: Elem) -> Result<QuaternionParams> {
        if field.characteristic() == 2 {
            return Err(Error::Unsupported("quaternion algebras in characteristic 2".into()));
        }
        field.validate(&a)?;
        field.validate(&b)?;
        if a.is_zero() || b.is_zero() {
            return invalid("quaternion parameters must be nonzero");
        }
        Ok(QuaternionParams { field: field.clone(), a, b })
    }

    pub fn from_ints(field: &Field, a: i64, b: i64) -> Result<QuaternionParams> {
        QuaternionParams::new(field, field.from_i64(a), field.from_i64(b))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn a(&self) -> &Elem {
        &self.a
    }

    pub fn b(&self) -> &Elem {
        &self.b
    }
}

/// `h(a, b)` on the basis `1, i, j, k`.
pub fn make_quaternion(p: &QuaternionParams) -> Result<Algebra> {
    let k = &p.field;
    let (a, b) = (&p.a, &p.b);
    let z = k.zero();
    let e = |c: [Elem; 4]| c.to_vec();
    let neg = |x: &Elem| k.neg(x);
    let one = k.one();
    let ab = k.mul(a, b);
    let products = vec![
        // 1 * _
        e([one.clone(), z.clone(), z.clone(), z.clone()]),
        e([z.clone(), one.clone(), z.clone(), z.clone()]),
        e([z.clone(), z.clone(), one.clone(), z.clone()]),
        e([z.clone(), z.clone(), z.clone(), one.clone()]),
        // i * _
        e([z.clone(), one.clone(), z.clone(), z.clone()]),
        e([a.clone(), z.clone(), z.clone(), z.clone()]),
        e([z.clone(), z.clone(), z.clone(), one.clone()]),
        e([z.clone(), z.clone(), a.clone(), z.clone()]),
        // j * _
        e([z.clone(), z.clone(), one.clone(), z.clone()]),
        e([z.clone(), z.clone(), z.clone(), neg(&one)]),
        e([b.clone(), z.clone(), z.clone(), z.clone()]),
        e([z.clone(), neg(b), z.clone(), z.clone()]),
        // k * _
        e([z.clone(), z.clone(), z.clone(), one.clone()]),
        e([z.clone(), z.clone(), neg(a), z.clone()]),
        e([z.clone(), b.clone(), z.clone(), z.clone()]),
        e([neg(&ab), z.clone(), z.clone(), z.clone()]),
    ];
    Algebra::from_products(k, QUATERNION_LABELS.iter().map(|s| s.to_string()).collect(), products)
}

/// `x + yi + zj + wk ↦ x − yi − zj − wk`.
pub fn quat_conj(h: &Algebra, q: &AlgElem) -> AlgElem {
    let k = h.field();
    let c = q.coords();
    AlgElem::new(vec![c[0].clone(), k.neg(&c[1]), k.neg(&c[2]), k.neg(&c[3])])
}

/// `N(q) = q q̄ = x² − a y² − b z² + ab w²`, computed both ways.
pub fn quat_norm(p: &QuaternionParams, h: &Algebra, q: &AlgElem) -> Result<Elem> {
    let k = h.field();
    let prod = h.mul(q, &quat_conj(h, q));
    let Some(n) = h.as_scalar(&prod) else {
        return contract("q times its conjugate is not a scalar");
    };
    let c = q.coords();
    let sq = |x: &Elem| k.mul(x, x);
    let form = k.add(
        &k.sub(&k.sub(&sq(&c[0]), &k.mul(&p.a, &sq(&c[1]))), &k.mul(&p.b, &sq(&c[2]))),
        &k.mul(&k.mul(&p.a, &p.b), &sq(&c[3])),
    );
    if form != n {
        return contract("norm form disagrees with q times its conjugate");
    }
    Ok(n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardIso {
    /// `h(a, b) ≅ h(u²a, v²b)`.
    Scale { u: Elem, v: Elem },
    /// `h(a, b) ≅ h(b, a)`.
    Swap,
    /// `h(a, b) ≅ h(a, −ab)`.
    Twist,
}

#[derive(Clone, Debug)]
pub struct QuaternionIso {
    pub source: Algebra,
    pub target_params: QuaternionParams,
    pub target: Algebra,
    pub map: LinMap,
}

/// The map `1, i, j, k ↦ 1, i_img, j_img, i_img j_img`, verified to be an algebra isomorphism.
pub fn quaternion_map(src: &Algebra, dst: &Algebra, i_img: AlgElem, j_img: AlgElem) -> Result<LinMap> {
    let k_img = dst.mul(&i_img, &j_img);
    let mut map = LinMap::from_images(dst.dim(), &[dst.one(), i_img, j_img, k_img]);
    map.verify_homomorphism(src, dst)?;
    if !map.is_bijective(src.field())? {
        return contract("quaternion map is not bijective");
    }
    Ok(map)
}

pub fn standard_iso(p: &QuaternionParams, kind: &StandardIso) -> Result<QuaternionIso> {
    let k = &p.field;
    let source = make_quaternion(p)?;
    let target_params = match kind {
        StandardIso::Scale { u, v } => QuaternionParams::new(k, k.mul(&k.mul(u, u), &p.a), k.mul(&k.mul(v, v), &p.b))?,
        StandardIso::Swap => QuaternionParams::new(k, p.b.clone(), p.a.clone())?,
        StandardIso::Twist => QuaternionParams::new(k, p.a.clone(), k.neg(&k.mul(&p.a, &p.b)))?,
    };
    let target = make_quaternion(&target_params)?;
    let (i_img, j_img) = match kind {
        StandardIso::Scale { u, v } => (target.scale(&k.inverse(u)?, &target.basis(1)), target.scale(&k.inverse(v)?, &target.basis(2))),
        StandardIso::Swap => (target.basis(2), target.basis(1)),
        StandardIso::Twist => (target.basis(1), target.scale(&k.inverse(&p.a)?, &target.basis(3))),
    };
    let map = quaternion_map(&source, &target, i_img, j_img)?;
    Ok(QuaternionIso { source, target_params, target, map })
}

/// Which tensor relation to realise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorRelation {
    /// `h(a, b) ⊗ h(a', b) ≅ h(aa', b) ⊗ M₂`.
    SharedSecond,
    /// `h(a, b) ⊗ h(a, b') ≅ h(a, bb') ⊗ M₂`.
    SharedFirst,
}

#[derive(Clone, Debug)]
pub struct TensorSplit {
    pub tensor: Algebra,
    /// Matrix units of the split quaternion factor, inside the tensor.
    pub decomposition: MatrixDecomposition,
    pub peel: Peel,
    /// Parameters of the remaining quaternion factor.
    pub params: QuaternionParams,
    /// Verified isomorphism from `h(params)` onto the peeled centralizer.
    pub iso: LinMap,
}

/// Realises a tensor relation on `h(p1) ⊗ h(p2)`: finds the split factor,
/// peels it off, and identifies the centralizer with the expected quaternion algebra.
pub fn tensor_relation(p1: &QuaternionParams, p2: &QuaternionParams, kind: TensorRelation) -> Result<TensorSplit> {
    let k = &p1.field;
    if *k != p2.field {
        return Err(Error::FieldMismatch);
    }
    let h1 = make_quaternion(p1)?;
    let h2 = make_quaternion(p2)?;
    let t = h1.tensor_product(&h2)?;
    let tens = t.algebra.clone();
    let l = |x: usize| t.left.apply(k, &h1.basis(x));
    let r = |x: usize| t.right.apply(k, &h2.basis(x));
    // Generators of the split factor Q2, the remaining factor Q1, the
    // remaining parameters, and a norm-zero element of Q2.
    let (q2i, q2j, q1i, q1j, params, zd_coeffs) = match kind {
        TensorRelation::SharedSecond => {
            if p1.b != p2.b {
                return invalid("second parameters differ");
            }
            // Q2 = h(a', b²) with conic point (0, 1, b).
            let params = QuaternionParams::new(k, k.mul(&p1.a, &p2.a), p1.b.clone())?;
            (r(1), tens.mul(&l(2), &r(2)), tens.mul(&l(1), &r(1)), l(2), params, [p1.b.clone(), k.zero(), k.one()])
        }
        TensorRelation::SharedFirst => {
            if p1.a != p2.a {
                return invalid("first parameters differ");
            }
            // Q2 = h(a², b') with conic point (1, 0, a).
            let params = QuaternionParams::new(k, p1.a.clone(), k.mul(&p1.b, &p2.b))?;
            (tens.mul(&l(1), &r(1)), r(2), l(1), tens.mul(&l(2), &r(2)), params, [p1.a.clone(), k.one(), k.zero()])
        }
    };
    let q2 = tens.subalgebra(vec![tens.one(), q2i.clone(), q2j.clone(), tens.mul(&q2i, &q2j)])?;
    let zd = tens.add(
        &tens.add(&tens.scale(&zd_coeffs[0], &tens.one()), &tens.scale(&zd_coeffs[1], &q2i)),
        &tens.scale(&zd_coeffs[2], &q2j),
    );
    let zd_c = q2.project(&zd).ok_or_else(|| Error::Contract("norm-zero element outside the factor".into()))?;
    let inner = refine_to_matrix_decomposition(&q2.algebra, Some(&zd_c), &ProbeStrategy::cheap())?;
    if inner.decomposition.q() != 2 {
        return contract("split factor did not produce 2×2 matrix units");
    }
    let decomposition = inner.decomposition.map(|u| q2.embed(u));
    let peel = peel_matrix_subalgebra(&tens, &decomposition)?;
    let c = &peel.centralizer;
    let ci = c.project(&q1i).ok_or_else(|| Error::Contract("first generator outside the centralizer".into()))?;
    let cj = c.project(&q1j).ok_or_else(|| Error::Contract("second generator outside the centralizer".into()))?;
    let h = make_quaternion(&params)?;
    let iso = quaternion_map(&h, &c.algebra, ci, cj)?;
    Ok(TensorSplit { tensor: tens, decomposition, peel, params, iso })
}

/// A nonzero solution of `a x² + b y² − z² = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConicPoint {
    pub x: Elem,
    pub y: Elem,
    pub z: Elem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConicSearch {
    Point(ConicPoint),
    NotFoundWithinBound,
    /// `a < 0` and `b < 0` over ℚ: the form is negative definite.
    ProvablyNone,
}

fn conic_holds(p: &QuaternionParams, pt: &ConicPoint) -> bool {
    let k = &p.field;
    let lhs = k.add(&k.mul(&p.a, &k.mul(&pt.x, &pt.x)), &k.mul(&p.b, &k.mul(&pt.y, &pt.y)));
    let nonzero = !(pt.x.is_zero() && pt.y.is_zero() && pt.z.is_zero());
    nonzero && lhs == k.mul(&pt.z, &pt.z)
}

fn rat(e: &Elem) -> &BigRational {
    match e {
        Elem::Rat(r) => r,
        _ => unreachable!("rational field"),
    }
}

/// Scales a rational triple to a primitive integer triple.
fn primitive(k: &Field, x: &BigRational, y: &BigRational, z: &BigRational) -> ConicPoint {
    let den = x.denom().lcm(y.denom()).lcm(z.denom());
    let d = BigRational::from_integer(den);
    let (xi, yi, zi) = ((x * &d).to_integer(), (y * &d).to_integer(), (z * &d).to_integer());
    let g = xi.gcd(&yi).gcd(&zi);
    let g = if g.is_zero() { BigInt::one() } else { g };
    let f = |n: BigInt| k.from_bigint(&(n / &g));
    ConicPoint { x: f(xi), y: f(yi), z: f(zi) }
}

/// Searches `(x, y)` in order of increasing `max(x, y)` (then lexicographically)
/// and takes `z` as an exact square root; over ℚ, `x, y` range over
/// nonnegative integers up to `height_bound`.
pub fn conic_point(p: &QuaternionParams, height_bound: u64) -> ConicSearch {
    let k = &p.field;
    if k.depth() == 0 && k.is_rationals() && rat(&p.a) < &BigRational::zero() && rat(&p.b) < &BigRational::zero() {
        return ConicSearch::ProvablyNone;
    }
    let bound = match (k.depth(), k.prime_modulus()) {
        (0, Some(pr)) => pr - 1,
        _ => height_bound,
    };
    for h in 0..=bound {
        for x in 0..=h {
            for y in 0..=h {
                if x.max(y) != h || (x == 0 && y == 0) {
                    continue;
                }
                let (xe, ye) = (k.from_i64(x as i64), k.from_i64(y as i64));
                let s = k.add(&k.mul(&p.a, &k.mul(&xe, &xe)), &k.mul(&p.b, &k.mul(&ye, &ye)));
                if let SquareRoot::Root(z) = k.sqrt(&s) {
                    let pt = if k.is_rationals() {
                        primitive(k, rat(&xe), rat(&ye), rat(&z))
                    } else {
                        ConicPoint { x: xe, y: ye, z }
                    };
                    debug_assert!(conic_holds(p, &pt));
                    return ConicSearch::Point(pt);
                }
            }
        }
    }
    ConicSearch::NotFoundWithinBound
}

/// A 2×2 system of matrix units of `h(a, b)` from a conic point, through the
/// norm-zero element `z + x i + y j`.
pub fn split_from_conic(p: &QuaternionParams, pt: &ConicPoint) -> Result<MatrixDecomposition> {
    if !conic_holds(p, pt) {
        return invalid("point does not lie on the conic");
    }
    let h = make_quaternion(p)?;
    let q = AlgElem::new(vec![pt.z.clone(), pt.x.clone(), pt.y.clone(), p.field.zero()]);
    if !quat_norm(p, &h, &q)?.is_zero() {
        return contract("conic point gives a quaternion of nonzero norm");
    }
    let r = refine_to_matrix_decomposition(&h, Some(&q), &ProbeStrategy::cheap())?;
    if r.decomposition.q() != 2 {
        return contract("norm-zero quaternion did not split the algebra");
    }
    Ok(r.decomposition)
}

#[derive(Clone, Debug)]
pub enum Recognition {
    Quaternion {
        params: QuaternionParams,
        /// Images of `1, i, j, k` in the input basis.
        basis: [AlgElem; 4],
        /// Verified isomorphism `h(params) → A`.
        iso: LinMap,
    },
    /// Every candidate produced a square-zero element instead.
    ZeroDivisor(AlgElem),
}

/// Identifies a 4-dimensional central algebra with some `h(a, b)`.
pub fn recognize_quaternion(alg: &Algebra) -> Result<Recognition> {
    let k = alg.field();
    if alg.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: alg.dim() });
    }
    if k.characteristic() == 2 {
        return Err(Error::Unsupported("quaternion recognition in characteristic 2".into()));
    }
    if alg.center()?.len() != 1 {
        return invalid("algebra is not central");
    }
    let half = k.inverse(&k.from_i64(2))?;
    let mut candidates: Vec<AlgElem> = (1..4).map(|i| alg.basis(i)).collect();
    for i in 1..4 {
        for j in i + 1..4 {
            candidates.push(alg.add(&alg.basis(i), &alg.basis(j)));
        }
    }
    let mut nilpotent = None;
    for z in candidates {
        let g = alg.minimal_polynomial(&z)?;
        if g.degree() != Some(2) {
            continue;
        }
        // x = z + p/2 has x² = p²/4 − c for g = X² + pX + c.
        let pc = g.coeff(k, 1);
        let x = alg.add(&z, &alg.scalar(&k.mul(&pc, &half)));
        let Some(a) = alg.as_scalar(&alg.mul(&x, &x)) else {
            return contract("completed square is not scalar");
        };
        if a.is_zero() {
            nilpotent.get_or_insert(x);
            continue;
        }
        let anti = alg.left_mul_matrix(&x).add(&alg.right_mul_matrix(&x), k);
        let ker: Vec<AlgElem> = linalg::kernel(k, &anti)?.into_iter().map(AlgElem::new).collect();
        let mut ys = ker.clone();
        if ker.len() >= 2 {
            ys.push(alg.add(&ker[0], &ker[1]));
        }
        for y in ys {
            let y2 = alg.mul(&y, &y);
            let Some(b) = alg.as_scalar(&y2) else { continue };
            if b.is_zero() {
                nilpotent.get_or_insert(y);
                continue;
            }
            let params = QuaternionParams::new(k, a.clone(), b)?;
            let h = make_quaternion(&params)?;
            let xy = alg.mul(&x, &y);
            let iso = quaternion_map(&h, alg, x.clone(), y.clone())?;
            return Ok(Recognition::Quaternion { params, basis: [alg.one(), x, y, xy], iso });
        }
    }
    match nilpotent {
        Some(n) => Ok(Recognition::ZeroDivisor(n)),
        None => contract("no element of degree two found in a central 4-dimensional algebra"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn hamilton_is_central_simple() {
        let p = QuaternionParams::from_ints(&q(), -1, -1).unwrap();
        let h = make_quaternion(&p).unwrap();
        assert!(h.central_simple_check().unwrap().is_central_simple());
        let k = h.basis(3);
        assert_eq!(h.mul(&k, &k), h.scalar(&q().from_i64(-1)));
    }

    #[test]
    fn norm_of_i() {
        let p = QuaternionParams::from_ints(&q(), -1, -1).unwrap();
        let h = make_quaternion(&p).unwrap();
        assert_eq!(quat_conj(&h, &h.basis(1)), h.neg(&h.basis(1)));
        assert_eq!(quat_norm(&p, &h, &h.basis(1)).unwrap(), q().from_i64(1));
    }

    #[test]
    fn standard_isos_verify() {
        let k = q();
        let p = QuaternionParams::from_ints(&k, 1, 1).unwrap();
        let s = standard_iso(&p, &StandardIso::Scale { u: k.from_i64(2), v: k.one() }).unwrap();
        assert_eq!(s.target_params.a(), &k.from_i64(4));
        let p = QuaternionParams::from_ints(&k, 2, 3).unwrap();
        standard_iso(&p, &StandardIso::Swap).unwrap();
        let t = standard_iso(&p, &StandardIso::Twist).unwrap();
        assert_eq!(t.target_params.b(), &k.from_i64(-6));
    }

    #[test]
    fn conic_examples() {
        let k = q();
        let p = QuaternionParams::from_ints(&k, -1, -1).unwrap();
        assert_eq!(conic_point(&p, 10), ConicSearch::ProvablyNone);
        let f5 = Field::prime(5).unwrap();
        let p = QuaternionParams::from_ints(&f5, 2, 3).unwrap();
        let ConicSearch::Point(pt) = conic_point(&p, 0) else { panic!() };
        assert!(conic_holds(&p, &pt));
        let p = QuaternionParams::from_ints(&k, 2, 3).unwrap();
        assert_eq!(conic_point(&p, 30), ConicSearch::NotFoundWithinBound);
    }

    #[test]
    fn split_h11() {
        let k = q();
        let p = QuaternionParams::from_ints(&k, 1, 1).unwrap();
        let pt = ConicPoint { x: k.one(), y: k.zero(), z: k.one() };
        let d = split_from_conic(&p, &pt).unwrap();
        assert_eq!(d.q(), 2);
    }

    #[test]
    fn recognise_m2() {
        let a = Algebra::matrix_algebra(&q(), 2);
        let Recognition::Quaternion { iso, .. } = recognize_quaternion(&a).unwrap() else { panic!() };
        assert!(iso.is_multiplicative());
    }

    #[test]
    fn tensor_relations_peel() {
        let k = q();
        let m = QuaternionParams::from_ints(&k, -1, -1).unwrap();
        let t = tensor_relation(&m, &m, TensorRelation::SharedSecond).unwrap();
        assert_eq!(t.params.a(), &k.from_i64(1));
        assert_eq!(t.peel.centralizer.dim(), 4);
        let p1 = QuaternionParams::from_ints(&k, 2, 3).unwrap();
        let p2 = QuaternionParams::from_ints(&k, 2, 5).unwrap();
        let t = tensor_relation(&p1, &p2, TensorRelation::SharedFirst).unwrap();
        assert_eq!(t.params.b(), &k.from_i64(15));
        assert!(t.iso.is_multiplicative());
    }
}
