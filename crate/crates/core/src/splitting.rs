//! Dynamical splitting: a tower `K` over the base field together with a
//! full system of matrix units of `A ⊗ K`, plus reduced characteristic
//! polynomials, traces, norms and the norm-based inverse.

use crate::algebra::{AlgElem, Algebra};
use crate::error::{contract, invalid, Error, Result};
use crate::field::{split_tower, Elem, Field};
use crate::linalg;
use crate::poly::Poly;
use crate::wedderburn::{
    compose_decompositions, matrix_units_from_zero_divisor, probe_zero_divisor, MatrixDecomposition, ProbeStrategy,
};

/// Limits on how far the splitting search may go.
#[derive(Clone, Copy, Debug)]
pub struct SplitBudget {
    pub max_branches: usize,
    pub max_adjoins: usize,
}

impl Default for SplitBudget {
    fn default() -> Self {
        SplitBudget { max_branches: 16, max_adjoins: 16 }
    }
}

/// A tower split taken during the search; the search continued on `kept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitEvent {
    pub level: usize,
    pub tower_before: Field,
    pub kept: Poly,
    pub alternative: Poly,
}

#[derive(Clone, Debug)]
pub struct SplittingCertificate {
    pub tower: Field,
    pub history: Vec<SplitEvent>,
    /// Matrix units of `A ⊗ tower`, coordinates in the original basis.
    pub decomposition: MatrixDecomposition,
    pub q: usize,
}

impl SplittingCertificate {
    /// Re-checks the matrix units over the tower, `q² = dim A`, and that the corner is one-dimensional.
    pub fn verify(&self, a: &Algebra) -> Result<()> {
        let ak = a.extend_scalars(&self.tower)?;
        self.decomposition.verify(&ak)?;
        if self.q != self.decomposition.q() || self.q * self.q != a.dim() {
            return contract(format!("q = {} does not square to dim = {}", self.q, a.dim()));
        }
        if ak.corner(self.decomposition.unit(0, 0))?.dim() != 1 {
            return contract("corner of the splitting decomposition is not one-dimensional");
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum SplittingOutcome {
    Complete(SplittingCertificate),
    /// The search stopped at a limit; `partial.q` is the size reached so far.
    BudgetExhausted { partial: SplittingCertificate, reason: String },
}

enum Step {
    Done,
    Refined(MatrixDecomposition),
    Adjoin { z: AlgElem, f: Poly },
}

/// `sqrt(dim A)`, which must be an integer for a central simple algebra.
pub fn degree(a: &Algebra) -> Result<usize> {
    let m = a.dim();
    let r = (m as f64).sqrt().round() as usize;
    for c in [r.saturating_sub(1), r, r + 1] {
        if c * c == m {
            return Ok(c);
        }
    }
    invalid(format!("dimension {m} is not a perfect square"))
}

fn lift_elem(k: &Field, from: &Field, a: &AlgElem) -> AlgElem {
    AlgElem::new(a.coords().iter().map(|c| k.embed_from(from, c)).collect())
}

fn split_step(ak: &Algebra, units: &MatrixDecomposition, pending: Option<&AlgElem>) -> Result<Step> {
    let k = ak.field();
    let e11 = units.unit(0, 0);
    let corner = ak.corner(e11)?;
    if corner.dim() == 1 {
        return Ok(Step::Done);
    }
    let start = match pending {
        Some(z) => {
            let x = k.generator().expect("a root was adjoined");
            let zd = ak.sub(z, &ak.scale(&x, e11));
            Some(corner.project(&zd).ok_or_else(|| Error::Contract("pending element left the corner".into()))?)
        }
        None => {
            let strategy = ProbeStrategy { pairwise_sums: false, ..ProbeStrategy::cheap() };
            probe_zero_divisor(&corner.algebra, &strategy)?.0
        }
    };
    match start {
        Some(zc) => {
            let inner = matrix_units_from_zero_divisor(&corner.algebra, &zc)?;
            Ok(Step::Refined(compose_decompositions(ak, units, &corner, &inner)?))
        }
        None => {
            let zc = corner.algebra.basis(1);
            let f = corner.algebra.minimal_polynomial(&zc)?;
            Ok(Step::Adjoin { z: corner.embed(&zc), f })
        }
    }
}

/// Adjoins roots of minimal polynomials until `A ⊗ K ≅ M_q(K)`, splitting
/// the tower whenever a zero divisor of the scalars turns up and following
/// the first branch.
pub fn splitting_algebra(a: &Algebra, budget: SplitBudget) -> Result<SplittingOutcome> {
    degree(a)?;
    let mut k = a.field().clone();
    let mut units = MatrixDecomposition::trivial(a);
    let mut pending: Option<AlgElem> = None;
    let mut history: Vec<SplitEvent> = Vec::new();
    let mut adjoins = 0;
    loop {
        let ak = a.extend_scalars(&k)?;
        let partial = |k: &Field, units: &MatrixDecomposition, history: &[SplitEvent]| SplittingCertificate {
            tower: k.clone(),
            history: history.to_vec(),
            decomposition: units.clone(),
            q: units.q(),
        };
        match split_step(&ak, &units, pending.as_ref()) {
            Ok(Step::Done) => {
                let cert = partial(&k, &units, &history);
                cert.verify(a)?;
                return Ok(SplittingOutcome::Complete(cert));
            }
            Ok(Step::Refined(next)) => {
                units = next;
                pending = None;
            }
            Ok(Step::Adjoin { z, f }) => {
                if adjoins >= budget.max_adjoins {
                    return Ok(SplittingOutcome::BudgetExhausted {
                        partial: partial(&k, &units, &history),
                        reason: format!("adjoined {adjoins} roots"),
                    });
                }
                let k2 = k.adjoin_root(&f)?;
                units = units.map(|u| lift_elem(&k2, &k, u));
                pending = Some(lift_elem(&k2, &k, &z));
                k = k2;
                adjoins += 1;
            }
            Err(Error::ZeroDivisor(w)) => {
                if history.len() >= budget.max_branches {
                    return Ok(SplittingOutcome::BudgetExhausted {
                        partial: partial(&k, &units, &history),
                        reason: format!("took {} tower splits", history.len()),
                    });
                }
                let s = split_tower(&k, &w)?;
                let reduce = |u: &AlgElem| AlgElem::new(u.coords().iter().map(|c| s.reduce(0, c)).collect());
                units = units.map(reduce);
                pending = pending.as_ref().map(reduce);
                history.push(SplitEvent {
                    level: s.level(),
                    tower_before: k.clone(),
                    kept: s.branch_relation(0).clone(),
                    alternative: s.branch_relation(1).clone(),
                });
                k = s.branch(0).clone();
            }
            Err(e) => return Err(e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootPower {
    Root(Poly),
    NotAPower,
}

/// The monic `P` with `P^r = Q`, by matching coefficients from the top.
pub fn poly_root_power(k: &Field, q: &Poly, r: usize) -> Result<RootPower> {
    if r == 0 {
        return invalid("root index must be positive");
    }
    if !q.is_monic(k) {
        return invalid("polynomial must be monic");
    }
    let n = q.degree().expect("monic");
    if !n.is_multiple_of(r) {
        return Ok(RootPower::NotAPower);
    }
    if r == 1 {
        return Ok(RootPower::Root(q.clone()));
    }
    let ch = k.characteristic();
    if ch != 0 && (r as u64).is_multiple_of(ch) {
        return Err(Error::Unsupported(format!("characteristic {ch} divides the root index {r}")));
    }
    let d = n / r;
    let r_inv = k.inverse(&k.from_i64(r as i64))?;
    let mut p = vec![k.zero(); d + 1];
    p[d] = k.one();
    for j in 1..=d {
        let cur = Poly::from_coeffs(p.clone()).pow(r, k);
        let diff = k.sub(&q.coeff(k, n - j), &cur.coeff(k, n - j));
        p[d - j] = k.mul(&diff, &r_inv);
    }
    let root = Poly::from_coeffs(p);
    Ok(if root.pow(r, k) == *q { RootPower::Root(root) } else { RootPower::NotAPower })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedCharData {
    pub element: AlgElem,
    pub poly: Poly,
    pub trd: Elem,
    pub nrd: Elem,
}

/// Reduced characteristic polynomial from the `deg A`-th root of the
/// characteristic polynomial of left multiplication.
pub fn reduced_char_poly(a: &Algebra, x: &AlgElem) -> Result<ReducedCharData> {
    let k = a.field();
    let r = degree(a)?;
    let full = linalg::charpoly(k, &a.left_mul_matrix(x));
    let RootPower::Root(p) = poly_root_power(k, &full, r)? else {
        return contract("characteristic polynomial is not a perfect power; the algebra is not central simple");
    };
    if !a.eval_poly(&p, x).is_zero() {
        return contract("reduced characteristic polynomial does not annihilate the element");
    }
    let trd = k.neg(&p.coeff(k, r - 1));
    let c0 = p.coeff(k, 0);
    let nrd = if r % 2 == 0 { c0 } else { k.neg(&c0) };
    Ok(ReducedCharData { element: x.clone(), poly: p, trd, nrd })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReducedInverse {
    Inverse(AlgElem),
    /// The reduced norm vanishes.
    NotInvertible,
}

/// `x⁻¹ = R(x)·Nrd(x)⁻¹` where `(−1)^{r−1} P(T) = T R(T) − Nrd(x)`.
pub fn reduced_inverse(a: &Algebra, x: &AlgElem) -> Result<ReducedInverse> {
    let k = a.field();
    let data = reduced_char_poly(a, x)?;
    if data.nrd.is_zero() {
        return Ok(ReducedInverse::NotInvertible);
    }
    let r = data.poly.degree().expect("monic");
    let signed = if r % 2 == 1 { data.poly.clone() } else { data.poly.neg(k) };
    let shifted = signed.add(&Poly::constant(data.nrd.clone()), k);
    if !shifted.coeff(k, 0).is_zero() {
        return contract("constant term mismatch in the norm inverse formula");
    }
    let rpoly = Poly::from_coeffs(shifted.coeffs()[1..].to_vec());
    let inv = a.scale(&k.inverse(&data.nrd)?, &a.eval_poly(&rpoly, x));
    if a.mul(x, &inv) != a.one() || a.mul(&inv, x) != a.one() {
        return contract("norm inverse formula failed");
    }
    Ok(ReducedInverse::Inverse(inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn roots_of_powers() {
        let q = Field::rationals();
        let x1 = Poly::from_ints(&q, &[-1, 1]);
        assert_eq!(poly_root_power(&q, &x1.pow(4, &q), 2).unwrap(), RootPower::Root(x1.pow(2, &q)));
        let sq = Poly::from_ints(&q, &[1, 0, 2, 0, 1]);
        assert_eq!(poly_root_power(&q, &sq, 2).unwrap(), RootPower::Root(Poly::from_ints(&q, &[1, 0, 1])));
        let not = Poly::from_ints(&q, &[1, 0, 0, 0, 1]);
        assert_eq!(poly_root_power(&q, &not, 2).unwrap(), RootPower::NotAPower);
    }

    #[test]
    fn characteristic_dividing_index_is_unsupported() {
        let f3 = Field::prime(3).unwrap();
        let p = Poly::from_ints(&f3, &[1, 0, 0, 1]);
        assert!(matches!(poly_root_power(&f3, &p, 3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn degrees() {
        let q = Field::rationals();
        assert_eq!(degree(&Algebra::matrix_algebra(&q, 1)).unwrap(), 1);
        assert_eq!(degree(&Algebra::matrix_algebra(&q, 2)).unwrap(), 2);
        assert_eq!(degree(&Algebra::matrix_algebra(&q, 4)).unwrap(), 4);
    }

    #[test]
    fn matrix_unit_has_reduced_poly_x2_minus_x() {
        let q = Field::rationals();
        let a = Algebra::matrix_algebra(&q, 2);
        let e11 = a.matrix_to_elem(2, &Matrix::from_ints(&q, &[&[1, 0], &[0, 0]]));
        let data = reduced_char_poly(&a, &e11).unwrap();
        assert_eq!(data.poly, Poly::from_ints(&q, &[0, -1, 1]));
        assert_eq!(data.trd, q.from_i64(1));
        assert!(data.nrd.is_zero());
        assert_eq!(reduced_inverse(&a, &e11).unwrap(), ReducedInverse::NotInvertible);
        let one = reduced_char_poly(&a, &a.one()).unwrap();
        assert_eq!(one.poly, Poly::from_ints(&q, &[1, -2, 1]));
        assert_eq!(reduced_inverse(&a, &a.one()).unwrap(), ReducedInverse::Inverse(a.one()));
    }

    #[test]
    fn m2_splits_without_extension() {
        let q = Field::rationals();
        let a = Algebra::matrix_algebra(&q, 2);
        let SplittingOutcome::Complete(c) = splitting_algebra(&a, SplitBudget::default()).unwrap() else { panic!() };
        assert_eq!(c.q, 2);
        assert_eq!(c.tower, q);
    }
}
