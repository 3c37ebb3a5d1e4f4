//! Involutions of the first kind: eigenspace split, orthogonal/symplectic
//! type, the conjugator `b` with `J = Int(b) ∘ t` on matrix algebras, and the
//! Pfaffian characteristic polynomial.

use crate::algebra::{AlgElem, Algebra, LinMap};
use crate::error::{contract, invalid, Error, Result};
use crate::linalg::{self, Matrix};
use crate::poly::Poly;
use crate::splitting::{degree, poly_root_power, reduced_char_poly, RootPower};
use crate::wedderburn::MatrixDecomposition;

/// An F-linear anti-automorphism of order two fixing the center pointwise.
#[derive(Clone, Debug)]
pub struct Involution {
    algebra: Algebra,
    map: LinMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvolutionKind {
    Orthogonal,
    Symplectic,
}

impl Involution {
    /// Checks `J(1) = 1`, `J(xy) = J(y)J(x)` on basis pairs, `J² = Id`, and
    /// that the center is fixed.
    pub fn new(algebra: &Algebra, map: LinMap) -> Result<Involution> {
        let k = algebra.field();
        let m = algebra.dim();
        if map.source_dim() != m || map.target_dim() != m {
            return Err(Error::DimensionMismatch { expected: m, found: map.source_dim() });
        }
        if map.apply(k, &algebra.one()) != algebra.one() {
            return contract("map does not fix the unit");
        }
        let images: Vec<AlgElem> = (0..m).map(|i| map.apply(k, &algebra.basis(i))).collect();
        for i in 0..m {
            if map.apply(k, &images[i]) != algebra.basis(i) {
                return contract("map does not square to the identity");
            }
            for j in 0..m {
                if map.apply(k, &algebra.basis_product(i, j)) != algebra.mul(&images[j], &images[i]) {
                    return contract("map is not anti-multiplicative");
                }
            }
        }
        for c in algebra.center()? {
            if map.apply(k, &c) != c {
                return Err(Error::Unsupported("involution of the second kind".into()));
            }
        }
        Ok(Involution { algebra: algebra.clone(), map })
    }

    /// `a ↦ aᵗ` relative to a full system of matrix units.
    pub fn transpose(algebra: &Algebra, d: &MatrixDecomposition) -> Result<Involution> {
        Involution::new(algebra, transpose_map(algebra, d)?)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn map(&self) -> &LinMap {
        &self.map
    }

    pub fn apply(&self, a: &AlgElem) -> AlgElem {
        self.map.apply(self.algebra.field(), a)
    }

    /// `Int(u) ∘ J`, which is again an involution when `J(u) = ±u`.
    pub fn twist(&self, u: &AlgElem) -> Result<Involution> {
        let a = &self.algebra;
        let Some(u_inv) = a.inverse(u)? else {
            return invalid("twisting element is not invertible");
        };
        let images: Vec<AlgElem> = (0..a.dim()).map(|i| a.mul3(u, &self.apply(&a.basis(i)), &u_inv)).collect();
        Involution::new(a, LinMap::from_images(a.dim(), &images))
    }
}

/// The transpose `Σ c_ij e_ij ↦ Σ c_ij e_ji` for units spanning the algebra.
pub fn transpose_map(a: &Algebra, d: &MatrixDecomposition) -> Result<LinMap> {
    let k = a.field();
    let q = d.q();
    if q * q != a.dim() {
        return invalid("matrix units do not span the algebra");
    }
    d.verify(a)?;
    let cols: Vec<Vec<_>> = d.units().iter().map(|u| u.coords().to_vec()).collect();
    let p = Matrix::from_columns(a.dim(), &cols);
    let Some(p_inv) = linalg::inverse(k, &p)? else {
        return contract("matrix units are linearly dependent");
    };
    let swapped: Vec<Vec<_>> = (0..q * q).map(|idx| d.unit(idx % q, idx / q).coords().to_vec()).collect();
    let ps = Matrix::from_columns(a.dim(), &swapped);
    Ok(LinMap::new(ps.mul(&p_inv, k)))
}

/// Bases of `A⁺ = {x : J(x) = x}` and `A⁻ = {x : J(x) = −x}`.
pub fn plus_minus_split(j: &Involution) -> Result<(Vec<AlgElem>, Vec<AlgElem>)> {
    let a = &j.algebra;
    let k = a.field();
    if k.characteristic() == 2 {
        return Err(Error::Unsupported("eigenspace split in characteristic 2".into()));
    }
    let id = Matrix::identity(k, a.dim());
    let plus = linalg::kernel(k, &j.map.matrix().sub(&id, k))?;
    let minus = linalg::kernel(k, &j.map.matrix().add(&id, k))?;
    if plus.len() + minus.len() != a.dim() {
        return contract("eigenspaces do not span the algebra");
    }
    Ok((plus.into_iter().map(AlgElem::new).collect(), minus.into_iter().map(AlgElem::new).collect()))
}

/// Orthogonal when `dim A⁺ = n(n+1)/2`, symplectic when `dim A⁺ = n(n−1)/2`.
pub fn classify_first_kind(j: &Involution) -> Result<InvolutionKind> {
    let n = degree(&j.algebra)?;
    let plus = plus_minus_split(j)?.0.len();
    if plus == n * (n + 1) / 2 {
        Ok(InvolutionKind::Orthogonal)
    } else if plus == n * (n - 1) / 2 {
        Ok(InvolutionKind::Symplectic)
    } else {
        contract(format!("fixed space has dimension {plus}, which fits neither type for degree {n}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransposeConjugator {
    pub b: AlgElem,
    /// `bᵗ = sign · b`.
    pub sign: i8,
    pub kind: InvolutionKind,
}

/// Solves `J(a) b = b aᵗ` for `b`; then `J = Int(b) ∘ t`.
pub fn transpose_conjugator(j: &Involution, d: &MatrixDecomposition) -> Result<TransposeConjugator> {
    let a = &j.algebra;
    let k = a.field();
    let t = transpose_map(a, d)?;
    let blocks: Vec<Matrix> = (0..a.dim())
        .map(|i| {
            let e = a.basis(i);
            a.left_mul_matrix(&j.apply(&e)).sub(&a.right_mul_matrix(&t.apply(k, &e)), k)
        })
        .collect();
    let space = linalg::kernel(k, &Matrix::vstack(&blocks))?;
    if space.is_empty() {
        return contract("no conjugator: the map is not compatible with the matrix units");
    }
    if space.len() != 1 {
        return contract(format!("conjugator space has dimension {}", space.len()));
    }
    let b = AlgElem::new(space.into_iter().next().expect("one vector"));
    let Some(b_inv) = a.inverse(&b)? else {
        return contract("conjugator is not invertible");
    };
    for i in 0..a.dim() {
        let e = a.basis(i);
        if j.apply(&e) != a.mul3(&b, &t.apply(k, &e), &b_inv) {
            return contract("conjugator does not reproduce the involution");
        }
    }
    let bt = t.apply(k, &b);
    let sign = if bt == b {
        1
    } else if bt == a.neg(&b) {
        -1
    } else {
        return contract("conjugator is neither symmetric nor antisymmetric");
    };
    let kind = classify_first_kind(j)?;
    let expected = if sign == 1 { InvolutionKind::Orthogonal } else { InvolutionKind::Symplectic };
    if kind != expected {
        return contract("conjugator symmetry disagrees with the involution type");
    }
    Ok(TransposeConjugator { b, sign, kind })
}

/// The monic `P` with `P² = Cprd(a)` for `a` fixed by a symplectic involution.
pub fn pfaffian_char_poly(j: &Involution, x: &AlgElem) -> Result<Poly> {
    let a = &j.algebra;
    if classify_first_kind(j)? != InvolutionKind::Symplectic {
        return invalid("involution is not symplectic");
    }
    if j.apply(x) != *x {
        return invalid("element is not symmetric under the involution");
    }
    let cprd = reduced_char_poly(a, x)?.poly;
    let RootPower::Root(p) = poly_root_power(a.field(), &cprd, 2)? else {
        return contract("reduced characteristic polynomial is not a square");
    };
    if !a.eval_poly(&p, x).is_zero() {
        return contract("Pfaffian polynomial does not annihilate the element");
    }
    Ok(p)
}
