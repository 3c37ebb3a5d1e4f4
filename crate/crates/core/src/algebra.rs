//! Finite-dimensional unital associative algebras given by structure
//! constants, and the linear-algebra toolkit built on them.
//!
//! Basis element 0 is always the unit. Elements are plain coordinate vectors
//! ([`AlgElem`]); every operation takes the [`Algebra`] they belong to.

use std::fmt;

use crate::error::{contract, invalid, Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{self, Matrix, Subspace};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgElem(Vec<Elem>);

impl AlgElem {
    pub fn new(coords: Vec<Elem>) -> AlgElem {
        AlgElem(coords)
    }

    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Elem> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Elem::is_zero)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Algebra {
    field: Field,
    dim: usize,
    labels: Vec<String>,
    /// `products[i * dim + j]` are the coordinates of `ε_i ε_j`.
    products: Vec<Vec<Elem>>,
    sparse: Vec<Vec<(usize, Elem)>>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Algebra) -> bool {
        self.field == other.field && self.dim == other.dim && self.products == other.products
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdempotentKind {
    One,
    Zero,
    Nontrivial,
}

/// An idempotent `e = (a f(a))^n` in `F[a]` built from the minimal polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentData {
    pub e: AlgElem,
    pub n: usize,
    pub kind: IdempotentKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CentralSimplicity {
    /// The sandwich map `A ⊗ A^op → End(A)` has full rank `m²`.
    CentralSimple { rank: usize },
    /// A nontrivial relation `Σ_j L(a_j) R(ε_j) = 0`; `coefficients[j] = a_j`.
    Defect { rank: usize, coefficients: Vec<AlgElem> },
}

impl CentralSimplicity {
    pub fn is_central_simple(&self) -> bool {
        matches!(self, CentralSimplicity::CentralSimple { .. })
    }

    pub fn rank(&self) -> usize {
        match self {
            CentralSimplicity::CentralSimple { rank } | CentralSimplicity::Defect { rank, .. } => *rank,
        }
    }
}

/// Pairs `(x_j, y_j)` with `Σ x_j a y_j = 1`, or a proof that none exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplicityWitness {
    Pairs(Vec<(AlgElem, AlgElem)>),
    NoSolution,
}

/// `σ(a) = w a w⁻¹` for all `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerAutomorphism {
    pub conjugator: AlgElem,
    pub inverse: AlgElem,
}

/// An F-linear map between algebras in their chosen bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    matrix: Matrix,
    unital: bool,
    multiplicative: bool,
}

impl LinMap {
    pub fn new(matrix: Matrix) -> LinMap {
        LinMap { matrix, unital: false, multiplicative: false }
    }

    /// The map sending basis element `j` of the source to `images[j]`.
    pub fn from_images(target_dim: usize, images: &[AlgElem]) -> LinMap {
        let cols: Vec<Vec<Elem>> = images.iter().map(|a| a.0.clone()).collect();
        LinMap::new(Matrix::from_columns(target_dim, &cols))
    }

    pub fn identity(k: &Field, n: usize) -> LinMap {
        LinMap { matrix: Matrix::identity(k, n), unital: true, multiplicative: true }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    pub fn is_multiplicative(&self) -> bool {
        self.multiplicative
    }

    pub fn apply(&self, k: &Field, a: &AlgElem) -> AlgElem {
        AlgElem(self.matrix.mul_vec(&a.0, k))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinMap, k: &Field) -> LinMap {
        LinMap {
            matrix: self.matrix.mul(&other.matrix, k),
            unital: self.unital && other.unital,
            multiplicative: self.multiplicative && other.multiplicative,
        }
    }

    pub fn rank(&self, k: &Field) -> Result<usize> {
        Ok(linalg::rank(k, &self.matrix)?)
    }

    pub fn is_bijective(&self, k: &Field) -> Result<bool> {
        Ok(self.source_dim() == self.target_dim() && self.rank(k)? == self.source_dim())
    }

    /// Checks `φ(1) = 1` and `φ(ε_i ε_j) = φ(ε_i) φ(ε_j)` and records the result.
    pub fn verify_homomorphism(&mut self, src: &Algebra, dst: &Algebra) -> Result<()> {
        if src.dim != self.source_dim() || dst.dim != self.target_dim() {
            return Err(Error::DimensionMismatch { expected: src.dim, found: self.source_dim() });
        }
        if src.field != dst.field {
            return Err(Error::FieldMismatch);
        }
        let k = &src.field;
        self.unital = self.apply(k, &src.one()) == dst.one();
        let images: Vec<AlgElem> = (0..src.dim).map(|i| AlgElem(self.matrix.column(i))).collect();
        self.multiplicative = (0..src.dim).all(|i| {
            (0..src.dim).all(|j| {
                let lhs = self.apply(k, &AlgElem(src.products[i * src.dim + j].clone()));
                lhs == dst.mul(&images[i], &images[j])
            })
        });
        if self.unital && self.multiplicative {
            Ok(())
        } else if !self.unital {
            contract("map does not preserve the unit")
        } else {
            contract("map is not multiplicative")
        }
    }
}

/// A subalgebra with its own structure constants (unit first) and the
/// inclusion into the ambient algebra.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub algebra: Algebra,
    basis: Vec<AlgElem>,
    space: Subspace,
}

impl Subalgebra {
    pub fn basis(&self) -> &[AlgElem] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn embed(&self, a: &AlgElem) -> AlgElem {
        AlgElem(self.space.combine(&self.algebra.field, &a.0))
    }

    /// Coordinates of an ambient element in the subalgebra basis.
    pub fn project(&self, a: &AlgElem) -> Option<AlgElem> {
        self.space.coords(&self.algebra.field, &a.0).map(AlgElem)
    }

    pub fn contains(&self, a: &AlgElem) -> bool {
        self.project(a).is_some()
    }

    pub fn inclusion(&self, ambient_dim: usize) -> LinMap {
        let mut m = LinMap::from_images(ambient_dim, &self.basis);
        m.unital = false;
        m.multiplicative = true;
        m
    }
}

/// `A ⊗ B` with the embeddings `a ↦ a ⊗ 1` and `b ↦ 1 ⊗ b`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub algebra: Algebra,
    pub left: LinMap,
    pub right: LinMap,
}

fn tensor_label(a: &str, b: &str) -> String {
    match (a, b) {
        ("1", "1") => "1".into(),
        _ => format!("{a}⊗{b}"),
    }
}

/// Position of the matrix unit `E_ij` in the basis of [`Algebra::matrix_algebra`];
/// `(0, 0)` is the identity slot.
pub fn matrix_basis_index(q: usize, i: usize, j: usize) -> usize {
    i * q + j
}

impl Algebra {
    /// Builds an algebra from `table[l][i][j]`, the coefficient of `ε_l` in `ε_i ε_j`,
    /// checking the unit and associativity.
    pub fn from_table(field: &Field, labels: Vec<String>, table: &[Vec<Vec<Elem>>]) -> Result<Algebra> {
        let m = table.len();
        let mut products = vec![Vec::new(); m * m];
        for (l, slab) in table.iter().enumerate() {
            if slab.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: slab.len() });
            }
            for (i, row) in slab.iter().enumerate() {
                if row.len() != m {
                    return Err(Error::DimensionMismatch { expected: m, found: row.len() });
                }
                for (j, c) in row.iter().enumerate() {
                    if l == 0 {
                        products[i * m + j] = vec![field.zero(); m];
                    }
                    products[i * m + j][l] = c.clone();
                }
            }
        }
        Algebra::from_products(field, labels, products)
    }

    /// Builds an algebra from `products[i * m + j] = ε_i ε_j`, checking the axioms.
    pub fn from_products(field: &Field, labels: Vec<String>, products: Vec<Vec<Elem>>) -> Result<Algebra> {
        let m = labels.len();
        if m == 0 {
            return invalid("an algebra needs at least one basis element");
        }
        if products.len() != m * m {
            return Err(Error::DimensionMismatch { expected: m * m, found: products.len() });
        }
        for p in &products {
            if p.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: p.len() });
            }
            for c in p {
                field.validate(c)?;
            }
        }
        let a = Algebra::from_products_unchecked(field, labels, products);
        a.verify_axioms()?;
        Ok(a)
    }

    pub(crate) fn from_products_unchecked(field: &Field, labels: Vec<String>, products: Vec<Vec<Elem>>) -> Algebra {
        let dim = labels.len();
        let sparse = products
            .iter()
            .map(|p| p.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(l, c)| (l, c.clone())).collect())
            .collect();
        Algebra { field: field.clone(), dim, labels, products, sparse }
    }

    /// Exhaustive check that basis element 0 is a unit and that the product is associative.
    pub fn verify_axioms(&self) -> Result<()> {
        let m = self.dim;
        for j in 0..m {
            let e = self.basis(j);
            if self.products[j] != e.0 || self.products[j * m] != e.0 {
                return invalid(format!("basis element 0 is not a two-sided unit (fails on {})", self.labels[j]));
            }
        }
        for i in 0..m {
            for j in 0..m {
                let ij = AlgElem(self.products[i * m + j].clone());
                for k in 0..m {
                    let lhs = self.mul(&ij, &self.basis(k));
                    let rhs = self.mul(&self.basis(i), &AlgElem(self.products[j * m + k].clone()));
                    if lhs != rhs {
                        return invalid(format!(
                            "multiplication is not associative on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Algebra {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    /// `table[l][i][j]`, the coefficient of `ε_l` in `ε_i ε_j`.
    pub fn table(&self) -> Vec<Vec<Vec<Elem>>> {
        let m = self.dim;
        (0..m).map(|l| (0..m).map(|i| (0..m).map(|j| self.products[i * m + j][l].clone()).collect()).collect()).collect()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> AlgElem {
        AlgElem(self.products[i * self.dim + j].clone())
    }

    pub fn zero(&self) -> AlgElem {
        AlgElem(vec![self.field.zero(); self.dim])
    }

    pub fn one(&self) -> AlgElem {
        self.basis(0)
    }

    pub fn basis(&self, i: usize) -> AlgElem {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        AlgElem(v)
    }

    pub fn scalar(&self, c: &Elem) -> AlgElem {
        let mut v = vec![self.field.zero(); self.dim];
        v[0] = c.clone();
        AlgElem(v)
    }

    pub fn from_ints(&self, coords: &[i64]) -> AlgElem {
        assert_eq!(coords.len(), self.dim);
        AlgElem(coords.iter().map(|&c| self.field.from_i64(c)).collect())
    }

    /// Checks length and field membership of a coordinate vector.
    pub fn element(&self, coords: Vec<Elem>) -> Result<AlgElem> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: coords.len() });
        }
        for c in &coords {
            self.field.validate(c)?;
        }
        Ok(AlgElem(coords))
    }

    pub fn add(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        AlgElem(a.0.iter().zip(&b.0).map(|(x, y)| self.field.add(x, y)).collect())
    }

    pub fn sub(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        AlgElem(a.0.iter().zip(&b.0).map(|(x, y)| self.field.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &AlgElem) -> AlgElem {
        AlgElem(a.0.iter().map(|x| self.field.neg(x)).collect())
    }

    pub fn scale(&self, c: &Elem, a: &AlgElem) -> AlgElem {
        AlgElem(a.0.iter().map(|x| self.field.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let k = &self.field;
        let m = self.dim;
        let mut out = vec![k.zero(); m];
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = k.mul(ai, bj);
                for (l, s) in &self.sparse[i * m + j] {
                    out[*l] = k.add(&out[*l], &k.mul(&c, s));
                }
            }
        }
        AlgElem(out)
    }

    pub fn checked_mul(&self, a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
        for x in [a, b] {
            if x.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
            }
        }
        Ok(self.mul(a, b))
    }

    pub fn mul3(&self, a: &AlgElem, b: &AlgElem, c: &AlgElem) -> AlgElem {
        self.mul(&self.mul(a, b), c)
    }

    pub fn pow(&self, a: &AlgElem, n: usize) -> AlgElem {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn commutator(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        self.sub(&self.mul(a, b), &self.mul(b, a))
    }

    /// `Σ c_i ε_i` for `a` in `F·1`, returned as the scalar.
    pub fn as_scalar(&self, a: &AlgElem) -> Option<Elem> {
        a.0[1..].iter().all(Elem::is_zero).then(|| a.0[0].clone())
    }

    pub fn is_commutative(&self) -> bool {
        let m = self.dim;
        (0..m).all(|i| (0..m).all(|j| self.products[i * m + j] == self.products[j * m + i]))
    }

    pub fn eval_poly(&self, p: &Poly, a: &AlgElem) -> AlgElem {
        let mut acc = self.zero();
        for c in p.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, a), &self.scalar(c));
        }
        acc
    }

    /// Matrix of `x ↦ a x`; column `j` holds `a ε_j`.
    pub fn left_mul_matrix(&self, a: &AlgElem) -> Matrix {
        let cols: Vec<Vec<Elem>> = (0..self.dim).map(|j| self.mul(a, &self.basis(j)).0).collect();
        Matrix::from_columns(self.dim, &cols)
    }

    /// Matrix of `x ↦ x b`; column `j` holds `ε_j b`.
    pub fn right_mul_matrix(&self, b: &AlgElem) -> Matrix {
        let cols: Vec<Vec<Elem>> = (0..self.dim).map(|j| self.mul(&self.basis(j), b).0).collect();
        Matrix::from_columns(self.dim, &cols)
    }

    /// The monic generator of `{g : g(a) = 0}`, from the first linear
    /// dependence among `1, a, a², ...`.
    pub fn minimal_polynomial(&self, a: &AlgElem) -> Result<Poly> {
        let k = &self.field;
        let mut powers = vec![self.one().0];
        loop {
            let next = self.mul(&AlgElem(powers.last().expect("nonempty").clone()), a).0;
            let mat = Matrix::from_columns(self.dim, &powers);
            if let Some(c) = linalg::solve(k, &mat, &next)? {
                let mut coeffs: Vec<Elem> = c.iter().map(|x| k.neg(x)).collect();
                coeffs.push(k.one());
                return Ok(Poly::from_coeffs(coeffs));
            }
            if powers.len() > self.dim {
                return contract("powers of an element stayed independent beyond the dimension");
            }
            powers.push(next);
        }
    }

    /// Writes the minimal polynomial as `X^n h(X)` with `h(0) = u ≠ 0`,
    /// `h/u = 1 − X f(X)`, and returns `e = (a f(a))^n`.
    pub fn idempotent_from_element(&self, a: &AlgElem) -> Result<IdempotentData> {
        let k = &self.field;
        let g = self.minimal_polynomial(a)?;
        let (n, h) = g.split_x_power();
        if n == 0 {
            return Ok(IdempotentData { e: self.one(), n, kind: IdempotentKind::One });
        }
        if h.degree() == Some(0) {
            return Ok(IdempotentData { e: self.zero(), n, kind: IdempotentKind::Zero });
        }
        let u_inv = k.inverse(&h.coeffs()[0])?;
        let hn = h.scale(&u_inv, k);
        // 1 − h/u has zero constant term; f = (1 − h/u)/X.
        let f = Poly::from_coeffs(hn.coeffs()[1..].iter().map(|c| k.neg(c)).collect());
        let af = self.mul(a, &self.eval_poly(&f, a));
        let e = self.pow(&af, n);
        Ok(IdempotentData { e, n, kind: IdempotentKind::Nontrivial })
    }

    /// Two-sided inverse, `None` when `a` is not invertible.
    pub fn inverse(&self, a: &AlgElem) -> Result<Option<AlgElem>> {
        let la = self.left_mul_matrix(a);
        match linalg::solve(&self.field, &la, &self.one().0)? {
            Some(x) => {
                let x = AlgElem(x);
                if self.mul(&x, a) != self.one() {
                    return contract("right inverse is not a left inverse");
                }
                Ok(Some(x))
            }
            None => Ok(None),
        }
    }

    pub fn is_invertible(&self, a: &AlgElem) -> Result<bool> {
        Ok(linalg::rank(&self.field, &self.left_mul_matrix(a))? == self.dim)
    }

    /// `dim_F(A a)`.
    pub fn left_ideal_dim(&self, a: &AlgElem) -> Result<usize> {
        Ok(linalg::rank(&self.field, &self.right_mul_matrix(a))?)
    }

    /// Basis of `{x : x s = s x for all s in gens}`.
    pub fn centralizer(&self, gens: &[AlgElem]) -> Result<Vec<AlgElem>> {
        if gens.is_empty() {
            return Ok((0..self.dim).map(|i| self.basis(i)).collect());
        }
        let blocks: Vec<Matrix> =
            gens.iter().map(|s| self.left_mul_matrix(s).sub(&self.right_mul_matrix(s), &self.field)).collect();
        let ker = linalg::kernel(&self.field, &Matrix::vstack(&blocks))?;
        Ok(ker.into_iter().map(AlgElem).collect())
    }

    pub fn center(&self) -> Result<Vec<AlgElem>> {
        let gens: Vec<AlgElem> = (1..self.dim).map(|i| self.basis(i)).collect();
        self.centralizer(&gens)
    }

    /// `A ⊗_F B` on the basis `ε_i ⊗ η_k` at index `i * dim B + k`.
    pub fn tensor_product(&self, other: &Algebra) -> Result<TensorProduct> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let k = &self.field;
        let (m, n) = (self.dim, other.dim);
        let d = m * n;
        let mut products = Vec::with_capacity(d * d);
        for i in 0..m {
            for kk in 0..n {
                for j in 0..m {
                    for l in 0..n {
                        let mut v = vec![k.zero(); d];
                        for (p, c) in &self.sparse[i * m + j] {
                            for (q, e) in &other.sparse[kk * n + l] {
                                v[p * n + q] = k.mul(c, e);
                            }
                        }
                        products.push(v);
                    }
                }
            }
        }
        let labels = (0..m)
            .flat_map(|i| (0..n).map(move |kk| (i, kk)))
            .map(|(i, kk)| tensor_label(&self.labels[i], &other.labels[kk]))
            .collect();
        let algebra = Algebra::from_products_unchecked(k, labels, products);
        let left_imgs: Vec<AlgElem> = (0..m).map(|i| algebra.basis(i * n)).collect();
        let right_imgs: Vec<AlgElem> = (0..n).map(|kk| algebra.basis(kk)).collect();
        let mut left = LinMap::from_images(d, &left_imgs);
        let mut right = LinMap::from_images(d, &right_imgs);
        left.verify_homomorphism(self, &algebra)?;
        right.verify_homomorphism(other, &algebra)?;
        Ok(TensorProduct { algebra, left, right })
    }

    pub fn opposite(&self) -> Algebra {
        let m = self.dim;
        let products = (0..m * m).map(|idx| self.products[(idx % m) * m + idx / m].clone()).collect();
        let labels = self.labels.iter().map(|l| if l == "1" { l.clone() } else { format!("{l}°") }).collect();
        Algebra::from_products_unchecked(&self.field, labels, products)
    }

    /// Matrix of `A ⊗ A^op → End_F(A)`, `ε_i ⊗ ε_j ↦ (x ↦ ε_i x ε_j)`.
    /// Column `i * m + j`; row `r * m + s` holds the `ε_r`-coefficient of `ε_i ε_s ε_j`.
    pub fn sandwich_matrix(&self) -> Matrix {
        let m = self.dim;
        let k = &self.field;
        let mut mat = Matrix::zeros(k, m * m, m * m);
        for i in 0..m {
            for s in 0..m {
                let is = AlgElem(self.products[i * m + s].clone());
                for j in 0..m {
                    let v = self.mul(&is, &self.basis(j));
                    for (r, c) in v.0.into_iter().enumerate() {
                        if !c.is_zero() {
                            mat.set(r * m + s, i * m + j, c);
                        }
                    }
                }
            }
        }
        mat
    }

    /// Decides central simplicity by the rank of the sandwich map.
    pub fn central_simple_check(&self) -> Result<CentralSimplicity> {
        let m = self.dim;
        let mat = self.sandwich_matrix();
        let ker = linalg::kernel(&self.field, &mat)?;
        let rank = m * m - ker.len();
        match ker.into_iter().next() {
            None => Ok(CentralSimplicity::CentralSimple { rank }),
            Some(u) => {
                let coefficients = (0..m).map(|j| AlgElem((0..m).map(|i| u[i * m + j].clone()).collect())).collect();
                Ok(CentralSimplicity::Defect { rank, coefficients })
            }
        }
    }

    /// Solves `Σ_{i,j} u_ij ε_i a ε_j = 1` and groups the solution into pairs.
    pub fn simplicity_witness(&self, a: &AlgElem) -> Result<SimplicityWitness> {
        let m = self.dim;
        let k = &self.field;
        let mut cols = Vec::with_capacity(m * m);
        let ea: Vec<AlgElem> = (0..m).map(|i| self.mul(&self.basis(i), a)).collect();
        for x in &ea {
            for j in 0..m {
                cols.push(self.mul(x, &self.basis(j)).0);
            }
        }
        let mat = Matrix::from_columns(m, &cols);
        let Some(u) = linalg::solve(k, &mat, &self.one().0)? else {
            return Ok(SimplicityWitness::NoSolution);
        };
        let mut pairs = Vec::new();
        for j in 0..m {
            let x = AlgElem((0..m).map(|i| u[i * m + j].clone()).collect());
            if !x.is_zero() {
                pairs.push((x, self.basis(j)));
            }
        }
        let total = pairs.iter().fold(self.zero(), |acc, (x, y)| self.add(&acc, &self.mul3(x, a, y)));
        if total != self.one() {
            return contract("simplicity witness does not sum to one");
        }
        Ok(SimplicityWitness::Pairs(pairs))
    }

    /// Basis of `{w : σ(ε_i) w = w ε_i for all i}`.
    pub fn skolem_noether_space(&self, sigma: &LinMap) -> Result<Vec<AlgElem>> {
        if sigma.source_dim() != self.dim || sigma.target_dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: sigma.source_dim() });
        }
        let k = &self.field;
        let blocks: Vec<Matrix> = (0..self.dim)
            .map(|i| {
                let s = sigma.apply(k, &self.basis(i));
                self.left_mul_matrix(&s).sub(&self.right_mul_matrix(&self.basis(i)), k)
            })
            .collect();
        Ok(linalg::kernel(k, &Matrix::vstack(&blocks))?.into_iter().map(AlgElem).collect())
    }

    /// Finds an invertible `w` with `σ(a) = w a w⁻¹` for an automorphism `σ`
    /// of a central simple algebra.
    pub fn skolem_noether(&self, sigma: &LinMap) -> Result<InnerAutomorphism> {
        let mut s = sigma.clone();
        s.verify_homomorphism(self, self)?;
        if !s.is_bijective(&self.field)? {
            return contract("map is not bijective");
        }
        let space = self.skolem_noether_space(sigma)?;
        if space.len() != 1 {
            return contract(format!(
                "conjugator space has dimension {}; the algebra is not central simple",
                space.len()
            ));
        }
        let w = space.into_iter().next().expect("one vector");
        let Some(w_inv) = self.inverse(&w)? else {
            return contract("conjugator is not invertible; the algebra is not simple");
        };
        for i in 0..self.dim {
            let e = self.basis(i);
            if sigma.apply(&self.field, &e) != self.mul3(&w, &e, &w_inv) {
                return contract("conjugation does not reproduce the automorphism");
            }
        }
        Ok(InnerAutomorphism { conjugator: w, inverse: w_inv })
    }

    /// The subalgebra spanned by `basis`, whose first element must act as its unit.
    pub fn subalgebra(&self, basis: Vec<AlgElem>) -> Result<Subalgebra> {
        let k = &self.field;
        let n = basis.len();
        if n == 0 {
            return invalid("empty subalgebra basis");
        }
        let space = Subspace::new(k, self.dim, basis.iter().map(|b| b.0.clone()).collect())?;
        let u = &basis[0];
        for b in &basis {
            if self.mul(u, b) != *b || self.mul(b, u) != *b {
                return contract("first basis element is not a unit of the subalgebra");
            }
        }
        let mut products = Vec::with_capacity(n * n);
        for x in &basis {
            for y in &basis {
                match space.coords(k, &self.mul(x, y).0) {
                    Some(c) => products.push(c),
                    None => return contract("span is not closed under multiplication"),
                }
            }
        }
        let labels = std::iter::once("1".to_string()).chain((1..n).map(|i| format!("b{i}"))).collect();
        let algebra = Algebra::from_products_unchecked(k, labels, products);
        Ok(Subalgebra { algebra, basis, space })
    }

    /// The corner `e A e` with unit `e`, on a basis chosen greedily from `e ε_i e`.
    pub fn corner(&self, e: &AlgElem) -> Result<Subalgebra> {
        let cands: Vec<AlgElem> = (0..self.dim).map(|i| self.mul3(e, &self.basis(i), e)).collect();
        let idx = linalg::independent_subset(&self.field, self.dim, &cands.iter().map(|c| c.0.clone()).collect::<Vec<_>>())?;
        if idx.first() != Some(&0) {
            return contract("corner idempotent is zero");
        }
        self.subalgebra(idx.into_iter().map(|i| cands[i].clone()).collect())
    }

    /// The same structure constants viewed over an extension `K` of the base field.
    pub fn extend_scalars(&self, k: &Field) -> Result<Algebra> {
        if !self.field.is_subfield_of(k) {
            return Err(Error::FieldMismatch);
        }
        let products = self.products.iter().map(|p| p.iter().map(|c| k.embed_from(&self.field, c)).collect()).collect();
        Ok(Algebra::from_products_unchecked(k, self.labels.clone(), products))
    }

    pub fn extend_elem(&self, k: &Field, a: &AlgElem) -> AlgElem {
        AlgElem(a.0.iter().map(|c| k.embed_from(&self.field, c)).collect())
    }

    /// Views an algebra over a tower level as an algebra over the level below,
    /// on the basis `x^s ε_i` at index `s * dim + i`.
    pub fn restrict_scalars(&self) -> Result<Algebra> {
        let k = &self.field;
        let Some(parent) = k.parent() else {
            return invalid("scalars are already a base field");
        };
        let d = k.ext_degree();
        let m = self.dim;
        let x = k.generator().expect("ext level");
        let xp: Vec<Elem> = (0..2 * d).map(|s| k.pow(&x, s as u64)).collect();
        let dm = d * m;
        let mut products = Vec::with_capacity(dm * dm);
        for s in 0..d {
            for i in 0..m {
                for t in 0..d {
                    for j in 0..m {
                        let mut v = vec![parent.zero(); dm];
                        for (l, c) in &self.sparse[i * m + j] {
                            let Elem::Ext(cs) = k.mul(&xp[s + t], c) else { unreachable!() };
                            for (u, cu) in cs.into_iter().enumerate() {
                                v[u * m + l] = cu;
                            }
                        }
                        products.push(v);
                    }
                }
            }
        }
        let labels = (0..d)
            .flat_map(|s| (0..m).map(move |i| (s, i)))
            .map(|(s, i)| match s {
                0 => self.labels[i].clone(),
                _ => {
                    let xs = if s == 1 { k.var_name() } else { format!("{}^{s}", k.var_name()) };
                    if self.labels[i] == "1" { xs } else { format!("{xs}*{}", self.labels[i]) }
                }
            })
            .collect();
        Ok(Algebra::from_products_unchecked(parent, labels, products))
    }

    /// Coordinates of `a` in the basis of [`Algebra::restrict_scalars`].
    pub fn restrict_elem(&self, a: &AlgElem) -> AlgElem {
        let k = &self.field;
        let parent = k.parent().expect("ext level");
        let (d, m) = (k.ext_degree(), self.dim);
        let mut v = vec![parent.zero(); d * m];
        for (i, c) in a.0.iter().enumerate() {
            let Elem::Ext(cs) = c else { unreachable!() };
            for (u, cu) in cs.iter().enumerate() {
                v[u * m + i] = cu.clone();
            }
        }
        AlgElem(v)
    }

    /// A simple extension `K = F[x]/(P)` as an algebra over `F` on the basis `x^s`.
    pub fn from_field_extension(k: &Field) -> Result<Algebra> {
        let parent = k.parent().ok_or_else(|| Error::Invalid("not a tower level".into()))?;
        let d = k.ext_degree();
        let x = k.generator().expect("ext level");
        let mut products = Vec::with_capacity(d * d);
        for s in 0..d {
            for t in 0..d {
                let Elem::Ext(mut cs) = k.pow(&x, (s + t) as u64) else { unreachable!() };
                cs.resize(d, parent.zero());
                products.push(cs);
            }
        }
        let v = k.var_name();
        let labels = (0..d)
            .map(|s| match s {
                0 => "1".to_string(),
                1 => v.clone(),
                _ => format!("{v}^{s}"),
            })
            .collect();
        Ok(Algebra::from_products_unchecked(parent, labels, products))
    }

    /// `M_q(F)` on the basis `1, E_ij ((i, j) ≠ (1, 1))`, unit first.
    pub fn matrix_algebra(k: &Field, q: usize) -> Algebra {
        assert!(q >= 1);
        let m = q * q;
        let labels = (0..m)
            .map(|p| match p {
                0 => "1".to_string(),
                _ if q < 10 => format!("E{}{}", p / q + 1, p % q + 1),
                _ => format!("E{}_{}", p / q + 1, p % q + 1),
            })
            .collect();
        let mats: Vec<Matrix> = (0..m).map(|p| matrix_of_basis(k, q, p)).collect();
        let mut products = Vec::with_capacity(m * m);
        for a in &mats {
            for b in &mats {
                products.push(matrix_to_coords(k, q, &a.mul(b, k)));
            }
        }
        Algebra::from_products_unchecked(k, labels, products)
    }

    pub fn matrix_to_elem(&self, q: usize, mat: &Matrix) -> AlgElem {
        assert_eq!(self.dim, q * q);
        AlgElem(matrix_to_coords(&self.field, q, mat))
    }

    /// Inverse of [`Algebra::matrix_to_elem`] for algebras built by [`Algebra::matrix_algebra`].
    pub fn elem_to_matrix(&self, q: usize, a: &AlgElem) -> Matrix {
        let k = &self.field;
        let mut mat = Matrix::zeros(k, q, q);
        for p in 0..q * q {
            let (i, j) = (p / q, p % q);
            let v = if i == j && i > 0 { k.add(&a.0[0], &a.0[p]) } else { a.0[p].clone() };
            mat.set(i, j, v);
        }
        mat
    }

    pub fn format_elem(&self, a: &AlgElem) -> String {
        let mut terms = Vec::new();
        for (c, l) in a.0.iter().zip(&self.labels) {
            if c.is_zero() {
                continue;
            }
            let cs = self.field.format(c);
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            terms.push(match (l.as_str(), cs.as_str()) {
                ("1", _) => cs,
                (_, "1") => l.clone(),
                (_, "-1") => format!("-{l}"),
                _ => format!("{cs}*{l}"),
            });
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(t);
                }
            }
        }
        out
    }
}

fn matrix_of_basis(k: &Field, q: usize, p: usize) -> Matrix {
    if p == 0 {
        return Matrix::identity(k, q);
    }
    let mut mat = Matrix::zeros(k, q, q);
    mat.set(p / q, p % q, k.one());
    mat
}

fn matrix_to_coords(k: &Field, q: usize, mat: &Matrix) -> Vec<Elem> {
    let c0 = mat.get(0, 0).clone();
    (0..q * q)
        .map(|p| {
            let (i, j) = (p / q, p % q);
            match p {
                0 => c0.clone(),
                _ if i == j => k.sub(mat.get(i, i), &c0),
                _ => mat.get(i, j).clone(),
            }
        })
        .collect()
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "algebra of dimension {} over {}", self.dim, self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> Algebra {
        Algebra::matrix_algebra(&Field::rationals(), 2)
    }

    #[test]
    fn matrix_algebra_satisfies_axioms() {
        let a = Algebra::matrix_algebra(&Field::prime(5).unwrap(), 3);
        a.verify_axioms().unwrap();
    }

    #[test]
    fn matrix_roundtrip() {
        let a = m2();
        let q = a.field().clone();
        let mat = Matrix::from_ints(&q, &[&[1, 2], &[3, 4]]);
        let e = a.matrix_to_elem(2, &mat);
        assert_eq!(a.elem_to_matrix(2, &e), mat);
        let sq = a.mul(&e, &e);
        assert_eq!(a.elem_to_matrix(2, &sq), mat.mul(&mat, &q));
    }

    #[test]
    fn minimal_polynomial_of_nilpotent() {
        let a = m2();
        let q = a.field().clone();
        let e12 = a.basis(1);
        assert_eq!(a.minimal_polynomial(&e12).unwrap(), Poly::from_ints(&q, &[0, 0, 1]));
        let two = a.scalar(&q.from_i64(2));
        assert_eq!(a.minimal_polynomial(&two).unwrap(), Poly::from_ints(&q, &[-2, 1]));
    }

    #[test]
    fn idempotent_of_diagonal() {
        let a = m2();
        let q = a.field().clone();
        let d = a.matrix_to_elem(2, &Matrix::from_ints(&q, &[&[0, 0], &[0, 3]]));
        let data = a.idempotent_from_element(&d).unwrap();
        assert_eq!(data.kind, IdempotentKind::Nontrivial);
        assert_eq!(data.n, 1);
        assert_eq!(a.mul(&data.e, &data.e), data.e);
        assert_eq!(a.elem_to_matrix(2, &data.e), Matrix::from_ints(&q, &[&[0, 0], &[0, 1]]));
    }

    #[test]
    fn idempotent_classification_extremes() {
        let a = m2();
        assert_eq!(a.idempotent_from_element(&a.basis(1)).unwrap().kind, IdempotentKind::Zero);
        assert_eq!(a.idempotent_from_element(&a.one()).unwrap().kind, IdempotentKind::One);
    }

    #[test]
    fn center_of_matrix_algebra_is_scalars() {
        let a = m2();
        let z = a.center().unwrap();
        assert_eq!(z.len(), 1);
        assert!(a.as_scalar(&z[0]).is_some());
    }

    #[test]
    fn central_simple_matrix_algebra() {
        let a = m2();
        assert_eq!(a.central_simple_check().unwrap(), CentralSimplicity::CentralSimple { rank: 16 });
    }

    #[test]
    fn tensor_dimensions_multiply() {
        let a = m2();
        let t = a.tensor_product(&a).unwrap();
        assert_eq!(t.algebra.dim(), 16);
        t.algebra.verify_axioms().unwrap();
    }

    #[test]
    fn opposite_of_matrix_algebra_is_associative() {
        let a = Algebra::matrix_algebra(&Field::rationals(), 2).opposite();
        a.verify_axioms().unwrap();
    }

    #[test]
    fn corner_of_matrix_unit_is_one_dimensional() {
        let a = m2();
        let q = a.field().clone();
        let e11 = a.matrix_to_elem(2, &Matrix::from_ints(&q, &[&[1, 0], &[0, 0]]));
        assert_eq!(a.corner(&e11).unwrap().dim(), 1);
    }

    #[test]
    fn field_extension_restricts_to_dimension_two() {
        let q = Field::rationals();
        let k = q.adjoin_root(&Poly::from_ints(&q, &[-2, 0, 1])).unwrap();
        let a = Algebra::from_field_extension(&k).unwrap();
        a.verify_axioms().unwrap();
        let b = Algebra::matrix_algebra(&k, 2).restrict_scalars().unwrap();
        assert_eq!(b.dim(), 8);
        b.verify_axioms().unwrap();
    }
}
