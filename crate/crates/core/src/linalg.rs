//! Dense exact linear algebra: Gauss–Jordan elimination, kernels, solving,
//! subspace coordinates and division-free characteristic polynomials.
//!
//! Pivots are inverted through [`Field::inverse`], so over a tower quotient
//! that is not a field elimination may stop with a [`ZeroDivisor`].

use crate::error::{Error, Result};
use crate::field::{Elem, Field, ZeroDivisor};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(k: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![k.zero(); rows * cols] }
    }

    pub fn identity(k: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(k, n, n);
        for i in 0..n {
            m.set(i, i, k.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose `j`-th column is `columns[j]`; `nrows` is needed when
    /// there are no columns.
    pub fn from_columns(nrows: usize, columns: &[Vec<Elem>]) -> Matrix {
        let cols = columns.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for i in 0..nrows {
            for c in columns {
                data.push(c[i].clone());
            }
        }
        Matrix { rows: nrows, cols, data }
    }

    pub fn from_ints(k: &Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| k.from_i64(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Elem::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn add(&self, other: &Matrix, k: &Field) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| k.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix, k: &Field) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| k.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Elem, k: &Field) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| k.mul(a, c)).collect() }
    }

    pub fn mul(&self, other: &Matrix, k: &Field) -> Matrix {
        assert_eq!(self.cols, other.rows, "incompatible matrix product");
        let mut out = Matrix::zeros(k, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = k.add(&out.data[idx], &k.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem], k: &Field) -> Vec<Elem> {
        assert_eq!(self.cols, v.len(), "incompatible matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = k.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = k.add(&acc, &k.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        assert!(blocks.iter().all(|b| b.cols == cols));
        Matrix {
            rows: blocks.iter().map(|b| b.rows).sum(),
            cols,
            data: blocks.iter().flat_map(|b| b.data.iter().cloned()).collect(),
        }
    }
}

/// Reduced row echelon form with the pivot column of each nonzero row.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

pub fn echelon(k: &Field, m: &Matrix) -> std::result::Result<Echelon, ZeroDivisor> {
    let (nr, nc) = (m.rows, m.cols);
    let mut rows: Vec<Vec<Elem>> = m.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = k.inverse(&rows[r][c])?;
        if !k.is_one(&inv) {
            for x in rows[r][c..].iter_mut() {
                if !x.is_zero() {
                    *x = k.mul(x, &inv);
                }
            }
        }
        let nz: Vec<(usize, Elem)> =
            (c + 1..nc).filter(|&j| !rows[r][j].is_zero()).map(|j| (j, rows[r][j].clone())).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = std::mem::replace(&mut row[c], k.zero());
            for (j, v) in &nz {
                row[*j] = k.sub(&row[*j], &k.mul(&f, v));
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(Echelon { matrix: Matrix::from_rows_sized(nr, nc, rows), pivots })
}

impl Matrix {
    fn from_rows_sized(rows: usize, cols: usize, data: Vec<Vec<Elem>>) -> Matrix {
        Matrix { rows, cols, data: data.into_iter().flatten().collect() }
    }
}

pub fn rank(k: &Field, m: &Matrix) -> std::result::Result<usize, ZeroDivisor> {
    Ok(echelon(k, m)?.pivots.len())
}

/// A basis of the right kernel `{v : m v = 0}`, one vector per free column.
pub fn kernel(k: &Field, m: &Matrix) -> std::result::Result<Vec<Vec<Elem>>, ZeroDivisor> {
    let e = echelon(k, m)?;
    let nc = m.cols;
    let mut is_pivot = vec![None; nc];
    for (r, &c) in e.pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    let mut basis = Vec::new();
    for free in (0..nc).filter(|&c| is_pivot[c].is_none()) {
        let mut v = vec![k.zero(); nc];
        v[free] = k.one();
        for (r, &c) in e.pivots.iter().enumerate() {
            v[c] = k.neg(e.matrix.get(r, free));
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Some solution of `m x = b` (free variables set to zero), or `None`.
pub fn solve(k: &Field, m: &Matrix, b: &[Elem]) -> std::result::Result<Option<Vec<Elem>>, ZeroDivisor> {
    assert_eq!(m.rows, b.len());
    let mut cols: Vec<Vec<Elem>> = (0..m.cols).map(|j| m.column(j)).collect();
    cols.push(b.to_vec());
    let aug = Matrix::from_columns(m.rows, &cols);
    let e = echelon(k, &aug)?;
    if e.pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![k.zero(); m.cols];
    for (r, &c) in e.pivots.iter().enumerate() {
        x[c] = e.matrix.get(r, m.cols).clone();
    }
    Ok(Some(x))
}

pub fn inverse(k: &Field, m: &Matrix) -> std::result::Result<Option<Matrix>, ZeroDivisor> {
    assert_eq!(m.rows, m.cols, "inverse of a non-square matrix");
    let n = m.rows;
    let mut cols: Vec<Vec<Elem>> = (0..n).map(|j| m.column(j)).collect();
    let id = Matrix::identity(k, n);
    cols.extend((0..n).map(|j| id.column(j)));
    let e = echelon(k, &Matrix::from_columns(n, &cols))?;
    if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
        return Ok(None);
    }
    let rows = (0..n).map(|i| e.matrix.row(i)[n..].to_vec()).collect();
    Ok(Some(Matrix::from_rows(rows)))
}

/// Indices of the first maximal linearly independent subfamily, greedily in order.
pub fn independent_subset(k: &Field, dim: usize, vectors: &[Vec<Elem>]) -> std::result::Result<Vec<usize>, ZeroDivisor> {
    Ok(echelon(k, &Matrix::from_columns(dim, vectors))?.pivots)
}

/// `det(X·I − m)` by Berkowitz's division-free algorithm.
pub fn charpoly(k: &Field, m: &Matrix) -> Poly {
    assert_eq!(m.rows, m.cols, "characteristic polynomial of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return Poly::one(k);
    }
    // Coefficients are kept highest degree first: c[0] = 1.
    let mut c: Vec<Elem> = vec![k.one(), k.neg(m.get(0, 0))];
    for r in 1..n {
        // Leading principal block A (r×r), row R = m[r][0..r], column C = m[0..r][r], a = m[r][r].
        let a = m.get(r, r);
        let col: Vec<Elem> = (0..r).map(|i| m.get(i, r).clone()).collect();
        let row: Vec<Elem> = (0..r).map(|j| m.get(r, j).clone()).collect();
        // Toeplitz column: 1, -a, -R C, -R A C, ..., -R A^{r-1} C
        let mut t = Vec::with_capacity(r + 2);
        t.push(k.one());
        t.push(k.neg(a));
        let mut v = col;
        for _ in 0..r {
            let dot = row.iter().zip(&v).fold(k.zero(), |acc, (x, y)| k.add(&acc, &k.mul(x, y)));
            t.push(k.neg(&dot));
            v = (0..r)
                .map(|i| (0..r).fold(k.zero(), |acc, j| k.add(&acc, &k.mul(m.get(i, j), &v[j]))))
                .collect();
        }
        // New coefficients: lower-triangular Toeplitz(t) times c.
        let mut next = vec![k.zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            let mut acc = k.zero();
            for (j, cj) in c.iter().enumerate() {
                if j <= i {
                    acc = k.add(&acc, &k.mul(&t[i - j], cj));
                }
            }
            *slot = acc;
        }
        c = next;
    }
    c.reverse();
    Poly::from_coeffs(c)
}

/// A subspace of `F^n` with a fixed basis and a fast coordinate map.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
    /// Inverse of the basis restricted to the pivot rows.
    pivot_inverse: Matrix,
}

impl Subspace {
    /// The basis must be linearly independent.
    pub fn new(k: &Field, ambient: usize, basis: Vec<Vec<Elem>>) -> Result<Subspace> {
        let bm = Matrix::from_columns(ambient, &basis);
        let t = bm.transpose();
        let e = echelon(k, &t)?;
        if e.pivots.len() != basis.len() {
            return Err(Error::Invalid("subspace basis is linearly dependent".into()));
        }
        let d = basis.len();
        let sub = Matrix::from_rows(e.pivots.iter().map(|&p| (0..d).map(|j| basis[j][p].clone()).collect()).collect());
        let pivot_inverse = match inverse(k, &sub)? {
            Some(inv) => inv,
            None => return Err(Error::Contract("pivot block of an independent basis is singular".into())),
        };
        Ok(Subspace { ambient, basis, pivots: e.pivots, pivot_inverse })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    /// Coordinates of `v` in the basis, or `None` when `v` is outside.
    pub fn coords(&self, k: &Field, v: &[Elem]) -> Option<Vec<Elem>> {
        let rhs: Vec<Elem> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let c = self.pivot_inverse.mul_vec(&rhs, k);
        (self.combine(k, &c) == v).then_some(c)
    }

    pub fn contains(&self, k: &Field, v: &[Elem]) -> bool {
        self.coords(k, v).is_some()
    }

    pub fn combine(&self, k: &Field, c: &[Elem]) -> Vec<Elem> {
        let mut out = vec![k.zero(); self.ambient];
        for (ci, b) in c.iter().zip(&self.basis) {
            if ci.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                if !x.is_zero() {
                    *o = k.add(o, &k.mul(ci, x));
                }
            }
        }
        out
    }
}
