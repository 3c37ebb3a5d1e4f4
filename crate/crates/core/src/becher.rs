//! Quadratic-extension tools for 2-torsion in the Brauer group: the
//! corestriction of a quaternion algebra over `K = F[δ]`, its splitting into
//! two quaternion algebras over `F`, the symplectic-or-split procedure for
//! algebras isomorphic to their opposite, and the termination order on
//! splitting sequences.

use std::cmp::Ordering;

use crate::algebra::{AlgElem, Algebra, LinMap, Subalgebra};
use crate::error::{contract, invalid, Error, Result};
use crate::field::{Elem, Field, SquareRoot};
use crate::involution::{classify_first_kind, plus_minus_split, Involution, InvolutionKind};
use crate::linalg::{self, Matrix};
use crate::poly::Poly;
use crate::quaternion::{make_quaternion, recognize_quaternion, QuaternionParams, Recognition};
use crate::splitting::degree;
use crate::wedderburn::{matrix_units_from_zero_divisor, refine_to_matrix_decomposition, MatrixDecomposition, ProbeStrategy};

/// `K = F[δ]/(δ² − g)` with `g` not a square in `F`.
#[derive(Clone, Debug)]
pub struct QuadExt {
    base: Field,
    g: Elem,
    ext: Field,
}

impl QuadExt {
    pub fn new(base: &Field, g: Elem) -> Result<QuadExt> {
        if base.characteristic() == 2 {
            return Err(Error::Unsupported("quadratic extensions in characteristic 2".into()));
        }
        base.validate(&g)?;
        if let SquareRoot::Root(_) = base.sqrt(&g) {
            return invalid(format!("{} is a square", base.format(&g)));
        }
        let rel = Poly::from_coeffs(vec![base.neg(&g), base.zero(), base.one()]);
        let ext = base.adjoin_root(&rel)?;
        Ok(QuadExt { base: base.clone(), g, ext })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn g(&self) -> &Elem {
        &self.g
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    /// `x + yδ`.
    pub fn elem(&self, x: &Elem, y: &Elem) -> Elem {
        self.ext.from_coeffs(vec![x.clone(), y.clone()])
    }

    /// `x + yδ ↦ x − yδ`.
    pub fn conj(&self, z: &Elem) -> Elem {
        let Elem::Ext(c) = z else { unreachable!("element of the extension") };
        let get = |i: usize| c.get(i).cloned().unwrap_or_else(|| self.base.zero());
        self.elem(&get(0), &self.base.neg(&get(1)))
    }
}

#[derive(Clone, Debug)]
pub struct Corestriction {
    pub qe: QuadExt,
    /// `(a, b, c, d)` for `A = h_K(a + bδ, c + dδ)`.
    pub coeffs: [Elem; 4],
    /// `A ⊗_K Ā` over `K`, basis `ε_i ⊗ ε̄_j` at index `4i + j`.
    pub b_k: Algebra,
    /// The same algebra over `F`, basis `δ^s (ε_i ⊗ ε̄_j)` at index `16s + 4i + j`.
    pub b_f: Algebra,
    /// `e ⊗ f ↦ G⁻¹(f) ⊗ G(e)` as an `F`-linear map of `b_f`.
    pub swap: LinMap,
    /// The fixed algebra of `swap`, inside `b_f`.
    pub t: Subalgebra,
    /// `v v̄` in the coordinates of `t`.
    pub x: AlgElem,
    /// `(u + ū)(cb − ad + d u ū + b v v̄)` in the coordinates of `t`.
    pub y: AlgElem,
}

/// Builds `T = Ker(I_B − Id)` for `A = h_K(a + bδ, c + dδ)` and checks that it
/// is a 16-dimensional central simple `F`-algebra with `B = T ⊕ δT`.
pub fn corestriction(qe: &QuadExt, a: Elem, b: Elem, c: Elem, d: Elem) -> Result<Corestriction> {
    let f = &qe.base;
    let k = &qe.ext;
    for e in [&a, &b, &c, &d] {
        f.validate(e)?;
    }
    let sq = |x: &Elem| f.mul(x, x);
    if sq(&a) == f.mul(&sq(&b), &qe.g) {
        return invalid("a² = b²g: the first parameter is not a unit of K");
    }
    if sq(&c) == f.mul(&sq(&d), &qe.g) {
        return invalid("c² = d²g: the second parameter is not a unit of K");
    }
    let p = QuaternionParams::new(k, qe.elem(&a, &b), qe.elem(&c, &d))?;
    let pbar = QuaternionParams::new(k, qe.conj(p.a()), qe.conj(p.b()))?;
    let alg = make_quaternion(&p)?;
    let alg_bar = make_quaternion(&pbar)?;
    let b_k = alg.tensor_product(&alg_bar)?.algebra;
    let b_f = b_k.restrict_scalars()?;

    let mut sw = Matrix::zeros(f, 32, 32);
    for s in 0..2 {
        let sign = if s == 0 { f.one() } else { f.from_i64(-1) };
        for i in 0..4 {
            for j in 0..4 {
                sw.set(16 * s + 4 * j + i, 16 * s + 4 * i + j, sign.clone());
            }
        }
    }
    let mut swap = LinMap::new(sw);
    swap.verify_homomorphism(&b_f, &b_f)?;
    if swap.compose(&swap, f) != LinMap::identity(f, 32) {
        return contract("swap does not have order two");
    }

    let unit = |idx: usize| b_f.basis(idx);
    let mut basis = Vec::with_capacity(16);
    for i in 0..4 {
        basis.push(unit(5 * i));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            basis.push(b_f.add(&unit(4 * i + j), &unit(4 * j + i)));
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            basis.push(b_f.sub(&unit(16 + 4 * i + j), &unit(16 + 4 * j + i)));
        }
    }
    let fixed = linalg::kernel(f, &swap.matrix().sub(&Matrix::identity(f, 32), f))?;
    if fixed.len() != 16 || basis.iter().any(|t| swap.apply(f, t) != *t) {
        return contract("fixed space of the swap is not 16-dimensional");
    }
    let t = b_f.subalgebra(basis)?;

    let delta = b_f.basis(16);
    let mut both: Vec<Vec<Elem>> = t.basis().iter().map(|e| e.coords().to_vec()).collect();
    for e in t.basis() {
        let de = b_f.mul(&delta, e);
        if swap.apply(f, &de) != b_f.neg(&de) {
            return contract("multiplication by δ does not swap the eigenspaces");
        }
        both.push(de.into_coords());
    }
    if linalg::independent_subset(f, 32, &both)?.len() != 32 {
        return contract("T and δT do not span B");
    }
    if !t.algebra.central_simple_check()?.is_central_simple() {
        return contract("corestriction is not central simple");
    }

    // u = ε_1 ⊗ 1, ū = 1 ⊗ ε̄_1, v = ε_2 ⊗ 1, v̄ = 1 ⊗ ε̄_2.
    let (u, ub, v, vb) = (b_k.basis(4), b_k.basis(1), b_k.basis(8), b_k.basis(2));
    let lift = |e: &Elem| k.lift(e.clone());
    let x_k = b_k.mul(&v, &vb);
    let inner = b_k.add(
        &b_k.add(
            &b_k.scalar(&lift(&f.sub(&f.mul(&c, &b), &f.mul(&a, &d)))),
            &b_k.scale(&lift(&d), &b_k.mul(&u, &ub)),
        ),
        &b_k.scale(&lift(&b), &x_k),
    );
    let y_k = b_k.mul(&b_k.add(&u, &ub), &inner);
    let to_t = |e: &AlgElem| {
        t.project(&b_k.restrict_elem(e)).ok_or_else(|| Error::Contract("element is not fixed by the swap".into()))
    };
    let x = to_t(&x_k)?;
    let y = to_t(&y_k)?;
    Ok(Corestriction { qe: qe.clone(), coeffs: [a, b, c, d], b_k, b_f, swap, t, x, y })
}

/// How the first factor was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairRoute {
    /// `Q1 = F[x, y]` with `x² = a1`, `y² = b1` both nonzero.
    Generators,
    /// `x` or `y` squares to zero; `Q1 ≅ M₂(F)` is cut out by matrix units
    /// built from that zero divisor.
    ZeroDivisor(AlgElem),
}

#[derive(Clone, Debug)]
pub struct QuaternionPair {
    pub route: PairRoute,
    pub q1: QuaternionParams,
    pub q2: QuaternionParams,
    /// Images of the basis `1, i, j, k` of each factor, in the coordinates of `T`.
    pub q1_basis: Vec<AlgElem>,
    pub q2_basis: Vec<AlgElem>,
    /// Verified isomorphism `h(q1) ⊗ h(q2) → T`.
    pub iso: LinMap,
}

/// `h(1, 1)` basis `1, e11 − e22, e12 + e21, (e11 − e22)(e12 + e21)` from 2×2 units.
fn split_quaternion_basis(a: &Algebra, d: &MatrixDecomposition) -> Vec<AlgElem> {
    let i = a.sub(d.unit(0, 0), d.unit(1, 1));
    let j = a.add(d.unit(0, 1), d.unit(1, 0));
    let k = a.mul(&i, &j);
    vec![a.one(), i, j, k]
}

/// Quaternion parameters and basis of the 4-dimensional subalgebra `c`, in ambient coordinates.
fn quaternion_of(c: &Subalgebra) -> Result<(QuaternionParams, Vec<AlgElem>)> {
    let f = c.algebra.field();
    let (params, local) = match recognize_quaternion(&c.algebra)? {
        Recognition::Quaternion { params, basis, .. } => (params, basis.to_vec()),
        Recognition::ZeroDivisor(z) => {
            let d = matrix_units_from_zero_divisor(&c.algebra, &z)?;
            if d.q() != 2 {
                return contract("zero divisor did not split the quaternion algebra");
            }
            (QuaternionParams::from_ints(f, 1, 1)?, split_quaternion_basis(&c.algebra, &d))
        }
    };
    Ok((params, local.iter().map(|e| c.embed(e)).collect()))
}

fn centralizer_subalgebra(t: &Algebra, gens: &[AlgElem]) -> Result<Subalgebra> {
    let f = t.field();
    let mut vecs = vec![t.one().into_coords()];
    vecs.extend(t.centralizer(gens)?.into_iter().map(AlgElem::into_coords));
    let basis = linalg::independent_subset(f, t.dim(), &vecs)?.into_iter().map(|i| AlgElem::new(vecs[i].clone())).collect();
    t.subalgebra(basis)
}

/// Two commuting 2×2 blocks of a 4×4 system: `f_ij = Σ_k e_{2i+k, 2j+k}`.
fn coarsen(a: &Algebra, d: &MatrixDecomposition) -> Result<MatrixDecomposition> {
    match d.q() {
        2 => Ok(d.clone()),
        4 => {
            let mut units = Vec::with_capacity(4);
            for i in 0..2 {
                for j in 0..2 {
                    units.push(a.add(d.unit(2 * i, 2 * j), d.unit(2 * i + 1, 2 * j + 1)));
                }
            }
            let c = MatrixDecomposition::new(2, units)?;
            c.verify(a)?;
            Ok(c)
        }
        q => contract(format!("unexpected matrix size {q} for a degree-4 algebra")),
    }
}

/// `T ≅ Q1 ⊗ Q2`, with `Q1 = F[x, y]` when `x² y² ≠ 0` and `Q2` the centralizer of `Q1`.
pub fn quaternion_pair(cr: &Corestriction) -> Result<QuaternionPair> {
    let t = &cr.t.algebra;
    let f = t.field();
    let (x, y) = (&cr.x, &cr.y);
    for (name, e) in [("x", x), ("y", y)] {
        if e.is_zero() {
            return invalid(format!("{name} is zero"));
        }
        if t.as_scalar(e).is_some() {
            return invalid(format!("{name} = {} is a scalar", t.format_elem(e)));
        }
    }
    let (Some(a1), Some(b1)) = (t.as_scalar(&t.mul(x, x)), t.as_scalar(&t.mul(y, y))) else {
        return contract("x² or y² is not a scalar");
    };
    let xy = t.mul(x, y);
    if t.add(&xy, &t.mul(y, x)) != t.zero() {
        return contract("x and y do not anticommute");
    }
    let (route, q1, q1_basis) = if a1.is_zero() || b1.is_zero() {
        let z = if a1.is_zero() { x.clone() } else { y.clone() };
        let r = refine_to_matrix_decomposition(t, Some(&z), &ProbeStrategy::cheap())?;
        let d = coarsen(t, &r.decomposition)?;
        (PairRoute::ZeroDivisor(z), QuaternionParams::from_ints(f, 1, 1)?, split_quaternion_basis(t, &d))
    } else {
        (PairRoute::Generators, QuaternionParams::new(f, a1, b1)?, vec![t.one(), x.clone(), y.clone(), xy])
    };
    let c = centralizer_subalgebra(t, &q1_basis[1..3])?;
    if c.dim() != 4 {
        return contract(format!("centralizer has dimension {}", c.dim()));
    }
    let (q2, q2_basis) = quaternion_of(&c)?;

    let h1 = make_quaternion(&q1)?;
    let h2 = make_quaternion(&q2)?;
    let tp = h1.tensor_product(&h2)?;
    let images: Vec<AlgElem> = (0..16).map(|idx| t.mul(&q1_basis[idx / 4], &q2_basis[idx % 4])).collect();
    let mut iso = LinMap::from_images(16, &images);
    iso.verify_homomorphism(&tp.algebra, t)?;
    if !iso.is_bijective(f)? {
        return contract("product map onto T is not bijective");
    }
    Ok(QuaternionPair { route, q1, q2, q1_basis, q2_basis, iso })
}

#[derive(Clone, Debug)]
pub enum SymplecticOrSplit {
    Symplectic(Involution),
    /// A nonzero non-invertible element.
    ZeroDivisor(AlgElem),
    /// `t = αJ(α)` has no square root in the field.
    ObstructionNonSquare(Elem),
}

fn zero_divisor_outcome(a: &Algebra, z: AlgElem) -> Result<SymplecticOrSplit> {
    if z.is_zero() || a.is_invertible(&z)? {
        return contract("claimed zero divisor is zero or invertible");
    }
    Ok(SymplecticOrSplit::ZeroDivisor(z))
}

/// For an anti-automorphism `J` of a central simple `A`, returns a symplectic
/// involution of `A` or a zero divisor showing that `A` is not a division algebra.
pub fn symplectic_or_split(a: &Algebra, j: &LinMap) -> Result<SymplecticOrSplit> {
    let f = a.field();
    let n = degree(a)?;
    if n < 2 {
        return invalid("algebra has degree 1");
    }
    let mut jm = j.clone();
    jm.verify_homomorphism(a, &a.opposite())?;
    if !jm.is_bijective(f)? {
        return contract("map is not bijective");
    }
    let apply = |x: &AlgElem| j.apply(f, x);
    // J² = Int(α⁻¹).
    let inner = a.skolem_noether(&j.compose(j, f))?;
    let mut alpha = inner.inverse;
    let Some(t) = a.as_scalar(&a.mul(&alpha, &apply(&alpha))) else {
        return contract("αJ(α) is not central");
    };
    let j1 = if a.as_scalar(&alpha).is_some() {
        Involution::new(a, j.clone())?
    } else {
        match f.sqrt(&t) {
            SquareRoot::Root(s) => alpha = a.scale(&f.inverse(&s)?, &alpha),
            _ => return Ok(SymplecticOrSplit::ObstructionNonSquare(t)),
        }
        let beta = a.add(&a.one(), &alpha);
        let Some(beta_inv) = a.inverse(&beta)? else {
            return zero_divisor_outcome(a, beta);
        };
        let images: Vec<AlgElem> = (0..a.dim()).map(|i| a.mul3(&beta, &apply(&a.basis(i)), &beta_inv)).collect();
        Involution::new(a, LinMap::from_images(a.dim(), &images))?
    };
    if classify_first_kind(&j1)? == InvolutionKind::Symplectic {
        return Ok(SymplecticOrSplit::Symplectic(j1));
    }
    let (_, minus) = plus_minus_split(&j1)?;
    let Some(y) = minus.into_iter().next() else {
        return contract("orthogonal involution without skew elements");
    };
    if !a.is_invertible(&y)? {
        return zero_divisor_outcome(a, y);
    }
    let j2 = j1.twist(&y)?;
    if classify_first_kind(&j2)? != InvolutionKind::Symplectic {
        return contract("twisted involution is not symplectic");
    }
    Ok(SymplecticOrSplit::Symplectic(j2))
}

/// Degrees of successive tower steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingSequence(Vec<u32>);

impl SplittingSequence {
    pub fn new(entries: Vec<u32>) -> Result<SplittingSequence> {
        if entries.iter().any(|&n| n < 2) {
            return invalid("splitting sequence entries must be at least 2");
        }
        Ok(SplittingSequence(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    fn sorted_desc(&self) -> Vec<u32> {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Multiset order: compare the descending sortings lexicographically,
    /// a proper prefix being smaller.
    pub fn multiset_cmp(&self, other: &SplittingSequence) -> Ordering {
        self.sorted_desc().cmp(&other.sorted_desc())
    }
}

pub fn splitting_sequence_less(s: &SplittingSequence, t: &SplittingSequence) -> bool {
    s.multiset_cmp(t) == Ordering::Less
}
