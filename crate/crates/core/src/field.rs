//! Exact scalars: ℚ, prime fields, and triangular tower quotients
//! `B[x1]/(P1)[x2]/(P2)...` over either of them.
//!
//! Tower quotients need not be fields. Every inversion goes through
//! [`Field::invert_or_witness`], which either inverts, reports zero, or hands
//! back a [`ZeroDivisor`] describing a proper factor of one of the relations.
//! [`split_tower`] turns such a witness into the two quotient towers.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::poly::{ext_gcd, mul_slices, rem_monic, trim, Poly};

/// Canonical representative of a scalar. Which variant is valid depends on
/// the [`Field`] it belongs to; an `Ext` vector holds the coefficients over
/// the parent level in ascending degree with trailing zeros removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Rat(BigRational),
    Mod(u64),
    Ext(Vec<Elem>),
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Rat(r) => r.is_zero(),
            Elem::Mod(v) => *v == 0,
            Elem::Ext(v) => v.is_empty(),
        }
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
enum Kind {
    Rationals,
    Prime(u64),
    Ext { parent: Field, relation: Poly },
}

/// A field descriptor. Cheap to clone; equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Field(Arc<Kind>);

/// A nonzero element of some tower level whose lift shares the proper monic
/// factor `factor` with that level's relation. `element * cofactor == 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroDivisor {
    /// Tower level (1 = first adjoined variable) whose relation factors.
    pub level: usize,
    /// The noninvertible element, living in the level-`level` field.
    pub element: Elem,
    /// Monic gcd of the lifted element and the relation.
    pub factor: Poly,
    /// The relation divided by `factor`, as an element of the same level.
    pub cofactor: Elem,
}

impl fmt::Display for ZeroDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zero divisor found at tower level {}", self.level)
    }
}

impl std::error::Error for ZeroDivisor {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inversion {
    Inverse(Elem),
    Zero,
    Witness(ZeroDivisor),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquareRoot {
    Root(Elem),
    NotSquare,
    /// The field kind gives no decision procedure for this element.
    Unknown,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn mod_sqrt(a: u64, p: u64) -> Option<u64> {
    if a == 0 || p == 2 {
        return Some(a);
    }
    if mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul(tt, tt);
            i += 1;
        }
        let b = mod_pow(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Some(r.min(p - r))
}

fn bigint_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(Kind::Rationals))
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        Ok(Field(Arc::new(Kind::Prime(p))))
    }

    /// Adjoins a root of the monic polynomial `f` (coefficients in `self`).
    pub fn adjoin_root(&self, f: &Poly) -> Result<Field> {
        match f.degree() {
            None | Some(0) => return invalid("adjoined relation must have degree at least 1"),
            _ => {}
        }
        if !f.is_monic(self) {
            return invalid("adjoined relation must be monic");
        }
        for c in f.coeffs() {
            self.validate(c)?;
        }
        Ok(self.ext_unchecked(f.clone()))
    }

    pub(crate) fn ext_unchecked(&self, relation: Poly) -> Field {
        Field(Arc::new(Kind::Ext { parent: self.clone(), relation }))
    }

    /// Builds a tower by adjoining each relation in turn.
    pub fn tower(base: &Field, relations: &[Poly]) -> Result<Field> {
        let mut k = base.clone();
        for r in relations {
            k = k.adjoin_root(r)?;
        }
        Ok(k)
    }

    pub fn parent(&self) -> Option<&Field> {
        match self.0.as_ref() {
            Kind::Ext { parent, .. } => Some(parent),
            _ => None,
        }
    }

    pub fn relation(&self) -> Option<&Poly> {
        match self.0.as_ref() {
            Kind::Ext { relation, .. } => Some(relation),
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        self.parent().map_or(0, |p| p.depth() + 1)
    }

    /// The ancestor at depth `k` (`k <= self.depth()`).
    pub fn level(&self, k: usize) -> &Field {
        let d = self.depth();
        assert!(k <= d, "tower level {k} exceeds depth {d}");
        let mut f = self;
        for _ in k..d {
            f = f.parent().expect("depth is consistent");
        }
        f
    }

    pub fn base(&self) -> &Field {
        self.level(0)
    }

    /// Relations from the bottom of the tower upwards.
    pub fn relations(&self) -> Vec<Poly> {
        (1..=self.depth()).map(|k| self.level(k).relation().expect("ext level").clone()).collect()
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self.0.as_ref(), Kind::Rationals)
    }

    /// The prime `p` when the base field is `F_p`, otherwise `None`.
    pub fn prime_modulus(&self) -> Option<u64> {
        match self.base().0.as_ref() {
            Kind::Prime(p) => Some(*p),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.prime_modulus().unwrap_or(0)
    }

    /// Degree of the top relation (1 for a base field).
    pub fn ext_degree(&self) -> usize {
        self.relation().map_or(1, |r| r.degree().expect("nonzero relation"))
    }

    /// Dimension over the base field.
    pub fn total_degree(&self) -> usize {
        self.ext_degree() * self.parent().map_or(1, Field::total_degree)
    }

    /// True when `self` is `other` or one of its ancestors.
    pub fn is_subfield_of(&self, other: &Field) -> bool {
        let d = self.depth();
        d <= other.depth() && other.level(d) == self
    }

    pub fn zero(&self) -> Elem {
        match self.0.as_ref() {
            Kind::Rationals => Elem::Rat(BigRational::zero()),
            Kind::Prime(_) => Elem::Mod(0),
            Kind::Ext { .. } => Elem::Ext(Vec::new()),
        }
    }

    pub fn one(&self) -> Elem {
        match self.0.as_ref() {
            Kind::Rationals => Elem::Rat(BigRational::one()),
            Kind::Prime(_) => Elem::Mod(1),
            Kind::Ext { parent, relation } => {
                Elem::Ext(rem_monic(parent, vec![parent.one()], relation.coeffs()))
            }
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    /// Image of an element of the parent level.
    pub fn lift(&self, c: Elem) -> Elem {
        match self.0.as_ref() {
            Kind::Ext { parent, relation } => Elem::Ext(rem_monic(parent, vec![c], relation.coeffs())),
            _ => c,
        }
    }

    /// Image of an element of the subfield `from` (an ancestor of `self`).
    pub fn embed_from(&self, from: &Field, a: &Elem) -> Elem {
        if self.depth() <= from.depth() {
            return a.clone();
        }
        self.lift(self.parent().expect("ext level").embed_from(from, a))
    }

    /// Image of an element of a base-field scalar, lifted through every level.
    pub fn from_base(&self, c: Elem) -> Elem {
        match self.parent() {
            Some(p) => self.lift(p.from_base(c)),
            None => c,
        }
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        match self.0.as_ref() {
            Kind::Rationals => Elem::Rat(BigRational::from_integer(n.clone())),
            Kind::Prime(p) => {
                let pb = BigInt::from(*p);
                let r = ((n % &pb) + &pb) % &pb;
                Elem::Mod(r.to_u64().expect("residue fits"))
            }
            Kind::Ext { parent, .. } => self.lift(parent.from_bigint(n)),
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        let num = self.from_bigint(r.numer());
        let den = self.from_bigint(r.denom());
        if den.is_zero() {
            return invalid(format!("denominator {} vanishes in characteristic {}", r.denom(), self.characteristic()));
        }
        Ok(self.mul(&num, &self.inverse(&den).expect("integers are units when nonzero")))
    }

    /// The top variable of a tower level.
    pub fn generator(&self) -> Option<Elem> {
        match self.0.as_ref() {
            Kind::Ext { parent, relation } => {
                Some(Elem::Ext(rem_monic(parent, vec![parent.zero(), parent.one()], relation.coeffs())))
            }
            _ => None,
        }
    }

    /// Canonical element from coefficients over the parent level.
    pub fn from_coeffs(&self, coeffs: Vec<Elem>) -> Elem {
        match self.0.as_ref() {
            Kind::Ext { parent, relation } => {
                let mut v = coeffs;
                trim(&mut v);
                Elem::Ext(rem_monic(parent, v, relation.coeffs()))
            }
            _ => panic!("from_coeffs on a base field"),
        }
    }

    /// Checks that `a` is a canonical element of this field.
    pub fn validate(&self, a: &Elem) -> Result<()> {
        let ok = match (self.0.as_ref(), a) {
            (Kind::Rationals, Elem::Rat(_)) => true,
            (Kind::Prime(p), Elem::Mod(v)) => v < p,
            (Kind::Ext { parent, relation }, Elem::Ext(cs)) => {
                if cs.last().is_some_and(Elem::is_zero) || cs.len() >= relation.coeffs().len() {
                    false
                } else {
                    for c in cs {
                        parent.validate(c)?;
                    }
                    true
                }
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (self.0.as_ref(), a, b) {
            (Kind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (Kind::Prime(p), Elem::Mod(x), Elem::Mod(y)) => Elem::Mod(((*x as u128 + *y as u128) % *p as u128) as u64),
            (Kind::Ext { parent, .. }, Elem::Ext(x), Elem::Ext(y)) => Elem::Ext(crate::poly::add_slices(parent, x, y)),
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (self.0.as_ref(), a) {
            (Kind::Rationals, Elem::Rat(x)) => Elem::Rat(-x),
            (Kind::Prime(p), Elem::Mod(x)) => Elem::Mod(if *x == 0 { 0 } else { p - x }),
            (Kind::Ext { parent, .. }, Elem::Ext(x)) => Elem::Ext(x.iter().map(|c| parent.neg(c)).collect()),
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self.0.as_ref(), a, b) {
            (Kind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Kind::Prime(p), Elem::Mod(x), Elem::Mod(y)) => Elem::Mod(((*x as u128 * *y as u128) % *p as u128) as u64),
            (Kind::Ext { parent, relation }, Elem::Ext(x), Elem::Ext(y)) => {
                Elem::Ext(rem_monic(parent, mul_slices(parent, x, y), relation.coeffs()))
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn pow(&self, a: &Elem, mut n: u64) -> Elem {
        let mut acc = self.one();
        let mut b = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            n >>= 1;
        }
        acc
    }

    pub fn invert_or_witness(&self, a: &Elem) -> Inversion {
        if a.is_zero() {
            return Inversion::Zero;
        }
        match (self.0.as_ref(), a) {
            (Kind::Rationals, Elem::Rat(x)) => Inversion::Inverse(Elem::Rat(x.recip())),
            (Kind::Prime(p), Elem::Mod(x)) => Inversion::Inverse(Elem::Mod(mod_pow(*x, p - 2, *p))),
            (Kind::Ext { parent, relation }, Elem::Ext(x)) => match self.ext_inverse(parent, relation, x) {
                Ok(inv) => inv,
                Err(w) => Inversion::Witness(w),
            },
            _ => panic!("element does not belong to {self}"),
        }
    }

    fn ext_inverse(&self, parent: &Field, relation: &Poly, x: &[Elem]) -> std::result::Result<Inversion, ZeroDivisor> {
        let a = Poly::from_coeffs(x.to_vec());
        let (g, s, _) = ext_gcd(&a, relation, parent)?;
        if g.degree() == Some(0) {
            let c = parent.inverse(&g.coeffs()[0])?;
            let inv = s.scale(&c, parent);
            return Ok(Inversion::Inverse(Elem::Ext(rem_monic(parent, inv.into_coeffs(), relation.coeffs()))));
        }
        let d = g.monic(parent)?;
        let (cof, _) = relation.divrem_monic(&d, parent);
        Ok(Inversion::Witness(ZeroDivisor {
            level: self.depth(),
            element: Elem::Ext(x.to_vec()),
            factor: d,
            cofactor: Elem::Ext(cof.into_coeffs()),
        }))
    }

    /// Inverse of a nonzero element, or the witness that it is a zero divisor.
    ///
    /// # Panics
    /// Panics when `a` is zero.
    pub fn inverse(&self, a: &Elem) -> std::result::Result<Elem, ZeroDivisor> {
        match self.invert_or_witness(a) {
            Inversion::Inverse(b) => Ok(b),
            Inversion::Witness(w) => Err(w),
            Inversion::Zero => panic!("inverse of zero requested"),
        }
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> std::result::Result<Elem, ZeroDivisor> {
        Ok(self.mul(a, &self.inverse(b)?))
    }

    /// Square root where decidable: exactly over ℚ and `F_p`; in towers only
    /// for elements coming from a lower level that already have a root there.
    pub fn sqrt(&self, a: &Elem) -> SquareRoot {
        match (self.0.as_ref(), a) {
            (Kind::Rationals, Elem::Rat(x)) => {
                match (bigint_sqrt_exact(x.numer()), bigint_sqrt_exact(x.denom())) {
                    (Some(n), Some(d)) => SquareRoot::Root(Elem::Rat(BigRational::new(n, d))),
                    _ => SquareRoot::NotSquare,
                }
            }
            (Kind::Prime(p), Elem::Mod(x)) => match mod_sqrt(*x, *p) {
                Some(r) => SquareRoot::Root(Elem::Mod(r)),
                None => SquareRoot::NotSquare,
            },
            (Kind::Ext { parent, .. }, Elem::Ext(cs)) => {
                if cs.len() > 1 {
                    return SquareRoot::Unknown;
                }
                let c = cs.first().cloned().unwrap_or_else(|| parent.zero());
                match parent.sqrt(&c) {
                    SquareRoot::Root(r) => SquareRoot::Root(self.lift(r)),
                    _ => SquareRoot::Unknown,
                }
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// Coordinates over the base field (length `total_degree`); level `k`
    /// coefficient `s` occupies the block starting at `s * parent_degree`.
    pub fn flatten(&self, a: &Elem) -> Vec<Elem> {
        match (self.0.as_ref(), a) {
            (Kind::Ext { parent, relation }, Elem::Ext(cs)) => {
                let d = relation.degree().expect("relation");
                let mut out = Vec::with_capacity(self.total_degree());
                for s in 0..d {
                    match cs.get(s) {
                        Some(c) => out.extend(parent.flatten(c)),
                        None => out.extend(std::iter::repeat_n(parent.base().zero(), parent.total_degree())),
                    }
                }
                out
            }
            (Kind::Ext { .. }, _) => panic!("element does not belong to {self}"),
            _ => vec![a.clone()],
        }
    }

    pub fn unflatten(&self, coords: &[Elem]) -> Elem {
        assert_eq!(coords.len(), self.total_degree());
        match self.0.as_ref() {
            Kind::Ext { parent, .. } => {
                let pd = parent.total_degree();
                let mut v: Vec<Elem> = coords.chunks(pd).map(|ch| parent.unflatten(ch)).collect();
                trim(&mut v);
                Elem::Ext(v)
            }
            _ => coords[0].clone(),
        }
    }

    /// Variable name of the top level, `x1`, `x2`, ...
    pub fn var_name(&self) -> String {
        format!("x{}", self.depth())
    }

    pub fn format(&self, a: &Elem) -> String {
        match (self.0.as_ref(), a) {
            (Kind::Rationals, Elem::Rat(x)) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            (Kind::Prime(_), Elem::Mod(x)) => x.to_string(),
            (Kind::Ext { parent, .. }, Elem::Ext(cs)) => Poly::from_coeffs(cs.clone()).display(parent, &self.var_name()),
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// Parses a base-field scalar `n` or `n/d` and embeds it.
    pub fn parse_scalar(&self, s: &str) -> Result<Elem> {
        let r = parse_rational(s)?;
        let base = self.base();
        let c = base.from_rational(&r)?;
        Ok(self.from_base(c))
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim().parse::<BigInt>().map_err(|_| Error::Invalid(format!("cannot parse scalar {s:?}")))
    };
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return invalid(format!("zero denominator in {s:?}"));
            }
            BigRational::new(parse_int(n)?, d)
        }
        None => BigRational::from_integer(parse_int(s)?),
    };
    Ok(r)
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_ref() {
            Kind::Rationals => write!(f, "Q"),
            Kind::Prime(p) => write!(f, "F_{p}"),
            Kind::Ext { parent, relation } => {
                write!(f, "{parent}[{v}]/({})", relation.display(parent, &self.var_name()), v = self.var_name())
            }
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

/// The two quotients of a tower obtained from a zero-divisor witness, with
/// reduction maps from the original tower into each.
#[derive(Clone, Debug)]
pub struct TowerSplit {
    source: Field,
    level: usize,
    /// For each branch, the new fields at levels `level..=depth`.
    chains: [Vec<Field>; 2],
}

impl TowerSplit {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn branch(&self, b: usize) -> &Field {
        self.chains[b].last().expect("nonempty chain")
    }

    /// The relation that replaced the split one in branch `b`.
    pub fn branch_relation(&self, b: usize) -> &Poly {
        self.chains[b][0].relation().expect("ext level")
    }

    /// Reduces an element of the source tower into branch `b`.
    pub fn reduce(&self, b: usize, a: &Elem) -> Elem {
        self.reduce_at(b, self.source.depth(), a)
    }

    /// Reduces an element of source level `j` into the matching level of branch `b`.
    pub fn reduce_at(&self, b: usize, j: usize, a: &Elem) -> Elem {
        if j < self.level {
            return a.clone();
        }
        let target = &self.chains[b][j - self.level];
        let Elem::Ext(cs) = a else { panic!("element does not belong to the split tower") };
        let mapped: Vec<Elem> = if j == self.level {
            cs.clone()
        } else {
            cs.iter().map(|c| self.reduce_at(b, j - 1, c)).collect()
        };
        target.from_coeffs(mapped)
    }

    pub fn reduce_poly(&self, b: usize, p: &Poly) -> Poly {
        Poly::from_coeffs(p.coeffs().iter().map(|c| self.reduce(b, c)).collect())
    }
}

/// Splits `field` along the factorisation carried by `w`.
pub fn split_tower(field: &Field, w: &ZeroDivisor) -> Result<TowerSplit> {
    let depth = field.depth();
    if w.level == 0 || w.level > depth {
        return invalid(format!("witness level {} outside tower of depth {depth}", w.level));
    }
    let lvl = field.level(w.level);
    let parent = lvl.parent().expect("ext level");
    let rel = lvl.relation().expect("ext level");
    let d = &w.factor;
    let dd = d.degree().unwrap_or(0);
    if !d.is_monic(parent) || dd == 0 || dd >= rel.degree().expect("relation") {
        return invalid("witness factor is not a proper monic factor of the relation");
    }
    let (cof, r) = rel.divrem_monic(d, parent);
    if !r.is_zero() {
        return invalid("witness factor does not divide the relation");
    }
    lvl.validate(&w.element)?;
    let Elem::Ext(ecs) = &w.element else { unreachable!() };
    if !Poly::from_coeffs(ecs.clone()).divrem_monic(d, parent).1.is_zero() {
        return invalid("witness factor does not divide the witness element");
    }
    let mut split = TowerSplit {
        source: field.clone(),
        level: w.level,
        chains: [vec![parent.ext_unchecked(d.clone())], vec![parent.ext_unchecked(cof)]],
    };
    for b in 0..2 {
        for j in w.level + 1..=depth {
            let old_rel = field.level(j).relation().expect("ext level");
            let mapped = Poly::from_coeffs(old_rel.coeffs().iter().map(|c| split.reduce_at(b, j - 1, c)).collect());
            let prev = split.chains[b].last().expect("nonempty").clone();
            split.chains[b].push(prev.ext_unchecked(mapped));
        }
    }
    Ok(split)
}

/// Removes degree-one levels from a tower. Elements of such a level are
/// already constants of the level below, so the map is a relabelling.
#[derive(Clone, Debug)]
pub struct Collapse {
    source: Field,
    /// `fields[j]` is the image of source level `j`.
    fields: Vec<Field>,
}

impl Collapse {
    pub fn new(source: &Field) -> Collapse {
        let mut c = Collapse { source: source.clone(), fields: vec![source.base().clone()] };
        for j in 1..=source.depth() {
            let lvl = source.level(j);
            let rel = lvl.relation().expect("ext level");
            let prev = c.fields[j - 1].clone();
            let next = if rel.degree() == Some(1) {
                prev
            } else {
                let mapped = Poly::from_coeffs(rel.coeffs().iter().map(|x| c.map_at(j - 1, x)).collect());
                prev.ext_unchecked(mapped)
            };
            c.fields.push(next);
        }
        c
    }

    pub fn target(&self) -> &Field {
        self.fields.last().expect("nonempty")
    }

    pub fn map(&self, a: &Elem) -> Elem {
        self.map_at(self.source.depth(), a)
    }

    fn map_at(&self, j: usize, a: &Elem) -> Elem {
        if j == 0 {
            return a.clone();
        }
        let lvl = self.source.level(j);
        let Elem::Ext(cs) = a else { panic!("element does not belong to the tower") };
        if lvl.ext_degree() == 1 {
            match cs.first() {
                Some(c) => self.map_at(j - 1, c),
                None => self.fields[j].zero(),
            }
        } else {
            Elem::Ext(cs.iter().map(|c| self.map_at(j - 1, c)).collect())
        }
    }
}

/// A scalar bundled with its field, with checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElem {
    field: Field,
    value: Elem,
}

impl FieldElem {
    pub fn new(field: &Field, value: Elem) -> Result<FieldElem> {
        field.validate(&value)?;
        Ok(FieldElem { field: field.clone(), value })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Elem {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn same(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(FieldElem { field: self.field.clone(), value: self.field.add(&self.value, &other.value) })
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(FieldElem { field: self.field.clone(), value: self.field.sub(&self.value, &other.value) })
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(FieldElem { field: self.field.clone(), value: self.field.mul(&self.value, &other.value) })
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem { field: self.field.clone(), value: self.field.neg(&self.value) }
    }

    pub fn invert_or_witness(&self) -> Inversion {
        self.field.invert_or_witness(&self.value)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(&self.value))
    }
}
