//! Dense univariate polynomials with coefficients in a [`Field`].
//!
//! Coefficients are stored in ascending order of degree and the vector is
//! always trimmed, so the zero polynomial is the empty vector and equality is
//! structural.

use crate::field::{Elem, Field, ZeroDivisor};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

pub(crate) fn trim(v: &mut Vec<Elem>) {
    while v.last().is_some_and(Elem::is_zero) {
        v.pop();
    }
}

pub(crate) fn add_slices(k: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out: Vec<Elem> = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = k.add(o, s);
    }
    trim(&mut out);
    out
}

pub(crate) fn neg_slice(k: &Field, a: &[Elem]) -> Vec<Elem> {
    a.iter().map(|c| k.neg(c)).collect()
}

pub(crate) fn mul_slices(k: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `v` modulo a monic polynomial `m` (coefficients ascending).
pub(crate) fn rem_monic(k: &Field, mut v: Vec<Elem>, m: &[Elem]) -> Vec<Elem> {
    let d = m.len() - 1;
    while v.len() > d {
        let top = v.pop().expect("nonempty");
        if top.is_zero() {
            continue;
        }
        let shift = v.len() - d;
        for (idx, c) in m[..d].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = &mut v[shift + idx];
            *t = k.sub(t, &k.mul(&top, c));
        }
    }
    trim(&mut v);
    v
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> Poly {
        trim(&mut coeffs);
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Elem) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    pub fn one(k: &Field) -> Poly {
        Poly::constant(k.one())
    }

    /// The monic polynomial `X`.
    pub fn x(k: &Field) -> Poly {
        Poly::from_coeffs(vec![k.zero(), k.one()])
    }

    /// `c·X^n`.
    pub fn monomial(k: &Field, c: Elem, n: usize) -> Poly {
        let mut v = vec![k.zero(); n];
        v.push(c);
        Poly::from_coeffs(v)
    }

    /// `X - c`.
    pub fn linear(k: &Field, c: &Elem) -> Poly {
        Poly::from_coeffs(vec![k.neg(c), k.one()])
    }

    /// Builds a polynomial from small integer coefficients in ascending order.
    pub fn from_ints(k: &Field, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| k.from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Elem> {
        self.coeffs.last()
    }

    /// Coefficient of `X^i` (zero beyond the degree).
    pub fn coeff(&self, k: &Field, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| k.zero())
    }

    pub fn is_monic(&self, k: &Field) -> bool {
        self.lead().is_some_and(|c| k.is_one(c))
    }

    pub fn add(&self, other: &Poly, k: &Field) -> Poly {
        Poly { coeffs: add_slices(k, &self.coeffs, &other.coeffs) }
    }

    pub fn neg(&self, k: &Field) -> Poly {
        Poly { coeffs: neg_slice(k, &self.coeffs) }
    }

    pub fn sub(&self, other: &Poly, k: &Field) -> Poly {
        self.add(&other.neg(k), k)
    }

    pub fn mul(&self, other: &Poly, k: &Field) -> Poly {
        Poly { coeffs: mul_slices(k, &self.coeffs, &other.coeffs) }
    }

    pub fn scale(&self, c: &Elem, k: &Field) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|x| k.mul(x, c)).collect())
    }

    pub fn pow(&self, n: usize, k: &Field) -> Poly {
        let mut acc = Poly::one(k);
        for _ in 0..n {
            acc = acc.mul(self, k);
        }
        acc
    }

    /// Multiplies by `X^n`.
    pub fn shift_up(&self, n: usize, k: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![k.zero(); n];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn derivative(&self, k: &Field) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| k.mul(&k.from_i64(i as i64), c))
                .collect(),
        )
    }

    /// Horner evaluation at a field element.
    pub fn eval(&self, x: &Elem, k: &Field) -> Elem {
        let mut acc = k.zero();
        for c in self.coeffs.iter().rev() {
            acc = k.add(&k.mul(&acc, x), c);
        }
        acc
    }

    /// Division with remainder by a monic divisor; never needs an inversion.
    pub fn divrem_monic(&self, d: &Poly, k: &Field) -> (Poly, Poly) {
        assert!(d.is_monic(k), "divisor must be monic");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![k.zero(); r.len() - dd];
        while r.len() > dd {
            let top = r.pop().expect("nonempty");
            let shift = r.len() - dd;
            if !top.is_zero() {
                for (idx, c) in d.coeffs[..dd].iter().enumerate() {
                    if !c.is_zero() {
                        r[shift + idx] = k.sub(&r[shift + idx], &k.mul(&top, c));
                    }
                }
            }
            q[shift] = top;
        }
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    /// Division with remainder; inverting the leading coefficient of `d` may
    /// surface a zero divisor of the coefficient ring.
    pub fn divrem(&self, d: &Poly, k: &Field) -> Result<(Poly, Poly), ZeroDivisor> {
        let lead = d.lead().expect("division by the zero polynomial");
        let inv = k.inverse(lead)?;
        let dm = d.scale(&inv, k);
        let (q, r) = self.divrem_monic(&dm, k);
        Ok((q.scale(&inv, k), r))
    }

    pub fn monic(&self, k: &Field) -> Result<Poly, ZeroDivisor> {
        match self.lead() {
            None => Ok(Poly::zero()),
            Some(c) if k.is_one(c) => Ok(self.clone()),
            Some(c) => Ok(self.scale(&k.inverse(c)?, k)),
        }
    }

    /// Removes factors of `X`: returns `(n, h)` with `self = X^n h` and `h(0) != 0`.
    pub fn split_x_power(&self) -> (usize, Poly) {
        let n = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (n, Poly { coeffs: self.coeffs[n.min(self.coeffs.len())..].to_vec() })
    }

    /// Human-readable form in the variable `var`, highest degree first.
    pub fn display(&self, k: &Field, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let cs = k.format(c);
            let term = if mono.is_empty() {
                cs
            } else if k.is_one(c) {
                mono
            } else if cs.contains(['+', ' ']) || (cs.starts_with('-') && cs[1..].contains('-')) {
                format!("({cs})*{mono}")
            } else if cs == "-1" {
                format!("-{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            terms.push(term);
        }
        let mut out = String::new();
        for (idx, t) in terms.into_iter().enumerate() {
            if idx == 0 {
                out.push_str(&t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&t);
            }
        }
        out
    }
}

/// Monic gcd by the Euclidean algorithm. Every leading coefficient that must
/// be inverted is passed through [`Field::inverse`], so over a tower quotient
/// that is not a field the computation may stop with a witness instead.
pub fn poly_gcd(f: &Poly, g: &Poly, k: &Field) -> Result<Poly, ZeroDivisor> {
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let (_, r) = a.divrem(&b, k)?;
        a = b;
        b = r;
    }
    a.monic(k)
}

/// Extended Euclid: returns `(g, s, t)` with `s·f + t·h = g`, `g` not
/// normalised.
pub(crate) fn ext_gcd(f: &Poly, h: &Poly, k: &Field) -> Result<(Poly, Poly, Poly), ZeroDivisor> {
    let (mut r0, mut r1) = (f.clone(), h.clone());
    let (mut s0, mut s1) = (Poly::one(k), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one(k));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1, k)?;
        let s2 = s0.sub(&q.mul(&s1, k), k);
        let t2 = t0.sub(&q.mul(&t1, k), k);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    Ok((r0, s0, t0))
}
