//! Matrix-algebra decompositions `A ≅ M_q(B)`: finding idempotents and zero
//! divisors, refining them into systems of matrix units, turning those into
//! explicit isomorphisms, conjugating two systems into each other, and
//! peeling a matrix subalgebra off a central simple algebra.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgElem, Algebra, IdempotentKind, LinMap, SimplicityWitness, Subalgebra};
use crate::error::{contract, Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{self, Matrix};
use crate::poly::{poly_gcd, Poly};

/// A family `e_ij` (row-major, `q × q`) of matrix units inside an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixDecomposition {
    q: usize,
    units: Vec<AlgElem>,
}

impl MatrixDecomposition {
    pub fn new(q: usize, units: Vec<AlgElem>) -> Result<MatrixDecomposition> {
        if q == 0 || units.len() != q * q {
            return Err(Error::DimensionMismatch { expected: q * q, found: units.len() });
        }
        Ok(MatrixDecomposition { q, units })
    }

    pub fn trivial(a: &Algebra) -> MatrixDecomposition {
        MatrixDecomposition { q: 1, units: vec![a.one()] }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn unit(&self, i: usize, j: usize) -> &AlgElem {
        &self.units[i * self.q + j]
    }

    pub fn units(&self) -> &[AlgElem] {
        &self.units
    }

    pub fn map(&self, f: impl Fn(&AlgElem) -> AlgElem) -> MatrixDecomposition {
        MatrixDecomposition { q: self.q, units: self.units.iter().map(f).collect() }
    }

    /// Exhaustive check of the matrix-unit axioms.
    pub fn verify(&self, a: &Algebra) -> Result<()> {
        let q = self.q;
        for u in &self.units {
            if u.len() != a.dim() {
                return Err(Error::DimensionMismatch { expected: a.dim(), found: u.len() });
            }
            if u.is_zero() {
                return contract("a matrix unit is zero");
            }
        }
        let zero = a.zero();
        for i in 0..q {
            for j in 0..q {
                for k in 0..q {
                    for l in 0..q {
                        let p = a.mul(self.unit(i, j), self.unit(k, l));
                        let expected = if j == k { self.unit(i, l) } else { &zero };
                        if p != *expected {
                            return contract(format!("matrix-unit relation fails for e{}{} e{}{}", i + 1, j + 1, k + 1, l + 1));
                        }
                    }
                }
            }
        }
        let sum = (0..q).fold(a.zero(), |acc, i| a.add(&acc, self.unit(i, i)));
        if sum != a.one() {
            return contract("diagonal matrix units do not sum to one");
        }
        Ok(())
    }
}

/// How much is known about the corner `e11 A e11` of a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CornerStatus {
    /// The corner is one-dimensional.
    Trivial,
    /// Every nonzero corner element was checked invertible (finite field).
    DivisionCertified,
    /// No zero divisor was found by the probes in the log.
    DivisionRelativeToProbes,
    /// The corner has not been probed.
    NotExamined,
}

#[derive(Clone, Debug)]
pub struct ProbeStrategy {
    pub defect_route: bool,
    pub pairwise_sums: bool,
    /// Enumerate every element over `F_p` when `p^dim` is at most this.
    pub exhaustive_limit: u64,
    pub random_budget: usize,
    /// Random coordinates over ℚ are drawn from `[-random_range, random_range]`.
    pub random_range: i64,
    pub seed: u64,
}

impl Default for ProbeStrategy {
    fn default() -> Self {
        ProbeStrategy {
            defect_route: true,
            pairwise_sums: true,
            exhaustive_limit: 100_000,
            random_budget: 64,
            random_range: 3,
            seed: 0,
        }
    }
}

impl ProbeStrategy {
    /// Basis elements and pairwise sums only.
    pub fn cheap() -> Self {
        ProbeStrategy { defect_route: false, exhaustive_limit: 0, random_budget: 0, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeSource {
    Defect,
    Basis,
    PairSum,
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeVerdict {
    Scalar,
    NoZeroDivisor,
    ZeroDivisor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeRecord {
    pub source: ProbeSource,
    pub element: AlgElem,
    pub verdict: ProbeVerdict,
    /// The zero divisor derived from the element, if any.
    pub derived: Option<AlgElem>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProbeLog {
    pub records: Vec<ProbeRecord>,
    /// Number of elements tested by exhaustive enumeration.
    pub exhaustive_checked: u64,
    pub exhaustive_complete: bool,
}

impl ProbeLog {
    pub fn extend(&mut self, other: ProbeLog) {
        self.records.extend(other.records);
        self.exhaustive_checked += other.exhaustive_checked;
        self.exhaustive_complete |= other.exhaustive_complete;
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionResult {
    pub decomposition: MatrixDecomposition,
    /// `e11 A e11` on its computed basis, with the inclusion into `A`.
    pub corner: Subalgebra,
    /// `M_q(F) ⊗ corner`, basis index `p * dim(corner) + t` with `p` as in
    /// [`Algebra::matrix_algebra`].
    pub target: Algebra,
    /// Verified isomorphism `A → target`.
    pub iso: LinMap,
    pub probes: ProbeLog,
    pub status: CornerStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NontrivialIdempotent {
    Idempotent(AlgElem),
    AlreadyInvertible,
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Roots in the base field: all residues over small `F_p`, rational-root
/// candidates over ℚ when the extreme coefficients are small. `None` means
/// the search was not attempted.
pub(crate) fn find_root(k: &Field, g: &Poly) -> Option<Elem> {
    if k.depth() > 0 || g.degree().unwrap_or(0) == 0 {
        return None;
    }
    if let Some(p) = k.prime_modulus() {
        if p > 1 << 16 {
            return None;
        }
        return (0..p as i64).map(|r| k.from_i64(r)).find(|r| g.eval(r, k).is_zero());
    }
    let rats: Vec<BigRational> = g
        .coeffs()
        .iter()
        .map(|c| match c {
            Elem::Rat(r) => r.clone(),
            _ => unreachable!("rational field"),
        })
        .collect();
    let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let lead = ints.last()?.abs().to_u64()?;
    let shift = ints.iter().take_while(|c| c.is_zero()).count();
    if shift > 0 {
        return Some(k.zero());
    }
    let constant = ints[0].abs().to_u64()?;
    if constant > 1 << 40 || lead > 1 << 40 {
        return None;
    }
    for num in divisors(constant) {
        for den in divisors(lead) {
            for sign in [1i64, -1] {
                let r = BigRational::new(BigInt::from(num) * sign, BigInt::from(den));
                let e = Elem::Rat(r);
                if g.eval(&e, k).is_zero() {
                    return Some(e);
                }
            }
        }
    }
    None
}

/// Tries to derive a nonzero noninvertible element from `x` using its
/// minimal polynomial `g`: `x` itself when `g(0) = 0`, `s(x)` for a proper
/// factor `s = gcd(g, g')`, or `x − r` for a root `r` of `g`.
pub fn probe_element(a: &Algebra, x: &AlgElem) -> Result<(ProbeVerdict, Option<AlgElem>)> {
    if x.is_zero() {
        return Ok((ProbeVerdict::Scalar, None));
    }
    let k = a.field();
    let g = a.minimal_polynomial(x)?;
    let deg = g.degree().expect("minimal polynomial is nonzero");
    if deg <= 1 {
        return Ok((ProbeVerdict::Scalar, None));
    }
    if g.coeffs()[0].is_zero() {
        return Ok((ProbeVerdict::ZeroDivisor, Some(x.clone())));
    }
    let dg = g.derivative(k);
    if !dg.is_zero() {
        let s = poly_gcd(&g, &dg, k)?;
        let ds = s.degree().unwrap_or(0);
        if ds >= 1 && ds < deg {
            return Ok((ProbeVerdict::ZeroDivisor, Some(a.eval_poly(&s, x))));
        }
    }
    if let Some(r) = find_root(k, &g) {
        return Ok((ProbeVerdict::ZeroDivisor, Some(a.sub(x, &a.scalar(&r)))));
    }
    Ok((ProbeVerdict::NoZeroDivisor, None))
}

/// Searches for a nonzero noninvertible element following `strategy`.
pub fn probe_zero_divisor(a: &Algebra, strategy: &ProbeStrategy) -> Result<(Option<AlgElem>, ProbeLog)> {
    let mut log = ProbeLog::default();
    let m = a.dim();
    let k = a.field().clone();
    if m == 1 {
        return Ok((None, log));
    }
    if strategy.defect_route {
        if let crate::algebra::CentralSimplicity::Defect { coefficients, .. } = a.central_simple_check()? {
            let z = zero_divisor_from_defect(a, &coefficients)?;
            log.records.push(ProbeRecord {
                source: ProbeSource::Defect,
                element: z.clone(),
                verdict: ProbeVerdict::ZeroDivisor,
                derived: Some(z.clone()),
            });
            return Ok((Some(z), log));
        }
    }
    let mut candidates: Vec<(ProbeSource, AlgElem)> = (1..m).map(|i| (ProbeSource::Basis, a.basis(i))).collect();
    if strategy.pairwise_sums {
        for i in 1..m {
            for j in i + 1..m {
                candidates.push((ProbeSource::PairSum, a.add(&a.basis(i), &a.basis(j))));
            }
        }
    }
    for (source, x) in candidates {
        let (verdict, derived) = probe_element(a, &x)?;
        log.records.push(ProbeRecord { source, element: x, verdict, derived: derived.clone() });
        if derived.is_some() {
            return Ok((derived, log));
        }
    }
    if let (Some(p), 0) = (k.prime_modulus(), k.depth()) {
        let total = (p as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
        if total <= strategy.exhaustive_limit as u128 {
            for n in 1..total {
                let mut rest = n;
                let coords = (0..m)
                    .map(|_| {
                        let d = (rest % p as u128) as u64;
                        rest /= p as u128;
                        Elem::Mod(d)
                    })
                    .collect();
                let x = AlgElem::new(coords);
                log.exhaustive_checked += 1;
                if !a.is_invertible(&x)? {
                    log.records.push(ProbeRecord {
                        source: ProbeSource::Exhaustive,
                        element: x.clone(),
                        verdict: ProbeVerdict::ZeroDivisor,
                        derived: Some(x.clone()),
                    });
                    return Ok((Some(x), log));
                }
            }
            log.exhaustive_complete = true;
            return Ok((None, log));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(strategy.seed);
    for _ in 0..strategy.random_budget {
        let coords = (0..m)
            .map(|_| match k.prime_modulus() {
                Some(p) if k.depth() == 0 => Elem::Mod(rng.gen_range(0..p)),
                _ => k.from_i64(rng.gen_range(-strategy.random_range..=strategy.random_range)),
            })
            .collect();
        let x = AlgElem::new(coords);
        let (verdict, derived) = probe_element(a, &x)?;
        log.records.push(ProbeRecord { source: ProbeSource::Random, element: x, verdict, derived: derived.clone() });
        if derived.is_some() {
            return Ok((derived, log));
        }
    }
    Ok((None, log))
}

/// Turns a relation `Σ_j L(a_j) R(ε_j) = 0` into a nonzero noninvertible
/// element by repeatedly normalising one coefficient to 1 and replacing all
/// coefficients by commutators with a suitable basis element.
pub fn zero_divisor_from_defect(a: &Algebra, defect: &[AlgElem]) -> Result<AlgElem> {
    if defect.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: defect.len() });
    }
    let mut coeffs = defect.to_vec();
    for _ in 0..=a.dim() {
        let support: Vec<usize> = (0..coeffs.len()).filter(|&j| !coeffs[j].is_zero()).collect();
        if support.is_empty() {
            return contract("relation became trivial");
        }
        let mut inverse_of_first = None;
        for &j in &support {
            match a.inverse(&coeffs[j])? {
                None => return Ok(coeffs[j].clone()),
                Some(inv) if inverse_of_first.is_none() => inverse_of_first = Some(inv),
                Some(_) => {}
            }
        }
        let inv = inverse_of_first.expect("nonempty support");
        let normalised: Vec<AlgElem> = coeffs.iter().map(|c| a.mul(&inv, c)).collect();
        let mut found = None;
        'search: for &j in &support {
            for t in 1..a.dim() {
                let y = a.basis(t);
                if !a.commutator(&normalised[j], &y).is_zero() {
                    found = Some(y);
                    break 'search;
                }
            }
        }
        let Some(y) = found else {
            return contract("all relation coefficients are central; the algebra is not central");
        };
        coeffs = normalised.iter().map(|c| a.commutator(c, &y)).collect();
    }
    contract("support of the relation did not shrink")
}

/// A nonzero idempotent `e ≠ 1` in `A a`, for `a` nonzero in a simple algebra.
pub fn nontrivial_idempotent(a: &Algebra, x: &AlgElem) -> Result<NontrivialIdempotent> {
    if x.is_zero() {
        return Err(Error::Invalid("nontrivial idempotent requested from zero".into()));
    }
    let cap = a.dim() * a.dim();
    let mut cur = x.clone();
    for iter in 0..cap.max(1) {
        let data = a.idempotent_from_element(&cur)?;
        match data.kind {
            IdempotentKind::Nontrivial => return Ok(NontrivialIdempotent::Idempotent(data.e)),
            IdempotentKind::One if iter == 0 => return Ok(NontrivialIdempotent::AlreadyInvertible),
            IdempotentKind::One => return contract("idempotent descent reached an invertible element"),
            IdempotentKind::Zero => {}
        }
        // Nilpotent: a power of cur squares to zero.
        let mut b = cur;
        loop {
            let sq = a.mul(&b, &b);
            if sq.is_zero() {
                break;
            }
            b = sq;
        }
        let a0 = b;
        let pairs = match a.simplicity_witness(&a0)? {
            SimplicityWitness::Pairs(p) => p,
            SimplicityWitness::NoSolution => return contract("no simplicity witness; the algebra is not simple"),
        };
        // (Σ x_i a0 y_i)² = 1 forces some a0 (y_i x_k) a0 ≠ 0.
        let mut choice = None;
        'find: for (_, yi) in &pairs {
            for (xk, _) in &pairs {
                let v = a.mul(yi, xk);
                let a1 = a.mul3(&a0, &v, &a0);
                if !a1.is_zero() {
                    choice = Some((v, a1));
                    break 'find;
                }
            }
        }
        let Some((v, a1)) = choice else {
            return contract("simplicity witness gives no nonzero a·b·a");
        };
        if a.left_ideal_dim(&a1)? < a.left_ideal_dim(&a0)? {
            cur = a1;
            continue;
        }
        // A a1 = A a0: solve x a1 = a0.
        let Some(sol) = linalg::solve(a.field(), &a.right_mul_matrix(&a1), a0.coords())? else {
            return contract("equal left ideals but a0 is not a left multiple of a1");
        };
        let e = a.mul3(&v, &AlgElem::new(sol), &a0);
        let e2 = a.mul(&e, &e);
        if e2 == e {
            if e.is_zero() || e == a.one() {
                return contract("descent produced a trivial idempotent");
            }
            return Ok(NontrivialIdempotent::Idempotent(e));
        }
        cur = a.sub(&e2, &e);
    }
    contract(format!("idempotent descent exceeded {cap} iterations"))
}

/// Matrix units refined from a nonzero noninvertible element of a central
/// simple algebra.
pub fn matrix_units_from_zero_divisor(a: &Algebra, z: &AlgElem) -> Result<MatrixDecomposition> {
    let e = match nontrivial_idempotent(a, z)? {
        NontrivialIdempotent::Idempotent(e) => e,
        NontrivialIdempotent::AlreadyInvertible => return contract("starting element is invertible"),
    };
    let mut idems = vec![e.clone(), a.sub(&a.one(), &e)];
    'outer: for _ in 0..=a.dim() {
        let n = idems.len();
        let e1 = idems[0].clone();
        let corner = a.corner(&e1)?;
        let mut col = vec![e1.clone()];
        let mut row = vec![e1.clone()];
        for i in 1..n {
            let ei = &idems[i];
            let downs: Vec<AlgElem> =
                (0..a.dim()).map(|t| a.mul3(ei, &a.basis(t), &e1)).filter(|x| !x.is_zero()).collect();
            let ups: Vec<AlgElem> =
                (0..a.dim()).map(|t| a.mul3(&e1, &a.basis(t), ei)).filter(|x| !x.is_zero()).collect();
            let mut pick = None;
            'pair: for d in &downs {
                for u in &ups {
                    let ai = a.mul(u, d);
                    if !ai.is_zero() {
                        pick = Some((d.clone(), u.clone(), ai));
                        break 'pair;
                    }
                }
            }
            let Some((ei1, a1i, ai)) = pick else {
                return contract("e1 A ei A e1 vanishes; the algebra is not simple");
            };
            let ai_c = corner.project(&ai).ok_or_else(|| Error::Contract("product left the corner".into()))?;
            match corner.algebra.inverse(&ai_c)? {
                Some(inv) => {
                    col.push(ei1);
                    row.push(a.mul(&corner.embed(&inv), &a1i));
                }
                None => {
                    let f = match nontrivial_idempotent(&corner.algebra, &ai_c)? {
                        NontrivialIdempotent::Idempotent(f) => corner.embed(&f),
                        NontrivialIdempotent::AlreadyInvertible => return contract("corner element both invertible and not"),
                    };
                    idems[0] = f.clone();
                    idems.push(a.sub(&e1, &f));
                    continue 'outer;
                }
            }
        }
        let mut units = Vec::with_capacity(n * n);
        for ci in &col {
            for rj in &row {
                units.push(a.mul(ci, rj));
            }
        }
        for i in 1..n {
            let eii = &units[i * n + i];
            if *eii != idems[i] {
                let rest = a.sub(&idems[i], eii);
                idems[i] = eii.clone();
                idems.push(rest);
                continue 'outer;
            }
        }
        let d = MatrixDecomposition::new(n, units)?;
        d.verify(a)?;
        return Ok(d);
    }
    contract("refinement of idempotents did not terminate")
}

fn matrix_unit_coords(k: &Field, q: usize, i: usize, j: usize) -> Vec<Elem> {
    let mut v = vec![k.zero(); q * q];
    if i == 0 && j == 0 {
        v[0] = k.one();
        for p in 1..q {
            v[p * q + p] = k.from_i64(-1);
        }
    } else {
        v[i * q + j] = k.one();
    }
    v
}

/// Builds `φ: A → M_q(e11 A e11)`, `φ(a) = Σ E_ij ⊗ e_1i a e_j1`, and verifies it.
pub fn decomposition_to_iso(a: &Algebra, d: &MatrixDecomposition) -> Result<DecompositionResult> {
    d.verify(a)?;
    let k = a.field().clone();
    let q = d.q();
    let corner = a.corner(d.unit(0, 0))?;
    let c = corner.dim();
    if q * q * c != a.dim() {
        return contract(format!("q²·dim(corner) = {} differs from dim(A) = {}", q * q * c, a.dim()));
    }
    let mq = Algebra::matrix_algebra(&k, q);
    let target = mq.tensor_product(&corner.algebra)?.algebra;
    let units_coords: Vec<Vec<Elem>> =
        (0..q * q).map(|p| matrix_unit_coords(&k, q, p / q, p % q)).collect();
    let mut images = Vec::with_capacity(a.dim());
    for t in 0..a.dim() {
        let x = a.basis(t);
        let mut img = vec![k.zero(); q * q * c];
        for i in 0..q {
            for j in 0..q {
                let aij = a.mul3(d.unit(0, i), &x, d.unit(j, 0));
                if aij.is_zero() {
                    continue;
                }
                let cc = corner.project(&aij).ok_or_else(|| Error::Contract("entry left the corner".into()))?;
                for (p, up) in units_coords[i * q + j].iter().enumerate() {
                    if up.is_zero() {
                        continue;
                    }
                    for (s, cs) in cc.coords().iter().enumerate() {
                        if !cs.is_zero() {
                            let idx = p * c + s;
                            img[idx] = k.add(&img[idx], &k.mul(up, cs));
                        }
                    }
                }
            }
        }
        images.push(AlgElem::new(img));
    }
    let mut iso = LinMap::from_images(target.dim(), &images);
    iso.verify_homomorphism(a, &target)?;
    if !iso.is_bijective(&k)? {
        return contract("decomposition map is not bijective");
    }
    let status = if c == 1 { CornerStatus::Trivial } else { CornerStatus::NotExamined };
    Ok(DecompositionResult { decomposition: d.clone(), corner, target, iso, probes: ProbeLog::default(), status })
}

fn leaf_status(corner_dim: usize, log: &ProbeLog) -> CornerStatus {
    if corner_dim == 1 {
        CornerStatus::Trivial
    } else if log.exhaustive_complete {
        CornerStatus::DivisionCertified
    } else {
        CornerStatus::DivisionRelativeToProbes
    }
}

/// One refinement step: from `start` (or a probed zero divisor) to a
/// verified decomposition with `q > 1`, or `q = 1` when no zero divisor is found.
pub fn refine_to_matrix_decomposition(
    a: &Algebra,
    start: Option<&AlgElem>,
    strategy: &ProbeStrategy,
) -> Result<DecompositionResult> {
    let (z, log) = match start {
        Some(z) => (Some(z.clone()), ProbeLog::default()),
        None => probe_zero_divisor(a, strategy)?,
    };
    let Some(z) = z else {
        let mut r = decomposition_to_iso(a, &MatrixDecomposition::trivial(a))?;
        r.status = leaf_status(a.dim(), &log);
        r.probes = log;
        return Ok(r);
    };
    let d = matrix_units_from_zero_divisor(a, &z)?;
    let mut r = decomposition_to_iso(a, &d)?;
    r.probes = log;
    Ok(r)
}

/// Composes outer units `e_ij` with units `f_kl` of the corner into
/// `E_(i,k),(j,l) = e_i1 f_kl e_1j`.
pub fn compose_decompositions(
    a: &Algebra,
    outer: &MatrixDecomposition,
    corner: &Subalgebra,
    inner: &MatrixDecomposition,
) -> Result<MatrixDecomposition> {
    let (q, r) = (outer.q(), inner.q());
    // Row-major over the pairs (i, k).
    let mut units = Vec::with_capacity(q * q * r * r);
    for i in 0..q {
        for kk in 0..r {
            for j in 0..q {
                for l in 0..r {
                    let f = corner.embed(inner.unit(kk, l));
                    units.push(a.mul3(outer.unit(i, 0), &f, outer.unit(0, j)));
                }
            }
        }
    }
    let d = MatrixDecomposition::new(q * r, units)?;
    d.verify(a)?;
    Ok(d)
}

/// Refines on corners until the probes find no further zero divisor.
pub fn full_decompose(a: &Algebra, strategy: &ProbeStrategy) -> Result<DecompositionResult> {
    let r = refine_to_matrix_decomposition(a, None, strategy)?;
    if r.decomposition.q() == 1 {
        return Ok(r);
    }
    let sub = full_decompose(&r.corner.algebra, strategy)?;
    let mut probes = r.probes;
    probes.extend(sub.probes);
    let composed = if sub.decomposition.q() == 1 {
        r.decomposition
    } else {
        compose_decompositions(a, &r.decomposition, &r.corner, &sub.decomposition)?
    };
    let mut out = decomposition_to_iso(a, &composed)?;
    out.status = sub.status;
    out.probes = probes;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conjugation {
    /// `f_ij = g e_ij h` with `g h = h g = 1`.
    Conjugator { g: AlgElem, h: AlgElem },
    /// A corner element on `side` blocked the construction.
    RefinementNeeded { side: Side, element: AlgElem },
}

/// Finds `g` with `f_ij = g e_ij g⁻¹` for two decompositions of equal size.
pub fn conjugate_decompositions(c: &Algebra, e: &MatrixDecomposition, f: &MatrixDecomposition) -> Result<Conjugation> {
    if e.q() != f.q() {
        return Err(Error::DimensionMismatch { expected: e.q(), found: f.q() });
    }
    e.verify(c)?;
    f.verify(c)?;
    let q = e.q();
    let f1 = f.unit(0, 0);
    let corner = c.corner(e.unit(0, 0))?;
    let mut pick = None;
    'find: for p in 0..q {
        for qq in 0..q {
            let d = c.mul3(e.unit(0, p), f1, e.unit(qq, 0));
            if !d.is_zero() {
                pick = Some((p, qq, d));
                break 'find;
            }
        }
    }
    let Some((p, qq, d)) = pick else {
        return contract("f11 is annihilated by every e1p · e_q1");
    };
    let dc = corner.project(&d).ok_or_else(|| Error::Contract("d_pq left the corner".into()))?;
    let Some(dinv) = corner.algebra.inverse(&dc)? else {
        return Ok(Conjugation::RefinementNeeded { side: Side::First, element: d });
    };
    let dinv = corner.embed(&dinv);
    let aa = c.mul3(&dinv, e.unit(0, p), f1);
    let bb = c.mul(f1, e.unit(qq, 0));
    let ba = c.mul(&bb, &aa);
    if ba != *f1 {
        return Ok(Conjugation::RefinementNeeded { side: Side::Second, element: ba });
    }
    let mut h = c.zero();
    let mut g = c.zero();
    for i in 0..q {
        h = c.add(&h, &c.mul3(e.unit(i, 0), &aa, f.unit(0, i)));
        g = c.add(&g, &c.mul3(f.unit(i, 0), &bb, e.unit(0, i)));
    }
    if c.mul(&g, &h) != c.one() || c.mul(&h, &g) != c.one() {
        return contract("constructed conjugator is not invertible");
    }
    for i in 0..q {
        for j in 0..q {
            if c.mul3(&g, e.unit(i, j), &h) != *f.unit(i, j) {
                return contract("conjugation identity fails");
            }
        }
    }
    Ok(Conjugation::Conjugator { g, h })
}

#[derive(Clone, Debug)]
pub struct Peel {
    /// The centralizer `C` of the units, unit first.
    pub centralizer: Subalgebra,
    /// `M_q(F) ⊗ C`.
    pub target: Algebra,
    /// Verified isomorphism `A → M_q(C)`, `a ↦ Σ E_ij ⊗ Σ_k e_ki a e_jk`.
    pub iso: LinMap,
}

/// Splits `A = B ⊗ C` along a system of matrix units generating `B`.
pub fn peel_matrix_subalgebra(a: &Algebra, d: &MatrixDecomposition) -> Result<Peel> {
    d.verify(a)?;
    let k = a.field().clone();
    let q = d.q();
    let cbasis = a.centralizer(d.units())?;
    if q * q * cbasis.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: q * q * cbasis.len() });
    }
    let mut cands = vec![a.one().into_coords()];
    cands.extend(cbasis.iter().map(|x| x.coords().to_vec()));
    let idx = linalg::independent_subset(&k, a.dim(), &cands)?;
    let basis: Vec<AlgElem> = idx.into_iter().map(|i| AlgElem::new(cands[i].clone())).collect();
    let centralizer = a.subalgebra(basis)?;
    let cdim = centralizer.dim();
    // Onto: the products e_ij c_t span A.
    let mut span = Vec::with_capacity(a.dim());
    for u in d.units() {
        for t in centralizer.basis() {
            span.push(a.mul(u, t).into_coords());
        }
    }
    if linalg::rank(&k, &Matrix::from_columns(a.dim(), &span))? != a.dim() {
        return contract("matrix units and their centralizer do not span the algebra");
    }
    let mq = Algebra::matrix_algebra(&k, q);
    let target = mq.tensor_product(&centralizer.algebra)?.algebra;
    let units_coords: Vec<Vec<Elem>> = (0..q * q).map(|p| matrix_unit_coords(&k, q, p / q, p % q)).collect();
    let mut images = Vec::with_capacity(a.dim());
    for t in 0..a.dim() {
        let x = a.basis(t);
        let mut img = vec![k.zero(); q * q * cdim];
        for i in 0..q {
            for j in 0..q {
                let aij = (0..q).fold(a.zero(), |acc, kk| a.add(&acc, &a.mul3(d.unit(kk, i), &x, d.unit(j, kk))));
                if aij.is_zero() {
                    continue;
                }
                let cc = centralizer.project(&aij).ok_or_else(|| Error::Contract("entry outside the centralizer".into()))?;
                for (p, up) in units_coords[i * q + j].iter().enumerate() {
                    if up.is_zero() {
                        continue;
                    }
                    for (s, cs) in cc.coords().iter().enumerate() {
                        if !cs.is_zero() {
                            img[p * cdim + s] = k.add(&img[p * cdim + s], &k.mul(up, cs));
                        }
                    }
                }
            }
        }
        images.push(AlgElem::new(img));
    }
    let mut iso = LinMap::from_images(target.dim(), &images);
    iso.verify_homomorphism(a, &target)?;
    if !iso.is_bijective(&k)? {
        return contract("peeling map is not bijective");
    }
    Ok(Peel { centralizer, target, iso })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2q() -> Algebra {
        Algebra::matrix_algebra(&Field::rationals(), 2)
    }

    #[test]
    fn idempotent_from_matrix_unit() {
        let a = m2q();
        let q = a.field().clone();
        let e11 = a.matrix_to_elem(2, &Matrix::from_ints(&q, &[&[1, 0], &[0, 0]]));
        assert_eq!(nontrivial_idempotent(&a, &e11).unwrap(), NontrivialIdempotent::Idempotent(e11));
    }

    #[test]
    fn idempotent_from_nilpotent() {
        let a = m2q();
        let e12 = a.basis(1);
        let NontrivialIdempotent::Idempotent(e) = nontrivial_idempotent(&a, &e12).unwrap() else { panic!() };
        assert_eq!(a.mul(&e, &e), e);
        assert!(!e.is_zero() && e != a.one());
        // e lies in A·E12
        let ideal = (0..4).map(|i| a.mul(&a.basis(i), &e12).into_coords()).collect::<Vec<_>>();
        let mut cols = ideal.clone();
        cols.push(e.into_coords());
        let k = a.field();
        assert_eq!(
            linalg::rank(k, &Matrix::from_columns(4, &cols)).unwrap(),
            linalg::rank(k, &Matrix::from_columns(4, &ideal)).unwrap()
        );
    }

    #[test]
    fn invertible_reports_so() {
        let a = m2q();
        assert_eq!(nontrivial_idempotent(&a, &a.one()).unwrap(), NontrivialIdempotent::AlreadyInvertible);
    }

    #[test]
    fn defect_of_dual_numbers_is_multiple_of_x() {
        let q = Field::rationals();
        let k = q.adjoin_root(&Poly::from_ints(&q, &[0, 0, 1])).unwrap();
        let a = Algebra::from_field_extension(&k).unwrap();
        let crate::algebra::CentralSimplicity::Defect { coefficients, .. } = a.central_simple_check().unwrap() else {
            panic!()
        };
        let z = zero_divisor_from_defect(&a, &coefficients).unwrap();
        assert!(z.coords()[0].is_zero() && !z.coords()[1].is_zero());
    }

    #[test]
    fn full_decomposition_of_m2() {
        let a = m2q();
        let r = full_decompose(&a, &ProbeStrategy::default()).unwrap();
        assert_eq!(r.decomposition.q(), 2);
        assert_eq!(r.corner.dim(), 1);
        assert_eq!(r.status, CornerStatus::Trivial);
    }

    #[test]
    fn conjugating_identical_decompositions() {
        let a = m2q();
        let d = full_decompose(&a, &ProbeStrategy::default()).unwrap().decomposition;
        let Conjugation::Conjugator { g, h } = conjugate_decompositions(&a, &d, &d).unwrap() else { panic!() };
        assert_eq!(a.mul(&g, &h), a.one());
    }
}
