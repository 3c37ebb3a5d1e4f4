//! Self-contained certificates: each carries the data it speaks about and a
//! `kind` tag, and [`verify`] re-checks it from scratch.

use serde_json::{json, Value};

use crate::algebra::{AlgElem, Algebra, CentralSimplicity, InnerAutomorphism, LinMap};
use crate::becher::{Corestriction, PairRoute, QuaternionPair};
use crate::error::{contract, invalid, Error, Result};
use crate::field::Field;
use crate::involution::{classify_first_kind, plus_minus_split, Involution, InvolutionKind};
use crate::quaternion::{make_quaternion, quaternion_map, ConicPoint, QuaternionParams};
use crate::serial::*;
use crate::splitting::{reduced_char_poly, ReducedCharData, SplittingCertificate};
use crate::wedderburn::{
    decomposition_to_iso, CornerStatus, DecompositionResult, ProbeLog, ProbeSource, ProbeVerdict,
};

pub fn params_to_json(p: &QuaternionParams) -> Value {
    let k = p.field();
    json!({ "field": field_to_json(k), "a": elem_to_json(k, p.a()), "b": elem_to_json(k, p.b()) })
}

pub fn params_from_json(v: &Value) -> Result<QuaternionParams> {
    let k = field_from_json(field(v, "field")?)?;
    let a = elem_from_json(&k, field(v, "a")?)?;
    let b = elem_from_json(&k, field(v, "b")?)?;
    QuaternionParams::new(&k, a, b)
}

fn elems_to_json(k: &Field, xs: &[AlgElem]) -> Value {
    Value::Array(xs.iter().map(|x| alg_elem_to_json(k, x)).collect())
}

fn elems_from_json(a: &Algebra, v: &Value) -> Result<Vec<AlgElem>> {
    match v.as_array() {
        Some(xs) => xs.iter().map(|x| alg_elem_from_json(a, x)).collect(),
        None => invalid("expected a list of elements"),
    }
}

pub fn central_simplicity(a: &Algebra, c: &CentralSimplicity) -> Value {
    certificate(
        "central_simplicity",
        json!({ "algebra": algebra_to_json(a), "central_simple": c.is_central_simple(), "rank": c.rank() }),
    )
}

fn status_name(s: CornerStatus) -> &'static str {
    match s {
        CornerStatus::Trivial => "trivial",
        CornerStatus::DivisionCertified => "division_certified",
        CornerStatus::DivisionRelativeToProbes => "division_relative_to_probes",
        CornerStatus::NotExamined => "not_examined",
    }
}

pub fn probe_log_to_json(k: &Field, log: &ProbeLog) -> Value {
    let records: Vec<Value> = log
        .records
        .iter()
        .map(|r| {
            let source = match r.source {
                ProbeSource::Defect => "defect",
                ProbeSource::Basis => "basis",
                ProbeSource::PairSum => "pair_sum",
                ProbeSource::Exhaustive => "exhaustive",
                ProbeSource::Random => "random",
            };
            let verdict = match r.verdict {
                ProbeVerdict::Scalar => "scalar",
                ProbeVerdict::NoZeroDivisor => "no_zero_divisor",
                ProbeVerdict::ZeroDivisor => "zero_divisor",
            };
            json!({
                "source": source,
                "element": alg_elem_to_json(k, &r.element),
                "verdict": verdict,
                "derived": r.derived.as_ref().map(|d| alg_elem_to_json(k, d)),
            })
        })
        .collect();
    json!({
        "records": records,
        "exhaustive_checked": log.exhaustive_checked,
        "exhaustive_complete": log.exhaustive_complete,
    })
}

pub fn decomposition(a: &Algebra, r: &DecompositionResult) -> Value {
    let k = a.field();
    certificate(
        "decomposition",
        json!({
            "algebra": algebra_to_json(a),
            "decomposition": decomposition_to_json(k, &r.decomposition),
            "corner": algebra_to_json(&r.corner.algebra),
            "corner_status": status_name(r.status),
            "probes": probe_log_to_json(k, &r.probes),
        }),
    )
}

pub fn splitting(a: &Algebra, c: &SplittingCertificate) -> Value {
    let mut body = splitting_to_json(c);
    body["algebra"] = algebra_to_json(a);
    certificate("splitting", body)
}

pub fn reduced_char(a: &Algebra, d: &ReducedCharData) -> Value {
    let k = a.field();
    certificate(
        "reduced_char",
        json!({
            "algebra": algebra_to_json(a),
            "element": alg_elem_to_json(k, &d.element),
            "poly": poly_to_json(k, &d.poly),
            "trd": elem_to_json(k, &d.trd),
            "nrd": elem_to_json(k, &d.nrd),
        }),
    )
}

pub fn skolem_noether(a: &Algebra, sigma: &LinMap, w: &InnerAutomorphism) -> Value {
    let k = a.field();
    certificate(
        "skolem_noether",
        json!({
            "algebra": algebra_to_json(a),
            "sigma": matrix_to_json(k, sigma.matrix()),
            "conjugator": alg_elem_to_json(k, &w.conjugator),
            "inverse": alg_elem_to_json(k, &w.inverse),
        }),
    )
}

pub fn quaternion(p: &QuaternionParams, a: &Algebra) -> Value {
    certificate("quaternion", json!({ "params": params_to_json(p), "algebra": algebra_to_json(a) }))
}

pub fn quaternion_split(p: &QuaternionParams, pt: &ConicPoint, d: &crate::wedderburn::MatrixDecomposition) -> Value {
    let k = p.field();
    certificate(
        "quaternion_split",
        json!({
            "params": params_to_json(p),
            "point": [elem_to_json(k, &pt.x), elem_to_json(k, &pt.y), elem_to_json(k, &pt.z)],
            "decomposition": decomposition_to_json(k, d),
        }),
    )
}

pub fn quaternion_recognition(a: &Algebra, p: &QuaternionParams, basis: &[AlgElem]) -> Value {
    certificate(
        "quaternion_recognition",
        json!({ "algebra": algebra_to_json(a), "params": params_to_json(p), "basis": elems_to_json(a.field(), basis) }),
    )
}

fn kind_name(k: InvolutionKind) -> &'static str {
    match k {
        InvolutionKind::Orthogonal => "orthogonal",
        InvolutionKind::Symplectic => "symplectic",
    }
}

pub fn involution(j: &Involution, kind: InvolutionKind, plus_dim: usize) -> Value {
    let a = j.algebra();
    certificate(
        "involution",
        json!({
            "algebra": algebra_to_json(a),
            "map": matrix_to_json(a.field(), j.map().matrix()),
            "type": kind_name(kind),
            "plus_dim": plus_dim,
        }),
    )
}

pub fn corestriction(cr: &Corestriction, pair: Option<&QuaternionPair>) -> Value {
    let f = cr.qe.base();
    let t = &cr.t.algebra;
    let mut body = json!({
        "field": field_to_json(f),
        "g": elem_to_json(f, cr.qe.g()),
        "coeffs": cr.coeffs.iter().map(|c| elem_to_json(f, c)).collect::<Vec<_>>(),
        "algebra": algebra_to_json(t),
        "x": alg_elem_to_json(f, &cr.x),
        "y": alg_elem_to_json(f, &cr.y),
        "x_squared": t.as_scalar(&t.mul(&cr.x, &cr.x)).map(|s| elem_to_json(f, &s)),
        "y_squared": t.as_scalar(&t.mul(&cr.y, &cr.y)).map(|s| elem_to_json(f, &s)),
    });
    if let Some(p) = pair {
        body["pair"] = json!({
            "route": match &p.route {
                PairRoute::Generators => json!("generators"),
                PairRoute::ZeroDivisor(z) => json!({ "zero_divisor": alg_elem_to_json(f, z) }),
            },
            "q1": params_to_json(&p.q1),
            "q2": params_to_json(&p.q2),
            "q1_basis": elems_to_json(f, &p.q1_basis),
            "q2_basis": elems_to_json(f, &p.q2_basis),
        });
    }
    certificate("corestriction", body)
}

/// Re-checks a certificate and returns a one-line summary.
pub fn verify(v: &Value) -> Result<String> {
    let kind = kind_of(v)?;
    match kind.as_str() {
        "central_simplicity" => {
            let a = algebra_from_json(field(v, "algebra")?)?;
            let c = a.central_simple_check()?;
            let claimed = field(v, "central_simple")?.as_bool();
            let rank = field(v, "rank")?.as_u64();
            if claimed != Some(c.is_central_simple()) || rank != Some(c.rank() as u64) {
                return contract("central simplicity claim does not match the recomputed rank");
            }
            Ok(format!("central simplicity: rank {} of {} confirmed", c.rank(), a.dim() * a.dim()))
        }
        "decomposition" => {
            let a = algebra_from_json(field(v, "algebra")?)?;
            let d = decomposition_from_json(&a, field(v, "decomposition")?)?;
            let r = decomposition_to_iso(&a, &d)?;
            let corner = algebra_from_json(field(v, "corner")?)?;
            if corner.dim() != r.corner.dim() {
                return contract("corner dimension does not match");
            }
            Ok(format!("decomposition: q = {}, corner dimension {} confirmed", d.q(), corner.dim()))
        }
        "splitting" => {
            let a = algebra_from_json(field(v, "algebra")?)?;
            let c = splitting_from_json(&a, v)?;
            c.verify(&a)?;
            Ok(format!("splitting: q = {} over {} confirmed", c.q, c.tower))
        }
        "reduced_char" => {
            let a = algebra_from_json(field(v, "algebra")?)?;
            let k = a.field();
            let x = alg_elem_from_json(&a, field(v, "element")?)?;
            let d = reduced_char_poly(&a, &x)?;
            if d.poly != poly_from_json(k, field(v, "poly")?)?
                || d.trd != elem_from_json(k, field(v, "trd")?)?
                || d.nrd != elem_from_json(k, field(v, "nrd")?)?
            {
                return contract("reduced characteristic data does not match");
            }
            Ok(format!("reduced characteristic polynomial {} confirmed", d.poly.display(k, "X")))
        }
        "skolem_noether" => {
            let a = algebra_from_json(field(v, "algebra")?)?;
            let k = a.field();
            let sigma = linmap_from_json(k, field(v, "sigma")?)?;
            let w = alg_elem_from_json(&a, field(v, "conjugator")?)?;
            let w_inv = alg_elem_from_json(&a, field(v, "inverse")?)?;
            if a.mul(&w, &w_inv) != a.one() || a.mul(&w_inv, &w) != a.one() {
                return contract("conjugator and inverse do not multiply to one");
            }
            for i in 0..a.dim() {
                let e = a.basis(i);
                if a.mul(&sigma.apply(k, &e), &w) != a.mul(&w, &e) {
                    return contract(format!("σ(ε_{i}) w ≠ w ε_{i}"));
                }
            }
            Ok("inner automorphism confirmed".into())
        }
        "quaternion" => {
            let p = params_from_json(field(v, "params")?)?;
            let a = algebra_from_json(field(v, "algebra")?)?;
            if make_quaternion(&p)? != a {
                return contract("structure constants do not match the parameters");
            }
            Ok("quaternion algebra confirmed".into())
        }
        "quaternion_split" => {
            let p = params_from_json(field(v, "params")?)?;
            let a = make_quaternion(&p)?;
            let d = decomposition_from_json(&a, field(v, "decomposition")?)?;
            d.verify(&a)?;
            if d.q() != 2 {
                return contract("quaternion splitting needs q = 2");
            }
            Ok("2×2 matrix units confirmed".into())
        }
        "quaternion_recognition" => {
            let a = algebra_from_json(field(v, "algebra")?)?;
            let p = params_from_json(field(v, "params")?)?;
            let basis = elems_from_json(&a, field(v, "basis")?)?;
            if basis.len() != 4 || basis[0] != a.one() || a.mul(&basis[1], &basis[2]) != basis[3] {
                return contract("basis is not of the form 1, i, j, ij");
            }
            quaternion_map(&make_quaternion(&p)?, &a, basis[1].clone(), basis[2].clone())?;
            Ok("quaternion isomorphism confirmed".into())
        }
        "involution" => {
            let a = algebra_from_json(field(v, "algebra")?)?;
            let j = Involution::new(&a, linmap_from_json(a.field(), field(v, "map")?)?)?;
            let kind = classify_first_kind(&j)?;
            let plus = plus_minus_split(&j)?.0.len();
            if field(v, "type")?.as_str() != Some(kind_name(kind)) || field(v, "plus_dim")?.as_u64() != Some(plus as u64) {
                return contract("involution type does not match");
            }
            Ok(format!("{} involution confirmed (dim A+ = {plus})", kind_name(kind)))
        }
        "corestriction" => verify_corestriction(v),
        other => Err(Error::Invalid(format!("unknown certificate kind {other:?}"))),
    }
}

fn verify_corestriction(v: &Value) -> Result<String> {
    let t = algebra_from_json(field(v, "algebra")?)?;
    let f = t.field().clone();
    if t.dim() != 16 || !t.central_simple_check()?.is_central_simple() {
        return contract("T is not a 16-dimensional central simple algebra");
    }
    let x = alg_elem_from_json(&t, field(v, "x")?)?;
    let y = alg_elem_from_json(&t, field(v, "y")?)?;
    if t.as_scalar(&t.mul(&x, &x)).is_none() || t.as_scalar(&t.mul(&y, &y)).is_none() {
        return contract("x² or y² is not a scalar");
    }
    if t.add(&t.mul(&x, &y), &t.mul(&y, &x)) != t.zero() {
        return contract("x and y do not anticommute");
    }
    let Some(pair) = v.get("pair") else {
        return Ok("corestriction confirmed".into());
    };
    let q1 = params_from_json(field(pair, "q1")?)?;
    let q2 = params_from_json(field(pair, "q2")?)?;
    let b1 = elems_from_json(&t, field(pair, "q1_basis")?)?;
    let b2 = elems_from_json(&t, field(pair, "q2_basis")?)?;
    if b1.len() != 4 || b2.len() != 4 {
        return invalid("quaternion bases need four elements");
    }
    let h1 = make_quaternion(&q1)?;
    let h2 = make_quaternion(&q2)?;
    let tp = h1.tensor_product(&h2)?;
    let images: Vec<AlgElem> = (0..16).map(|idx| t.mul(&b1[idx / 4], &b2[idx % 4])).collect();
    let mut iso = LinMap::from_images(16, &images);
    iso.verify_homomorphism(&tp.algebra, &t)?;
    if !iso.is_bijective(&f)? {
        return contract("product map is not bijective");
    }
    Ok(format!(
        "corestriction ≅ h({}, {}) ⊗ h({}, {}) confirmed",
        f.format(q1.a()),
        f.format(q1.b()),
        f.format(q2.a()),
        f.format(q2.b())
    ))
}
