//! Canonical JSON forms of fields, scalars, algebras, maps and certificates.
//!
//! Scalars are strings: `"num/den"` (denominator omitted when 1) over ℚ,
//! decimal residues over `F_p`, and nested arrays of coefficients in
//! ascending degree over a tower level. Object keys are emitted in sorted
//! order, so output is byte-for-byte reproducible.

use serde_json::{json, Map, Value};

use crate::algebra::{AlgElem, Algebra, LinMap};
use crate::error::{contract, invalid, Error, Result};
use crate::field::{parse_rational, Elem, Field};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::splitting::{SplitEvent, SplittingCertificate};
use crate::wedderburn::MatrixDecomposition;

fn bad(what: &str, v: &Value) -> Error {
    Error::Invalid(format!("expected {what}, found {v}"))
}

/// Parses JSON text, reporting the line and column of syntax errors.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("parse error: {e}")))
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Invalid(format!("missing field {key:?}")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(what, v))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| bad(what, v))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(what, v))
}

pub fn elem_to_json(k: &Field, a: &Elem) -> Value {
    match a {
        Elem::Rat(r) => {
            if r.is_integer() {
                Value::String(r.numer().to_string())
            } else {
                Value::String(format!("{}/{}", r.numer(), r.denom()))
            }
        }
        Elem::Mod(x) => Value::String(x.to_string()),
        Elem::Ext(cs) => {
            let parent = k.parent().expect("ext level");
            let mut out: Vec<Value> = cs.iter().map(|c| elem_to_json(parent, c)).collect();
            out.resize(k.ext_degree(), elem_to_json(parent, &parent.zero()));
            Value::Array(out)
        }
    }
}

pub fn elem_from_json(k: &Field, v: &Value) -> Result<Elem> {
    match k.parent() {
        None => {
            let s = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(bad("a scalar string", v)),
            };
            let r = parse_rational(&s)?;
            k.from_rational(&r)
        }
        Some(parent) => match v {
            Value::Array(items) => {
                if items.len() > k.ext_degree() {
                    return invalid(format!("{} coefficients for a degree-{} level", items.len(), k.ext_degree()));
                }
                let cs = items.iter().map(|c| elem_from_json(parent, c)).collect::<Result<Vec<_>>>()?;
                Ok(k.from_coeffs(cs))
            }
            _ => Ok(k.lift(elem_from_json(parent, v)?)),
        },
    }
}

pub fn poly_to_json(k: &Field, p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| elem_to_json(k, c)).collect())
}

pub fn poly_from_json(k: &Field, v: &Value) -> Result<Poly> {
    let cs = as_array(v, "a coefficient array")?.iter().map(|c| elem_from_json(k, c)).collect::<Result<Vec<_>>>()?;
    Ok(Poly::from_coeffs(cs))
}

pub fn field_to_json(k: &Field) -> Value {
    if k.depth() > 0 {
        let rels: Vec<Value> =
            (1..=k.depth()).map(|j| poly_to_json(k.level(j - 1), k.level(j).relation().expect("ext level"))).collect();
        return json!({ "kind": "tower", "base": field_to_json(k.base()), "relations": rels });
    }
    match k.prime_modulus() {
        Some(p) => json!({ "kind": "prime", "p": p }),
        None => json!({ "kind": "rationals" }),
    }
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    match as_str(field(v, "kind")?, "a field kind")? {
        "rationals" => Ok(Field::rationals()),
        "prime" => Field::prime(field(v, "p")?.as_u64().ok_or_else(|| bad("a prime", v))?),
        "tower" => {
            let mut k = field_from_json(field(v, "base")?)?;
            if k.depth() != 0 {
                return invalid("tower base must be Q or F_p");
            }
            for r in as_array(field(v, "relations")?, "a relation list")? {
                let p = poly_from_json(&k, r)?;
                k = k.adjoin_root(&p)?;
            }
            Ok(k)
        }
        other => invalid(format!("unknown field kind {other:?}")),
    }
}

pub fn alg_elem_to_json(k: &Field, a: &AlgElem) -> Value {
    Value::Array(a.coords().iter().map(|c| elem_to_json(k, c)).collect())
}

pub fn alg_elem_from_json(a: &Algebra, v: &Value) -> Result<AlgElem> {
    let cs = as_array(v, "a coordinate vector")?.iter().map(|c| elem_from_json(a.field(), c)).collect::<Result<Vec<_>>>()?;
    a.element(cs)
}

pub fn algebra_to_json(a: &Algebra) -> Value {
    let k = a.field();
    let table: Vec<Value> = a
        .table()
        .iter()
        .map(|slab| Value::Array(slab.iter().map(|row| Value::Array(row.iter().map(|c| elem_to_json(k, c)).collect())).collect()))
        .collect();
    json!({ "field": field_to_json(k), "dim": a.dim(), "labels": a.labels(), "table": table })
}

/// Reads `{field, dim, labels, table}` with `table[l][i][j]` the coefficient
/// of basis element `l` in `ε_i ε_j`; the first basis element must be the unit.
pub fn algebra_from_json(v: &Value) -> Result<Algebra> {
    let k = field_from_json(field(v, "field")?)?;
    let dim = as_usize(field(v, "dim")?, "a dimension")?;
    let labels: Vec<String> = match v.get("labels") {
        Some(ls) => as_array(ls, "a label list")?.iter().map(|l| as_str(l, "a label").map(str::to_string)).collect::<Result<_>>()?,
        None => (0..dim).map(|i| if i == 0 { "1".to_string() } else { format!("e{}", i + 1) }).collect(),
    };
    if labels.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: labels.len() });
    }
    let mut table = Vec::with_capacity(dim);
    for slab in as_array(field(v, "table")?, "a structure-constant table")? {
        let mut rows = Vec::with_capacity(dim);
        for row in as_array(slab, "a table slab")? {
            rows.push(as_array(row, "a table row")?.iter().map(|c| elem_from_json(&k, c)).collect::<Result<Vec<_>>>()?);
        }
        table.push(rows);
    }
    if table.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: table.len() });
    }
    Algebra::from_table(&k, labels, &table)
}

pub fn matrix_to_json(k: &Field, m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| Value::Array(r.iter().map(|c| elem_to_json(k, c)).collect())).collect())
}

pub fn matrix_from_json(k: &Field, v: &Value) -> Result<Matrix> {
    let rows = as_array(v, "a matrix")?
        .iter()
        .map(|r| as_array(r, "a matrix row")?.iter().map(|c| elem_from_json(k, c)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let width = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || rows.iter().any(|r| r.len() != width) {
        return invalid("matrix rows must be nonempty and of equal length");
    }
    Ok(Matrix::from_rows(rows))
}

/// A linear map as the row-major matrix of its action on coordinates.
pub fn linmap_from_json(k: &Field, v: &Value) -> Result<LinMap> {
    Ok(LinMap::new(matrix_from_json(k, v)?))
}

pub fn decomposition_to_json(k: &Field, d: &MatrixDecomposition) -> Value {
    let q = d.q();
    let units: Vec<Value> =
        (0..q).map(|i| Value::Array((0..q).map(|j| alg_elem_to_json(k, d.unit(i, j))).collect())).collect();
    json!({ "q": q, "units": units })
}

pub fn decomposition_from_json(a: &Algebra, v: &Value) -> Result<MatrixDecomposition> {
    let q = as_usize(field(v, "q")?, "a matrix size")?;
    let rows = as_array(field(v, "units")?, "a unit array")?;
    if rows.len() != q {
        return Err(Error::DimensionMismatch { expected: q, found: rows.len() });
    }
    let mut units = Vec::with_capacity(q * q);
    for row in rows {
        let row = as_array(row, "a unit row")?;
        if row.len() != q {
            return Err(Error::DimensionMismatch { expected: q, found: row.len() });
        }
        for u in row {
            units.push(alg_elem_from_json(a, u)?);
        }
    }
    MatrixDecomposition::new(q, units)
}

fn split_event_to_json(e: &SplitEvent) -> Value {
    let below = e.tower_before.level(e.level - 1);
    json!({
        "level": e.level,
        "tower_before": field_to_json(&e.tower_before),
        "kept": poly_to_json(below, &e.kept),
        "alternative": poly_to_json(below, &e.alternative),
    })
}

fn split_event_from_json(v: &Value) -> Result<SplitEvent> {
    let level = as_usize(field(v, "level")?, "a tower level")?;
    let tower_before = field_from_json(field(v, "tower_before")?)?;
    if level == 0 || level > tower_before.depth() {
        return invalid(format!("split level {level} outside the tower"));
    }
    let below = tower_before.level(level - 1).clone();
    Ok(SplitEvent {
        level,
        kept: poly_from_json(&below, field(v, "kept")?)?,
        alternative: poly_from_json(&below, field(v, "alternative")?)?,
        tower_before,
    })
}

pub fn splitting_to_json(c: &SplittingCertificate) -> Value {
    json!({
        "tower": field_to_json(&c.tower),
        "events": c.history.iter().map(split_event_to_json).collect::<Vec<_>>(),
        "q": c.q,
        "decomposition": decomposition_to_json(&c.tower, &c.decomposition),
    })
}

/// Reads a splitting certificate for `a`; the units live in `a ⊗ tower`.
pub fn splitting_from_json(a: &Algebra, v: &Value) -> Result<SplittingCertificate> {
    let tower = field_from_json(field(v, "tower")?)?;
    let ak = a.extend_scalars(&tower)?;
    let history = as_array(field(v, "events")?, "an event list")?.iter().map(split_event_from_json).collect::<Result<_>>()?;
    Ok(SplittingCertificate {
        q: as_usize(field(v, "q")?, "a matrix size")?,
        decomposition: decomposition_from_json(&ak, field(v, "decomposition")?)?,
        tower,
        history,
    })
}

/// Wraps a payload with its `kind` tag.
pub fn certificate(kind: &str, body: Value) -> Value {
    let mut m = match body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    m.insert("kind".into(), Value::String(kind.into()));
    Value::Object(m)
}

pub fn kind_of(v: &Value) -> Result<String> {
    match v.get("kind").and_then(Value::as_str) {
        Some(s) => Ok(s.to_string()),
        None => contract("certificate has no kind"),
    }
}
