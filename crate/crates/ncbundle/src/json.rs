//! JSON encodings of the core types.
//!
//! Objects are `serde_json::Map`s, whose keys serialize in sorted order, and
//! integers keep arbitrary precision. Floats are rounded to 12 significant
//! digits before they are written, so reports are byte-stable.

use std::str::FromStr;

use ncbundle_core::bundles::{
    BaseHomology, BundleDescriptor, CommutativePart, Lambda2Membership, LoopEvidence, RkkVerdict, RkkWitness,
    TDualReport,
};
use ncbundle_core::exterior::{BasisOrder, IndexSet};
use ncbundle_core::heisenberg::HeisenbergElement;
use ncbundle_core::intmat::IntMatrix;
use ncbundle_core::monodromy::MonodromyMatrix;
use ncbundle_core::nctorus::{Theta, TwistedAlgebraElement};
use ncbundle_core::pairs::{pair_count, pairs, PairIndex};
use ncbundle_core::{BigInt, Complex64};
use serde_json::{json, Map, Number, Value};

use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn float(x: f64) -> Value {
    Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

pub fn int(x: &BigInt) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integers are valid JSON numbers"))
}

pub fn to_bigint(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            BigInt::from_str(&n.to_string()).map_err(|_| schema(format!("{what}: {n} is not an integer")))
        }
        _ => Err(schema(format!("{what}: expected an integer"))),
    }
}

fn to_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| schema(format!("{what}: expected a 64-bit integer")))
}

fn to_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| schema(format!("{what}: expected a nonnegative integer")))
}

fn to_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| schema(format!("{what}: expected a number")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(format!("{what}: expected an array")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| schema(format!("{what}: expected an object")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(format!("{what}: missing field \"{key}\"")))
}

fn only_keys(obj: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(schema(format!("{what}: unexpected field \"{k}\""))),
        None => Ok(()),
    }
}

pub fn int_vector(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn to_int_vector(v: &Value, what: &str) -> Result<Vec<BigInt>> {
    array(v, what)?.iter().map(|x| to_bigint(x, what)).collect()
}

/// `{"rows": r, "cols": c, "data": [[...], ...]}`.
pub fn matrix(m: &IntMatrix) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "data": m.to_rows().iter().map(|r| int_vector(r)).collect::<Vec<_>>(),
    })
}

pub fn to_matrix(v: &Value) -> Result<IntMatrix> {
    let what = "matrix";
    let obj = object(v, what)?;
    only_keys(obj, &["rows", "cols", "data"], what)?;
    let rows = to_usize(field(obj, "rows", what)?, "matrix rows")?;
    let cols = to_usize(field(obj, "cols", what)?, "matrix cols")?;
    let data = array(field(obj, "data", what)?, "matrix data")?;
    if data.len() != rows {
        return Err(schema(format!("matrix: {} data rows, expected {rows}", data.len())));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for row in data {
        let row = to_int_vector(row, "matrix row")?;
        if row.len() != cols {
            return Err(schema(format!("matrix: row of length {}, expected {cols}", row.len())));
        }
        entries.extend(row);
    }
    Ok(IntMatrix::from_vec(rows, cols, entries)?)
}

fn index_set(s: IndexSet) -> Value {
    Value::Array(s.indices().into_iter().map(Value::from).collect())
}

/// Blocks with their basis subsets and the basis order tag.
pub fn monodromy(m: &MonodromyMatrix) -> Value {
    let (even, odd) = m.basis();
    json!({
        "n": m.rank(),
        "basis": m.order().tag(),
        "even_basis": even.into_iter().map(index_set).collect::<Vec<_>>(),
        "odd_basis": odd.into_iter().map(index_set).collect::<Vec<_>>(),
        "even": matrix(m.even()),
        "odd": matrix(m.odd()),
    })
}

pub fn to_monodromy(v: &Value) -> Result<MonodromyMatrix> {
    let what = "monodromy matrix";
    let obj = object(v, what)?;
    only_keys(obj, &["n", "basis", "even_basis", "odd_basis", "even", "odd"], what)?;
    let n = to_usize(field(obj, "n", what)?, "n")?;
    let tag = field(obj, "basis", what)?
        .as_str()
        .ok_or_else(|| schema("basis: expected a string"))?;
    let order = BasisOrder::from_tag(tag).ok_or_else(|| schema(format!("basis: unknown order \"{tag}\"")))?;
    let m = MonodromyMatrix::from_blocks(
        n,
        order,
        to_matrix(field(obj, "even", what)?)?,
        to_matrix(field(obj, "odd", what)?)?,
    )?;
    let (even, odd) = m.basis();
    for (key, expected) in [("even_basis", even), ("odd_basis", odd)] {
        if let Some(listed) = obj.get(key) {
            let want: Vec<Value> = expected.into_iter().map(index_set).collect();
            if array(listed, key)? != &want {
                return Err(schema(format!("{key} does not match the \"{tag}\" order")));
            }
        }
    }
    Ok(m)
}

/// `{"n": 3, "central": [[i, j, c], ...], "vector": [...]}`, listing the
/// nonzero central entries in pair order.
pub fn heisenberg(h: &HeisenbergElement) -> Value {
    let n = h.rank();
    let central: Vec<Value> = pairs(n)
        .into_iter()
        .filter(|p| *h.central_entry(*p) != BigInt::from(0))
        .map(|p| json!([p.i(), p.j(), int(h.central_entry(p))]))
        .collect();
    json!({ "n": n, "central": central, "vector": int_vector(h.vector()) })
}

pub fn to_heisenberg(v: &Value) -> Result<HeisenbergElement> {
    let what = "Heisenberg element";
    let obj = object(v, what)?;
    only_keys(obj, &["n", "central", "vector"], what)?;
    let n = to_usize(field(obj, "n", what)?, "n")?;
    let mut central = vec![BigInt::from(0); pair_count(n)];
    let mut seen = std::collections::BTreeSet::new();
    for entry in array(field(obj, "central", what)?, "central")? {
        let e = array(entry, "central entry")?;
        if e.len() != 3 {
            return Err(schema("central entry: expected [i, j, c]"));
        }
        let p = PairIndex::new(n, to_usize(&e[0], "i")?, to_usize(&e[1], "j")?)?;
        if !seen.insert(p) {
            return Err(schema(format!("central entry {p} listed twice")));
        }
        central[p.position(n)] = to_bigint(&e[2], "central coefficient")?;
    }
    let vector = to_int_vector(field(obj, "vector", what)?, "vector")?;
    Ok(HeisenbergElement::new(n, central, vector)?)
}

fn theta(t: &Theta) -> Value {
    let n = t.rank();
    Value::Array(
        pairs(n)
            .into_iter()
            .zip(t.entries())
            .map(|(p, x)| json!([p.i(), p.j(), float(*x)]))
            .collect(),
    )
}

/// `{"n": 2, "theta": [[1, 2, θ]], "terms": [{"m": [..], "re": .., "im": ..}]}`.
pub fn twisted(f: &TwistedAlgebraElement) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .map(|(m, c)| json!({ "m": m, "re": float(c.re), "im": float(c.im) }))
        .collect();
    json!({ "n": f.rank(), "theta": theta(f.theta()), "terms": terms })
}

pub fn to_twisted(v: &Value) -> Result<TwistedAlgebraElement> {
    let what = "twisted algebra element";
    let obj = object(v, what)?;
    only_keys(obj, &["n", "theta", "terms"], what)?;
    let n = to_usize(field(obj, "n", what)?, "n")?;
    let mut entries = vec![0.0; pair_count(n)];
    for e in array(field(obj, "theta", what)?, "theta")? {
        let e = array(e, "theta entry")?;
        if e.len() != 3 {
            return Err(schema("theta entry: expected [i, j, value]"));
        }
        let p = PairIndex::new(n, to_usize(&e[0], "i")?, to_usize(&e[1], "j")?)?;
        entries[p.position(n)] = to_f64(&e[2], "theta value")?;
    }
    let th = Theta::new(n, entries)?;
    let mut f = TwistedAlgebraElement::zero(&th);
    for t in array(field(obj, "terms", what)?, "terms")? {
        let t = object(t, "term")?;
        let m: Vec<i64> = array(field(t, "m", "term")?, "term index")?
            .iter()
            .map(|x| to_i64(x, "term index"))
            .collect::<Result<_>>()?;
        let c = Complex64::new(
            to_f64(field(t, "re", "term")?, "re")?,
            to_f64(field(t, "im", "term")?, "im")?,
        );
        f.add_term(&m, c)?;
    }
    Ok(f)
}

/// Tags that are not objects are wrapped as `{"value": tag}` when twists
/// have to be recorded next to them.
const WRAPPED_TAG: &str = "value";

fn commutative_part(c: &CommutativePart) -> Result<Value> {
    let tag: Value = serde_json::from_str(&c.tag)?;
    if c.twists.is_empty() {
        return Ok(tag);
    }
    let twists = Value::Array(c.twists.iter().map(matrix).collect());
    Ok(match tag {
        Value::Object(mut obj) => {
            obj.insert("twists".into(), twists);
            Value::Object(obj)
        }
        other => json!({ WRAPPED_TAG: other, "twists": twists }),
    })
}

fn to_commutative_part(v: &Value) -> Result<CommutativePart> {
    let Value::Object(obj) = v else {
        return Ok(CommutativePart::new(serde_json::to_string(v)?));
    };
    let mut obj = obj.clone();
    let Some(twists) = obj.remove("twists") else {
        return Ok(CommutativePart::new(serde_json::to_string(v)?));
    };
    let twists = array(&twists, "twists")?
        .iter()
        .map(to_matrix)
        .collect::<Result<Vec<_>>>()?;
    let tag = match obj.get(WRAPPED_TAG) {
        Some(inner) if obj.len() == 1 && !inner.is_object() => inner.clone(),
        _ => Value::Object(obj),
    };
    Ok(CommutativePart {
        tag: serde_json::to_string(&tag)?,
        twists,
    })
}

/// `{"n": 2, "base": {"rank": 1, "labels": [..]}, "winding": {..},
/// "commutative_part": {..}}`.
pub fn descriptor(d: &BundleDescriptor) -> Result<Value> {
    Ok(json!({
        "n": d.rank(),
        "base": { "rank": d.base().rank(), "labels": d.base().labels() },
        "winding": matrix(d.winding()),
        "commutative_part": commutative_part(&d.commutative_part)?,
    }))
}

pub fn to_descriptor(v: &Value) -> Result<BundleDescriptor> {
    let what = "bundle descriptor";
    let obj = object(v, what)?;
    only_keys(obj, &["n", "base", "winding", "commutative_part"], what)?;
    let n = to_usize(field(obj, "n", what)?, "n")?;
    let base = object(field(obj, "base", what)?, "base")?;
    only_keys(base, &["rank", "labels"], "base")?;
    let rank = to_usize(field(base, "rank", "base")?, "base rank")?;
    let labels = match base.get("labels") {
        Some(l) => array(l, "labels")?
            .iter()
            .map(|s| {
                s.as_str()
                    .map(str::to_owned)
                    .ok_or_else(|| schema("labels: expected strings"))
            })
            .collect::<Result<Vec<_>>>()?,
        None => BaseHomology::with_rank(rank).labels().to_vec(),
    };
    if labels.len() != rank {
        return Err(schema(format!("base: {} labels for rank {rank}", labels.len())));
    }
    let winding = to_matrix(field(obj, "winding", what)?)?;
    let cp = match obj.get("commutative_part") {
        Some(c) => to_commutative_part(c)?,
        None => CommutativePart::new("{}"),
    };
    Ok(BundleDescriptor::new(n, BaseHomology::new(labels)?, winding, cp)?)
}

pub fn verdict(v: &RkkVerdict) -> Value {
    let witness = match &v.witness {
        RkkWitness::Transform { a, psi } => json!({
            "kind": "transform",
            "a": matrix(a),
            "psi": psi.as_ref().map_or(Value::Null, matrix),
        }),
        RkkWitness::Refutation(why) => json!({ "kind": "refutation", "invariant": why }),
        RkkWitness::None => Value::Null,
    };
    json!({
        "verdict": v.kind.name(),
        "witness": witness,
        "gl_orbit_equal": v.gl_orbit_equal,
        "caveat": v.caveat,
        "citations": v.citations,
    })
}

pub fn membership(m: &Lambda2Membership) -> Value {
    match m {
        Lambda2Membership::Member { psi } => json!({ "member": true, "psi": matrix(psi) }),
        Lambda2Membership::NotMember => json!({ "member": false }),
        Lambda2Membership::Unsupported => json!({ "member": "unsupported" }),
    }
}

fn loop_evidence(e: &LoopEvidence) -> Value {
    json!({
        "loop": e.label,
        "pair_exponents": int_vector(&e.pair_exponents),
        "acts_trivially": e.acts_trivially,
    })
}

pub fn tdual(r: &TDualReport) -> Value {
    json!({
        "classical_t_dual": r.exists,
        "monodromy": r.evidence.iter().map(loop_evidence).collect::<Vec<_>>(),
    })
}

/// Deterministic pretty printing.
pub fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}
