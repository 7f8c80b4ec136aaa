//! JSON renderings of certificates and reports. Every scalar is a string in
//! exact integer or `p/q` notation; object keys come out sorted, so identical
//! queries give byte-identical files.

use powroot_core::abelian_quotient::AbelianQuotient;
use powroot_core::group_ctx::Layer;
use powroot_core::roots_core::{Obstruction, Probe, RegularityReport};
use powroot_core::{Certificate, DiagClass, FieldScalar, GroupError, Matrix, Polynomial, RootEngine};
use serde_json::{json, Value};

pub const FORMAT: &str = "powroot-certificate/1";

pub fn tool() -> String {
    format!("powroot {}", env!("CARGO_PKG_VERSION"))
}

pub fn scalar(s: &FieldScalar) -> Value {
    Value::String(s.to_string())
}

pub fn vector(v: &[FieldScalar]) -> Value {
    Value::Array(v.iter().map(scalar).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector(m.row(i))).collect())
}

pub fn class(c: &DiagClass) -> Value {
    vector(c.entries())
}

pub fn poly(p: &Polynomial) -> Value {
    vector(p.coeffs())
}

fn layer_frame(index: usize, layer: &Layer) -> Result<Value, GroupError> {
    let field = layer.space().field();
    let mut lifts = Vec::new();
    for r in 0..layer.dim() {
        let mut w = vec![field.zero(); layer.dim()];
        w[r] = field.one();
        lifts.push(matrix(&layer.lift(&w)?));
    }
    let (lo, hi) = layer.range();
    Ok(json!({
        "index": index,
        "description": layer.describe(),
        "depth": layer.depth(),
        "positions": layer.positions().iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>(),
        "basis": layer.space().basis().iter().map(|b| vector(b)).collect::<Vec<_>>(),
        "range": [lo, hi],
        "lifts": lifts,
    }))
}

pub fn layer_frames(engine: &RootEngine) -> Result<Value, GroupError> {
    let frames: Result<Vec<Value>, GroupError> =
        engine.series().layers().iter().enumerate().map(|(j, l)| layer_frame(j, l)).collect();
    Ok(Value::Array(frames?))
}

/// Generator exponents of the representative of `c`, recorded over Q so the
/// verifier can rebuild the representative without the lattice solver.
fn representative_word(engine: &RootEngine, c: &DiagClass) -> Value {
    match engine.quotient() {
        AbelianQuotient::Lattice(l) => match l.solve_word(c) {
            Some(z) => Value::Array(z.iter().map(|x| Value::String(x.to_string())).collect()),
            None => Value::Null,
        },
        AbelianQuotient::Finite(_) => Value::Null,
    }
}

pub struct Query<'a> {
    pub kind: &'a str,
    pub input: &'a str,
    pub element: &'a Matrix,
    pub k: u64,
}

fn header(engine: &RootEngine, q: &Query) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("format".into(), json!(FORMAT));
    m.insert("tool".into(), json!(tool()));
    m.insert("kind".into(), json!(q.kind));
    m.insert("field".into(), json!(engine.group().field().to_string()));
    m.insert(
        "query".into(),
        json!({
            "input": q.input,
            "element": matrix(q.element),
            "k": q.k.to_string(),
            "series": engine.series().strategy().to_string(),
        }),
    );
    m
}

pub fn certificate(engine: &RootEngine, q: &Query, cert: &Certificate) -> Result<Value, GroupError> {
    let mut m = header(engine, q);
    m.insert("class".into(), class(&cert.class));
    m.insert("layers".into(), layer_frames(engine)?);
    m.insert("roots".into(), Value::Array(cert.roots.iter().map(class).collect()));
    m.insert("survivors".into(), Value::Array(cert.survivors.iter().map(class).collect()));
    m.insert("decision".into(), json!(cert.decision));
    m.insert(
        "witness".into(),
        match &cert.witness {
            None => Value::Null,
            Some(w) => json!({
                "class": class(&w.b),
                "representative": matrix(&w.representative),
                "representative_word": representative_word(engine, &w.b),
                "root": matrix(&w.root),
                "root_power": matrix(&w.root_power),
            }),
        },
    );
    m.insert(
        "obstruction".into(),
        match &cert.obstruction {
            None => Value::Null,
            Some(Obstruction::EmptyRootSet) => json!({"kind": "empty-root-set"}),
            Some(Obstruction::Layers(items)) => json!({
                "kind": "layers",
                "items": items.iter().map(|o| json!({
                    "class": class(&o.b),
                    "representative": matrix(&o.representative),
                    "representative_word": representative_word(engine, &o.b),
                    "layer": o.layer,
                    "vector": vector(&o.vector),
                    "vector_lift": matrix(&o.vector_lift),
                })).collect::<Vec<_>>(),
            }),
        },
    );
    m.insert("transcript".into(), json!(cert.transcript));
    Ok(Value::Object(m))
}

pub fn regularity(engine: &RootEngine, q: &Query, report: &RegularityReport) -> Result<Value, GroupError> {
    let mut m = header(engine, q);
    let actions = engine.actions(q.element).map_err(|e| GroupError::Unsupported(e.to_string()))?;
    m.insert("layers".into(), layer_frames(engine)?);
    m.insert(
        "regularity".into(),
        Value::Array(
            report
                .layers
                .iter()
                .zip(&actions)
                .map(|(l, a)| {
                    json!({
                        "layer": l.layer,
                        "action": matrix(a),
                        "char_poly": poly(&l.char_poly),
                        "gcd": poly(&l.gcd),
                    })
                })
                .collect(),
        ),
    );
    m.insert("regular".into(), json!(report.regular));
    Ok(Value::Object(m))
}

pub fn probe(engine: &RootEngine, input: &str, element: &Matrix, results: &[(u64, Probe)]) -> Value {
    let q = Query { kind: "element-probe", input, element, k: results.first().map_or(0, |r| r.0) };
    let mut m = header(engine, &q);
    if let Some(Value::Object(query)) = m.get_mut("query") {
        query.remove("k");
        query.insert("ks".into(), Value::Array(results.iter().map(|(k, _)| json!(k.to_string())).collect()));
    }
    m.insert(
        "results".into(),
        Value::Array(
            results
                .iter()
                .map(|(k, p)| match p {
                    Probe::Root(y) => json!({"k": k.to_string(), "result": "root", "root": matrix(y)}),
                    Probe::NoRoot => json!({"k": k.to_string(), "result": "no-root"}),
                    Probe::Unsupported(why) => json!({"k": k.to_string(), "result": "undecided", "reason": why}),
                })
                .collect(),
        ),
    );
    Value::Object(m)
}

pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
