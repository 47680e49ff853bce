//! JSON and CSV formats shared between the library and the command line.
//!
//! Exact scalars serialize as `p/q` strings; floats serialize as numbers.
//! Parsing accepts both forms on either backend. Operational theories
//! travel as CSV (header row of `k|M` effect labels, one row per
//! preparation) with an optional relations sidecar in JSON.

use serde_json::{json, Map, Value};

use crate::embed::{EmbeddingWitness, FarkasCertificate, OntologicalModel, Verdict};
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Facet};
use crate::gpt::Gpt;
use crate::linalg::{Matrix, Vector};
use crate::quasiprob::QuasiRep;
use crate::quotient::{
    CoarseGraining, Measurement, MixtureRelation, OperationalTheory, Relations,
};
use crate::scalar::Scalar;

pub fn scalar_to_json<T: Scalar>(x: &T) -> Value {
    if T::EXACT {
        Value::String(x.repr())
    } else {
        json!(x.to_f64())
    }
}

pub fn scalar_from_json<T: Scalar>(v: &Value) -> Result<T> {
    match v {
        Value::String(s) => {
            T::parse_number(s).ok_or_else(|| Error::MalformedInput(format!("bad scalar `{s}`")))
        }
        Value::Number(n) => {
            let f = n
                .as_f64()
                .ok_or_else(|| Error::MalformedInput(format!("bad number `{n}`")))?;
            T::from_f64_lossless(f)
                .ok_or_else(|| Error::MalformedInput(format!("non-finite number `{n}`")))
        }
        other => Err(Error::MalformedInput(format!("expected scalar, got `{other}`"))),
    }
}

pub fn vector_to_json<T: Scalar>(v: &Vector<T>) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

pub fn vector_from_json<T: Scalar>(v: &Value) -> Result<Vector<T>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::MalformedInput("expected an array of scalars".into()))?;
    Ok(Vector(
        arr.iter().map(scalar_from_json).collect::<Result<_>>()?,
    ))
}

pub fn matrix_to_json<T: Scalar>(m: &Matrix<T>) -> Value {
    Value::Array((0..m.nrows()).map(|i| vector_to_json(&m.row(i))).collect())
}

pub fn matrix_from_json<T: Scalar>(v: &Value) -> Result<Matrix<T>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::MalformedInput("expected an array of rows".into()))?;
    let rows: Vec<Vector<T>> = arr.iter().map(vector_from_json).collect::<Result<_>>()?;
    if rows.is_empty() {
        return Err(Error::MalformedInput("empty matrix".into()));
    }
    Ok(Matrix::from_rows(&rows))
}

/// `{"dim": n, "vertices": [[..]], "facets": [{"normal": [..], "offset": x}]?}`
pub fn body_to_json<T: Scalar>(b: &ConvexBody<T>) -> Value {
    let mut obj = Map::new();
    obj.insert("dim".into(), json!(b.dim()));
    obj.insert(
        "vertices".into(),
        Value::Array(b.vertices().iter().map(vector_to_json).collect()),
    );
    if let Some(facets) = b.facets() {
        obj.insert(
            "facets".into(),
            Value::Array(
                facets
                    .iter()
                    .map(|f| {
                        json!({
                            "normal": vector_to_json(&f.normal),
                            "offset": scalar_to_json(&f.offset),
                        })
                    })
                    .collect(),
            ),
        );
    }
    Value::Object(obj)
}

pub fn body_from_json<T: Scalar>(v: &Value, tol: &T) -> Result<ConvexBody<T>> {
    let dim = v["dim"]
        .as_u64()
        .ok_or_else(|| Error::MalformedInput("body needs an integer `dim`".into()))?
        as usize;
    let verts = v["vertices"]
        .as_array()
        .ok_or_else(|| Error::MalformedInput("body needs `vertices`".into()))?
        .iter()
        .map(vector_from_json)
        .collect::<Result<Vec<_>>>()?;
    let mut body = ConvexBody::from_vertices(dim, verts, tol)?;
    if let Some(facets) = v.get("facets").and_then(Value::as_array) {
        let parsed: Vec<Facet<T>> = facets
            .iter()
            .map(|f| {
                Ok(Facet {
                    normal: vector_from_json(&f["normal"])?,
                    offset: scalar_from_json(&f["offset"])?,
                })
            })
            .collect::<Result<_>>()?;
        body = ConvexBody::from_facets(dim, parsed, tol)?;
    }
    Ok(body)
}

/// `{"dim": n, "unit": [..], "states": body, "effects": body, "meta": {..}}`
pub fn gpt_to_json<T: Scalar>(g: &Gpt<T>) -> Value {
    json!({
        "dim": g.dim,
        "unit": vector_to_json(&g.unit),
        "states": body_to_json(&g.states),
        "effects": body_to_json(&g.effects),
        "meta": g.meta.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect::<Map<_, _>>(),
    })
}

pub fn gpt_from_json<T: Scalar>(v: &Value, tol: &T) -> Result<Gpt<T>> {
    let dim = v["dim"]
        .as_u64()
        .ok_or_else(|| Error::MalformedInput("gpt needs an integer `dim`".into()))?
        as usize;
    let unit = vector_from_json(&v["unit"])?;
    let states = body_from_json(&v["states"], tol)?;
    let effects = body_from_json(&v["effects"], tol)?;
    let mut g = Gpt::new(dim, states, effects, unit);
    if let Some(meta) = v.get("meta").and_then(Value::as_object) {
        for (k, val) in meta {
            if let Some(s) = val.as_str() {
                g.meta.insert(k.clone(), s.to_string());
            }
        }
    }
    Ok(g)
}

pub fn model_to_json<T: Scalar>(m: &OntologicalModel<T>) -> Value {
    json!({
        "d": m.d,
        "mu_map": matrix_to_json(&m.mu_map),
        "xi_map": matrix_to_json(&m.xi_map),
    })
}

pub fn model_from_json<T: Scalar>(v: &Value) -> Result<OntologicalModel<T>> {
    Ok(OntologicalModel {
        d: v["d"]
            .as_u64()
            .ok_or_else(|| Error::MalformedInput("model needs `d`".into()))? as usize,
        mu_map: matrix_from_json(&v["mu_map"])?,
        xi_map: matrix_from_json(&v["xi_map"])?,
    })
}

pub fn witness_to_json<T: Scalar>(w: &EmbeddingWitness<T>) -> Value {
    json!({
        "d": w.d,
        "iota": matrix_to_json(&w.iota),
        "kappa": matrix_to_json(&w.kappa),
    })
}

pub fn quasirep_to_json<T: Scalar>(q: &QuasiRep<T>) -> Value {
    json!({
        "d": q.d,
        "mu_hat": matrix_to_json(&q.mu_hat),
        "xi_hat": matrix_to_json(&q.xi_hat),
        "gpt": gpt_to_json(&q.gpt),
    })
}

/// Decomposition pairs `[{"v": [..], "h": [..]}, ..]`.
pub fn pairs_from_json<T: Scalar>(v: &Value) -> Result<Vec<(Vector<T>, Vector<T>)>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::MalformedInput("expected an array of pairs".into()))?;
    arr.iter()
        .map(|p| Ok((vector_from_json(&p["v"])?, vector_from_json(&p["h"])?)))
        .collect()
}

/// Verdict JSON: `{"embeddable", "d"?, "iota"?, "kappa"?, "farkas"?,
/// "lower_bound", "warnings"}`.
pub fn verdict_to_json<T: Scalar>(v: &Verdict<T>, lower_bound: usize) -> Value {
    match v {
        Verdict::Embeddable {
            witness, warnings, ..
        } => json!({
            "embeddable": true,
            "d": witness.d,
            "iota": matrix_to_json(&witness.iota),
            "kappa": matrix_to_json(&witness.kappa),
            "lower_bound": lower_bound,
            "warnings": warnings,
        }),
        Verdict::NotEmbeddable {
            certificate,
            warnings,
        } => json!({
            "embeddable": false,
            "farkas": vector_to_json(&certificate.y),
            "farkas_dim": certificate.k,
            "lower_bound": lower_bound,
            "warnings": warnings,
        }),
    }
}

pub fn certificate_from_json<T: Scalar>(v: &Value) -> Result<FarkasCertificate<T>> {
    Ok(FarkasCertificate {
        k: v["farkas_dim"]
            .as_u64()
            .ok_or_else(|| Error::MalformedInput("certificate needs `farkas_dim`".into()))?
            as usize,
        y: vector_from_json(&v["farkas"])?,
    })
}

/// CSV: header `prep, k|M, k'|M, ...`; one row per preparation.
/// Measurements are grouped by the label part after the `|`, in first
/// appearance order.
pub fn parse_theory_csv<T: Scalar>(text: &str) -> Result<OperationalTheory<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::MalformedInput(format!("csv: {e}")))?
        .clone();
    if headers.len() < 2 {
        return Err(Error::MalformedInput(
            "csv needs a preparation column and at least one effect column".into(),
        ));
    }
    let mut measurements: Vec<Measurement> = Vec::new();
    let mut column_of: Vec<(String, String)> = Vec::new(); // (outcome, measurement)
    for h in headers.iter().skip(1) {
        let (k, m) = h.split_once('|').ok_or_else(|| {
            Error::MalformedInput(format!("effect label `{h}` is not of the form k|M"))
        })?;
        column_of.push((k.to_string(), m.to_string()));
        match measurements.iter_mut().find(|mm| mm.label == m) {
            Some(mm) => mm.outcomes.push(k.to_string()),
            None => measurements.push(Measurement {
                label: m.to_string(),
                outcomes: vec![k.to_string()],
            }),
        }
    }
    let mut preps = Vec::new();
    let mut raw_rows: Vec<Vec<T>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::MalformedInput(format!("csv: {e}")))?;
        if record.len() != headers.len() {
            return Err(Error::MalformedInput(format!(
                "row for `{}` has {} fields, expected {}",
                record.get(0).unwrap_or(""),
                record.len(),
                headers.len()
            )));
        }
        preps.push(record[0].to_string());
        let row: Vec<T> = record
            .iter()
            .skip(1)
            .map(|cell| {
                T::parse_number(cell)
                    .ok_or_else(|| Error::MalformedInput(format!("bad probability `{cell}`")))
            })
            .collect::<Result<_>>()?;
        raw_rows.push(row);
    }
    if preps.is_empty() {
        return Err(Error::MalformedInput("csv has no preparation rows".into()));
    }
    // Reorder columns into measurement order and transpose: internal rows
    // are operational effects.
    let mut order: Vec<usize> = Vec::new();
    for m in &measurements {
        for k in &m.outcomes {
            let col = column_of
                .iter()
                .position(|(kk, mm)| kk == k && mm == &m.label)
                .expect("column recorded above");
            order.push(col);
        }
    }
    let table = Matrix::from_fn(order.len(), preps.len(), |i, j| {
        raw_rows[j][order[i]].clone()
    });
    Ok(OperationalTheory {
        preps,
        measurements,
        table,
        relations: Relations::none(),
    })
}

pub fn theory_to_csv<T: Scalar>(t: &OperationalTheory<T>) -> String {
    let labels = t.effect_labels();
    let mut out = String::from("prep");
    for l in &labels {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for (j, p) in t.preps.iter().enumerate() {
        out.push_str(p);
        for i in 0..labels.len() {
            out.push(',');
            out.push_str(&t.table.get(i, j).repr());
        }
        out.push('\n');
    }
    out
}

/// `{"mixtures": [{"target", "left", "right", "weight"}],
///   "coarse_grainings": [{"target", "parts"}]}`
pub fn parse_relations<T: Scalar>(text: &str) -> Result<Relations<T>> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::MalformedInput(format!("relations json: {e}")))?;
    let mut relations = Relations::none();
    if let Some(mixtures) = v.get("mixtures").and_then(Value::as_array) {
        for m in mixtures {
            relations.mixtures.push(MixtureRelation {
                target: str_field(m, "target")?,
                left: str_field(m, "left")?,
                right: str_field(m, "right")?,
                weight: scalar_from_json(&m["weight"])?,
            });
        }
    }
    if let Some(cgs) = v.get("coarse_grainings").and_then(Value::as_array) {
        for cg in cgs {
            let parts = cg["parts"]
                .as_array()
                .ok_or_else(|| Error::MalformedInput("coarse_graining needs `parts`".into()))?
                .iter()
                .map(|p| {
                    p.as_str()
                        .map(String::from)
                        .ok_or_else(|| Error::MalformedInput("parts must be strings".into()))
                })
                .collect::<Result<_>>()?;
            relations.coarse_grainings.push(CoarseGraining {
                target: str_field(cg, "target")?,
                parts,
            });
        }
    }
    Ok(relations)
}

fn str_field(v: &Value, key: &str) -> Result<String> {
    v[key]
        .as_str()
        .map(String::from)
        .ok_or_else(|| Error::MalformedInput(format!("missing string field `{key}`")))
}
