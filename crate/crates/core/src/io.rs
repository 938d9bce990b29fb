//! File formats: quiver/seed JSON, trace CSV, and JSON reports.
//!
//! Quiver JSON:
//!
//! ```json
//! {"vertices": [{"id": 0, "frozen": false, "label": "x1", "color": "black"}],
//!  "arrows": [[0, 1, 2]],
//!  "values": ["1", "3/2"],
//!  "product": {"left": "A3", "right": "A1(1)"}}
//! ```
//!
//! `label`, `color`, `values`, and `product` are optional. Multiplicities are
//! at least one and a vertex pair may be listed only once. When `product` is
//! present the arrows must equal that box product. Rationals are `p/q`
//! strings throughout.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::belt::{Color, Trace};
use crate::dynkin::{belt_coloring, product_of, DynkinSpec};
use crate::error::{Error, Result};
use crate::labelling::LabellingResult;
use crate::quiver::{Quiver, Seed};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::recurrence::RecurrenceReport;

pub const MAX_VERTICES: usize = 1024;
pub const MAX_MULTIPLICITY: u64 = 1 << 20;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: u64,
    #[serde(default)]
    frozen: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    color: Option<Color>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductDoc {
    left: DynkinSpec,
    right: DynkinSpec,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverDoc {
    vertices: Vec<VertexDoc>,
    arrows: Vec<(u64, u64, u64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    product: Option<ProductDoc>,
}

/// A parsed quiver file.
#[derive(Clone, Debug)]
pub struct QuiverFile {
    pub quiver: Quiver,
    /// Present when every vertex carries a color.
    pub coloring: Option<Vec<Color>>,
    pub values: Option<Vec<Rational>>,
}

impl QuiverFile {
    pub fn to_json(&self) -> String {
        quiver_to_json(&self.quiver, self.coloring.as_deref(), self.values.as_deref())
    }

    pub fn seed(&self) -> Result<Option<Seed>> {
        self.values
            .as_ref()
            .map(|v| Seed::new(self.quiver.clone(), v.clone()))
            .transpose()
    }
}

pub fn parse_quiver_json(text: &str) -> Result<QuiverFile> {
    let doc: QuiverDoc = serde_json::from_str(text)?;
    let n = doc.vertices.len();
    if n == 0 || n > MAX_VERTICES {
        return Err(Error::InvalidQuiver(format!("vertex count {n} outside 1..={MAX_VERTICES}")));
    }
    let mut slots: Vec<Option<&VertexDoc>> = vec![None; n];
    for vd in &doc.vertices {
        let id = usize::try_from(vd.id).ok().filter(|&i| i < n).ok_or_else(|| {
            Error::InvalidQuiver(format!("vertex id {} out of range 0..{n}", vd.id))
        })?;
        if slots[id].replace(vd).is_some() {
            return Err(Error::InvalidQuiver(format!("duplicate vertex id {id}")));
        }
    }
    let verts: Vec<&VertexDoc> = slots.into_iter().map(|s| s.expect("ids are a permutation")).collect();

    let mut seen = HashSet::new();
    let mut arrows = Vec::with_capacity(doc.arrows.len());
    for &(u, v, k) in &doc.arrows {
        if u >= n as u64 || v >= n as u64 {
            return Err(Error::InvalidQuiver(format!("arrow [{u}, {v}] references a missing vertex")));
        }
        if u == v {
            return Err(Error::InvalidQuiver(format!("loop at vertex {u}")));
        }
        if k == 0 || k > MAX_MULTIPLICITY {
            return Err(Error::InvalidQuiver(format!("multiplicity {k} outside 1..={MAX_MULTIPLICITY}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::InvalidQuiver(format!("vertex pair {{{u}, {v}}} listed twice")));
        }
        arrows.push((u as usize, v as usize, k as i64));
    }
    let mut quiver = match &doc.product {
        Some(p) => {
            let size = p.left.vertex_count().checked_mul(p.right.vertex_count());
            if size != Some(n) {
                return Err(Error::InvalidQuiver(format!(
                    "{} □ {} does not have {n} vertices",
                    p.left, p.right
                )));
            }
            let q = product_of(p.left, p.right)?;
            let listed = Quiver::from_arrows(n, &arrows)?;
            if q.vertex_count() != n || q.exchange_matrix() != listed.exchange_matrix() {
                return Err(Error::InvalidQuiver(format!(
                    "arrows do not match the box product {} □ {}",
                    p.left, p.right
                )));
            }
            q
        }
        None => Quiver::from_arrows(n, &arrows)?,
    };
    for (id, vd) in verts.iter().enumerate() {
        quiver.set_frozen(id, vd.frozen);
        if let Some(l) = &vd.label {
            quiver.set_label(id, l.clone());
        }
    }
    if doc.product.is_some() && quiver.frozen().iter().any(|&f| f) {
        return Err(Error::InvalidQuiver("box products have no frozen vertices".into()));
    }
    let coloring = verts.iter().map(|vd| vd.color).collect::<Option<Vec<_>>>();
    let values = doc
        .values
        .map(|vs| {
            if vs.len() != n {
                return Err(Error::InvalidQuiver(format!("{} values for {n} vertices", vs.len())));
            }
            let parsed = vs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            if let Some(v) = parsed.iter().position(num_traits::Zero::is_zero) {
                return Err(Error::InvalidQuiver(format!("value at vertex {v} is zero")));
            }
            Ok(parsed)
        })
        .transpose()?;
    Ok(QuiverFile { quiver, coloring, values })
}

/// Serializes a quiver with optional colors and values. Box products carry
/// their factor types, and their belt colors when none are given.
pub fn quiver_to_json(q: &Quiver, coloring: Option<&[Color]>, values: Option<&[Rational]>) -> String {
    let colors = coloring.map(<[Color]>::to_vec).or_else(|| belt_coloring(q).ok());
    let vertices = (0..q.vertex_count())
        .map(|v| VertexDoc {
            id: v as u64,
            frozen: q.is_frozen(v),
            label: q.label(v).map(str::to_owned),
            color: colors.as_ref().map(|c| c[v]),
        })
        .collect();
    let product = q.product_info().and_then(|info| {
        Some(ProductDoc { left: info.left_spec?, right: info.right_spec? })
    });
    let doc = QuiverDoc {
        vertices,
        arrows: q.arrows().into_iter().map(|(u, v, k)| (u as u64, v as u64, k as u64)).collect(),
        values: values.map(|vs| vs.iter().map(format_rational).collect()),
        product,
    };
    serde_json::to_string_pretty(&doc).expect("quiver document serializes")
}

/// `time,vertex,value` rows, time-major.
pub fn trace_to_csv(trace: &Trace) -> String {
    let mut out = String::from("time,vertex,value\n");
    for t in 0..trace.len() {
        for (k, v) in trace.vertices.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{}\n",
                trace.t_min + t as i64,
                v,
                format_rational(&trace.values[k][t])
            ));
        }
    }
    out
}

/// Reads a trace CSV. Every vertex must cover the same contiguous window.
pub fn parse_trace_csv(text: &str) -> Result<Trace> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["time", "vertex", "value"] {
        return Err(Error::Parse("expected header time,vertex,value".into()));
    }
    let mut series: BTreeMap<usize, BTreeMap<i64, Rational>> = BTreeMap::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.len() != 3 {
            return Err(Error::Parse(format!("row {} has {} fields", line + 2, rec.len())));
        }
        let time: i64 = rec[0].parse().map_err(|_| Error::Parse(format!("bad time {:?}", &rec[0])))?;
        let vertex: usize = rec[1]
            .parse()
            .ok()
            .filter(|&v| v < MAX_VERTICES)
            .ok_or_else(|| Error::Parse(format!("bad vertex {:?}", &rec[1])))?;
        let value = parse_rational(&rec[2])?;
        if series.entry(vertex).or_default().insert(time, value).is_some() {
            return Err(Error::Parse(format!("duplicate entry for vertex {vertex} at time {time}")));
        }
    }
    let first = series.values().next().ok_or_else(|| Error::Parse("empty trace".into()))?;
    let t_min = *first.keys().next().expect("non-empty series");
    let len = first.len();
    let mut vertices = Vec::new();
    let mut values = Vec::new();
    for (v, s) in series {
        let times: Vec<i64> = s.keys().copied().collect();
        let contiguous = times.len() == len
            && times.first() == Some(&t_min)
            && times.windows(2).all(|w| w[0].checked_add(1) == Some(w[1]));
        if !contiguous {
            return Err(Error::Parse(format!("vertex {v} does not cover the common window")));
        }
        vertices.push(v);
        values.push(s.into_values().collect());
    }
    Ok(Trace { t_min, vertices, values })
}

fn rationals(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(format_rational(x))).collect())
}

pub fn recurrence_json(report: &RecurrenceReport) -> Value {
    match report {
        RecurrenceReport::Found { order, coefficients, window } => json!({
            "status": report.status(),
            "order": order,
            "coefficients": rationals(coefficients),
            "verified_window": [window.0, window.1],
        }),
        RecurrenceReport::NoneUpTo { k_max, window } => json!({
            "status": report.status(),
            "k_max": k_max,
            "verified_window": [window.0, window.1],
        }),
        RecurrenceReport::InsufficientData { needed, available } => json!({
            "status": report.status(),
            "needed": needed,
            "available": available,
        }),
    }
}

pub fn labelling_json(r: &LabellingResult) -> Value {
    json!({
        "classification": r.classification,
        "labels": r.labels.as_deref().map(rationals),
        "tight_pattern": r.tight_pattern,
        "recurrent": r.recurrent,
    })
}

pub fn labels_json(labels: Option<&[Rational]>) -> Value {
    json!({ "found": labels.is_some(), "labels": labels.map(rationals) })
}
