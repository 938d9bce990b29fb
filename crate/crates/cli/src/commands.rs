use std::fs;
use std::path::Path;

use clusterbelt::annulus::{order_bound, verify_all};
use clusterbelt::dynkin::{build_diagram, coxeter_number, Family};
use clusterbelt::io::{
    labelling_json, labels_json, parse_quiver_json, parse_trace_csv, quiver_to_json, recurrence_json,
    trace_to_csv, QuiverFile,
};
use clusterbelt::recurrence::minimal_order;
use clusterbelt::{
    check_coloring, classify, infer_coloring, product_of, random_values, BeltState, Classification,
    Color, DynkinSpec, LabellingProblem, Quiver, Rational, Seed,
};
use serde_json::{json, Value};

use crate::{Failure, Format, LabelMode};

pub fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_spec(s: &str) -> Result<DynkinSpec, Failure> {
    s.trim().parse().map_err(Failure::from)
}

/// Initial values by name; `None` keeps file values or falls back to
/// all-ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueSource {
    AllOnes,
    Random(u64),
    File,
}

pub fn parse_values(s: Option<&str>) -> Result<Option<ValueSource>, Failure> {
    let Some(s) = s else { return Ok(None) };
    match s {
        "all-ones" => Ok(Some(ValueSource::AllOnes)),
        "file" => Ok(Some(ValueSource::File)),
        _ => {
            let seed = s
                .strip_prefix("random:")
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| Failure::validation(format!("--values must be all-ones, random:SEED or file, got {s:?}")))?;
            Ok(Some(ValueSource::Random(seed)))
        }
    }
}

pub fn initial_values(n: usize, source: ValueSource, file: Option<&[Rational]>) -> Result<Vec<Rational>, Failure> {
    match source {
        ValueSource::AllOnes => Ok(vec![Rational::from_integer(1.into()); n]),
        ValueSource::Random(seed) => Ok(random_values(n, seed)),
        ValueSource::File => file
            .map(<[Rational]>::to_vec)
            .ok_or_else(|| Failure::validation("--values file but the quiver file has no values")),
    }
}

fn load_quiver(path: &Path) -> Result<QuiverFile, Failure> {
    Ok(parse_quiver_json(&read(path)?)?)
}

/// Belt state from a quiver file, using stored colors when present.
fn load_belt(path: &Path, values: Option<&str>) -> Result<(QuiverFile, BeltState), Failure> {
    let file = load_quiver(path)?;
    let n = file.quiver.vertex_count();
    let source = parse_values(values)?.unwrap_or(if file.values.is_some() { ValueSource::File } else { ValueSource::AllOnes });
    let values = initial_values(n, source, file.values.as_deref())?;
    let seed = Seed::new(file.quiver.clone(), values)?;
    let coloring = match &file.coloring {
        Some(c) => {
            check_coloring(&file.quiver, c)?;
            c.clone()
        }
        None => infer_coloring(&file.quiver)?,
    };
    let state = BeltState::new(seed, coloring)?;
    Ok((file, state))
}

pub fn catalog(spec: &str, out: Option<&Path>) -> Result<(), Failure> {
    let spec = parse_spec(spec)?;
    let g = build_diagram(spec)?;
    let arrows: Vec<(usize, usize, i64)> = g
        .edges
        .iter()
        .map(|&(u, v, k)| if g.coloring[u] == 0 { (u, v, k) } else { (v, u, k) })
        .collect();
    let q = Quiver::from_arrows(g.vertex_count, &arrows)?;
    let colors: Vec<Color> =
        g.coloring.iter().map(|&c| if c == 0 { Color::Black } else { Color::White }).collect();
    let mut text = quiver_to_json(&q, Some(&colors), None);
    text.push('\n');
    write_output(out, &text)
}

pub fn product(left: &str, right: &str, values: Option<&str>, out: Option<&Path>) -> Result<(), Failure> {
    let q = product_of(parse_spec(left)?, parse_spec(right)?)?;
    let values = match parse_values(values)? {
        None => None,
        Some(ValueSource::File) => return Err(Failure::validation("product has no file to take values from")),
        Some(source) => Some(initial_values(q.vertex_count(), source, None)?),
    };
    let mut text = quiver_to_json(&q, None, values.as_deref());
    text.push('\n');
    write_output(out, &text)
}

pub fn evolve(
    quiver: &Path,
    steps: usize,
    backward: usize,
    watch: Option<&[usize]>,
    values: Option<&str>,
    format: Format,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let (file, state) = load_belt(quiver, values)?;
    let all: Vec<usize> = (0..file.quiver.vertex_count()).collect();
    let watch = watch.unwrap_or(&all);
    let trace = state.evolve(steps, backward, watch)?;
    let text = match format {
        Format::Csv => trace_to_csv(&trace),
        Format::Json => {
            let series: Vec<Value> = trace
                .vertices
                .iter()
                .zip(&trace.values)
                .map(|(v, vals)| {
                    json!({
                        "vertex": v,
                        "label": file.quiver.name(*v),
                        "values": vals.iter().map(clusterbelt::format_rational).collect::<Vec<_>>(),
                    })
                })
                .collect();
            pretty(&json!({ "t_min": trace.t_min, "t_max": trace.t_max(), "series": series }))
        }
    };
    write_output(out, &text)
}

/// `h + h'` for products of two finite diagrams.
pub fn coxeter_sum(q: &Quiver) -> Option<usize> {
    let info = q.product_info()?;
    let (l, r) = (info.left_spec?, info.right_spec?);
    Some(coxeter_number(l).ok()? + coxeter_number(r).ok()?)
}

pub fn period(quiver: &Path, bound: usize, values: Option<&str>, out: Option<&Path>) -> Result<(), Failure> {
    let (file, state) = load_belt(quiver, values)?;
    let p = state.detect_period(bound);
    let h = coxeter_sum(&file.quiver);
    if let (Some(p), Some(h)) = (p, h) {
        if h % p != 0 {
            return Err(Failure::breach(format!("period {p} does not divide h + h' = {h}")));
        }
    }
    write_output(out, &pretty(&json!({ "bound": bound, "period": p, "coxeter_sum": h })))
}

/// `n · C(m+1, j)` for vertices of `A_m □ A(1)_{2n-1}`.
fn linearization_bound(q: &Quiver, v: usize) -> Option<usize> {
    let info = q.product_info()?;
    let (l, r) = (info.left_spec?, info.right_spec?);
    if l.family != Family::A || r.family != Family::AAffine || v >= q.vertex_count() {
        return None;
    }
    Some(order_bound(l.rank, r.rank.div_ceil(2), info.j_index(v)?))
}

pub fn linearize(trace: &Path, kmax: usize, quiver: Option<&Path>, report: Option<&Path>) -> Result<(), Failure> {
    if kmax == 0 {
        return Err(Failure::validation("--kmax must be positive"));
    }
    let trace = parse_trace_csv(&read(trace)?)?;
    let q = quiver.map(load_quiver).transpose()?.map(|f| f.quiver);
    let mut rows = Vec::new();
    for &v in &trace.vertices {
        let seq = trace.sequence(v).expect("vertex of the trace");
        let result = minimal_order(&seq, kmax);
        let mut row = recurrence_json(&result);
        row["vertex"] = json!(v);
        if let Some(bound) = q.as_ref().and_then(|q| linearization_bound(q, v)) {
            row["bound"] = json!(bound);
            if let Some(k) = result.order() {
                if k > bound {
                    return Err(Failure::breach(format!("vertex {v}: order {k} exceeds bound {bound}")));
                }
            }
        }
        rows.push(row);
    }
    write_output(report, &pretty(&json!({ "k_max": kmax, "vertices": rows })))
}

pub fn label(quiver: &Path, mode: LabelMode, out: Option<&Path>) -> Result<(), Failure> {
    let file = load_quiver(quiver)?;
    let q = &file.quiver;
    let problem = LabellingProblem::new(q)?;
    let value = match mode {
        LabelMode::Classify => {
            let r = classify(q)?;
            let ok = match (r.classification, r.labels.as_deref()) {
                (Classification::Strict, Some(l)) => problem.verify_strict(l),
                (Classification::PlainOnly, Some(l)) => problem.verify_plain(l),
                (Classification::WeakOnly, Some(l)) => problem.verify_weak(l),
                (Classification::None, None) => true,
                _ => false,
            };
            if !ok {
                return Err(Failure::breach("certificate failed re-verification"));
            }
            labelling_json(&r)
        }
        LabelMode::Strict => {
            let l = problem.find_strict();
            if l.as_deref().is_some_and(|l| !problem.verify_strict(l)) {
                return Err(Failure::breach("strict certificate failed re-verification"));
            }
            labels_json(l.as_deref())
        }
        LabelMode::Weak => {
            let l = problem.find_weak();
            if l.as_deref().is_some_and(|l| !problem.verify_weak(l)) {
                return Err(Failure::breach("weak certificate failed re-verification"));
            }
            labels_json(l.as_deref())
        }
        LabelMode::Plain => {
            let found = problem.find_plain()?;
            if found.as_ref().is_some_and(|(l, _)| !problem.verify_plain(l)) {
                return Err(Failure::breach("plain certificate failed re-verification"));
            }
            let mut v = labels_json(found.as_ref().map(|(l, _)| l.as_slice()));
            v["tight_pattern"] = json!(found.map(|(_, p)| p));
            v
        }
    };
    write_output(out, &pretty(&value))
}

pub fn annulus_verify(
    m: usize,
    n: usize,
    seed: u64,
    kmax: Option<usize>,
    samples: usize,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if m == 0 || n == 0 {
        return Err(Failure::validation("--m and --n must be positive"));
    }
    let report = verify_all(m, n, seed, kmax, samples)?;
    let value = serde_json::to_value(&report).expect("report serializes");
    write_output(out, &pretty(&value))?;
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(Failure::breach(format!("failed checks: {}", failed.join(", "))))
    }
}
