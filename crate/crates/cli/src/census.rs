//! Parallel sweep over box products. Rows are independent and computed on a
//! worker pool; output order follows the input list.

use std::path::{Path, PathBuf};

use clusterbelt::recurrence::{minimal_order, window_needed};
use clusterbelt::{classify, product_of, BeltState, Classification, Rational, Seed};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::commands::{coxeter_sum, initial_values, parse_spec, parse_values, pretty, write_output, ValueSource};
use crate::{Failure, Format};

const DEFAULT_SPECS: [&str; 8] = [
    "A2xA2",
    "A2xA3",
    "A3xA3",
    "D4xA2",
    "A3xA1(1)",
    "A2xA3(1)",
    "A1xA1(1)",
    "A1(1)xA1(1)",
];

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub spec: String,
    pub vertices: Option<usize>,
    pub classification: Option<Classification>,
    pub recurrent: Option<bool>,
    pub period: Option<usize>,
    pub period_bound: Option<usize>,
    /// Minimal recurrence order per vertex; `None` when none up to `k_max`.
    pub orders: Vec<Option<usize>>,
    pub growth_superlinear: Option<bool>,
    pub error: Option<String>,
}

impl Row {
    fn failed(spec: &str, error: String) -> Row {
        Row {
            spec: spec.to_string(),
            vertices: None,
            classification: None,
            recurrent: None,
            period: None,
            period_bound: None,
            orders: Vec::new(),
            growth_superlinear: None,
            error: Some(error),
        }
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    spec: &'a str,
    vertices: String,
    classification: String,
    recurrent: String,
    period: String,
    orders: String,
    growth_superlinear: String,
    error: &'a str,
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn split_product(s: &str) -> Result<(&str, &str), String> {
    s.split_once(['x', '□'])
        .ok_or_else(|| format!("expected LEFTxRIGHT, got {s:?}"))
}

/// Bit height of a rational.
fn height(x: &Rational) -> f64 {
    (x.numer().bits() + x.denom().bits()) as f64
}

/// Heuristic for log-value growth faster than linear: the average height
/// increment over the second half of the orbit exceeds 1.5 times that of the
/// first half plus two bits.
pub fn superlinear(orbit: &[Rational]) -> bool {
    if orbit.len() < 5 {
        return false;
    }
    let t = orbit.len() - 1;
    let mid = t / 2;
    let h: Vec<f64> = orbit.iter().map(height).collect();
    let first = (h[mid] - h[0]) / mid as f64;
    let second = (h[t] - h[mid]) / (t - mid) as f64;
    second > 1.5 * first + 2.0
}

fn compute(spec: &str, steps: usize, k_max: usize, bound: usize, source: ValueSource) -> Result<Row, String> {
    let (l, r) = split_product(spec)?;
    let left = parse_spec(l).map_err(|f| f.message)?;
    let right = parse_spec(r).map_err(|f| f.message)?;
    let q = product_of(left, right).map_err(|e| e.to_string())?;
    let n = q.vertex_count();
    let labelling = classify(&q).map_err(|e| e.to_string())?;
    let values = initial_values(n, source, None).map_err(|f| f.message)?;
    let state = BeltState::with_inferred_coloring(Seed::new(q.clone(), values).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let period_bound = coxeter_sum(&q).unwrap_or(bound);
    let period = state.detect_period(period_bound);

    let watch: Vec<usize> = (0..n).collect();
    let length = steps.max(window_needed(k_max) - 1);
    let trace = state.evolve(length, 0, &watch).map_err(|e| e.to_string())?;
    let orders = watch
        .iter()
        .map(|&v| minimal_order(&trace.sequence(v).expect("watched"), k_max).order())
        .collect();
    let growth = trace.values.iter().any(|orbit| superlinear(orbit));
    Ok(Row {
        spec: format!("{left}x{right}"),
        vertices: Some(n),
        classification: Some(labelling.classification),
        recurrent: labelling.recurrent,
        period,
        period_bound: Some(period_bound),
        orders,
        growth_superlinear: Some(growth),
        error: None,
    })
}

fn to_csv(rows: &[Row]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        let classification = r
            .classification
            .map(|c| serde_json::to_value(c).expect("serializes").as_str().unwrap_or_default().to_string())
            .unwrap_or_default();
        let orders = r
            .orders
            .iter()
            .map(|o| o.map_or("-".to_string(), |k| k.to_string()))
            .collect::<Vec<_>>()
            .join(";");
        w.serialize(CsvRow {
            spec: &r.spec,
            vertices: opt(&r.vertices),
            classification,
            recurrent: opt(&r.recurrent),
            period: opt(&r.period),
            orders,
            growth_superlinear: opt(&r.growth_superlinear),
            error: r.error.as_deref().unwrap_or_default(),
        })
        .map_err(|e| Failure::breach(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::breach(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn run(
    specs: Option<&[String]>,
    steps: usize,
    k_max: usize,
    bound: usize,
    values: Option<&str>,
    out: Option<&Path>,
    format: Format,
) -> Result<(), Failure> {
    if k_max == 0 || bound == 0 {
        return Err(Failure::validation("--kmax and --bound must be positive"));
    }
    let source = match parse_values(values)?.unwrap_or(ValueSource::AllOnes) {
        ValueSource::File => return Err(Failure::validation("census has no file to take values from")),
        s => s,
    };
    let specs: Vec<String> = match specs {
        Some(s) => s.to_vec(),
        None => DEFAULT_SPECS.iter().map(|s| s.to_string()).collect(),
    };
    let rows: Vec<Row> = specs
        .par_iter()
        .map(|s| compute(s, steps, k_max, bound, source).unwrap_or_else(|e| Row::failed(s, e)))
        .collect();
    let values_name = match source {
        ValueSource::AllOnes => "all-ones".to_string(),
        ValueSource::Random(seed) => format!("random:{seed}"),
        ValueSource::File => unreachable!("rejected above"),
    };
    let json_text = pretty(&json!({
        "steps": steps,
        "k_max": k_max,
        "bound": bound,
        "values": values_name,
        "rows": rows,
    }));
    match out {
        Some(prefix) => {
            let with_ext = |ext: &str| {
                let mut p = PathBuf::from(prefix);
                let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                p.set_file_name(format!("{name}.{ext}"));
                p
            };
            write_output(Some(&with_ext("csv")), &to_csv(&rows)?)?;
            write_output(Some(&with_ext("json")), &json_text)
        }
        None => match format {
            Format::Json => write_output(None, &json_text),
            Format::Csv => write_output(None, &to_csv(&rows)?),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: impl IntoIterator<Item = i64>) -> Vec<Rational> {
        xs.into_iter().map(|x| Rational::from_integer(x.into())).collect()
    }

    #[test]
    fn growth_heuristic() {
        let fib = {
            let mut v = vec![1i64, 1];
            for i in 2..40 {
                v.push(v[i - 1] + v[i - 2]);
            }
            v
        };
        assert!(!superlinear(&ints(fib)));
        assert!(!superlinear(&ints([1, 2, 1, 2, 1, 2, 1, 2, 1])));
        let quad: Vec<Rational> = (0..13u32)
            .map(|k| pow2(k * (2 * k).saturating_sub(1)))
            .collect();
        assert!(superlinear(&quad));
    }

    fn pow2(e: u32) -> Rational {
        let two = Rational::from_integer(2.into());
        (0..e).fold(Rational::from_integer(1.into()), |acc, _| acc * &two)
    }

    #[test]
    fn product_names_split() {
        assert_eq!(split_product("A3xA1(1)").unwrap(), ("A3", "A1(1)"));
        assert_eq!(split_product("A2□A2").unwrap(), ("A2", "A2"));
        assert!(split_product("A2").is_err());
    }

    #[test]
    fn bad_rows_are_recorded() {
        let row = compute("A2xB3", 4, 2, 5, ValueSource::AllOnes);
        assert!(row.is_err());
    }
}
