//! JSON encodings of exact values and a plain-text renderer for reports.

use mfhrr::{PolyRing, Polynomial, Scalar, ScalarMatrix};
use serde_json::{json, Value};

/// Rationals as `"p/q"` (or `"p"`); other cyclotomic elements as `{"m": m, "coeffs": [...]}`.
pub fn scalar(s: &Scalar) -> Value {
    match s {
        Scalar::Rational(r) => Value::String(r.to_string()),
        Scalar::Cyclotomic(f, c) => json!({
            "m": f.order(),
            "coeffs": c.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        }),
    }
}

/// An integer when the scalar is one, otherwise its string form.
pub fn integral(s: &Scalar) -> Value {
    match s.as_integer().and_then(|i| i64::try_from(i).ok()) {
        Some(i) => Value::from(i),
        None => scalar(s),
    }
}

pub fn poly(ring: &PolyRing, p: &Polynomial) -> Value {
    Value::String(ring.format(p))
}

pub fn matrix(m: &ScalarMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| scalar(m.get(i, j))).collect()))
            .collect(),
    )
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(o) if o.contains_key("m") && o.contains_key("coeffs") => {
            let coeffs: Vec<String> = o["coeffs"]
                .as_array()
                .into_iter()
                .flatten()
                .map(cell)
                .collect();
            format!("Q(z_{})[{}]", o["m"], coeffs.join(", "))
        }
        Value::Array(a) => format!("[{}]", a.iter().map(cell).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn table(rows: &[Value], out: &mut String) {
    let cols: Vec<String> = match rows.first() {
        Some(Value::Object(o)) => o.keys().cloned().collect(),
        _ => {
            for r in rows {
                out.push_str(&format!("  {}\n", cell(r)));
            }
            return;
        }
    };
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            cols.iter()
                .map(|c| r.get(c).map(cell).unwrap_or_default())
                .collect()
        })
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(k, c)| {
            cells
                .iter()
                .map(|r| r[k].chars().count())
                .chain([c.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |items: &[String]| {
        let padded: Vec<String> = items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    out.push_str(&line(&cols));
    for r in &cells {
        out.push_str(&line(r));
    }
}

/// Renders a report object as `key: value` lines, with arrays of records as aligned tables.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    let Value::Object(map) = v else {
        return format!("{}\n", cell(v));
    };
    for (k, val) in map {
        match val {
            Value::Array(rows) if rows.iter().any(|r| r.is_object() || r.is_array()) => {
                out.push_str(&format!("{k}:\n"));
                table(rows, &mut out);
            }
            _ => out.push_str(&format!("{k}: {}\n", cell(val))),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use mfhrr::CyclotomicField;

    #[test]
    fn scalar_formats() {
        assert_eq!(scalar(&Scalar::from_ratio(-3, 6)), json!("-1/2"));
        assert_eq!(integral(&Scalar::from_int(2)), json!(2));
        assert_eq!(integral(&Scalar::from_ratio(1, 2)), json!("1/2"));
        let z = CyclotomicField::new(3).zeta();
        assert_eq!(scalar(&z), json!({"m": 3, "coeffs": ["0", "1"]}));
    }

    #[test]
    fn text_tables_align() {
        let v = json!({"mu": 2, "rows": [{"a": "1", "b": "long"}, {"a": "333", "b": "x"}]});
        assert_eq!(
            render_text(&v),
            "mu: 2\nrows:\n  a    b\n  1    long\n  333  x\n"
        );
    }
}
