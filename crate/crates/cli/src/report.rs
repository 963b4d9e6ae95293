use std::fmt::Write as _;

use serde_json::{Map, Number, Value};
use smcount_core::engine::CountResult;
use smcount_core::IntPolynomial;

/// A finished command: the JSON document, the text rendering, and whether
/// an oracle comparison failed.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub mismatch: bool,
}

/// Integers of any size as exact JSON numbers.
pub fn int(n: impl ToString) -> Value {
    Value::Number(n.to_string().parse::<Number>().expect("integer literal"))
}

pub fn coeffs(p: &IntPolynomial) -> Value {
    Value::Array(p.coeffs().iter().map(int).collect())
}

pub fn poly_fields(p: &IntPolynomial) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("poly_coeffs".into(), coeffs(p));
    m.insert("poly_display".into(), Value::String(p.to_string()));
    m
}

pub fn count_fields(r: &CountResult) -> Map<String, Value> {
    let mut m = poly_fields(&r.poly);
    m.insert("threshold_q0".into(), int(r.threshold_q0));
    m.insert("morley_rank".into(), int(r.morley_rank));
    m.insert("morley_degree".into(), int(r.morley_degree));
    m.insert("leading_coefficient".into(), int(&r.leading_coefficient));
    m
}

/// Aligned `key  value` lines.
#[derive(Default)]
pub struct Text {
    rows: Vec<(String, String)>,
    tail: String,
}

impl Text {
    pub fn row(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.rows.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn count(&mut self, r: &CountResult) -> &mut Self {
        self.row("P(q)", &r.poly)
            .row("Morley rank", r.morley_rank)
            .row("Morley degree", r.morley_degree)
            .row("valid for", format!("q >= {}", r.threshold_q0))
    }

    pub fn line(&mut self, s: impl AsRef<str>) -> &mut Self {
        self.tail.push_str(s.as_ref());
        self.tail.push('\n');
        self
    }

    pub fn finish(&self) -> String {
        let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut s = String::new();
        for (k, v) in &self.rows {
            let _ = writeln!(s, "{k:<width$}  {v}");
        }
        s.push_str(&self.tail);
        s
    }
}
