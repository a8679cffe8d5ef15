//! Output encoding. Every float is written with 17 significant digits so
//! that parsing the text gives back the same double.

use serde_json::{Map, Number, Value};
use spiked_osc::basis::OscillatorParams;

/// Fixed 17-digit form d.dddddddddddddddde±x, which always round-trips.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        let s = format!("{v:.16e}");
        match s.split_once('e') {
            Some((mant, exp)) if !exp.starts_with('-') => format!("{mant}e+{exp}"),
            _ => s,
        }
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// JSON number carrying exactly the digits of [`fmt_f64`]; non-finite values become null.
pub fn num(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    Value::Number(fmt_f64(v).parse::<Number>().expect("formatted float is a JSON number"))
}

pub fn nums(vs: &[f64]) -> Value {
    Value::Array(vs.iter().map(|&v| num(v)).collect())
}

pub fn object<const N: usize>(entries: [(&str, Value); N]) -> Value {
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

pub fn params_json(p: &OscillatorParams) -> Value {
    object([
        ("A", num(p.a())),
        ("B", num(p.b())),
        ("alpha", num(p.alpha())),
        ("lambda", num(p.lambda())),
        ("gamma", num(p.gamma())),
    ])
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// CSV with a header row. Cells are written as given.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Csv { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}
