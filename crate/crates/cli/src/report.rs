//! Command results, rendered either as text lines or as the JSON envelope
//! `{command, inputs, result, certificate?}`.

use serde_json::{json, Map, Value};
use smdc_core::rational;
use smdc_core::{Error, Rational};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    /// Inequality violated or rate tuple outside the region.
    Violated = 1,
    Usage = 2,
    Data = 3,
}

pub fn error_status(err: &Error) -> Status {
    match err {
        Error::InvalidArgument(_) | Error::Dimension(_) => Status::Usage,
        _ => Status::Data,
    }
}

pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub result: Map<String, Value>,
    pub certificate: Option<Value>,
    pub lines: Vec<String>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Map::new(),
            result: Map::new(),
            certificate: None,
            lines: Vec::new(),
            status: Status::Ok,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.result.insert(key.to_string(), value.into());
        self
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    pub fn render(&self, as_json: bool) -> String {
        if !as_json {
            return self.lines.join("\n");
        }
        let mut envelope = json!({
            "command": self.command,
            "inputs": Value::Object(self.inputs.clone()),
            "result": Value::Object(self.result.clone()),
        });
        if let Some(c) = &self.certificate {
            envelope["certificate"] = c.clone();
        }
        serde_json::to_string_pretty(&envelope).expect("JSON values serialize")
    }
}

pub fn q(value: &Rational) -> Value {
    Value::String(rational::fmt(value))
}

pub fn q_list(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(q).collect())
}

/// Twelve significant digits; scientific notation for tiny magnitudes.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if exp < -4 {
        return format!("{x:.11e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// A float rounded to twelve significant digits as a JSON number.
pub fn float(x: f64) -> Value {
    sig12(x).parse::<f64>().ok().and_then(|v| serde_json::Number::from_f64(v).map(Value::Number)).unwrap_or(Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(std::f64::consts::PI), "3.14159265359");
        assert_eq!(sig12(1.5), "1.5");
        assert_eq!(sig12(1234.5678), "1234.5678");
        assert_eq!(sig12(-2.0e-7), "-2.00000000000e-7");
        assert_eq!(sig12(0.0), "0");
    }

    #[test]
    fn envelope_has_optional_certificate() {
        let mut r = Report::new("region min-sum");
        r.input("entropies", "1,1,1").result("min_sum", "11/2");
        let v: Value = serde_json::from_str(&r.render(true)).unwrap();
        assert_eq!(v["result"]["min_sum"], "11/2");
        assert!(v.get("certificate").is_none());
    }
}
