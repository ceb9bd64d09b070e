use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const SCHEMA: u32 = 1;

/// How a number in `results` was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    /// Certified exactly by a jet computation at this order.
    JetOrder(usize),
    /// Derived from a formula in other certified quantities.
    Formula(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warning {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: Vec<String>,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub certification: Map<String, Value>,
    pub warnings: Vec<Warning>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            schema: SCHEMA,
            command,
            inputs: Map::new(),
            results: Map::new(),
            certification: Map::new(),
            warnings: Vec::new(),
            error: None,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.into(), value.into());
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.into(), value.into());
    }

    pub fn certify(&mut self, key: &str, c: Certification) {
        self.certification.insert(key.into(), serde_json::to_value(c).expect("certifications serialize"));
    }

    pub fn warn(&mut self, kind: &str, message: impl Into<String>) {
        self.warnings.push(Warning { kind: kind.into(), message: message.into() });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Plain-text rendering, one `key: value` line per input and result.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(e) = &self.error {
            out.push_str(&format!("error ({}): {}\n", e.kind, e.message));
            return out;
        }
        for (k, v) in &self.inputs {
            out.push_str(&format!("{k}: {}\n", plain(v)));
        }
        for (k, v) in &self.results {
            if let Some(rows) = v.as_array().filter(|_| k == "rows" || k == "entries") {
                out.push_str(&format!("{k}:\n"));
                for row in rows {
                    out.push_str(&format!("  {}\n", plain(row)));
                }
                continue;
            }
            out.push_str(&format!("{k}: {}", plain(v)));
            if let Some(c) = self.certification.get(k) {
                out.push_str(&format!("  [{}]", certification_text(c)));
            }
            out.push('\n');
        }
        for w in &self.warnings {
            out.push_str(&format!("{}: {}\n", w.kind, w.message));
        }
        out
    }
}

fn certification_text(c: &Value) -> String {
    match serde_json::from_value::<Certification>(c.clone()) {
        Ok(Certification::JetOrder(k)) => format!("certified at jet order {k}"),
        Ok(Certification::Formula(f)) => format!("from {f}"),
        Err(_) => c.to_string(),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            items.iter().map(plain).collect::<Vec<_>>().join(", ")
        }
        Value::Array(items) => format!("[{}]", items.iter().map(plain).collect::<Vec<_>>().join("; ")),
        Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect::<Vec<_>>().join("  "),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering() {
        let mut r = Report::new(vec!["tau".into()]);
        r.input("function", "z^3");
        r.result("tau", 2);
        r.certify("tau", Certification::JetOrder(3));
        r.result("basis", vec!["z", "1"]);
        r.warn("Unknown", "no theorem applies");
        assert_eq!(
            r.to_text(),
            "function: z^3\ntau: 2  [certified at jet order 3]\nbasis: z, 1\nUnknown: no theorem applies\n"
        );
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report::new(vec!["mu".into(), "-e".into(), "x^3".into()]);
        r.result("mu", 2);
        r.certify("mu", Certification::Formula("tau * codim".into()));
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
