use serde::Serialize;
use serde_json::{json, Value};

use randcal_radial::{rational_string, Rational};

pub const SCHEMA_VERSION: u32 = 1;

/// Significant digits of every float written to a verdict.
const FLOAT_DIGITS: usize = 12;

/// Fixed-precision float for byte-stable JSON.
pub fn fixed(x: f64) -> Value {
    if x.is_finite() {
        serde_json::from_str(&format!("{x:.prec$e}", prec = FLOAT_DIGITS - 1)).expect("formatted float")
    } else {
        Value::String(x.to_string())
    }
}

/// A measured quantity. Exact values are always rendered as `"p/q"` strings.
#[derive(Clone, Debug)]
pub enum Measured {
    Exact(Rational),
    Float(f64),
    Count(u64),
    Flag(bool),
}

impl Measured {
    fn to_json(&self) -> Value {
        match self {
            Measured::Exact(r) => Value::String(rational_string(r)),
            Measured::Float(x) => fixed(*x),
            Measured::Count(n) => json!(n),
            Measured::Flag(b) => json!(b),
        }
    }
}

/// Acceptance rule attached to a measurement.
#[derive(Clone, Debug)]
pub enum Tolerance {
    AtMost(f64),
    AtLeast(f64),
    Above(f64),
    EqualsExact(Rational),
    PositiveExact,
    NonzeroExact,
    True,
    /// Reported, not judged.
    Info,
}

impl Tolerance {
    fn describe(&self) -> Value {
        match self {
            Tolerance::AtMost(t) => Value::String(format!("<= {t:e}")),
            Tolerance::AtLeast(t) => Value::String(format!(">= {t:e}")),
            Tolerance::Above(t) => Value::String(format!("> {t:e}")),
            Tolerance::EqualsExact(r) => Value::String(format!("== {}", rational_string(r))),
            Tolerance::PositiveExact => Value::String("> 0 (exact)".into()),
            Tolerance::NonzeroExact => Value::String("!= 0 (exact)".into()),
            Tolerance::True => Value::String("true".into()),
            Tolerance::Info => Value::Null,
        }
    }

    fn accepts(&self, m: &Measured) -> bool {
        let zero = Rational::from_integer(0.into());
        match (self, m) {
            (Tolerance::Info, _) => true,
            (Tolerance::AtMost(t), Measured::Float(x)) => *x <= *t,
            (Tolerance::AtLeast(t), Measured::Float(x)) => *x >= *t,
            (Tolerance::Above(t), Measured::Float(x)) => *x > *t,
            (Tolerance::AtMost(t), Measured::Count(n)) => (*n as f64) <= *t,
            (Tolerance::AtLeast(t), Measured::Count(n)) => (*n as f64) >= *t,
            (Tolerance::EqualsExact(r), Measured::Exact(x)) => x == r,
            (Tolerance::PositiveExact, Measured::Exact(x)) => *x > zero,
            (Tolerance::NonzeroExact, Measured::Exact(x)) => *x != zero,
            (Tolerance::True, Measured::Flag(b)) => *b,
            _ => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Measurement {
    pub label: String,
    pub value: Measured,
    pub tolerance: Tolerance,
}

impl Measurement {
    pub fn ok(&self) -> bool {
        self.tolerance.accepts(&self.value)
    }
}

/// Outcome of one run; `pass` holds iff every measurement is within tolerance.
#[derive(Clone, Debug, Default)]
pub struct Verdict {
    pub name: String,
    pub measured: Vec<Measurement>,
    pub artifacts: Vec<String>,
    pub notes: Vec<String>,
    pub members: Vec<Verdict>,
    pub skipped: bool,
}

impl Verdict {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), ..Default::default() }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self { name: name.into(), notes: vec![reason.into()], skipped: true, ..Default::default() }
    }

    pub fn measure(&mut self, label: impl Into<String>, value: Measured, tolerance: Tolerance) -> &mut Self {
        self.measured.push(Measurement { label: label.into(), value, tolerance });
        self
    }

    pub fn float(&mut self, label: impl Into<String>, x: f64, tolerance: Tolerance) -> &mut Self {
        self.measure(label, Measured::Float(x), tolerance)
    }

    pub fn exact(&mut self, label: impl Into<String>, x: Rational, tolerance: Tolerance) -> &mut Self {
        self.measure(label, Measured::Exact(x), tolerance)
    }

    pub fn flag(&mut self, label: impl Into<String>, b: bool) -> &mut Self {
        self.measure(label, Measured::Flag(b), Tolerance::True)
    }

    pub fn note(&mut self, s: impl Into<String>) -> &mut Self {
        self.notes.push(s.into());
        self
    }

    pub fn pass(&self) -> bool {
        self.measured.iter().all(Measurement::ok) && self.members.iter().all(Verdict::pass)
    }

    /// First failing measurement, for one-line reports.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(m) = self.measured.iter().find(|m| !m.ok()) {
            return Some(format!("{} = {} (want {})", m.label, m.value.to_json(), m.tolerance.describe()));
        }
        self.members.iter().find_map(|v| v.first_failure().map(|f| format!("{}: {f}", v.name)))
    }

    pub fn to_json(&self) -> Value {
        let measured: Vec<Value> = self
            .measured
            .iter()
            .map(|m| json!({"label": m.label, "value": m.value.to_json(), "tolerance": m.tolerance.describe(), "ok": m.ok()}))
            .collect();
        let mut v = json!({
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "pass": self.pass(),
            "measured": measured,
            "artifacts": self.artifacts,
        });
        if self.skipped {
            v["skipped"] = json!(true);
        }
        if !self.notes.is_empty() {
            v["notes"] = json!(self.notes);
        }
        if !self.members.is_empty() {
            v["members"] = Value::Array(self.members.iter().map(Verdict::to_json).collect());
        }
        v
    }
}

/// JSON rendering with a trailing newline.
pub fn render<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
