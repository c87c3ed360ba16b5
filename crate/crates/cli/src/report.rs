//! JSON reports.

use std::io;

use serde::Serialize;
use serde_json::{Map, Value};
use skewcurv::linalg4::{Mat4, Tensor4, Vec4};
use skewcurv::suite::{Bound, Check};

#[derive(Debug, Serialize)]
pub struct CheckOut {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    /// `"<"` when the residual must stay below the tolerance, `">"` when it
    /// must exceed it.
    pub bound: &'static str,
    pub pass: bool,
}

impl From<&Check> for CheckOut {
    fn from(c: &Check) -> Self {
        CheckOut {
            name: c.name.clone(),
            residual: c.residual,
            tolerance: c.tolerance,
            bound: match c.bound {
                Bound::Below => "<",
                Bound::Above => ">",
            },
            pass: c.pass,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Skipped {
    pub name: String,
    pub reason: String,
}

#[derive(Debug, Serialize)]
pub struct Metadata {
    pub command: &'static str,
    pub manifold: Option<String>,
    pub seed: Option<u64>,
    pub point: [f64; 4],
    pub tool_version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub pass: bool,
    pub checks: Vec<CheckOut>,
    pub skipped: Vec<Skipped>,
    pub quantities: Map<String, Value>,
    pub metadata: Metadata,
}

impl Report {
    pub fn new(command: &'static str, point: [f64; 4]) -> Self {
        Report {
            pass: true,
            checks: Vec::new(),
            skipped: Vec::new(),
            quantities: Map::new(),
            metadata: Metadata {
                command,
                manifold: None,
                seed: None,
                point,
                tool_version: env!("CARGO_PKG_VERSION"),
            },
        }
    }

    pub fn check(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(CheckOut::from(&c));
    }

    pub fn skip(&mut self, name: impl Into<String>, reason: impl ToString) {
        self.skipped.push(Skipped { name: name.into(), reason: reason.to_string() });
    }

    pub fn put(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.quantities.insert(key.to_string(), v);
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

pub fn mat(m: &Mat4) -> Vec<Vec<f64>> {
    m.0.iter().map(|r| r.to_vec()).collect()
}

pub fn vec4(v: &Vec4) -> [f64; 4] {
    v.0
}

/// Independent components `R_ijkh` (1-based label) with `|R| > threshold`,
/// one per symmetry class: `i < j`, `k < h`, `(i, j) <= (k, h)`.
pub fn nonzero_components(r: &Tensor4, threshold: f64) -> Map<String, Value> {
    let mut out = Map::new();
    for i in 0..4 {
        for j in i + 1..4 {
            for k in 0..4 {
                for h in k + 1..4 {
                    if (i, j) > (k, h) {
                        continue;
                    }
                    let v = r.get(i, j, k, h);
                    if v.abs() > threshold {
                        out.insert(format!("R{}{}{}{}", i + 1, j + 1, k + 1, h + 1), Value::from(v));
                    }
                }
            }
        }
    }
    out
}

/// Writes every float with 17 significant digits.
struct Precise;

impl serde_json::ser::Formatter for Precise {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Pretty JSON with full-precision floats; non-finite values become `null`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise);
    value.serialize(&mut ser).expect("report serialization");
    String::from_utf8(buf).expect("utf-8 JSON")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        let vals = [0.1, -12.0, 1.0 / 3.0, 6.02e23, 5e-324, 0.0];
        let text = to_json(&vals.to_vec());
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, vals);
        assert!(text.contains("-1.2000000000000000e1"));
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(to_json(&vec![f64::NAN, f64::INFINITY]), "[null,null]");
    }

    #[test]
    fn lists_one_component_per_class() {
        let mut t = Tensor4::zero();
        t.set_curvature(0, 1, 0, 1, 1.0);
        t.set_curvature(0, 2, 1, 3, -2.0);
        let m = nonzero_components(&t, 1e-12);
        assert_eq!(m.len(), 2);
        assert_eq!(m["R1212"], 1.0);
        assert_eq!(m["R1324"], -2.0);
    }
}
