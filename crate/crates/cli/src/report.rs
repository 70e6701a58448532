//! Verification report types and their deterministic JSON form.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};

pub const SUITE_VERSION: &str = "1.0.0";

/// One checked identity at one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub identity_name: String,
    pub params: BTreeMap<String, f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub terms_used: u64,
    pub nodes_used: u64,
}

/// An identity that could not be checked at the configured parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub identity_name: String,
    pub params: BTreeMap<String, f64>,
    pub reason: String,
    /// The skip came from a pole lattice rather than a region or domain check.
    #[serde(skip)]
    pub pole: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite_version: String,
    pub entries: Vec<Entry>,
    pub skipped: Vec<Skipped>,
    pub overall_passed: bool,
    /// Errors that turned entries into failures; printed, not serialized.
    #[serde(skip)]
    pub errors: Vec<String>,
}

fn params_key(p: &BTreeMap<String, f64>) -> Vec<(&str, f64)> {
    p.iter().map(|(k, v)| (k.as_str(), *v)).collect()
}

fn cmp_params(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> std::cmp::Ordering {
    let (a, b) = (params_key(a), params_key(b));
    for ((ka, va), (kb, vb)) in a.iter().zip(&b) {
        let o = ka.cmp(kb).then(va.total_cmp(vb));
        if o.is_ne() {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

impl VerificationReport {
    /// Sorts by identity name, then params, and sets the overall flag.
    pub fn new(mut entries: Vec<Entry>, mut skipped: Vec<Skipped>, errors: Vec<String>) -> Self {
        entries.sort_by(|a, b| a.identity_name.cmp(&b.identity_name).then_with(|| cmp_params(&a.params, &b.params)));
        skipped.sort_by(|a, b| a.identity_name.cmp(&b.identity_name).then_with(|| cmp_params(&a.params, &b.params)));
        let overall_passed = entries.iter().all(|e| e.passed);
        VerificationReport { suite_version: SUITE_VERSION.to_string(), entries, skipped, overall_passed, errors }
    }

    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits);
        self.serialize(&mut ser).expect("report serializes");
        out.push(b'\n');
        String::from_utf8(out).expect("JSON is UTF-8")
    }
}

/// Compact JSON with every float written to 17 significant digits.
struct SignificantDigits;

impl Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        CompactFormatter.write_f32(writer, value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(name: &str, theta: f64, passed: bool) -> Entry {
        Entry {
            identity_name: name.into(),
            params: [("theta".to_string(), theta)].into_iter().collect(),
            residual: 1.0 / 3.0,
            tolerance: 1e-10,
            passed,
            terms_used: 7,
            nodes_used: 0,
        }
    }

    #[test]
    fn sorted_and_conjunction() {
        let r = VerificationReport::new(vec![entry("b", 1.0, true), entry("a", 2.0, false), entry("a", 0.4, true)], vec![], vec![]);
        let names: Vec<_> = r.entries.iter().map(|e| (e.identity_name.as_str(), e.params["theta"])).collect();
        assert_eq!(names, [("a", 0.4), ("a", 2.0), ("b", 1.0)]);
        assert!(!r.overall_passed);
    }

    #[test]
    fn seventeen_digits() {
        let json = VerificationReport::new(vec![entry("a", 0.4, true)], vec![], vec![]).to_json();
        assert!(json.contains("\"residual\":3.3333333333333331e-1"), "{json}");
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["entries"][0]["residual"].as_f64().unwrap(), 1.0 / 3.0);
        assert!(v.get("errors").is_none());
    }
}
