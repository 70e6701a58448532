//! Flat `key = value` configuration shared by every subcommand.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use qultra::qcore::SpectralPoint;
use qultra::{Error, QBase, Result, TruncationPolicy};

pub type ConfigMap = BTreeMap<String, String>;

/// Every key the suite understands. Anything else is a configuration error.
pub const KNOWN_KEYS: &[&str] = &[
    "q",
    "beta",
    "gamma",
    "t",
    "t_im",
    "theta",
    "z_re",
    "z_im",
    "x",
    "n",
    "m",
    "t1",
    "t2",
    "rel_tol",
    "abs_tol",
    "max_terms",
    "tail_window",
    "quad_tol",
    "seed",
    "random_points",
    "transform_points",
    "dq_beta",
];

/// Parses `key = value` lines; `#` starts a comment, blank lines are ignored.
pub fn parse_config_text(text: &str) -> Result<ConfigMap> {
    let mut map = ConfigMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value, got '{raw}'", i + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(Error::Config(format!("line {}: empty key or value", i + 1)));
        }
        map.insert(key.to_string(), value.to_string());
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<ConfigMap> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// A sample point together with the coordinates reported for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub point: SpectralPoint,
    pub label: PointLabel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointLabel {
    Theta(f64),
    Z(f64, f64),
    X(f64),
}

impl SamplePoint {
    pub fn theta(theta: f64) -> Self {
        SamplePoint { point: SpectralPoint::from_theta(theta), label: PointLabel::Theta(theta) }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match self.label {
            PointLabel::Theta(t) => vec![("theta", t)],
            PointLabel::Z(re, im) => vec![("z_re", re), ("z_im", im)],
            PointLabel::X(x) => vec![("x", x)],
        }
    }
}

/// Validated suite parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub q: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Generating-function variable `t + i t_im`.
    pub t: f64,
    pub t_im: f64,
    pub points: Vec<SamplePoint>,
    /// Restricts index sweeps to a single `n` (and `m` where two indices occur).
    pub n: Option<i64>,
    pub m: Option<i64>,
    pub t1: f64,
    pub t2: f64,
    pub policy: TruncationPolicy,
    pub quad_tol: f64,
    pub seed: u64,
    pub random_points: usize,
    pub transform_points: usize,
    /// `β` used for the bilateral `D_q` check, whose shifted points need `β > 1`.
    pub dq_beta: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            q: 0.3,
            beta: 0.8,
            gamma: 0.7,
            t: 0.6,
            t_im: 0.0,
            points: [0.4, 1.0, 2.2].into_iter().map(SamplePoint::theta).collect(),
            n: None,
            m: None,
            t1: 0.4,
            t2: -0.25,
            policy: TruncationPolicy::default(),
            quad_tol: 1e-12,
            seed: 20240611,
            random_points: 20,
            transform_points: 10,
            dq_beta: 1.25,
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.parse().map_err(|_| Error::Config(format!("{key}: '{v}' is not a number")))?;
    if !x.is_finite() {
        return Err(Error::Config(format!("{key}: '{v}' is not finite")));
    }
    Ok(x)
}

fn parse_int<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("{key}: '{v}' is not an integer")))
}

fn positive(key: &str, x: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(x)
    } else {
        Err(Error::Config(format!("{key} must be positive, got {x}")))
    }
}

impl SuiteConfig {
    pub fn from_map(map: &ConfigMap) -> Result<Self> {
        if let Some(bad) = map.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown key '{bad}'")));
        }
        let mut c = SuiteConfig::default();
        let get = |k: &str| map.get(k).map(String::as_str);
        if let Some(v) = get("q") {
            c.q = parse_f64("q", v)?;
        }
        if let Some(v) = get("beta") {
            c.beta = parse_f64("beta", v)?;
        }
        if let Some(v) = get("gamma") {
            c.gamma = parse_f64("gamma", v)?;
        }
        if let Some(v) = get("t") {
            c.t = parse_f64("t", v)?;
        }
        if let Some(v) = get("t_im") {
            c.t_im = parse_f64("t_im", v)?;
        }
        if let Some(v) = get("t1") {
            c.t1 = parse_f64("t1", v)?;
        }
        if let Some(v) = get("t2") {
            c.t2 = parse_f64("t2", v)?;
        }
        if let Some(v) = get("dq_beta") {
            c.dq_beta = parse_f64("dq_beta", v)?;
        }
        if let Some(v) = get("n") {
            c.n = Some(parse_int("n", v)?);
        }
        if let Some(v) = get("m") {
            c.m = Some(parse_int("m", v)?);
        }
        if let Some(v) = get("seed") {
            c.seed = parse_int("seed", v)?;
        }
        if let Some(v) = get("random_points") {
            c.random_points = parse_int("random_points", v)?;
        }
        if let Some(v) = get("transform_points") {
            c.transform_points = parse_int("transform_points", v)?;
        }

        let mut policy = TruncationPolicy::default();
        if let Some(v) = get("rel_tol") {
            policy.rel_tol = positive("rel_tol", parse_f64("rel_tol", v)?)?;
        }
        if let Some(v) = get("abs_tol") {
            policy.abs_tol = positive("abs_tol", parse_f64("abs_tol", v)?)?;
        }
        if let Some(v) = get("max_terms") {
            policy.max_terms = parse_int("max_terms", v)?;
        }
        if let Some(v) = get("tail_window") {
            policy.tail_window = parse_int("tail_window", v)?;
        }
        policy.validate()?;
        c.policy = policy;
        if let Some(v) = get("quad_tol") {
            c.quad_tol = positive("quad_tol", parse_f64("quad_tol", v)?)?;
        }

        c.points = parse_points(map)?.unwrap_or(c.points);
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        QBase::real(self.q).map_err(|e| Error::Config(format!("q: {e}")))?;
        for (k, v) in [("beta", self.beta), ("gamma", self.gamma), ("dq_beta", self.dq_beta)] {
            if v == 0.0 {
                return Err(Error::Config(format!("{k} must be nonzero")));
            }
        }
        if self.t == 0.0 && self.t_im == 0.0 {
            return Err(Error::Config("t must be nonzero".into()));
        }
        if self.points.is_empty() {
            return Err(Error::Config("no sample points".into()));
        }
        self.policy.validate()?;
        positive("quad_tol", self.quad_tol)?;
        Ok(())
    }

    pub fn base(&self) -> QBase {
        QBase::real(self.q).expect("validated base")
    }
}

/// Reads exactly one of `theta` (comma-separated list), `x`, or `z_re`/`z_im`.
fn parse_points(map: &ConfigMap) -> Result<Option<Vec<SamplePoint>>> {
    let theta = map.get("theta");
    let x = map.get("x");
    let z = map.contains_key("z_re") || map.contains_key("z_im");
    let given = [theta.is_some(), x.is_some(), z].iter().filter(|b| **b).count();
    if given > 1 {
        return Err(Error::Config("give only one of theta, x, or z_re/z_im".into()));
    }
    if let Some(list) = theta {
        let points = list
            .split(',')
            .map(|s| parse_f64("theta", s.trim()).map(SamplePoint::theta))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Some(points));
    }
    if let Some(v) = x {
        let x = parse_f64("x", v)?;
        let point = SpectralPoint::from_x(x).map_err(|e| Error::Config(e.to_string()))?;
        return Ok(Some(vec![SamplePoint { point, label: PointLabel::X(x) }]));
    }
    if z {
        let re = map.get("z_re").map(|v| parse_f64("z_re", v)).transpose()?.unwrap_or(0.0);
        let im = map.get("z_im").map(|v| parse_f64("z_im", v)).transpose()?.unwrap_or(0.0);
        let point = SpectralPoint::new(num_complex::Complex64::new(re, im)).map_err(|e| Error::Config(e.to_string()))?;
        return Ok(Some(vec![SamplePoint { point, label: PointLabel::Z(re, im) }]));
    }
    Ok(None)
}

/// `θ` values for `n` evenly spaced interior points of `(0, π)`.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|j| PI * j as f64 / (n + 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blanks() {
        let m = parse_config_text("# header\nq = 0.4  # base\n\nbeta=0.5\n").unwrap();
        assert_eq!(m.get("q").unwrap(), "0.4");
        assert_eq!(m.get("beta").unwrap(), "0.5");
        assert!(parse_config_text("q 0.4").is_err());
    }

    #[test]
    fn zero_tolerance_is_rejected() {
        let mut m = ConfigMap::new();
        m.insert("rel_tol".into(), "0".into());
        assert!(matches!(SuiteConfig::from_map(&m), Err(Error::Config(_))));
        let mut m = ConfigMap::new();
        m.insert("quad_tol".into(), "0".into());
        assert!(matches!(SuiteConfig::from_map(&m), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_key_and_bad_values() {
        let mut m = ConfigMap::new();
        m.insert("qq".into(), "0.3".into());
        assert!(SuiteConfig::from_map(&m).is_err());
        let mut m = ConfigMap::new();
        m.insert("q".into(), "1.5".into());
        assert!(SuiteConfig::from_map(&m).is_err());
        let mut m = ConfigMap::new();
        m.insert("theta".into(), "0.4, 1.0".into());
        m.insert("x".into(), "0.3".into());
        assert!(SuiteConfig::from_map(&m).is_err());
    }

    #[test]
    fn point_lists() {
        let mut m = ConfigMap::new();
        m.insert("theta".into(), "0.4, 1.0".into());
        assert_eq!(SuiteConfig::from_map(&m).unwrap().points.len(), 2);
        let mut m = ConfigMap::new();
        m.insert("x".into(), "1.5".into());
        let c = SuiteConfig::from_map(&m).unwrap();
        assert!((c.points[0].point.x().re - 1.5).abs() < 1e-15);
    }
}
