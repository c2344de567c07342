use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outcome of one statistical or numerical check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub name: String,
    #[serde(with = "real")]
    pub statistic: f64,
    /// Present for hypothesis tests.
    #[serde(with = "real_opt")]
    pub p_value: Option<f64>,
    /// Signed distance to the threshold; positive means pass.
    #[serde(with = "real_opt")]
    pub margin: Option<f64>,
    #[serde(with = "real")]
    pub threshold: f64,
    pub pass: bool,
    pub config: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Informational checks do not affect the suite verdict.
    #[serde(default = "required_default")]
    pub required: bool,
}

fn required_default() -> bool {
    true
}

/// JSON has no infinities or NaN; those are written as the strings
/// `"inf"`, `"-inf"` and `"NaN"`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Real {
    Number(f64),
    Text(String),
}

impl Real {
    fn wrap(x: f64) -> Self {
        if x.is_finite() {
            Real::Number(x)
        } else {
            Real::Text(x.to_string())
        }
    }

    fn unwrap<E: serde::de::Error>(self) -> std::result::Result<f64, E> {
        match self {
            Real::Number(x) => Ok(x),
            Real::Text(t) => t.parse().map_err(|_| E::custom(format!("not a number: {t}"))),
        }
    }
}

mod real {
    use super::Real;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        Real::wrap(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Real::deserialize(d)?.unwrap()
    }
}

mod real_opt {
    use super::Real;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        x.map(Real::wrap).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<Real>::deserialize(d)?.map(Real::unwrap).transpose()
    }
}

impl TestReport {
    /// Passes when `statistic <= threshold`.
    pub fn upper_bound(name: impl Into<String>, statistic: f64, threshold: f64, config: serde_json::Value) -> Self {
        let pass = statistic <= threshold;
        TestReport {
            name: name.into(),
            statistic,
            p_value: None,
            margin: Some(threshold - statistic),
            threshold,
            pass,
            config,
            note: None,
            required: true,
        }
    }

    /// Passes when `p_value > threshold`.
    pub fn hypothesis(
        name: impl Into<String>,
        statistic: f64,
        p_value: f64,
        threshold: f64,
        config: serde_json::Value,
    ) -> Self {
        TestReport {
            name: name.into(),
            statistic,
            p_value: Some(p_value),
            margin: Some(p_value - threshold),
            threshold,
            pass: p_value > threshold,
            config,
            note: None,
            required: true,
        }
    }

    pub fn informational(mut self) -> Self {
        self.required = false;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// `[PASS] name: details` line.
    pub fn summary(&self) -> String {
        let tag = match (self.pass, self.required) {
            (true, _) => "[PASS]",
            (false, true) => "[FAIL]",
            (false, false) => "[INFO]",
        };
        let mut s = format!("{tag} {}: statistic {:.6e}, threshold {:.3e}", self.name, self.statistic, self.threshold);
        if let Some(p) = self.p_value {
            s.push_str(&format!(", p {p:.4e}"));
        }
        if let Some(n) = &self.note {
            s.push_str(&format!(" ({n})"));
        }
        s
    }
}

/// Writes reports as a JSON array.
pub fn save_reports(path: &Path, reports: &[TestReport]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let text = serde_json::to_string_pretty(reports)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_reports(path: &Path) -> Result<Vec<TestReport>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_follows_threshold() {
        let a = TestReport::upper_bound("a", 1e-9, 1e-8, serde_json::json!({}));
        assert!(a.pass && a.margin.unwrap() > 0.0);
        let b = TestReport::hypothesis("b", 0.1, 1e-4, 1e-3, serde_json::Value::Null);
        assert!(!b.pass);
        assert!(b.summary().starts_with("[FAIL] b"));
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out/reports.json");
        let r = vec![TestReport::upper_bound("x", 0.5, 1.0, serde_json::json!({"n": 3})).with_note("ok")];
        save_reports(&path, &r).unwrap();
        assert_eq!(load_reports(&path).unwrap(), r);
    }

    #[test]
    fn non_finite_statistics_survive_json() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("reports.json");
        let r = vec![TestReport::upper_bound("x", f64::INFINITY, 1e-8, serde_json::json!({}))];
        save_reports(&path, &r).unwrap();
        let back = load_reports(&path).unwrap();
        assert_eq!(back[0].statistic, f64::INFINITY);
        assert_eq!(back[0].margin, Some(f64::NEG_INFINITY));
        assert!(!back[0].pass);
    }
}
