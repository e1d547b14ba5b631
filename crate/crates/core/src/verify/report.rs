use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// Where a residual was attained. Fields that do not apply to a given check
/// are left out of the serialized record.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_fn: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<String>,
    pub value: f64,
}

/// Minimum over everything but `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KRow {
    pub k: f64,
    pub min_residual: f64,
    pub witness: Witness,
}

/// Per-time-level value of a boundary check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub t: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub check: String,
    pub min_residual: f64,
    pub arg_min: Witness,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub per_k: Vec<KRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_level: Vec<LevelRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Flat summary written to `report.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub check: String,
    pub instance_hash: String,
    pub min_residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn record(&self, instance_hash: &str) -> Record {
        Record {
            check: self.check.clone(),
            instance_hash: instance_hash.to_string(),
            min_residual: self.min_residual,
            tolerance: self.tolerance,
            verdict: self.verdict,
            witnesses: vec![self.arg_min.clone()],
            warnings: self.warnings.clone(),
        }
    }
}

/// Splits per-level violations into failures and warnings. A violation at a
/// single time level whose neighbours are clean is tolerated as long as such
/// levels stay rare (at most one in fifty, and at least one is allowed).
pub(crate) fn classify_levels(violating: &[bool], times: &[f64]) -> (bool, Vec<String>) {
    let n = violating.len();
    let mut isolated = Vec::new();
    let mut clustered = false;
    for i in 0..n {
        if !violating[i] {
            continue;
        }
        let left = i > 0 && violating[i - 1];
        let right = i + 1 < n && violating[i + 1];
        if left || right {
            clustered = true;
        } else {
            isolated.push(i);
        }
    }
    let allowed = (n / 50).max(1);
    let ok = !clustered && isolated.len() <= allowed;
    let warnings = if ok {
        isolated
            .iter()
            .map(|&i| format!("isolated violation at t = {}", times[i]))
            .collect()
    } else {
        Vec::new()
    };
    (ok, warnings)
}
