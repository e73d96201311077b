//! Serializable verification reports.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportPoint {
    pub y: Vec<f64>,
    /// `[re, im]`
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub abs_diff: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub beta: Option<f64>,
    pub subject: String,
    /// Class label for the `β = 1` instances (`s-selfdecomposable`).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub class: Option<String>,
    pub grid_max_abs: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub outcome: Outcome,
    pub points: Vec<ReportPoint>,
    #[serde(default)]
    pub notes: Vec<String>,
}

fn pair<T: Scalar>(z: Complex<T>) -> [f64; 2] {
    [z.re.as_f64(), z.im.as_f64()]
}

impl VerificationReport {
    pub fn new(identity: &str, beta: Option<f64>, subject: &str, tolerance: f64) -> Self {
        let class = match beta {
            Some(b) if b == 1.0 && identity != "cor5" => Some("s-selfdecomposable".to_string()),
            _ => None,
        };
        Self {
            identity: identity.to_string(),
            beta,
            subject: subject.to_string(),
            class,
            grid_max_abs: 0.0,
            tolerance,
            pass: true,
            outcome: Outcome::Pass,
            points: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Pointwise comparison of two complex-valued functions on `grid`.
    /// Evaluation failures are recorded as a failed report, not returned.
    pub fn compare<T, L, R>(
        identity: &str,
        beta: Option<f64>,
        subject: &str,
        tolerance: f64,
        grid: &[Vec<T>],
        mut lhs: L,
        mut rhs: R,
    ) -> Self
    where
        T: Scalar,
        L: FnMut(&[T]) -> Result<Complex<T>>,
        R: FnMut(&[T]) -> Result<Complex<T>>,
    {
        let mut report = Self::new(identity, beta, subject, tolerance);
        for y in grid {
            match (lhs(y), rhs(y)) {
                (Ok(l), Ok(r)) => report.push(y.iter().map(|v| v.as_f64()).collect(), pair(l), pair(r), None),
                (Err(e), _) | (_, Err(e)) => {
                    report.fail(format!("evaluation failed at y={:?}: {e}", y.iter().map(|v| v.as_f64()).collect::<Vec<_>>()))
                }
            }
        }
        report.finish();
        report
    }

    pub fn push(&mut self, y: Vec<f64>, lhs: [f64; 2], rhs: [f64; 2], z: Option<f64>) {
        let abs_diff = ((lhs[0] - rhs[0]).powi(2) + (lhs[1] - rhs[1]).powi(2)).sqrt();
        self.points.push(ReportPoint { y, lhs, rhs, abs_diff, z });
    }

    pub fn fail(&mut self, note: String) {
        self.notes.push(note);
        self.pass = false;
        self.outcome = Outcome::Fail;
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn mark_inconclusive(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
        self.pass = false;
        if self.outcome == Outcome::Pass {
            self.outcome = Outcome::Inconclusive;
        }
    }

    /// Recomputes `grid_max_abs` and applies the tolerance.
    pub fn finish(&mut self) {
        self.grid_max_abs = self
            .points
            .iter()
            .map(|p| p.abs_diff)
            .fold(0.0, |a: f64, b| if b.is_nan() { f64::INFINITY } else { a.max(b) });
        if self.grid_max_abs >= self.tolerance && self.outcome == Outcome::Pass {
            self.pass = false;
            self.outcome = Outcome::Fail;
        }
    }

    /// Merges `other` into a combined report: points and notes are
    /// concatenated, pass requires both.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.grid_max_abs = self.grid_max_abs.max(other.grid_max_abs);
        self.points.extend(other.points);
        self.notes
            .extend(other.notes.into_iter().map(|n| format!("[{}] {n}", other.identity)));
        if !other.pass {
            self.pass = false;
        }
        self.outcome = match (self.outcome, other.outcome) {
            (Outcome::Fail, _) | (_, Outcome::Fail) => Outcome::Fail,
            (Outcome::Inconclusive, _) | (_, Outcome::Inconclusive) => Outcome::Inconclusive,
            _ => Outcome::Pass,
        };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
