use std::io::Write;

use serde::Serialize;

use crate::contraction::BoundCase;
use crate::error::Result;
use crate::estimators::Estimate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    /// Fails as computed but by less than the combined noise allowance.
    HoldsWithinNoise,
    Violation,
    /// A solver did not converge; no claim either way.
    Invalid,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsWithinNoise => "holds_within_noise",
            Verdict::Violation => "violation",
            Verdict::Invalid => "invalid",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub suite: String,
    pub dim: usize,
    pub k: Option<usize>,
    pub n_points: usize,
    pub radius: f64,
    pub lambda: Option<f64>,
    pub seed: u64,
    pub lhs: Estimate,
    pub rhs: Estimate,
    /// Signed slack of the claim; negative means it failed as computed.
    pub margin: f64,
    /// `z` times the combined standard error.
    pub noise: f64,
    /// Absolute allowance for rounding in exact computations.
    pub tolerance: f64,
    pub verdict: Verdict,
    pub case: Option<BoundCase>,
    pub certified: Option<bool>,
    /// Outside every theorem's hypotheses; recorded but never asserted.
    pub observational: bool,
    pub note: Option<String>,
}

/// Verdict for `lhs ≤ rhs`. Returns `(margin, noise, verdict)`.
pub fn judge_le(lhs: &Estimate, rhs: &Estimate, z: f64, tolerance: f64) -> (f64, f64, Verdict) {
    let margin = rhs.value - lhs.value;
    let noise = z * lhs.std_error.hypot(rhs.std_error);
    let verdict = if margin >= -tolerance {
        Verdict::Holds
    } else if margin >= -(noise + tolerance) {
        Verdict::HoldsWithinNoise
    } else {
        Verdict::Violation
    };
    (margin, noise, verdict)
}

/// Verdict for `lhs = rhs` up to `tolerance` plus noise.
pub fn judge_eq(lhs: &Estimate, rhs: &Estimate, z: f64, tolerance: f64) -> (f64, f64, Verdict) {
    let margin = -(lhs.value - rhs.value).abs();
    let noise = z * lhs.std_error.hypot(rhs.std_error);
    let verdict = if margin >= -tolerance {
        Verdict::Holds
    } else if margin >= -(noise + tolerance) {
        Verdict::HoldsWithinNoise
    } else {
        Verdict::Violation
    };
    (margin, noise, verdict)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub records: usize,
    pub holds: usize,
    pub holds_within_noise: usize,
    pub violations: usize,
    pub invalid: usize,
    pub observational: usize,
    /// Violations in observational rows; never a failure.
    pub observational_violations: usize,
}

impl Summary {
    pub fn of(records: &[TrialRecord]) -> Self {
        let mut s = Summary {
            records: records.len(),
            ..Summary::default()
        };
        for r in records {
            if r.observational {
                s.observational += 1;
                if r.verdict == Verdict::Violation {
                    s.observational_violations += 1;
                }
                continue;
            }
            match r.verdict {
                Verdict::Holds => s.holds += 1,
                Verdict::HoldsWithinNoise => s.holds_within_noise += 1,
                Verdict::Violation => s.violations += 1,
                Verdict::Invalid => s.invalid += 1,
            }
        }
        s
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

const CSV_HEADER: [&str; 20] = [
    "trial",
    "suite",
    "dim",
    "k",
    "n_points",
    "radius",
    "lambda",
    "seed",
    "lhs",
    "lhs_std_error",
    "rhs",
    "rhs_std_error",
    "margin",
    "noise",
    "tolerance",
    "verdict",
    "case",
    "certified",
    "observational",
    "note",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

pub fn write_records_csv<W: Write>(records: &[TrialRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.trial.to_string(),
            r.suite.clone(),
            r.dim.to_string(),
            opt(&r.k),
            r.n_points.to_string(),
            format!("{:?}", r.radius),
            r.lambda.map(|l| format!("{l:?}")).unwrap_or_default(),
            r.seed.to_string(),
            format!("{:?}", r.lhs.value),
            format!("{:?}", r.lhs.std_error),
            format!("{:?}", r.rhs.value),
            format!("{:?}", r.rhs.std_error),
            format!("{:?}", r.margin),
            format!("{:?}", r.noise),
            format!("{:?}", r.tolerance),
            r.verdict.as_str().to_string(),
            r.case.map(|c| c.as_str().to_string()).unwrap_or_default(),
            opt(&r.certified),
            r.observational.to_string(),
            r.note.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_records_json<W: Write>(records: &[TrialRecord], mut writer: W) -> Result<()> {
    serde_json::to_writer_pretty(
        &mut writer,
        &serde_json::json!({
            "summary": Summary::of(records),
            "records": records,
        }),
    )?;
    writeln!(writer)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::Method;

    fn est(value: f64, se: f64) -> Estimate {
        Estimate {
            std_error: se,
            ..Estimate::exact(value, Method::MonteCarloVolume)
        }
    }

    #[test]
    fn le_verdicts() {
        assert_eq!(judge_le(&est(1.0, 0.0), &est(1.0, 0.0), 3.0, 0.0).2, Verdict::Holds);
        assert_eq!(
            judge_le(&est(1.1, 0.03), &est(1.0, 0.03), 3.0, 0.0).2,
            Verdict::HoldsWithinNoise
        );
        assert_eq!(
            judge_le(&est(1.2, 0.02), &est(1.0, 0.02), 3.0, 0.0).2,
            Verdict::Violation
        );
        assert_eq!(
            judge_le(&est(1.0 + 1e-12, 0.0), &est(1.0, 0.0), 3.0, 1e-9).2,
            Verdict::Holds
        );
    }

    #[test]
    fn eq_verdicts() {
        assert_eq!(
            judge_eq(&est(2.0, 0.0), &est(2.0 + 1e-8, 0.0), 3.0, 1e-7).2,
            Verdict::Holds
        );
        assert_eq!(
            judge_eq(&est(2.0, 0.0), &est(2.1, 0.0), 3.0, 1e-7).2,
            Verdict::Violation
        );
    }
}
