use std::io::Write;

use serde::Serialize;

use super::ExperimentSpec;
use crate::contraction::{classify_instance, threshold_n, BoundCase, ThresholdMode, SAUSAGE_MIN_DIM};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub d: usize,
    pub mode: &'static str,
    pub value: f64,
    pub minimal_n: f64,
    pub applicable: bool,
    /// `value / main_i(d)`.
    pub ratio_to_main_i: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageRow {
    pub d: usize,
    pub lambda_over_r: f64,
    pub n: u64,
    pub case: BoundCase,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSweep {
    pub thresholds: Vec<ThresholdRow>,
    pub coverage: Vec<CoverageRow>,
}

/// `λ/r` grid of the coverage map: `0.05, 0.10, …, 2.00`.
pub const COVERAGE_STEPS: usize = 40;

/// Thresholds for every mode in each dimension, and which case fires at
/// the main threshold across a `λ/r` grid. Packing modes use the spec's
/// radius and `λ` (default `λ = r`).
pub fn run_threshold_sweep(spec: &ExperimentSpec) -> Result<ThresholdSweep> {
    spec.validate()?;
    let r = spec.radius;
    let lambda = spec.lambda.unwrap_or(r);
    let mut thresholds = Vec::new();
    let mut coverage = Vec::new();
    for &d in &spec.dims {
        let main_i = threshold_n(d, ThresholdMode::MainI)?.value;
        for mode in [
            ThresholdMode::MainI,
            ThresholdMode::MainIi,
            ThresholdMode::Packing { r, lambda },
            ThresholdMode::JungB,
            ThresholdMode::RefinedA { r, lambda },
            ThresholdMode::RefinedB,
        ] {
            let t = threshold_n(d, mode)?;
            thresholds.push(ThresholdRow {
                d,
                mode: mode.name(),
                value: t.value,
                minimal_n: t.minimal_n,
                applicable: t.applicable,
                ratio_to_main_i: t.value / main_i,
            });
        }
        let main = if d >= SAUSAGE_MIN_DIM {
            ThresholdMode::MainIi
        } else {
            ThresholdMode::MainI
        };
        let n = threshold_n(d, main)?.minimal_n;
        if n > u64::MAX as f64 {
            continue;
        }
        for step in 1..=COVERAGE_STEPS {
            let ratio = step as f64 * 0.05;
            coverage.push(CoverageRow {
                d,
                lambda_over_r: ratio,
                n: n as u64,
                case: classify_instance(d, n as u64, ratio * r, r)?,
            });
        }
    }
    Ok(ThresholdSweep { thresholds, coverage })
}

impl ThresholdSweep {
    pub fn write_thresholds_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["d", "mode", "value", "minimal_n", "applicable", "ratio_to_main_i"])?;
        for t in &self.thresholds {
            w.write_record([
                t.d.to_string(),
                t.mode.to_string(),
                format!("{:?}", t.value),
                if t.applicable {
                    format!("{}", t.minimal_n)
                } else {
                    "n/a".into()
                },
                t.applicable.to_string(),
                format!("{:?}", t.ratio_to_main_i),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_coverage_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["d", "lambda_over_r", "n", "case"])?;
        for c in &self.coverage {
            w.write_record([
                c.d.to_string(),
                format!("{:.2}", c.lambda_over_r),
                c.n.to_string(),
                c.case.as_str().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
