use std::fmt::Write as _;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::exactmath::{decimal_string, working_bits, ExactScalar};
use crate::experiments::{ConvergenceReport, LambdaSeries, SweepRecord};

pub const CSV_HEADER: &str =
    "g,n,lambda,ratio_exact,ratio_exact_log2,prediction_log2,normalized_ratio,f_lambda,epsilon";

/// A [`SweepRecord`] with every number rendered as a string: rationals as
/// `p/q`, reals with exactly `precision_digits` significant digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRow {
    pub g: String,
    pub n: String,
    pub lambda: String,
    pub lambda_requested: String,
    pub ratio_exact: String,
    pub ratio_exact_log2: String,
    pub prediction_log2: String,
    pub normalized_ratio: String,
    pub f_lambda: String,
    pub epsilon: String,
    pub hypothesis_violated: bool,
}

impl OutputRow {
    pub fn from_record(r: &SweepRecord) -> Self {
        let d = r.precision_digits;
        OutputRow {
            g: r.g.to_string(),
            n: r.n.to_string(),
            lambda: r.lambda_actual.to_fraction_string(),
            lambda_requested: r.lambda_requested.to_fraction_string(),
            ratio_exact: r.ratio_exact.to_fraction_string(),
            ratio_exact_log2: decimal_string(&r.ratio_exact_log2, d),
            prediction_log2: decimal_string(&r.prediction_log2, d),
            normalized_ratio: decimal_string(&r.normalized_ratio, d),
            f_lambda: decimal_string(&r.f_value, d),
            epsilon: decimal_string(&r.epsilon, d),
            hypothesis_violated: r.hypothesis_violated,
        }
    }

    pub fn csv_line(&self) -> String {
        [
            &self.g,
            &self.n,
            &self.lambda,
            &self.ratio_exact,
            &self.ratio_exact_log2,
            &self.prediction_log2,
            &self.normalized_ratio,
            &self.f_lambda,
            &self.epsilon,
        ]
        .map(String::as_str)
        .join(",")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub g: String,
    pub abs_epsilon: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesOutput {
    pub lambda: String,
    pub analyzable: bool,
    pub monotone: bool,
    pub non_strict_steps: String,
    pub decay_ratio: Option<String>,
    pub points: Vec<SeriesPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOutput {
    pub uniformity_gap: String,
    pub series: Vec<SeriesOutput>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub precision_digits: String,
    pub records: Vec<OutputRow>,
    pub analysis: AnalysisOutput,
}

fn short_f64(x: f64) -> String {
    format!("{x:e}")
}

fn series_output(s: &LambdaSeries) -> SeriesOutput {
    SeriesOutput {
        lambda: s.lambda.to_fraction_string(),
        analyzable: s.analyzable,
        monotone: s.monotone,
        non_strict_steps: s.non_strict_steps.to_string(),
        decay_ratio: s.decay_ratio.map(short_f64),
        points: s
            .points
            .iter()
            .map(|&(g, e)| SeriesPoint {
                g: g.to_string(),
                abs_epsilon: short_f64(e),
            })
            .collect(),
    }
}

pub fn analysis_output(report: &ConvergenceReport) -> AnalysisOutput {
    AnalysisOutput {
        uniformity_gap: short_f64(report.uniformity_gap),
        series: report.series.iter().map(series_output).collect(),
    }
}

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::with_capacity(128 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&OutputRow::from_record(r).csv_line());
        out.push('\n');
    }
    out
}

pub fn sweep_json(records: &[SweepRecord], report: &ConvergenceReport, precision_digits: u32) -> String {
    let doc = SweepDocument {
        precision_digits: precision_digits.to_string(),
        records: records.iter().map(OutputRow::from_record).collect(),
        analysis: analysis_output(report),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("string-only document");
    out.push('\n');
    out
}

pub fn sweep_text(records: &[SweepRecord], report: &ConvergenceReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>6} {:>7} {:>10} {:>40}  epsilon", "g", "n", "lambda", "ratio_exact_log2");
    for r in records {
        let row = OutputRow::from_record(r);
        let _ = writeln!(
            out,
            "{:>6} {:>7} {:>10} {:>40}  {}",
            row.g, row.n, row.lambda, row.ratio_exact_log2, row.epsilon
        );
    }
    out.push('\n');
    for s in &report.series {
        let decay = s.decay_ratio.map_or_else(|| "n/a".to_string(), short_f64);
        let status = if !s.analyzable {
            "unanalyzable"
        } else if s.monotone {
            "monotone"
        } else {
            "not monotone"
        };
        let _ = writeln!(
            out,
            "lambda {}: {status}, non-strict steps {}, decay ratio {decay}",
            s.lambda, s.non_strict_steps
        );
    }
    let _ = writeln!(out, "uniformity gap {}", short_f64(report.uniformity_gap));
    out
}

/// Single-cell report for the `ratio` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioOutput {
    #[serde(flatten)]
    pub row: OutputRow,
    pub prediction: String,
    pub warning: Option<String>,
}

pub fn hypothesis_warning(r: &SweepRecord) -> Option<String> {
    r.hypothesis_violated.then(|| {
        format!(
            "warning: (g, n) = ({}, {}) lies outside the hypothesis 2g + n > 3, (g, n) != (2, 0) \
             under which frequencies and volume contributions differ by an explicit factor; \
             values are computed anyway",
            r.g, r.n
        )
    })
}

pub fn ratio_output(r: &SweepRecord) -> RatioOutput {
    let bits = working_bits(r.precision_digits);
    let prediction = Float::with_val(bits, r.prediction_log2.exp2_ref());
    RatioOutput {
        row: OutputRow::from_record(r),
        prediction: decimal_string(&prediction, r.precision_digits),
        warning: hypothesis_warning(r),
    }
}

pub fn ratio_text(out: &RatioOutput) -> String {
    let row = &out.row;
    let mut s = String::new();
    for (key, value) in [
        ("g", &row.g),
        ("n", &row.n),
        ("lambda", &row.lambda),
        ("ratio_exact", &row.ratio_exact),
        ("ratio_exact_log2", &row.ratio_exact_log2),
        ("prediction", &out.prediction),
        ("prediction_log2", &row.prediction_log2),
        ("normalized_ratio", &row.normalized_ratio),
        ("f_lambda", &row.f_lambda),
        ("epsilon", &row.epsilon),
    ] {
        let _ = writeln!(s, "{key:<20}{value}");
    }
    let _ = writeln!(s, "{:<20}{}", "hypothesis_violated", row.hypothesis_violated);
    s
}

pub fn ratio_csv(out: &RatioOutput) -> String {
    format!("{CSV_HEADER}\n{}\n", out.row.csv_line())
}

pub fn ratio_json(out: &RatioOutput) -> String {
    let mut s = serde_json::to_string_pretty(out).expect("string-only document");
    s.push('\n');
    s
}

/// Parses the rational columns of a row back to exact values.
pub fn parse_rationals(row: &OutputRow) -> crate::Result<(ExactScalar, ExactScalar, ExactScalar)> {
    Ok((
        row.lambda.parse()?,
        row.lambda_requested.parse()?,
        row.ratio_exact.parse()?,
    ))
}
