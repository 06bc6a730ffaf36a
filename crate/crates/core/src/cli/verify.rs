//! Verification suites behind `geofreq verify`. Each check reports a margin:
//! positive means the check passed with that much room.

use std::fmt;

use crate::asymptotics::{
    algebraic_consistency_check, entropy_quadratic_gap, stirling_binom_approx, tail_bound_check,
};
use crate::error::Result;
use crate::exactmath::{approx_of_exact, binom_int, ExactScalar};
use crate::experiments::{analyze_convergence, run_sweep, ConvergenceReport, SweepSpec};
use crate::volumes::{cyl1_nonsep_main, cyl1_single_band_with, IndexReading, SurfaceClass};

use super::args::Suite;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub margin: f64,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}/{} margin={:e} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.margin,
            self.detail
        )
    }
}

pub const ENTROPY_GRID_POINTS: usize = 10_000;
pub const ENTROPY_FLOOR: f64 = -1e-15;
pub const ENTROPY_ORIGIN_TOLERANCE: f64 = 1e-12;
pub const TAIL_YS: [u32; 5] = [50, 100, 500, 1000, 2000];
pub const TAIL_SS: [(i64, i64); 5] = [(1, 10), (1, 5), (1, 4), (3, 10), (2, 5)];
pub const STIRLING_YS: [u32; 2] = [100, 1000];
pub const IDENTITY_MAX_G: i64 = 12;
pub const IDENTITY_MAX_N: i64 = 6;
pub const CONSISTENCY_GRID: usize = 20;
pub const CONVERGENCE_GAP: f64 = 0.05;
pub const CONVERGENCE_DECAY: f64 = 0.25;
pub const MAX_NON_STRICT_STEPS: usize = 1;

/// Evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(move |i| if i + 1 == count { hi } else { lo + step * i as f64 })
}

pub fn entropy_gap_checks() -> Result<Vec<Check>> {
    let mut min_gap = f64::INFINITY;
    let mut at = 0.0;
    for x in linspace(-0.999, 0.999, ENTROPY_GRID_POINTS) {
        let gap = entropy_quadratic_gap(x)?;
        if gap < min_gap {
            min_gap = gap;
            at = x;
        }
    }
    let origin = entropy_quadratic_gap(0.0)?.abs();
    Ok(vec![
        Check {
            suite: "lemmas",
            name: "entropy-gap-nonnegative",
            passed: min_gap >= ENTROPY_FLOOR,
            margin: min_gap - ENTROPY_FLOOR,
            detail: format!("min gap {min_gap:e} at x={at} over {ENTROPY_GRID_POINTS} points"),
        },
        Check {
            suite: "lemmas",
            name: "entropy-gap-zero-at-origin",
            passed: origin < ENTROPY_ORIGIN_TOLERANCE,
            margin: ENTROPY_ORIGIN_TOLERANCE - origin,
            detail: format!("|gap(0)| = {origin:e}"),
        },
    ])
}

pub fn tail_bound_checks() -> Result<Vec<Check>> {
    let mut failures = Vec::new();
    let mut min_margin = f64::INFINITY;
    for &y in &TAIL_YS {
        for &(p, q) in &TAIL_SS {
            let s = ExactScalar::ratio(p, q)?;
            let report = tail_bound_check(y, &s)?;
            for (tail, bound, holds) in [
                (&report.exact_tail, &report.geometric_bound, report.holds),
                (&report.mirrored_tail, &report.mirrored_bound, report.mirrored_holds),
            ] {
                // relative slack 1 - tail/bound, exact until the final conversion
                let slack = (ExactScalar::one() - tail * &bound.recip()?).to_f64();
                min_margin = min_margin.min(slack);
                if !holds {
                    failures.push(format!("(y={y}, s={s})"));
                }
            }
        }
    }
    let cases = TAIL_YS.len() * TAIL_SS.len();
    Ok(vec![Check {
        suite: "lemmas",
        name: "tail-bound",
        passed: failures.is_empty(),
        margin: min_margin,
        detail: if failures.is_empty() {
            format!("{cases} cases plus mirrors hold strictly; min relative slack shown")
        } else {
            format!("violated at {}", failures.join(", "))
        },
    }])
}

/// `|C(y, py) / stirling - 1|` against `1/(2y)` for `p = 0.2, 0.3, …, 0.8`.
pub fn stirling_checks(precision_digits: u32) -> Result<Vec<Check>> {
    let mut worst = f64::INFINITY;
    let mut detail = String::new();
    for &y in &STIRLING_YS {
        for tenth in 2..=8u32 {
            let k = y * tenth / 10;
            let p = f64::from(tenth) / 10.0;
            let exact = approx_of_exact(&binom_int(i64::from(y), i64::from(k))?, precision_digits);
            let approx = stirling_binom_approx(f64::from(y), p, precision_digits)?;
            let err = exact.relative_error(&approx)?.to_f64();
            let margin = 1.0 / (2.0 * f64::from(y)) - err;
            if margin < worst {
                worst = margin;
                detail = format!("tightest at y={y}, p={p}: error {err:e}");
            }
        }
    }
    Ok(vec![Check {
        suite: "lemmas",
        name: "stirling-accuracy",
        passed: worst >= 0.0,
        margin: worst,
        detail,
    }])
}

pub fn single_band_identity_check(reading: IndexReading) -> Result<Check> {
    let mut equal = 0usize;
    let mut first_mismatch = None;
    let mut total = 0usize;
    for g in 2..=IDENTITY_MAX_G {
        for n in 0..=IDENTITY_MAX_N {
            let s = SurfaceClass::new(g, n)?;
            total += 1;
            if cyl1_single_band_with(&s, reading) == cyl1_nonsep_main(&s) {
                equal += 1;
            } else if first_mismatch.is_none() {
                first_mismatch = Some((g, n));
            }
        }
    }
    let detail = match first_mismatch {
        None => format!("{equal}/{total} exact equalities"),
        Some((g, n)) => format!("{equal}/{total} exact equalities; first mismatch at (g={g}, n={n})"),
    };
    Ok(Check {
        suite: "identities",
        name: "single-band-identity",
        passed: equal == total,
        margin: if equal == total { 0.0 } else { -((total - equal) as f64) },
        detail,
    })
}

pub fn consistency_check(precision_digits: u32) -> Result<Check> {
    let tolerance = 10f64.powi(-(precision_digits as i32 - 5));
    let mut worst = 0.0f64;
    let mut at = (0.0, 0.0);
    for g in linspace(2.0, 100.0, CONSISTENCY_GRID) {
        for lambda in linspace(0.0, 10.0, CONSISTENCY_GRID) {
            let err = algebraic_consistency_check(g, lambda, precision_digits)?;
            if err > worst {
                worst = err;
                at = (g, lambda);
            }
        }
    }
    Ok(Check {
        suite: "identities",
        name: "closed-form-consistency",
        passed: worst < tolerance,
        margin: tolerance - worst,
        detail: format!(
            "{} points, max relative error {worst:e} at (g={}, lambda={}), tolerance {tolerance:e}",
            CONSISTENCY_GRID * CONSISTENCY_GRID,
            at.0,
            at.1
        ),
    })
}

/// Threshold checks on a convergence report: weak monotonicity per series,
/// the uniformity gap, and the decay from the smallest to the largest `g`.
pub fn convergence_checks(report: &ConvergenceReport) -> Vec<Check> {
    let mut checks = Vec::new();

    let worst_steps = report.series.iter().map(|s| s.non_strict_steps).max().unwrap_or(0);
    let unanalyzable: Vec<String> = report
        .series
        .iter()
        .filter(|s| !s.analyzable)
        .map(|s| s.lambda.to_string())
        .collect();
    checks.push(Check {
        suite: "convergence",
        name: "weakly-monotone",
        passed: worst_steps <= MAX_NON_STRICT_STEPS && unanalyzable.is_empty(),
        margin: MAX_NON_STRICT_STEPS as f64 - worst_steps as f64,
        detail: if unanalyzable.is_empty() {
            format!("at most {worst_steps} non-strict step(s) per series")
        } else {
            format!("series with fewer than 2 genera: lambda {}", unanalyzable.join(", "))
        },
    });

    checks.push(Check {
        suite: "convergence",
        name: "uniformity-gap",
        passed: report.uniformity_gap < CONVERGENCE_GAP,
        margin: CONVERGENCE_GAP - report.uniformity_gap,
        detail: format!("max |epsilon| at the largest g is {:e}", report.uniformity_gap),
    });

    let mut worst = f64::INFINITY;
    let mut detail = String::from("no series");
    for s in &report.series {
        let ratio = s.decay_ratio.unwrap_or(f64::INFINITY);
        let margin = CONVERGENCE_DECAY - ratio;
        if margin < worst {
            worst = margin;
            detail = format!("slowest decay at lambda {}: ratio {ratio:e}", s.lambda);
        }
    }
    checks.push(Check {
        suite: "convergence",
        name: "decay",
        passed: worst >= 0.0,
        margin: worst,
        detail,
    });
    checks
}

pub fn run_suite(suite: Suite, precision_digits: u32, reading: IndexReading) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Lemmas | Suite::All) {
        checks.extend(entropy_gap_checks()?);
        checks.extend(tail_bound_checks()?);
        checks.extend(stirling_checks(precision_digits)?);
    }
    if matches!(suite, Suite::Identities | Suite::All) {
        checks.push(single_band_identity_check(reading)?);
        checks.push(consistency_check(precision_digits)?);
    }
    if matches!(suite, Suite::Convergence | Suite::All) {
        let records = run_sweep(&SweepSpec::default_grid(precision_digits))?;
        checks.extend(convergence_checks(&analyze_convergence(&records)));
    }
    Ok(checks)
}
