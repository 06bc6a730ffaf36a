//! Acceptance gate. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use geofreq::asymptotics::{
    algebraic_consistency_check, entropy_quadratic_gap, f_lambda, stirling_binom_approx,
    tail_bound_check,
};
use geofreq::cli::output::{parse_rationals, SweepDocument};
use geofreq::exactmath::{approx_of_exact, binom_int, ExactScalar};
use geofreq::experiments::{analyze_convergence, run_sweep, SweepSpec};
use geofreq::volumes::{
    corr2_asym, cyl1_nonsep_main, cyl1_single_band_with, denominator_sum, numerator_sum,
    ratio_exact, IndexReading, SurfaceClass,
};

// Tolerances and budgets, pinned.
const IDENTITY_GENERA: std::ops::RangeInclusive<i64> = 2..=12;
const IDENTITY_CUSPS: std::ops::RangeInclusive<i64> = 0..=6;
const IDENTITY_CASES: usize = 77;
const CONSISTENCY_TOLERANCE: f64 = 1e-25;
const CONSISTENCY_DIGITS: u32 = 30;
const CONVERGENCE_GAP: f64 = 0.05;
const CONVERGENCE_DECAY: f64 = 0.25;
const MAX_NON_STRICT_STEPS: usize = 1;
const ENTROPY_FLOOR: f64 = -1e-15;
const ENTROPY_ORIGIN: f64 = 1e-12;
const F_LIMIT_TOLERANCE: f64 = 1e-7;

type Outcome = Result<String, String>;

fn q(s: &str) -> ExactScalar {
    s.parse().expect("rational literal")
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let step = (hi - lo) / (count - 1) as f64;
    (0..count)
        .map(|i| if i + 1 == count { hi } else { lo + step * i as f64 })
        .collect()
}

fn within(budget: Duration, elapsed: Duration) -> Result<(), String> {
    if elapsed > budget {
        Err(format!("took {elapsed:?}, budget {budget:?}"))
    } else {
        Ok(())
    }
}

fn identity_mismatches(reading: IndexReading) -> Result<(usize, usize), String> {
    let mut total = 0;
    let mut mismatches = 0;
    for g in IDENTITY_GENERA {
        for n in IDENTITY_CUSPS {
            let s = SurfaceClass::new(g, n).map_err(|e| e.to_string())?;
            total += 1;
            if cyl1_single_band_with(&s, reading) != cyl1_nonsep_main(&s) {
                mismatches += 1;
            }
        }
    }
    Ok((total, mismatches))
}

fn exact_identity() -> Outcome {
    let start = Instant::now();
    let (total, mismatches) = identity_mismatches(IndexReading::Balanced)?;
    within(Duration::from_secs(5), start.elapsed())?;
    if total != IDENTITY_CASES || mismatches != 0 {
        return Err(format!("{mismatches} of {total} cases differ"));
    }
    Ok(format!("{total}/{total} exact equalities in {:?}", start.elapsed()))
}

fn small_case_oracles() -> Outcome {
    let start = Instant::now();
    let s20 = SurfaceClass::new(2, 0).unwrap();
    let s30 = SurfaceClass::new(3, 0).unwrap();
    let checks = [
        ("numerator_sum(2,0)", numerator_sum(&s20), q("4")),
        ("denominator_sum(2,0)", denominator_sum(&s20), q("32")),
        ("ratio_exact(2,0)", ratio_exact(&s20), q("1/32")),
        ("denominator_sum(3,0)", denominator_sum(&s30), q("2048")),
        ("corr2_asym(1,0)", corr2_asym(1, 0).unwrap(), q("1/24")),
    ];
    for (name, got, want) in &checks {
        if got != want {
            return Err(format!("{name} = {got}, expected {want}"));
        }
    }
    within(Duration::from_secs(1), start.elapsed())?;
    Ok(format!("{} exact values match", checks.len()))
}

fn closed_form_consistency() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for g in linspace(2.0, 100.0, 20) {
        for lambda in linspace(0.0, 10.0, 20) {
            let err = algebraic_consistency_check(g, lambda, CONSISTENCY_DIGITS).map_err(|e| e.to_string())?;
            if !(err < CONSISTENCY_TOLERANCE) {
                return Err(format!("(g={g}, lambda={lambda}) error {err:e}"));
            }
            worst = worst.max(err);
        }
    }
    within(Duration::from_secs(5), start.elapsed())?;
    Ok(format!("400 points, max relative error {worst:e} < {CONSISTENCY_TOLERANCE:e}"))
}

fn convergence() -> Outcome {
    let start = Instant::now();
    let lambdas = ["0", "1", "2", "5"].iter().map(|s| q(s)).collect();
    let spec = SweepSpec::new(vec![4, 8, 16, 32, 64], lambdas, 30).map_err(|e| e.to_string())?;
    let records = run_sweep(&spec).map_err(|e| e.to_string())?;
    let report = analyze_convergence(&records);
    let mut summary = Vec::new();
    for s in &report.series {
        let (g_first, first) = s.first().unwrap();
        let (g_last, last) = s.last().unwrap();
        if g_first != 4 || g_last != 64 || s.points.len() != 5 {
            return Err(format!("lambda {}: unexpected series {:?}", s.lambda, s.points));
        }
        if s.non_strict_steps > MAX_NON_STRICT_STEPS {
            return Err(format!("lambda {}: {} non-strict steps", s.lambda, s.non_strict_steps));
        }
        if !(last < CONVERGENCE_GAP) {
            return Err(format!("lambda {}: |eps(64)| = {last:e}", s.lambda));
        }
        if !(last <= first * CONVERGENCE_DECAY) {
            return Err(format!("lambda {}: |eps(64)| = {last:e} vs |eps(4)| = {first:e}", s.lambda));
        }
        summary.push(format!("lambda {} |eps| {first:.3e} -> {last:.3e}", s.lambda));
    }
    within(Duration::from_secs(60), start.elapsed())?;
    Ok(summary.join("; "))
}

fn tail_bounds() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for y in [50u32, 100, 500, 1000, 2000] {
        for s in ["1/10", "1/5", "1/4", "3/10", "2/5"] {
            let report = tail_bound_check(y, &q(s)).map_err(|e| e.to_string())?;
            if !report.holds {
                return Err(format!("left tail fails at y={y}, s={s}"));
            }
            if !report.mirrored_holds {
                return Err(format!("mirrored tail fails at y={y}, s={s}"));
            }
            cases += 1;
        }
    }
    within(Duration::from_secs(30), start.elapsed())?;
    Ok(format!("{cases} cases and their mirrors hold strictly"))
}

fn entropy_inequality() -> Outcome {
    let start = Instant::now();
    let mut min_gap = f64::INFINITY;
    for x in linspace(-0.999, 0.999, 10_000) {
        min_gap = min_gap.min(entropy_quadratic_gap(x).map_err(|e| e.to_string())?);
    }
    if !(min_gap >= ENTROPY_FLOOR) {
        return Err(format!("min gap {min_gap:e}"));
    }
    let origin = entropy_quadratic_gap(0.0).unwrap().abs();
    if !(origin < ENTROPY_ORIGIN) {
        return Err(format!("|gap(0)| = {origin:e}"));
    }
    within(Duration::from_secs(1), start.elapsed())?;
    Ok(format!("min gap {min_gap:e} on 10^4 points, |gap(0)| = {origin:e}"))
}

fn stirling_estimate() -> Outcome {
    let start = Instant::now();
    let mut worst_fraction = 0.0f64;
    for y in [100u32, 1000] {
        for tenth in 2..=8u32 {
            let p = f64::from(tenth) / 10.0;
            let exact = approx_of_exact(&binom_int(i64::from(y), i64::from(y * tenth / 10)).unwrap(), 30);
            let approx = stirling_binom_approx(f64::from(y), p, 30).map_err(|e| e.to_string())?;
            let err = exact.relative_error(&approx).unwrap().to_f64();
            let bound = 1.0 / (2.0 * f64::from(y));
            if !(err <= bound) {
                return Err(format!("y={y}, p={p}: error {err:e} > {bound:e}"));
            }
            worst_fraction = worst_fraction.max(err / bound);
        }
    }
    within(Duration::from_secs(1), start.elapsed())?;
    Ok(format!("worst error is {worst_fraction:.3} of the 1/(2y) bound"))
}

fn f_properties() -> Outcome {
    let start = Instant::now();
    if f_lambda(0.0).unwrap() != 1.0 {
        return Err("f(0) != 1".into());
    }
    let values: Vec<f64> = linspace(0.0, 100.0, 1000)
        .into_iter()
        .map(|l| f_lambda(l).unwrap())
        .collect();
    if let Some(i) = values.windows(2).position(|w| !(w[0] < w[1])) {
        return Err(format!("not strictly increasing at grid index {i}"));
    }
    let limit = (f_lambda(1e8).unwrap() - std::f64::consts::SQRT_2).abs();
    if !(limit < F_LIMIT_TOLERANCE) {
        return Err(format!("|f(1e8) - sqrt 2| = {limit:e}"));
    }
    within(Duration::from_secs(1), start.elapsed())?;
    Ok(format!("f(0) = 1, increasing on 1000 points, |f(1e8) - sqrt 2| = {limit:e}"))
}

fn run_cli(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_geofreq"))
        .args(args)
        .env_remove("GEOFREQ_PRECISION")
        .output()
        .map_err(|e| format!("cannot run geofreq: {e}"))
}

fn determinism_and_format() -> Outcome {
    let start = Instant::now();
    let sweep = ["sweep", "--g", "4:64:x2", "--lambda", "0,1/2,1,2,5", "--out", "-", "--format"];
    let csv: Vec<Vec<u8>> = (0..3)
        .map(|_| run_cli(&[&sweep[..], &["csv"]].concat()).map(|o| o.stdout))
        .collect::<Result<_, _>>()?;
    if csv[0].is_empty() || csv.iter().any(|c| c != &csv[0]) {
        return Err("repeated CSV sweeps differ or are empty".into());
    }
    let rows = csv[0].iter().filter(|&&b| b == b'\n').count();
    if rows != 26 {
        return Err(format!("expected header + 25 rows, got {rows} lines"));
    }

    let json = run_cli(&[&sweep[..], &["json"]].concat())?;
    let doc: SweepDocument = serde_json::from_slice(&json.stdout).map_err(|e| e.to_string())?;
    let lambdas = ["0", "1/2", "1", "2", "5"].iter().map(|s| q(s)).collect();
    let spec = SweepSpec::new(vec![4, 8, 16, 32, 64], lambdas, 30).unwrap();
    let records = run_sweep(&spec).unwrap();
    if doc.records.len() != records.len() {
        return Err("JSON record count differs from the sweep".into());
    }
    for (row, r) in doc.records.iter().zip(&records) {
        let (lambda, requested, ratio) = parse_rationals(row).map_err(|e| e.to_string())?;
        if lambda != r.lambda_actual || requested != r.lambda_requested || ratio != r.ratio_exact {
            return Err(format!("rationals did not round-trip at (g={}, n={})", r.g, r.n));
        }
    }
    within(Duration::from_secs(10), start.elapsed())?;
    Ok(format!(
        "3 identical CSV runs ({} bytes); {} JSON records round-trip exactly",
        csv[0].len(),
        doc.records.len()
    ))
}

fn negative_control() -> Outcome {
    let (total, mismatches) = identity_mismatches(IndexReading::Literal)?;
    if mismatches != total {
        return Err(format!("literal index reading still matches {} of {total} cases", total - mismatches));
    }
    let out = run_cli(&["verify", "--suite", "all", "--index-reading", "literal"])?;
    let stderr = String::from_utf8_lossy(&out.stderr);
    if out.status.success() || !stderr.contains("identities/single-band-identity") {
        return Err(format!("verify with the literal reading did not fail at identities: {stderr}"));
    }
    Ok(format!("literal reading breaks all {total} cases; verify exits {}", out.status))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("exact single-band identity", exact_identity),
        ("small-case oracles", small_case_oracles),
        ("closed-form consistency", closed_form_consistency),
        ("convergence of epsilon", convergence),
        ("exact tail bound", tail_bounds),
        ("entropy inequality", entropy_inequality),
        ("Stirling estimate", stirling_estimate),
        ("f properties", f_properties),
        ("determinism and format", determinism_and_format),
        ("negative control", negative_control),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
