//! Sweep engine: tabulates the exact ratio against the predicted one over a
//! `(g, λ)` grid and summarises how the multiplicative error ε(g, n) decays.

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::float::Constant;
use rug::{Float, Integer, Rational};

use crate::asymptotics::{conjecture_prediction, f_lambda_float};
use crate::error::{Error, Result};
use crate::exactmath::{log2_of_exact, working_bits, ExactScalar, DEFAULT_PRECISION};
use crate::volumes::{ratio_exact, ratio_refined, SurfaceClass};

/// How `n` is obtained from the requested `λ·g`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Rounding {
    /// Nearest integer, ties to even.
    #[default]
    HalfEven,
    /// Nearest integer, ties away from zero.
    HalfUp,
    Floor,
}

impl Rounding {
    pub fn apply(self, x: &ExactScalar) -> Integer {
        let r = x.as_rational();
        match self {
            Rounding::Floor => x.floor(),
            Rounding::HalfUp => (r + Rational::from((1, 2))).floor().into_numer_denom().0,
            Rounding::HalfEven => {
                let floor = x.floor();
                let frac = Rational::from(r - &floor);
                match frac.cmp(&Rational::from((1, 2))) {
                    Ordering::Less => floor,
                    Ordering::Greater => floor + 1,
                    Ordering::Equal if floor.is_even() => floor,
                    Ordering::Equal => floor + 1,
                }
            }
        }
    }
}

/// Which exact ratio the sweep compares against the prediction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RatioVariant {
    /// `(1/4) · num/den`.
    #[default]
    Exact,
    /// `((g-1)/(4g)) · num/den`.
    Refined,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub g_values: Vec<u32>,
    pub lambda_values: Vec<ExactScalar>,
    pub rounding: Rounding,
    pub variant: RatioVariant,
    pub precision_digits: u32,
}

impl SweepSpec {
    pub fn new(g_values: Vec<u32>, lambda_values: Vec<ExactScalar>, precision_digits: u32) -> Result<Self> {
        let spec = SweepSpec {
            g_values,
            lambda_values,
            rounding: Rounding::default(),
            variant: RatioVariant::default(),
            precision_digits,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `g ∈ {4, 8, …, 128}`, `λ ∈ {0, 1/2, 1, 2, 5, 10}`.
    pub fn default_grid(precision_digits: u32) -> Self {
        let lambdas = ["0", "1/2", "1", "2", "5", "10"]
            .iter()
            .map(|s| s.parse().expect("literal"))
            .collect();
        SweepSpec::new(vec![4, 8, 16, 32, 64, 128], lambdas, precision_digits).expect("valid grid")
    }

    pub fn validate(&self) -> Result<()> {
        if self.g_values.is_empty() {
            return Err(Error::Sweep("g grid is empty".into()));
        }
        if self.g_values[0] < 2 {
            return Err(Error::Sweep(format!("g = {} is below 2", self.g_values[0])));
        }
        if let Some(w) = self.g_values.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Sweep(format!(
                "g grid not strictly ascending at {} -> {}",
                w[0], w[1]
            )));
        }
        if self.lambda_values.is_empty() {
            return Err(Error::Sweep("lambda list is empty".into()));
        }
        for (i, l) in self.lambda_values.iter().enumerate() {
            if l.signum() < 0 {
                return Err(Error::Sweep(format!("lambda = {l} is negative")));
            }
            if self.lambda_values[..i].contains(l) {
                return Err(Error::Sweep(format!("lambda = {l} listed twice")));
            }
        }
        if self.precision_digits == 0 {
            return Err(Error::Sweep("precision must be positive".into()));
        }
        Ok(())
    }

    /// Cells in `(g, λ)` lexicographic order with their rounded `n`.
    pub fn cells(&self) -> Result<Vec<(u32, ExactScalar, u32)>> {
        let mut cells = Vec::with_capacity(self.g_values.len() * self.lambda_values.len());
        for &g in &self.g_values {
            for lambda in &self.lambda_values {
                let n = self.rounding.apply(&(lambda * &ExactScalar::from(g)));
                let n = n
                    .to_u32()
                    .ok_or_else(|| Error::Sweep(format!("n = {n} out of range at g = {g}")))?;
                cells.push((g, lambda.clone(), n));
            }
        }
        Ok(cells)
    }
}

/// One `(g, n)` cell of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub g: u32,
    pub n: u32,
    /// The λ the grid asked for; `n` is its rounding.
    pub lambda_requested: ExactScalar,
    /// `n/g` exactly. All downstream quantities use this, not the request.
    pub lambda_actual: ExactScalar,
    pub ratio_exact: ExactScalar,
    pub ratio_exact_log2: Float,
    pub prediction_log2: Float,
    /// `ratio · 4^g · √(3πg/2)`.
    pub normalized_ratio: Float,
    pub f_value: Float,
    /// `ratio / prediction - 1`.
    pub epsilon: Float,
    pub precision_digits: u32,
    /// `(g, n) = (2, 0)`, outside the frequency/volume relation.
    pub hypothesis_violated: bool,
}

pub fn epsilon_of(g: u32, n: u32, precision_digits: u32) -> Result<SweepRecord> {
    let lambda = ExactScalar::ratio(n, g)?;
    evaluate_cell(g, n, lambda, RatioVariant::Exact, precision_digits)
}

fn evaluate_cell(
    g: u32,
    n: u32,
    lambda_requested: ExactScalar,
    variant: RatioVariant,
    precision_digits: u32,
) -> Result<SweepRecord> {
    let surface = SurfaceClass::new(i64::from(g), i64::from(n))?;
    let ratio = match variant {
        RatioVariant::Exact => ratio_exact(&surface),
        RatioVariant::Refined => ratio_refined(&surface),
    };
    let bits = working_bits(precision_digits);
    let ratio_log = log2_of_exact(&ratio, precision_digits)?;
    let prediction = conjecture_prediction(i64::from(g), i64::from(n), precision_digits)?;

    // ε in log space: 2^{log2 ratio - log2 prediction} - 1
    let epsilon = ratio_log.div(&prediction)?.to_float() - 1u32;

    let g_f = Float::with_val(bits, g);
    let scaled_log2 = Float::with_val(bits, ratio_log.log2_magnitude() + Float::with_val(bits, &g_f * 2u32));
    let spread = Float::with_val(bits, Constant::Pi) * 3u32 * &g_f / 2u32;
    let normalized_ratio = Float::with_val(bits, scaled_log2.exp2_ref()) * spread.sqrt();

    let lambda_actual = surface.lambda().clone();
    let f_value = f_lambda_float(&Float::with_val(bits, lambda_actual.as_rational()));

    Ok(SweepRecord {
        g,
        n,
        lambda_requested,
        lambda_actual,
        ratio_exact: ratio,
        ratio_exact_log2: ratio_log.log2_magnitude().clone(),
        prediction_log2: prediction.log2_magnitude().clone(),
        normalized_ratio,
        f_value,
        epsilon: Float::with_val(bits, epsilon),
        precision_digits,
        hypothesis_violated: !surface.frequency_relation_applies(),
    })
}

/// Evaluates every cell as an order-preserving parallel map. Output order is
/// `(g, λ)` lexicographic in spec order and independent of thread count.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let cells = spec.cells()?;
    let results: Vec<Result<SweepRecord>> = cells
        .into_par_iter()
        .map(|(g, lambda, n)| {
            evaluate_cell(g, n, lambda, spec.variant, spec.precision_digits).map_err(|e| {
                Error::Cell {
                    g,
                    n,
                    source: Box::new(e),
                }
            })
        })
        .collect();
    results.into_iter().collect()
}

/// `|ε|` along increasing `g` for one requested λ.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaSeries {
    pub lambda: ExactScalar,
    pub points: Vec<(u32, f64)>,
    /// At least two distinct `g`.
    pub analyzable: bool,
    /// `|ε|` strictly decreasing along `g`.
    pub monotone: bool,
    /// Steps where `|ε|` failed to strictly decrease.
    pub non_strict_steps: usize,
    /// `|ε|(g_max) / |ε|(g_min)`, when the series is analyzable and `|ε|(g_min) > 0`.
    pub decay_ratio: Option<f64>,
}

impl LambdaSeries {
    pub fn last(&self) -> Option<(u32, f64)> {
        self.points.last().copied()
    }

    pub fn first(&self) -> Option<(u32, f64)> {
        self.points.first().copied()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub series: Vec<LambdaSeries>,
    /// Largest `|ε|` at the largest `g` of each series.
    pub uniformity_gap: f64,
}

impl ConvergenceReport {
    pub fn series_for(&self, lambda: &ExactScalar) -> Option<&LambdaSeries> {
        self.series.iter().find(|s| &s.lambda == lambda)
    }
}

pub fn analyze_convergence(records: &[SweepRecord]) -> ConvergenceReport {
    let mut groups: Vec<(ExactScalar, Vec<(u32, f64)>)> = Vec::new();
    for r in records {
        let point = (r.g, r.epsilon.to_f64().abs());
        match groups.iter_mut().find(|(l, _)| *l == r.lambda_requested) {
            Some((_, pts)) => pts.push(point),
            None => groups.push((r.lambda_requested.clone(), vec![point])),
        }
    }
    let series: Vec<LambdaSeries> = groups
        .into_iter()
        .map(|(lambda, mut points)| {
            points.sort_by_key(|p| p.0);
            series_from_points(lambda, points)
        })
        .collect();
    let uniformity_gap = series
        .iter()
        .filter_map(|s| s.last())
        .map(|(_, e)| e)
        .fold(0.0, f64::max);
    ConvergenceReport {
        series,
        uniformity_gap,
    }
}

/// Builds a series summary from `(g, |ε|)` points sorted by `g`.
pub fn series_from_points(lambda: ExactScalar, points: Vec<(u32, f64)>) -> LambdaSeries {
    let mut distinct: Vec<u32> = points.iter().map(|p| p.0).collect();
    distinct.dedup();
    let analyzable = distinct.len() >= 2;
    let non_strict_steps = points.windows(2).filter(|w| !(w[1].1 < w[0].1)).count();
    let decay_ratio = match (analyzable, points.first(), points.last()) {
        (true, Some(&(_, first)), Some(&(_, last))) if first > 0.0 => Some(last / first),
        _ => None,
    };
    LambdaSeries {
        lambda,
        monotone: analyzable && non_strict_steps == 0,
        analyzable,
        non_strict_steps,
        decay_ratio,
        points,
    }
}

/// Default sweep at the default precision.
pub fn default_sweep() -> Result<Vec<SweepRecord>> {
    run_sweep(&SweepSpec::default_grid(DEFAULT_PRECISION))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn q(s: &str) -> ExactScalar {
        s.parse().unwrap()
    }

    fn lambdas(xs: &[&str]) -> Vec<ExactScalar> {
        xs.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn rounding_rules() {
        let r = Rounding::HalfEven;
        assert_eq!(r.apply(&q("1/2")), 0);
        assert_eq!(r.apply(&q("3/2")), 2);
        assert_eq!(r.apply(&q("5/2")), 2);
        assert_eq!(r.apply(&q("7/3")), 2);
        assert_eq!(r.apply(&q("8/3")), 3);
        assert_eq!(Rounding::HalfUp.apply(&q("5/2")), 3);
        assert_eq!(Rounding::Floor.apply(&q("8/3")), 2);
    }

    #[test]
    fn epsilon_at_genus_two() {
        let r = epsilon_of(2, 0, 30).unwrap();
        assert_eq!(r.ratio_exact, q("1/32"));
        assert!((r.epsilon.to_f64() - 0.535).abs() < 1e-3);
        let normalized = (3.0 * PI).sqrt() / 2.0;
        assert!((r.normalized_ratio.to_f64() - normalized).abs() < 1e-15);
        assert!((r.normalized_ratio.to_f64() - 1.5350).abs() < 1e-4);
        assert_eq!(r.f_value, 1);
        assert!(r.hypothesis_violated);
    }

    #[test]
    fn epsilon_at_genus_three() {
        let r = epsilon_of(3, 0, 30).unwrap();
        assert_eq!(r.ratio_exact, q("15/4096"));
        // (15/4096) / (√(2/(9π)) / 64) - 1
        let hand = (15.0 / 4096.0) / ((2.0 / (9.0 * PI)).sqrt() / 64.0) - 1.0;
        assert!((r.epsilon.to_f64() - hand).abs() < 1e-14);
        assert!((r.epsilon.to_f64() + 0.11876349720003888).abs() < 1e-14);
        assert!(!r.hypothesis_violated);
    }

    #[test]
    fn record_cross_checks() {
        let spec = SweepSpec::new(vec![3, 10, 40], lambdas(&["0", "1/3", "7"]), 30).unwrap();
        let tol = Float::with_val(200, 1e-25);
        for r in run_sweep(&spec).unwrap() {
            assert_eq!(r.lambda_actual, ExactScalar::ratio(r.n, r.g).unwrap());
            let bits = working_bits(30) + 32;
            let lhs = Float::with_val(bits, &r.normalized_ratio / &r.f_value) - 1u32;
            let diff = Float::with_val(bits, &lhs - &r.epsilon).abs();
            assert!(diff < tol, "({}, {}) {}", r.g, r.n, diff.to_f64());

            let g = Float::with_val(bits, r.g);
            let rebuilt = Float::with_val(bits, &r.ratio_exact_log2 + Float::with_val(bits, &g * 2u32)).exp2()
                * (Float::with_val(bits, Constant::Pi) * 3u32 * &g / 2u32).sqrt();
            let rel = (Float::with_val(bits, &rebuilt / &r.normalized_ratio) - 1u32).abs();
            assert!(rel < tol);
        }
    }

    #[test]
    fn sweep_order_and_rounding() {
        let spec = SweepSpec::new(vec![2, 4, 8], lambdas(&["0"]), 30).unwrap();
        let recs = run_sweep(&spec).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(recs.iter().all(|r| r.n == 0));
        assert_eq!(recs.iter().map(|r| r.g).collect::<Vec<_>>(), vec![2, 4, 8]);

        let spec = SweepSpec::new(vec![2], lambdas(&["1/2"]), 30).unwrap();
        assert_eq!(run_sweep(&spec).unwrap()[0].n, 1);

        let spec = SweepSpec::new(vec![3, 5], lambdas(&["1", "1/2"]), 30).unwrap();
        let order: Vec<_> = run_sweep(&spec)
            .unwrap()
            .iter()
            .map(|r| (r.g, r.n))
            .collect();
        // 3·1/2 = 3/2 -> 2, 5·1/2 = 5/2 -> 2 (ties to even)
        assert_eq!(order, vec![(3, 3), (3, 2), (5, 5), (5, 2)]);
    }

    #[test]
    fn spec_validation() {
        assert!(SweepSpec::new(vec![], lambdas(&["0"]), 30).is_err());
        assert!(SweepSpec::new(vec![1, 4], lambdas(&["0"]), 30).is_err());
        assert!(SweepSpec::new(vec![4, 4], lambdas(&["0"]), 30).is_err());
        assert!(SweepSpec::new(vec![8, 4], lambdas(&["0"]), 30).is_err());
        assert!(SweepSpec::new(vec![4], vec![], 30).is_err());
        assert!(SweepSpec::new(vec![4], lambdas(&["-1"]), 30).is_err());
        assert!(SweepSpec::new(vec![4], lambdas(&["1", "1"]), 30).is_err());
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let spec = SweepSpec::new(vec![4, 8, 16], lambdas(&["0", "1/2", "5"]), 40).unwrap();
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_sweep(&spec).unwrap());
        assert_eq!(a, b);
        assert_eq!(a, single);
    }

    #[test]
    fn refined_variant_uses_refined_ratio() {
        let mut spec = SweepSpec::new(vec![4], lambdas(&["1"]), 30).unwrap();
        spec.variant = RatioVariant::Refined;
        let r = &run_sweep(&spec).unwrap()[0];
        assert_eq!(
            r.ratio_exact,
            ratio_refined(&SurfaceClass::new(4, 4).unwrap())
        );
    }

    #[test]
    fn convergence_analysis_arithmetic() {
        let s = series_from_points(q("0"), vec![(4, 0.5), (8, 0.25)]);
        assert!(s.monotone && s.analyzable);
        assert_eq!(s.decay_ratio, Some(0.5));

        let s = series_from_points(q("0"), vec![(4, 0.1), (8, 0.2)]);
        assert!(!s.monotone);
        assert_eq!(s.non_strict_steps, 1);

        let s = series_from_points(q("0"), vec![(4, 0.1)]);
        assert!(!s.analyzable && !s.monotone);
        assert_eq!(s.decay_ratio, None);

        let s = series_from_points(q("0"), vec![(4, 0.0), (8, 0.0)]);
        assert_eq!(s.decay_ratio, None);
    }

    #[test]
    fn convergence_on_the_standard_grid() {
        let spec = SweepSpec::new(vec![4, 8, 16, 32, 64], lambdas(&["0", "1", "2", "5"]), 30).unwrap();
        let records = run_sweep(&spec).unwrap();
        assert_eq!(records.len(), 20);
        let report = analyze_convergence(&records);
        assert_eq!(report.series.len(), 4);
        assert!(report.uniformity_gap < 0.05 && report.uniformity_gap >= 0.0);
        for s in &report.series {
            assert!(s.monotone, "λ = {}", s.lambda);
        }
        let zero = report.series_for(&q("0")).unwrap();
        assert!(zero.last().unwrap().1 <= zero.first().unwrap().1 / 4.0);
    }

    #[test]
    fn cell_failure_names_the_cell() {
        let err = evaluate_cell(1, 0, q("0"), RatioVariant::Exact, 30).unwrap_err();
        assert!(matches!(err, Error::Surface { g: 1, .. }));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        #[test]
        fn record_invariants(g in 2u32..40, n in 0u32..120) {
            let r = epsilon_of(g, n, 30).unwrap();
            proptest::prop_assert_eq!(&r.lambda_actual, &ExactScalar::ratio(n, g).unwrap());
            let bits = working_bits(30) + 32;
            let cross = Float::with_val(bits, &r.normalized_ratio / &r.f_value) - 1u32;
            let diff = Float::with_val(bits, &cross - &r.epsilon).abs();
            proptest::prop_assert!(diff < 1e-25, "{}", diff.to_f64());
            proptest::prop_assert!(r.ratio_exact.signum() > 0);
        }

        #[test]
        fn half_even_rounds_to_nearest(num in 0i64..10_000, den in 1i64..200) {
            let x = ExactScalar::ratio(num, den).unwrap();
            let n = ExactScalar::from_integer(Rounding::HalfEven.apply(&x));
            let dist = (&n - &x).abs();
            let half = q("1/2");
            proptest::prop_assert!(dist <= half);
            if dist == half {
                proptest::prop_assert!(n.numer().is_even());
            }
        }
    }
}
