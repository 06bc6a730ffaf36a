//! Exact single-band volume contributions of separating and nonseparating
//! simple closed curves, and the exact frequency ratio built from them.
//!
//! Every binomial sum iterates its full printed index range and leans on the
//! zero convention of [`binom`] for out-of-range lower indices.

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::exactmath::{
    approx_of_exact, binom, double_factorial, factorial, zeta_numeric, ApproxScalar, ExactScalar,
};

/// Topological type `(g, n)`: genus and number of cusps, with `λ = n/g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceClass {
    g: u32,
    n: u32,
    lambda: ExactScalar,
}

impl SurfaceClass {
    /// Requires `g >= 2` and `n >= 0`.
    pub fn new(g: i64, n: i64) -> Result<Self> {
        let reject = |reason: &str| Error::Surface {
            g,
            n,
            reason: reason.to_string(),
        };
        if g < 2 {
            return Err(reject("the volume formulas require genus g >= 2"));
        }
        if n < 0 {
            return Err(reject("the number of cusps n must be >= 0"));
        }
        let g = u32::try_from(g).map_err(|_| reject("genus too large"))?;
        let n = u32::try_from(n).map_err(|_| reject("cusp count too large"))?;
        // keep 6g - 6 + 2n and friends inside u32
        if u64::from(g) * 6 + u64::from(n) * 2 > u64::from(u32::MAX) {
            return Err(reject("(g, n) too large"));
        }
        let lambda = ExactScalar::ratio(n, g)?;
        Ok(SurfaceClass { g, n, lambda })
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn lambda(&self) -> &ExactScalar {
        &self.lambda
    }

    /// `6g - 6 + 2n`, the complex dimension of the principal stratum.
    pub fn dimension(&self) -> u32 {
        6 * self.g - 6 + 2 * self.n
    }

    /// Whether `2g + n > 3` and `(g, n) != (2, 0)`, the hypothesis under which
    /// volume contributions and Mirzakhani frequencies differ by an explicit factor.
    pub fn frequency_relation_applies(&self) -> bool {
        2 * self.g + self.n > 3 && (self.g, self.n) != (2, 0)
    }
}

/// A value computed outside the hypothesis of the volume/frequency relation
/// carries `hypothesis_violated = true`; it is still computed.
#[derive(Clone, Debug, PartialEq)]
pub struct Flagged<T> {
    pub value: T,
    pub hypothesis_violated: bool,
}

/// Which second correlator index enters the single-band formula for the
/// nonseparating curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum IndexReading {
    /// `⟨τ_k τ_{3g-4-k}⟩_{g-1}`: the indices sum to `3(g-1) - 1` as a genus
    /// `g-1` two-point correlator must.
    #[default]
    Balanced,
    /// `⟨τ_k τ_{g-4-k}⟩_{g-1}` read literally. Every term then violates the
    /// dimension constraint and vanishes; kept as a negative control.
    Literal,
}

/// Large-genus form of `⟨τ_k τ_{3g-1-k}⟩_g`:
/// `(6g-1)!! / (24^g g! (2k+1)!! (6g-1-2k)!!)`.
pub fn corr2_asym(g: i64, k: i64) -> Result<ExactScalar> {
    if g < 1 {
        return Err(Error::domain("corr2_asym", format!("genus g = {g} must be >= 1")));
    }
    if k < 0 || k > 3 * g - 1 {
        return Err(Error::domain(
            "corr2_asym",
            format!("index k = {k} outside [0, {}]", 3 * g - 1),
        ));
    }
    corr2_pair_asym(g, k, 3 * g - 1 - k)
}

/// `⟨τ_k τ_m⟩_genus` in the same large-genus form, or zero when the indices
/// are negative or do not satisfy `k + m = 3·genus - 1`.
pub fn corr2_pair_asym(genus: i64, k: i64, m: i64) -> Result<ExactScalar> {
    if genus < 1 {
        return Err(Error::domain(
            "corr2_pair_asym",
            format!("genus {genus} must be >= 1"),
        ));
    }
    if k < 0 || m < 0 || k + m != 3 * genus - 1 {
        return Ok(ExactScalar::zero());
    }
    let top = double_factorial(6 * genus - 1)?;
    let weight = Integer::from(Integer::u_pow_u(24, genus as u32));
    let bottom = ExactScalar::from(weight)
        * factorial(genus)?
        * double_factorial(2 * k + 1)?
        * double_factorial(2 * m + 1)?;
    Ok(top / bottom)
}

/// `Σ_{g1=0}^{g} C(g, g1) C(3g-4+2n, 3g1-2+n)` as a list of summands.
pub fn numerator_terms(s: &SurfaceClass) -> Vec<Integer> {
    let (g, n) = (s.g, s.n);
    let upper = 3 * g - 4 + 2 * n;
    (0..=g)
        .map(|g1| {
            let lower = 3 * i64::from(g1) - 2 + i64::from(n);
            binom(g, i64::from(g1)) * binom(upper, lower)
        })
        .collect()
}

/// Separating side of the ratio: `Σ_{g1} C(g, g1) C(3g-4+2n, 3g1-2+n)`.
pub fn numerator_sum(s: &SurfaceClass) -> ExactScalar {
    ExactScalar::from(numerator_terms(s).into_iter().sum::<Integer>())
}

/// Nonseparating side: `Σ_{k=0}^{3g-4} C(3g-4+2n, n+k) C(6g-6, 2k+1) / C(3g-4, k)`.
pub fn denominator_sum(s: &SurfaceClass) -> ExactScalar {
    let (g, n) = (s.g, s.n);
    let upper = 3 * g - 4 + 2 * n;
    let mut acc = Rational::new();
    for k in 0..=i64::from(3 * g - 4) {
        let top = binom(upper, i64::from(n) + k) * binom(6 * g - 6, 2 * k + 1);
        if top == 0 {
            continue;
        }
        acc += Rational::from((top, binom(3 * g - 4, k)));
    }
    ExactScalar::from(acc)
}

fn two_pow(e: u32) -> ExactScalar {
    ExactScalar::from(Integer::from(1) << e)
}

fn twenty_four_pow(e: u32) -> ExactScalar {
    ExactScalar::from(Integer::from(Integer::u_pow_u(24, e)))
}

fn cusp_binomial(s: &SurfaceClass) -> ExactScalar {
    ExactScalar::from(binom(4 * s.g - 4 + s.n, i64::from(s.g)))
}

/// Total single-band contribution of all separating stable graphs:
/// `2^{g+1}/24^g · C(4g-4+n, g) · numerator_sum`.
pub fn cyl1_separating_total(s: &SurfaceClass) -> ExactScalar {
    two_pow(s.g + 1) / twenty_four_pow(s.g) * cusp_binomial(s) * numerator_sum(s)
}

/// Single-band contribution of the nonseparating stable graph with the
/// 2-correlators replaced by their large-genus form.
pub fn cyl1_single_band(s: &SurfaceClass) -> ExactScalar {
    cyl1_single_band_with(s, IndexReading::Balanced)
}

pub fn cyl1_single_band_with(s: &SurfaceClass, reading: IndexReading) -> ExactScalar {
    let (g, n) = (i64::from(s.g), i64::from(s.n));
    let upper = s.g * 3 - 4 + 2 * s.n;
    let mut acc = ExactScalar::zero();
    for k in 0..=3 * g - 4 {
        let c = binom(upper, n + k);
        if c == 0 {
            continue;
        }
        let m = match reading {
            IndexReading::Balanced => 3 * g - 4 - k,
            IndexReading::Literal => g - 4 - k,
        };
        let corr = corr2_pair_asym(g - 1, k, m).expect("genus g-1 >= 1");
        acc = acc + ExactScalar::from(c) * corr;
    }
    two_pow(s.g + 1) * cusp_binomial(s) * factorial(g).expect("g >= 0") * acc
}

/// Main term of the nonseparating volume:
/// `2^{g+3} g / (24^g (g-1)) · C(4g-4+n, g) · denominator_sum`.
pub fn cyl1_nonsep_main(s: &SurfaceClass) -> ExactScalar {
    let prefactor = two_pow(s.g + 3) * ExactScalar::from(s.g)
        / (twenty_four_pow(s.g) * ExactScalar::from(s.g - 1));
    prefactor * cusp_binomial(s) * denominator_sum(s)
}

/// `c · ζ(6g - 6 + 2n)`.
pub fn volume_from_cyl(
    c: &ExactScalar,
    s: &SurfaceClass,
    precision_digits: u32,
) -> Result<ApproxScalar> {
    let zeta = zeta_numeric(i64::from(s.dimension()), precision_digits)?;
    Ok(approx_of_exact(c, precision_digits).mul(&zeta))
}

/// A single-band contribution together with its ζ-corrected volume.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeContribution {
    pub cyl1: ExactScalar,
    pub zeta_corrected: ApproxScalar,
    pub surface: SurfaceClass,
}

impl VolumeContribution {
    pub fn new(cyl1: ExactScalar, surface: SurfaceClass, precision_digits: u32) -> Result<Self> {
        if cyl1.signum() <= 0 {
            return Err(Error::domain(
                "VolumeContribution::new",
                "single-band contribution must be positive",
            ));
        }
        let zeta_corrected = volume_from_cyl(&cyl1, &surface, precision_digits)?;
        Ok(VolumeContribution {
            cyl1,
            zeta_corrected,
            surface,
        })
    }
}

/// `2(6g-6+2n) · (4g-4+n)! · 2^{4g-3+n}`, the factor between a stable graph's
/// volume contribution and Mirzakhani's frequency of the matching multicurve.
pub fn mirzakhani_factor(s: &SurfaceClass) -> Flagged<ExactScalar> {
    let value = ExactScalar::from(2 * s.dimension())
        * factorial(i64::from(4 * s.g - 4 + s.n)).expect("nonnegative")
        * two_pow(4 * s.g - 3 + s.n);
    Flagged {
        value,
        hypothesis_violated: !s.frequency_relation_applies(),
    }
}

/// Volume contribution divided by [`mirzakhani_factor`].
pub fn frequency_from_volume(vol: &ApproxScalar, s: &SurfaceClass) -> Flagged<ApproxScalar> {
    let factor = mirzakhani_factor(s);
    let factor_approx = approx_of_exact(&factor.value, vol.precision_digits());
    Flagged {
        value: vol.div(&factor_approx).expect("factor is positive"),
        hypothesis_violated: factor.hypothesis_violated,
    }
}

/// `(1/4) · numerator_sum / denominator_sum`, the main term of the
/// separating/nonseparating frequency ratio.
pub fn ratio_exact(s: &SurfaceClass) -> ExactScalar {
    ExactScalar::ratio(1, 4).expect("nonzero") * numerator_sum(s) / denominator_sum(s)
}

/// `((g-1)/(4g)) · numerator_sum / denominator_sum`: the quotient of
/// [`cyl1_separating_total`] and [`cyl1_nonsep_main`] with no prefactor absorbed.
pub fn ratio_refined(s: &SurfaceClass) -> ExactScalar {
    ExactScalar::ratio(s.g - 1, 4 * s.g).expect("nonzero") * numerator_sum(s) / denominator_sum(s)
}
