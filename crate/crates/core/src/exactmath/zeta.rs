use rug::ops::Pow;
use rug::{Float, Rational};

use super::approx::{working_bits, ApproxScalar, Sign};
use super::gamma::bernoulli_even;
use crate::error::{Error, Result};

/// Largest truncation point for plain summation; beyond it the
/// Euler–Maclaurin tail is used instead.
const DIRECT_SUM_LIMIT: u64 = 4096;
const MAX_CORRECTION_TERMS: usize = 2048;

/// `ζ(s)` for integer `s >= 2` to relative accuracy `10^-precision_digits`.
///
/// Truncates at `M` terms. When the integral tail bound `M^{1-s}/(s-1)` is
/// already below the target for a small `M`, the partial sum is returned as
/// is. Otherwise the tail is evaluated by Euler–Maclaurin: the integral term
/// `M^{1-s}/(s-1)`, the half end-point term, and Bernoulli corrections until
/// the first omitted one (which bounds the remainder) is below the target.
pub fn zeta_numeric(s: i64, precision_digits: u32) -> Result<ApproxScalar> {
    if s < 2 {
        return Err(Error::domain("zeta_numeric", format!("s = {s} must be >= 2")));
    }
    if s > i64::from(i32::MAX) {
        return Err(Error::domain("zeta_numeric", format!("s = {s} too large")));
    }
    let bits = working_bits(precision_digits);
    let value = if let Some(m) = direct_truncation(s, bits) {
        partial_sum(s, m, bits)
    } else {
        euler_maclaurin(s, bits)?
    };
    ApproxScalar::from_float(&value, precision_digits)
        .inspect(|v| debug_assert_eq!(v.sign(), Sign::Positive))
}

/// Smallest `M <= DIRECT_SUM_LIMIT` with `M^{1-s}/(s-1) < 2^-bits`, if any.
fn direct_truncation(s: i64, bits: u32) -> Option<u64> {
    // log2 of the tail bound at M: (1-s) log2 M - log2(s-1)
    let s_minus_one = (s - 1) as f64;
    let needed = (f64::from(bits) + 2.0 - s_minus_one.log2()) / s_minus_one;
    if needed > (DIRECT_SUM_LIMIT as f64).log2() {
        return None;
    }
    Some((needed.exp2().ceil() as u64).max(1))
}

fn partial_sum(s: i64, m: u64, bits: u32) -> Float {
    let exponent = -(s as i32);
    let mut acc = Float::with_val(bits, 0);
    // smallest terms first
    for k in (1..=m).rev() {
        acc += Float::with_val(bits, k).pow(exponent);
    }
    acc
}

fn euler_maclaurin(s: i64, bits: u32) -> Result<Float> {
    let cutoff = (f64::from(bits) / 2.0).ceil() as u64 + s as u64;
    let s_f = Float::with_val(bits, s);
    let mut acc = partial_sum(s, cutoff - 1, bits);
    let m = Float::with_val(bits, cutoff);
    let m_pow_neg_s = Float::with_val(bits, (&m).pow(-(s as i32)));
    // integral tail M^{1-s}/(s-1)
    acc += Float::with_val(bits, &m_pow_neg_s * &m) / (s - 1);
    acc += Float::with_val(bits, &m_pow_neg_s / 2u32);

    let tolerance = Float::with_val(bits, Float::i_exp(1, -(bits as i32)));
    let inv_m2 = Float::with_val(bits, m.square_ref()).recip();
    // rising = s (s+1) ... (s+2j-2), m_pow = M^{-s-2j+1}
    let mut rising = s_f.clone();
    let mut m_pow = Float::with_val(bits, &m_pow_neg_s / &m);
    let mut two_j_factorial = Rational::from(2);
    for j in 1..=MAX_CORRECTION_TERMS {
        let coeff = bernoulli_even(j) / &two_j_factorial;
        let term = Float::with_val(bits, &coeff * &rising) * &m_pow;
        acc += &term;
        if Float::with_val(bits, term.abs_ref()) < tolerance {
            return Ok(acc);
        }
        let jj = 2 * j as u64;
        rising *= Float::with_val(bits, &s_f + (jj - 1)) * Float::with_val(bits, &s_f + jj);
        m_pow *= &inv_m2;
        two_j_factorial *= Rational::from((jj + 1) * (jj + 2));
    }
    Err(Error::domain(
        "zeta_numeric",
        "Euler–Maclaurin correction did not converge",
    ))
}
