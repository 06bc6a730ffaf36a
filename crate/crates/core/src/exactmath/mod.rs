//! Arbitrary-precision kernel: exact rationals, binomials, factorials,
//! log-Γ, ζ, and the log-scale real type used for astronomically large or
//! small quantities.

mod approx;
mod combinatorics;
mod gamma;
mod scalar;
mod zeta;

use rug::Float;

pub use approx::{decimal_string, working_bits, ApproxScalar, Sign, DEFAULT_PRECISION, GUARD_BITS};
pub use combinatorics::{binom, binom_int, double_factorial, factorial};
pub use gamma::{bernoulli_even, binom_real, ln_gamma};
pub use scalar::ExactScalar;
pub use zeta::zeta_numeric;


use crate::error::{Error, Result};

/// `sign(x) * 2^{log2|x|}` from the bit lengths of numerator and denominator
/// plus the log of their normalised mantissas.
pub fn log2_of_exact(x: &ExactScalar, precision_digits: u32) -> Result<ApproxScalar> {
    if x.is_zero() {
        return Err(Error::domain("log2_of_exact", "log of zero"));
    }
    let bits = working_bits(precision_digits);
    let num_bits = x.numer().significant_bits();
    let den_bits = x.denom().significant_bits();
    // mantissas in [1/2, 1)
    let num_mant = Float::with_val(bits, &*x.numer().as_abs()) >> num_bits;
    let den_mant = Float::with_val(bits, x.denom()) >> den_bits;
    let mut log2 = Float::with_val(bits, i64::from(num_bits) - i64::from(den_bits));
    log2 += num_mant.log2();
    log2 -= den_mant.log2();
    let sign = if x.signum() < 0 {
        Sign::Negative
    } else {
        Sign::Positive
    };
    Ok(ApproxScalar::from_log2(log2, sign, precision_digits))
}

/// Like [`log2_of_exact`] but maps zero to the zero `ApproxScalar`.
pub fn approx_of_exact(x: &ExactScalar, precision_digits: u32) -> ApproxScalar {
    if x.is_zero() {
        ApproxScalar::zero(precision_digits)
    } else {
        log2_of_exact(x, precision_digits).expect("nonzero")
    }
}
