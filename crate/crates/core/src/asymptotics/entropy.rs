use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::exactmath::{working_bits, ApproxScalar, Sign};

/// `H(p) = -p ln p - (1-p) ln(1-p)` in nats, extended by continuity to
/// `H(0) = H(1) = 0`.
pub fn entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("entropy", format!("p = {p} outside [0, 1]")));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.ln() - (1.0 - p) * (-p).ln_1p())
}

/// `ln 2 - x²/2 - H(1/2 + x/2)`, nonnegative on `(-1, 1)`.
///
/// Evaluated as `((1+x) ln(1+x) + (1-x) ln(1-x))/2 - x²/2`, which is the same
/// quantity without the cancellation against `ln 2` near `x = 0`.
pub fn entropy_quadratic_gap(x: f64) -> Result<f64> {
    if x.is_nan() || x.abs() >= 1.0 {
        return Err(Error::domain(
            "entropy_quadratic_gap",
            format!("x = {x} outside (-1, 1)"),
        ));
    }
    let curvature = 0.5 * ((1.0 + x) * x.ln_1p() + (1.0 - x) * (-x).ln_1p());
    Ok(curvature - 0.5 * x * x)
}

fn entropy_float(p: &Float) -> Float {
    let bits = p.prec();
    let q = Float::with_val(bits, 1 - p);
    let a = Float::with_val(bits, p * Float::with_val(bits, p.ln_ref()));
    let b = Float::with_val(bits, &q * Float::with_val(bits, q.ln_ref()));
    -(a + b)
}

/// `e^{y H(p)} / √(2π y p(1-p))`, the leading Stirling form of `C(y, py)`.
pub fn stirling_binom_approx(y: f64, p: f64, precision_digits: u32) -> Result<ApproxScalar> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::domain("stirling_binom_approx", format!("y = {y} must be > 0")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(
            "stirling_binom_approx",
            format!("p = {p} outside the open interval (0, 1)"),
        ));
    }
    let bits = working_bits(precision_digits);
    let y = Float::with_val(bits, y);
    let p = Float::with_val(bits, p);
    let exponent = Float::with_val(bits, &y * entropy_float(&p));
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let variance = Float::with_val(bits, &y * &p) * Float::with_val(bits, 1 - &p);
    let ln_value = exponent - Float::with_val(bits, two_pi * variance).ln() / 2u32;
    Ok(ApproxScalar::from_ln(&ln_value, Sign::Positive, precision_digits))
}
