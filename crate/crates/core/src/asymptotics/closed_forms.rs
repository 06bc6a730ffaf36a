//! Gaussian-integral forms of the two binomial sums, the limiting shape
//! function `f(λ) = √((6+2λ)/(6+λ))`, and the predicted frequency ratio
//! `√(2/(3πg)) · 4^{-g} · f(λ)`.
//!
//! Everything scaling like `2^{Θ(g)}` is returned as an [`ApproxScalar`].

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::exactmath::{working_bits, ApproxScalar, Sign};

fn check_lambda(op: &'static str, lambda: f64) -> Result<()> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::domain(op, format!("lambda = {lambda} must be >= 0")));
    }
    Ok(())
}

fn check_genus(op: &'static str, g: f64) -> Result<()> {
    if !(g > 0.0) || !g.is_finite() {
        return Err(Error::domain(op, format!("g = {g} must be a finite positive number")));
    }
    Ok(())
}

pub fn f_lambda(lambda: f64) -> Result<f64> {
    check_lambda("f_lambda", lambda)?;
    if lambda.is_infinite() {
        return Ok(std::f64::consts::SQRT_2);
    }
    Ok(((6.0 + 2.0 * lambda) / (6.0 + lambda)).sqrt())
}

/// [`f_lambda`] at the precision of `lambda`.
pub fn f_lambda_float(lambda: &Float) -> Float {
    let bits = lambda.prec();
    let top = Float::with_val(bits, lambda * 2u32) + 6u32;
    let bottom = Float::with_val(bits, lambda + 6u32);
    (top / bottom).sqrt()
}

/// `2^{(2λ+4)g - 4} / √(π g (λ+6))`.
pub fn gaussian_num_asym(g: f64, lambda: f64, precision_digits: u32) -> Result<ApproxScalar> {
    check_genus("gaussian_num_asym", g)?;
    check_lambda("gaussian_num_asym", lambda)?;
    let bits = working_bits(precision_digits);
    let g = Float::with_val(bits, g);
    let lambda = Float::with_val(bits, lambda);
    let exponent = Float::with_val(bits, &lambda * 2u32) + 4u32;
    let exponent = Float::with_val(bits, exponent * &g) - 4u32;
    let spread = Float::with_val(bits, Constant::Pi) * &g * Float::with_val(bits, &lambda + 6u32);
    let log2 = exponent - spread.log2() / 2u32;
    Ok(ApproxScalar::from_log2(log2, Sign::Positive, precision_digits))
}

/// `√(3/(3+λ)) · 2^{(2λ+6)g - 7}`.
pub fn gaussian_den_asym(g: f64, lambda: f64, precision_digits: u32) -> Result<ApproxScalar> {
    check_genus("gaussian_den_asym", g)?;
    check_lambda("gaussian_den_asym", lambda)?;
    let bits = working_bits(precision_digits);
    let g = Float::with_val(bits, g);
    let lambda = Float::with_val(bits, lambda);
    let exponent = Float::with_val(bits, &lambda * 2u32) + 6u32;
    let exponent = Float::with_val(bits, exponent * &g) - 7u32;
    let shrink = Float::with_val(bits, 3u32) / Float::with_val(bits, &lambda + 3u32);
    let log2 = exponent + shrink.log2() / 2u32;
    Ok(ApproxScalar::from_log2(log2, Sign::Positive, precision_digits))
}

/// `√(2/(3πg)) · 4^{-g} · f(λ)` for real `g > 0`, `λ >= 0`.
pub fn prediction_at(g: &Float, lambda: &Float, precision_digits: u32) -> ApproxScalar {
    let bits = working_bits(precision_digits);
    let g = Float::with_val(bits, g);
    let lambda = Float::with_val(bits, lambda);
    let spread = Float::with_val(bits, Constant::Pi) * 3u32 * &g;
    let prefactor = (Float::with_val(bits, 2u32) / spread).log2() / 2u32;
    let log2 = prefactor - Float::with_val(bits, &g * 2u32) + f_lambda_float(&lambda).log2();
    ApproxScalar::from_log2(log2, Sign::Positive, precision_digits)
}

/// Predicted separating/nonseparating ratio at integer `(g, n)`, `λ = n/g`.
pub fn conjecture_prediction(g: i64, n: i64, precision_digits: u32) -> Result<ApproxScalar> {
    if g < 1 {
        return Err(Error::domain("conjecture_prediction", format!("g = {g} must be >= 1")));
    }
    if n < 0 {
        return Err(Error::domain("conjecture_prediction", format!("n = {n} must be >= 0")));
    }
    let bits = working_bits(precision_digits);
    let g_f = Float::with_val(bits, g);
    let lambda = Float::with_val(bits, n) / &g_f;
    Ok(prediction_at(&g_f, &lambda, precision_digits))
}

/// `|(1/4) · num_asym / den_asym ÷ prediction - 1|`: zero up to rounding,
/// since the three closed forms are algebraically tied together by `f`.
pub fn algebraic_consistency_check(g: f64, lambda: f64, precision_digits: u32) -> Result<f64> {
    let num = gaussian_num_asym(g, lambda, precision_digits)?;
    let den = gaussian_den_asym(g, lambda, precision_digits)?;
    let bits = working_bits(precision_digits);
    let prediction = prediction_at(
        &Float::with_val(bits, g),
        &Float::with_val(bits, lambda),
        precision_digits,
    );
    let quarter = Float::with_val(bits, -2);
    let ratio = num.div(&den)?.mul_pow2(&quarter);
    Ok(ratio.relative_error(&prediction)?.to_f64())
}
