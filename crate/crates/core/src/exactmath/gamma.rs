//! log-Γ by argument shift plus the Stirling series, and the Γ-extended
//! binomial built on it.
//!
//! For real `z > 0` the Stirling remainder after `K` terms is bounded in
//! magnitude by the first omitted term, so the series is summed until a term
//! drops below `2^-bits` and that bound is the error certificate. The shift
//! target grows with the requested precision: the smallest term of the series
//! is about `e^{-2πz}`, which must sit below `2^-bits`.

use std::sync::Mutex;

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use super::approx::{working_bits, ApproxScalar, Sign};
use crate::error::{Error, Result};

const MIN_SHIFT_TARGET: u32 = 20;
const MAX_SERIES_TERMS: usize = 4096;

// B_0, B_1, ..., computed on demand and shared across threads.
static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Exact Bernoulli number `B_{2k}` (with `B_1 = -1/2` convention, irrelevant here).
pub fn bernoulli_even(k: usize) -> Rational {
    let index = 2 * k;
    let mut table = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(Rational::from(1));
    }
    while table.len() <= index {
        let m = table.len();
        // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j; odd B_j vanish for j >= 3
        let mut acc = Rational::new();
        for (j, b) in table.iter().enumerate() {
            if j >= 3 && j % 2 == 1 {
                continue;
            }
            let c = Integer::from(Integer::binomial_u(m as u32 + 1, j as u32));
            acc += Rational::from(b * c);
        }
        let value = -acc / Rational::from(m as u32 + 1);
        table.push(value);
    }
    table[index].clone()
}

fn is_pole(x: &Float) -> bool {
    x.is_integer() && x.cmp0() != Some(std::cmp::Ordering::Greater)
}

/// `(ln|Γ(x)|, sign Γ(x))` at `precision_digits` decimal digits.
pub fn ln_gamma(x: &Float, precision_digits: u32) -> Result<(Float, Sign)> {
    if !x.is_finite() {
        return Err(Error::domain("ln_gamma", "non-finite argument"));
    }
    if is_pole(x) {
        return Err(Error::domain(
            "ln_gamma",
            format!("pole of Γ at nonpositive integer {}", x.to_f64()),
        ));
    }
    let bits = working_bits(precision_digits);
    let x = Float::with_val(bits.max(x.prec()), x);
    if x < 0.5 {
        // Γ(x) Γ(1-x) = π / sin(πx), with Γ(1-x) > 0 here
        let pi = Float::with_val(bits, Constant::Pi);
        let sin = Float::with_val(bits, &pi * &x).sin();
        let one_minus = Float::with_val(bits, 1 - &x);
        let (ln_reflected, _) = ln_gamma_positive(&one_minus, bits)?;
        let ln = Float::with_val(bits, pi.ln() - Float::with_val(bits, sin.abs_ref()).ln())
            - ln_reflected;
        let sign = if sin.cmp0() == Some(std::cmp::Ordering::Less) {
            Sign::Negative
        } else {
            Sign::Positive
        };
        return Ok((ln, sign));
    }
    Ok((ln_gamma_positive(&x, bits)?.0, Sign::Positive))
}

fn ln_gamma_positive(x: &Float, bits: u32) -> Result<(Float, Sign)> {
    let shift_target = MIN_SHIFT_TARGET.max((0.12 * f64::from(bits)).ceil() as u32 + 5);

    // Γ(x) = Γ(x + N) / (x (x+1) ... (x+N-1))
    let mut z = Float::with_val(bits, x);
    let mut shift_product = Float::with_val(bits, 1);
    while z < shift_target {
        shift_product *= &z;
        z += 1u32;
    }

    let half = Float::with_val(bits, 0.5);
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let ln_z = Float::with_val(bits, z.ln_ref());
    let mut sum = Float::with_val(bits, &z - &half) * &ln_z - &z + two_pi.ln() / 2u32;

    let tolerance = Float::with_val(bits, Float::i_exp(1, -(bits as i32)));
    let inv_z2 = Float::with_val(bits, z.square_ref()).recip();
    let mut z_pow = Float::with_val(bits, z.recip_ref()); // z^{-(2k-1)}
    let mut previous = Float::with_val(bits, f64::INFINITY);
    for k in 1..=MAX_SERIES_TERMS {
        let coeff = bernoulli_even(k) / Rational::from(2 * k as u64 * (2 * k as u64 - 1));
        let term = Float::with_val(bits, &coeff * &z_pow);
        let magnitude = Float::with_val(bits, term.abs_ref());
        if magnitude > previous {
            return Err(Error::domain(
                "ln_gamma",
                "Stirling series diverged before reaching the requested precision",
            ));
        }
        sum += &term;
        if magnitude < tolerance {
            sum -= shift_product.ln();
            return Ok((sum, Sign::Positive));
        }
        previous = magnitude;
        z_pow *= &inv_z2;
    }
    Err(Error::domain("ln_gamma", "Stirling series did not converge"))
}

/// `Γ(a+1) / (Γ(b+1) Γ(a-b+1))` in log scale.
pub fn binom_real(a: f64, b: f64, precision_digits: u32) -> Result<ApproxScalar> {
    let bits = working_bits(precision_digits);
    let a_f = Float::with_val(bits, a);
    let b_f = Float::with_val(bits, b);
    let args = [
        ("a+1", Float::with_val(bits, &a_f + 1u32)),
        ("b+1", Float::with_val(bits, &b_f + 1u32)),
        ("a-b+1", Float::with_val(bits, &a_f - &b_f) + 1u32),
    ];
    for (name, arg) in &args {
        if !arg.is_finite() {
            return Err(Error::domain("binom_real", format!("{name} is not finite")));
        }
        if is_pole(arg) {
            return Err(Error::domain(
                "binom_real",
                format!("{name} = {} is a pole of Γ", arg.to_f64()),
            ));
        }
    }
    let (ln_top, s_top) = ln_gamma(&args[0].1, precision_digits)?;
    let (ln_b, s_b) = ln_gamma(&args[1].1, precision_digits)?;
    let (ln_c, s_c) = ln_gamma(&args[2].1, precision_digits)?;
    let ln = ln_top - ln_b - ln_c;
    let negatives = [s_top, s_b, s_c]
        .iter()
        .filter(|s| **s == Sign::Negative)
        .count();
    let sign = if negatives % 2 == 0 {
        Sign::Positive
    } else {
        Sign::Negative
    };
    Ok(ApproxScalar::from_ln(&ln, sign, precision_digits))
}
