use std::cmp::Ordering;
use std::fmt;

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

/// Decimal digits of working precision used when the caller does not say.
pub const DEFAULT_PRECISION: u32 = 30;

/// Extra mantissa bits carried on top of the requested decimal precision.
/// Covers the integer part of `log2` magnitudes up to ~2^40 plus rounding
/// accumulated over a few hundred operations.
pub const GUARD_BITS: u32 = 64;

/// Mantissa bits needed to carry `digits` decimal digits plus guard bits.
pub fn working_bits(digits: u32) -> u32 {
    (f64::from(digits.max(1)) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of_float(x: &Float) -> Sign {
        match x.cmp0() {
            Some(Ordering::Less) => Sign::Negative,
            Some(Ordering::Greater) => Sign::Positive,
            _ => Sign::Zero,
        }
    }

    fn times(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }

    fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
            Sign::Zero => Sign::Zero,
        }
    }
}

/// A real number stored as `sign * 2^log2_magnitude`.
///
/// Used for every quantity whose size scales like `2^{Θ(g)}`; nothing here
/// ever materialises the linear value unless asked to via [`to_float`].
///
/// [`to_float`]: ApproxScalar::to_float
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxScalar {
    log2_magnitude: Float,
    sign: Sign,
    precision_digits: u32,
}

impl ApproxScalar {
    pub fn zero(precision_digits: u32) -> Self {
        ApproxScalar {
            log2_magnitude: Float::new(working_bits(precision_digits)),
            sign: Sign::Zero,
            precision_digits,
        }
    }

    pub fn one(precision_digits: u32) -> Self {
        Self::pow2(Float::new(working_bits(precision_digits)), precision_digits)
    }

    /// `2^exponent`.
    pub fn pow2(exponent: Float, precision_digits: u32) -> Self {
        Self::from_log2(exponent, Sign::Positive, precision_digits)
    }

    /// `sign * 2^log2_magnitude`. The magnitude is ignored when `sign` is zero.
    pub fn from_log2(log2_magnitude: Float, sign: Sign, precision_digits: u32) -> Self {
        let bits = working_bits(precision_digits);
        let log2_magnitude = if sign == Sign::Zero {
            Float::new(bits)
        } else {
            Float::with_val(bits, log2_magnitude)
        };
        ApproxScalar {
            log2_magnitude,
            sign,
            precision_digits,
        }
    }

    /// `sign * e^ln_magnitude`.
    pub fn from_ln(ln_magnitude: &Float, sign: Sign, precision_digits: u32) -> Self {
        let bits = working_bits(precision_digits);
        let ln2 = Float::with_val(bits, Constant::Log2);
        Self::from_log2(Float::with_val(bits, ln_magnitude / &ln2), sign, precision_digits)
    }

    /// Linear-scale value to log-scale. Infinite or NaN inputs are rejected.
    pub fn from_float(value: &Float, precision_digits: u32) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::domain("ApproxScalar::from_float", "non-finite value"));
        }
        let sign = Sign::of_float(value);
        if sign == Sign::Zero {
            return Ok(Self::zero(precision_digits));
        }
        let bits = working_bits(precision_digits);
        let log2 = Float::with_val(bits, value.abs_ref()).log2();
        Ok(Self::from_log2(log2, sign, precision_digits))
    }

    pub fn from_f64(value: f64, precision_digits: u32) -> Result<Self> {
        Self::from_float(&Float::with_val(64, value), precision_digits)
    }

    pub fn log2_magnitude(&self) -> &Float {
        &self.log2_magnitude
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn precision_digits(&self) -> u32 {
        self.precision_digits
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    fn bits(&self) -> u32 {
        working_bits(self.precision_digits)
    }

    /// Natural log of the magnitude.
    pub fn ln_magnitude(&self) -> Float {
        let bits = self.bits();
        let ln2 = Float::with_val(bits, Constant::Log2);
        Float::with_val(bits, &self.log2_magnitude * &ln2)
    }

    /// The represented value as a linear-scale float at working precision.
    /// MPFR's exponent range (about ±2^30 bits) bounds what can be expanded.
    pub fn to_float(&self) -> Float {
        let bits = self.bits();
        match self.sign {
            Sign::Zero => Float::new(bits),
            Sign::Positive => Float::with_val(bits, self.log2_magnitude.exp2_ref()),
            Sign::Negative => -Float::with_val(bits, self.log2_magnitude.exp2_ref()),
        }
    }

    /// Nearest `f64`; overflows to ±inf and underflows to 0 like the primitive.
    pub fn to_f64(&self) -> f64 {
        self.to_float().to_f64()
    }

    fn combined_precision(&self, other: &ApproxScalar) -> u32 {
        self.precision_digits.min(other.precision_digits)
    }

    pub fn mul(&self, other: &ApproxScalar) -> ApproxScalar {
        let digits = self.combined_precision(other);
        let sign = self.sign.times(other.sign);
        if sign == Sign::Zero {
            return Self::zero(digits);
        }
        let bits = working_bits(digits);
        let log2 = Float::with_val(bits, &self.log2_magnitude + &other.log2_magnitude);
        Self::from_log2(log2, sign, digits)
    }

    pub fn div(&self, other: &ApproxScalar) -> Result<ApproxScalar> {
        if other.is_zero() {
            return Err(Error::domain("ApproxScalar::div", "division by zero"));
        }
        let digits = self.combined_precision(other);
        if self.is_zero() {
            return Ok(Self::zero(digits));
        }
        let bits = working_bits(digits);
        let log2 = Float::with_val(bits, &self.log2_magnitude - &other.log2_magnitude);
        Ok(Self::from_log2(log2, self.sign.times(other.sign), digits))
    }

    pub fn recip(&self) -> Result<ApproxScalar> {
        Self::one(self.precision_digits).div(self)
    }

    /// Multiply by `2^shift`.
    pub fn mul_pow2(&self, shift: &Float) -> ApproxScalar {
        if self.is_zero() {
            return self.clone();
        }
        let log2 = Float::with_val(self.bits(), &self.log2_magnitude + shift);
        Self::from_log2(log2, self.sign, self.precision_digits)
    }

    /// Raise the magnitude to a real power, keeping the sign (only meaningful
    /// for positive values or odd integer exponents).
    pub fn powf(&self, exponent: &Float) -> ApproxScalar {
        if self.is_zero() {
            return self.clone();
        }
        let log2 = Float::with_val(self.bits(), &self.log2_magnitude * exponent);
        Self::from_log2(log2, self.sign, self.precision_digits)
    }

    pub fn sqrt(&self) -> Result<ApproxScalar> {
        match self.sign {
            Sign::Negative => Err(Error::domain("ApproxScalar::sqrt", "negative argument")),
            Sign::Zero => Ok(self.clone()),
            Sign::Positive => {
                let log2 = Float::with_val(self.bits(), &self.log2_magnitude / 2u32);
                Ok(Self::from_log2(log2, Sign::Positive, self.precision_digits))
            }
        }
    }

    pub fn neg(&self) -> ApproxScalar {
        ApproxScalar {
            log2_magnitude: self.log2_magnitude.clone(),
            sign: self.sign.flip(),
            precision_digits: self.precision_digits,
        }
    }

    pub fn abs(&self) -> ApproxScalar {
        let sign = if self.is_zero() { Sign::Zero } else { Sign::Positive };
        ApproxScalar {
            log2_magnitude: self.log2_magnitude.clone(),
            sign,
            precision_digits: self.precision_digits,
        }
    }

    /// Sum computed as log-sum-exp, so neither operand is expanded.
    pub fn add(&self, other: &ApproxScalar) -> ApproxScalar {
        let digits = self.combined_precision(other);
        if self.is_zero() {
            return Self::from_log2(other.log2_magnitude.clone(), other.sign, digits);
        }
        if other.is_zero() {
            return Self::from_log2(self.log2_magnitude.clone(), self.sign, digits);
        }
        let bits = working_bits(digits);
        let (big, small) = if self.log2_magnitude >= other.log2_magnitude {
            (self, other)
        } else {
            (other, self)
        };
        // t = |small| / |big| in (0, 1]
        let diff = Float::with_val(bits, &small.log2_magnitude - &big.log2_magnitude);
        let t = Float::with_val(bits, diff.exp2_ref());
        let factor = if big.sign == small.sign {
            Float::with_val(bits, 1 + &t)
        } else {
            Float::with_val(bits, 1 - &t)
        };
        if factor.is_zero() {
            return Self::zero(digits);
        }
        let log2 = Float::with_val(bits, &big.log2_magnitude + factor.log2());
        Self::from_log2(log2, big.sign, digits)
    }

    pub fn sub(&self, other: &ApproxScalar) -> ApproxScalar {
        self.add(&other.neg())
    }

    /// `|self / other - 1|` as a float; `other` must be nonzero.
    pub fn relative_error(&self, other: &ApproxScalar) -> Result<Float> {
        let q = self.div(other)?;
        let bits = working_bits(q.precision_digits);
        Ok(Float::with_val(bits, q.to_float() - 1u32).abs())
    }

    /// Total order on the represented real values.
    pub fn compare(&self, other: &ApproxScalar) -> Ordering {
        let rank = |s: Sign| match s {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        };
        match rank(self.sign).cmp(&rank(other.sign)) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let by_magnitude = self
            .log2_magnitude
            .partial_cmp(&other.log2_magnitude)
            .unwrap_or(Ordering::Equal);
        match self.sign {
            Sign::Zero => Ordering::Equal,
            Sign::Positive => by_magnitude,
            Sign::Negative => by_magnitude.reverse(),
        }
    }

    /// Decimal rendering with exactly `precision_digits` significant digits.
    pub fn to_decimal_string(&self) -> String {
        decimal_string(&self.to_float(), self.precision_digits)
    }
}

impl fmt::Display for ApproxScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

/// Locale-independent decimal rendering with exactly `digits` significant
/// digits (trailing zeros kept). Positional notation for decimal exponents in
/// `[-6, 21)`, scientific `d.ddd…e±x` outside it.
pub fn decimal_string(value: &Float, digits: u32) -> String {
    if value.is_nan() {
        return "nan".into();
    }
    if value.is_infinite() {
        return if value.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    if value.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1) as usize;
    // value = 0.MANTISSA * 10^exp
    let (negative, mantissa, exp) = value.to_sign_string_exp(10, Some(digits));
    let exp = exp.unwrap_or(0);
    let mut out = String::with_capacity(digits + 8);
    if negative {
        out.push('-');
    }
    let point = exp as i64; // digits before the decimal point
    if (1..=21).contains(&point) {
        let point = point as usize;
        if point >= mantissa.len() {
            out.push_str(&mantissa);
            out.extend(std::iter::repeat_n('0', point - mantissa.len()));
        } else {
            out.push_str(&mantissa[..point]);
            out.push('.');
            out.push_str(&mantissa[point..]);
        }
    } else if (-5..=0).contains(&point) {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(&mantissa);
    } else {
        out.push_str(&mantissa[..1]);
        if mantissa.len() > 1 {
            out.push('.');
            out.push_str(&mantissa[1..]);
        }
        out.push('e');
        out.push_str(&(point - 1).to_string());
    }
    out
}
