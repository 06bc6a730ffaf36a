use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Exact rational number. Always in lowest terms with a positive denominator
/// (guaranteed by `rug::Rational` canonicalisation).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactScalar(Rational);

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar(Rational::new())
    }

    pub fn one() -> Self {
        ExactScalar(Rational::from(1))
    }

    /// `num / den`; fails when `den == 0`.
    pub fn ratio(num: impl Into<Integer>, den: impl Into<Integer>) -> Result<Self> {
        let den = den.into();
        if den == 0 {
            return Err(Error::domain("ExactScalar::ratio", "zero denominator"));
        }
        Ok(ExactScalar(Rational::from((num.into(), den))))
    }

    pub fn from_integer(value: impl Into<Integer>) -> Self {
        ExactScalar(Rational::from(value.into()))
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn into_rational(self) -> Rational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.cmp0() == Ordering::Equal
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        match self.0.cmp0() {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        ExactScalar(self.0.clone().abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("ExactScalar::recip", "reciprocal of zero"));
        }
        Ok(ExactScalar(self.0.clone().recip()))
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> Integer {
        self.0.clone().floor().into_numer_denom().0
    }

    /// Always `p/q`, including for integers (`4/1`).
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }

    /// Nearest `f64`. Saturates to infinity for values beyond the `f64` range.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

impl From<Rational> for ExactScalar {
    fn from(value: Rational) -> Self {
        ExactScalar(value)
    }
}

impl From<Integer> for ExactScalar {
    fn from(value: Integer) -> Self {
        ExactScalar(Rational::from(value))
    }
}

impl From<i64> for ExactScalar {
    fn from(value: i64) -> Self {
        ExactScalar(Rational::from(value))
    }
}

impl From<u32> for ExactScalar {
    fn from(value: u32) -> Self {
        ExactScalar(Rational::from(value))
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Accepts `p/q`, plain integers and terminating decimals (`2.5`, `-0.125`).
/// Decimals are converted exactly.
impl FromStr for ExactScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty rational".into()));
        }
        if let Some((num, den)) = s.split_once('/') {
            let num = parse_integer(num)?;
            let den = parse_integer(den)?;
            return ExactScalar::ratio(num, den)
                .map_err(|_| Error::Parse(format!("zero denominator in `{s}`")));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let negative = int_part.starts_with('-');
            let digits_ok = !frac_part.is_empty() && frac_part.bytes().all(|b| b.is_ascii_digit());
            if !digits_ok {
                return Err(Error::Parse(format!("malformed decimal `{s}`")));
            }
            let whole = if int_part.is_empty() || int_part == "-" || int_part == "+" {
                Integer::new()
            } else {
                parse_integer(int_part)?
            };
            let frac = parse_integer(frac_part)?;
            let scale = Integer::from(Integer::u_pow_u(10, frac_part.len() as u32));
            let magnitude = Rational::from(whole.abs()) + Rational::from((frac, scale));
            let value = if negative { -magnitude } else { magnitude };
            return Ok(ExactScalar(value));
        }
        Ok(ExactScalar::from_integer(parse_integer(s)?))
    }
}

fn parse_integer(s: &str) -> Result<Integer> {
    let s = s.trim();
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("malformed integer `{s}`")));
    }
    Integer::from_str(s).map_err(|e| Error::Parse(format!("`{s}`: {e}")))
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                ExactScalar(Rational::from((&self.0).$method(&rhs.0)))
            }
        }

        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar(self.0.$method(rhs.0))
            }
        }

        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                ExactScalar(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

/// Panics on division by zero, like the primitive numeric types. Use
/// [`ExactScalar::recip`] for a checked reciprocal.
impl Div<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        assert!(!rhs.is_zero(), "ExactScalar division by zero");
        ExactScalar(Rational::from(&self.0 / &rhs.0))
    }
}

impl Div<ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        &self / &rhs
    }
}

impl Div<&ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        &self / rhs
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        let mut acc = Rational::new();
        for x in iter {
            acc += x.0;
        }
        ExactScalar(acc)
    }
}
