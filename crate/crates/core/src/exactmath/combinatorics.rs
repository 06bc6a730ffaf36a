use rug::Integer;

use super::ExactScalar;
use crate::error::{Error, Result};

/// `C(a, b)` for nonnegative `a`, zero when `b` falls outside `[0, a]`.
///
/// This is the integer kernel every binomial sum goes through; it does not
/// allocate an `ExactScalar`.
pub fn binom(a: u32, b: i64) -> Integer {
    if b < 0 || b > i64::from(a) {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(a, b as u32))
}

/// Integer binomial coefficient with the zero convention outside `0 <= b <= a`.
pub fn binom_int(a: i64, b: i64) -> Result<ExactScalar> {
    if a < 0 {
        return Err(Error::domain(
            "binom_int",
            format!("upper index a = {a} is negative"),
        ));
    }
    let a = u32::try_from(a)
        .map_err(|_| Error::domain("binom_int", format!("upper index a = {a} too large")))?;
    Ok(ExactScalar::from(binom(a, b)))
}

pub fn factorial(m: i64) -> Result<ExactScalar> {
    if m < 0 {
        return Err(Error::domain("factorial", format!("m = {m} is negative")));
    }
    let m = u32::try_from(m).map_err(|_| Error::domain("factorial", "argument too large"))?;
    Ok(ExactScalar::from(Integer::from(Integer::factorial(m))))
}

/// `m!!` with `(-1)!! = 0!! = 1`.
pub fn double_factorial(m: i64) -> Result<ExactScalar> {
    Ok(ExactScalar::from(double_factorial_integer(m)?))
}

pub(crate) fn double_factorial_integer(m: i64) -> Result<Integer> {
    match m {
        i64::MIN..=-2 => Err(Error::domain(
            "double_factorial",
            format!("m = {m} is below -1"),
        )),
        -1 => Ok(Integer::from(1)),
        _ => {
            let m = u32::try_from(m)
                .map_err(|_| Error::domain("double_factorial", "argument too large"))?;
            Ok(Integer::from(Integer::factorial_2(m)))
        }
    }
}
