use rug::Integer;

use crate::error::{Error, Result};
use crate::exactmath::ExactScalar;

/// Both sides of the geometric tail bound
/// `Σ_{k<=⌊sy⌋} C(y,k) < (1-s)/(1-2s) · C(y, ⌊sy⌋)`,
/// plus the mirrored region `k >= y - ⌊sy⌋`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailBoundReport {
    pub y: u32,
    pub s: ExactScalar,
    pub exact_tail: ExactScalar,
    pub geometric_bound: ExactScalar,
    pub holds: bool,
    pub margin: ExactScalar,
    pub mirrored_tail: ExactScalar,
    pub mirrored_bound: ExactScalar,
    pub mirrored_holds: bool,
}

impl TailBoundReport {
    pub fn both_hold(&self) -> bool {
        self.holds && self.mirrored_holds
    }
}

/// Checks the tail bound in exact arithmetic. `s` must lie in `(0, 1/2)`.
pub fn tail_bound_check(y: u32, s: &ExactScalar) -> Result<TailBoundReport> {
    if y < 1 {
        return Err(Error::domain("tail_bound_check", "y must be >= 1"));
    }
    let half = ExactScalar::ratio(1, 2)?;
    if s.signum() <= 0 || *s >= half {
        return Err(Error::domain(
            "tail_bound_check",
            format!("s = {s} outside (0, 1/2)"),
        ));
    }
    let cutoff = (s * &ExactScalar::from(y)).floor();
    let cutoff = cutoff.to_u32().expect("0 <= ⌊sy⌋ < y");
    let one = ExactScalar::one();
    let factor = (&one - s) / (&one - &(s + s));

    // left tail with C(y, k+1) = C(y, k) (y-k)/(k+1)
    let mut term = Integer::from(1);
    let mut tail = Integer::new();
    for k in 0..=cutoff {
        if k > 0 {
            term *= y - (k - 1);
            term /= k;
        }
        tail += &term;
    }
    let peak = term.clone();

    // mirrored tail from the top: C(y, k-1) = C(y, k) k/(y-k+1), k = y, y-1, ...
    let mut term = Integer::from(1);
    let mut mirrored = Integer::new();
    for k in (y - cutoff..=y).rev() {
        if k < y {
            term *= k + 1;
            term /= y - k;
        }
        mirrored += &term;
    }
    let mirrored_peak = term;

    let exact_tail = ExactScalar::from(tail);
    let geometric_bound = &factor * &ExactScalar::from(peak);
    let margin = &geometric_bound - &exact_tail;
    let mirrored_tail = ExactScalar::from(mirrored);
    let mirrored_bound = &factor * &ExactScalar::from(mirrored_peak);
    Ok(TailBoundReport {
        y,
        s: s.clone(),
        holds: margin.signum() > 0,
        mirrored_holds: mirrored_bound > mirrored_tail,
        exact_tail,
        geometric_bound,
        margin,
        mirrored_tail,
        mirrored_bound,
    })
}
