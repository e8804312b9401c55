//! Floating point scalar abstraction shared by every solver.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar the solvers are generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance for probability rows and reward ranges.
    ///
    /// `1e-12` for `f64`; widened to a few ulps of one for narrower types.
    fn prob_tol() -> Self {
        Self::tol(1e-12)
    }

    /// `x` as an absolute tolerance, floored at a few ulps of one so that
    /// `f32` solvers can still meet it.
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(64.0))
    }

    /// Converts an `f64` literal. Values are always representable in the target
    /// type up to rounding.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable as scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `max - min` of a slice, zero for empty input.
pub fn span<T: Scalar>(xs: &[T]) -> T {
    if xs.is_empty() {
        return T::zero();
    }
    let (lo, hi) = xs
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    hi - lo
}

/// Maximum of a slice treating `+inf` as the largest value; zero for empty input.
pub fn max_or_zero<T: Scalar>(xs: impl IntoIterator<Item = T>) -> T {
    xs.into_iter().fold(T::zero(), |m, x| if x > m { x } else { m })
}

/// Formats a number with 12 significant digits, `%g` style; `+inf` prints as `inf`.
pub fn format_sig(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    let rounded = round_sig(x);
    if rounded == 0.0 {
        return "0".into();
    }
    let exp = rounded.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}
