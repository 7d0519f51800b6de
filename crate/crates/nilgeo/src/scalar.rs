//! Coefficient fields for algebra elements and group words.
//!
//! Structure constants and group-law identities are always exact rationals;
//! elements carry either exact rational or `f64` coordinates. The scalar kind
//! is a type parameter, so exactness is visible in signatures.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::ops::Neg;

/// Exact rational scalar used for structure constants and identity-level tests.
pub type Ratio = BigRational;

/// Coefficient field: exact rationals or `f64`.
pub trait Scalar:
    Clone + PartialEq + PartialOrd + Debug + Display + Signed + Neg<Output = Self> + 'static
{
    /// Whether arithmetic in this field is exact.
    const EXACT: bool;

    fn from_ratio(r: &Ratio) -> Self;
    fn from_int(n: i64) -> Self;
    fn to_f64(&self) -> f64;

    /// Best-effort `|self|^(num/den)` keeping the sign of `self`.
    /// Rationals return a nearby rational with bounded denominator, so that
    /// exact pipelines stay rational while balanced commutator splits stay
    /// close to the float optimum.
    fn approx_pow(&self, num: u32, den: u32) -> Self;
}

impl Scalar for Ratio {
    const EXACT: bool = true;

    fn from_ratio(r: &Ratio) -> Self {
        r.clone()
    }

    fn from_int(n: i64) -> Self {
        Ratio::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn approx_pow(&self, num: u32, den: u32) -> Self {
        if self.is_zero() {
            return Ratio::zero();
        }
        let mag = Scalar::to_f64(&self.abs()).powf(f64::from(num) / f64::from(den));
        let approx = ratio_from_f64(mag, 1 << 20);
        let approx = if approx.is_zero() { Ratio::one() } else { approx };
        if self.is_negative() {
            -approx
        } else {
            approx
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(r: &Ratio) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_pow(&self, num: u32, den: u32) -> Self {
        let mag = self.abs().powf(f64::from(num) / f64::from(den));
        if *self < 0.0 {
            -mag
        } else {
            mag
        }
    }
}

/// Nearest rational to `x` with denominator bounded by `max_den`,
/// via continued-fraction convergents.
pub fn ratio_from_f64(x: f64, max_den: u64) -> Ratio {
    if !x.is_finite() {
        return Ratio::zero();
    }
    let neg = x < 0.0;
    let mut x = x.abs();
    // Convergents p/q of the continued fraction of x.
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    for _ in 0..64 {
        let a = x.floor();
        let ai = BigInt::from(a as i64);
        let p2 = &ai * &p1 + &p0;
        let q2 = &ai * &q1 + &q0;
        if q2 > BigInt::from(max_den) {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = x - a;
        if frac < 1e-15 {
            break;
        }
        x = 1.0 / frac;
    }
    if q1.is_zero() {
        return Ratio::zero();
    }
    let r = Ratio::new(p1, q1);
    if neg {
        -r
    } else {
        r
    }
}

/// Parse "p/q" or "p" into an exact rational.
pub fn parse_ratio(s: &str) -> Result<Ratio, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d: BigInt = den.trim().parse().map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(Ratio::new(n, d))
    } else if s.contains('.') || s.contains('e') || s.contains('E') {
        let x: f64 = s.parse().map_err(|e| format!("bad number {s:?}: {e}"))?;
        Ok(ratio_from_f64(x, 1 << 30))
    } else {
        let n: BigInt = s.parse().map_err(|e| format!("bad integer {s:?}: {e}"))?;
        Ok(Ratio::from_integer(n))
    }
}

/// Format a rational as "p" or "p/q".
pub fn format_ratio(r: &Ratio) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact square root of a rational if it is a perfect square.
pub fn exact_sqrt(r: &Ratio) -> Option<Ratio> {
    if r.is_negative() {
        return None;
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Some(Ratio::new(sn, sd))
    } else {
        None
    }
}

/// Rational helper: integer factorial.
pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Sign of a rational as -1, 0, 1.
pub fn ratio_sign(r: &Ratio) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        let r = parse_ratio("-3/7").unwrap();
        assert_eq!(format_ratio(&r), "-3/7");
        assert_eq!(format_ratio(&parse_ratio("5").unwrap()), "5");
        assert!(parse_ratio("1/0").is_err());
    }

    #[test]
    fn continued_fraction_approx() {
        let r = ratio_from_f64(std::f64::consts::PI, 1_000_000);
        let err = (Scalar::to_f64(&r) - std::f64::consts::PI).abs();
        assert!(err < 1e-11, "err = {err}");
    }

    #[test]
    fn approx_pow_balances_products() {
        let s = Ratio::from_int(7);
        let a = s.approx_pow(1, 2);
        let b = s.clone() / a.clone();
        assert_eq!(a.clone() * b, s);
        assert!((Scalar::to_f64(&a) - 7f64.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn exact_sqrt_detects_squares() {
        assert_eq!(exact_sqrt(&parse_ratio("9/4").unwrap()), Some(parse_ratio("3/2").unwrap()));
        assert_eq!(exact_sqrt(&parse_ratio("2").unwrap()), None);
    }
}
