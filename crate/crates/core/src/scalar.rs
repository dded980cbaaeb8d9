//! Exact scalars.
//!
//! Real entries are arbitrary-precision rationals, complexified entries are
//! Gaussian rationals. Both are always normalized, so `==` is exact equality.

use std::fmt;
use std::ops::{AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

/// `re + i·im` with rational parts.
pub type GaussianRational = Complex<Rational>;

/// Field operations shared by [`Rational`] and [`GaussianRational`].
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn from_rational(r: &Rational) -> Self;
    fn conj(&self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    /// Multiplication by a real scalar.
    fn mul_real(&self, r: &Rational) -> Self;
    fn is_real(&self) -> bool;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn mul_real(&self, r: &Rational) -> Self {
        self * r
    }
    fn is_real(&self) -> bool {
        true
    }
}

impl Scalar for GaussianRational {
    fn from_rational(r: &Rational) -> Self {
        Complex::new(r.clone(), Rational::zero())
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        // Skip the four-product formula when either side is real.
        if self.im.is_zero() {
            return other.mul_real(&self.re);
        }
        if other.im.is_zero() {
            return self.mul_real(&other.re);
        }
        if other.re.is_zero() {
            let m = self.mul_real(&other.im);
            return Complex::new(-m.im, m.re);
        }
        self * other
    }
    fn mul_real(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let part = |x: &Rational| if x.is_zero() { Rational::zero() } else { x * r };
        Complex::new(part(&self.re), part(&self.im))
    }
    fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn cplx(re: Rational, im: Rational) -> GaussianRational {
    Complex::new(re, im)
}

/// Gaussian integer `a + b i`.
pub fn gauss(a: i64, b: i64) -> GaussianRational {
    Complex::new(rat(a), rat(b))
}

pub fn imag_unit() -> GaussianRational {
    gauss(0, 1)
}

/// `|z|^2 = z · conj(z)`, always a nonnegative rational.
pub fn norm_sq(z: &GaussianRational) -> Rational {
    &z.re * &z.re + &z.im * &z.im
}

/// Parses `"p"` or `"p/q"` with arbitrary-precision integers.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Syntax {
        path: String::new(),
        message: format!("`{s}` is not a rational number (expected \"p\" or \"p/q\")"),
    };
    match t.split_once('/') {
        None => BigInt::from_str(t).map(Rational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Syntax {
                    path: String::new(),
                    message: format!("`{s}` has a zero denominator"),
                });
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Human-readable Gaussian rational, e.g. `-1/2+3i`.
pub fn format_gaussian(z: &GaussianRational) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => z.re.to_string(),
        (true, false) => format!("{}i", z.im),
        (false, false) => {
            let sign = if z.im.is_negative() { "-" } else { "+" };
            format!("{}{}{}i", z.re, sign, z.im.abs())
        }
    }
}

/// Serde adapters for the string encodings used in documents.
pub mod serde_str {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        format_rational(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }

    /// `{"re": "p/q", "im": "p/q"}`.
    #[derive(Serialize, Deserialize)]
    struct GaussianRepr {
        re: String,
        im: String,
    }

    pub fn serialize_gaussian<S: Serializer>(
        z: &GaussianRational,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        GaussianRepr { re: format_rational(&z.re), im: format_rational(&z.im) }.serialize(s)
    }

    pub fn deserialize_gaussian<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<GaussianRational, D::Error> {
        let r = GaussianRepr::deserialize(d)?;
        let re = parse_rational(&r.re).map_err(D::Error::custom)?;
        let im = parse_rational(&r.im).map_err(D::Error::custom)?;
        Ok(Complex::new(re, im))
    }

    pub fn gaussian_to_json(z: &GaussianRational) -> serde_json::Value {
        serde_json::json!({ "re": format_rational(&z.re), "im": format_rational(&z.im) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| frac(n, d))
    }

    fn arb_gauss() -> impl Strategy<Value = GaussianRational> {
        (arb_rat(), arb_rat()).prop_map(|(a, b)| cplx(a, b))
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), rat(-4));
        assert_eq!(parse_rational(" 2/-4 ").unwrap(), frac(-1, 2));
        assert_eq!(format_rational(&frac(6, 3)), "2");
        assert_eq!(format_rational(&frac(-2, 6)), "-1/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        let big = "123456789012345678901234567891/7";
        assert_eq!(format_rational(&parse_rational(big).unwrap()), big);
    }

    #[test]
    fn gaussian_format() {
        assert_eq!(format_gaussian(&gauss(0, -2)), "-2i");
        assert_eq!(format_gaussian(&cplx(frac(1, 2), rat(-3))), "1/2-3i");
        assert_eq!(format_gaussian(&gauss(5, 0)), "5");
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert_eq!(&a * a.recip(), rat(1));
            }
            prop_assert!(a.denom() > &BigInt::zero());
        }

        #[test]
        fn gaussian_field_axioms(a in arb_gauss(), b in arb_gauss(), c in arb_gauss()) {
            prop_assert_eq!((a.clone() * &b) * &c, a.clone() * &(b.clone() * &c));
            prop_assert_eq!(a.clone() * &(b.clone() + &c), a.clone() * &b + a.clone() * &c);
            prop_assert_eq!(a.mul_ref(&b), a.clone() * &b);
            if !a.is_zero() {
                prop_assert_eq!((b.clone() / &a) * &a, b.clone());
            }
            prop_assert_eq!(Scalar::conj(&Scalar::conj(&a)), a.clone());
            let n = a.clone() * &Scalar::conj(&a);
            prop_assert!(n.im.is_zero());
            prop_assert_eq!(n.re, norm_sq(&a));
        }
    }
}
