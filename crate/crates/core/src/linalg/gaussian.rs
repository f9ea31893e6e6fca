//! Exact scalars of the Gaussian rational field `Q(i)`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type Rational = BigRational;

/// An element `re + im*i` of `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational {
            re: Rational::from_integer(re.into()),
            im: Rational::from_integer(im.into()),
        }
    }

    /// `num/den` on the real axis. Panics on a zero denominator.
    pub fn from_fraction(num: i64, den: i64) -> Self {
        GaussianRational {
            re: Rational::new(num.into(), den.into()),
            im: Rational::zero(),
        }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `re^2 + im^2`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `|re| + |im|`, the l1 modulus used by the Gershgorin surrogate.
    pub fn l1_modulus(&self) -> Rational {
        self.re.abs() + self.im.abs()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True when both components are integers.
    pub fn is_gaussian_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// Lowest common denominator of both components.
    pub fn denominator_lcm(&self) -> BigInt {
        num::integer::lcm(self.re.denom().clone(), self.im.denom().clone())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational {
            re: Rational::one(),
            im: Rational::zero(),
        }
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_ints(v, 0)
    }
}

impl From<Rational> for GaussianRational {
    fn from(v: Rational) -> Self {
        Self::real(v)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    /// Panics on division by zero, like the primitive types.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        let inv = rhs.inv().expect("division by zero in Q(i)");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}i", self.re, -&self.im)
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

/// Parse a single canonical rational string such as `"-3/4"` or `"7"`.
///
/// Denominators may carry a sign; the result is always reduced.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Canonical text of a rational: `a` or `a/b` with `b > 1`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn field_operations() {
        let a = g(1, 2);
        let b = g(3, -1);
        assert_eq!(&a * &b, g(5, 5));
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(a.inv().unwrap(), GaussianRational::new(
            Rational::new(1.into(), 5.into()),
            Rational::new((-2).into(), 5.into()),
        ));
        assert!(GaussianRational::zero().inv().is_none());
        assert_eq!(&GaussianRational::i() * &GaussianRational::i(), g(-1, 0));
    }

    #[test]
    fn rationals_are_reduced() {
        let r = parse_rational("6/-8").unwrap();
        assert_eq!(format_rational(&r), "-3/4");
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn display() {
        assert_eq!(g(1, -1).to_string(), "1-1i");
        assert_eq!(g(0, 2).to_string(), "2i");
        assert_eq!(g(3, 0).to_string(), "3");
    }

    #[test]
    fn l1_modulus() {
        assert_eq!(g(-2, 3).l1_modulus(), Rational::from_integer(5.into()));
    }
}
