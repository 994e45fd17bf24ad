//! Exact complex scalars with rational real and imaginary parts.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A Gaussian rational `re + im*i`.
///
/// `BigRational` keeps numerators and denominators in lowest terms with a
/// positive denominator after every operation, so equality is plain
/// structural comparison.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRational {
    re: BigRational,
    im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn zero() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussRational::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussRational::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `num/den` as a real rational. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussRational::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// `(re_n/re_d) + (im_n/im_d) i`.
    pub fn from_parts(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self {
        assert!(re_d != 0 && im_d != 0, "zero denominator");
        GaussRational::new(
            BigRational::new(BigInt::from(re_n), BigInt::from(re_d)),
            BigRational::new(BigInt::from(im_n), BigInt::from(im_d)),
        )
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -self.im.clone())
    }

    /// `re^2 + im^2`, a non-negative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussRational::new(&self.re / &n, -&self.im / &n))
    }

    /// Integer power, with negative exponents through the inverse.
    /// Panics on `0^negative`.
    pub fn pow(&self, exp: i64) -> Self {
        if exp == 0 {
            return GaussRational::one();
        }
        let base = if exp < 0 {
            self.inv().expect("zero base with negative exponent")
        } else {
            self.clone()
        };
        let mut result = GaussRational::one();
        let mut acc = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &acc;
            }
            e >>= 1;
            if e > 0 {
                acc = &acc * &acc;
            }
        }
        result
    }

    /// Exact square root within the Gaussian rationals, if one exists.
    ///
    /// Returns the root with positive real part (or, for purely imaginary
    /// roots, positive imaginary part).
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(GaussRational::zero());
        }
        if self.im.is_zero() {
            if self.re.is_positive() {
                let s = rational_sqrt(&self.re)?;
                return Some(GaussRational::new(s, BigRational::zero()));
            }
            let s = rational_sqrt(&(-&self.re))?;
            return Some(GaussRational::new(BigRational::zero(), s));
        }
        // (u + vi)^2 = re + im i  =>  u^2 = (re + |z|)/2, v = im/(2u).
        let norm = self.norm_sqr();
        let abs = rational_sqrt(&norm)?;
        let two = BigRational::from_integer(BigInt::from(2));
        let u_sq = (&self.re + &abs) / &two;
        let u = rational_sqrt(&u_sq)?;
        if u.is_zero() {
            return None;
        }
        let v = &self.im / &(&two * &u);
        let cand = GaussRational::new(u, v);
        if &(&cand * &cand) == self {
            Some(cand)
        } else {
            None
        }
    }

    /// Lossy conversion for the floating-point checks.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Canonical text form, re-parseable by the CLI expression grammar:
    /// `3`, `-3/2`, `i`, `2*i`, `1/2+3*i`.
    pub fn to_canonical_string(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        if self.im.is_zero() {
            let _ = write!(s, "{}", self.re);
        } else if self.re.is_zero() {
            write_im(&mut s, &self.im, false);
        } else {
            let _ = write!(s, "{}", self.re);
            if self.im.is_positive() {
                s.push('+');
            }
            write_im(&mut s, &self.im, false);
        }
        s
    }
}

fn write_im(s: &mut String, im: &BigRational, _leading: bool) {
    use core::fmt::Write;
    if im.is_one() {
        s.push('i');
    } else if (-im).is_one() {
        s.push_str("-i");
    } else {
        let _ = write!(s, "{}*i", im);
    }
}

/// Exact square root of a non-negative rational, if the numerator and
/// denominator are both perfect squares.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string())
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string())
    }
}

impl Add for &GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div for &GaussRational {
    type Output = GaussRational;
    fn div(self, rhs: &GaussRational) -> GaussRational {
        let inv = rhs.inv().expect("division by zero");
        self * &inv
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for GaussRational {
            type Output = GaussRational;
            fn $method(self, rhs: GaussRational) -> GaussRational {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussRational {
        GaussRational::from_ratio(n, d)
    }

    #[test]
    fn field_ops_are_exact() {
        let a = GaussRational::from_parts(1, 2, -3, 4);
        let b = GaussRational::from_parts(5, 6, 7, 8);
        let prod = &a * &b;
        let back = &prod / &b;
        assert_eq!(back, a);
        assert_eq!(&a - &a, GaussRational::zero());
        assert_eq!(&a + &-&a, GaussRational::zero());
    }

    #[test]
    fn inverse_and_pow() {
        let z = GaussRational::from_parts(3, 1, 4, 1);
        let inv = z.inv().unwrap();
        assert!((&z * &inv).is_one());
        assert_eq!(z.pow(3), &(&z * &z) * &z);
        assert_eq!(z.pow(-2), (&z * &z).inv().unwrap());
        assert!(GaussRational::zero().inv().is_none());
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = GaussRational::i();
        assert_eq!(&i * &i, GaussRational::from_int(-1));
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(q(9, 4).sqrt_exact().unwrap(), q(3, 2));
        assert!(q(2, 1).sqrt_exact().is_none());
        // sqrt(-1) = i
        assert_eq!(GaussRational::from_int(-1).sqrt_exact().unwrap(), GaussRational::i());
        // sqrt(2i) = 1 + i
        let z = GaussRational::from_parts(0, 1, 2, 1);
        let s = z.sqrt_exact().unwrap();
        assert_eq!(&s * &s, z);
        // 3 + 4i = (2 + i)^2
        let z = GaussRational::from_parts(3, 1, 4, 1);
        let s = z.sqrt_exact().unwrap();
        assert_eq!(s, GaussRational::from_parts(2, 1, 1, 1));
        // 1 + i has no Gaussian-rational square root
        assert!(GaussRational::from_parts(1, 1, 1, 1).sqrt_exact().is_none());
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(q(3, 2).to_canonical_string(), "3/2");
        assert_eq!(GaussRational::i().to_canonical_string(), "i");
        assert_eq!(GaussRational::from_parts(1, 2, -5, 3).to_canonical_string(), "1/2-5/3*i");
        assert_eq!(GaussRational::from_int(0).to_canonical_string(), "0");
    }
}
