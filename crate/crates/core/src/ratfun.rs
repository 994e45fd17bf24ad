//! Internal rational-function pairs `num/den` of [`TruncPoly`], used by the
//! point-transformation and chart-map machinery.
//!
//! No gcd reduction is performed; all comparisons cross-multiply, so
//! exactness is preserved and the denominators stay small products of the
//! map units.

use crate::poly::{PolyError, TruncPoly, Var};

#[derive(Clone, Debug)]
pub(crate) struct RatFun {
    pub num: TruncPoly,
    pub den: TruncPoly,
}

impl RatFun {
    pub fn from_poly(p: TruncPoly) -> Self {
        RatFun { num: p, den: TruncPoly::from_int(1) }
    }

    pub fn from_int(n: i64) -> Self {
        RatFun::from_poly(TruncPoly::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        RatFun::from_poly(TruncPoly::var(v))
    }

    pub fn new(num: TruncPoly, den: TruncPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RatFun { num, den }
    }

    pub fn add(&self, rhs: &RatFun) -> RatFun {
        RatFun::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn mul(&self, rhs: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn div(&self, rhs: &RatFun) -> RatFun {
        assert!(!rhs.num.is_zero(), "division by zero rational function");
        RatFun::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    /// Quotient-rule partial derivative.
    pub fn partial(&self, v: Var) -> RatFun {
        let num = self.num.partial(v).mul(&self.den).sub(&self.num.mul(&self.den.partial(v)));
        RatFun::new(num, self.den.mul(&self.den))
    }

    pub fn substitute(&self, bindings: &[(Var, TruncPoly)]) -> Result<RatFun, PolyError> {
        Ok(RatFun::new(self.num.substitute(bindings)?, self.den.substitute(bindings)?))
    }

    /// Equality as rational functions, by cross multiplication.
    pub fn eq_cross(&self, rhs: &RatFun) -> bool {
        self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)).is_zero()
    }

    /// Collapse to a series in `trunc_var` modulo order `n`; the denominator
    /// must be a unit (nonzero constant term) after declaring the series
    /// variable.
    pub fn to_series(&self, v: Var, n: u32) -> Result<TruncPoly, PolyError> {
        let den = self.den.clone().with_series(v, n);
        let inv = den.invert(n)?;
        Ok(self.num.clone().with_series(v, n).mul(&inv))
    }
}
