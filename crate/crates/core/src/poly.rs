//! Multivariate polynomials over the Gaussian rationals with an optional
//! truncation cap on one designated series variable.
//!
//! A single type covers both plain polynomials (no cap) and truncated power
//! series: `trunc = Some(n)` means the coefficients of `series_var^j` are
//! certified for `j <= n` and anything beyond is unknown and dropped.
//! Arithmetic between operands with different caps takes the minimum, so
//! certified orders propagate automatically through every computation.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::scalar::GaussRational;

/// Number of coordinates in the fixed variable universe.
pub const NVARS: usize = 9;

/// The fixed variable universe: plane/jet coordinates, solution-family
/// parameters, and the four matrix-group coordinates.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Var {
    X = 0,
    Y = 1,
    P = 2,
    C1 = 3,
    C2 = 4,
    Alpha = 5,
    Beta = 6,
    Gamma = 7,
    Delta = 8,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::X,
        Var::Y,
        Var::P,
        Var::C1,
        Var::C2,
        Var::Alpha,
        Var::Beta,
        Var::Gamma,
        Var::Delta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::P => "p",
            Var::C1 => "c1",
            Var::C2 => "c2",
            Var::Alpha => "alpha",
            Var::Beta => "beta",
            Var::Gamma => "gamma",
            Var::Delta => "delta",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == name)
    }

    fn idx(self) -> usize {
        self as usize
    }
}

/// Dense exponent vector over the variable universe.
pub type Expo = [u16; NVARS];

/// Errors from series-level polynomial operations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PolyError {
    /// Series inversion of a polynomial whose constant term vanishes.
    ZeroConstantTerm,
    /// A substitution would need coefficients beyond the stored truncation.
    TruncationLoss,
    /// The operand is not a univariate polynomial in the expected variable.
    NotUnivariate(Var),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::ZeroConstantTerm => write!(f, "series has zero constant term"),
            PolyError::TruncationLoss => {
                write!(f, "substitution needs orders beyond the stored truncation")
            }
            PolyError::NotUnivariate(v) => write!(f, "polynomial is not univariate in {}", v.name()),
        }
    }
}

/// A polynomial/truncated series over [`GaussRational`].
#[derive(Clone)]
pub struct TruncPoly {
    terms: BTreeMap<Expo, GaussRational>,
    series_var: Option<Var>,
    trunc: Option<u32>,
}

/// Equality compares the stored terms; the truncation bookkeeping is
/// metadata about certification, not part of the value.
impl PartialEq for TruncPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for TruncPoly {}

impl TruncPoly {
    pub fn zero() -> Self {
        TruncPoly { terms: BTreeMap::new(), series_var: None, trunc: None }
    }

    pub fn constant(c: GaussRational) -> Self {
        let mut p = TruncPoly::zero();
        if !c.is_zero() {
            p.terms.insert([0; NVARS], c);
        }
        p
    }

    pub fn from_int(n: i64) -> Self {
        TruncPoly::constant(GaussRational::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        TruncPoly::monomial(GaussRational::one(), &[(v, 1)])
    }

    pub fn monomial(c: GaussRational, exps: &[(Var, u32)]) -> Self {
        let mut p = TruncPoly::zero();
        if c.is_zero() {
            return p;
        }
        let mut e = [0u16; NVARS];
        for &(v, k) in exps {
            e[v.idx()] += k as u16;
        }
        p.terms.insert(e, c);
        p
    }

    /// Univariate series `sum coeffs[j] * v^j` truncated at order `trunc`.
    pub fn series(v: Var, coeffs: &[GaussRational], trunc: u32) -> Self {
        let mut p = TruncPoly::zero();
        for (j, c) in coeffs.iter().enumerate() {
            if j as u32 > trunc {
                break;
            }
            if !c.is_zero() {
                let mut e = [0u16; NVARS];
                e[v.idx()] = j as u16;
                p.terms.insert(e, c.clone());
            }
        }
        p.series_var = Some(v);
        p.trunc = Some(trunc);
        p
    }

    pub fn series_var(&self) -> Option<Var> {
        self.series_var
    }

    pub fn trunc_order(&self) -> Option<u32> {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &GaussRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of an exact exponent vector.
    pub fn coeff(&self, e: &Expo) -> GaussRational {
        self.terms.get(e).cloned().unwrap_or_else(GaussRational::zero)
    }

    /// Largest exponent of `v` among stored terms; `None` when zero.
    pub fn degree(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|e| e[v.idx()] as u32).max()
    }

    /// True when every stored term is a pure power of `v` (constants allowed).
    pub fn is_univariate_in(&self, v: Var) -> bool {
        self.terms
            .keys()
            .all(|e| e.iter().enumerate().all(|(i, &k)| k == 0 || i == v.idx()))
    }

    /// The variables that actually occur.
    pub fn support(&self) -> Vec<Var> {
        Var::ALL
            .iter()
            .copied()
            .filter(|v| self.terms.keys().any(|e| e[v.idx()] > 0))
            .collect()
    }

    /// Declare the series variable and cap, dropping higher-order terms.
    pub fn with_series(mut self, v: Var, trunc: u32) -> Self {
        match self.series_var {
            Some(old) if old != v => panic!("mixed series variables"),
            _ => {}
        }
        self.series_var = Some(v);
        let t = match self.trunc {
            Some(t0) => t0.min(trunc),
            None => trunc,
        };
        self.trunc = Some(t);
        self.terms.retain(|e, _| (e[v.idx()] as u32) <= t);
        self
    }

    /// Drop all terms of order `> n` in the series variable and lower the
    /// recorded cap. No-op when no series variable is set.
    pub fn truncated(mut self, n: u32) -> Self {
        if let Some(v) = self.series_var {
            let t = self.trunc.map_or(n, |t0| t0.min(n));
            self.trunc = Some(t);
            self.terms.retain(|e, _| (e[v.idx()] as u32) <= t);
        }
        self
    }

    /// Forget the truncation bookkeeping (used for exact polynomials that
    /// were assembled through series constructors).
    pub fn into_exact(mut self) -> Self {
        self.series_var = None;
        self.trunc = None;
        self
    }

    fn combined_meta(&self, rhs: &TruncPoly) -> (Option<Var>, Option<u32>) {
        let v = match (self.series_var, rhs.series_var) {
            (Some(a), Some(b)) => {
                assert!(a == b, "mixed series variables");
                Some(a)
            }
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        };
        let t = match (self.trunc, rhs.trunc) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        };
        (v, t)
    }

    fn normalize(mut self) -> Self {
        if let (Some(v), Some(t)) = (self.series_var, self.trunc) {
            self.terms.retain(|e, _| (e[v.idx()] as u32) <= t);
        }
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn add(&self, rhs: &TruncPoly) -> TruncPoly {
        let (series_var, trunc) = self.combined_meta(rhs);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(*e).or_insert_with(GaussRational::zero);
            *entry = &*entry + c;
        }
        TruncPoly { terms, series_var, trunc }.normalize()
    }

    pub fn sub(&self, rhs: &TruncPoly) -> TruncPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> TruncPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn scale(&self, c: &GaussRational) -> TruncPoly {
        if c.is_zero() {
            let mut z = TruncPoly::zero();
            z.series_var = self.series_var;
            z.trunc = self.trunc;
            return z;
        }
        let mut out = self.clone();
        for coeff in out.terms.values_mut() {
            *coeff = &*coeff * c;
        }
        out
    }

    /// Lowest exponent of `v` among stored terms, used for certification
    /// accounting: a stored-zero series is certified zero through its cap.
    fn valuation(&self, v: Var) -> u32 {
        if self.terms.is_empty() {
            return self.trunc.map_or(u32::MAX / 4, |t| t + 1);
        }
        self.terms.keys().map(|e| e[v.idx()] as u32).min().unwrap_or(0)
    }

    pub fn mul(&self, rhs: &TruncPoly) -> TruncPoly {
        let (series_var, min_trunc) = self.combined_meta(rhs);
        // A factor with positive valuation in the series variable shifts
        // the certified window up: coefficients of the product at order j
        // only need each operand through j minus the other's valuation.
        let trunc = match (series_var, min_trunc) {
            (Some(v), Some(_)) => {
                let from_self = self
                    .trunc
                    .map(|t| t.saturating_add(rhs.valuation(v)))
                    .unwrap_or(u32::MAX);
                let from_rhs = rhs
                    .trunc
                    .map(|t| t.saturating_add(self.valuation(v)))
                    .unwrap_or(u32::MAX);
                Some(from_self.min(from_rhs))
            }
            (_, t) => t,
        };
        let cap = series_var.and_then(|v| trunc.map(|t| (v.idx(), t)));
        let mut terms: BTreeMap<Expo, GaussRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                if let Some((vi, t)) = cap {
                    if ea[vi] as u32 + eb[vi] as u32 > t {
                        continue;
                    }
                }
                let mut e = [0u16; NVARS];
                for i in 0..NVARS {
                    e[i] = ea[i] + eb[i];
                }
                let c = ca * cb;
                let entry = terms.entry(e).or_insert_with(GaussRational::zero);
                *entry = &*entry + &c;
            }
        }
        TruncPoly { terms, series_var, trunc }.normalize()
    }

    pub fn pow(&self, n: u32) -> TruncPoly {
        let mut out = TruncPoly::from_int(1);
        out.series_var = self.series_var;
        out.trunc = self.trunc;
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative. Differentiating along the series variable
    /// consumes one certified order.
    pub fn partial(&self, v: Var) -> TruncPoly {
        let vi = v.idx();
        let mut terms: BTreeMap<Expo, GaussRational> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[vi];
            if k == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[vi] = k - 1;
            let factor = GaussRational::from_int(k as i64);
            terms.insert(e2, c * &factor);
        }
        let trunc = match (self.series_var, self.trunc) {
            (Some(sv), Some(t)) if sv == v => {
                debug_assert!(t >= 1, "derivative of an order-0 series is uncertified");
                Some(t.saturating_sub(1))
            }
            (_, t) => t,
        };
        TruncPoly { terms, series_var: self.series_var, trunc }.normalize()
    }

    /// Multiplicative series inverse modulo `series_var^(n+1)`.
    ///
    /// The operand must be univariate in its series variable (declared or
    /// inferred) with a nonzero constant term.
    pub fn invert(&self, n: u32) -> Result<TruncPoly, PolyError> {
        let v = self.series_var.unwrap_or(Var::Y);
        if !self.is_univariate_in(v) {
            return Err(PolyError::NotUnivariate(v));
        }
        let c0 = self.coeff(&[0; NVARS]);
        if c0.is_zero() {
            return Err(PolyError::ZeroConstantTerm);
        }
        let cap = match self.trunc {
            Some(t) => t.min(n),
            None => n,
        };
        let mut p_coeffs = alloc::vec![GaussRational::zero(); cap as usize + 1];
        for (e, c) in &self.terms {
            let j = e[v.idx()] as u32;
            if j <= cap {
                p_coeffs[j as usize] = c.clone();
            }
        }
        let inv0 = c0.inv().expect("nonzero constant");
        let mut q = alloc::vec![GaussRational::zero(); cap as usize + 1];
        q[0] = inv0.clone();
        for m in 1..=cap as usize {
            let mut acc = GaussRational::zero();
            for j in 1..=m {
                acc = &acc + &(&p_coeffs[j] * &q[m - j]);
            }
            q[m] = -&(&acc * &inv0);
        }
        Ok(TruncPoly::series(v, &q, cap))
    }

    /// Substitute polynomials for variables, exactly up to the combined
    /// certified order.
    ///
    /// If this polynomial is truncated in its series variable, the binding
    /// for that variable must have a vanishing constant term (composition
    /// is then well defined order by order); otherwise `TruncationLoss`.
    pub fn substitute(&self, bindings: &[(Var, TruncPoly)]) -> Result<TruncPoly, PolyError> {
        if let (Some(sv), Some(_)) = (self.series_var, self.trunc) {
            if let Some((_, b)) = bindings.iter().find(|(v, _)| *v == sv) {
                if !b.coeff(&[0; NVARS]).is_zero() {
                    return Err(PolyError::TruncationLoss);
                }
            }
        }
        // Lazily build power tables per substituted variable.
        let mut powers: BTreeMap<Var, Vec<TruncPoly>> = BTreeMap::new();
        for (v, b) in bindings {
            powers.insert(*v, alloc::vec![TruncPoly::from_int(1), b.clone()]);
        }
        let mut result_meta = TruncPoly::zero();
        result_meta.series_var = self.series_var;
        result_meta.trunc = self.trunc;
        let mut out = result_meta;
        for (e, c) in &self.terms {
            let mut term = TruncPoly::constant(c.clone());
            term.series_var = self.series_var;
            term.trunc = self.trunc;
            for v in Var::ALL {
                let k = e[v.idx()] as usize;
                if k == 0 {
                    continue;
                }
                if let Some(tab) = powers.get_mut(&v) {
                    while tab.len() <= k {
                        let next = tab.last().unwrap().mul(&tab[1]);
                        tab.push(next);
                    }
                    term = term.mul(&tab[k]);
                } else {
                    term = term.mul(&TruncPoly::monomial(GaussRational::one(), &[(v, k as u32)]));
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Collect the coefficient (a polynomial in the remaining variables) of
    /// the exact powers given in `fixed`.
    pub fn coefficient_of(&self, fixed: &[(Var, u32)]) -> TruncPoly {
        let mut out = TruncPoly::zero();
        out.series_var = self.series_var;
        out.trunc = self.trunc;
        'next: for (e, c) in &self.terms {
            let mut e2 = *e;
            for &(v, k) in fixed {
                if e[v.idx()] as u32 != k {
                    continue 'next;
                }
                e2[v.idx()] = 0;
            }
            out.terms.insert(e2, c.clone());
        }
        out
    }

    /// Coefficients of a univariate polynomial/series in `v`, as a dense
    /// vector up to `upto` inclusive.
    pub fn series_coeffs(&self, v: Var, upto: u32) -> Result<Vec<GaussRational>, PolyError> {
        if !self.is_univariate_in(v) {
            return Err(PolyError::NotUnivariate(v));
        }
        let mut out = alloc::vec![GaussRational::zero(); upto as usize + 1];
        for (e, c) in &self.terms {
            let j = e[v.idx()] as u32;
            if j <= upto {
                out[j as usize] = c.clone();
            }
        }
        Ok(out)
    }

    /// Numeric evaluation; truncation is ignored, so this is only meaningful
    /// for exact polynomials or points well inside the disc of convergence.
    pub fn eval_complex(&self, assign: &[Complex64; NVARS]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = c.to_complex();
            for i in 0..NVARS {
                for _ in 0..e[i] {
                    t *= assign[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Canonical display: terms in ascending graded-lex order, coefficients
    /// in the grammar accepted by the CLI parser.
    pub fn to_canonical_string(&self) -> String {
        use core::fmt::Write;
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut keys: Vec<&Expo> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let ta: u32 = a.iter().map(|&k| k as u32).sum();
            let tb: u32 = b.iter().map(|&k| k as u32).sum();
            // graded order; earlier variables (x before y before p) first
            // within a degree
            ta.cmp(&tb).then_with(|| b.cmp(a))
        });
        let mut s = String::new();
        for (idx, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            let mono = mono_string(e);
            let (sign_is_minus, abs_str, needs_mul) = coeff_display(c, mono.is_empty());
            if idx == 0 {
                if sign_is_minus {
                    s.push('-');
                }
            } else if sign_is_minus {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            if !abs_str.is_empty() {
                let _ = write!(s, "{}", abs_str);
                if needs_mul && !mono.is_empty() {
                    s.push('*');
                }
            }
            let _ = write!(s, "{}", mono);
        }
        s
    }
}

fn mono_string(e: &Expo) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    for v in Var::ALL {
        let k = e[v.idx()];
        if k == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push('*');
        }
        if k == 1 {
            let _ = write!(s, "{}", v.name());
        } else {
            let _ = write!(s, "{}^{}", v.name(), k);
        }
    }
    s
}

/// (sign-is-minus, printed absolute value, needs `*` before a monomial).
fn coeff_display(c: &GaussRational, is_constant_term: bool) -> (bool, String, bool) {
    use num_traits::{Signed, Zero};
    if c.is_real() {
        let minus = c.re().is_negative();
        let abs = if minus { -c } else { c.clone() };
        if abs.is_one() && !is_constant_term {
            (minus, String::new(), false)
        } else {
            (minus, abs.to_canonical_string(), true)
        }
    } else if c.re().is_zero() {
        // pure imaginary: print as i or q*i, pulling the sign out
        let minus = c.im().is_negative();
        let abs = if minus { -c } else { c.clone() };
        (minus, abs.to_canonical_string(), true)
    } else {
        let mut s = String::from("(");
        s.push_str(&c.to_canonical_string());
        s.push(')');
        (false, s, true)
    }
}

impl fmt::Debug for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string())?;
        if let (Some(v), Some(t)) = (self.series_var, self.trunc) {
            write!(f, " (mod {}^{})", v.name(), t + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y() -> TruncPoly {
        TruncPoly::var(Var::Y)
    }

    fn x() -> TruncPoly {
        TruncPoly::var(Var::X)
    }

    fn p() -> TruncPoly {
        TruncPoly::var(Var::P)
    }

    fn int(n: i64) -> TruncPoly {
        TruncPoly::from_int(n)
    }

    #[test]
    fn difference_of_squares() {
        let a = int(1).add(&y());
        let b = int(1).sub(&y());
        let prod = a.mul(&b);
        assert_eq!(prod, int(1).sub(&y().mul(&y())));
    }

    #[test]
    fn shear_monomial_square() {
        let u = y().sub(&x().mul(&p()));
        let sq = u.mul(&u);
        // y^2 - 2xyp + x^2 p^2
        let expected = y()
            .pow(2)
            .add(&x().mul(&y()).mul(&p()).scale(&GaussRational::from_int(-2)))
            .add(&x().pow(2).mul(&p().pow(2)));
        assert_eq!(sq, expected);
    }

    #[test]
    fn truncated_product() {
        let f0 = y().pow(2).with_series(Var::Y, 24);
        let f1 = y().scale(&GaussRational::from_int(3)).with_series(Var::Y, 24);
        let prod = f0.mul(&f1);
        assert_eq!(prod.trunc_order(), Some(24));
        assert_eq!(
            prod,
            y().pow(3).scale(&GaussRational::from_int(3)).with_series(Var::Y, 24)
        );
    }

    #[test]
    fn partial_derivatives() {
        let u = y().sub(&x().mul(&p()));
        let cube = u.pow(3);
        // d/dp (y-xp)^3 = -3x (y-xp)^2
        let expected = x().scale(&GaussRational::from_int(-3)).mul(&u.pow(2));
        assert_eq!(cube.partial(Var::P), expected);
        for k in 1..6 {
            let yk = y().pow(k);
            let d = yk.partial(Var::Y);
            assert_eq!(d, y().pow(k - 1).scale(&GaussRational::from_int(k as i64)));
        }
    }

    #[test]
    fn second_derivative_of_series() {
        // phi = sum phi_n y^n  =>  phi'' = sum n(n-1) phi_n y^(n-2)
        let coeffs: Vec<GaussRational> = (0..8).map(GaussRational::from_int).collect();
        let phi = TruncPoly::series(Var::Y, &coeffs, 10);
        let dd = phi.partial(Var::Y).partial(Var::Y);
        let got = dd.series_coeffs(Var::Y, 5).unwrap();
        for m in 0..=5u32 {
            let n = m + 2;
            let expect = GaussRational::from_int((n * (n - 1) * n) as i64);
            assert_eq!(got[m as usize], expect, "order {}", m);
        }
        assert_eq!(dd.trunc_order(), Some(8));
    }

    #[test]
    fn geometric_series_inverse() {
        let one_minus_y = int(1).sub(&y());
        let inv = one_minus_y.invert(3).unwrap();
        let expected = TruncPoly::series(
            Var::Y,
            &[1, 1, 1, 1].map(GaussRational::from_int),
            3,
        );
        assert_eq!(inv, expected);
        // invert(2) = 1/2 at any order
        let half = int(2).invert(5).unwrap();
        assert_eq!(half.coeff(&[0; NVARS]), GaussRational::from_ratio(1, 2));
        assert!(y().invert(4).is_err());
    }

    #[test]
    fn binomial_inverse_cube() {
        // (1-cy)^{-1} cubed = 1 + 3cy + 6c^2 y^2 mod y^3, checked for c = 2
        // against repeated multiplication.
        let c = GaussRational::from_int(2);
        let base = int(1).sub(&y().scale(&c));
        let inv = base.invert(2).unwrap();
        let cube = inv.pow(3);
        // oracle: cube * (1-cy)^3 == 1 mod y^3
        let check = cube.mul(&base.pow(3));
        assert_eq!(check, int(1).with_series(Var::Y, 2));
        let coeffs = cube.series_coeffs(Var::Y, 2).unwrap();
        assert_eq!(coeffs[0], GaussRational::one());
        assert_eq!(coeffs[1], GaussRational::from_int(6)); // 3c
        assert_eq!(coeffs[2], GaussRational::from_int(24)); // 6c^2
    }

    #[test]
    fn substitute_projective_map() {
        // y -> y/(1-y) expands to y + y^2 + y^3 mod y^3
        let inv = int(1).sub(&y()).invert(3).unwrap();
        let binding = y().mul(&inv);
        let got = y().with_series(Var::Y, 3).substitute(&[(Var::Y, binding)]).unwrap();
        let expected = TruncPoly::series(Var::Y, &[0, 1, 1, 1].map(GaussRational::from_int), 3);
        assert_eq!(got, expected);
    }

    #[test]
    fn substitute_identity() {
        let f = y().pow(2);
        let got = f.substitute(&[(Var::Y, y()), (Var::X, x())]).unwrap();
        assert_eq!(got, f);
    }

    #[test]
    fn substitute_roundtrip_inverse_map() {
        // f = y^2 (1-y)^{-5}; composing with y -> y/(1+y) and then
        // y -> y/(1-y) recovers f modulo the truncation.
        let n = 12;
        let f = y().pow(2).mul(&int(1).sub(&y()).invert(n).unwrap().pow(5));
        let fwd = y().mul(&int(1).add(&y()).invert(n).unwrap());
        let bwd = y().mul(&int(1).sub(&y()).invert(n).unwrap());
        let mid = f.substitute(&[(Var::Y, fwd)]).unwrap();
        let back = mid.substitute(&[(Var::Y, bwd)]).unwrap();
        assert_eq!(back, f.truncated(back.trunc_order().unwrap()));
    }

    #[test]
    fn substitute_rejects_constant_shift_of_truncated_series() {
        let f = y().with_series(Var::Y, 4);
        let err = f.substitute(&[(Var::Y, int(1).add(&y()))]).unwrap_err();
        assert_eq!(err, PolyError::TruncationLoss);
    }

    #[test]
    fn canonical_printing() {
        let f = int(1)
            .sub(&x().mul(&y()).scale(&GaussRational::from_int(2)))
            .add(&y().pow(2).scale(&GaussRational::from_ratio(3, 2)))
            .add(&p().pow(3).scale(&GaussRational::i()));
        assert_eq!(f.to_canonical_string(), "1 - 2*x*y + 3/2*y^2 + i*p^3");
        assert_eq!(TruncPoly::zero().to_canonical_string(), "0");
    }
}
