//! Implicit solution families `F(x, y, c1, c2) = 0` and numeric jet
//! sampling through exact implicit-differentiation formulas.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::ode::Jet;
use crate::poly::{TruncPoly, Var, NVARS};
use crate::scalar::GaussRational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FamilyError {
    /// `F` or `dF/dy` is identically zero.
    DegenerateFamily,
    /// No real root within the search range at some sample.
    BranchFailure,
    /// `dF/dy` vanishes at a sample point.
    SingularJet,
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::DegenerateFamily => write!(f, "family equation is degenerate"),
            FamilyError::BranchFailure => write!(f, "no solution branch found at a sample"),
            FamilyError::SingularJet => write!(f, "implicit derivative undefined at a sample"),
        }
    }
}

/// A two-parameter implicit family of plane curves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolutionFamily {
    f: TruncPoly,
}

impl SolutionFamily {
    pub fn new(f: TruncPoly) -> Result<Self, FamilyError> {
        if f.is_zero() || f.partial(Var::Y).is_zero() {
            return Err(FamilyError::DegenerateFamily);
        }
        Ok(SolutionFamily { f })
    }

    pub fn equation(&self) -> &TruncPoly {
        &self.f
    }

    /// `(y - c1 x)^2 - c2^2 x^2 - c2 = 0`: the complete solution of
    /// `y'' = (y - x y')^3`.
    pub fn quartic() -> Self {
        let x = TruncPoly::var(Var::X);
        let y = TruncPoly::var(Var::Y);
        let c1 = TruncPoly::var(Var::C1);
        let c2 = TruncPoly::var(Var::C2);
        let f = y
            .sub(&c1.mul(&x))
            .pow(2)
            .sub(&c2.pow(2).mul(&x.pow(2)))
            .sub(&c2);
        SolutionFamily::new(f).expect("nondegenerate")
    }

    /// `y - c1 x = 0`: the line family solving `y'' = 0` (`c2` unused).
    pub fn lines() -> Self {
        let f = TruncPoly::var(Var::Y).sub(&TruncPoly::var(Var::C1).mul(&TruncPoly::var(Var::X)));
        SolutionFamily::new(f).expect("nondegenerate")
    }

    /// `(x - c1)^2 - (y - c2)^2 - c1^2 = 0`: the solution family of the
    /// dual equation.
    pub fn dual_quartic() -> Self {
        let x = TruncPoly::var(Var::X);
        let y = TruncPoly::var(Var::Y);
        let c1 = TruncPoly::var(Var::C1);
        let c2 = TruncPoly::var(Var::C2);
        let f = x.sub(&c1).pow(2).sub(&y.sub(&c2).pow(2)).sub(&c1.pow(2));
        SolutionFamily::new(f).expect("nondegenerate")
    }

    /// Numeric 2-jets of family members: for each parameter pair and each
    /// abscissa, every real branch `y` located by root-finding contributes
    /// one jet, with `y'` and `y''` from the exact implicit-differentiation
    /// formulas
    ///
    /// ```text
    /// y'  = -F_x / F_y
    /// y'' = -(F_xx + 2 F_xy y' + F_yy y'^2) / F_y
    /// ```
    pub fn sample(&self, params: &[(f64, f64)], xs: &[f64]) -> Result<Vec<Jet>, FamilyError> {
        let fx = self.f.partial(Var::X);
        let fy = self.f.partial(Var::Y);
        let fxx = fx.partial(Var::X);
        let fxy = fx.partial(Var::Y);
        let fyy = fy.partial(Var::Y);
        let mut jets = Vec::new();
        for &(c1, c2) in params {
            for &x in xs {
                let roots = self.real_roots_in_y(x, c1, c2)?;
                if roots.is_empty() {
                    return Err(FamilyError::BranchFailure);
                }
                for y in roots {
                    let at = assign(x, y, c1, c2);
                    let fy_v = fy.eval_complex(&at);
                    if fy_v.norm() < 1e-9 {
                        return Err(FamilyError::SingularJet);
                    }
                    let fx_v = fx.eval_complex(&at);
                    let dy = -fx_v / fy_v;
                    let d2y = -(fxx.eval_complex(&at)
                        + 2.0 * fxy.eval_complex(&at) * dy
                        + fyy.eval_complex(&at) * dy * dy)
                        / fy_v;
                    jets.push(Jet {
                        x: Complex64::new(x, 0.0),
                        y: Complex64::new(y, 0.0),
                        dy,
                        d2y,
                    });
                }
            }
        }
        Ok(jets)
    }

    /// Real roots of `y -> F(x, y, c1, c2)` by sign-change bisection plus a
    /// Newton polish, to absolute tolerance `1e-13`.
    fn real_roots_in_y(&self, x: f64, c1: f64, c2: f64) -> Result<Vec<f64>, FamilyError> {
        let deg = self.f.degree(Var::Y).unwrap_or(0) as usize;
        let mut coeffs = alloc::vec![0.0f64; deg + 1];
        for (e, c) in self.f.terms() {
            let j = e[Var::Y as usize] as usize;
            let z = c.to_complex();
            debug_assert!(z.im == 0.0, "real-coefficient families only");
            let scale = fpow(x, e[Var::X as usize])
                * fpow(c1, e[Var::C1 as usize])
                * fpow(c2, e[Var::C2 as usize]);
            coeffs[j] += z.re * scale;
        }
        while coeffs.len() > 1 && coeffs.last().copied().unwrap_or(0.0).abs() < 1e-300 {
            coeffs.pop();
        }
        if coeffs.len() <= 1 {
            return Err(FamilyError::BranchFailure);
        }
        let lead = *coeffs.last().unwrap();
        let bound = 1.0
            + coeffs[..coeffs.len() - 1]
                .iter()
                .map(|c| (c / lead).abs())
                .fold(0.0f64, f64::max);
        let eval = |y: f64| -> f64 {
            let mut acc = 0.0;
            for &c in coeffs.iter().rev() {
                acc = acc * y + c;
            }
            acc
        };
        let steps = 512;
        let mut roots: Vec<f64> = Vec::new();
        let mut prev_y = -bound;
        let mut prev_v = eval(prev_y);
        for i in 1..=steps {
            let y = -bound + 2.0 * bound * (i as f64) / (steps as f64);
            let v = eval(y);
            if prev_v == 0.0 {
                push_root(&mut roots, prev_y);
            } else if prev_v * v < 0.0 {
                let mut lo = prev_y;
                let mut hi = y;
                let mut flo = prev_v;
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    let fm = eval(mid);
                    if flo * fm <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                let mut r = 0.5 * (lo + hi);
                // Newton polish
                for _ in 0..8 {
                    let f = eval(r);
                    let mut d = 0.0;
                    for (j, &c) in coeffs.iter().enumerate().skip(1) {
                        d += j as f64 * c * fpow(r, (j - 1) as u16);
                    }
                    if d.abs() < 1e-300 {
                        break;
                    }
                    let step = f / d;
                    r -= step;
                    if step.abs() < 1e-15 {
                        break;
                    }
                }
                if eval(r).abs() < 1e-13 * (1.0 + lead.abs() * fpow(bound, deg as u16)) {
                    push_root(&mut roots, r);
                }
            }
            prev_y = y;
            prev_v = v;
        }
        Ok(roots)
    }
}

fn fpow(base: f64, exp: u16) -> f64 {
    let mut acc = 1.0;
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

fn push_root(roots: &mut Vec<f64>, r: f64) {
    if roots.iter().all(|&q| (q - r).abs() > 1e-8) {
        roots.push(r);
    }
}

fn assign(x: f64, y: f64, c1: f64, c2: f64) -> [Complex64; NVARS] {
    let mut a = [Complex64::new(0.0, 0.0); NVARS];
    a[Var::X as usize] = Complex64::new(x, 0.0);
    a[Var::Y as usize] = Complex64::new(y, 0.0);
    a[Var::C1 as usize] = Complex64::new(c1, 0.0);
    a[Var::C2 as usize] = Complex64::new(c2, 0.0);
    a
}

/// Helper for building a family from exact rational data.
pub fn rational(n: i64, d: i64) -> GaussRational {
    GaussRational::from_ratio(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::OdeSpec;

    #[test]
    fn quartic_family_hand_jet() {
        // c1 = 0, c2 = 1, x = 1: F = y^2 - x^2 - 1, y = sqrt(2), y' = x/y
        let fam = SolutionFamily::quartic();
        let jets = fam.sample(&[(0.0, 1.0)], &[1.0]).unwrap();
        let top: Vec<&Jet> = jets.iter().filter(|j| j.y.re > 0.0).collect();
        assert_eq!(top.len(), 1);
        let j = top[0];
        assert!((j.y.re - 2.0f64.sqrt()).abs() < 1e-12);
        assert!((j.dy.re - 1.0 / 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn quartic_family_solves_the_quartic() {
        let fam = SolutionFamily::quartic();
        let ode = OdeSpec::quartic();
        let jets = fam
            .sample(&[(0.5, 1.0), (-0.25, 2.0), (1.0, 0.5)], &[0.5, 1.0, 1.5])
            .unwrap();
        assert!(!jets.is_empty());
        for j in &jets {
            assert!(ode.residual_at(j) < 1e-10, "residual {}", ode.residual_at(j));
        }
    }

    #[test]
    fn line_family_jets() {
        let fam = SolutionFamily::lines();
        let jets = fam.sample(&[(3.0, 0.0)], &[2.0]).unwrap();
        assert_eq!(jets.len(), 1);
        let j = &jets[0];
        assert!((j.y.re - 6.0).abs() < 1e-12);
        assert!((j.dy.re - 3.0).abs() < 1e-12);
        assert!(j.d2y.norm() < 1e-12);
        assert!(OdeSpec::quadric().residual_at(j) < 1e-12);
    }

    #[test]
    fn dual_family_real_branch() {
        // (x - 1)^2 - y^2 = 1 at x = 3: y^2 = 3, both branches
        let fam = SolutionFamily::dual_quartic();
        let jets = fam.sample(&[(1.0, 0.0)], &[3.0]).unwrap();
        assert_eq!(jets.len(), 2);
        for j in &jets {
            assert!((j.y.re.abs() - 3.0f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn perturbed_jet_leaves_residual() {
        let fam = SolutionFamily::quartic();
        let ode = OdeSpec::quartic();
        let jets = fam.sample(&[(0.0, 1.0)], &[1.0]).unwrap();
        let mut bad = jets[0];
        bad.d2y += Complex64::new(1.0, 0.0);
        assert!((ode.residual_at(&bad) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn branch_failure_when_no_real_root() {
        // (x-c1)^2 - (y-c2)^2 = c1^2 has no real y when (x-c1)^2 < c1^2
        let fam = SolutionFamily::dual_quartic();
        assert_eq!(
            fam.sample(&[(1.0, 0.0)], &[1.0]).unwrap_err(),
            FamilyError::BranchFailure
        );
    }

    #[test]
    fn degenerate_family_rejected() {
        assert_eq!(
            SolutionFamily::new(TruncPoly::var(Var::X)).unwrap_err(),
            FamilyError::DegenerateFamily
        );
    }
}
