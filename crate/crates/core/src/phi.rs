//! Series solver for the profile function `phi(y)` of shear-invariant
//! equations carrying one non-isotropic extra symmetry
//! `(1 + (phi(y) + a) x) d/dx + phi(y) y d/dy`.
//!
//! The profile satisfies the fourth-order equation
//!
//! ```text
//! (y^2 phi'''' + 8 y phi''' + 12 phi'') phi^2
//!   + a (3 y phi''' phi + 10 phi'' phi - y phi'' phi') + 2 a^2 phi'' = 0
//! ```
//!
//! and determines the normal-form data through `f1 = -phi''/2` and
//! `f0 = -((y phi''' + 3 phi'') phi + a phi'')/6`.
//!
//! Coefficient equations are generated by expanding the equation itself
//! order by order, never by transcribing closed-form recursions; the
//! unknown at each order enters affinely, and an order whose leading
//! factor vanishes exactly is a resonance where a free parameter enters
//! (after verifying that the forced part vanishes).

use core::fmt;

use crate::ode::{make_shear_ode, OdeError, OdeSpec};
use crate::poly::{TruncPoly, Var};
use crate::scalar::GaussRational;
use crate::symmetry::PlaneField;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Branch {
    /// `a + (k+1) phi_0 = 0`; carries one resonant order.
    One,
    /// `2a + (k+2) phi_0 = 0`; resonance-free.
    Two,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PhiError {
    /// `phi_k` must be nonzero (it is the first nonvanishing coefficient
    /// beyond the linear part).
    ZeroLeading,
    /// `a = 0` forces the flat model; the ansatz needs `a != 0`.
    ZeroParameter,
    /// `k >= 2` is required.
    BadIndex,
    /// A resonant order whose forced part does not vanish: the inputs are
    /// inconsistent with the branch structure.
    ResonanceObstruction { coefficient: u32 },
    /// Branch One hit its resonance but no free parameter was supplied.
    MissingResonantParameter { coefficient: u32 },
    /// A resonance appeared where the branch admits none.
    UnexpectedResonance { coefficient: u32 },
    /// The `f1 -> 0` quotient in the special-case identity is undefined.
    NonInvertible,
    Ode(OdeError),
}

impl From<OdeError> for PhiError {
    fn from(e: OdeError) -> Self {
        PhiError::Ode(e)
    }
}

impl fmt::Display for PhiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiError::ZeroLeading => write!(f, "phi_k must be nonzero"),
            PhiError::ZeroParameter => write!(f, "the symmetry parameter a must be nonzero"),
            PhiError::BadIndex => write!(f, "the leading index k must be at least 2"),
            PhiError::ResonanceObstruction { coefficient } => {
                write!(f, "nonzero forced part at resonant coefficient {}", coefficient)
            }
            PhiError::MissingResonantParameter { coefficient } => {
                write!(f, "free parameter required at resonant coefficient {}", coefficient)
            }
            PhiError::UnexpectedResonance { coefficient } => {
                write!(f, "unexpected resonance at coefficient {}", coefficient)
            }
            PhiError::NonInvertible => write!(f, "quotient undefined: f1 vanishes"),
            PhiError::Ode(e) => write!(f, "{}", e),
        }
    }
}

/// A solved profile series with its derived normal-form data.
#[derive(Clone, Debug)]
pub struct PhiSolution {
    pub phi: TruncPoly,
    pub branch: Branch,
    pub k: u32,
    pub a: GaussRational,
    /// Coefficient index of the resonant order, when one occurred.
    pub resonant_index: Option<u32>,
    pub f0: TruncPoly,
    pub f1: TruncPoly,
}

/// Left-hand side of the fourth-order profile equation, exact modulo the
/// certified order of `phi` minus four.
pub fn phi_residual(phi: &TruncPoly, a: &GaussRational) -> TruncPoly {
    let y = TruncPoly::var(Var::Y);
    let d2 = phi.partial(Var::Y).partial(Var::Y);
    let d3 = d2.partial(Var::Y);
    let d4 = d3.partial(Var::Y);
    let core = y
        .pow(2)
        .mul(&d4)
        .add(&y.mul(&d3).scale(&GaussRational::from_int(8)))
        .add(&d2.scale(&GaussRational::from_int(12)));
    let mut acc = core.mul(&phi.mul(phi));
    let linear = y
        .mul(&d3)
        .mul(phi)
        .scale(&GaussRational::from_int(3))
        .add(&d2.mul(phi).scale(&GaussRational::from_int(10)))
        .sub(&y.mul(&d2).mul(&phi.partial(Var::Y)));
    acc = acc.add(&linear.scale(a));
    acc.add(&d2.scale(&(&(a * a) * &GaussRational::from_int(2))))
}

/// `f1 = -phi''/2`.
pub fn f1_from_phi(phi: &TruncPoly) -> TruncPoly {
    phi.partial(Var::Y)
        .partial(Var::Y)
        .scale(&GaussRational::from_ratio(-1, 2))
}

/// `f0 = -((y phi''' + 3 phi'') phi + a phi'') / 6`.
pub fn f0_from_phi(phi: &TruncPoly, a: &GaussRational) -> TruncPoly {
    let d2 = phi.partial(Var::Y).partial(Var::Y);
    let d3 = d2.partial(Var::Y);
    let inner = TruncPoly::var(Var::Y)
        .mul(&d3)
        .add(&d2.scale(&GaussRational::from_int(3)));
    inner
        .mul(phi)
        .add(&d2.scale(a))
        .scale(&GaussRational::from_ratio(-1, 6))
}

/// Solve the profile equation order by order.
///
/// Branch One must supply `resonant` for the free coefficient at its
/// resonant order; Branch Two rejects it implicitly by never reaching a
/// resonance.
pub fn solve_phi(
    branch: Branch,
    k: u32,
    a: &GaussRational,
    phi_k: &GaussRational,
    phi_k1: &GaussRational,
    resonant: Option<&GaussRational>,
    n: u32,
) -> Result<PhiSolution, PhiError> {
    if a.is_zero() {
        return Err(PhiError::ZeroParameter);
    }
    if phi_k.is_zero() {
        return Err(PhiError::ZeroLeading);
    }
    if k < 2 {
        return Err(PhiError::BadIndex);
    }
    let phi0 = match branch {
        Branch::One => -&(a / &GaussRational::from_int(k as i64 + 1)),
        Branch::Two => {
            -&(&(&GaussRational::from_int(2) * a) / &GaussRational::from_int(k as i64 + 2))
        }
    };
    let mut coeffs = alloc::vec![GaussRational::zero(); n as usize + 1];
    coeffs[0] = phi0;
    coeffs[k as usize] = phi_k.clone();
    if (k + 1) as usize <= n as usize {
        coeffs[(k + 1) as usize] = phi_k1.clone();
    }
    // phi_1 from the affine equation at order k-1
    let solved1 = solve_affine_coefficient(&coeffs, 1, k - 1, a, n)
        .map_err(|_| PhiError::ResonanceObstruction { coefficient: 1 })?;
    match solved1 {
        AffineSolve::Determined(v) => coeffs[1] = v,
        AffineSolve::Free => coeffs[1] = GaussRational::zero(),
    }
    let mut resonant_index = None;
    for m in (k + 2)..=n {
        match solve_affine_coefficient(&coeffs, m, m - 2, a, n) {
            Ok(AffineSolve::Determined(v)) => coeffs[m as usize] = v,
            Ok(AffineSolve::Free) => {
                if resonant_index.is_some() || branch == Branch::Two {
                    return Err(PhiError::UnexpectedResonance { coefficient: m });
                }
                resonant_index = Some(m);
                match resonant {
                    Some(v) => coeffs[m as usize] = v.clone(),
                    None => {
                        return Err(PhiError::MissingResonantParameter { coefficient: m })
                    }
                }
            }
            Err(()) => return Err(PhiError::ResonanceObstruction { coefficient: m }),
        }
    }
    let phi = TruncPoly::series(Var::Y, &coeffs, n);
    let f0 = f0_from_phi(&phi, a);
    let f1 = f1_from_phi(&phi);
    Ok(PhiSolution { phi, branch, k, a: a.clone(), resonant_index, f0, f1 })
}

enum AffineSolve {
    Determined(GaussRational),
    /// Leading factor vanished and the forced part is zero: free parameter.
    Free,
}

/// The equation at series order `order` is affine in the unknown
/// `phi_target`; solve it by two evaluations of the full residual.
/// `Err(())` when the leading factor vanishes but the forced part does not.
fn solve_affine_coefficient(
    coeffs: &[GaussRational],
    target: u32,
    order: u32,
    a: &GaussRational,
    n: u32,
) -> Result<AffineSolve, ()> {
    let eval = |value: &GaussRational| -> GaussRational {
        let mut c = coeffs.to_vec();
        c[target as usize] = value.clone();
        let phi = TruncPoly::series(Var::Y, &c, n);
        coeff_of(&phi_residual(&phi, a), order)
    };
    let at_zero = eval(&GaussRational::zero());
    let at_one = eval(&GaussRational::one());
    let lead = &at_one - &at_zero;
    if lead.is_zero() {
        if at_zero.is_zero() {
            Ok(AffineSolve::Free)
        } else {
            Err(())
        }
    } else {
        Ok(AffineSolve::Determined(-&(&at_zero / &lead)))
    }
}

fn coeff_of(p: &TruncPoly, order: u32) -> GaussRational {
    let mut e = [0u16; crate::poly::NVARS];
    e[Var::Y as usize] = order as u16;
    p.coeff(&e)
}

/// The leading factor of the order-`j` coefficient equation:
/// `(j+2)(j+1)(a + (j+3) phi_0)(2a + (j+4) phi_0)`. The solver never uses
/// this closed form; it serves as the independent resonance locator.
pub fn recursion_lead(j: u32, a: &GaussRational, phi0: &GaussRational) -> GaussRational {
    let f1 = a + &(&GaussRational::from_int(j as i64 + 3) * phi0);
    let f2 = &(&GaussRational::from_int(2) * a) + &(&GaussRational::from_int(j as i64 + 4) * phi0);
    &(&GaussRational::from_int((j as i64 + 2) * (j as i64 + 1)) * &f1) * &f2
}

/// The equation and extra symmetry generated by a solved profile.
pub fn extract_ode(sol: &PhiSolution) -> Result<(OdeSpec, PlaneField), PhiError> {
    let ode = make_shear_ode(&sol.f0, &sol.f1)?;
    let xi = TruncPoly::from_int(1).add(
        &sol.phi
            .add(&TruncPoly::constant(sol.a.clone()))
            .mul(&TruncPoly::var(Var::X)),
    );
    let eta = sol.phi.mul(&TruncPoly::var(Var::Y));
    Ok((ode, PlaneField::new(xi, eta)))
}

/// The special-case identity `(f1 / (3 f1 + y f1'))'' = -2 f1`, which holds
/// exactly when the profile generates `f0 = 0`.
///
/// The quotient is formed after cancelling the leading power of `y`, making
/// the denominator a unit.
pub fn check_c0_identity(f1: &TruncPoly) -> Result<bool, PhiError> {
    if f1.is_zero() {
        return Err(PhiError::NonInvertible);
    }
    let n = f1.trunc_order().unwrap_or_else(|| f1.degree(Var::Y).unwrap_or(0) + 2);
    let coeffs = f1.series_coeffs(Var::Y, n).map_err(|_| PhiError::NonInvertible)?;
    let l = coeffs.iter().position(|c| !c.is_zero()).ok_or(PhiError::NonInvertible)? as u32;
    // f1 = y^l u with u a unit; 3 f1 + y f1' = y^l ((l+3) u + y u')
    let u = TruncPoly::series(Var::Y, &coeffs[l as usize..], n - l);
    let den = u
        .scale(&GaussRational::from_int(l as i64 + 3))
        .add(&TruncPoly::var(Var::Y).mul(&u.partial(Var::Y)));
    let quotient = u.mul(&den.invert(n - l).map_err(|_| PhiError::NonInvertible)?);
    let lhs = quotient.partial(Var::Y).partial(Var::Y);
    let rhs = f1.scale(&GaussRational::from_int(-2));
    Ok(lhs.sub(&rhs).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::{determining_residual, PlaneField};

    fn q(a: i64, b: i64) -> GaussRational {
        GaussRational::from_ratio(a, b)
    }

    fn standard_inputs() -> (GaussRational, GaussRational, GaussRational) {
        (GaussRational::from_int(-1), GaussRational::from_int(-1), GaussRational::zero())
    }

    #[test]
    fn branch_two_frozen_coefficients() {
        let (a, pk, pk1) = standard_inputs();
        let sol = solve_phi(Branch::Two, 2, &a, &pk, &pk1, None, 16).unwrap();
        assert!(sol.resonant_index.is_none());
        let got = sol.phi.series_coeffs(Var::Y, 8).unwrap();
        let expect = [
            q(1, 2),
            q(0, 1),
            q(-1, 1),
            q(0, 1),
            q(-4, 9),
            q(0, 1),
            q(-4, 9),
            q(0, 1),
            q(-16, 27),
        ];
        assert_eq!(&got[..], &expect[..]);
        // branch identity 2a + (k+2) phi_0 = 0
        let check = &(&GaussRational::from_int(2) * &a)
            + &(&GaussRational::from_int(4) * &got[0]);
        assert!(check.is_zero());
        // f1 leading data: order k-2 = 0 with coefficient -k(k-1) phi_k / 2 = 1
        let f1 = sol.f1.series_coeffs(Var::Y, 6).unwrap();
        let expect_f1 = [q(1, 1), q(0, 1), q(8, 3), q(0, 1), q(20, 3), q(0, 1), q(448, 27)];
        assert_eq!(&f1[..], &expect_f1[..]);
        let f0 = sol.f0.series_coeffs(Var::Y, 6).unwrap();
        let expect_f0 = [q(1, 6), q(0, 1), q(1, 3), q(0, 1), q(2, 3), q(0, 1), q(112, 81)];
        assert_eq!(&f0[..], &expect_f0[..]);
    }

    #[test]
    fn branch_one_frozen_coefficients_and_resonance() {
        let (a, pk, pk1) = standard_inputs();
        let sol = solve_phi(Branch::One, 2, &a, &pk, &pk1, Some(&GaussRational::zero()), 16)
            .unwrap();
        // unique resonance at coefficient 2k = 4
        assert_eq!(sol.resonant_index, Some(4));
        let got = sol.phi.series_coeffs(Var::Y, 8).unwrap();
        let expect = [
            q(1, 3),
            q(0, 1),
            q(-1, 1),
            q(0, 1),
            q(0, 1),
            q(0, 1),
            q(9, 10),
            q(0, 1),
            q(891, 280),
        ];
        assert_eq!(&got[..], &expect[..]);
        let check = &a + &(&GaussRational::from_int(3) * &got[0]);
        assert!(check.is_zero());
        let f0 = sol.f0.series_coeffs(Var::Y, 6).unwrap();
        let expect_f0 = [q(0, 1), q(0, 1), q(-1, 1), q(0, 1), q(-6, 1), q(0, 1), q(-27, 1)];
        assert_eq!(&f0[..], &expect_f0[..]);
    }

    #[test]
    fn resonance_location_matches_the_lead_formula() {
        // the solver's dynamically detected resonance must sit exactly at
        // the root of the closed-form leading factor, and nowhere else
        let (a, _, _) = standard_inputs();
        for k in [2u32, 3, 4] {
            let phi0_one = -&(&a / &GaussRational::from_int(k as i64 + 1));
            let phi0_two =
                -&(&(&GaussRational::from_int(2) * &a) / &GaussRational::from_int(k as i64 + 2));
            for m in (k + 2)..=20 {
                let j = m - 2;
                let lead_one = recursion_lead(j, &a, &phi0_one);
                let lead_two = recursion_lead(j, &a, &phi0_two);
                assert_eq!(lead_one.is_zero(), m == 2 * k, "branch one k={} m={}", k, m);
                assert!(!lead_two.is_zero(), "branch two k={} m={}", k, m);
            }
        }
    }

    #[test]
    fn solver_agrees_with_lead_formula_resonances() {
        let (a, pk, pk1) = standard_inputs();
        for k in [2u32, 3] {
            let sol =
                solve_phi(Branch::One, k, &a, &pk, &pk1, Some(&GaussRational::zero()), 20)
                    .unwrap();
            assert_eq!(sol.resonant_index, Some(2 * k));
            let sol2 = solve_phi(Branch::Two, k, &a, &pk, &pk1, None, 20).unwrap();
            assert!(sol2.resonant_index.is_none());
        }
    }

    #[test]
    fn residual_vanishes_for_solutions() {
        let (a, pk, pk1) = standard_inputs();
        for branch in [Branch::One, Branch::Two] {
            let res_param = GaussRational::zero();
            let sol = solve_phi(branch, 2, &a, &pk, &pk1, Some(&res_param), 24).unwrap();
            let r = phi_residual(&sol.phi, &a);
            assert!(r.is_zero(), "residual {:?}", r);
            assert!(r.trunc_order().unwrap() >= 20);
        }
    }

    #[test]
    fn affine_profiles_are_trivial_solutions() {
        // every term of the equation carries phi'' or higher
        let phi = TruncPoly::from_int(5).add(&TruncPoly::var(Var::Y).scale(&q(3, 7)));
        assert!(phi_residual(&phi, &GaussRational::from_int(-2)).is_zero());
    }

    #[test]
    fn perturbed_solution_fails() {
        let (a, pk, pk1) = standard_inputs();
        let sol = solve_phi(Branch::Two, 2, &a, &pk, &pk1, None, 12).unwrap();
        let bumped = sol.phi.add(&TruncPoly::monomial(GaussRational::one(), &[(Var::Y, 6)]));
        assert!(!phi_residual(&bumped, &a).is_zero());
    }

    #[test]
    fn preconditions() {
        let one = GaussRational::one();
        let zero = GaussRational::zero();
        assert_eq!(
            solve_phi(Branch::Two, 2, &zero, &one, &zero, None, 8).unwrap_err(),
            PhiError::ZeroParameter
        );
        assert_eq!(
            solve_phi(Branch::Two, 2, &one, &zero, &zero, None, 8).unwrap_err(),
            PhiError::ZeroLeading
        );
        assert_eq!(
            solve_phi(Branch::Two, 1, &one, &one, &zero, None, 8).unwrap_err(),
            PhiError::BadIndex
        );
        // branch one without the free parameter
        assert_eq!(
            solve_phi(Branch::One, 2, &one, &one, &zero, None, 12).unwrap_err(),
            PhiError::MissingResonantParameter { coefficient: 4 }
        );
    }

    #[test]
    fn extra_symmetry_annihilates_the_determining_equation() {
        let (a, pk, pk1) = standard_inputs();
        let sol = solve_phi(Branch::Two, 2, &a, &pk, &pk1, None, 20).unwrap();
        let (ode, field) = extract_ode(&sol).unwrap();
        let r = determining_residual(&ode, &field);
        assert!(r.is_zero(), "residual {:?}", r);
        assert!(r.trunc_order().unwrap() >= 16);
        // the shear is also a symmetry
        assert!(determining_residual(&ode, &PlaneField::shear()).is_zero());
        // shifting the parameter a breaks the symmetry
        let bad_xi = TruncPoly::from_int(1).add(
            &sol.phi
                .add(&TruncPoly::constant(&sol.a + &GaussRational::one()))
                .mul(&TruncPoly::var(Var::X)),
        );
        let bad = PlaneField::new(bad_xi, field.eta.clone());
        assert!(!determining_residual(&ode, &bad).is_zero());
    }

    #[test]
    fn tuned_branch_one_gives_vanishing_f0_and_the_special_identity() {
        let (a, pk, pk1) = standard_inputs();
        let tuned = q(-3, 4);
        let sol = solve_phi(Branch::One, 2, &a, &pk, &pk1, Some(&tuned), 20).unwrap();
        assert!(sol.f0.is_zero(), "f0 = {:?}", sol.f0);
        assert!(check_c0_identity(&sol.f1).unwrap());
        // a generic resonant value leaves f0 nonzero and the identity false
        let generic = solve_phi(Branch::One, 2, &a, &pk, &pk1, Some(&GaussRational::zero()), 20)
            .unwrap();
        assert!(!generic.f0.is_zero());
        assert!(!check_c0_identity(&generic.f1).unwrap());
        assert_eq!(check_c0_identity(&TruncPoly::zero()).unwrap_err(), PhiError::NonInvertible);
    }

    #[test]
    fn obstruction_surfaces_on_inconsistent_inputs() {
        // seed a coefficient state outside both branch structures:
        // phi_0 = 1/5 makes the leading factor vanish at coefficient 4
        // while the forced part stays nonzero (48 phi_0 + 16 a != 0 for
        // phi_2 = 1), so the recursion must report an obstruction there.
        let a = GaussRational::from_int(-1);
        let mut coeffs = alloc::vec![GaussRational::zero(); 13];
        coeffs[0] = q(1, 5);
        coeffs[2] = GaussRational::one();
        let mut obstructed_at = None;
        for m in 4..=12u32 {
            match solve_affine_coefficient(&coeffs, m, m - 2, &a, 12) {
                Ok(AffineSolve::Determined(v)) => coeffs[m as usize] = v,
                Ok(AffineSolve::Free) => {}
                Err(()) => {
                    obstructed_at = Some(m);
                    break;
                }
            }
        }
        assert_eq!(obstructed_at, Some(4));
    }
}
