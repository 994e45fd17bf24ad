//! Classification of shear normal forms by their isotropy: the flat model,
//! the multi-shear equations, the two four-dimensional-isotropy families,
//! and the generic remainder, together with exact normalizing maps.

use alloc::vec::Vec;
use core::fmt;

use crate::ode::{make_shear_ode, pushforward, OdeError, PointMap};
use crate::poly::{TruncPoly, Var};
use crate::scalar::GaussRational;
use crate::symmetry::IsotropicSolution;

/// Isotropy classes, with their family parameters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Label {
    /// `f0 = f1 = 0`: the flat model `y'' = 0`.
    Quadric,
    /// `f1 = 0`, `f0 = K (1 - c y)^{-3}`: more than one shear; equivalent
    /// to the cubic model `y'' = (y - x y')^3`.
    MultiShear,
    /// `f1 = 0`, `f0 = C1 y^k (1 - c y)^{-k-3}` with `k >= 1`.
    FamilyA { k: u32 },
    /// `f1 = C2 y^l (1 - c y)^{-l-3}` and `f0 = C1 y^(2l+2) (1 - c y)^{-2l-5}`
    /// (or zero), with the invariant modulus `c = C1 / C2^2`.
    FamilyB { l: u32, c: GaussRational },
    Generic,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum IsotropyDim {
    Ten,
    Four,
    AtMostThree,
}

impl fmt::Display for IsotropyDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsotropyDim::Ten => write!(f, "10"),
            IsotropyDim::Four => write!(f, "4"),
            IsotropyDim::AtMostThree => write!(f, "<=3"),
        }
    }
}

/// A matched closed form `lead * y^k * (1 - denom*y)^(-k-3)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FamilyMatch {
    pub k: u32,
    pub lead: GaussRational,
    pub denom: GaussRational,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub label: Label,
    pub isotropy_dim: IsotropyDim,
    /// Order up to which membership was verified (families) or excluded
    /// (generic).
    pub certified_order: u32,
    /// Exact projective map taking the input to its normal form, when one
    /// exists over the Gaussian rationals.
    pub normalizer: Option<PointMap>,
    pub f0_match: Option<FamilyMatch>,
    pub f1_match: Option<FamilyMatch>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClassifyError {
    /// Too few certified orders to see even the leading coefficients.
    InsufficientTruncation,
    /// `normalize` was applied to a label without a normal form, or the
    /// scaling constant has no exact root in the coefficient field.
    NotNormalizable,
    Ode(OdeError),
}

impl From<OdeError> for ClassifyError {
    fn from(e: OdeError) -> Self {
        ClassifyError::Ode(e)
    }
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::InsufficientTruncation => write!(f, "series truncation too low"),
            ClassifyError::NotNormalizable => write!(f, "no exact normal form reachable"),
            ClassifyError::Ode(e) => write!(f, "{}", e),
        }
    }
}

fn window(f: &TruncPoly, n: u32) -> u32 {
    f.trunc_order().unwrap_or(n)
}

/// Match `f` against `lead * y^k * (1 - c y)^(-k-3)` through order `upto`.
fn match_closed_form(f: &TruncPoly, upto: u32) -> Option<FamilyMatch> {
    let coeffs = f.series_coeffs(Var::Y, upto).ok()?;
    let k = coeffs.iter().position(|c| !c.is_zero())? as u32;
    let lead = coeffs[k as usize].clone();
    if k + 1 > upto {
        return None;
    }
    // b_{k+1} = (k+3) c * lead
    let denom = &coeffs[k as usize + 1] / &(&GaussRational::from_int(k as i64 + 3) * &lead);
    // b_{k+m} = lead * binom(k+2+m, m) * c^m, checked incrementally
    let mut expected = lead.clone();
    for m in 1..=(upto - k) {
        let step = GaussRational::from_ratio(k as i64 + 2 + m as i64, m as i64);
        expected = &(&expected * &step) * &denom;
        if coeffs[(k + m) as usize] != expected {
            return None;
        }
    }
    Some(FamilyMatch { k, lead, denom })
}

/// Classify a shear normal form `(f0, f1)` at requested order `n`.
///
/// A family label is only definitive when the certified window reaches
/// `2 * leading order + 8`; exact polynomial inputs are always definitive.
pub fn classify(
    f0: &TruncPoly,
    f1: &TruncPoly,
    n: u32,
) -> Result<ClassificationReport, ClassifyError> {
    classify_inner(f0, f1, n, false)
}

/// As [`classify`], but also constructs the exact normalizing map for the
/// family labels (one pushforward per input).
pub fn classify_with_normalizer(
    f0: &TruncPoly,
    f1: &TruncPoly,
    n: u32,
) -> Result<ClassificationReport, ClassifyError> {
    classify_inner(f0, f1, n, true)
}

fn classify_inner(
    f0: &TruncPoly,
    f1: &TruncPoly,
    n: u32,
    build_normalizer: bool,
) -> Result<ClassificationReport, ClassifyError> {
    let certified = window(f0, n).min(window(f1, n));
    if certified < 2 {
        return Err(ClassifyError::InsufficientTruncation);
    }
    let exact_inputs = f0.trunc_order().is_none() && f1.trunc_order().is_none();
    let definitive = |lead: u32| exact_inputs || certified >= 2 * lead + 8;

    let mut report = ClassificationReport {
        label: Label::Generic,
        isotropy_dim: IsotropyDim::AtMostThree,
        certified_order: certified,
        normalizer: None,
        f0_match: None,
        f1_match: None,
    };

    if f0.is_zero() && f1.is_zero() {
        report.label = Label::Quadric;
        report.isotropy_dim = IsotropyDim::Ten;
        report.normalizer = Some(PointMap::identity());
        return Ok(report);
    }

    if f1.is_zero() {
        if let Some(m) = match_closed_form(f0, certified) {
            if definitive(m.k) {
                report.label = if m.k == 0 {
                    Label::MultiShear
                } else {
                    Label::FamilyA { k: m.k }
                };
                report.isotropy_dim = IsotropyDim::Four;
                report.f0_match = Some(m);
            }
        }
    } else if f0.is_zero() {
        if let Some(m) = match_closed_form(f1, certified) {
            if definitive(m.k) {
                report.label = Label::FamilyB { l: m.k, c: GaussRational::zero() };
                report.isotropy_dim = IsotropyDim::Four;
                report.f1_match = Some(m);
            }
        }
    } else if let (Some(m1), Some(m0)) =
        (match_closed_form(f1, certified), match_closed_form(f0, certified))
    {
        // coupled family: deg f0 = 2 l + 2 with the same denominator
        if m0.k == 2 * m1.k + 2 && m0.denom == m1.denom && definitive(m0.k) {
            let c = &m0.lead / &(&m1.lead * &m1.lead);
            report.label = Label::FamilyB { l: m1.k, c };
            report.isotropy_dim = IsotropyDim::Four;
            report.f0_match = Some(m0);
            report.f1_match = Some(m1);
        }
    }

    if build_normalizer && !matches!(report.label, Label::Generic) {
        report.normalizer = build_normal_map(&report, f0, f1, n)?;
    }
    Ok(report)
}

/// A scaling `(l, m)` with `l^2 m^(k+2) * lead = 1`, when one exists over
/// the Gaussian rationals (the monomial `y^k` carries weight
/// `l^2 m^(k+2)` under `(x, y) -> (l X, m Y)`). Odd `k` always admits
/// integer exponents of `lead`; even `k` needs an exact square root.
fn normalizing_scaling(k: u32, lead: &GaussRational) -> Option<(GaussRational, GaussRational)> {
    if k % 2 == 1 {
        // 2a + (k+2)b = -1 with b = 1, a = -(k+3)/2
        let a = -((k as i64 + 3) / 2);
        Some((lead.pow(a), lead.clone()))
    } else {
        let root = lead.sqrt_exact()?;
        Some((root.inv().expect("nonzero leading coefficient"), GaussRational::one()))
    }
}

fn build_normal_map(
    report: &ClassificationReport,
    f0: &TruncPoly,
    f1: &TruncPoly,
    n: u32,
) -> Result<Option<PointMap>, ClassifyError> {
    let kill = |denom: &GaussRational| {
        PointMap::projective(-denom, GaussRational::one(), GaussRational::one()).expect("unit map")
    };
    match &report.label {
        Label::Quadric => Ok(Some(PointMap::identity())),
        Label::MultiShear | Label::FamilyA { .. } => {
            let m = report.f0_match.as_ref().expect("match recorded");
            let kill_map = kill(&m.denom);
            let ode = make_shear_ode(f0, f1)?;
            let moved = pushforward(&ode, &kill_map, n)?;
            let (g0, _) = moved.meta().ok_or(ClassifyError::NotNormalizable)?;
            let lead = monomial_lead(g0, m.k).ok_or(ClassifyError::NotNormalizable)?;
            let Some((l, mu)) = normalizing_scaling(m.k, &lead) else {
                return Ok(None);
            };
            let scale = PointMap::scaling(l, mu).expect("nonzero scaling");
            Ok(kill_map.compose(&scale))
        }
        Label::FamilyB { .. } => {
            let m = report.f1_match.as_ref().expect("match recorded");
            let kill_map = kill(&m.denom);
            let ode = make_shear_ode(f0, f1)?;
            let moved = pushforward(&ode, &kill_map, n)?;
            let (_, g1) = moved.meta().ok_or(ClassifyError::NotNormalizable)?;
            let lead = monomial_lead(g1, m.k).ok_or(ClassifyError::NotNormalizable)?;
            // l * m^(k+2) * lead = 1 with m = 1
            let scale = PointMap::scaling(lead.inv().expect("nonzero lead"), GaussRational::one())
                .expect("nonzero scaling");
            Ok(kill_map.compose(&scale))
        }
        Label::Generic => Ok(None),
    }
}

/// Leading coefficient of a pure monomial `C y^k`; `None` if other orders
/// survive.
fn monomial_lead(f: &TruncPoly, k: u32) -> Option<GaussRational> {
    let upto = f.trunc_order().unwrap_or_else(|| f.degree(Var::Y).unwrap_or(0));
    let coeffs = f.series_coeffs(Var::Y, upto.max(k)).ok()?;
    let mut lead = None;
    for (j, c) in coeffs.iter().enumerate() {
        if j as u32 == k {
            if c.is_zero() {
                return None;
            }
            lead = Some(c.clone());
        } else if !c.is_zero() {
            return None;
        }
    }
    lead
}

/// Check both coefficient recursions of the isotropic ansatz against the
/// series data, through every certified order.
pub fn recursion_witness(
    f0: &TruncPoly,
    f1: &TruncPoly,
    sol: &IsotropicSolution,
    n: u32,
) -> bool {
    let upto = window(f0, n).min(window(f1, n));
    let Ok(b) = f0.series_coeffs(Var::Y, upto) else {
        return false;
    };
    let Ok(c) = f1.series_coeffs(Var::Y, upto) else {
        return false;
    };
    for m in 0..=upto as usize {
        let prev_c = if m == 0 { GaussRational::zero() } else { c[m - 1].clone() };
        let prev_b = if m == 0 { GaussRational::zero() } else { b[m - 1].clone() };
        let nn = m as i64;
        let lhs1 = &(&(&sol.a + &(&GaussRational::from_int(nn + 3) * &sol.beta1)) * &c[m])
            + &(&(&GaussRational::from_int(nn + 2) * &sol.alpha3) * &prev_c);
        let lhs2 = &(&(&(&GaussRational::from_int(2) * &sol.a)
            + &(&GaussRational::from_int(nn + 4) * &sol.beta1))
            * &b[m])
            + &(&(&GaussRational::from_int(nn + 2) * &sol.alpha3) * &prev_b);
        if !lhs1.is_zero() || !lhs2.is_zero() {
            return false;
        }
    }
    true
}

/// Push the input to its family normal form: `(y^k, 0)` for the monomial
/// family (and the multi-shear case with `k = 0`), or
/// `(C y^(2l+2), y^l)` returned as `(f0', f1')` for the coupled family.
pub fn normalize(
    report: &ClassificationReport,
    f0: &TruncPoly,
    f1: &TruncPoly,
    n: u32,
) -> Result<(TruncPoly, TruncPoly, PointMap), ClassifyError> {
    let map = match &report.normalizer {
        Some(m) => m.clone(),
        None => build_normal_map(report, f0, f1, n)?.ok_or(ClassifyError::NotNormalizable)?,
    };
    if matches!(report.label, Label::Generic) {
        return Err(ClassifyError::NotNormalizable);
    }
    let ode = make_shear_ode(f0, f1)?;
    let moved = pushforward(&ode, &map, n)?;
    let (g0, g1) = moved.meta().ok_or(ClassifyError::NotNormalizable)?;
    // verify the normal form exactly through the certified order
    let ok = match &report.label {
        Label::Quadric => g0.is_zero() && g1.is_zero(),
        Label::MultiShear | Label::FamilyA { .. } => {
            let k = report.f0_match.as_ref().map_or(0, |m| m.k);
            g1.is_zero() && g0 == &TruncPoly::var(Var::Y).pow(k)
        }
        Label::FamilyB { l, c } => {
            let want_f1 = TruncPoly::var(Var::Y).pow(*l);
            let want_f0 = TruncPoly::var(Var::Y).pow(2 * l + 2).scale(c);
            g1 == &want_f1 && g0 == &want_f0
        }
        Label::Generic => false,
    };
    if !ok {
        return Err(ClassifyError::NotNormalizable);
    }
    Ok((g0.clone(), g1.clone(), map))
}

/// Expand `lead * y^k * (1 - c y)^(-k-3)` as a series; the generator of all
/// family test inputs.
pub fn closed_form_series(
    k: u32,
    lead: &GaussRational,
    c: &GaussRational,
    n: u32,
) -> TruncPoly {
    let mut coeffs: Vec<GaussRational> = alloc::vec![GaussRational::zero(); n as usize + 1];
    let mut binom = lead.clone();
    for m in 0..=(n.saturating_sub(k)) {
        if m > 0 {
            let step = GaussRational::from_ratio(k as i64 + 2 + m as i64, m as i64);
            binom = &(&binom * &step) * c;
        }
        if (k + m) as usize <= n as usize {
            coeffs[(k + m) as usize] = binom.clone();
        }
    }
    TruncPoly::series(Var::Y, &coeffs, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn q(a: i64, b: i64) -> GaussRational {
        GaussRational::from_ratio(a, b)
    }

    #[test]
    fn quadric_classifies() {
        let r = classify(&TruncPoly::zero(), &TruncPoly::zero(), 24).unwrap();
        assert_eq!(r.label, Label::Quadric);
        assert_eq!(r.isotropy_dim, IsotropyDim::Ten);
    }

    #[test]
    fn family_a_closed_form() {
        // f0 = y^2 (1-y)^{-5}
        let f0 = closed_form_series(2, &GaussRational::one(), &GaussRational::one(), 24);
        let r = classify(&f0, &TruncPoly::zero(), 24).unwrap();
        assert_eq!(r.label, Label::FamilyA { k: 2 });
        assert_eq!(r.isotropy_dim, IsotropyDim::Four);
        assert_eq!(r.f0_match.unwrap().denom, GaussRational::one());
    }

    #[test]
    fn family_b_coupled_form() {
        // f1 = y (1-2y)^{-4}, f0 = 5 y^4 (1-2y)^{-7}: l = 1, C = 5
        let f1 = closed_form_series(1, &GaussRational::one(), &GaussRational::from_int(2), 24);
        let f0 = closed_form_series(4, &GaussRational::from_int(5), &GaussRational::from_int(2), 24);
        let r = classify(&f0, &f1, 24).unwrap();
        assert_eq!(r.label, Label::FamilyB { l: 1, c: GaussRational::from_int(5) });
    }

    #[test]
    fn generic_input() {
        let y = TruncPoly::var(Var::Y);
        let f0 = y.clone().add(&y.pow(3));
        let r = classify(&f0, &TruncPoly::from_int(1), 24).unwrap();
        assert_eq!(r.label, Label::Generic);
        assert_eq!(r.isotropy_dim, IsotropyDim::AtMostThree);
        assert!(r.certified_order >= 16);
    }

    #[test]
    fn multishear_form() {
        let f0 = closed_form_series(0, &GaussRational::from_int(4), &q(1, 2), 24);
        let r = classify(&f0, &TruncPoly::zero(), 24).unwrap();
        assert_eq!(r.label, Label::MultiShear);
        assert_eq!(r.isotropy_dim, IsotropyDim::Four);
    }

    #[test]
    fn perturbed_family_is_generic() {
        let mut f0 = closed_form_series(2, &GaussRational::one(), &GaussRational::one(), 24);
        f0 = f0.add(&TruncPoly::monomial(GaussRational::one(), &[(Var::Y, 9)]));
        let r = classify(&f0, &TruncPoly::zero(), 24).unwrap();
        assert_eq!(r.label, Label::Generic);
    }

    #[test]
    fn normalize_family_a() {
        let f0 = closed_form_series(2, &GaussRational::one(), &GaussRational::one(), 24);
        let r = classify_with_normalizer(&f0, &TruncPoly::zero(), 24).unwrap();
        assert!(r.normalizer.is_some());
        let (g0, g1, _) = normalize(&r, &f0, &TruncPoly::zero(), 24).unwrap();
        assert_eq!(g0, TruncPoly::var(Var::Y).pow(2));
        assert!(g1.is_zero());
    }

    #[test]
    fn normalize_is_idempotent_on_normal_forms() {
        let y = TruncPoly::var(Var::Y);
        let f0 = y.pow(2);
        let r = classify_with_normalizer(&f0, &TruncPoly::zero(), 20).unwrap();
        let (g0, g1, _) = normalize(&r, &f0, &TruncPoly::zero(), 20).unwrap();
        assert_eq!(g0, f0);
        assert!(g1.is_zero());
    }

    #[test]
    fn normalize_multishear_with_square_constant() {
        // K = 4 is a perfect square, so the scaling exists exactly
        let f0 = closed_form_series(0, &GaussRational::from_int(4), &GaussRational::one(), 24);
        let r = classify_with_normalizer(&f0, &TruncPoly::zero(), 24).unwrap();
        let (g0, g1, _) = normalize(&r, &f0, &TruncPoly::zero(), 24).unwrap();
        assert_eq!(g0, TruncPoly::from_int(1));
        assert!(g1.is_zero());
    }

    #[test]
    fn normalize_family_b() {
        let f1 = closed_form_series(1, &GaussRational::from_int(3), &GaussRational::one(), 24);
        let f0 = closed_form_series(4, &GaussRational::from_int(18), &GaussRational::one(), 24);
        let r = classify_with_normalizer(&f0, &f1, 24).unwrap();
        let expect_c = GaussRational::from_int(2); // 18 / 3^2
        assert_eq!(r.label, Label::FamilyB { l: 1, c: expect_c.clone() });
        let (g0, g1, _) = normalize(&r, &f0, &f1, 24).unwrap();
        assert_eq!(g1, TruncPoly::var(Var::Y));
        assert_eq!(g0, TruncPoly::var(Var::Y).pow(4).scale(&expect_c));
    }

    #[test]
    fn family_a_odd_k_normalizes_for_any_constant() {
        // odd k: integer exponents of the constant always give a scaling
        let f0 = closed_form_series(1, &q(3, 7), &q(-2, 3), 24);
        let r = classify_with_normalizer(&f0, &TruncPoly::zero(), 24).unwrap();
        assert_eq!(r.label, Label::FamilyA { k: 1 });
        let (g0, g1, _) = normalize(&r, &f0, &TruncPoly::zero(), 24).unwrap();
        assert_eq!(g0, TruncPoly::var(Var::Y));
        assert!(g1.is_zero());
    }

    #[test]
    fn recursion_witness_on_monomial_family() {
        // f0 = y^k, f1 = 0: alpha3 = 0, 2a + (k+4) beta1 = 0
        let k = 2u32;
        let f0 = TruncPoly::var(Var::Y).pow(k);
        let sol = IsotropicSolution {
            a: GaussRational::from_int(-(k as i64 + 4)),
            beta1: GaussRational::from_int(2),
            alpha3: GaussRational::zero(),
        };
        assert!(recursion_witness(&f0, &TruncPoly::zero(), &sol, 24));
        let bad = IsotropicSolution {
            a: GaussRational::from_int(1),
            beta1: GaussRational::from_int(2),
            alpha3: GaussRational::zero(),
        };
        assert!(!recursion_witness(&f0, &TruncPoly::zero(), &bad, 24));
        // the quadric satisfies the recursions for every parameter triple
        assert!(recursion_witness(&TruncPoly::zero(), &TruncPoly::zero(), &bad, 24));
    }

    #[test]
    fn classification_is_equivalence_invariant() {
        let mut rng = SplitMix64::new(9);
        for _ in 0..3 {
            let c1 = rng.nonzero_gauss_rational(2);
            let c2 = rng.nonzero_gauss_rational(2);
            let c = rng.gauss_rational(2);
            let map = PointMap::projective(c, c1, c2).unwrap();
            let f0 = closed_form_series(2, &GaussRational::from_int(3), &q(1, 2), 24);
            let ode = make_shear_ode(&f0, &TruncPoly::zero()).unwrap();
            let moved = pushforward(&ode, &map, 24).unwrap();
            let (g0, g1) = moved.meta().expect("stays shear invariant");
            let r = classify(g0, g1, 24).unwrap();
            assert_eq!(r.label, Label::FamilyA { k: 2 });
        }
    }
}
