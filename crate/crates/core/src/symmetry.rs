//! Infinitesimal point symmetries: prolongation, the determining equation,
//! the isotropic-ansatz and polynomial-ansatz solvers, Lie brackets and
//! algebra structure.

use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{exact_nullspace, QMatrix};
use crate::ode::OdeSpec;
use crate::poly::{Expo, TruncPoly, Var};
use crate::scalar::GaussRational;

/// A point vector field `xi(x,y) d/dx + eta(x,y) d/dy`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlaneField {
    pub xi: TruncPoly,
    pub eta: TruncPoly,
}

impl PlaneField {
    pub fn new(xi: TruncPoly, eta: TruncPoly) -> Self {
        PlaneField { xi, eta }
    }

    /// The distinguished shear `y d/dx`.
    pub fn shear() -> Self {
        PlaneField::new(TruncPoly::var(Var::Y), TruncPoly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.xi.is_zero() && self.eta.is_zero()
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        PlaneField::new(self.xi.scale(c), self.eta.scale(c))
    }

    pub fn add(&self, rhs: &PlaneField) -> Self {
        PlaneField::new(self.xi.add(&rhs.xi), self.eta.add(&rhs.eta))
    }

    pub fn sub(&self, rhs: &PlaneField) -> Self {
        PlaneField::new(self.xi.sub(&rhs.xi), self.eta.sub(&rhs.eta))
    }

    /// Apply the field as a derivation to a function of `(x, y)`.
    pub fn apply(&self, f: &TruncPoly) -> TruncPoly {
        self.xi.mul(&f.partial(Var::X)).add(&self.eta.mul(&f.partial(Var::Y)))
    }
}

impl fmt::Display for PlaneField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) d/dx + ({}) d/dy", self.xi, self.eta)
    }
}

/// A field on the jet space `(x, y, p)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JetField {
    pub xi: TruncPoly,
    pub eta: TruncPoly,
    pub phi1: TruncPoly,
}

/// First prolongation of a plane field to the jet space:
/// `phi1 = eta_x + p (eta_y - xi_x) - p^2 xi_y`.
pub fn prolong(v: &PlaneField) -> JetField {
    let p = TruncPoly::var(Var::P);
    let phi1 = v
        .eta
        .partial(Var::X)
        .add(&p.mul(&v.eta.partial(Var::Y).sub(&v.xi.partial(Var::X))))
        .sub(&p.pow(2).mul(&v.xi.partial(Var::Y)));
    JetField { xi: v.xi.clone(), eta: v.eta.clone(), phi1 }
}

/// The determining expression whose vanishing (modulo the certified series
/// order) characterises infinitesimal point symmetries of `y'' = B`:
///
/// ```text
/// xi B_x + eta B_y + phi1 B_p + (2 xi_x + 3 p xi_y - eta_y) B
///   - eta_xx + p (xi_xx - 2 eta_xy) + p^2 (2 xi_xy - eta_yy) + p^3 xi_yy
/// ```
pub fn determining_residual(ode: &OdeSpec, v: &PlaneField) -> TruncPoly {
    let b = ode.b();
    let p = TruncPoly::var(Var::P);
    let jet = prolong(v);
    let xi_x = v.xi.partial(Var::X);
    let xi_y = v.xi.partial(Var::Y);
    let eta_y = v.eta.partial(Var::Y);
    let mut acc = v.xi.mul(&b.partial(Var::X));
    acc = acc.add(&v.eta.mul(&b.partial(Var::Y)));
    acc = acc.add(&jet.phi1.mul(&b.partial(Var::P)));
    let linear = xi_x
        .scale(&GaussRational::from_int(2))
        .add(&p.mul(&xi_y).scale(&GaussRational::from_int(3)))
        .sub(&eta_y);
    acc = acc.add(&linear.mul(b));
    acc = acc.sub(&v.eta.partial(Var::X).partial(Var::X));
    acc = acc.add(&p.mul(
        &v.xi
            .partial(Var::X)
            .partial(Var::X)
            .sub(&v.eta.partial(Var::X).partial(Var::Y).scale(&GaussRational::from_int(2))),
    ));
    acc = acc.add(&p.pow(2).mul(
        &v.xi
            .partial(Var::X)
            .partial(Var::Y)
            .scale(&GaussRational::from_int(2))
            .sub(&v.eta.partial(Var::Y).partial(Var::Y)),
    ));
    acc = acc.add(&p.pow(3).mul(&v.xi.partial(Var::Y).partial(Var::Y)));
    acc
}

/// Lie bracket of plane fields.
pub fn lie_bracket(v: &PlaneField, w: &PlaneField) -> PlaneField {
    PlaneField::new(
        v.apply(&w.xi).sub(&w.apply(&v.xi)),
        v.apply(&w.eta).sub(&w.apply(&v.eta)),
    )
}

/// Lie bracket of jet fields (derivations in `x`, `y`, `p`).
pub fn lie_bracket_jet(v: &JetField, w: &JetField) -> JetField {
    let apply = |f: &JetField, g: &TruncPoly| -> TruncPoly {
        f.xi.mul(&g.partial(Var::X))
            .add(&f.eta.mul(&g.partial(Var::Y)))
            .add(&f.phi1.mul(&g.partial(Var::P)))
    };
    JetField {
        xi: apply(v, &w.xi).sub(&apply(w, &v.xi)),
        eta: apply(v, &w.eta).sub(&apply(w, &v.eta)),
        phi1: apply(v, &w.phi1).sub(&apply(w, &v.phi1)),
    }
}

/// One solution of the isotropic coefficient system.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IsotropicSolution {
    pub a: GaussRational,
    pub beta1: GaussRational,
    pub alpha3: GaussRational,
}

impl IsotropicSolution {
    /// The plane field `((beta1 + alpha3 y + a) x) d/dx + ((beta1 + alpha3 y) y) d/dy`.
    pub fn field(&self) -> PlaneField {
        let y = TruncPoly::var(Var::Y);
        let phi = TruncPoly::constant(self.beta1.clone()).add(&y.scale(&self.alpha3));
        let xi = phi.add(&TruncPoly::constant(self.a.clone())).mul(&TruncPoly::var(Var::X));
        let eta = phi.mul(&y);
        PlaneField::new(xi, eta)
    }
}

/// A basis of infinitesimal symmetries together with the ansatz parameters
/// that produced it.
#[derive(Clone, Debug)]
pub struct SymmetryBasis {
    pub generators: Vec<PlaneField>,
    pub parameters: Vec<IsotropicSolution>,
}

impl SymmetryBasis {
    pub fn dimension(&self) -> usize {
        self.generators.len()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SymmetryError {
    /// The isotropic solver needs the `(f0, f1)` normal form.
    NormalFormRequired,
    /// The series truncation cannot certify the requested ansatz degrees.
    TruncationTooLow,
}

impl fmt::Display for SymmetryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryError::NormalFormRequired => {
                write!(f, "equation is not in shear normal form")
            }
            SymmetryError::TruncationTooLow => {
                write!(f, "series truncation too low to certify the ansatz")
            }
        }
    }
}

/// All isotropic symmetries of a shear normal form preserving the shear:
/// the span of the shear itself and the fields obtained from solutions
/// `(a, beta1, alpha3)` of the two coefficient recursions
///
/// ```text
/// (a + (n+3) beta1) c_n + (n+2) alpha3 c_{n-1} = 0
/// (2a + (n+4) beta1) b_n + (n+2) alpha3 b_{n-1} = 0
/// ```
///
/// for `f0 = sum b_n y^n`, `f1 = sum c_n y^n`.
pub fn solve_isotropic(ode: &OdeSpec) -> Result<SymmetryBasis, SymmetryError> {
    let (f0, f1) = ode.meta().ok_or(SymmetryError::NormalFormRequired)?;
    let upto = order_window(f0).max(order_window(f1));
    let b = f0.series_coeffs(Var::Y, upto).expect("normal form data");
    let c = f1.series_coeffs(Var::Y, upto).expect("normal form data");
    let mut rows: Vec<Vec<GaussRational>> = Vec::new();
    for n in 0..=upto as usize {
        let cn = &c[n];
        let cn1 = if n == 0 { GaussRational::zero() } else { c[n - 1].clone() };
        if !cn.is_zero() || !cn1.is_zero() {
            rows.push(alloc::vec![
                cn.clone(),
                &GaussRational::from_int(n as i64 + 3) * cn,
                &GaussRational::from_int(n as i64 + 2) * &cn1,
            ]);
        }
        let bn = &b[n];
        let bn1 = if n == 0 { GaussRational::zero() } else { b[n - 1].clone() };
        if !bn.is_zero() || !bn1.is_zero() {
            rows.push(alloc::vec![
                &GaussRational::from_int(2) * bn,
                &GaussRational::from_int(n as i64 + 4) * bn,
                &GaussRational::from_int(n as i64 + 2) * &bn1,
            ]);
        }
    }
    let solutions: Vec<IsotropicSolution> = if rows.is_empty() {
        // both series vanish: every parameter triple solves the system
        alloc::vec![
            IsotropicSolution {
                a: GaussRational::one(),
                beta1: GaussRational::zero(),
                alpha3: GaussRational::zero(),
            },
            IsotropicSolution {
                a: GaussRational::zero(),
                beta1: GaussRational::one(),
                alpha3: GaussRational::zero(),
            },
            IsotropicSolution {
                a: GaussRational::zero(),
                beta1: GaussRational::zero(),
                alpha3: GaussRational::one(),
            },
        ]
    } else {
        exact_nullspace(&QMatrix::from_rows(rows))
            .into_iter()
            .map(|v| IsotropicSolution {
                a: v[0].clone(),
                beta1: v[1].clone(),
                alpha3: v[2].clone(),
            })
            .collect()
    };
    let mut generators = alloc::vec![PlaneField::shear()];
    generators.extend(solutions.iter().map(IsotropicSolution::field));
    Ok(SymmetryBasis { generators: echelonize(&generators), parameters: solutions })
}

/// Orders of a series that carry information: up to the truncation cap, or
/// up to the polynomial degree plus one trailing zero row.
fn order_window(f: &TruncPoly) -> u32 {
    match f.trunc_order() {
        Some(t) => t,
        None => f.degree(Var::Y).unwrap_or(0) + 1,
    }
}

/// All point symmetries with polynomial components of degree at most
/// `deg_x` in `x` and `deg_y` in `y`, by exact elimination on the
/// determining equation.
pub fn solve_polynomial_ansatz(
    ode: &OdeSpec,
    deg_x: u32,
    deg_y: u32,
) -> Result<SymmetryBasis, SymmetryError> {
    assert!(deg_x >= 1 && deg_y >= 1, "ansatz degrees must be at least 1");
    if let Some(t) = ode.b().trunc_order() {
        // one y-derivative of B is consumed by the residual; require the
        // remaining window to see every unknown degree with headroom
        if t < deg_y + 4 {
            return Err(SymmetryError::TruncationTooLow);
        }
    }
    // Residuals of the unit monomial fields; the residual is linear in
    // (xi, eta), so these span everything.
    let mut unknown_fields = Vec::new();
    for i in 0..=deg_x {
        for j in 0..=deg_y {
            let mono = TruncPoly::monomial(GaussRational::one(), &[(Var::X, i), (Var::Y, j)]);
            unknown_fields.push(PlaneField::new(mono.clone(), TruncPoly::zero()));
            unknown_fields.push(PlaneField::new(TruncPoly::zero(), mono));
        }
    }
    let residuals: Vec<TruncPoly> =
        unknown_fields.iter().map(|v| determining_residual(ode, v)).collect();
    // Collect rows over all monomials appearing in any residual.
    let mut monos: Vec<Expo> = Vec::new();
    for r in &residuals {
        for (e, _) in r.terms() {
            if !monos.contains(e) {
                monos.push(*e);
            }
        }
    }
    monos.sort();
    let rows: Vec<Vec<GaussRational>> = monos
        .iter()
        .map(|e| residuals.iter().map(|r| r.coeff(e)).collect())
        .collect();
    let basis = exact_nullspace(&QMatrix::from_rows(rows));
    let generators: Vec<PlaneField> = basis
        .iter()
        .map(|coeffs| {
            let mut xi = TruncPoly::zero();
            let mut eta = TruncPoly::zero();
            for (field, c) in unknown_fields.iter().zip(coeffs) {
                xi = xi.add(&field.xi.scale(c));
                eta = eta.add(&field.eta.scale(c));
            }
            PlaneField::new(xi, eta)
        })
        .collect();
    Ok(SymmetryBasis { generators: echelonize(&generators), parameters: Vec::new() })
}

/// Deterministic canonical form for a generator list: reduced row echelon
/// form over the coefficient columns ordered by component and graded-lex
/// monomial.
pub fn echelonize(fields: &[PlaneField]) -> Vec<PlaneField> {
    let mut monos: Vec<(usize, Expo)> = Vec::new();
    for f in fields {
        for (comp, poly) in [(0usize, &f.xi), (1usize, &f.eta)] {
            for (e, _) in poly.terms() {
                if !monos.contains(&(comp, *e)) {
                    monos.push((comp, *e));
                }
            }
        }
    }
    monos.sort_by_key(|(comp, e)| {
        let total: u32 = e.iter().map(|&k| k as u32).sum();
        (*comp, total, *e)
    });
    if monos.is_empty() {
        return Vec::new();
    }
    let rows: Vec<Vec<GaussRational>> = fields
        .iter()
        .map(|f| {
            monos
                .iter()
                .map(|(comp, e)| if *comp == 0 { f.xi.coeff(e) } else { f.eta.coeff(e) })
                .collect()
        })
        .collect();
    let mut m = QMatrix::from_rows(rows);
    let pivots = m.rref();
    let mut out = Vec::new();
    for r in 0..pivots.len() {
        let mut xi = TruncPoly::zero();
        let mut eta = TruncPoly::zero();
        for (cidx, (comp, e)) in monos.iter().enumerate() {
            let c = m.get(r, cidx);
            if c.is_zero() {
                continue;
            }
            let mono = expo_to_poly(e).scale(c);
            if *comp == 0 {
                xi = xi.add(&mono);
            } else {
                eta = eta.add(&mono);
            }
        }
        let f = PlaneField::new(xi, eta);
        if !f.is_zero() {
            out.push(f);
        }
    }
    out
}

fn expo_to_poly(e: &Expo) -> TruncPoly {
    let exps: Vec<(Var, u32)> = Var::ALL
        .iter()
        .copied()
        .filter(|v| e[*v as usize] > 0)
        .map(|v| (v, e[v as usize] as u32))
        .collect();
    TruncPoly::monomial(GaussRational::one(), &exps)
}

/// Structure constants of a basis under the Lie bracket.
#[derive(Clone, Debug)]
pub struct StructureTable {
    /// `constants[i][j][k]` is the coefficient of generator `k` in
    /// `[gen_i, gen_j]`.
    pub constants: Vec<Vec<Vec<GaussRational>>>,
    /// False when some bracket leaves the span.
    pub closed: bool,
}

/// Expand every pairwise bracket in the given basis.
pub fn structure_constants(basis: &SymmetryBasis) -> StructureTable {
    let gens = &basis.generators;
    let n = gens.len();
    // column space of the generators
    let mut monos: Vec<(usize, Expo)> = Vec::new();
    let note = |f: &PlaneField, monos: &mut Vec<(usize, Expo)>| {
        for (comp, poly) in [(0usize, &f.xi), (1usize, &f.eta)] {
            for (e, _) in poly.terms() {
                if !monos.contains(&(comp, *e)) {
                    monos.push((comp, *e));
                }
            }
        }
    };
    let mut brackets = Vec::new();
    for i in 0..n {
        note(&gens[i], &mut monos);
        for j in 0..n {
            let br = lie_bracket(&gens[i], &gens[j]);
            note(&br, &mut monos);
            brackets.push(br);
        }
    }
    monos.sort_by_key(|(comp, e)| {
        let total: u32 = e.iter().map(|&k| k as u32).sum();
        (*comp, total, *e)
    });
    let coords = |f: &PlaneField| -> Vec<GaussRational> {
        monos
            .iter()
            .map(|(comp, e)| if *comp == 0 { f.xi.coeff(e) } else { f.eta.coeff(e) })
            .collect()
    };
    // solve [gen_i, gen_j] = sum_k c_k gen_k by exact elimination on the
    // augmented system
    let gen_cols: Vec<Vec<GaussRational>> = gens.iter().map(|g| coords(g)).collect();
    let mut constants = alloc::vec![alloc::vec![alloc::vec![GaussRational::zero(); n]; n]; n];
    let mut closed = true;
    for i in 0..n {
        for j in 0..n {
            let target = coords(&brackets[i * n + j]);
            match solve_in_span(&gen_cols, &target) {
                Some(coeffs) => {
                    for (k, c) in coeffs.into_iter().enumerate() {
                        constants[i][j][k] = c;
                    }
                }
                None => closed = false,
            }
        }
    }
    StructureTable { constants, closed }
}

/// Solve `sum_k x_k cols[k] = target` exactly; `None` if inconsistent.
fn solve_in_span(
    cols: &[Vec<GaussRational>],
    target: &[GaussRational],
) -> Option<Vec<GaussRational>> {
    let rows = target.len();
    let n = cols.len();
    let mut m = QMatrix::zero(rows, n + 1);
    for r in 0..rows {
        for (k, col) in cols.iter().enumerate() {
            m.set(r, k, col[r].clone());
        }
        m.set(r, n, target[r].clone());
    }
    let pivots = m.rref();
    if pivots.contains(&n) {
        return None; // inconsistent
    }
    let mut x = alloc::vec![GaussRational::zero(); n];
    for (prow, &pcol) in pivots.iter().enumerate() {
        x[pcol] = m.get(prow, n).clone();
    }
    Some(x)
}

/// Killing form `K(e_i, e_j) = sum_{m,l} c[i][m][l] c[j][l][m]` of a closed
/// structure table.
pub fn killing_form(table: &StructureTable) -> QMatrix {
    let n = table.constants.len();
    let mut k = QMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = GaussRational::zero();
            for m in 0..n {
                for l in 0..n {
                    acc = &acc + &(&table.constants[i][m][l] * &table.constants[j][l][m]);
                }
            }
            k.set(i, j, acc);
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::make_shear_ode;
    use crate::rng::SplitMix64;

    fn q(n: i64) -> GaussRational {
        GaussRational::from_int(n)
    }

    fn y() -> TruncPoly {
        TruncPoly::var(Var::Y)
    }

    fn x() -> TruncPoly {
        TruncPoly::var(Var::X)
    }

    #[test]
    fn prolongation_of_named_fields() {
        let shear = PlaneField::shear();
        let p = TruncPoly::var(Var::P);
        assert_eq!(prolong(&shear).phi1, p.pow(2).neg());
        let v = PlaneField::new(x(), y().neg());
        assert_eq!(prolong(&v).phi1, p.scale(&q(-2)));
        let zero = PlaneField::new(TruncPoly::zero(), TruncPoly::zero());
        assert!(prolong(&zero).phi1.is_zero());
    }

    #[test]
    fn shear_annihilates_every_normal_form() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..5 {
            let coeffs0: Vec<GaussRational> = (0..8).map(|_| rng.gauss_rational(4)).collect();
            let coeffs1: Vec<GaussRational> = (0..8).map(|_| rng.gauss_rational(4)).collect();
            let f0 = TruncPoly::series(Var::Y, &coeffs0, 7);
            let f1 = TruncPoly::series(Var::Y, &coeffs1, 7);
            let ode = make_shear_ode(&f0, &f1).unwrap();
            let r = determining_residual(&ode, &PlaneField::shear());
            assert!(r.is_zero(), "shear residual {:?}", r);
        }
    }

    #[test]
    fn quartic_admits_the_dilation() {
        let ode = OdeSpec::quartic();
        let v = PlaneField::new(x(), y().neg());
        assert!(determining_residual(&ode, &v).is_zero());
    }

    #[test]
    fn parabola_field_fails_on_quadric() {
        let ode = OdeSpec::quadric();
        let v = PlaneField::new(TruncPoly::zero(), x().pow(2));
        assert_eq!(determining_residual(&ode, &v), TruncPoly::from_int(-2));
    }

    #[test]
    fn isotropic_solver_on_monomial_families() {
        // f0 = y^k, f1 = 0: the span of the shear and (k+2) x d/dx - 2 y d/dy
        for k in 1..3u32 {
            let ode = make_shear_ode(&y().pow(k), &TruncPoly::zero()).unwrap();
            let basis = solve_isotropic(&ode).unwrap();
            assert_eq!(basis.dimension(), 2, "k = {}", k);
            let extra = PlaneField::new(x().scale(&q(k as i64 + 2)), y().scale(&q(-2)));
            for g in &basis.generators {
                assert!(determining_residual(&ode, g).is_zero());
            }
            // the extra generator lies in the span
            let span = echelonize(&basis.generators);
            let mut with_extra = basis.generators.clone();
            with_extra.push(extra);
            assert_eq!(span.len(), echelonize(&with_extra).len());
        }
    }

    #[test]
    fn isotropic_solver_on_mixed_family() {
        // f1 = y^l, f0 = C y^(2l+2): extra generator (l+2) x d/dx - y d/dy
        for c_val in [0i64, 1] {
            let l = 0u32;
            let f1 = y().pow(l);
            let f0 = y().pow(2 * l + 2).scale(&q(c_val));
            let ode = make_shear_ode(&f0, &f1).unwrap();
            let basis = solve_isotropic(&ode).unwrap();
            assert_eq!(basis.dimension(), 2, "C = {}", c_val);
            let extra = PlaneField::new(x().scale(&q(l as i64 + 2)), y().neg());
            assert!(determining_residual(&ode, &extra).is_zero());
        }
    }

    #[test]
    fn isotropic_solver_generic_input_gives_only_the_shear() {
        let f0 = y().add(&y().pow(3));
        let f1 = TruncPoly::from_int(1);
        let ode = make_shear_ode(&f0, &f1).unwrap();
        let basis = solve_isotropic(&ode).unwrap();
        assert_eq!(basis.dimension(), 1);
        assert_eq!(basis.generators[0], PlaneField::shear());
        assert!(basis.parameters.is_empty());
    }

    #[test]
    fn polynomial_ansatz_dimensions() {
        assert_eq!(
            solve_polynomial_ansatz(&OdeSpec::quartic(), 3, 3).unwrap().dimension(),
            3
        );
        assert_eq!(
            solve_polynomial_ansatz(&OdeSpec::quadric(), 2, 2).unwrap().dimension(),
            8
        );
        let vier1_k2 = make_shear_ode(&y().pow(2), &TruncPoly::zero()).unwrap();
        assert_eq!(solve_polynomial_ansatz(&vier1_k2, 3, 3).unwrap().dimension(), 2);
    }

    #[test]
    fn quadric_ansatz_matches_classical_basis() {
        // oracle: the classical eight generators of y'' = 0
        let one = TruncPoly::from_int(1);
        let zero = TruncPoly::zero;
        let classical = [
            PlaneField::new(one.clone(), zero()),
            PlaneField::new(zero(), one.clone()),
            PlaneField::new(x(), zero()),
            PlaneField::new(y(), zero()),
            PlaneField::new(zero(), x()),
            PlaneField::new(zero(), y()),
            PlaneField::new(x().pow(2), x().mul(&y())),
            PlaneField::new(x().mul(&y()), y().pow(2)),
        ];
        let ode = OdeSpec::quadric();
        for f in &classical {
            assert!(determining_residual(&ode, f).is_zero(), "classical generator fails");
        }
        let basis = solve_polynomial_ansatz(&ode, 2, 2).unwrap();
        let a = echelonize(&classical);
        let b = echelonize(&basis.generators);
        assert_eq!(a.len(), b.len());
        for (u, v) in a.iter().zip(&b) {
            assert_eq!(u, v);
        }
    }

    #[test]
    fn residual_is_linear_in_the_field() {
        let ode = make_shear_ode(&y().pow(2), &y()).unwrap();
        let v = PlaneField::new(x().mul(&y()), y().pow(2));
        let w = PlaneField::new(x().pow(2), x().mul(&y()));
        let sum = v.add(&w);
        let r = determining_residual(&ode, &sum);
        let expect = determining_residual(&ode, &v).add(&determining_residual(&ode, &w));
        assert_eq!(r, expect);
    }

    #[test]
    fn brackets() {
        let shear = PlaneField::shear();
        let dil = PlaneField::new(x(), y().neg());
        let br = lie_bracket(&shear, &dil);
        assert_eq!(br, PlaneField::new(y().scale(&q(2)), TruncPoly::zero()));
        let ddx = PlaneField::new(TruncPoly::from_int(1), TruncPoly::zero());
        assert!(lie_bracket(&ddx, &shear).is_zero());
    }

    #[test]
    fn symmetries_are_a_lie_algebra() {
        // if v and w are symmetries, so is [v, w]
        let ode = OdeSpec::quartic();
        let v = PlaneField::shear();
        let w = PlaneField::new(x(), y().neg());
        assert!(determining_residual(&ode, &lie_bracket(&v, &w)).is_zero());
    }

    #[test]
    fn quartic_structure_is_simple_three_dimensional() {
        let basis = solve_polynomial_ansatz(&OdeSpec::quartic(), 3, 3).unwrap();
        let table = structure_constants(&basis);
        assert!(table.closed);
        let k = killing_form(&table);
        assert!(!k.determinant().is_zero(), "Killing form must be nondegenerate");
    }

    #[test]
    fn dual_generators_close() {
        // d/dy, x d/dx + y d/dy, 2xy d/dx + (x^2 + y^2) d/dy
        let gens = alloc::vec![
            PlaneField::new(TruncPoly::zero(), TruncPoly::from_int(1)),
            PlaneField::new(x(), y()),
            PlaneField::new(
                x().mul(&y()).scale(&q(2)),
                x().pow(2).add(&y().pow(2)),
            ),
        ];
        let basis = SymmetryBasis { generators: gens, parameters: Vec::new() };
        let table = structure_constants(&basis);
        assert!(table.closed);
    }

    #[test]
    fn two_dimensional_family_algebra() {
        // {shear, L} with L = (k+2) x d/dx - 2 y d/dy closes with
        // [L, shear] = lambda shear
        let k = 1i64;
        let l_field = PlaneField::new(x().scale(&q(k + 2)), y().scale(&q(-2)));
        let basis = SymmetryBasis {
            generators: alloc::vec![PlaneField::shear(), l_field.clone()],
            parameters: Vec::new(),
        };
        let table = structure_constants(&basis);
        assert!(table.closed);
        let br = lie_bracket(&l_field, &PlaneField::shear());
        // bracket proportional to the shear, no d/dx part
        assert!(br.eta.is_zero());
        assert_eq!(br, PlaneField::shear().scale(&br.xi.coeff(&{
            let mut e = [0u16; crate::poly::NVARS];
            e[Var::Y as usize] = 1;
            e
        })));
    }

    #[test]
    fn truncation_floor_is_enforced() {
        let f0 = TruncPoly::series(Var::Y, &[GaussRational::one()], 4);
        let ode = make_shear_ode(&f0, &TruncPoly::zero()).unwrap();
        assert_eq!(
            solve_polynomial_ansatz(&ode, 3, 3).unwrap_err(),
            SymmetryError::TruncationTooLow
        );
    }
}
