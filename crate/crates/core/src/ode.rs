//! The ODE data model: second-order equations `y'' = B(x, y, y')` cubic in
//! `x` and `y'`, the shear-invariant normal form, and exact pushforward
//! along the admissible point transformations.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::poly::{PolyError, TruncPoly, Var, NVARS};
use crate::ratfun::RatFun;
use crate::scalar::GaussRational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OdeError {
    /// `B` (or a transformed `B`) exceeds degree 3 in `x` or `y'`.
    DegreeOverflow,
    /// `B` involves variables outside `(x, y, p)`.
    InvalidVariables,
    /// Every candidate interpolation grid hit a non-invertible denominator.
    SingularSample,
    /// A normal-form constructor was fed non-univariate coefficient data.
    NotUnivariate,
    /// Degenerate transformation parameters.
    InvalidMap(&'static str),
    Poly(PolyError),
}

impl From<PolyError> for OdeError {
    fn from(e: PolyError) -> Self {
        OdeError::Poly(e)
    }
}

impl fmt::Display for OdeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OdeError::DegreeOverflow => write!(f, "right-hand side exceeds degree 3 in x or y'"),
            OdeError::InvalidVariables => write!(f, "right-hand side must depend on (x, y, p) only"),
            OdeError::SingularSample => write!(f, "all interpolation grids hit singular samples"),
            OdeError::NotUnivariate => write!(f, "coefficient functions must be univariate in y"),
            OdeError::InvalidMap(m) => write!(f, "invalid point map: {}", m),
            OdeError::Poly(e) => write!(f, "{}", e),
        }
    }
}

/// A second-order ODE `y'' = B(x, y, p)` with `p = y'`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OdeSpec {
    b: TruncPoly,
    meta: Option<(TruncPoly, TruncPoly)>,
}

impl OdeSpec {
    /// Wrap a right-hand side, enforcing the cubic degree bounds. The
    /// shear normal form `(f0, f1)` is reconstructed when `B` carries one.
    pub fn new(b: TruncPoly) -> Result<Self, OdeError> {
        for v in b.support() {
            if !matches!(v, Var::X | Var::Y | Var::P) {
                return Err(OdeError::InvalidVariables);
            }
        }
        if b.degree(Var::X).unwrap_or(0) > 3 || b.degree(Var::P).unwrap_or(0) > 3 {
            return Err(OdeError::DegreeOverflow);
        }
        let meta = reconstruct_shear_meta(&b);
        Ok(OdeSpec { b, meta })
    }

    pub fn b(&self) -> &TruncPoly {
        &self.b
    }

    /// The `(f0, f1)` pair when the equation is in shear normal form.
    pub fn meta(&self) -> Option<(&TruncPoly, &TruncPoly)> {
        self.meta.as_ref().map(|(f0, f1)| (f0, f1))
    }

    /// The flat model `y'' = 0`.
    pub fn quadric() -> Self {
        make_shear_ode(&TruncPoly::zero(), &TruncPoly::zero()).unwrap()
    }

    /// `y'' = (y - x y')^3`.
    pub fn quartic() -> Self {
        make_shear_ode(&TruncPoly::from_int(1), &TruncPoly::zero()).unwrap()
    }

    /// `y'' - B` evaluated on a numeric 2-jet.
    pub fn residual_at(&self, jet: &Jet) -> f64 {
        let mut assign = [Complex64::new(0.0, 0.0); NVARS];
        assign[Var::X as usize] = jet.x;
        assign[Var::Y as usize] = jet.y;
        assign[Var::P as usize] = jet.dy;
        (jet.d2y - self.b.eval_complex(&assign)).norm()
    }
}

/// A numeric 2-jet `(x, y, y', y'')`.
#[derive(Copy, Clone, Debug)]
pub struct Jet {
    pub x: Complex64,
    pub y: Complex64,
    pub dy: Complex64,
    pub d2y: Complex64,
}

impl Jet {
    pub fn real(x: f64, y: f64, dy: f64, d2y: f64) -> Self {
        Jet {
            x: Complex64::new(x, 0.0),
            y: Complex64::new(y, 0.0),
            dy: Complex64::new(dy, 0.0),
            d2y: Complex64::new(d2y, 0.0),
        }
    }
}

/// `y'' = f0(y) (y - x y')^3 + f1(y) y' (y - x y')^2`.
pub fn make_shear_ode(f0: &TruncPoly, f1: &TruncPoly) -> Result<OdeSpec, OdeError> {
    if !f0.is_univariate_in(Var::Y) || !f1.is_univariate_in(Var::Y) {
        return Err(OdeError::NotUnivariate);
    }
    let u = TruncPoly::var(Var::Y).sub(&TruncPoly::var(Var::X).mul(&TruncPoly::var(Var::P)));
    let b = f0
        .mul(&u.pow(3))
        .add(&f1.mul(&TruncPoly::var(Var::P)).mul(&u.pow(2)));
    let mut ode = OdeSpec::new(b)?;
    ode.meta = Some((f0.clone(), f1.clone()));
    Ok(ode)
}

/// Read `(f0, f1)` off the `x^3 p^3` and `x^2 p^3` coefficients and accept
/// them only if they reproduce `B` exactly.
fn reconstruct_shear_meta(b: &TruncPoly) -> Option<(TruncPoly, TruncPoly)> {
    let f0 = b.coefficient_of(&[(Var::X, 3), (Var::P, 3)]).neg();
    let f1 = b.coefficient_of(&[(Var::X, 2), (Var::P, 3)]);
    if !f0.is_univariate_in(Var::Y) || !f1.is_univariate_in(Var::Y) {
        return None;
    }
    let u = TruncPoly::var(Var::Y).sub(&TruncPoly::var(Var::X).mul(&TruncPoly::var(Var::P)));
    let rebuilt = f0
        .mul(&u.pow(3))
        .add(&f1.mul(&TruncPoly::var(Var::P)).mul(&u.pow(2)));
    if rebuilt.sub(b).is_zero() {
        Some((f0, f1))
    } else {
        None
    }
}

/// An admissible point transformation, expressing the source coordinates in
/// terms of the target ones.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PointMap {
    /// `(x, y) = (a x~ + c y~ + e, b x~ + d y~ + f)`.
    Affine {
        a: GaussRational,
        b: GaussRational,
        c: GaussRational,
        d: GaussRational,
        e: GaussRational,
        f: GaussRational,
    },
    /// `(x, y) = (c1 x~ / (1 - c y~), c2 y~ / (1 - c y~))`.
    Projective { c: GaussRational, c1: GaussRational, c2: GaussRational },
}

impl PointMap {
    pub fn affine(
        a: GaussRational,
        b: GaussRational,
        c: GaussRational,
        d: GaussRational,
        e: GaussRational,
        f: GaussRational,
    ) -> Result<Self, OdeError> {
        if (&(&a * &d) - &(&b * &c)).is_zero() {
            return Err(OdeError::InvalidMap("affine map must satisfy ad - bc != 0"));
        }
        Ok(PointMap::Affine { a, b, c, d, e, f })
    }

    pub fn linear(
        a: GaussRational,
        b: GaussRational,
        c: GaussRational,
        d: GaussRational,
    ) -> Result<Self, OdeError> {
        PointMap::affine(a, b, c, d, GaussRational::zero(), GaussRational::zero())
    }

    pub fn projective(
        c: GaussRational,
        c1: GaussRational,
        c2: GaussRational,
    ) -> Result<Self, OdeError> {
        if c1.is_zero() || c2.is_zero() {
            return Err(OdeError::InvalidMap("projective map must satisfy c1 c2 != 0"));
        }
        Ok(PointMap::Projective { c, c1, c2 })
    }

    /// Diagonal scaling `(x, y) = (l x~, m y~)` as a projective map.
    pub fn scaling(l: GaussRational, m: GaussRational) -> Result<Self, OdeError> {
        PointMap::projective(GaussRational::zero(), l, m)
    }

    pub fn identity() -> Self {
        PointMap::Affine {
            a: GaussRational::one(),
            b: GaussRational::zero(),
            c: GaussRational::zero(),
            d: GaussRational::one(),
            e: GaussRational::zero(),
            f: GaussRational::zero(),
        }
    }

    /// Composition `self . inner` (apply `inner` first), when the result
    /// stays inside the same two-parameter families.
    pub fn compose(&self, inner: &PointMap) -> Option<PointMap> {
        match (self, inner) {
            (
                PointMap::Affine { a, b, c, d, e, f },
                PointMap::Affine { a: a2, b: b2, c: c2, d: d2, e: e2, f: f2 },
            ) => Some(PointMap::Affine {
                a: &(a * a2) + &(c * b2),
                b: &(b * a2) + &(d * b2),
                c: &(a * c2) + &(c * d2),
                d: &(b * c2) + &(d * d2),
                e: &(&(a * e2) + &(c * f2)) + e,
                f: &(&(b * e2) + &(d * f2)) + f,
            }),
            (
                PointMap::Projective { c, c1, c2 },
                PointMap::Projective { c: g, c1: g1, c2: g2 },
            ) => Some(PointMap::Projective {
                c: &(c * g2) + g,
                c1: c1 * g1,
                c2: c2 * g2,
            }),
            _ => None,
        }
    }

    /// Source components `(T1, T2)` as rational functions of the target
    /// plane coordinates `(x, y)`.
    pub(crate) fn components(&self) -> (RatFun, RatFun) {
        let x = TruncPoly::var(Var::X);
        let y = TruncPoly::var(Var::Y);
        match self {
            PointMap::Affine { a, b, c, d, e, f } => {
                let t1 = x.scale(a).add(&y.scale(c)).add(&TruncPoly::constant(e.clone()));
                let t2 = x.scale(b).add(&y.scale(d)).add(&TruncPoly::constant(f.clone()));
                (RatFun::from_poly(t1), RatFun::from_poly(t2))
            }
            PointMap::Projective { c, c1, c2 } => {
                let den = TruncPoly::from_int(1).sub(&y.scale(c));
                (
                    RatFun::new(x.scale(c1), den.clone()),
                    RatFun::new(y.scale(c2), den),
                )
            }
        }
    }

    /// Exact image of a 1-jet `(x~, y~, p~) -> (x, y, p)`.
    pub fn jet_image(
        &self,
        xt: &GaussRational,
        yt: &GaussRational,
        pt: &GaussRational,
    ) -> Result<(GaussRational, GaussRational, GaussRational), OdeError> {
        let (t1, t2) = self.components();
        let slope = transformed_slope(&t1, &t2);
        let bind = [
            (Var::X, TruncPoly::constant(xt.clone())),
            (Var::Y, TruncPoly::constant(yt.clone())),
            (Var::P, TruncPoly::constant(pt.clone())),
        ];
        let eval_scalar = |r: &RatFun| -> Result<GaussRational, OdeError> {
            let s = r.substitute(&bind)?;
            let num = s.num.coeff(&[0; NVARS]);
            let den = s.den.coeff(&[0; NVARS]);
            den.inv()
                .map(|inv| &num * &inv)
                .ok_or(OdeError::SingularSample)
        };
        Ok((eval_scalar(&t1)?, eval_scalar(&t2)?, eval_scalar(&slope)?))
    }
}

/// `p = dT2/dx~ / dT1/dx~` along a curve with slope `p~`.
fn transformed_slope(t1: &RatFun, t2: &RatFun) -> RatFun {
    let p = RatFun::var(Var::P);
    let dtot = t1.partial(Var::X).add(&t1.partial(Var::Y).mul(&p));
    let ntot = t2.partial(Var::X).add(&t2.partial(Var::Y).mul(&p));
    ntot.div(&dtot)
}

const GRID_OFFSETS: [i64; 5] = [0, 1, 2, 5, 9];

/// The ODE satisfied by the transformed solution curves.
///
/// The transformed right-hand side is a polynomial of degree at most 3 in
/// the new `x` and `p`; it is computed exactly by evaluating the transformed
/// jet relation on a 4x4 grid of rational sample points (series arithmetic
/// in `y` absorbs the projective denominators) and Lagrange-interpolating.
/// Off-grid validation points detect maps that do not preserve the degree
/// bounds.
pub fn pushforward(ode: &OdeSpec, map: &PointMap, n: u32) -> Result<OdeSpec, OdeError> {
    let (t1, t2) = map.components();
    let p = RatFun::var(Var::P);
    let dtot = t1.partial(Var::X).add(&t1.partial(Var::Y).mul(&p));
    let ntot = t2.partial(Var::X).add(&t2.partial(Var::Y).mul(&p));
    let slope = ntot.div(&dtot);
    let slope_x = slope.partial(Var::X);
    let slope_y = slope.partial(Var::Y);
    let slope_p = slope.partial(Var::P);

    let mut last_err = OdeError::SingularSample;
    for offset in GRID_OFFSETS {
        let nodes: Vec<GaussRational> =
            (0..4).map(|i| GaussRational::from_int(offset + i)).collect();
        let sample = |xv: &GaussRational, pv: &GaussRational| -> Result<TruncPoly, OdeError> {
            grid_sample(ode, &t1, &t2, &slope, &slope_x, &slope_y, &slope_p, &dtot, xv, pv, n)
        };
        let mut values: Vec<Vec<TruncPoly>> = Vec::with_capacity(4);
        let mut ok = true;
        'grid: for xv in &nodes {
            let mut row = Vec::with_capacity(4);
            for pv in &nodes {
                match sample(xv, pv) {
                    Ok(v) => row.push(v),
                    Err(e) => {
                        last_err = e;
                        ok = false;
                        break 'grid;
                    }
                }
            }
            values.push(row);
        }
        if !ok {
            continue;
        }
        let interpolated = lagrange_2d(&nodes, &values);

        // Validate at off-grid points: a mismatch means the transformed
        // right-hand side is not a (3,3)-polynomial, i.e. the map is not
        // admissible for this equation.
        let extra = [
            (offset + 4, offset + 4),
            (offset + 4, offset),
            (offset, offset + 4),
        ];
        for (xe, pe) in extra {
            let xv = GaussRational::from_int(xe);
            let pv = GaussRational::from_int(pe);
            let direct = match sample(&xv, &pv) {
                Ok(v) => v,
                Err(e) => {
                    last_err = e;
                    ok = false;
                    break;
                }
            };
            let through = interpolated
                .substitute(&[(Var::X, TruncPoly::constant(xv)), (Var::P, TruncPoly::constant(pv))])?;
            if !through.sub(&direct).is_zero() {
                return Err(OdeError::DegreeOverflow);
            }
        }
        if !ok {
            continue;
        }

        return OdeSpec::new(interpolated.truncated(n));
    }
    Err(last_err)
}

#[allow(clippy::too_many_arguments)]
fn grid_sample(
    ode: &OdeSpec,
    t1: &RatFun,
    t2: &RatFun,
    slope: &RatFun,
    slope_x: &RatFun,
    slope_y: &RatFun,
    slope_p: &RatFun,
    dtot: &RatFun,
    xv: &GaussRational,
    pv: &GaussRational,
    n: u32,
) -> Result<TruncPoly, OdeError> {
    let bind = [
        (Var::X, TruncPoly::constant(xv.clone())),
        (Var::P, TruncPoly::constant(pv.clone())),
    ];
    // Constant denominators (affine maps) divide out exactly with no series
    // cap; projective units are inverted as series modulo y^(n+1).
    let collapse = |r: &RatFun| -> Result<TruncPoly, OdeError> {
        let s = r.substitute(&bind)?;
        if s.den.degree(Var::Y).unwrap_or(0) == 0 {
            let c = s.den.coeff(&[0; NVARS]);
            let inv = c.inv().ok_or(OdeError::SingularSample)?;
            return Ok(s.num.scale(&inv));
        }
        if s.den.clone().with_series(Var::Y, n).coeff(&[0; NVARS]).is_zero() {
            return Err(OdeError::SingularSample);
        }
        Ok(s.to_series(Var::Y, n)?)
    };
    let t1v = collapse(t1)?;
    let t2v = collapse(t2)?;
    let slope_v = collapse(slope)?;
    let sx = collapse(slope_x)?;
    let sy = collapse(slope_y)?;
    let sp = collapse(slope_p)?;
    let dv = collapse(dtot)?;
    let sp0 = sp.coeff(&[0; NVARS]);
    if sp0.is_zero() {
        return Err(OdeError::SingularSample);
    }
    let b_at = ode
        .b
        .substitute(&[(Var::X, t1v), (Var::Y, t2v), (Var::P, slope_v)])?;
    // y'' transforms through one more total derivative:
    //   q~ = (B . dx/dx~ - dP/dx~|_fixed-jet) / dP/dp~.
    let numerator = b_at.mul(&dv).sub(&sx).sub(&sy.scale(pv));
    if sp.degree(Var::Y).unwrap_or(0) == 0 && sp.trunc_order().is_none() {
        Ok(numerator.scale(&sp0.inv().unwrap()))
    } else {
        Ok(numerator.mul(&sp.invert(n)?))
    }
}

/// Tensor-product Lagrange interpolation on a 4x4 grid; `values[i][j]`
/// corresponds to `x = nodes[i], p = nodes[j]`.
fn lagrange_2d(nodes: &[GaussRational], values: &[Vec<TruncPoly>]) -> TruncPoly {
    let basis_x = lagrange_basis(nodes, Var::X);
    let basis_p = lagrange_basis(nodes, Var::P);
    let mut acc = TruncPoly::zero();
    for (i, row) in values.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            acc = acc.add(&v.mul(&basis_x[i]).mul(&basis_p[j]));
        }
    }
    acc
}

fn lagrange_basis(nodes: &[GaussRational], var: Var) -> Vec<TruncPoly> {
    let x = TruncPoly::var(var);
    (0..nodes.len())
        .map(|i| {
            let mut num = TruncPoly::from_int(1);
            let mut den = GaussRational::one();
            for (j, nj) in nodes.iter().enumerate() {
                if j == i {
                    continue;
                }
                num = num.mul(&x.sub(&TruncPoly::constant(nj.clone())));
                den = &den * &(&nodes[i] - nj);
            }
            num.scale(&den.inv().expect("distinct nodes"))
        })
        .collect()
}

/// Closed form of the diagonal affine action on normal-form data:
/// `(x, y) -> (l X, m Y)` sends `(f0, f1)` to
/// `(l^2 m^2 f0(m Y), l m^2 f1(m Y))`.
pub fn scaling_action(
    f0: &TruncPoly,
    f1: &TruncPoly,
    l: &GaussRational,
    m: &GaussRational,
) -> Result<(TruncPoly, TruncPoly), OdeError> {
    if l.is_zero() || m.is_zero() {
        return Err(OdeError::InvalidMap("scaling requires l m != 0"));
    }
    let my = TruncPoly::var(Var::Y).scale(m);
    let f0s = f0.substitute(&[(Var::Y, my.clone())])?;
    let f1s = f1.substitute(&[(Var::Y, my)])?;
    let w0 = &(l * l) * &(m * m);
    let w1 = &(l * m) * m;
    Ok((f0s.scale(&w0), f1s.scale(&w1)))
}
