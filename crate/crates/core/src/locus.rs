//! Fixed-point analysis of the cubic model's isotropy fields and the orbit
//! of the reference point under the shear-preserving affine maps: the locus
//! of non-linearizable isotropy is exactly the hypersurface `y = x p`.

use alloc::vec::Vec;
use core::fmt;

use crate::ode::{pushforward, OdeError, OdeSpec, PointMap};
use crate::poly::{TruncPoly, Var};
use crate::scalar::GaussRational;
use crate::symmetry::{JetField, PlaneField};

/// An isotropy field of `y'' = (y - x y')^3`:
/// `(alpha x + beta y) d/dx + (delta x - alpha y) d/dy`
/// with jet component `delta - 2 alpha p - beta p^2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuarticIsotropyField {
    pub alpha: GaussRational,
    pub beta: GaussRational,
    pub delta: GaussRational,
}

impl QuarticIsotropyField {
    pub fn new(alpha: GaussRational, beta: GaussRational, delta: GaussRational) -> Self {
        QuarticIsotropyField { alpha, beta, delta }
    }

    pub fn plane_part(&self) -> PlaneField {
        let x = TruncPoly::var(Var::X);
        let y = TruncPoly::var(Var::Y);
        PlaneField::new(
            x.scale(&self.alpha).add(&y.scale(&self.beta)),
            x.scale(&self.delta).sub(&y.scale(&self.alpha)),
        )
    }

    /// The stated jet extension; agrees with `prolong` of the plane part.
    pub fn jet_part(&self) -> JetField {
        let p = TruncPoly::var(Var::P);
        let plane = self.plane_part();
        let phi1 = TruncPoly::constant(self.delta.clone())
            .sub(&p.scale(&(&GaussRational::from_int(2) * &self.alpha)))
            .sub(&p.pow(2).scale(&self.beta));
        JetField { xi: plane.xi, eta: plane.eta, phi1 }
    }

    /// `alpha^2 + beta delta`.
    pub fn discriminant(&self) -> GaussRational {
        &(&self.alpha * &self.alpha) + &(&self.beta * &self.delta)
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero() && self.delta.is_zero()
    }
}

/// Jet-space fixed points of a nonzero isotropy field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FixedPointSet {
    /// Nonzero discriminant: fixed points only over `x = y = 0`.
    NonDegenerate,
    /// Vanishing discriminant with `beta != 0`: the line
    /// `alpha x + beta y = 0` with slope `p = -alpha/beta`, contained in
    /// the hypersurface `y = x p`.
    DegenerateBeta {
        /// Coefficients `(alpha, beta)` of the fixed line.
        line: (GaussRational, GaussRational),
        slope: GaussRational,
    },
    /// Vanishing discriminant with `beta = 0` forces `alpha = 0`; the
    /// remaining field `delta x d/dy` has no off-origin fixed jets.
    DegenerateZero,
}

impl fmt::Display for FixedPointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedPointSet::NonDegenerate => write!(f, "x = y = 0"),
            FixedPointSet::DegenerateBeta { line, slope } => write!(
                f,
                "({})x + ({})y = 0, p = {}",
                line.0, line.1, slope
            ),
            FixedPointSet::DegenerateZero => write!(f, "empty off the origin"),
        }
    }
}

/// Case analysis of the fixed-point set by the discriminant.
pub fn fixed_point_set(v: &QuarticIsotropyField) -> FixedPointSet {
    assert!(!v.is_zero(), "fixed points of the zero field are everything");
    if !v.discriminant().is_zero() {
        return FixedPointSet::NonDegenerate;
    }
    if !v.beta.is_zero() {
        let slope = -&(&v.alpha / &v.beta);
        return FixedPointSet::DegenerateBeta {
            line: (v.alpha.clone(), v.beta.clone()),
            slope,
        };
    }
    FixedPointSet::DegenerateZero
}

/// For a degenerate-line fixed set, verify symbolically that the locus
/// satisfies `y - x p = 0` identically (parametrizing the line by `x`).
pub fn degenerate_locus_on_gamma(set: &FixedPointSet) -> bool {
    match set {
        FixedPointSet::DegenerateBeta { line: (alpha, beta), slope } => {
            // y = -(alpha/beta) x along the line
            let x = TruncPoly::var(Var::X);
            let y_on_line = x.scale(&-&(alpha / beta));
            y_on_line.sub(&x.scale(slope)).is_zero()
        }
        _ => false,
    }
}

/// Report for one shear-preserving affine map in the orbit sweep.
#[derive(Clone, Debug)]
pub struct OrbitPoint {
    /// The determinant factor `(ad - bc)^2` appearing in the transformed
    /// equation.
    pub factor: GaussRational,
    /// Image of the origin jet, landing at `(a, b, b/a)`.
    pub image: (GaussRational, GaussRational, GaussRational),
    /// `y - x p` at the image; zero places it on the hypersurface.
    pub on_gamma: bool,
}

/// For each `(a, b, c, d)` with `a != 0` and `ad - bc != 0`, push the cubic
/// model through `(x, y) = (a(x~+1) + c y~, b(x~+1) + d y~)` and confirm it
/// becomes exactly `(ad - bc)^2 (y - (x+1) y')^3` while the origin jet maps
/// to `(a, b, b/a)` on `y = x p`.
pub fn gamma_orbit_check(
    params: &[(GaussRational, GaussRational, GaussRational, GaussRational)],
) -> Result<Vec<OrbitPoint>, OdeError> {
    let mut out = Vec::new();
    for (a, b, c, d) in params {
        if a.is_zero() {
            return Err(OdeError::InvalidMap("orbit points need a != 0"));
        }
        let map = PointMap::affine(a.clone(), b.clone(), c.clone(), d.clone(), a.clone(), b.clone())?;
        let moved = pushforward(&OdeSpec::quartic(), &map, 8)?;
        let det = &(a * d) - &(b * c);
        let factor = &det * &det;
        let shifted = TruncPoly::var(Var::Y).sub(
            &TruncPoly::var(Var::X)
                .add(&TruncPoly::from_int(1))
                .mul(&TruncPoly::var(Var::P)),
        );
        let expected = shifted.pow(3).scale(&factor);
        if moved.b() != &expected {
            return Err(OdeError::DegreeOverflow);
        }
        let (ix, iy, ip) = map.jet_image(
            &GaussRational::zero(),
            &GaussRational::zero(),
            &GaussRational::zero(),
        )?;
        let on_gamma = (&iy - &(&ix * &ip)).is_zero();
        out.push(OrbitPoint { factor, image: (ix, iy, ip), on_gamma });
    }
    Ok(out)
}

/// The shifted equations `y'' = (y - (x - c) y')^3` admit the shear; used
/// as an exact cross-check of the orbit computation.
pub fn shifted_quartic(c: &GaussRational) -> OdeSpec {
    let u = TruncPoly::var(Var::Y).sub(
        &TruncPoly::var(Var::X)
            .sub(&TruncPoly::constant(c.clone()))
            .mul(&TruncPoly::var(Var::P)),
    );
    OdeSpec::new(u.pow(3)).expect("cubic degrees")
}
