//! The matrix-group model: the chart identifying the deleted-section jet
//! bundle with SL(2,C), the distinguished direction fields, one-parameter
//! group actions, and their bracket and weight identities.

use core::fmt;

use crate::ode::OdeSpec;
use crate::poly::{TruncPoly, Var};
use crate::ratfun::RatFun;
use crate::scalar::GaussRational;

/// A polynomial vector field on the ambient 4-space with coordinates
/// `(alpha, beta, gamma, delta)`; the unit-determinant locus is treated as
/// a checked invariant rather than an embedded manifold.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sl2Field {
    /// Components on `(alpha, beta, gamma, delta)`, in that order.
    pub components: [TruncPoly; 4],
}

pub const MATRIX_COORDS: [Var; 4] = [Var::Alpha, Var::Beta, Var::Gamma, Var::Delta];

impl Sl2Field {
    pub fn zero() -> Self {
        Sl2Field {
            components: [
                TruncPoly::zero(),
                TruncPoly::zero(),
                TruncPoly::zero(),
                TruncPoly::zero(),
            ],
        }
    }

    /// Apply as a derivation to a function of the matrix coordinates.
    pub fn apply(&self, f: &TruncPoly) -> TruncPoly {
        let mut acc = TruncPoly::zero();
        for (comp, var) in self.components.iter().zip(MATRIX_COORDS) {
            acc = acc.add(&comp.mul(&f.partial(var)));
        }
        acc
    }

    pub fn add(&self, rhs: &Sl2Field) -> Sl2Field {
        Sl2Field {
            components: [
                self.components[0].add(&rhs.components[0]),
                self.components[1].add(&rhs.components[1]),
                self.components[2].add(&rhs.components[2]),
                self.components[3].add(&rhs.components[3]),
            ],
        }
    }

    pub fn scale(&self, c: &GaussRational) -> Sl2Field {
        Sl2Field {
            components: [
                self.components[0].scale(c),
                self.components[1].scale(c),
                self.components[2].scale(c),
                self.components[3].scale(c),
            ],
        }
    }

    /// Multiply by a scalar function of the matrix coordinates.
    pub fn scale_fn(&self, f: &TruncPoly) -> Sl2Field {
        Sl2Field {
            components: [
                self.components[0].mul(f),
                self.components[1].mul(f),
                self.components[2].mul(f),
                self.components[3].mul(f),
            ],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(TruncPoly::is_zero)
    }

    /// The field applied to `alpha delta - beta gamma`; zero certifies
    /// tangency to the unit-determinant locus.
    pub fn determinant_derivative(&self) -> TruncPoly {
        self.apply(&det_function())
    }
}

impl fmt::Display for Sl2Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) d/dalpha + ({}) d/dbeta + ({}) d/dgamma + ({}) d/ddelta",
            self.components[0], self.components[1], self.components[2], self.components[3]
        )
    }
}

/// `alpha delta - beta gamma`.
pub fn det_function() -> TruncPoly {
    TruncPoly::var(Var::Alpha)
        .mul(&TruncPoly::var(Var::Delta))
        .sub(&TruncPoly::var(Var::Beta).mul(&TruncPoly::var(Var::Gamma)))
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// Generator of a one-parameter multiplication action `M -> exp(tG) M`
/// (left) or `M -> M exp(tG)` (right).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupActionGen {
    pub side: Side,
    pub generator: [[GaussRational; 2]; 2],
}

/// The linear field of a multiplication action, read entrywise off `G M`
/// resp. `M G`.
pub fn action_generator(g: &GroupActionGen) -> Sl2Field {
    let al = TruncPoly::var(Var::Alpha);
    let be = TruncPoly::var(Var::Beta);
    let ga = TruncPoly::var(Var::Gamma);
    let de = TruncPoly::var(Var::Delta);
    let m = &g.generator;
    let comp = |r: &TruncPoly, s: &TruncPoly, c0: &GaussRational, c1: &GaussRational| {
        r.scale(c0).add(&s.scale(c1))
    };
    match g.side {
        // (G M)_{11} = g11 a + g12 c, etc., with M = ((a, b), (c, d))
        Side::Left => Sl2Field {
            components: [
                comp(&al, &ga, &m[0][0], &m[0][1]),
                comp(&be, &de, &m[0][0], &m[0][1]),
                comp(&al, &ga, &m[1][0], &m[1][1]),
                comp(&be, &de, &m[1][0], &m[1][1]),
            ],
        },
        // (M G)_{11} = a g11 + b g21, etc.
        Side::Right => Sl2Field {
            components: [
                comp(&al, &be, &m[0][0], &m[1][0]),
                comp(&al, &be, &m[0][1], &m[1][1]),
                comp(&ga, &de, &m[0][0], &m[1][0]),
                comp(&ga, &de, &m[0][1], &m[1][1]),
            ],
        },
    }
}

/// `Z1 = beta d/dalpha + delta d/dgamma`: the vertical direction field,
/// generated by right multiplication with a lower-triangular unipotent.
pub fn z1() -> Sl2Field {
    action_generator(&GroupActionGen {
        side: Side::Right,
        generator: [
            [GaussRational::zero(), GaussRational::zero()],
            [GaussRational::one(), GaussRational::zero()],
        ],
    })
}

/// `Z_Q = alpha d/dbeta + gamma d/ddelta`: the flat-model horizontal field.
pub fn z_q() -> Sl2Field {
    action_generator(&GroupActionGen {
        side: Side::Right,
        generator: [
            [GaussRational::zero(), GaussRational::one()],
            [GaussRational::zero(), GaussRational::zero()],
        ],
    })
}

/// `theta = gamma d/dalpha + delta d/dbeta`: the shear, as left
/// multiplication by an upper-triangular unipotent.
pub fn theta() -> Sl2Field {
    action_generator(&GroupActionGen {
        side: Side::Left,
        generator: [
            [GaussRational::zero(), GaussRational::one()],
            [GaussRational::zero(), GaussRational::zero()],
        ],
    })
}

/// Weight field of the monomial family:
/// `2 alpha d/dalpha + (k+2) beta d/dbeta - (k+2) gamma d/dgamma - 2 delta d/ddelta`.
pub fn weight_field_a(k: u32) -> Sl2Field {
    diagonal_field(2, k as i64 + 2)
}

/// Weight field of the coupled family:
/// `alpha d/dalpha + (l+2) beta d/dbeta - (l+2) gamma d/dgamma - delta d/ddelta`.
pub fn weight_field_b(l: u32) -> Sl2Field {
    diagonal_field(1, l as i64 + 2)
}

fn diagonal_field(u: i64, v: i64) -> Sl2Field {
    Sl2Field {
        components: [
            TruncPoly::var(Var::Alpha).scale(&GaussRational::from_int(u)),
            TruncPoly::var(Var::Beta).scale(&GaussRational::from_int(v)),
            TruncPoly::var(Var::Gamma).scale(&GaussRational::from_int(-v)),
            TruncPoly::var(Var::Delta).scale(&GaussRational::from_int(-u)),
        ],
    }
}

/// Exact commutator of ambient fields.
pub fn sl2_bracket(v: &Sl2Field, w: &Sl2Field) -> Sl2Field {
    let mut components = [
        TruncPoly::zero(),
        TruncPoly::zero(),
        TruncPoly::zero(),
        TruncPoly::zero(),
    ];
    for i in 0..4 {
        components[i] = v.apply(&w.components[i]).sub(&w.apply(&v.components[i]));
    }
    Sl2Field { components }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Sl2Error {
    /// The chart is undefined on the section `y = x p`.
    OnSection,
    /// The candidate function is not an eigenvector of the weight field.
    NotEigenvector,
}

impl fmt::Display for Sl2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sl2Error::OnSection => write!(f, "jet lies on the deleted section y = x p"),
            Sl2Error::NotEigenvector => write!(f, "function is not a weight eigenvector"),
        }
    }
}

/// The chart `(x, y, p) -> ((1/(y-xp), x), (p/(y-xp), y))`, of determinant
/// exactly one.
pub fn chart_map(
    x: &GaussRational,
    y: &GaussRational,
    p: &GaussRational,
) -> Result<[[GaussRational; 2]; 2], Sl2Error> {
    let w = y - &(x * p);
    let w_inv = w.inv().ok_or(Sl2Error::OnSection)?;
    Ok([[w_inv.clone(), x.clone()], [p * &w_inv, y.clone()]])
}

pub fn det2(m: &[[GaussRational; 2]; 2]) -> GaussRational {
    &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
}

/// Eigenvalue of `F` under the weight field `L`, i.e. the scalar with
/// `L F = lambda F`.
pub fn weight_check(l: &Sl2Field, f: &TruncPoly) -> Result<GaussRational, Sl2Error> {
    if f.is_zero() {
        return Err(Sl2Error::NotEigenvector);
    }
    let lf = l.apply(f);
    let (e, c) = f.terms().next().expect("nonzero");
    let lambda = &lf.coeff(e) / c;
    if lf.sub(&f.scale(&lambda)).is_zero() {
        Ok(lambda)
    } else {
        Err(Sl2Error::NotEigenvector)
    }
}

/// Verify that the chart takes the two distinguished jet-space direction
/// fields to the model fields: the vertical `d/dp` goes to `alpha^2 Z1`,
/// and the total derivative `d/dx + p d/dy + B d/dp` to `(1/alpha) Z2` with
/// `Z2 = Z_Q + (f0(delta) + gamma f1(delta)) Z1`. All identities are
/// checked exactly after clearing the `y - xp` denominators.
pub fn chart_pushforward_check(ode: &OdeSpec) -> bool {
    let Some((f0, f1)) = ode.meta() else {
        return false;
    };
    let x = TruncPoly::var(Var::X);
    let y = TruncPoly::var(Var::Y);
    let p = TruncPoly::var(Var::P);
    let w = y.sub(&x.mul(&p));
    // chart components as rational functions of (x, y, p)
    let chart = [
        RatFun::new(TruncPoly::from_int(1), w.clone()), // alpha
        RatFun::from_poly(x.clone()),                   // beta
        RatFun::new(p.clone(), w.clone()),              // gamma
        RatFun::from_poly(y.clone()),                   // delta
    ];
    // pullbacks of the model-field components along the chart:
    // Z1 = (beta, 0, delta, 0) pulls back to (x, 0, y, 0)
    let z1_pull = [
        RatFun::from_poly(x.clone()),
        RatFun::from_int(0),
        RatFun::from_poly(y.clone()),
        RatFun::from_int(0),
    ];
    // d/dp pushforward must equal alpha^2 Z1 = (1/w^2) (x, 0, y, 0)
    let alpha_sq = RatFun::new(TruncPoly::from_int(1), w.mul(&w));
    for (c, z) in chart.iter().zip(&z1_pull) {
        let lhs = c.partial(Var::P);
        if !lhs.eq_cross(&z.mul(&alpha_sq)) {
            return false;
        }
    }
    // F = f0(delta) + gamma f1(delta) pulls back to f0(y) + (p/w) f1(y)
    let f_pull = RatFun::new(f0.mul(&w).add(&p.mul(f1)), w.clone());
    // Z2 = (F beta, alpha, F delta, gamma) pulls back componentwise
    let z2_pull = [
        f_pull.mul(&RatFun::from_poly(x.clone())),
        RatFun::new(TruncPoly::from_int(1), w.clone()),
        f_pull.mul(&RatFun::from_poly(y.clone())),
        RatFun::new(p.clone(), w.clone()),
    ];
    // total derivative field d/dx + p d/dy + B d/dp, applied to the chart,
    // must equal (1/alpha) Z2 = w Z2
    let b = RatFun::from_poly(ode.b().clone());
    let unit = RatFun::from_poly(w.clone());
    for (c, z) in chart.iter().zip(&z2_pull) {
        let total = c
            .partial(Var::X)
            .add(&RatFun::from_poly(p.clone()).mul(&c.partial(Var::Y)))
            .add(&b.mul(&c.partial(Var::P)));
        if !total.eq_cross(&unit.mul(z)) {
            return false;
        }
    }
    true
}
