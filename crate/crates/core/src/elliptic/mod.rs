//! Elliptic curves `y² = x³ + ax + b` over a number field, their points and
//! the local parameter `z = -x/y` near the identity.

pub mod formal;
pub mod instance;

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ideals::{den_ideal, FractionalIdeal, PrimeIdeal};
use crate::numfield::{same_field, FieldElement, NumberField};

pub use formal::{formal_series, FormalGroup, FormalSeries, SeriesKind};
pub use instance::{validate_instance, RankOneInstance, RankStatus, SearchParams, TamagawaEntry};

/// Short Weierstrass model with integral coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    pub a: FieldElement,
    pub b: FieldElement,
}

impl fmt::Debug for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({:?})x + ({:?})", self.a, self.b)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub enum CurvePoint {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine { x, y } => write!(f, "({:?}, {:?})", x, y),
        }
    }
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&FieldElement> {
        match self {
            CurvePoint::Affine { x, .. } => Some(x),
            CurvePoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&FieldElement> {
        match self {
            CurvePoint::Affine { y, .. } => Some(y),
            CurvePoint::Infinity => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CurvePoint::Infinity => json!("infinity"),
            CurvePoint::Affine { x, y } => json!({ "x": x.to_strings(), "y": y.to_strings() }),
        }
    }
}

impl WeierstrassCurve {
    pub fn new(a: FieldElement, b: FieldElement) -> Result<Self> {
        if !same_field(a.field(), b.field()) {
            return Err(Error::FieldMismatch);
        }
        if !a.is_integral() || !b.is_integral() {
            return Err(Error::InvalidCurve("coefficients must be integral".into()));
        }
        let c = WeierstrassCurve { a, b };
        if c.discriminant().is_zero() {
            return Err(Error::InvalidCurve("singular curve (discriminant 0)".into()));
        }
        Ok(c)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.a.field()
    }

    /// `Δ = -16(4a³ + 27b²)`.
    pub fn discriminant(&self) -> FieldElement {
        let t = &self.a.pow(3).scale(&4.into()) + &self.b.pow(2).scale(&27.into());
        t.scale(&(-16).into())
    }

    fn rhs(&self, x: &FieldElement) -> FieldElement {
        &(&x.pow(3) + &(&self.a * x)) + &self.b
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                same_field(x.field(), self.field())
                    && same_field(y.field(), self.field())
                    && y.pow(2) == self.rhs(x)
            }
        }
    }

    pub fn point(&self, x: FieldElement, y: FieldElement) -> Result<CurvePoint> {
        let p = CurvePoint::Affine { x, y };
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(Error::NotOnCurve)
        }
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: x.clone(), y: -y },
        }
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        if x1 == x2 {
            if (y1 + y2).is_zero() {
                return CurvePoint::Infinity;
            }
            return self.double(p);
        }
        let lambda = (y2 - y1).checked_div(&(x2 - x1)).expect("x1 ≠ x2");
        self.finish(&lambda, x1, y1, x2)
    }

    pub fn double(&self, p: &CurvePoint) -> CurvePoint {
        let CurvePoint::Affine { x, y } = p else {
            return CurvePoint::Infinity;
        };
        if y.is_zero() {
            return CurvePoint::Infinity;
        }
        let num = &x.pow(2).scale(&3.into()) + &self.a;
        let lambda = num.checked_div(&y.scale(&2.into())).expect("y ≠ 0");
        self.finish(&lambda, x, y, x)
    }

    fn finish(&self, lambda: &FieldElement, x1: &FieldElement, y1: &FieldElement, x2: &FieldElement) -> CurvePoint {
        let x3 = &(&lambda.pow(2) - x1) - x2;
        let y3 = &(lambda * &(x1 - &x3)) - y1;
        CurvePoint::Affine { x: x3, y: y3 }
    }

    /// `[m]P` by double-and-add; negative `m` uses `-P`.
    pub fn scalar_mul(&self, m: i64, p: &CurvePoint) -> CurvePoint {
        let base = if m < 0 { self.neg(p) } else { p.clone() };
        let mut k = m.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut run = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &run);
            }
            k >>= 1;
            if k > 0 {
                run = self.double(&run);
            }
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointOp {
    Add,
    NegateFirst,
    DoubleFirst,
}

/// Dispatches one group operation; the second point is ignored for unary ops.
pub fn point_op(curve: &WeierstrassCurve, p: &CurvePoint, q: &CurvePoint, op: PointOp) -> CurvePoint {
    match op {
        PointOp::Add => curve.add(p, q),
        PointOp::NegateFirst => curve.neg(p),
        PointOp::DoubleFirst => curve.double(p),
    }
}

/// `z(P) = -x/y`.
pub fn z_parameter(p: &CurvePoint) -> Result<FieldElement> {
    match p {
        CurvePoint::Infinity => Err(Error::NoParameter("the point at infinity")),
        CurvePoint::Affine { y, .. } if y.is_zero() => Err(Error::NoParameter("a point with y = 0")),
        CurvePoint::Affine { x, y } => Ok(-(x.checked_div(y).expect("y ≠ 0"))),
    }
}

/// `n = v_𝔭(z(P))` for a point in the kernel of reduction at `𝔭`, computed from
/// `v_𝔭(x) = -2n` and cross-checked against the direct valuation of `z`.
pub fn local_point_valuation(p: &CurvePoint, prime: &PrimeIdeal) -> Result<i64> {
    let CurvePoint::Affine { x, .. } = p else {
        return Err(Error::NoParameter("the point at infinity"));
    };
    let vx = match prime.valuation(x) {
        Some(v) => v,
        None => return Err(Error::NotNearIdentity(0)),
    };
    if vx >= 0 {
        return Err(Error::NotNearIdentity(vx));
    }
    if vx % 2 != 0 {
        return Err(Error::InconsistentValuation(format!("v(x) = {} is odd at {}", vx, prime.tag())));
    }
    let n = -vx / 2;
    let z = z_parameter(p)?;
    let vz = prime.valuation(&z).ok_or_else(|| Error::InconsistentValuation("z = 0".into()))?;
    if vz != n {
        return Err(Error::InconsistentValuation(format!(
            "v(x) = {} predicts v(z) = {} but v(z) = {} at {}",
            vx,
            n,
            vz,
            prime.tag()
        )));
    }
    Ok(n)
}

/// `J` with `J² = den(x(P))`, read off the point as `den(y)·den(x)^{-1}`.
///
/// On an integral model a pole of order `2k` in `x` forces one of order `3k`
/// in `y`, so the quotient is exact. The square is verified before returning.
pub fn den_sqrt_via_point(p: &CurvePoint) -> Result<FractionalIdeal> {
    let CurvePoint::Affine { x, y } = p else {
        return Err(Error::NoParameter("the point at infinity"));
    };
    let dx = den_ideal(x);
    let dy = den_ideal(y);
    let j = dy.quotient(&dx)?;
    if j.pow(2)? != dx {
        return Err(Error::NotASquare("den(x) is not the square of den(y)/den(x)".into()));
    }
    Ok(j)
}
