//! Truncated power series for the formal group of a short Weierstrass curve
//! in the parameter `z = -x/y`, computed in the `(z, w = -1/y)` chart.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use super::WeierstrassCurve;
use crate::error::{Error, Result};
use crate::numfield::{FieldElement, NumberField};

/// Default truncation order.
pub const DEFAULT_PRECISION: usize = 12;

/// A multivariate power series truncated above total degree `prec`.
/// Only nonzero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MSeries {
    field: Arc<NumberField>,
    nvars: usize,
    prec: usize,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl fmt::Debug for MSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MSeries(prec {}) {{", self.prec)?;
        for (k, v) in &self.terms {
            write!(f, " {:?}: {:?};", k, v)?;
        }
        write!(f, " }}")
    }
}

fn degree(e: &[u32]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

impl MSeries {
    pub fn zero(field: &Arc<NumberField>, nvars: usize, prec: usize) -> Self {
        MSeries { field: field.clone(), nvars, prec, terms: BTreeMap::new() }
    }

    pub fn constant(c: &FieldElement, nvars: usize, prec: usize) -> Self {
        let mut s = Self::zero(c.field(), nvars, prec);
        s.set(vec![0; nvars], c.clone());
        s
    }

    pub fn var(field: &Arc<NumberField>, i: usize, nvars: usize, prec: usize) -> Self {
        let mut s = Self::zero(field, nvars, prec);
        let mut e = vec![0; nvars];
        e[i] = 1;
        s.set(e, FieldElement::one(field));
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn coeff(&self, e: &[u32]) -> FieldElement {
        self.terms.get(e).cloned().unwrap_or_else(|| FieldElement::zero(&self.field))
    }

    /// Coefficient of `z^k` in a univariate series.
    pub fn coeff1(&self, k: u32) -> FieldElement {
        self.coeff(&[k])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &FieldElement)> {
        self.terms.iter()
    }

    fn set(&mut self, e: Vec<u32>, c: FieldElement) {
        if c.is_zero() || degree(&e) > self.prec {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, c);
        }
    }

    fn accumulate(&mut self, e: Vec<u32>, c: FieldElement) {
        if degree(&e) > self.prec || c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest total degree with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(|e| degree(e)).min()
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let mut s = Self::zero(&self.field, self.nvars, prec.min(self.prec));
        for (e, c) in &self.terms {
            s.set(e.clone(), c.clone());
        }
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let mut s = self.truncate(prec);
        for (e, c) in &other.terms {
            s.accumulate(e.clone(), c.clone());
        }
        s
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = -&*c;
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &FieldElement) -> Self {
        let mut s = Self::zero(&self.field, self.nvars, self.prec);
        for (e, c) in &self.terms {
            s.set(e.clone(), c * k);
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let mut s = Self::zero(&self.field, self.nvars, prec);
        for (e1, c1) in &self.terms {
            let d1 = degree(e1);
            if d1 > prec {
                continue;
            }
            for (e2, c2) in &other.terms {
                if d1 + degree(e2) > prec {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                s.accumulate(e, c1 * c2);
            }
        }
        s
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(&FieldElement::one(&self.field), self.nvars, self.prec);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `1/s` for a series with constant term 1, via the geometric series.
    pub fn inverse_unit(&self) -> Result<Self> {
        let zero_e = vec![0; self.nvars];
        if !self.coeff(&zero_e).is_one() {
            return Err(Error::Domain("series inverse needs constant term 1".into()));
        }
        let one = Self::constant(&FieldElement::one(&self.field), self.nvars, self.prec);
        let h = self.sub(&one);
        let mut out = one.clone();
        let mut term = one;
        for _ in 0..self.prec {
            term = term.mul(&h).neg();
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// `s(t_1, …, t_k)` for series `t_i` without constant term.
    pub fn substitute(&self, vals: &[MSeries]) -> Self {
        assert_eq!(vals.len(), self.nvars, "one value per variable");
        let target = &vals[0];
        let prec = vals.iter().map(|v| v.prec).min().unwrap_or(self.prec).min(self.prec);
        let one = Self::constant(&FieldElement::one(&self.field), target.nvars, prec);
        let maxdeg: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<MSeries>> = vals
            .iter()
            .zip(&maxdeg)
            .map(|(v, &m)| {
                let v = v.truncate(prec);
                let mut ps = vec![one.clone()];
                for k in 1..=m as usize {
                    let next = ps[k - 1].mul(&v);
                    ps.push(next);
                }
                ps
            })
            .collect();
        let mut out = Self::zero(&self.field, target.nvars, prec);
        for (e, c) in &self.terms {
            let mut t = Self::constant(c, target.nvars, prec);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Value of the truncated polynomial at a point.
    pub fn eval(&self, at: &[FieldElement]) -> FieldElement {
        let mut acc = FieldElement::zero(&self.field);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in at.iter().zip(e) {
                if k > 0 {
                    t = &t * &x.pow(k);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integral())
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self.terms.iter().map(|(e, c)| json!({ "exponents": e, "coefficient": c.to_strings() })).collect();
        json!({ "nvars": self.nvars, "precision": self.prec, "terms": terms })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    GroupLaw,
    Mult(i64),
    LaurentX,
    LaurentY,
}

/// A truncated series `z^shift · series`; the shift is nonzero only for the
/// Laurent expansions of `x` and `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSeries {
    pub kind: SeriesKind,
    pub precision: usize,
    pub shift: i32,
    pub series: MSeries,
}

impl FormalSeries {
    pub fn is_integral(&self) -> bool {
        self.series.is_integral()
    }

    /// Evaluates a univariate series at `z ≠ 0`.
    pub fn eval(&self, z: &FieldElement) -> Result<FieldElement> {
        let v = self.series.eval(std::slice::from_ref(z));
        match self.shift {
            0 => Ok(v),
            s if s > 0 => Ok(&v * &z.pow(s as u32)),
            s => v.checked_div(&z.pow(s.unsigned_abs())),
        }
    }

    /// Order (in `z`) up to which the truncation agrees with the true expansion.
    pub fn exact_through(&self) -> i64 {
        self.shift as i64 + self.series.precision() as i64
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": format!("{:?}", self.kind),
            "precision": self.precision,
            "shift": self.shift,
            "series": self.series.to_json(),
        })
    }
}

/// The formal group law and `w(z)` of a curve, to a fixed precision.
#[derive(Debug, Clone)]
pub struct FormalGroup {
    pub precision: usize,
    /// `w(z)`, kept through degree `precision + 2`.
    pub w: MSeries,
    /// `F(z_1, z_2)` through total degree `precision`.
    pub law: MSeries,
}

impl FormalGroup {
    pub fn new(curve: &WeierstrassCurve, precision: usize) -> Result<Self> {
        if precision < 3 {
            return Err(Error::PrecisionTooSmall(precision));
        }
        let k = curve.field();
        let (a, b) = (&curve.a, &curve.b);
        // w = z³ + a z w² + b w³ by fixed-point iteration; each step fixes at
        // least one more coefficient.
        let wp = precision + 2;
        let z = MSeries::var(k, 0, 1, wp);
        let z3 = z.pow(3);
        let mut w = MSeries::zero(k, 1, wp);
        for _ in 0..=wp {
            let w2 = w.mul(&w);
            let next = z3.add(&z.mul(&w2).scale(a)).add(&w2.mul(&w).scale(b));
            if next == w {
                break;
            }
            w = next;
        }

        let n = precision;
        let z1 = MSeries::var(k, 0, 2, n);
        let z2 = MSeries::var(k, 1, 2, n);
        // λ = (w(z2) - w(z1)) / (z2 - z1) = Σ A_m Σ_{i+j=m-1} z1^i z2^j
        let mut lambda = MSeries::zero(k, 2, n);
        for (e, c) in w.terms() {
            let m = e[0];
            for i in 0..m {
                lambda.accumulate(vec![i, m - 1 - i], c.clone());
            }
        }
        let w1 = w.truncate(n).substitute(std::slice::from_ref(&z1));
        let nu = w1.sub(&lambda.mul(&z1));
        let l2 = lambda.mul(&lambda);
        let l3 = l2.mul(&lambda);
        let two = FieldElement::from_int(k, 2);
        let three = FieldElement::from_int(k, 3);
        let num = lambda.mul(&nu).scale(&(&two * a)).add(&l2.mul(&nu).scale(&(&three * b)));
        let one = MSeries::constant(&FieldElement::one(k), 2, n);
        let den = one.add(&l2.scale(a)).add(&l3.scale(b));
        let law = z1.add(&z2).add(&num.mul(&den.inverse_unit()?));
        Ok(FormalGroup { precision, w, law })
    }

    fn field(&self) -> &Arc<NumberField> {
        &self.law.field
    }

    /// `[m](z)`; the formal inverse is `-z` for a short Weierstrass model.
    pub fn mult(&self, m: i64) -> MSeries {
        let k = self.field();
        let z = MSeries::var(k, 0, 1, self.precision);
        let mut acc = MSeries::zero(k, 1, self.precision);
        for _ in 0..m.unsigned_abs() {
            acc = self.law.substitute(&[acc, z.clone()]);
        }
        if m < 0 {
            acc.neg()
        } else {
            acc
        }
    }

    /// `u(z)^{-1}` where `w = z³ u`, through degree `precision - 1`.
    fn u_inverse(&self) -> Result<MSeries> {
        let k = self.field();
        let mut u = MSeries::zero(k, 1, self.precision - 1);
        for (e, c) in self.w.terms() {
            u.set(vec![e[0] - 3], c.clone());
        }
        u.inverse_unit()
    }

    /// `x = z^{-2} u^{-1}`.
    pub fn laurent_x(&self) -> Result<FormalSeries> {
        Ok(FormalSeries { kind: SeriesKind::LaurentX, precision: self.precision, shift: -2, series: self.u_inverse()? })
    }

    /// `y = -z^{-3} u^{-1}`.
    pub fn laurent_y(&self) -> Result<FormalSeries> {
        Ok(FormalSeries {
            kind: SeriesKind::LaurentY,
            precision: self.precision,
            shift: -3,
            series: self.u_inverse()?.neg(),
        })
    }

    pub fn check_identity(&self) -> bool {
        let k = self.field();
        let z = MSeries::var(k, 0, 1, self.precision);
        let zero = MSeries::zero(k, 1, self.precision);
        self.law.substitute(&[z.clone(), zero.clone()]) == z && self.law.substitute(&[zero, z.clone()]) == z
    }

    pub fn check_commutative(&self) -> bool {
        let k = self.field();
        let z1 = MSeries::var(k, 0, 2, self.precision);
        let z2 = MSeries::var(k, 1, 2, self.precision);
        self.law.substitute(&[z2, z1]) == self.law
    }

    pub fn check_associative(&self) -> bool {
        let k = self.field();
        let n = self.precision;
        let v: Vec<MSeries> = (0..3).map(|i| MSeries::var(k, i, 3, n)).collect();
        let f12 = self.law.substitute(&[v[0].clone(), v[1].clone()]);
        let f23 = self.law.substitute(&[v[1].clone(), v[2].clone()]);
        let left = self.law.substitute(&[v[0].clone(), f23]);
        let right = self.law.substitute(&[f12, v[2].clone()]);
        left == right
    }

    /// `[m]([n](z)) = [mn](z)`.
    pub fn check_composition(&self, m: i64, n: i64) -> bool {
        self.mult(m).substitute(&[self.mult(n)]) == self.mult(m * n)
    }
}

/// One of the standard series of the formal group, truncated at `precision`.
pub fn formal_series(curve: &WeierstrassCurve, kind: SeriesKind, precision: usize) -> Result<FormalSeries> {
    let g = FormalGroup::new(curve, precision)?;
    Ok(match kind {
        SeriesKind::GroupLaw => FormalSeries { kind, precision, shift: 0, series: g.law.clone() },
        SeriesKind::Mult(m) => FormalSeries { kind, precision, shift: 0, series: g.mult(m) },
        SeriesKind::LaurentX => g.laurent_x()?,
        SeriesKind::LaurentY => g.laurent_y()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::NumberField;

    fn curve(a: i64, b: i64) -> WeierstrassCurve {
        let k = NumberField::rationals();
        WeierstrassCurve::new(FieldElement::from_int(&k, a), FieldElement::from_int(&k, b)).unwrap()
    }

    #[test]
    fn w_expansion_leading_terms() {
        // w = z³ + a z⁷ + b z⁹ + 2a² z¹¹ + …
        let e = curve(3, 5);
        let g = FormalGroup::new(&e, 12).unwrap();
        let k = e.field();
        assert!(g.w.coeff1(3).is_one());
        assert_eq!(g.w.coeff1(7), FieldElement::from_int(k, 3));
        assert_eq!(g.w.coeff1(9), FieldElement::from_int(k, 5));
        assert_eq!(g.w.coeff1(11), FieldElement::from_int(k, 18));
        assert!(g.w.coeff1(5).is_zero());
    }

    #[test]
    fn group_axioms_and_multiplication() {
        let e = curve(-1, 1);
        let g = FormalGroup::new(&e, 9).unwrap();
        assert!(g.check_identity());
        assert!(g.check_commutative());
        assert!(g.check_associative());
        assert!(g.check_composition(2, 3));
        assert!(g.check_composition(-2, 2));
        assert!(g.law.is_integral());
        let k = e.field();
        let z = MSeries::var(k, 0, 1, 9);
        assert_eq!(g.mult(1), z);
        assert_eq!(g.mult(3).coeff1(1), FieldElement::from_int(k, 3));
        assert!(g.mult(0).is_zero());
    }

    #[test]
    fn laurent_leading_terms() {
        let e = curve(0, -2);
        let x = formal_series(&e, SeriesKind::LaurentX, 12).unwrap();
        let y = formal_series(&e, SeriesKind::LaurentY, 12).unwrap();
        assert_eq!(x.shift, -2);
        assert!(x.series.coeff1(0).is_one());
        assert_eq!(y.shift, -3);
        assert_eq!(y.series.coeff1(0), FieldElement::from_int(e.field(), -1));
        assert!(x.is_integral() && y.is_integral());
        assert!(matches!(formal_series(&e, SeriesKind::GroupLaw, 2), Err(Error::PrecisionTooSmall(2))));
    }

    #[test]
    fn laurent_series_satisfy_the_curve_equation() {
        // y² - x³ - ax - b vanishes through the known order.
        let e = curve(2, 3);
        let g = FormalGroup::new(&e, 12).unwrap();
        let ux = g.laurent_x().unwrap().series;
        let uy = g.laurent_y().unwrap().series;
        // Multiply through by z⁶: (z⁰ uy)² - ux³ - a z⁴ ux - b z⁶.
        let k = e.field();
        let z = MSeries::var(k, 0, 1, 11);
        let lhs = uy.mul(&uy);
        let rhs = ux
            .mul(&ux)
            .mul(&ux)
            .add(&z.pow(4).mul(&ux).scale(&e.a))
            .add(&z.pow(6).scale(&e.b));
        assert!(lhs.sub(&rhs).is_zero());
    }
}
