//! Fractional ideals of `O_K` as full-rank lattices in integral-basis
//! coordinates, prime ideals from Kummer–Dedekind, valuations and
//! factorization.
//!
//! Ideal equality is representation equality: every nonzero ideal is stored
//! as the column HNF of its lattice over the smallest possible denominator.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{lcm, remove_factor, trial_factor};
use crate::error::{Error, Result};
use crate::matrix::{Column, RatLattice};
use crate::numfield::{same_field, FieldElement, NumberField, RelativeExtension};
use crate::poly::{lift, PolyFp};

/// Default bound for trial division when factoring ideal norms.
pub const DEFAULT_TRIAL_BOUND: u64 = 1 << 20;

#[derive(Clone)]
pub struct FractionalIdeal {
    field: Arc<NumberField>,
    /// `None` is the zero ideal.
    lattice: Option<RatLattice>,
}

impl PartialEq for FractionalIdeal {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field) && self.lattice == other.lattice
    }
}

impl Eq for FractionalIdeal {}

impl fmt::Debug for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lattice {
            None => write!(f, "{}:(0)", self.field.name()),
            Some(l) => {
                write!(f, "{}:1/{}[", self.field.name(), l.den)?;
                for (j, c) in l.hnf.iter().enumerate() {
                    if j > 0 {
                        write!(f, "; ")?;
                    }
                    let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                    write!(f, "{}", s.join(" "))?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Integral-basis coordinates of `x · b_j` for each basis element `b_j`,
/// scaled to the common denominator returned.
fn module_columns(x: &FieldElement) -> (Vec<Column>, BigInt) {
    let field = x.field();
    let n = field.degree();
    let prods: Vec<(Column, BigInt)> = (0..n)
        .map(|j| (x * &FieldElement::basis_element(field, j)).integral_coords())
        .collect();
    let den = prods.iter().fold(BigInt::one(), |a, (_, d)| lcm(&a, d));
    let cols = prods
        .into_iter()
        .map(|(c, d)| {
            let f = &den / d;
            c.into_iter().map(|v| v * &f).collect()
        })
        .collect();
    (cols, den)
}

fn rescale(parts: Vec<(Vec<Column>, BigInt)>) -> (Vec<Column>, BigInt) {
    let den = parts.iter().fold(BigInt::one(), |a, (_, d)| lcm(&a, d));
    let mut cols = Vec::new();
    for (cs, d) in parts {
        let f = &den / d;
        for c in cs {
            cols.push(c.into_iter().map(|v| v * &f).collect());
        }
    }
    (cols, den)
}

impl FractionalIdeal {
    pub fn zero(field: &Arc<NumberField>) -> Self {
        FractionalIdeal { field: field.clone(), lattice: None }
    }

    pub fn unit(field: &Arc<NumberField>) -> Self {
        Self::principal(&FieldElement::one(field))
    }

    /// The `O_K`-module generated by the given elements.
    pub fn from_generators(gens: &[FieldElement]) -> Result<Self> {
        let first = gens.first().ok_or_else(|| Error::InvalidElement("no generators".into()))?;
        let field = first.field().clone();
        if gens.iter().any(|g| !same_field(g.field(), &field)) {
            return Err(Error::FieldMismatch);
        }
        let parts: Vec<_> = gens.iter().filter(|g| !g.is_zero()).map(module_columns).collect();
        if parts.is_empty() {
            return Ok(Self::zero(&field));
        }
        let (cols, den) = rescale(parts);
        let lattice = RatLattice::from_columns(&den, &cols, field.degree()).expect("nonzero ideal has full rank");
        Ok(FractionalIdeal { field, lattice: Some(lattice) })
    }

    pub fn principal(x: &FieldElement) -> Self {
        Self::from_generators(std::slice::from_ref(x)).expect("single generator")
    }

    /// Builds an ideal from a lattice in integral-basis coordinates, checking
    /// that it is an `O_K`-module.
    pub fn from_lattice(field: &Arc<NumberField>, lattice: RatLattice) -> Result<Self> {
        let n = field.degree();
        if lattice.dim() != n {
            return Err(Error::InvalidElement("lattice dimension differs from the field degree".into()));
        }
        let canonical = RatLattice::from_columns(&lattice.den, &lattice.hnf, n)
            .ok_or_else(|| Error::InvalidElement("lattice is not of full rank".into()))?;
        if canonical != lattice {
            return Err(Error::InvalidElement("lattice is not in canonical HNF form".into()));
        }
        let ideal = FractionalIdeal { field: field.clone(), lattice: Some(lattice) };
        for x in ideal.z_basis() {
            for j in 0..n {
                let y = &x * &FieldElement::basis_element(field, j);
                if !ideal.contains(&y) {
                    return Err(Error::InvalidElement("lattice is not closed under multiplication by O_K".into()));
                }
            }
        }
        Ok(ideal)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.lattice.is_none()
    }

    pub fn lattice(&self) -> Option<&RatLattice> {
        self.lattice.as_ref()
    }

    pub fn is_unit(&self) -> bool {
        *self == Self::unit(&self.field)
    }

    /// Contained in `O_K`.
    pub fn is_integral(&self) -> bool {
        self.lattice.as_ref().is_none_or(|l| l.den.is_one())
    }

    /// A `Z`-basis of the ideal (empty for the zero ideal).
    pub fn z_basis(&self) -> Vec<FieldElement> {
        match &self.lattice {
            None => Vec::new(),
            Some(l) => l
                .hnf
                .iter()
                .map(|c| {
                    let x = FieldElement::from_integral_coords(&self.field, c);
                    if l.den.is_one() {
                        x
                    } else {
                        x.checked_div(&FieldElement::from_int(&self.field, l.den.clone())).expect("nonzero")
                    }
                })
                .collect(),
        }
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        if x.is_zero() {
            return true;
        }
        match &self.lattice {
            None => false,
            Some(l) => {
                let (c, d) = x.integral_coords();
                l.contains(&c, &d)
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(match (&self.lattice, &other.lattice) {
            (None, _) => other.clone(),
            (_, None) => self.clone(),
            (Some(a), Some(b)) => FractionalIdeal { field: self.field.clone(), lattice: Some(a.sum(b)) },
        })
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let a = self.z_basis();
        let b = other.z_basis();
        let parts: Vec<_> = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| x * y))
            .map(|z| {
                let (c, d) = z.integral_coords();
                (vec![c], d)
            })
            .collect();
        let (cols, den) = rescale(parts);
        let lattice = RatLattice::from_columns(&den, &cols, self.field.degree()).expect("full rank");
        Ok(FractionalIdeal { field: self.field.clone(), lattice: Some(lattice) })
    }

    pub fn mul_element(&self, x: &FieldElement) -> Result<Self> {
        self.product(&Self::principal(x))
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(match (&self.lattice, &other.lattice) {
            (Some(a), Some(b)) => FractionalIdeal { field: self.field.clone(), lattice: Some(a.intersection(b)) },
            _ => Self::zero(&self.field),
        })
    }

    /// `I^{-1} = {x : xI ⊆ O_K}`, the dual of the lattice spanned by the rows
    /// of the multiplication matrices of a `Z`-basis of `I`.
    pub fn inverse(&self) -> Result<Self> {
        let Some(l) = &self.lattice else {
            return Err(Error::ZeroIdeal);
        };
        let n = self.field.degree();
        let mut parts = Vec::with_capacity(n);
        for c in &l.hnf {
            let h = FieldElement::from_integral_coords(&self.field, c);
            let (cols, den) = module_columns(&h);
            // rows of the matrix whose columns are `cols`
            let rows: Vec<Column> = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
            parts.push((rows, den * &l.den));
        }
        let (rows, den) = rescale(parts);
        let row_lattice = RatLattice::from_columns(&den, &rows, n).expect("full rank");
        Ok(FractionalIdeal { field: self.field.clone(), lattice: Some(row_lattice.dual()) })
    }

    /// `(I : J) = I · J^{-1}`.
    pub fn quotient(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.product(&other.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut result = Self::unit(&self.field);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = result.product(&b)?;
            }
            k >>= 1;
            if k > 0 {
                b = b.product(&b)?;
            }
        }
        Ok(result)
    }

    /// `self | other`, i.e. `other ⊆ self`. Every ideal divides the zero
    /// ideal; the zero ideal divides only itself.
    pub fn divides(&self, other: &Self) -> bool {
        match (&self.lattice, &other.lattice) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a.contains_lattice(b),
        }
    }

    /// Absolute norm; `0` for the zero ideal.
    pub fn norm(&self) -> BigRational {
        match &self.lattice {
            None => BigRational::zero(),
            Some(l) => l.covolume(),
        }
    }

    /// Factorization into prime ideals by Kummer–Dedekind, with rational
    /// primes found by trial division of the norm up to `trial_bound`.
    pub fn factor(&self, trial_bound: u64) -> Result<PrimeFactorization> {
        let Some(l) = &self.lattice else {
            return Err(Error::ZeroIdeal);
        };
        let mut primes: Vec<u64> = Vec::new();
        let mut diag = BigInt::one();
        for (i, c) in l.hnf.iter().enumerate() {
            diag *= &c[i];
        }
        for v in [&l.den, &diag] {
            let t = trial_factor(v, trial_bound);
            if !t.cofactor.is_one() {
                return Err(Error::FactorizationBound { bits: t.cofactor.bits(), bound: trial_bound });
            }
            primes.extend(t.factors.iter().map(|&(p, _)| p));
        }
        primes.sort_unstable();
        primes.dedup();
        let gens = self.z_basis();
        let mut factors = Vec::new();
        for p in primes {
            for prime in primes_above(&self.field, p)? {
                let v = gens.iter().filter_map(|g| prime.valuation(g)).min().expect("nonzero ideal");
                if v != 0 {
                    factors.push((prime, v));
                }
            }
        }
        Ok(PrimeFactorization { field: self.field.clone(), factors })
    }

    /// The ideal `J` with `J² = I`, by halving exponents of the factorization.
    pub fn sqrt(&self, trial_bound: u64) -> Result<Self> {
        let fac = self.factor(trial_bound)?;
        let mut half = Vec::with_capacity(fac.factors.len());
        for (p, e) in &fac.factors {
            if e % 2 != 0 {
                return Err(Error::NotASquare(format!("{} occurs with exponent {e}", p.tag())));
            }
            half.push((p.clone(), e / 2));
        }
        PrimeFactorization { field: self.field.clone(), factors: half }.product()
    }

    /// `I · O_K` for an ideal `I` of `O_F`.
    pub fn extend(&self, ext: &RelativeExtension) -> Result<Self> {
        if !same_field(&self.field, &ext.base) {
            return Err(Error::FieldMismatch);
        }
        let gens: Vec<FieldElement> = self.z_basis().iter().map(|x| ext.embed(x)).collect();
        if gens.is_empty() {
            return Ok(Self::zero(&ext.top));
        }
        Self::from_generators(&gens)
    }

    /// `I ∩ F` for an ideal `I` of `O_K`, as an ideal of `O_F`.
    pub fn restrict(&self, ext: &RelativeExtension) -> Result<Self> {
        if !same_field(&self.field, &ext.top) {
            return Err(Error::FieldMismatch);
        }
        let Some(l) = &self.lattice else {
            return Ok(Self::zero(&ext.base));
        };
        let m = ext.base.degree();
        let n = ext.top.degree();
        // Columns of P: images of F's integral basis, in K's integral coordinates.
        let imgs: Vec<(Column, BigInt)> = (0..m)
            .map(|j| ext.embed(&FieldElement::basis_element(&ext.base, j)).integral_coords())
            .collect();
        let (p_cols, p_den) = rescale(imgs.into_iter().map(|(c, d)| (vec![c], d)).collect());
        // y ∈ preimage ⇔ H^{-1} · den_L · P y / p_den ∈ Z^n.
        let h = &l.hnf;
        let mut det = BigInt::one();
        for (i, c) in h.iter().enumerate() {
            det *= &c[i];
        }
        let mut a_cols: Vec<Column> = Vec::with_capacity(m);
        for pc in &p_cols {
            // x = det · H^{-1} w with w = den_L · pc; back substitution is exact.
            let w: Column = pc.iter().map(|v| v * &l.den * &det).collect();
            let mut x = vec![BigInt::zero(); n];
            for i in (0..n).rev() {
                let mut acc = w[i].clone();
                for j in i + 1..n {
                    if !h[j][i].is_zero() {
                        acc -= &h[j][i] * &x[j];
                    }
                }
                x[i] = acc / &h[i][i];
            }
            a_cols.push(x);
        }
        let rows: Vec<Column> = (0..n).map(|i| (0..m).map(|j| a_cols[j][i].clone()).collect()).collect();
        let row_lattice = RatLattice::from_columns(&(&det * &p_den), &rows, m).expect("embedding is injective");
        Ok(FractionalIdeal { field: ext.base.clone(), lattice: Some(row_lattice.dual()) })
    }

    pub fn to_json(&self) -> IdealJson {
        match &self.lattice {
            None => IdealJson { field: self.field.name().into(), zero: true, denominator: "1".into(), hnf: Vec::new() },
            Some(l) => IdealJson {
                field: self.field.name().into(),
                zero: false,
                denominator: l.den.to_string(),
                hnf: l.hnf.iter().map(|c| c.iter().map(|x| x.to_string()).collect()).collect(),
            },
        }
    }

    /// Parses and fully revalidates a serialized ideal.
    pub fn from_json(field: &Arc<NumberField>, j: &IdealJson) -> Result<Self> {
        if j.field != field.name() {
            return Err(Error::FieldMismatch);
        }
        if j.zero {
            return Ok(Self::zero(field));
        }
        let parse = |s: &String| {
            s.parse::<BigInt>().map_err(|_| Error::InvalidElement(format!("not an integer: {s}")))
        };
        let den = parse(&j.denominator)?;
        if !den.is_positive() {
            return Err(Error::InvalidElement("denominator must be positive".into()));
        }
        let hnf = j
            .hnf
            .iter()
            .map(|c| c.iter().map(parse).collect::<Result<Column>>())
            .collect::<Result<Vec<Column>>>()?;
        if hnf.len() != field.degree() || hnf.iter().any(|c| c.len() != field.degree()) {
            return Err(Error::InvalidElement("HNF has the wrong shape".into()));
        }
        Self::from_lattice(field, RatLattice { den, hnf })
    }
}

/// Serialized form of an ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    pub field: String,
    pub zero: bool,
    pub denominator: String,
    pub hnf: Vec<Vec<String>>,
}

/// `O_K` ideal above `p` from a monic irreducible factor `g` of the defining
/// polynomial modulo `p`: `𝔭 = (p, g(θ))`.
#[derive(Clone)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    pub residue_poly: Vec<u64>,
    pub generator: FieldElement,
    pub ideal: FractionalIdeal,
    /// `h(θ)` with `h = f / g^{…}` mod `p`: `h(θ)/p` has valuation `-1` at
    /// this prime and is integral at the other primes above `p`.
    tau: FieldElement,
}

impl fmt::Debug for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.residue_poly == other.residue_poly && self.ideal == other.ideal
    }
}

impl Eq for PrimeIdeal {}

impl PrimeIdeal {
    /// `(p, [g_0, g_1, …])`, the residue polynomial constant term first.
    pub fn tag(&self) -> String {
        let c: Vec<String> = self.residue_poly.iter().map(|x| x.to_string()).collect();
        format!("({}, [{}])", self.p, c.join(","))
    }

    pub fn norm(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.f as usize)
    }

    /// `v_𝔭(x)`, or `None` for `x = 0`.
    pub fn valuation(&self, x: &FieldElement) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        let field = x.field();
        let p = BigInt::from(self.p);
        let (vd, _) = remove_factor(x.denominator(), &p);
        let mut v = -(self.e as i64) * vd as i64;
        // Strip the rational p-content of the power-basis numerator.
        let num = x.numerator();
        let mut content = BigInt::zero();
        for c in num {
            content = crate::arith::gcd(&content, c);
        }
        let (vc, _) = remove_factor(&content, &p);
        let pk = num_traits::pow(p.clone(), vc as usize);
        let mut a = FieldElement::from_parts(field.clone(), num.iter().map(|c| c / &pk).collect(), BigInt::one());
        v += self.e as i64 * vc as i64;
        loop {
            let b = (&a * &self.tau).checked_div(&FieldElement::from_int(field, p.clone())).expect("p ≠ 0");
            if !b.is_integral() {
                break;
            }
            a = b;
            v += 1;
        }
        Some(v)
    }
}

/// The primes of `O_K` above `p`, sorted by residue polynomial.
pub fn primes_above(field: &Arc<NumberField>, p: u64) -> Result<Vec<PrimeIdeal>> {
    if field.index().is_multiple_of(&BigInt::from(p)) {
        return Err(Error::UnsupportedPrime(p));
    }
    let fbar = PolyFp::from_bigints(p, field.polynomial());
    let facs = fbar.factor();
    let eval = |coeffs: &[BigInt]| {
        let th = FieldElement::generator(field);
        let mut acc = FieldElement::zero(field);
        for c in coeffs.iter().rev() {
            acc = &(&acc * &th) + &FieldElement::from_int(field, c.clone());
        }
        acc
    };
    let mut out = Vec::with_capacity(facs.len());
    for (g, e) in &facs {
        let (h, r) = fbar.div_rem(g);
        debug_assert!(r.is_zero());
        let gen = eval(&lift(g));
        let tau = eval(&lift(&h));
        let ideal = FractionalIdeal::from_generators(&[FieldElement::from_int(field, p), gen.clone()])?;
        let f = g.degree().expect("nonconstant") as u32;
        let expected = num_traits::pow(BigInt::from(p), f as usize);
        if ideal.norm() != BigRational::from_integer(expected) {
            return Err(Error::UnsupportedPrime(p));
        }
        out.push(PrimeIdeal { p, e: *e, f, residue_poly: g.c.clone(), generator: gen, ideal, tau });
    }
    Ok(out)
}

/// A product of prime ideals to nonzero integer exponents.
#[derive(Clone, Debug)]
pub struct PrimeFactorization {
    pub field: Arc<NumberField>,
    pub factors: Vec<(PrimeIdeal, i64)>,
}

impl PrimeFactorization {
    pub fn product(&self) -> Result<FractionalIdeal> {
        let mut acc = FractionalIdeal::unit(&self.field);
        for (p, e) in &self.factors {
            acc = acc.product(&p.ideal.pow(*e)?)?;
        }
        Ok(acc)
    }

    /// `(p, f, exponent, generator)` entries for reports.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.factors
                .iter()
                .map(|(p, e)| {
                    serde_json::json!({
                        "p": p.p.to_string(),
                        "f": p.f,
                        "residue_poly": p.residue_poly.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "exponent": e,
                        "generators": [p.p.to_string(), p.generator.to_strings()],
                    })
                })
                .collect(),
        )
    }

    pub fn exponent_of(&self, p: u64, residue_poly: &[u64]) -> i64 {
        self.factors
            .iter()
            .find(|(q, _)| q.p == p && q.residue_poly == residue_poly)
            .map_or(0, |(_, e)| *e)
    }
}

/// Denominator ideal `{b ∈ O_K : bt ∈ O_K} = O_K ∩ t^{-1} O_K`; `(1)` for `t = 0`.
pub fn den_ideal(t: &FieldElement) -> FractionalIdeal {
    let field = t.field();
    if t.is_zero() {
        return FractionalIdeal::unit(field);
    }
    // For coprime a/d ∈ Q the ideal is just (d).
    if let Some(q) = t.as_rational() {
        return FractionalIdeal::principal(&FieldElement::from_int(field, q.denom().clone()));
    }
    let inv = t.inverse().expect("nonzero");
    FractionalIdeal::unit(field)
        .intersection(&FractionalIdeal::principal(&inv))
        .expect("same field")
}

/// Numerator ideal `den(t^{-1}) = O_K ∩ t O_K`; the zero ideal for `t = 0`.
pub fn num_ideal(t: &FieldElement) -> FractionalIdeal {
    let field = t.field();
    if t.is_zero() {
        return FractionalIdeal::zero(field);
    }
    if let Some(q) = t.as_rational() {
        return FractionalIdeal::principal(&FieldElement::from_int(field, q.numer().abs()));
    }
    FractionalIdeal::unit(field)
        .intersection(&FractionalIdeal::principal(t))
        .expect("same field")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> Arc<NumberField> {
        NumberField::monogenic("Q(i)", &[1, 0, 1]).unwrap()
    }

    fn g(k: &Arc<NumberField>, a: i64, b: i64) -> FieldElement {
        FieldElement::from_coords(k, &[BigRational::from_integer(a.into()), BigRational::from_integer(b.into())]).unwrap()
    }

    fn qint(q: &Arc<NumberField>, a: i64) -> FieldElement {
        FieldElement::from_int(q, a)
    }

    #[test]
    fn generators_and_combinations_over_q() {
        let q = NumberField::rationals();
        let i23 = FractionalIdeal::from_generators(&[qint(&q, 2), qint(&q, 3)]).unwrap();
        assert!(i23.is_unit());
        let two = FractionalIdeal::principal(&qint(&q, 2));
        let three = FractionalIdeal::principal(&qint(&q, 3));
        let four = FractionalIdeal::principal(&qint(&q, 4));
        assert_eq!(two.sum(&three).unwrap(), FractionalIdeal::unit(&q));
        assert_eq!(two.product(&three).unwrap(), FractionalIdeal::principal(&qint(&q, 6)));
        assert_eq!(four.quotient(&two).unwrap(), two);
        assert!(two.divides(&four));
        assert!(!three.divides(&two));
        assert!(FractionalIdeal::from_generators(&[qint(&q, 0)]).unwrap().is_zero());
        assert!(matches!(two.quotient(&FractionalIdeal::zero(&q)), Err(Error::ZeroIdeal)));
    }

    #[test]
    fn gaussian_ideals() {
        let k = gauss();
        let p = FractionalIdeal::principal(&g(&k, 1, 1));
        assert_eq!(p.norm(), BigRational::from_integer(2.into()));
        let l = p.lattice().unwrap();
        assert_eq!(&l.hnf[0][0] * &l.hnf[1][1], BigInt::from(2));
        let two = FractionalIdeal::principal(&g(&k, 2, 0));
        assert!(p.divides(&two));
        assert_eq!(two.norm(), BigRational::from_integer(4.into()));
        assert_eq!(p.pow(2).unwrap(), two);
    }

    #[test]
    fn denominators_and_numerators() {
        let q = NumberField::rationals();
        let half = FieldElement::from_rational(&q, &BigRational::new(1.into(), 2.into()));
        assert_eq!(den_ideal(&half), FractionalIdeal::principal(&qint(&q, 2)));
        let ft = FieldElement::from_rational(&q, &BigRational::new(4.into(), 3.into()));
        assert_eq!(num_ideal(&ft), FractionalIdeal::principal(&qint(&q, 4)));
        assert!(num_ideal(&qint(&q, 0)).is_zero());
        assert!(den_ideal(&qint(&q, 0)).is_unit());
        let k = gauss();
        let t = FieldElement::from_coords(&k, &[BigRational::new(1.into(), 2.into()), BigRational::new((-1).into(), 2.into())]).unwrap();
        assert_eq!(den_ideal(&t), FractionalIdeal::principal(&g(&k, 1, 1)));
        assert_eq!(num_ideal(&g(&k, 1, 1)), FractionalIdeal::principal(&g(&k, 1, 1)));
        assert!(den_ideal(&g(&k, 3, 5)).is_unit());
    }

    #[test]
    fn factorization_and_sqrt() {
        let q = NumberField::rationals();
        let f = FractionalIdeal::principal(&qint(&q, 100)).factor(1000).unwrap();
        let exps: Vec<(u64, i64)> = f.factors.iter().map(|(p, e)| (p.p, *e)).collect();
        assert_eq!(exps, vec![(2, 2), (5, 2)]);
        assert_eq!(FractionalIdeal::principal(&qint(&q, 100)).sqrt(1000).unwrap(), FractionalIdeal::principal(&qint(&q, 10)));
        assert!(FractionalIdeal::unit(&q).factor(1000).unwrap().factors.is_empty());
        assert!(FractionalIdeal::unit(&q).sqrt(1000).unwrap().is_unit());
        assert!(matches!(FractionalIdeal::principal(&qint(&q, 2)).sqrt(1000), Err(Error::NotASquare(_))));

        let k = gauss();
        let two = FractionalIdeal::principal(&g(&k, 2, 0)).factor(1000).unwrap();
        assert_eq!(two.factors.len(), 1);
        assert_eq!(two.factors[0].1, 2);
        assert_eq!(two.factors[0].0.f, 1);
        assert_eq!(two.factors[0].0.residue_poly, vec![1, 1]);
        let mixed = FractionalIdeal::principal(&g(&k, 3, 4)).quotient(&FractionalIdeal::principal(&g(&k, 6, 0))).unwrap();
        let fm = mixed.factor(1000).unwrap();
        assert_eq!(fm.product().unwrap(), mixed);
    }

    #[test]
    fn index_primes_are_refused() {
        let k = NumberField::new(
            "Q(sqrt5)",
            vec![(-5).into(), 0.into(), 1.into()],
            vec![
                vec![BigRational::one(), BigRational::zero()],
                vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into())],
            ],
            5.into(),
        )
        .unwrap();
        let two = FractionalIdeal::principal(&FieldElement::from_int(&k, 2));
        assert!(matches!(two.factor(1000), Err(Error::UnsupportedPrime(2))));
        // but divisibility still works
        assert!(FractionalIdeal::principal(&FieldElement::from_int(&k, 2)).divides(&FractionalIdeal::principal(&FieldElement::from_int(&k, 4))));
    }

    #[test]
    fn extension_and_restriction() {
        let q = NumberField::rationals();
        let k = gauss();
        let ext = RelativeExtension::new(q.clone(), k.clone(), FieldElement::zero(&k), FieldElement::generator(&k), 2, FieldElement::from_int(&k, -4)).unwrap();
        let two_q = FractionalIdeal::principal(&qint(&q, 2));
        let ext2 = two_q.extend(&ext).unwrap();
        assert_eq!(ext2, FractionalIdeal::principal(&g(&k, 2, 0)));
        assert_eq!(ext2.norm(), BigRational::from_integer(4.into()));
        let p2 = FractionalIdeal::principal(&g(&k, 1, 1)).pow(2).unwrap();
        assert_eq!(p2.restrict(&ext).unwrap(), two_q);
        assert!(FractionalIdeal::unit(&k).restrict(&ext).unwrap().is_unit());
        // (1+i) ∩ Z = 2Z
        assert_eq!(FractionalIdeal::principal(&g(&k, 1, 1)).restrict(&ext).unwrap(), two_q);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let k = gauss();
        let i = FractionalIdeal::principal(&g(&k, 3, 1)).quotient(&FractionalIdeal::principal(&g(&k, 2, 0))).unwrap();
        let j = i.to_json();
        assert_eq!(FractionalIdeal::from_json(&k, &j).unwrap(), i);
        // (2, i) as a Z-lattice with basis {2, i} is not an O_K-module's HNF? It is
        // not closed: i·i = -1 is missing.
        let bad = IdealJson { field: "Q(i)".into(), zero: false, denominator: "1".into(), hnf: vec![vec!["2".into(), "0".into()], vec!["0".into(), "1".into()]] };
        assert!(FractionalIdeal::from_json(&k, &bad).is_err());
    }
}
