//! Number fields given by a monic integral polynomial and a supplied integral
//! basis, their elements, and relative coordinates over a subfield.
//!
//! Elements are stored in the power basis `1, θ, …, θ^{n-1}` as an integer
//! vector over a common positive denominator. Integral-basis coordinates are
//! only produced on demand.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{content_with, format_rational, gcd, lcm, primes_up_to, ratio, trial_factor};
use crate::error::{Error, Result};
use crate::matrix::{det_bareiss, solve_bareiss, Column};
use crate::poly::PolyFp;

/// A number field `Q[x]/(f)` with an integral basis of its maximal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    name: String,
    poly: Vec<BigInt>,
    /// Integral basis: element `j` is `basis[j] / basis_den` in power-basis
    /// coordinates.
    basis_den: BigInt,
    basis: Vec<Column>,
    /// Inverse of the basis matrix: integral coordinates of a power-basis
    /// vector `v` are `basis_inv · v / basis_inv_den`.
    basis_inv_den: BigInt,
    basis_inv: Vec<Vec<BigInt>>,
    /// `θ^k` in power-basis coordinates for `k < 2n - 1`.
    powers: Vec<Column>,
    discriminant: BigInt,
}

impl NumberField {
    /// Builds and validates a field. `basis[j]` gives the rational power-basis
    /// coordinates of the `j`-th integral basis element.
    pub fn new(
        name: &str,
        poly: Vec<BigInt>,
        basis: Vec<Vec<BigRational>>,
        discriminant: BigInt,
    ) -> Result<Arc<Self>> {
        let bad = |m: String| Error::InvalidField(format!("{name}: {m}"));
        if poly.len() < 2 {
            return Err(bad("defining polynomial must have degree at least 1".into()));
        }
        if !poly.last().unwrap().is_one() {
            return Err(bad("defining polynomial is not monic".into()));
        }
        let n = poly.len() - 1;
        if n > 1 {
            if let Some(r) = rational_root(&poly).map_err(|m| bad(m))? {
                return Err(bad(format!("defining polynomial has the rational root {r}")));
            }
            if n > 3 {
                certify_irreducible(&poly).map_err(|m| bad(m))?;
            }
        }
        if basis.len() != n || basis.iter().any(|b| b.len() != n) {
            return Err(bad(format!("integral basis must be {n} vectors of length {n}")));
        }
        let mut basis_den = BigInt::one();
        for b in &basis {
            for q in b {
                basis_den = lcm(&basis_den, q.denom());
            }
        }
        let basis_int: Vec<Column> = basis
            .iter()
            .map(|b| b.iter().map(|q| q.numer() * (&basis_den / q.denom())).collect())
            .collect();
        // Row-major basis matrix: row i, column j is coordinate i of b_j.
        let rows: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| basis_int[j][i].clone()).collect()).collect();
        let det = det_bareiss(&rows);
        if det.is_zero() {
            return Err(bad("integral basis is linearly dependent".into()));
        }
        // basis_inv = basis_den * rows^{-1}
        let mut inv_cols = Vec::with_capacity(n);
        for k in 0..n {
            let e: Vec<BigInt> = (0..n).map(|i| if i == k { BigInt::one() } else { BigInt::zero() }).collect();
            let (y, d) = solve_bareiss(&rows, &e).expect("nonsingular");
            inv_cols.push((y, d));
        }
        let d0 = inv_cols[0].1.clone();
        let mut basis_inv_den = d0.abs();
        let sign = if d0.is_negative() { -BigInt::one() } else { BigInt::one() };
        let mut basis_inv = vec![vec![BigInt::zero(); n]; n];
        for (k, (y, d)) in inv_cols.iter().enumerate() {
            // All solves share the same elimination, hence the same d.
            debug_assert_eq!(d, &d0);
            for i in 0..n {
                basis_inv[i][k] = &y[i] * &basis_den * &sign;
            }
        }
        let g = basis_inv.iter().fold(basis_inv_den.clone(), |g, r| content_with(r, &g));
        if !g.is_one() {
            basis_inv_den /= &g;
            for r in basis_inv.iter_mut() {
                for x in r.iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        let mut powers: Vec<Column> = Vec::with_capacity(2 * n);
        for k in 0..(2 * n - 1) {
            let mut c = vec![BigInt::zero(); n];
            if k < n {
                c[k] = BigInt::one();
            } else {
                // θ^k = θ · θ^{k-1}, reduced by θ^n = -Σ f_i θ^i.
                let prev: &Column = &powers[k - 1];
                let top = prev[n - 1].clone();
                for i in (1..n).rev() {
                    c[i] = prev[i - 1].clone();
                }
                for i in 0..n {
                    c[i] -= &top * &poly[i];
                }
            }
            powers.push(c);
        }
        let field = NumberField {
            name: name.to_string(),
            poly,
            basis_den,
            basis: basis_int,
            basis_inv_den,
            basis_inv,
            powers,
            discriminant,
        };
        let field = Arc::new(field);
        Self::check_order(&field).map_err(|m| bad(m))?;
        Ok(field)
    }

    /// The field `Q` itself, as `Q[x]/(x)`.
    pub fn rationals() -> Arc<Self> {
        Self::new("Q", vec![BigInt::zero(), BigInt::one()], vec![vec![BigRational::one()]], BigInt::one())
            .expect("Q is a valid field")
    }

    /// A field with power basis as integral basis; for tests and examples.
    pub fn monogenic(name: &str, poly: &[i64]) -> Result<Arc<Self>> {
        let n = poly.len() - 1;
        let poly: Vec<BigInt> = poly.iter().map(|&c| BigInt::from(c)).collect();
        let basis = (0..n)
            .map(|j| (0..n).map(|i| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
        let disc = poly_discriminant(&poly);
        Self::new(name, poly, basis, disc)
    }

    fn check_order(field: &Arc<Self>) -> std::result::Result<(), String> {
        let n = field.degree();
        if !FieldElement::one(field).is_integral_slow() {
            return Err("the integral basis lattice does not contain 1".into());
        }
        let theta = FieldElement::generator(field);
        for k in 0..n {
            if !theta.pow(k as u32).is_integral_slow() {
                return Err(format!("θ^{k} is not in the span of the integral basis"));
            }
        }
        let b: Vec<FieldElement> = (0..n).map(|j| FieldElement::basis_element(field, j)).collect();
        for i in 0..n {
            for j in i..n {
                if !(&b[i] * &b[j]).is_integral_slow() {
                    return Err(format!("basis product b{i}·b{j} is not integral (ring closure fails)"));
                }
            }
        }
        let trace_rows: Vec<Vec<BigRational>> =
            (0..n).map(|i| (0..n).map(|j| (&b[i] * &b[j]).trace()).collect()).collect();
        if trace_rows.iter().flatten().any(|q| !q.is_integer()) {
            return Err("trace form is not integral".into());
        }
        let ints: Vec<Vec<BigInt>> = trace_rows.iter().map(|r| r.iter().map(|q| q.to_integer()).collect()).collect();
        let d = det_bareiss(&ints);
        if d != field.discriminant {
            return Err(format!("discriminant of the integral basis is {d}, configured {}", field.discriminant));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn polynomial(&self) -> &[BigInt] {
        &self.poly
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    /// `[O_K : Z[θ]] = 1 / |det B|` for the basis matrix `B`.
    pub fn index(&self) -> BigInt {
        let n = self.degree();
        let rows: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| self.basis[j][i].clone()).collect()).collect();
        let det = det_bareiss(&rows).abs();
        let q = ratio(num_traits::pow(self.basis_den.clone(), n), det);
        q.to_integer()
    }

    /// Integral basis as `(den, columns)` in power-basis coordinates.
    pub fn basis_matrix(&self) -> (&BigInt, &[Column]) {
        (&self.basis_den, &self.basis)
    }

    /// Integer power-basis coordinates of the product of two integer vectors.
    fn mul_raw(&self, a: &[BigInt], b: &[BigInt]) -> Column {
        let n = self.degree();
        let mut conv = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        let mut out: Column = conv[..n].to_vec();
        for (k, c) in conv.iter().enumerate().skip(n) {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&self.powers[k]) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        out
    }

    /// Multiplication-by-`a` matrix (row-major) on the power basis.
    fn mul_matrix(&self, a: &[BigInt]) -> Vec<Vec<BigInt>> {
        let n = self.degree();
        let cols: Vec<Column> = (0..n)
            .map(|j| {
                let mut e = vec![BigInt::zero(); n];
                e[j] = BigInt::one();
                self.mul_raw(a, &e)
            })
            .collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }
}

/// Integer roots of a monic integer polynomial are divisors of its constant
/// term; this checks them all.
fn rational_root(poly: &[BigInt]) -> std::result::Result<Option<BigInt>, String> {
    let c0 = &poly[0];
    if c0.is_zero() {
        return Ok(Some(BigInt::zero()));
    }
    let f = trial_factor(c0, 1 << 20);
    if !f.cofactor.is_one() {
        return Err("constant term too large to enumerate candidate rational roots".into());
    }
    let mut divisors = vec![BigInt::one()];
    for (p, k) in &f.factors {
        let mut next = Vec::new();
        for d in &divisors {
            let mut m = d.clone();
            for _ in 0..=*k {
                next.push(m.clone());
                m *= *p;
            }
        }
        divisors = next;
    }
    let eval = |x: &BigInt| poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
    for d in divisors {
        for r in [d.clone(), -d] {
            if eval(&r).is_zero() {
                return Ok(Some(r));
            }
        }
    }
    Ok(None)
}

/// Irreducibility over Q from factorization degree patterns modulo small
/// primes: any rational factor of degree `d` forces `d` to be a sum of
/// factor degrees modulo every prime where the reduction is squarefree.
fn certify_irreducible(poly: &[BigInt]) -> std::result::Result<(), String> {
    let n = poly.len() - 1;
    if n >= 64 {
        return Err("degree too large".into());
    }
    let full: u64 = (1u64 << (n + 1)) - 1;
    let target: u64 = 1 | (1u64 << n);
    let mut possible = full;
    for p in primes_up_to(1000) {
        let fp = PolyFp::from_bigints(p, poly);
        if !fp.is_squarefree() {
            continue;
        }
        let mut sums: u64 = 1;
        for (q, k) in fp.factor() {
            for _ in 0..k {
                sums |= sums << q.degree().unwrap();
            }
        }
        possible &= sums & full;
        if possible == target {
            return Ok(());
        }
    }
    Err("irreducibility could not be certified from degree patterns modulo primes below 1000".into())
}

/// Discriminant of a monic polynomial, as `(-1)^{n(n-1)/2} N(f'(θ))`.
pub fn poly_discriminant(poly: &[BigInt]) -> BigInt {
    let n = poly.len() - 1;
    if n == 1 {
        return BigInt::one();
    }
    let basis = (0..n)
        .map(|j| (0..n).map(|i| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect::<Vec<Vec<BigRational>>>();
    // Build a throwaway field without validation to evaluate the norm.
    let tmp = NumberField {
        name: String::new(),
        poly: poly.to_vec(),
        basis_den: BigInt::one(),
        basis: basis
            .iter()
            .map(|b: &Vec<BigRational>| b.iter().map(|q| q.to_integer()).collect())
            .collect(),
        basis_inv_den: BigInt::one(),
        basis_inv: (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect()).collect(),
        powers: Vec::new(),
        discriminant: BigInt::zero(),
    };
    let mut powers: Vec<Column> = Vec::new();
    for k in 0..(2 * n - 1) {
        let mut c = vec![BigInt::zero(); n];
        if k < n {
            c[k] = BigInt::one();
        } else {
            let prev = &powers[k - 1];
            let top: BigInt = prev[n - 1].clone();
            for i in (1..n).rev() {
                c[i] = prev[i - 1].clone();
            }
            for i in 0..n {
                c[i] -= &top * &poly[i];
            }
        }
        powers.push(c);
    }
    let tmp = NumberField { powers, ..tmp };
    let deriv: Vec<BigInt> = (1..=n).map(|i| &poly[i] * BigInt::from(i)).collect();
    let norm = det_bareiss(&tmp.mul_matrix(&deriv));
    if (n * (n - 1) / 2) % 2 == 1 {
        -norm
    } else {
        norm
    }
}

/// An element of a number field, stored as `num / den` in the power basis with
/// `den > 0` and `gcd(num, den) = 1`.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    num: Column,
    den: BigInt,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field) && self.num == other.num && self.den == other.den
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.field.name)?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, "]")
    }
}

pub fn same_field(a: &Arc<NumberField>, b: &Arc<NumberField>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FieldElement {
    /// Builds `num / den` and normalizes.
    pub fn from_parts(field: Arc<NumberField>, num: Column, den: BigInt) -> Self {
        assert_eq!(num.len(), field.degree(), "coordinate length must equal the field degree");
        assert!(!den.is_zero(), "zero denominator");
        let mut e = FieldElement { field, num, den };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for x in self.num.iter_mut() {
                *x = -&*x;
            }
        }
        if self.num.iter().all(|x| x.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        let g = content_with(&self.num, &self.den);
        if !g.is_one() {
            for x in self.num.iter_mut() {
                *x = &*x / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn from_coords(field: &Arc<NumberField>, coords: &[BigRational]) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::InvalidElement(format!(
                "expected {} coordinates, got {}",
                field.degree(),
                coords.len()
            )));
        }
        let den = coords.iter().fold(BigInt::one(), |d, q| lcm(&d, q.denom()));
        let num = coords.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        Ok(Self::from_parts(field.clone(), num, den))
    }

    pub fn from_int(field: &Arc<NumberField>, v: impl Into<BigInt>) -> Self {
        Self::from_rational(field, &BigRational::from_integer(v.into()))
    }

    pub fn from_rational(field: &Arc<NumberField>, q: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = q.numer().clone();
        Self::from_parts(field.clone(), num, q.denom().clone())
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    /// The generator `θ` (for a degree-one field, the root of `x + f_0`).
    pub fn generator(field: &Arc<NumberField>) -> Self {
        let n = field.degree();
        let mut v = vec![BigInt::zero(); n];
        if n > 1 {
            v[1] = BigInt::one();
        } else {
            v[0] = -field.poly[0].clone();
        }
        Self::from_parts(field.clone(), v, BigInt::one())
    }

    /// The `j`-th integral basis element.
    pub fn basis_element(field: &Arc<NumberField>, j: usize) -> Self {
        Self::from_parts(field.clone(), field.basis[j].clone(), field.basis_den.clone())
    }

    /// Element with the given integer coordinates in the integral basis.
    pub fn from_integral_coords(field: &Arc<NumberField>, c: &[BigInt]) -> Self {
        let n = field.degree();
        let mut num = vec![BigInt::zero(); n];
        for (j, cj) in c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            for i in 0..n {
                num[i] += cj * &field.basis[j][i];
            }
        }
        Self::from_parts(field.clone(), num, field.basis_den.clone())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coords(&self) -> Vec<BigRational> {
        self.num.iter().map(|x| ratio(x.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|x| x.is_zero())
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|x| x.is_zero()) {
            Some(BigRational::new_raw(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn is_rational(&self) -> bool {
        self.num[1..].iter().all(|x| x.is_zero())
    }

    /// Coordinates in the integral basis as `(numerators, common denominator)`.
    pub fn integral_coords(&self) -> (Column, BigInt) {
        let f = &self.field;
        let n = f.degree();
        let mut out = vec![BigInt::zero(); n];
        for i in 0..n {
            for j in 0..n {
                if !f.basis_inv[i][j].is_zero() && !self.num[j].is_zero() {
                    out[i] += &f.basis_inv[i][j] * &self.num[j];
                }
            }
        }
        (out, &self.den * &f.basis_inv_den)
    }

    pub fn is_integral(&self) -> bool {
        // Z[θ] ⊆ O_K is checked when the field is built.
        self.den.is_one() || self.is_integral_slow()
    }

    fn is_integral_slow(&self) -> bool {
        let (c, d) = self.integral_coords();
        c.iter().all(|x| x.is_multiple_of(&d))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_sub(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_sub(other, true))
    }

    fn add_sub(&self, other: &Self, sub: bool) -> Self {
        let g = gcd(&self.den, &other.den);
        let fa = &other.den / &g;
        let fb = &self.den / &g;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| if sub { a * &fa - b * &fb } else { a * &fa + b * &fb })
            .collect();
        Self::from_parts(self.field.clone(), num, &self.den * fa)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_rational() || other.is_rational() {
            let (s, r) = if self.is_rational() { (other, self) } else { (self, other) };
            let num = s.num.iter().map(|x| x * &r.num[0]).collect();
            return Ok(Self::from_parts(self.field.clone(), num, &s.den * &r.den));
        }
        let num = self.field.mul_raw(&self.num, &other.num);
        Ok(Self::from_parts(self.field.clone(), num, &self.den * &other.den))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            let mut num = vec![BigInt::zero(); self.num.len()];
            num[0] = self.den.clone();
            return Ok(Self::from_parts(self.field.clone(), num, self.num[0].clone()));
        }
        // Solve (num) · x = den · 1.
        let m = self.field.mul_matrix(&self.num);
        let mut e = vec![BigInt::zero(); self.num.len()];
        e[0] = self.den.clone();
        let (y, d) = solve_bareiss(&m, &e).ok_or(Error::DivisionByZero)?;
        Ok(Self::from_parts(self.field.clone(), y, d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.checked_mul(&other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_parts(self.field.clone(), self.num.iter().map(|x| x * k).collect(), self.den.clone())
    }

    /// Norm to `Q`: determinant of multiplication by the element.
    pub fn norm(&self) -> BigRational {
        let n = self.field.degree();
        if self.is_rational() {
            return ratio(
                num_traits::pow(self.num[0].clone(), n),
                num_traits::pow(self.den.clone(), n),
            );
        }
        let d = det_bareiss(&self.field.mul_matrix(&self.num));
        ratio(d, num_traits::pow(self.den.clone(), n))
    }

    pub fn trace(&self) -> BigRational {
        let m = self.field.mul_matrix(&self.num);
        let t: BigInt = (0..m.len()).map(|i| m[i][i].clone()).sum();
        ratio(t, self.den.clone())
    }

    /// Power-basis coordinates as `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coords().iter().map(format_rational).collect()
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("operands in the same field")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).expect("operands in the same field")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), num: self.num.iter().map(|x| -x).collect(), den: self.den.clone() }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// `K` viewed over a subfield `F` through an embedding, with a relative power
/// basis `1, α, …, α^{s-1}`.
#[derive(Debug, Clone)]
pub struct RelativeExtension {
    pub base: Arc<NumberField>,
    pub top: Arc<NumberField>,
    /// Image in `K` of the generator of `F`.
    pub embedding: FieldElement,
    pub alpha: FieldElement,
    pub s: usize,
    /// Discriminant of the relative basis, an element of `K` in the image of `O_F`.
    pub d: FieldElement,
    /// Solver for the `Q`-basis `α^i · e(θ_F)^j` of `K` (column `i·m + j`).
    rel_rows: Vec<Vec<BigInt>>,
    rel_den: BigInt,
}

impl RelativeExtension {
    pub fn new(
        base: Arc<NumberField>,
        top: Arc<NumberField>,
        embedding: FieldElement,
        alpha: FieldElement,
        s: usize,
        d: FieldElement,
    ) -> Result<Self> {
        let bad = |m: String| Error::InvalidExtension(m);
        if !same_field(embedding.field(), &top) || !same_field(alpha.field(), &top) || !same_field(d.field(), &top) {
            return Err(Error::FieldMismatch);
        }
        let m = base.degree();
        let n = top.degree();
        if s * m != n {
            return Err(bad(format!("s·[F:Q] = {}·{} differs from [K:Q] = {}", s, m, n)));
        }
        // f_F(e) = 0
        let mut acc = FieldElement::zero(&top);
        for c in base.polynomial().iter().rev() {
            acc = &(&acc * &embedding) + &FieldElement::from_int(&top, c.clone());
        }
        if !acc.is_zero() {
            return Err(bad("the embedding image is not a root of F's defining polynomial".into()));
        }
        if !alpha.is_integral() {
            return Err(bad("α is not integral".into()));
        }
        // Columns α^i e^j over a common denominator.
        let mut elems = Vec::with_capacity(n);
        for i in 0..s {
            for j in 0..m {
                elems.push(&alpha.pow(i as u32) * &embedding.pow(j as u32));
            }
        }
        let den = elems.iter().fold(BigInt::one(), |a, e| lcm(&a, e.denominator()));
        let cols: Vec<Column> = elems
            .iter()
            .map(|e| e.numerator().iter().map(|x| x * (&den / e.denominator())).collect())
            .collect();
        let rows: Vec<Vec<BigInt>> = (0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect();
        if det_bareiss(&rows).is_zero() {
            return Err(bad("1, α, …, α^{s-1} is not a basis of K over F".into()));
        }
        let ext = RelativeExtension { base, top, embedding, alpha, s, d, rel_rows: rows, rel_den: den };
        let computed = ext.relative_discriminant()?;
        if computed.is_zero() {
            return Err(bad("relative discriminant vanishes".into()));
        }
        if computed != ext.d {
            return Err(bad(format!("configured D = {:?} but the trace form gives {:?}", ext.d, computed)));
        }
        if !ext.d.is_integral() || ext.to_base(&ext.d).is_none() {
            return Err(bad("D is not in the image of O_F".into()));
        }
        Ok(ext)
    }

    /// Image in `K` of an element of `F`.
    pub fn embed(&self, a: &FieldElement) -> FieldElement {
        assert!(same_field(a.field(), &self.base), "element of the base field expected");
        let mut acc = FieldElement::zero(&self.top);
        for c in a.coords().iter().rev() {
            acc = &(&acc * &self.embedding) + &FieldElement::from_rational(&self.top, c);
        }
        acc
    }

    /// `(a_0, …, a_{s-1})` in `F` with `μ = Σ a_i α^i`.
    pub fn relative_coordinates(&self, mu: &FieldElement) -> Vec<FieldElement> {
        assert!(same_field(mu.field(), &self.top), "element of the top field expected");
        let m = self.base.degree();
        // rel_rows · y = rel_den · μ, where y are the Q-coordinates.
        let b: Vec<BigInt> = mu.numerator().iter().map(|x| x * &self.rel_den).collect();
        let (y, d) = solve_bareiss(&self.rel_rows, &b).expect("relative basis is nonsingular");
        let ycoords: Vec<BigRational> = y.iter().map(|v| ratio(v.clone(), &d * mu.denominator())).collect();
        (0..self.s)
            .map(|i| {
                let c = &ycoords[i * m..(i + 1) * m];
                // Σ_j c_j θ_F^j
                let mut acc = FieldElement::zero(&self.base);
                let th = FieldElement::generator(&self.base);
                for cj in c.iter().rev() {
                    acc = &(&acc * &th) + &FieldElement::from_rational(&self.base, cj);
                }
                acc
            })
            .collect()
    }

    /// The element of `F` whose image is `μ`, if `μ` lies in the image.
    pub fn to_base(&self, mu: &FieldElement) -> Option<FieldElement> {
        let mut a = self.relative_coordinates(mu);
        if a[1..].iter().all(|x| x.is_zero()) {
            Some(a.swap_remove(0))
        } else {
            None
        }
    }

    /// Relative trace `Tr_{K/F}` as an element of `F`.
    pub fn relative_trace(&self, mu: &FieldElement) -> FieldElement {
        let mut t = FieldElement::zero(&self.base);
        for i in 0..self.s {
            let v = mu * &self.alpha.pow(i as u32);
            t = &t + &self.relative_coordinates(&v)[i];
        }
        t
    }

    /// `det(Tr_{K/F}(α^{i+j}))`, embedded in `K`.
    pub fn relative_discriminant(&self) -> Result<FieldElement> {
        let s = self.s;
        let mut m: Vec<Vec<FieldElement>> = (0..s)
            .map(|i| (0..s).map(|j| self.relative_trace(&self.alpha.pow((i + j) as u32))).collect())
            .collect();
        // Gaussian elimination over F.
        let mut det = FieldElement::one(&self.base);
        for k in 0..s {
            let Some(p) = (k..s).find(|&i| !m[i][k].is_zero()) else {
                return Ok(FieldElement::zero(&self.top));
            };
            if p != k {
                m.swap(p, k);
                det = -det;
            }
            det = &det * &m[k][k];
            let inv = m[k][k].inverse()?;
            for i in k + 1..s {
                let f = &m[i][k] * &inv;
                for j in k..s {
                    let v = &m[i][j] - &(&f * &m[k][j]);
                    m[i][j] = v;
                }
            }
        }
        Ok(self.embed(&det))
    }
}
