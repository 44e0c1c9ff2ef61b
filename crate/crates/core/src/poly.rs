//! Polynomials over prime fields `F_p` with `p < 2^63`, and their
//! factorization into irreducibles (distinct-degree, then equal-degree
//! splitting with a deterministic choice of splitting polynomials).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyFp {
    pub p: u64,
    /// Coefficients, constant term first, no trailing zeros.
    pub c: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

impl PolyFp {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyFp { p, c }
    }

    /// Reduction of an integer polynomial.
    pub fn from_bigints(p: u64, coeffs: &[BigInt]) -> Self {
        let pb = BigInt::from(p);
        let c = coeffs
            .iter()
            .map(|x| x.mod_floor(&pb).to_u64().expect("reduced coefficient"))
            .collect();
        Self::new(p, c)
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.c.last().expect("nonzero polynomial")
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = invmod(self.lead(), self.p);
        Self::new(self.p, self.c.iter().map(|&a| mulmod(a, inv, self.p)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = o.c.get(i).copied().unwrap_or(0);
                ((a as u128 + b as u128) % self.p as u128) as u64
            })
            .collect();
        Self::new(self.p, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = o.c.get(i).copied().unwrap_or(0);
                ((a as u128 + self.p as u128 - b as u128) % self.p as u128) as u64
            })
            .collect();
        Self::new(self.p, c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(self.p, vec![]);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        Self::new(self.p, acc.into_iter().map(|x| x as u64).collect())
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let p = self.p;
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        if r.len() <= dd {
            return (Self::new(p, vec![]), self.clone());
        }
        let inv = invmod(d.lead(), p);
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = mulmod(r[k + dd], inv, p);
            q[k] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &dj) in d.c.iter().enumerate() {
                let t = mulmod(coef, dj, p);
                r[k + j] = (r[k + j] + p - t) % p;
            }
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut result = Self::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            result = result.mul(&result).rem(m);
            if e.bit(i) {
                result = result.mul(&base).rem(m);
            }
        }
        result
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mulmod(a, i as u64 % self.p, self.p))
            .collect();
        Self::new(self.p, c)
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &a| ((mulmod(acc, x, self.p) as u128 + a as u128) % self.p as u128) as u64)
    }

    /// Deterministic enumeration of all monic nonconstant polynomials, used to
    /// split equal-degree products: the base-`p` digits of `i` followed by a
    /// leading 1.
    fn nth_candidate(p: u64, mut i: u64) -> Self {
        let mut c = Vec::new();
        while i > 0 {
            c.push(i % p);
            i /= p;
        }
        c.push(1);
        Self::new(p, c)
    }

    /// Splits a squarefree monic product of irreducibles of degree `d`.
    fn equal_degree_split(&self, d: usize, out: &mut Vec<PolyFp>) {
        let n = self.degree().unwrap_or(0);
        if n == d {
            out.push(self.clone());
            return;
        }
        let p = self.p;
        let mut i = 0u64;
        loop {
            let a = Self::nth_candidate(p, i);
            i += 1;
            let b = if p == 2 {
                // Trace map a + a^2 + ... + a^(2^(d-1)).
                let mut t = a.rem(self);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = t.mul(&t).rem(self);
                    acc = acc.add(&t);
                }
                acc
            } else {
                let e = (num_traits::pow(BigUint::from(p), d) - 1u32) / 2u32;
                a.pow_mod(&e, self).sub(&Self::one(p))
            };
            let g = self.gcd(&b);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < n {
                let (h, _) = self.div_rem(&g);
                g.equal_degree_split(d, out);
                h.monic().equal_degree_split(d, out);
                return;
            }
        }
    }

    /// Complete factorization of a nonzero polynomial into monic irreducibles
    /// with multiplicities, sorted by (degree, coefficients).
    pub fn factor(&self) -> Vec<(PolyFp, u32)> {
        assert!(!self.is_zero(), "factoring the zero polynomial");
        let p = self.p;
        let f = self.monic();
        let mut rest = f.clone();
        let mut irreducibles = Vec::new();
        let x = Self::x(p);
        let pb = BigUint::from(p);
        let mut xq = x.clone();
        let mut d = 0;
        while rest.degree().unwrap_or(0) > 0 {
            d += 1;
            if 2 * d > rest.degree().unwrap() {
                irreducibles.push((rest.clone(), rest.degree().unwrap()));
                break;
            }
            xq = xq.pow_mod(&pb, &rest);
            let g = rest.gcd(&xq.sub(&x));
            if g.degree().unwrap_or(0) > 0 {
                // Remove every factor of degree d, including repeated ones.
                loop {
                    let h = rest.gcd(&g);
                    if h.degree().unwrap_or(0) == 0 {
                        break;
                    }
                    rest = rest.div_rem(&h).0;
                }
                irreducibles.push((g, d));
                xq = xq.rem(&rest);
            }
        }
        let mut factors = Vec::new();
        for (g, d) in irreducibles {
            let mut parts = Vec::new();
            g.equal_degree_split(d, &mut parts);
            for q in parts {
                let mut k = 0;
                let mut m = f.clone();
                loop {
                    let (quo, r) = m.div_rem(&q);
                    if !r.is_zero() {
                        break;
                    }
                    m = quo;
                    k += 1;
                }
                factors.push((q, k));
            }
        }
        factors.sort_by(|(a, _), (b, _)| (a.c.len(), &a.c).cmp(&(b.c.len(), &b.c)));
        factors
    }
}

/// Lifts coefficients in `[0, p)` to integers.
pub fn lift(poly: &PolyFp) -> Vec<BigInt> {
    poly.c.iter().map(|&a| BigInt::from(a)).collect()
}

/// Product of `(poly, multiplicity)` pairs, for checks.
pub fn product(p: u64, parts: &[(PolyFp, u32)]) -> PolyFp {
    let mut acc = PolyFp::one(p);
    for (q, k) in parts {
        for _ in 0..*k {
            acc = acc.mul(q);
        }
    }
    acc
}

/// Whether `p` is prime, by trial division (inputs here are small).
pub fn is_small_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn x2_plus_1_mod_small_primes() {
        let f = |p| PolyFp::new(p, vec![1, 0, 1]).factor();
        // ramified at 2, split at 5, inert at 3
        assert_eq!(f(2), vec![(PolyFp::new(2, vec![1, 1]), 2)]);
        assert_eq!(f(3), vec![(PolyFp::new(3, vec![1, 0, 1]), 1)]);
        assert_eq!(f(5), vec![(PolyFp::new(5, vec![2, 1]), 1), (PolyFp::new(5, vec![3, 1]), 1)]);
    }

    #[test]
    fn mixed_degrees_and_multiplicities() {
        // (x+1)^3 (x^2+x+1) (x^3+x+1) over F_2
        let p = 2;
        let a = PolyFp::new(p, vec![1, 1]);
        let b = PolyFp::new(p, vec![1, 1, 1]);
        let c = PolyFp::new(p, vec![1, 1, 0, 1]);
        let f = a.mul(&a).mul(&a).mul(&b).mul(&c);
        let fac = f.factor();
        assert_eq!(fac, vec![(a, 3), (b, 1), (c, 1)]);
    }

    #[test]
    fn large_prime_split() {
        let p = 1_000_000_007u64;
        let r1 = PolyFp::new(p, vec![p - 12345, 1]);
        let r2 = PolyFp::new(p, vec![p - 999, 1]);
        let f = r1.mul(&r2);
        assert_eq!(f.factor().len(), 2);
    }

    proptest! {
        #[test]
        fn factorization_reconstructs(coeffs in proptest::collection::vec(0u64..7, 1..8), pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            let mut c = coeffs.clone();
            c.push(1);
            let f = PolyFp::new(p, c);
            let fac = f.factor();
            prop_assert_eq!(product(p, &fac), f.monic());
            for (q, _) in &fac {
                // each factor is irreducible: exactly one factor when factored again
                let again = q.factor();
                prop_assert_eq!(again.len(), 1);
                prop_assert_eq!(again[0].1, 1);
            }
        }
    }
}
