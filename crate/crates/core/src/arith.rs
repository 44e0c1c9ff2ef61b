//! Integer helpers on top of `num-bigint`.
//!
//! Coordinates of multiples of a point grow quadratically in the multiplier,
//! so the rest of the crate routinely normalizes fractions whose numerators
//! and denominators have 10^5 bits. The binary gcd shipped with `num-integer`
//! is quadratic with a large constant at that size; the Lehmer variants here
//! work a machine word at a time.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Runs the single-precision part of Lehmer's algorithm on the leading 64 bits
/// of a pair. Returns the cofactor matrix, or `None` when no quotient could be
/// determined from the leading words alone.
fn lehmer_cofactors(mut x: u64, mut y: u64) -> Option<[i128; 4]> {
    let (mut a, mut b, mut c, mut d) = (1i128, 0i128, 0i128, 1i128);
    loop {
        let yc = y as i128 + c;
        let yd = y as i128 + d;
        if yc == 0 || yd == 0 {
            break;
        }
        let q = (x as i128 + a).div_euclid(yc);
        let q2 = (x as i128 + b).div_euclid(yd);
        if q != q2 {
            break;
        }
        let t = a - q * c;
        a = c;
        c = t;
        let t = b - q * d;
        b = d;
        d = t;
        let t = x as i128 - q * y as i128;
        x = y;
        y = t as u64;
    }
    if b == 0 {
        None
    } else {
        Some([a, b, c, d])
    }
}

fn leading_words(u: &BigInt, v: &BigInt) -> (u64, u64) {
    let shift = u.bits().saturating_sub(64);
    let x = (u >> shift).to_u64().expect("leading word");
    let y = (v >> shift).to_u64().expect("leading word");
    (x, y)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Nonnegative greatest common divisor.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut u = a.abs();
    let mut v = b.abs();
    if u < v {
        std::mem::swap(&mut u, &mut v);
    }
    while v.bits() > 127 {
        let (x, y) = leading_words(&u, &v);
        match lehmer_cofactors(x, y) {
            None => {
                let r = &u % &v;
                u = v;
                v = r;
            }
            Some([a, b, c, d]) => {
                let nu = &u * a + &v * b;
                let nv = &u * c + &v * d;
                u = nu;
                v = nv;
            }
        }
    }
    if v.is_zero() {
        return u;
    }
    let r = (&u % &v).to_u128().expect("remainder below 2^127");
    let v = v.to_u128().expect("below 2^127");
    BigInt::from(gcd_u128(v, r))
}

/// Extended gcd: returns `(g, s, t)` with `g = s*a + t*b`, `g >= 0`.
pub fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if b.is_zero() {
        return (a.abs(), BigInt::from(a.signum()), BigInt::zero());
    }
    if a.is_zero() {
        return (b.abs(), BigInt::zero(), BigInt::from(b.signum()));
    }
    let a_abs = a.abs();
    let b_abs = b.abs();
    let swapped = a_abs < b_abs;
    let (mut u, mut v) = if swapped {
        (b_abs.clone(), a_abs.clone())
    } else {
        (a_abs.clone(), b_abs.clone())
    };
    // su, sv: cofactors of the first (larger) input.
    let mut su = BigInt::one();
    let mut sv = BigInt::zero();
    while !v.is_zero() {
        if v.bits() > 127 {
            let (x, y) = leading_words(&u, &v);
            if let Some([a, b, c, d]) = lehmer_cofactors(x, y) {
                let nu = &u * a + &v * b;
                let nv = &u * c + &v * d;
                let nsu = &su * a + &sv * b;
                let nsv = &su * c + &sv * d;
                u = nu;
                v = nv;
                su = nsu;
                sv = nsv;
                continue;
            }
        }
        let (q, r) = u.div_rem(&v);
        u = v;
        v = r;
        let nsv = &su - &q * &sv;
        su = sv;
        sv = nsv;
    }
    let (first, second) = if swapped { (&b_abs, &a_abs) } else { (&a_abs, &b_abs) };
    // u = su*first + t*second
    let t = (&u - &su * first) / second;
    let (mut s_a, mut s_b) = if swapped { (t, su) } else { (su, t) };
    if a.is_negative() {
        s_a = -s_a;
    }
    if b.is_negative() {
        s_b = -s_b;
    }
    (u, s_a, s_b)
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a / gcd(a, b) * b).abs()
}

/// Gcd of a slice together with an extra value (zero entries are skipped).
pub fn content_with(values: &[BigInt], extra: &BigInt) -> BigInt {
    let mut g = extra.abs();
    for v in values {
        if g.is_one() {
            break;
        }
        if !v.is_zero() {
            g = gcd(&g, v);
        }
    }
    g
}

/// Reduced rational from numerator and denominator, using the fast gcd.
pub fn ratio(num: BigInt, den: BigInt) -> BigRational {
    assert!(!den.is_zero(), "zero denominator");
    let g = gcd(&num, &den);
    let (mut n, mut d) = if g.is_one() { (num, den) } else { (num / &g, den / &g) };
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    BigRational::new_raw(n, d)
}

/// Multiplicity of the prime `p` in `n` (n nonzero), and the cofactor.
pub fn remove_factor(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut k = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return (k, m);
        }
        m = q;
        k += 1;
    }
}

/// Primes up to `bound` by the sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| p.then_some(i as u64))
        .collect()
}

/// Outcome of trial division: prime factors found and whatever is left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialFactorization {
    pub factors: Vec<(u64, u32)>,
    pub cofactor: BigUint,
}

/// Trial-divides `|n|` by every prime up to `bound`. A cofactor below
/// `bound^2` is necessarily prime and is moved into `factors`.
pub fn trial_factor(n: &BigInt, bound: u64) -> TrialFactorization {
    let mut m = n.magnitude().clone();
    let mut factors = Vec::new();
    if m.is_zero() {
        return TrialFactorization { factors, cofactor: m };
    }
    for p in primes_up_to(bound) {
        if m.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut k = 0;
        while (&m % p).is_zero() {
            m /= p;
            k += 1;
        }
        if k > 0 {
            factors.push((p, k));
        }
    }
    if !m.is_one() {
        let b = BigUint::from(bound);
        if m <= &b * &b {
            if let Some(p) = m.to_u64() {
                factors.push((p, 1));
                factors.sort();
                m = BigUint::one();
            }
        }
    }
    TrialFactorization { factors, cofactor: m }
}

/// `a^p <= b^q` for nonnegative integers, compared exactly.
pub fn pow_le(a: &BigInt, p: u32, b: &BigInt, q: u32) -> bool {
    num_traits::pow(a.clone(), p as usize) <= num_traits::pow(b.clone(), q as usize)
}

/// Parses `"p/q"` or `"p"` into an exact rational. Decimal points and
/// exponents are rejected.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let valid = |t: &str| {
        let digits = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|c| c.is_ascii_digit())
    };
    if !valid(n) || !valid(d) {
        return None;
    }
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(ratio(n, d))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pw(b: u32, e: usize) -> BigInt {
        num_traits::pow(BigInt::from(b), e)
    }

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn gcd_matches_binary_gcd_on_large_inputs() {
        let a = pw(3, 5000) * pw(7, 300);
        let b = pw(3, 200) * pw(7, 4000) + BigInt::from(0);
        assert_eq!(gcd(&a, &b), a.gcd(&b));
        let c = &a + 1;
        assert_eq!(gcd(&c, &b), c.gcd(&b));
    }

    #[test]
    fn xgcd_identity_on_large_inputs() {
        let a: BigInt = pw(5, 3000) + BigInt::from(17);
        let b: BigInt = -(pw(11, 2000) * BigInt::from(6) + BigInt::from(5));
        let (g, s, t) = xgcd(&a, &b);
        assert_eq!(g, a.gcd(&b));
        assert_eq!(&s * &a + &t * &b, g);
    }

    #[test]
    fn trial_factor_small() {
        let f = trial_factor(&big("100"), 100);
        assert_eq!(f.factors, vec![(2, 2), (5, 2)]);
        assert!(f.cofactor.is_one());
        // 10007 is prime and above the bound but below bound^2.
        let f = trial_factor(&big("20014"), 200);
        assert_eq!(f.factors, vec![(2, 1), (10007, 1)]);
        let f = trial_factor(&(big("1000003") * big("1000033")), 100);
        assert!(!f.cofactor.is_one());
    }

    #[test]
    fn parse_rejects_floats() {
        assert!(parse_rational("1.5").is_none());
        assert!(parse_rational("1e3").is_none());
        assert_eq!(format_rational(&parse_rational("-6/4").unwrap()), "-3/2");
        assert_eq!(format_rational(&parse_rational("7").unwrap()), "7");
    }

    proptest! {
        #[test]
        fn gcd_agrees_with_reference(a in any::<i128>(), b in any::<i128>(), k in 0u32..6) {
            let scale = pw(2, (k * 61) as usize) + 3;
            let a = BigInt::from(a) * &scale;
            let b = BigInt::from(b) * &scale + BigInt::from(k);
            prop_assert_eq!(gcd(&a, &b), a.gcd(&b));
            let (g, s, t) = xgcd(&a, &b);
            prop_assert_eq!(&g, &a.gcd(&b));
            prop_assert_eq!(s * &a + t * &b, g);
        }
    }
}
