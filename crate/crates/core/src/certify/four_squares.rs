//! Sums of four squares, the classical diophantine definition of `a ≥ 0`.

use crate::error::{Error, Result};

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn search(rem: u64, parts: usize, cap: u64, out: &mut Vec<u64>) -> bool {
    if parts == 0 {
        return rem == 0;
    }
    let mut x = isqrt(rem).min(cap);
    loop {
        // The remaining parts can contribute at most (parts - 1)·x².
        if rem - x * x > (parts as u64 - 1) * x * x {
            return false;
        }
        out.push(x);
        if search(rem - x * x, parts - 1, x, out) {
            return true;
        }
        out.pop();
        if x == 0 {
            return false;
        }
        x -= 1;
    }
}

/// `(x₁, x₂, x₃, x₄)` with `x₁ ≥ x₂ ≥ x₃ ≥ x₄ ≥ 0` and `Σ xᵢ² = a`, the
/// lexicographically largest such tuple.
pub fn four_squares_witness(a: i64) -> Result<[i64; 4]> {
    if a < 0 {
        return Err(Error::NoWitness);
    }
    let mut out = Vec::with_capacity(4);
    if !search(a as u64, 4, u64::MAX, &mut out) {
        return Err(Error::NoWitness);
    }
    Ok([out[0] as i64, out[1] as i64, out[2] as i64, out[3] as i64])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(four_squares_witness(0).unwrap(), [0, 0, 0, 0]);
        assert_eq!(four_squares_witness(7).unwrap(), [2, 1, 1, 1]);
        assert!(matches!(four_squares_witness(-1), Err(Error::NoWitness)));
        for a in 0..=300 {
            let w = four_squares_witness(a).unwrap();
            assert_eq!(w.iter().map(|x| x * x).sum::<i64>(), a);
        }
    }
}
