//! Integer linear algebra: column Hermite normal form, fraction-free
//! elimination, and full-rank rational lattices `(1/d)·L` in canonical form.
//!
//! Lattices are stored by columns. A matrix `cols` has `cols[j][i]` as the
//! entry in row `i` of column `j`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{content_with, gcd, lcm, ratio, xgcd};

pub type Column = Vec<BigInt>;

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    // dst -= q * src
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

/// Column operation on the pair (a, b): replaces them by
/// (s*a + t*b, (b_r/g)*a - (a_r/g)*b), clearing row `r` in the second.
fn combine(a: &mut Column, b: &mut Column, s: &BigInt, t: &BigInt, ar: &BigInt, br: &BigInt, g: &BigInt) {
    let u = br / g;
    let v = ar / g;
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let nx = s * &*x + t * &*y;
        let ny = &u * &*x - &v * &*y;
        *x = nx;
        *y = ny;
    }
}

/// Upper-triangular column HNF of the lattice spanned by `cols` in `Z^n`.
///
/// Returns `None` if the columns do not span a rank-`n` lattice. The result
/// has positive diagonal and entries to the right of each pivot reduced into
/// `[0, h_ii)`.
pub fn hnf(cols: &[Column], n: usize) -> Option<Vec<Column>> {
    hnf_impl(cols, n, false).map(|(h, _)| h)
}

/// Like [`hnf`], but also returns, for every output column, its integer
/// coefficients with respect to the input columns.
pub fn hnf_with_transform(cols: &[Column], n: usize) -> Option<(Vec<Column>, Vec<Column>)> {
    hnf_impl(cols, n, true)
}

fn hnf_impl(cols: &[Column], n: usize, track: bool) -> Option<(Vec<Column>, Vec<Column>)> {
    let m = cols.len();
    let mut work: Vec<Column> = cols.iter().filter(|c| c.len() == n).cloned().collect();
    if work.len() != m {
        return None;
    }
    let mut combos: Vec<Column> = if track {
        (0..m)
            .map(|j| (0..m).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    } else {
        Vec::new()
    };
    let mut pivots: Vec<Option<(Column, Column)>> = vec![None; n];
    for row in (0..n).rev() {
        // Gather the column with a nonzero entry of smallest size as pivot.
        let mut pivot: Option<usize> = None;
        for j in 0..work.len() {
            if !work[j][row].is_zero() {
                pivot = match pivot {
                    Some(p) if work[p][row].bits() <= work[j][row].bits() => Some(p),
                    _ => Some(j),
                };
            }
        }
        let p = pivot?;
        for j in 0..work.len() {
            if j == p || work[j][row].is_zero() {
                continue;
            }
            let ar = work[p][row].clone();
            let br = work[j][row].clone();
            let (g, s, t) = xgcd(&ar, &br);
            let (lo, hi) = (p.min(j), p.max(j));
            let (left, right) = work.split_at_mut(hi);
            let (cp, cj) = if p < j { (&mut left[lo], &mut right[0]) } else { (&mut right[0], &mut left[lo]) };
            combine(cp, cj, &s, &t, &ar, &br, &g);
            if track {
                let (left, right) = combos.split_at_mut(hi);
                let (tp, tj) = if p < j { (&mut left[lo], &mut right[0]) } else { (&mut right[0], &mut left[lo]) };
                combine(tp, tj, &s, &t, &ar, &br, &g);
            }
        }
        let mut col = work.swap_remove(p);
        let mut combo = if track { combos.swap_remove(p) } else { Vec::new() };
        if col[row].is_negative() {
            col.iter_mut().for_each(|x| *x = -&*x);
            combo.iter_mut().for_each(|x| *x = -&*x);
        }
        pivots[row] = Some((col, combo));
    }
    let mut h: Vec<Column> = Vec::with_capacity(n);
    let mut t: Vec<Column> = Vec::with_capacity(n);
    for p in pivots {
        let (c, k) = p?;
        h.push(c);
        t.push(k);
    }
    // Reduce entries to the right of each pivot.
    for i in (0..n).rev() {
        for j in i + 1..n {
            let q = h[j][i].div_floor(&h[i][i]);
            if q.is_zero() {
                continue;
            }
            let (left, right) = h.split_at_mut(j);
            axpy(&mut right[0], &q, &left[i]);
            if track {
                let (left, right) = t.split_at_mut(j);
                axpy(&mut right[0], &q, &left[i]);
            }
        }
    }
    Some((h, t))
}

/// Solves `H v = y` for upper-triangular `H` (by columns) over the integers.
pub fn solve_upper_integral(h: &[Column], y: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = h.len();
    let mut v = vec![BigInt::zero(); n];
    for i in (0..n).rev() {
        let mut acc = y[i].clone();
        for j in i + 1..n {
            if !h[j][i].is_zero() && !v[j].is_zero() {
                acc -= &h[j][i] * &v[j];
            }
        }
        let (q, r) = acc.div_rem(&h[i][i]);
        if !r.is_zero() {
            return None;
        }
        v[i] = q;
    }
    Some(v)
}

/// Determinant of a square integer matrix (row-major) by Bareiss elimination.
pub fn det_bareiss(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Solves `A x = b` for square integer `A` (row-major). Returns `(y, d)`
/// with `x = y / d`, where `d` is the determinant up to sign, or `None` if
/// `A` is singular.
pub fn solve_bareiss(rows: &[Vec<BigInt>], b: &[BigInt]) -> Option<(Vec<BigInt>, BigInt)> {
    let n = rows.len();
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(p, k);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    let mut y = vec![BigInt::zero(); n];
    for i in (0..n).rev() {
        let mut acc = &det * &a[i][n];
        for j in i + 1..n {
            if !a[i][j].is_zero() {
                acc -= &a[i][j] * &y[j];
            }
        }
        y[i] = acc / &a[i][i];
    }
    Some((y, det))
}

/// A full-rank lattice `(1/den)·H·Z^n` in canonical form: `H` is the column
/// HNF and `den` is the smallest positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatLattice {
    pub den: BigInt,
    pub hnf: Vec<Column>,
}

impl RatLattice {
    pub fn dim(&self) -> usize {
        self.hnf.len()
    }

    /// Lattice spanned by `cols / den`. `None` unless the rank is full.
    pub fn from_columns(den: &BigInt, cols: &[Column], n: usize) -> Option<Self> {
        assert!(!den.is_zero(), "zero denominator");
        let h = hnf(cols, n)?;
        Some(Self::canonical(den.abs(), h))
    }

    fn canonical(den: BigInt, mut h: Vec<Column>) -> Self {
        let mut g = den.clone();
        for c in &h {
            g = content_with(c, &g);
            if g.is_one() {
                break;
            }
        }
        if g.is_one() {
            return RatLattice { den, hnf: h };
        }
        for c in h.iter_mut() {
            for x in c.iter_mut() {
                *x = &*x / &g;
            }
        }
        RatLattice { den: den / g, hnf: h }
    }

    /// Columns rescaled to the common denominator `d` (a multiple of `den`).
    fn scaled_columns(&self, d: &BigInt) -> Vec<Column> {
        let f = d / &self.den;
        self.hnf
            .iter()
            .map(|c| c.iter().map(|x| x * &f).collect())
            .collect()
    }

    pub fn sum(&self, other: &Self) -> Self {
        let d = lcm(&self.den, &other.den);
        let mut cols = self.scaled_columns(&d);
        cols.extend(other.scaled_columns(&d));
        Self::from_columns(&d, &cols, self.dim()).expect("sum of full-rank lattices")
    }

    /// Whether `v / vden` lies in the lattice.
    pub fn contains(&self, v: &[BigInt], vden: &BigInt) -> bool {
        // den * v / vden must be an integer vector in H Z^n.
        let mut w = Vec::with_capacity(v.len());
        for x in v {
            let (q, r) = (x * &self.den).div_rem(vden);
            if !r.is_zero() {
                return false;
            }
            w.push(q);
        }
        solve_upper_integral(&self.hnf, &w).is_some()
    }

    /// Whether `other ⊆ self`.
    pub fn contains_lattice(&self, other: &Self) -> bool {
        other.hnf.iter().all(|c| self.contains(c, &other.den))
    }

    /// Covolume `det(H) / den^n`.
    pub fn covolume(&self) -> BigRational {
        let mut d = BigInt::one();
        for (i, c) in self.hnf.iter().enumerate() {
            d *= &c[i];
        }
        ratio(d, num_traits::pow(self.den.clone(), self.dim()))
    }

    /// Dual lattice `{x : x·y ∈ Z for all y in self}` for the standard pairing.
    pub fn dual(&self) -> Self {
        let n = self.dim();
        let h = &self.hnf;
        let mut det = BigInt::one();
        for (i, c) in h.iter().enumerate() {
            det *= &c[i];
        }
        // Solve H^T x_k = det * e_k by forward substitution; H^T is lower
        // triangular with (H^T)[i][j] = h[i][j] (column i, row j).
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let mut x = vec![BigInt::zero(); n];
            for i in 0..n {
                let mut acc = if i == k { det.clone() } else { BigInt::zero() };
                for j in 0..i {
                    if !h[i][j].is_zero() && !x[j].is_zero() {
                        acc -= &h[i][j] * &x[j];
                    }
                }
                x[i] = acc / &h[i][i];
            }
            for v in x.iter_mut() {
                *v *= &self.den;
            }
            cols.push(x);
        }
        Self::from_columns(&det, &cols, n).expect("dual of a full-rank lattice")
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.dual().sum(&other.dual()).dual()
    }
}

/// Greatest common divisor of all entries of a column (zero for a zero column).
pub fn column_content(c: &[BigInt]) -> BigInt {
    c.iter().fold(BigInt::zero(), |g, x| gcd(&g, x))
}
