//! Witnesses for ideal divisibility and for the three diophantine predicates
//! on denominators and numerators.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{lcm, parse_rational};
use crate::error::{Error, Result};
use crate::matrix::{hnf_with_transform, solve_upper_integral, Column};
use crate::numfield::{FieldElement, NumberField};

pub fn elem_to_json(x: &FieldElement) -> Vec<String> {
    x.to_strings()
}

pub fn elem_from_json(field: &Arc<NumberField>, s: &[String]) -> Result<FieldElement> {
    let coords = s
        .iter()
        .map(|c| parse_rational(c).ok_or_else(|| Error::Certificate(format!("not an exact rational: '{c}'"))))
        .collect::<Result<Vec<_>>>()?;
    FieldElement::from_coords(field, &coords)
}

/// `y_j = Σ_i c_ij x_i` with every `c_ij ∈ O_K`; `coeffs[j][i] = c_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisibilityWitness {
    pub xs: Vec<FieldElement>,
    pub ys: Vec<FieldElement>,
    pub coeffs: Vec<Vec<FieldElement>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisibilityWitnessJson {
    pub xs: Vec<Vec<String>>,
    pub ys: Vec<Vec<String>>,
    pub coeffs: Vec<Vec<Vec<String>>>,
}

impl DivisibilityWitness {
    /// Replays every identity and integrality claim.
    pub fn verify(&self) -> bool {
        if self.coeffs.len() != self.ys.len() {
            return false;
        }
        self.ys.iter().zip(&self.coeffs).all(|(y, row)| {
            if row.len() != self.xs.len() || !row.iter().all(|c| c.is_integral()) {
                return false;
            }
            let mut acc = FieldElement::zero(y.field());
            for (c, x) in row.iter().zip(&self.xs) {
                acc = &acc + &(c * x);
            }
            acc == *y
        })
    }

    pub fn to_json(&self) -> DivisibilityWitnessJson {
        DivisibilityWitnessJson {
            xs: self.xs.iter().map(elem_to_json).collect(),
            ys: self.ys.iter().map(elem_to_json).collect(),
            coeffs: self.coeffs.iter().map(|r| r.iter().map(elem_to_json).collect()).collect(),
        }
    }

    pub fn from_json(field: &Arc<NumberField>, j: &DivisibilityWitnessJson) -> Result<Self> {
        let conv = |v: &Vec<Vec<String>>| v.iter().map(|e| elem_from_json(field, e)).collect::<Result<Vec<_>>>();
        Ok(DivisibilityWitness {
            xs: conv(&j.xs)?,
            ys: conv(&j.ys)?,
            coeffs: j.coeffs.iter().map(conv).collect::<Result<Vec<_>>>()?,
        })
    }
}

/// Expresses each `y_j` as an `O_K`-combination of the `x_i` by solving in the
/// Z-module spanned by `β_b·x_i`.
pub fn divisibility_witness(xs: &[FieldElement], ys: &[FieldElement]) -> Result<DivisibilityWitness> {
    let Some(first) = xs.iter().find(|x| !x.is_zero()) else {
        return Err(Error::Domain("the generators xs are all zero".into()));
    };
    let field = first.field().clone();
    let n = field.degree();
    let basis: Vec<FieldElement> = (0..n).map(|b| FieldElement::basis_element(&field, b)).collect();
    let gens: Vec<(Column, BigInt)> =
        xs.iter().flat_map(|x| basis.iter().map(move |b| (b * x).integral_coords())).collect();
    let targets: Vec<(Column, BigInt)> = ys.iter().map(|y| y.integral_coords()).collect();
    let den = gens.iter().chain(&targets).fold(BigInt::one(), |d, (_, e)| lcm(&d, e));
    let scale = |(c, e): &(Column, BigInt)| -> Column {
        let f = &den / e;
        c.iter().map(|v| v * &f).collect()
    };
    let cols: Vec<Column> = gens.iter().map(scale).collect();
    let (h, combos) = hnf_with_transform(&cols, n).ok_or_else(|| Error::Domain("generators do not span".into()))?;
    let mut coeffs = Vec::with_capacity(ys.len());
    for t in &targets {
        let u = solve_upper_integral(&h, &scale(t)).ok_or(Error::NoWitness)?;
        // Coefficients over the generator list β_b·x_i.
        let mut lam = vec![BigInt::from(0); cols.len()];
        for (uj, combo) in u.iter().zip(&combos) {
            for (l, c) in lam.iter_mut().zip(combo) {
                *l += uj * c;
            }
        }
        let row: Vec<FieldElement> =
            (0..xs.len()).map(|i| FieldElement::from_integral_coords(&field, &lam[i * n..(i + 1) * n])).collect();
        coeffs.push(row);
    }
    let w = DivisibilityWitness { xs: xs.to_vec(), ys: ys.to_vec(), coeffs };
    debug_assert!(w.verify());
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredicateKind {
    /// `den(t) | den(u)`
    DenDivDen,
    /// `den(t) | num(u)`
    DenDivNum,
    /// `t | den(u)`
    EltDivDen,
}

/// A replayable witness for one predicate: the auxiliary `v` where the
/// reduction needs one, and the underlying ideal divisibility.
#[derive(Debug, Clone, PartialEq)]
pub struct PredicateWitness {
    pub kind: PredicateKind,
    pub t: FieldElement,
    pub u: FieldElement,
    pub v: Option<FieldElement>,
    pub zero_branch: bool,
    pub divisibility: Option<DivisibilityWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredicateWitnessJson {
    pub kind: PredicateKind,
    pub t: Vec<String>,
    pub u: Vec<String>,
    pub v: Option<Vec<String>>,
    pub zero_branch: bool,
    pub divisibility: Option<DivisibilityWitnessJson>,
}

/// `den(a) | den(b)` holds iff `(b, 1)` divides `(a, 1)`.
fn den_div_den(a: &FieldElement, b: &FieldElement) -> Result<DivisibilityWitness> {
    let one = FieldElement::one(a.field());
    divisibility_witness(&[b.clone(), one.clone()], &[a.clone(), one])
}

pub fn predicate_witness(kind: PredicateKind, t: &FieldElement, u: &FieldElement) -> Result<PredicateWitness> {
    let false_err = |what: &str| Error::PredicateFalse(what.to_string());
    let w = |v: Option<FieldElement>, zero_branch, d: Option<DivisibilityWitness>| PredicateWitness {
        kind,
        t: t.clone(),
        u: u.clone(),
        v,
        zero_branch,
        divisibility: d,
    };
    match kind {
        PredicateKind::DenDivDen => {
            if t.is_zero() || u.is_zero() {
                return Err(Error::Domain("den(t) | den(u) needs t, u ≠ 0".into()));
            }
            let d = den_div_den(t, u).map_err(|_| false_err("den(t) does not divide den(u)"))?;
            Ok(w(None, false, Some(d)))
        }
        PredicateKind::DenDivNum => {
            if u.is_zero() {
                return Ok(w(None, true, None));
            }
            let v = u.inverse()?;
            if t.is_zero() {
                return Err(Error::Domain("den(t) | num(u) needs t ≠ 0 unless u = 0".into()));
            }
            let d = den_div_den(t, &v).map_err(|_| false_err("den(t) does not divide num(u)"))?;
            Ok(w(Some(v), false, Some(d)))
        }
        PredicateKind::EltDivDen => {
            if !t.is_integral() || u.is_zero() {
                return Err(Error::Domain("t | den(u) needs integral t and u ≠ 0".into()));
            }
            if t.is_zero() {
                return Err(false_err("0 divides no denominator ideal"));
            }
            let v = t.inverse()?;
            let d = den_div_den(&v, u).map_err(|_| false_err("t does not divide den(u)"))?;
            Ok(w(Some(v), false, Some(d)))
        }
    }
}

impl PredicateWitness {
    /// Replays the reduction; `Err` carries the first broken step.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let one = FieldElement::one(self.t.field());
        let expect_div = |a: &FieldElement, b: &FieldElement| -> std::result::Result<(), String> {
            let d = self.divisibility.as_ref().ok_or("missing divisibility witness")?;
            if d.xs != [b.clone(), one.clone()] || d.ys != [a.clone(), one.clone()] {
                return Err("divisibility witness is about different elements".into());
            }
            if !d.verify() {
                return Err("divisibility identities do not replay".into());
            }
            Ok(())
        };
        match self.kind {
            PredicateKind::DenDivDen => {
                if self.t.is_zero() || self.u.is_zero() {
                    return Err("t and u must be nonzero".into());
                }
                expect_div(&self.t, &self.u)
            }
            PredicateKind::DenDivNum => {
                if self.zero_branch {
                    return if self.u.is_zero() { Ok(()) } else { Err("zero branch claimed but u ≠ 0".into()) };
                }
                let v = self.v.as_ref().ok_or("missing auxiliary v")?;
                if !(&self.u * v).is_one() {
                    return Err("u·v ≠ 1".into());
                }
                expect_div(&self.t, v)
            }
            PredicateKind::EltDivDen => {
                if !self.t.is_integral() || self.u.is_zero() {
                    return Err("t must be integral and u nonzero".into());
                }
                let v = self.v.as_ref().ok_or("missing auxiliary v")?;
                if !(&self.t * v).is_one() {
                    return Err("t·v ≠ 1".into());
                }
                expect_div(v, &self.u)
            }
        }
    }

    pub fn to_json(&self) -> PredicateWitnessJson {
        PredicateWitnessJson {
            kind: self.kind,
            t: elem_to_json(&self.t),
            u: elem_to_json(&self.u),
            v: self.v.as_ref().map(elem_to_json),
            zero_branch: self.zero_branch,
            divisibility: self.divisibility.as_ref().map(|d| d.to_json()),
        }
    }

    pub fn from_json(field: &Arc<NumberField>, j: &PredicateWitnessJson) -> Result<Self> {
        Ok(PredicateWitness {
            kind: j.kind,
            t: elem_from_json(field, &j.t)?,
            u: elem_from_json(field, &j.u)?,
            v: j.v.as_ref().map(|v| elem_from_json(field, v)).transpose()?,
            zero_branch: j.zero_branch,
            divisibility: j.divisibility.as_ref().map(|d| DivisibilityWitness::from_json(field, d)).transpose()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(a: i64, b: i64) -> FieldElement {
        FieldElement::from_rational(&NumberField::rationals(), &BigRational::new(a.into(), b.into()))
    }

    #[test]
    fn integer_witnesses() {
        let w = divisibility_witness(&[q(2, 1), q(3, 1)], &[q(1, 1)]).unwrap();
        assert!(w.verify());
        assert_eq!(w.coeffs[0], vec![q(-1, 1), q(1, 1)]);
        let w = divisibility_witness(&[q(1, 1)], &[q(5, 1)]).unwrap();
        assert_eq!(w.coeffs[0], vec![q(5, 1)]);
        assert!(matches!(divisibility_witness(&[q(4, 1)], &[q(2, 1)]), Err(Error::NoWitness)));
        assert!(divisibility_witness(&[q(0, 1)], &[q(2, 1)]).is_err());
    }

    #[test]
    fn predicates() {
        let w = predicate_witness(PredicateKind::DenDivDen, &q(1, 2), &q(1, 4)).unwrap();
        assert!(w.verify().is_ok());
        let w = predicate_witness(PredicateKind::DenDivNum, &q(1, 2), &q(0, 1)).unwrap();
        assert!(w.zero_branch && w.verify().is_ok());
        let w = predicate_witness(PredicateKind::DenDivNum, &q(1, 2), &q(6, 5)).unwrap();
        assert!(w.verify().is_ok());
        assert!(matches!(
            predicate_witness(PredicateKind::DenDivNum, &q(1, 4), &q(6, 5)),
            Err(Error::PredicateFalse(_))
        ));
        assert!(matches!(
            predicate_witness(PredicateKind::EltDivDen, &q(3, 1), &q(1, 2)),
            Err(Error::PredicateFalse(_))
        ));
        let w = predicate_witness(PredicateKind::EltDivDen, &q(3, 1), &q(1, 6)).unwrap();
        assert!(w.verify().is_ok());
        let back = PredicateWitness::from_json(&NumberField::rationals(), &w.to_json()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn tampered_witness_fails() {
        let mut w = predicate_witness(PredicateKind::DenDivDen, &q(1, 2), &q(1, 4)).unwrap();
        let d = w.divisibility.as_mut().unwrap();
        d.coeffs[0][0] = &d.coeffs[0][0] + &q(1, 1);
        assert!(w.verify().is_err());
    }
}
