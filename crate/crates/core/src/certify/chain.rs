//! Integer traces through differences of squares, `4 − s` and `s + 1`, and
//! certificates that an element of `O_F` is built from certified squares.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::square::{build_s_certificate, verify_s_certificate, SCertificate};
use super::witness::{elem_from_json, elem_to_json};
use crate::elliptic::RankOneInstance;
use crate::error::{Error, Result};
use crate::numfield::FieldElement;
use crate::report::CheckReport;

pub const OF_SCHEMA: &str = "dioph/of-certificate/v1";

/// A derivation of an integer from squares `m² ∈ S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Trace {
    /// `(m+1)² − m²`, the odd integer `2m + 1`.
    DiffSquares { m: u64 },
    /// `4 − s` for a difference of squares `s`.
    FourMinus { inner: Box<Trace> },
    /// `s + 1` for `s` from the two rules above.
    PlusOne { inner: Box<Trace> },
}

impl Trace {
    /// Rebuilds the integer, checking each rule is applied at the right level.
    pub fn replay(&self) -> std::result::Result<BigInt, String> {
        match self {
            Trace::DiffSquares { m } => {
                if *m == 0 {
                    return Err("leaf squares must be of positive integers".into());
                }
                let m = BigInt::from(*m);
                let m1 = &m + 1u32;
                Ok(&m1 * &m1 - &m * &m)
            }
            Trace::FourMinus { inner } => match **inner {
                Trace::DiffSquares { .. } => Ok(BigInt::from(4) - inner.replay()?),
                _ => Err("4 - s applies only to differences of squares".into()),
            },
            Trace::PlusOne { inner } => match **inner {
                Trace::PlusOne { .. } => Err("s + 1 applies only once".into()),
                _ => Ok(inner.replay()? + 1u32),
            },
        }
    }

    /// Roots `m` of the leaf squares, in derivation order.
    pub fn leaves(&self) -> Vec<u64> {
        match self {
            Trace::DiffSquares { m } => vec![m + 1, *m],
            Trace::FourMinus { inner } | Trace::PlusOne { inner } => inner.leaves(),
        }
    }
}

/// The canonical trace of `z`.
pub fn trace_integer(z: &BigInt) -> Trace {
    let two = BigInt::from(2);
    if z.is_odd_int() {
        if *z >= BigInt::from(3) {
            let m: BigInt = (z - 1u32) / &two;
            return Trace::DiffSquares { m: m.to_u64().expect("trace fits in u64") };
        }
        // Odd z ≤ 1: 4 − (4 − z) with 4 − z odd and at least 3.
        let s = BigInt::from(4) - z;
        return Trace::FourMinus { inner: Box::new(trace_integer(&s)) };
    }
    Trace::PlusOne { inner: Box::new(trace_integer(&(z - 1u32))) }
}

trait OddInt {
    fn is_odd_int(&self) -> bool;
}

impl OddInt for BigInt {
    fn is_odd_int(&self) -> bool {
        !(self % 2u32).is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfCertificate {
    pub schema: String,
    pub instance: String,
    pub w: Vec<String>,
    /// The Z-basis of `O_F`, embedded in `K`.
    pub basis: Vec<Vec<String>>,
    pub coords: Vec<String>,
    pub traces: Vec<Trace>,
    /// One square certificate per distinct leaf root, keyed by the root.
    pub leaves: BTreeMap<u64, SCertificate>,
}

/// Integer coordinates of `w ∈ O_F` over the configured basis.
pub fn of_coordinates(inst: &RankOneInstance, w: &FieldElement) -> Result<Vec<BigInt>> {
    if !inst.in_of(w) {
        return Err(Error::NotInBaseRing(format!("{:?}", w)));
    }
    let base = inst.ext.to_base(w).expect("checked above");
    let (c, d) = base.integral_coords();
    c.iter()
        .map(|x| {
            if (x % &d).is_zero() {
                Ok(x / &d)
            } else {
                Err(Error::NotInBaseRing(format!("{:?}", w)))
            }
        })
        .collect()
}

/// Builds the chain certificate for `w`. Leaf certificates are taken from
/// and added to `cache`, so they are shared across elements.
pub fn certify_of_element(
    inst: &RankOneInstance,
    w: &FieldElement,
    with_point_leaves: bool,
    k_bound: u64,
    cache: &mut BTreeMap<u64, SCertificate>,
) -> Result<OfCertificate> {
    let coords = of_coordinates(inst, w)?;
    let traces: Vec<Trace> = coords.iter().map(trace_integer).collect();
    let mut leaves = BTreeMap::new();
    if with_point_leaves {
        let roots: BTreeSet<u64> = traces.iter().flat_map(|t| t.leaves()).collect();
        for m in roots {
            if !cache.contains_key(&m) {
                cache.insert(m, build_s_certificate(inst, m, k_bound)?);
            }
            leaves.insert(m, cache[&m].clone());
        }
    }
    Ok(OfCertificate {
        schema: OF_SCHEMA.into(),
        instance: inst.name.clone(),
        w: elem_to_json(w),
        basis: inst.of_basis().iter().map(elem_to_json).collect(),
        coords: coords.iter().map(|c| c.to_string()).collect(),
        traces,
        leaves,
    })
}

/// Verifies the decomposition, every trace, and every attached leaf.
pub fn verify_of_certificate(inst: &RankOneInstance, cert: &OfCertificate) -> CheckReport {
    let mut rep = CheckReport::new("of-certificate");
    rep.check("schema", cert.schema == OF_SCHEMA && cert.instance == inst.name, json!(cert.schema));
    let k = inst.field();
    let basis_ok = cert.basis.len() == inst.of_basis().len()
        && cert.basis.iter().zip(inst.of_basis()).all(|(b, e)| elem_from_json(k, b).is_ok_and(|x| x == e));
    rep.check("basis", basis_ok, json!(null));
    let w = elem_from_json(k, &cert.w);
    let coords: std::result::Result<Vec<BigInt>, _> = cert.coords.iter().map(|c| c.parse::<BigInt>()).collect();
    let (Ok(w), Ok(coords)) = (w, coords) else {
        rep.check("parse", false, json!(null));
        return rep;
    };
    let mut sum = FieldElement::zero(k);
    for (a, b) in coords.iter().zip(inst.of_basis()) {
        sum = &sum + &b.scale(a);
    }
    rep.check("decomposition", coords.len() == cert.basis.len() && sum == w, json!(null));

    let mut needed = BTreeSet::new();
    let mut trace_errors = Vec::new();
    for (i, (t, a)) in cert.traces.iter().zip(&coords).enumerate() {
        match t.replay() {
            Ok(v) if v == *a => needed.extend(t.leaves()),
            Ok(v) => trace_errors.push(json!({ "coordinate": i, "replayed": v.to_string() })),
            Err(e) => trace_errors.push(json!({ "coordinate": i, "error": e })),
        }
    }
    rep.check(
        "trace-replay",
        cert.traces.len() == coords.len() && trace_errors.is_empty(),
        json!({ "errors": trace_errors }),
    );

    if !cert.leaves.is_empty() {
        let have: BTreeSet<u64> = cert.leaves.keys().copied().collect();
        rep.check("leaves-present", needed.is_subset(&have), json!({ "needed": needed, "present": have }));
        for (m, sc) in &cert.leaves {
            let square = BigInt::from(*m) * BigInt::from(*m);
            let mu_ok = elem_from_json(k, &sc.mu).is_ok_and(|mu| mu == FieldElement::from_int(k, square.clone()));
            let v = verify_s_certificate(inst, sc);
            rep.check(
                &format!("leaf-{m}"),
                mu_ok && v.verdict.is_pass(),
                json!({ "square": square.to_string(), "failing": v.failing() }),
            );
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn leaves_of(z: i64) -> BTreeSet<u64> {
        let t = trace_integer(&BigInt::from(z));
        assert_eq!(t.replay().unwrap(), BigInt::from(z));
        t.leaves().into_iter().collect()
    }

    #[test]
    fn canonical_traces() {
        assert_eq!(trace_integer(&BigInt::from(7)), Trace::DiffSquares { m: 3 });
        assert_eq!(leaves_of(7), [4, 3].into());
        assert_eq!(leaves_of(1), [2, 1].into());
        assert_eq!(leaves_of(0), [3, 2].into());
        for z in -200..=200 {
            let t = trace_integer(&BigInt::from(z));
            assert_eq!(t.replay().unwrap(), BigInt::from(z));
            assert!(t.leaves().iter().all(|&m| m >= 1));
        }
    }

    #[test]
    fn malformed_traces_do_not_replay() {
        let bad = Trace::FourMinus { inner: Box::new(Trace::PlusOne { inner: Box::new(Trace::DiffSquares { m: 1 }) }) };
        assert!(bad.replay().is_err());
        assert!(Trace::DiffSquares { m: 0 }.replay().is_err());
        let json = serde_json::to_string(&trace_integer(&BigInt::one())).unwrap();
        assert_eq!(json, r#"{"rule":"four_minus","inner":{"rule":"diff_squares","m":1}}"#);
    }
}
