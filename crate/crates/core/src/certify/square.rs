//! Membership certificates for squares `m²`, their verifier, and the descent
//! that recovers `μ ∈ O_F` from an accepted certificate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::witness::{elem_from_json, elem_to_json, predicate_witness, PredicateKind, PredicateWitness, PredicateWitnessJson};
use crate::arith::{format_rational, parse_rational};
use crate::elliptic::{den_sqrt_via_point, CurvePoint, RankOneInstance, RankStatus};
use crate::error::{Error, Result};
use crate::ideals::{den_ideal, num_ideal, FractionalIdeal, IdealJson};
use crate::lemmas::{check_multiple_divisibility, find_point_with_denominator};
use crate::numfield::FieldElement;
use crate::report::CheckReport;

pub const S_SCHEMA: &str = "dioph/s-certificate/v1";

/// A point recorded as a multiple of `r·P₁` together with its coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub multiplier: i64,
    pub x: Vec<String>,
    pub y: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub c: String,
    pub c_prime: String,
    pub ell: u64,
}

/// Values entering `c′·N(den(t))^{1/2} > N(den(t₀))^c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllCheck {
    pub norm_sqrt_den_t: String,
    pub norm_den_t0: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SCertificate {
    pub schema: String,
    pub instance: String,
    pub mu: Vec<String>,
    pub p0: PointRecord,
    pub p: PointRecord,
    pub p_prime: PointRecord,
    pub t0: Vec<String>,
    pub t: Vec<String>,
    pub t_prime: Vec<String>,
    /// `(μ+1)⋯(μ+n) | den(t₀)`
    pub condition3: PredicateWitnessJson,
    /// `den(t) | den(t′)`
    pub condition4: PredicateWitnessJson,
    /// `den(t) | num((t/t′ − μ)²)`
    pub condition5: PredicateWitnessJson,
    /// `J` with `J² = den(t)`, from the point route.
    pub den_t_sqrt: IdealJson,
    pub constants: Constants,
    pub ell_check: EllCheck,
}

fn record(k: i64, p: &CurvePoint) -> Result<PointRecord> {
    match p {
        CurvePoint::Affine { x, y } => Ok(PointRecord { multiplier: k, x: elem_to_json(x), y: elem_to_json(y) }),
        CurvePoint::Infinity => Err(Error::Certificate(format!("multiple {k} of rP1 is the point at infinity"))),
    }
}

/// `(μ+1)(μ+2)⋯(μ+n)`.
pub fn shifted_product(mu: &FieldElement, n: usize) -> FieldElement {
    let k = mu.field();
    let mut prod = FieldElement::one(k);
    for i in 1..=n {
        prod = &prod * &(mu + &FieldElement::from_int(k, i as i64));
    }
    prod
}

/// `c′·N(J) > N(den t₀)^c`, compared as `(c′_num·N(J))^q > c′_den^q·N(den t₀)^p`.
fn ell_inequality(c: &BigRational, c_prime: &BigRational, norm_j: &BigInt, norm_t0: &BigInt) -> bool {
    let (p, q) = (c.numer().to_usize().unwrap_or(usize::MAX), c.denom().to_usize().unwrap_or(usize::MAX));
    if p == usize::MAX || q == usize::MAX || c_prime.is_negative() {
        return false;
    }
    let lhs = num_traits::pow(c_prime.numer() * norm_j, q);
    let rhs = num_traits::pow(c_prime.denom().clone(), q) * num_traits::pow(norm_t0.clone(), p);
    lhs > rhs
}

fn int_norm(i: &FractionalIdeal) -> BigInt {
    i.norm().to_integer()
}

/// Refuses instances whose rank data is unattested or whose divisibility
/// table disagrees with `k | k′`.
pub fn certification_gate(inst: &RankOneInstance) -> Result<()> {
    if !matches!(inst.rank, RankStatus::Attested { rank_f: 1, rank_k: 1 }) {
        return Err(Error::Certificate("certificates need attested rank one over F and K".into()));
    }
    let table = check_multiple_divisibility(inst, inst.params.k_max);
    if !table.verdict.is_pass() {
        return Err(Error::Certificate("the divisibility table contradicts k | k'; refusing to certify".into()));
    }
    Ok(())
}

/// Builds the certificate that `m² ∈ S`. The caller is expected to have run
/// [`certification_gate`].
pub fn build_s_certificate(inst: &RankOneInstance, m: u64, k_bound: u64) -> Result<SCertificate> {
    if m == 0 {
        return Err(Error::Domain("m must be positive".into()));
    }
    let k = inst.field();
    let n = inst.degree();
    let mi = m as i64;
    let mu = FieldElement::from_int(k, mi * mi);
    let prod = shifted_product(&mu, n);
    let target = FractionalIdeal::principal(&prod);
    let (k0, p0) = find_point_with_denominator(inst, &target, k_bound)?;
    let ell = inst.ell as i64;
    let p = inst.curve.scalar_mul(ell, &p0);
    let pp = inst.curve.scalar_mul(mi, &p);
    let k0 = k0 as i64;
    let rec0 = record(k0, &p0)?;
    let rec = record(k0 * ell, &p)?;
    let recp = record(k0 * ell * mi, &pp)?;
    let (t0, t, tp) = (p0.x().unwrap().clone(), p.x().unwrap().clone(), pp.x().unwrap().clone());

    let c3 = predicate_witness(PredicateKind::EltDivDen, &prod, &t0)?;
    let c4 = predicate_witness(PredicateKind::DenDivDen, &t, &tp)?;
    let diff = &t.checked_div(&tp)? - &mu;
    let c5 = predicate_witness(PredicateKind::DenDivNum, &t, &(&diff * &diff))?;

    let j = den_sqrt_via_point(&p)?;
    let norm_j = int_norm(&j);
    let norm_t0 = int_norm(&den_ideal(&t0));
    let (c, cp) = (&inst.params.c, &inst.params.c_prime);
    if !ell_inequality(c, cp, &norm_j, &norm_t0) {
        return Err(Error::EllTooSmall(format!(
            "c'·N(den t)^(1/2) = {}·{} does not exceed N(den t0)^c = {}^{}",
            format_rational(cp),
            norm_j,
            norm_t0,
            format_rational(c)
        )));
    }
    Ok(SCertificate {
        schema: S_SCHEMA.into(),
        instance: inst.name.clone(),
        mu: elem_to_json(&mu),
        p0: rec0,
        p: rec,
        p_prime: recp,
        t0: elem_to_json(&t0),
        t: elem_to_json(&t),
        t_prime: elem_to_json(&tp),
        condition3: c3.to_json(),
        condition4: c4.to_json(),
        condition5: c5.to_json(),
        den_t_sqrt: j.to_json(),
        constants: Constants { c: format_rational(c), c_prime: format_rational(cp), ell: inst.ell },
        ell_check: EllCheck { norm_sqrt_den_t: norm_j.to_string(), norm_den_t0: norm_t0.to_string() },
    })
}

/// Parsed certificate data shared by the verifier and the descent.
struct Parsed {
    mu: FieldElement,
    p0: CurvePoint,
    p: CurvePoint,
    pp: CurvePoint,
    t0: FieldElement,
    t: FieldElement,
    tp: FieldElement,
    c3: PredicateWitness,
    c4: PredicateWitness,
    c5: PredicateWitness,
    j: FractionalIdeal,
    c: BigRational,
    c_prime: BigRational,
}

fn parse(inst: &RankOneInstance, cert: &SCertificate) -> Result<Parsed> {
    let k = inst.field();
    let el = |s: &[String]| elem_from_json(k, s);
    let pt = |r: &PointRecord| -> Result<CurvePoint> { Ok(CurvePoint::Affine { x: el(&r.x)?, y: el(&r.y)? }) };
    let rat = |s: &str| parse_rational(s).ok_or_else(|| Error::Certificate(format!("bad constant '{s}'")));
    Ok(Parsed {
        mu: el(&cert.mu)?,
        p0: pt(&cert.p0)?,
        p: pt(&cert.p)?,
        pp: pt(&cert.p_prime)?,
        t0: el(&cert.t0)?,
        t: el(&cert.t)?,
        tp: el(&cert.t_prime)?,
        c3: PredicateWitness::from_json(k, &cert.condition3)?,
        c4: PredicateWitness::from_json(k, &cert.condition4)?,
        c5: PredicateWitness::from_json(k, &cert.condition5)?,
        j: FractionalIdeal::from_json(k, &cert.den_t_sqrt)?,
        c: rat(&cert.constants.c)?,
        c_prime: rat(&cert.constants.c_prime)?,
    })
}

fn check_point(inst: &RankOneInstance, rec: &PointRecord, claimed: &CurvePoint) -> (bool, serde_json::Value) {
    if rec.multiplier == 0 || rec.multiplier.unsigned_abs() > 1 << 20 {
        return (false, json!({ "multiplier": rec.multiplier, "reason": "multiplier out of range" }));
    }
    let actual = inst.multiple(rec.multiplier);
    let ok = !actual.is_infinity() && actual == *claimed && inst.curve.contains(claimed);
    (ok, json!({ "multiplier": rec.multiplier }))
}

/// Recomputes every condition from the raw certificate. All failing
/// conditions are listed; the first one is the headline.
pub fn verify_s_certificate(inst: &RankOneInstance, cert: &SCertificate) -> CheckReport {
    let mut rep = CheckReport::new("s-certificate");
    rep.check("schema", cert.schema == S_SCHEMA && cert.instance == inst.name, json!({ "schema": cert.schema, "instance": cert.instance }));
    let d = match parse(inst, cert) {
        Ok(d) => d,
        Err(e) => {
            rep.check("parse", false, json!(e.to_string()));
            return rep;
        }
    };
    rep.check(
        "constants",
        d.c == inst.params.c && d.c_prime == inst.params.c_prime && cert.constants.ell == inst.ell,
        json!({ "c": cert.constants.c, "c_prime": cert.constants.c_prime, "ell": cert.constants.ell }),
    );
    rep.check("mu-integral", d.mu.is_integral(), json!(cert.mu));

    // (1) P = ℓ·P₀, and all three points are nonzero multiples of rP₁.
    let (ok0, w0) = check_point(inst, &cert.p0, &d.p0);
    rep.check("p0-in-rE(K)", ok0, w0);
    let ell = cert.constants.ell as i64;
    let ok1 = cert.p.multiplier == cert.p0.multiplier.saturating_mul(ell) && inst.curve.scalar_mul(ell, &d.p0) == d.p;
    rep.check("condition-1", ok1, json!({ "p_multiplier": cert.p.multiplier, "ell": ell }));
    let (okp, wp) = check_point(inst, &cert.p_prime, &d.pp);
    rep.check("p-prime-in-rE(K)", okp, wp);

    // (2) t₀, t, t′ are the x-coordinates.
    let ok2 = d.p0.x() == Some(&d.t0) && d.p.x() == Some(&d.t) && d.pp.x() == Some(&d.tp);
    rep.check("condition-2", ok2, json!(null));

    // (3) (μ+1)⋯(μ+n) | den(t₀), without the leading μ.
    let prod = shifted_product(&d.mu, inst.degree());
    let r3 = if d.c3.kind != PredicateKind::EltDivDen || d.c3.t != prod || d.c3.u != d.t0 {
        Err("witness does not refer to (mu+1)...(mu+n) and t0".to_string())
    } else {
        d.c3.verify()
    };
    rep.check("condition-3", r3.is_ok(), json!(r3.err()));

    // (4) den(t) | den(t′).
    let r4 = if d.c4.kind != PredicateKind::DenDivDen || d.c4.t != d.t || d.c4.u != d.tp {
        Err("witness does not refer to t and t'".to_string())
    } else {
        d.c4.verify()
    };
    rep.check("condition-4", r4.is_ok(), json!(r4.err()));

    // (5) den(t) | num((t/t′ − μ)²).
    let r5 = match d.t.checked_div(&d.tp) {
        Ok(q) => {
            let diff = &q - &d.mu;
            let u = &diff * &diff;
            if d.c5.kind != PredicateKind::DenDivNum || d.c5.t != d.t || d.c5.u != u {
                Err("witness does not refer to t and (t/t' - mu)^2".to_string())
            } else {
                d.c5.verify()
            }
        }
        Err(_) => Err("t' = 0".to_string()),
    };
    rep.check("condition-5", r5.is_ok(), json!(r5.err()));

    // The embedded square root and the per-certificate ℓ inequality.
    let den_t = den_ideal(&d.t);
    let sqrt_ok = !d.j.is_zero() && d.j.is_integral() && d.j.pow(2).is_ok_and(|s| s == den_t);
    rep.check("den-sqrt", sqrt_ok, json!(null));
    let norm_j = int_norm(&d.j);
    let norm_t0 = int_norm(&den_ideal(&d.t0));
    let recorded = cert.ell_check.norm_sqrt_den_t == norm_j.to_string() && cert.ell_check.norm_den_t0 == norm_t0.to_string();
    let holds = ell_inequality(&d.c, &d.c_prime, &norm_j, &norm_t0);
    rep.check("ell-inequality", recorded && holds, json!({ "recorded_values_match": recorded, "holds": holds }));
    rep
}

/// Replays the argument that an accepted certificate forces `μ ∈ O_F`, step
/// by step, and cross-checks against the direct membership test.
pub fn soundness_descent(inst: &RankOneInstance, cert: &SCertificate) -> CheckReport {
    let mut rep = CheckReport::new("soundness-descent");
    let v = verify_s_certificate(inst, cert);
    rep.check("certificate-accepted", v.verdict.is_pass(), json!({ "failing": v.failing() }));
    if !v.verdict.is_pass() {
        return rep;
    }
    let d = parse(inst, cert).expect("verified certificates parse");
    let ext = &inst.ext;
    let k = inst.field();

    // m from the multiplier ratio P′ = mP.
    let (a, b) = (cert.p_prime.multiplier, cert.p.multiplier);
    let m = if b != 0 && a % b == 0 { Some(a / b) } else { None };
    rep.check("recover-m", m.is_some(), json!({ "m": m }));
    let Some(m) = m else { return rep };
    let m2 = FieldElement::from_int(k, m * m);

    // den(t) has only even exponents, so its square root is well defined.
    rep.check("sqrt-well-defined", d.j.pow(2).is_ok_and(|s| s == den_ideal(&d.t)), json!(null));
    let delta = &d.mu - &m2;
    rep.check(
        "sqrt-divides-mu-minus-m2",
        d.j.divides(&num_ideal(&delta)),
        json!({ "mu_minus_m2_is_zero": delta.is_zero() }),
    );

    // Coordinate bound from condition (3).
    let coords = ext.relative_coordinates(&d.mu);
    let norms: Vec<BigInt> =
        coords.iter().map(|a| (&ext.d * &ext.embed(a)).norm().to_integer().abs()).collect();
    let norm_t0 = int_norm(&den_ideal(&d.t0));
    let bound_ok = norms.iter().all(|nd| crate::lemmas::le_rational_power(nd, &norm_t0, &d.c));
    rep.check(
        "coordinate-bound",
        bound_ok,
        json!({
            "norms_D_a": norms.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "norm_den_t0": norm_t0.to_string(),
            "c": cert.constants.c,
            "note": "hypothesis applied as (mu+1)...(mu+n) | den(t0), without the leading mu factor",
        }),
    );

    // I = restrict(J) must extend back to J.
    let restricted = d.j.restrict(ext).and_then(|i| Ok((i.extend(ext)?, i)));
    let (ext_i, base_i) = match restricted {
        Ok(v) => v,
        Err(e) => {
            rep.check("restriction-roundtrip", false, json!(e.to_string()));
            return rep;
        }
    };
    rep.check("restriction-roundtrip", ext_i == d.j, json!({ "ideal_of_OF": base_i.to_json() }));
    let norm_i = BigRational::from_integer(int_norm(&ext_i));
    let hyp = norms.iter().all(|nd| BigRational::from_integer(nd.clone()) < &d.c_prime * &norm_i);
    rep.check(
        "descent-hypothesis",
        hyp && ext_i.divides(&num_ideal(&delta)),
        json!({ "norm_I": norm_i.to_integer().to_string(), "c_prime": cert.constants.c_prime }),
    );

    // Conclusion: all coordinates a_1..a_{s-1} vanish, agreeing with the direct test.
    let concluded = hyp && coords[1..].iter().all(|a| a.is_zero());
    let direct = inst.in_of(&d.mu);
    rep.check("conclusion-mu-in-OF", concluded, json!(null));
    rep.check("direct-check-agrees", concluded == direct, json!({ "direct": direct }));
    rep
}
