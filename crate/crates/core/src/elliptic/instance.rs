//! A rank-one instance: the tower `F ⊆ K`, the curve, a generator `P₁` and the
//! externally attested arithmetic data, plus its computational validation.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::json;

use super::{CurvePoint, WeierstrassCurve};
use crate::arith::primes_up_to;
use crate::ideals::{primes_above, FractionalIdeal, PrimeIdeal, DEFAULT_TRIAL_BOUND};
use crate::numfield::{FieldElement, NumberField, RelativeExtension};
use crate::poly::PolyFp;
use crate::report::{CheckReport, Verdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TamagawaEntry {
    pub p: u64,
    pub residue_poly: Vec<u64>,
    pub index: u64,
}

impl TamagawaEntry {
    pub fn tag(&self) -> String {
        let c: Vec<String> = self.residue_poly.iter().map(|x| x.to_string()).collect();
        format!("({}, [{}])", self.p, c.join(","))
    }
}

/// Whether the rank hypothesis `rk E(F) = rk E(K) = 1` is backed by an oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankStatus {
    Attested { rank_f: u32, rank_k: u32 },
    Unattested,
}

/// Constants and search bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    pub c: BigRational,
    pub c_prime: BigRational,
    pub k_bound: u64,
    pub m_max: u64,
    pub k_max: u64,
    pub coord_box: i64,
    pub norm_box: u64,
    pub gi_window: u64,
    pub precision: usize,
    pub trial_bound: u64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            c: BigRational::from_integer(2.into()),
            c_prime: BigRational::new(1.into(), 2.into()),
            k_bound: 50,
            m_max: 5,
            k_max: 6,
            coord_box: 3,
            norm_box: 50,
            gi_window: 12,
            precision: super::formal::DEFAULT_PRECISION,
            trial_bound: DEFAULT_TRIAL_BOUND,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RankOneInstance {
    pub name: String,
    pub ext: RelativeExtension,
    pub curve: WeierstrassCurve,
    pub p1: CurvePoint,
    pub r: u64,
    pub ell: u64,
    pub torsion_order: u64,
    pub index_ek_ef: u64,
    pub tamagawa: Vec<TamagawaEntry>,
    pub rank: RankStatus,
    pub provenance: BTreeMap<String, String>,
    pub params: SearchParams,
}

impl RankOneInstance {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.ext.top
    }

    /// Degree `n = [K:Q]`.
    pub fn degree(&self) -> usize {
        self.ext.top.degree()
    }

    /// `k·r·P₁`.
    pub fn multiple(&self, k: i64) -> CurvePoint {
        let kr = k.checked_mul(self.r as i64).expect("multiplier overflow");
        self.curve.scalar_mul(kr, &self.p1)
    }

    /// `[k·r·P₁ for k in 1..=count]`, built incrementally.
    pub fn multiples(&self, count: u64) -> Vec<CurvePoint> {
        let base = self.multiple(1);
        let mut out = Vec::with_capacity(count as usize);
        let mut acc = CurvePoint::Infinity;
        for _ in 0..count {
            acc = self.curve.add(&acc, &base);
            out.push(acc.clone());
        }
        out
    }

    /// The configured Z-basis of `O_F`, embedded in `K`.
    pub fn of_basis(&self) -> Vec<FieldElement> {
        let f = &self.ext.base;
        (0..f.degree()).map(|j| self.ext.embed(&FieldElement::basis_element(f, j))).collect()
    }

    /// Whether `x ∈ K` lies in the image of `O_F`.
    pub fn in_of(&self, x: &FieldElement) -> bool {
        x.is_integral() && self.ext.to_base(x).is_some_and(|b| b.is_integral())
    }
}

/// Reduction of an integral element modulo a prime of good index.
fn reduce(x: &FieldElement, prime: &PrimeIdeal) -> PolyFp {
    let p = BigInt::from(prime.p);
    let den = x.denominator().mod_floor(&p);
    let inv = den.modpow(&(&p - 2u32), &p);
    let coeffs: Vec<BigInt> = x.numerator().iter().map(|c| (c * &inv).mod_floor(&p)).collect();
    let g = PolyFp::new(prime.p, prime.residue_poly.clone());
    PolyFp::from_bigints(prime.p, &coeffs).rem(&g)
}

/// `#E(O_K/𝔭)` by direct enumeration of the residue field.
pub fn count_points_mod(curve: &WeierstrassCurve, prime: &PrimeIdeal) -> u64 {
    let p = prime.p;
    let f = prime.f as u32;
    let q = p.pow(f);
    let g = PolyFp::new(p, prime.residue_poly.clone());
    let a = reduce(&curve.a, prime);
    let b = reduce(&curve.b, prime);
    let half = BigUint::from((q - 1) / 2);
    let mut count = 1u64;
    for i in 0..q {
        let mut digits = Vec::with_capacity(f as usize);
        let mut t = i;
        for _ in 0..f {
            digits.push(t % p);
            t /= p;
        }
        let x = PolyFp::new(p, digits);
        let rhs = x.mul(&x).mul(&x).add(&a.mul(&x)).add(&b).rem(&g);
        if rhs.is_zero() {
            count += 1;
        } else if rhs.pow_mod(&half, &g).is_one() {
            count += 2;
        }
    }
    count
}

/// Primes of `K` with good reduction, unramified, odd, ordered by norm.
fn small_good_primes(inst: &RankOneInstance, how_many: usize) -> Vec<(PrimeIdeal, u64)> {
    let k = inst.field();
    let disc = inst.curve.discriminant();
    let mut cands: Vec<PrimeIdeal> = Vec::new();
    for p in primes_up_to(200) {
        if p == 2 {
            continue;
        }
        let Ok(ps) = primes_above(k, p) else { continue };
        for pr in ps {
            if pr.e == 1 && pr.valuation(&disc) == Some(0) && pr.norm() <= BigInt::from(5000) {
                cands.push(pr);
            }
        }
    }
    cands.sort_by(|x, y| x.norm().cmp(&y.norm()).then(x.p.cmp(&y.p)).then(x.residue_poly.cmp(&y.residue_poly)));
    cands
        .into_iter()
        .take(how_many)
        .map(|pr| {
            let n = count_points_mod(&inst.curve, &pr);
            (pr, n)
        })
        .collect()
}

/// The primes dividing the curve discriminant, with their exponents.
pub fn bad_primes(inst: &RankOneInstance) -> crate::Result<Vec<(PrimeIdeal, i64)>> {
    let d = FractionalIdeal::principal(&inst.curve.discriminant());
    Ok(d.factor(inst.params.trial_bound)?.factors)
}

/// Checks every computable invariant of the instance; failures are entries,
/// never errors.
pub fn validate_instance(inst: &RankOneInstance) -> CheckReport {
    let mut rep = CheckReport::new(&inst.name);
    let curve = &inst.curve;

    let coeffs_ok = inst.in_of(&curve.a) && inst.in_of(&curve.b);
    rep.check("curve-coefficients-in-OF", coeffs_ok, json!({ "a": curve.a.to_strings(), "b": curve.b.to_strings() }));
    rep.check("discriminant-nonzero", !curve.discriminant().is_zero(), json!(curve.discriminant().to_strings()));

    let on_curve = curve.contains(&inst.p1) && !inst.p1.is_infinity();
    rep.check("on-curve", on_curve, inst.p1.to_json());

    let positive = inst.r > 0 && inst.ell > 0 && inst.torsion_order > 0 && inst.index_ek_ef > 0;
    rep.check(
        "positive-integers",
        positive && inst.tamagawa.iter().all(|t| t.index > 0),
        json!({ "r": inst.r, "ell": inst.ell, "torsion_order": inst.torsion_order, "index_EK_EF": inst.index_ek_ef }),
    );
    rep.check(
        "r-divisible-by-torsion-order",
        inst.torsion_order > 0 && inst.r % inst.torsion_order == 0,
        json!({ "r": inst.r, "torsion_order": inst.torsion_order }),
    );
    rep.check(
        "r-divisible-by-index",
        inst.index_ek_ef > 0 && inst.r % inst.index_ek_ef == 0,
        json!({ "r": inst.r, "index_EK_EF": inst.index_ek_ef }),
    );
    let bad_tam: Vec<String> =
        inst.tamagawa.iter().filter(|t| t.index == 0 || inst.r % t.index != 0).map(|t| t.tag()).collect();
    rep.check("r-divisible-by-tamagawa-indices", bad_tam.is_empty(), json!({ "r": inst.r, "not_dividing": bad_tam }));

    match bad_primes(inst) {
        Ok(bad) => {
            let bad_tags: Vec<String> = bad.iter().map(|(p, _)| p.tag()).collect();
            let listed: Vec<String> = inst.tamagawa.iter().map(|t| t.tag()).collect();
            let unknown: Vec<&String> = listed.iter().filter(|t| !bad_tags.contains(t)).collect();
            let missing: Vec<&String> = bad_tags.iter().filter(|t| !listed.contains(t)).collect();
            rep.check(
                "tamagawa-primes-are-bad",
                unknown.is_empty(),
                json!({ "bad_primes": bad_tags, "listed_but_good": unknown }),
            );
            rep.check("tamagawa-list-complete", missing.is_empty(), json!({ "unlisted_bad_primes": missing }));
        }
        Err(e) => rep.push("tamagawa-primes-are-bad", Verdict::Inconclusive, json!(e.to_string())),
    }

    if on_curve && inst.r > 0 {
        let rp = inst.multiple(1);
        rep.check("rP1-nonzero", !rp.is_infinity(), rp.to_json());
        let rational = match &rp {
            CurvePoint::Affine { x, y } => inst.ext.to_base(x).is_some() && inst.ext.to_base(y).is_some(),
            CurvePoint::Infinity => false,
        };
        rep.check("rP1-F-rational", rational, json!(null));
    } else {
        rep.check("rP1-nonzero", false, json!("generator not on curve"));
    }

    // Reduction is injective on torsion away from small residue characteristic,
    // so the torsion order divides these point counts.
    if coeffs_ok {
        let counts = small_good_primes(inst, 2);
        let mut g = 0u64;
        for (_, n) in &counts {
            g = g.gcd(n);
        }
        let witness: Vec<_> = counts.iter().map(|(p, n)| json!({ "prime": p.tag(), "points": n })).collect();
        if counts.len() < 2 {
            rep.push("torsion-sanity", Verdict::Inconclusive, json!(witness));
        } else {
            rep.check("torsion-sanity", inst.torsion_order > 0 && g % inst.torsion_order == 0, json!({ "counts": witness, "gcd": g }));
        }
    }

    let needed = ["rank", "torsion_order", "index_EK_EF", "tamagawa_indices"];
    let missing: Vec<&str> =
        needed.iter().copied().filter(|k| inst.provenance.get(*k).is_none_or(|v| v.trim().is_empty())).collect();
    rep.check("provenance-recorded", missing.is_empty(), json!({ "missing": missing }));

    match &inst.rank {
        RankStatus::Attested { rank_f, rank_k } => {
            rep.check("rank-one", *rank_f == 1 && *rank_k == 1, json!({ "rank_F": rank_f, "rank_K": rank_k }))
        }
        RankStatus::Unattested => rep.check("rank-one", true, json!("unattested; rank-sensitive results are advisory")),
    }
    rep
}

/// `N_{K/Q}(I)` as an integer, for integral ideals.
pub fn integral_norm(i: &FractionalIdeal) -> BigInt {
    let n = i.norm();
    debug_assert!(n.is_integer());
    n.to_integer()
}

/// Small helper for reports: `u64` view of a norm when it fits.
pub fn norm_u64(i: &FractionalIdeal) -> Option<u64> {
    integral_norm(i).to_u64()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use num_traits::One;

    pub(crate) fn curated() -> RankOneInstance {
        let q = NumberField::rationals();
        let k = NumberField::monogenic("Q(sqrt(-2))", &[2, 0, 1]).unwrap();
        let ext = RelativeExtension::new(
            q,
            k.clone(),
            FieldElement::zero(&k),
            FieldElement::generator(&k),
            2,
            FieldElement::from_int(&k, -8),
        )
        .unwrap();
        let curve = WeierstrassCurve::new(FieldElement::zero(&k), FieldElement::from_int(&k, -2)).unwrap();
        let p1 = curve.point(FieldElement::from_int(&k, 3), FieldElement::from_int(&k, 5)).unwrap();
        let tam = vec![
            TamagawaEntry { p: 2, residue_poly: vec![0, 1], index: 3 },
            TamagawaEntry { p: 3, residue_poly: vec![1, 1], index: 1 },
            TamagawaEntry { p: 3, residue_poly: vec![2, 1], index: 1 },
        ];
        let prov: BTreeMap<String, String> = ["rank", "torsion_order", "index_EK_EF", "tamagawa_indices"]
            .iter()
            .map(|k| (k.to_string(), "test fixture".to_string()))
            .collect();
        RankOneInstance {
            name: "test".into(),
            ext,
            curve,
            p1,
            r: 3,
            ell: 3,
            torsion_order: 3,
            index_ek_ef: 3,
            tamagawa: tam,
            rank: RankStatus::Attested { rank_f: 1, rank_k: 1 },
            provenance: prov,
            params: SearchParams::default(),
        }
    }

    #[test]
    fn curated_instance_validates() {
        let inst = curated();
        let rep = validate_instance(&inst);
        assert!(rep.verdict.is_pass(), "{:?}", rep);
        let t = rep.get("torsion-sanity").unwrap();
        assert_eq!(t.detail["gcd"], json!(12));
    }

    #[test]
    fn broken_instances_fail_named_checks() {
        let mut inst = curated();
        inst.r = 2;
        let rep = validate_instance(&inst);
        assert!(rep.failing().contains(&"r-divisible-by-torsion-order"));
        let mut inst = curated();
        let k = inst.field().clone();
        inst.p1 = CurvePoint::Affine { x: FieldElement::from_int(&k, 1), y: FieldElement::from_int(&k, 1) };
        assert_eq!(validate_instance(&inst).first_failure(), Some("on-curve"));
        let mut inst = curated();
        inst.provenance.insert("rank".into(), " ".into());
        assert!(validate_instance(&inst).failing().contains(&"provenance-recorded"));
    }

    #[test]
    fn multiples_agree_with_scalar_multiplication() {
        let inst = curated();
        let ms = inst.multiples(4);
        assert_eq!(ms[3], inst.multiple(4));
        assert_eq!(inst.of_basis(), vec![FieldElement::one(inst.field())]);
        assert!(BigInt::one() < integral_norm(&crate::ideals::den_ideal(ms[0].x().unwrap())));
    }
}
