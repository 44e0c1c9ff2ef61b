//! Acceptance suite. Each test covers one criterion, prints a single
//! `criterion N: PASS|FAIL` line on stderr and fails if the criterion or its
//! time limit is missed.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use dioph_core::arith::{format_rational, parse_rational};
use dioph_core::certify::{
    build_s_certificate, certification_gate, certify_of_element, divisibility_witness, four_squares_witness,
    predicate_witness, soundness_descent, trace_integer, verify_of_certificate, verify_s_certificate, PredicateKind,
    SCertificate,
};
use dioph_core::config::{load_instance, parse_instance};
use dioph_core::elliptic::{CurvePoint, FormalGroup, RankOneInstance, WeierstrassCurve};
use dioph_core::ideals::{den_ideal, num_ideal, FractionalIdeal};
use dioph_core::lemmas::{
    check_denominator_growth, check_multiple_divisibility, check_quotient_congruence, find_point_with_denominator,
    if_direction_holds, probe_gi_subgroup,
};
use dioph_core::numfield::{FieldElement, NumberField};
use dioph_core::Error;

const CURATED: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../instances/curated.toml");
const UNATTESTED: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../instances/gaussian_unattested.toml");

fn report(n: u32, ok: bool, detail: &str, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    let pass = ok && elapsed < limit;
    let line = format!(
        "criterion {n}: {} ({detail}; {:.2}s of {}s)\n",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    // Written to the raw handle so the line survives output capture.
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "{}", line.trim());
}

fn curated() -> RankOneInstance {
    load_instance(CURATED).expect("curated instance loads")
}

fn gaussian() -> Arc<NumberField> {
    NumberField::monogenic("Q(i)", &[1, 0, 1]).unwrap()
}

fn sqrt5() -> Arc<NumberField> {
    let q = |s: &str| parse_rational(s).unwrap();
    NumberField::new(
        "Q(sqrt(5))",
        vec![BigInt::from(-5), BigInt::from(0), BigInt::from(1)],
        vec![vec![q("1"), q("0")], vec![q("1/2"), q("1/2")]],
        BigInt::from(5),
    )
    .unwrap()
}

fn random_element(rng: &mut ChaCha8Rng, k: &Arc<NumberField>, integral: bool) -> FieldElement {
    if integral {
        // Integral-basis coordinates, so Q(√5) also samples half-integers.
        let c: Vec<BigInt> = (0..k.degree()).map(|_| BigInt::from(rng.random_range(-9i64..=9))).collect();
        return FieldElement::from_integral_coords(k, &c);
    }
    let den = BigInt::from(rng.random_range(1..=6));
    let coords: Vec<BigRational> =
        (0..k.degree()).map(|_| BigRational::new(rng.random_range(-9i64..=9).into(), den.clone())).collect();
    FieldElement::from_coords(k, &coords).unwrap()
}

fn nonzero(rng: &mut ChaCha8Rng, k: &Arc<NumberField>, integral: bool) -> FieldElement {
    loop {
        let x = random_element(rng, k, integral);
        if !x.is_zero() {
            return x;
        }
    }
}

fn point_pool(curve: &WeierstrassCurve, gens: &[CurvePoint], span: i64) -> Vec<CurvePoint> {
    let mut pool = vec![CurvePoint::Infinity];
    let mut combos: Vec<Vec<i64>> = vec![vec![]];
    for _ in gens {
        combos = combos.into_iter().flat_map(|c| (-span..=span).map(move |a| [c.clone(), vec![a]].concat())).collect();
    }
    for c in combos {
        let mut p = CurvePoint::Infinity;
        for (a, g) in c.iter().zip(gens) {
            p = curve.add(&p, &curve.scalar_mul(*a, g));
        }
        if !pool.contains(&p) {
            pool.push(p);
        }
    }
    pool
}

#[test]
fn criterion_1_arithmetic_core() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let inst = curated();
    let fields = [NumberField::rationals(), gaussian(), sqrt5(), inst.field().clone()];
    let mut failures = Vec::new();
    let mut counts = BTreeMap::new();

    for k in &fields {
        for _ in 0..60 {
            let (a, b) = (random_element(&mut rng, k, false), random_element(&mut rng, k, false));
            if (&a * &b).norm() != a.norm() * b.norm() {
                failures.push(format!("element norm in {}", k.name()));
            }
            *counts.entry("element-norm").or_insert(0) += 1;
        }
        for _ in 0..25 {
            let i = FractionalIdeal::from_generators(&[nonzero(&mut rng, k, true), nonzero(&mut rng, k, true)]).unwrap();
            let j = FractionalIdeal::from_generators(&[nonzero(&mut rng, k, true), nonzero(&mut rng, k, true)]).unwrap();
            let ij = i.product(&j).unwrap();
            if ij.norm() != i.norm() * j.norm() {
                failures.push(format!("ideal norm in {}", k.name()));
            }
            *counts.entry("ideal-norm").or_insert(0) += 1;
        }
        for _ in 0..40 {
            let t = nonzero(&mut rng, k, false);
            let inv = t.inverse().unwrap();
            let principal = FractionalIdeal::principal(&t);
            let recombined = num_ideal(&t).quotient(&den_ideal(&t)).unwrap();
            if den_ideal(&t) != num_ideal(&inv) || recombined != principal {
                failures.push(format!("den/num duality in {}", k.name()));
            }
            *counts.entry("den-num").or_insert(0) += 1;
        }
    }

    // Associativity on random triples drawn from two curves.
    let k = inst.field().clone();
    let torsion = inst.curve.point(FieldElement::zero(&k), -FieldElement::generator(&k)).unwrap();
    let pool_a = point_pool(&inst.curve, &[inst.p1.clone(), torsion], 3);
    let g = gaussian();
    let e17 = WeierstrassCurve::new(FieldElement::zero(&g), FieldElement::from_int(&g, 17)).unwrap();
    let p = e17.point(FieldElement::from_int(&g, -2), FieldElement::from_int(&g, 3)).unwrap();
    let q = e17.point(FieldElement::from_int(&g, -1), FieldElement::from_int(&g, 4)).unwrap();
    let pool_b = point_pool(&e17, &[p, q], 2);
    for (curve, pool) in [(&inst.curve, &pool_a), (&e17, &pool_b)] {
        for _ in 0..60 {
            let [a, b, c] = [0; 3].map(|_| &pool[rng.random_range(0..pool.len())]);
            let lhs = curve.add(&curve.add(a, b), c);
            let rhs = curve.add(a, &curve.add(b, c));
            if lhs != rhs || !curve.contains(&lhs) {
                failures.push("associativity".into());
            }
            *counts.entry("associativity").or_insert(0) += 1;
        }
    }

    // Formal-group axioms at N = 12.
    let a_curve = WeierstrassCurve::new(FieldElement::from_int(&g, -1), FieldElement::from_int(&g, 1)).unwrap();
    for curve in [&inst.curve, &e17, &a_curve] {
        let fg = FormalGroup::new(curve, 12).unwrap();
        let ok = fg.check_identity()
            && fg.check_commutative()
            && fg.check_associative()
            && fg.check_composition(2, 3)
            && fg.check_composition(-1, 2);
        if !ok {
            failures.push("formal-group axioms".into());
        }
        *counts.entry("formal-groups").or_insert(0) += 1;
    }
    report(1, failures.is_empty(), &format!("{counts:?}, failures {failures:?}"), start, Duration::from_secs(60));
}

#[test]
fn criterion_2_quotient_congruence() {
    let start = Instant::now();
    let rep = check_quotient_congruence(&curated(), 5);
    let ok = rep.verdict.is_pass() && rep.cases.len() == 10;
    report(2, ok, &format!("{} cases for 1 <= |m| <= 5, verdict {:?}", rep.cases.len(), rep.verdict), start, Duration::from_secs(120));
}

#[test]
fn criterion_3_multiple_divisibility() {
    let start = Instant::now();
    let table = check_multiple_divisibility(&curated(), 6);
    let second = parse_instance(&std::fs::read_to_string(UNATTESTED).unwrap()).unwrap();
    let other = check_multiple_divisibility(&second, 6);
    let ok = table.verdict.is_pass() && table.cases.len() == 36 && if_direction_holds(&other);
    report(
        3,
        ok,
        &format!(
            "curated table {:?} over {} cases; unattested if-direction {}",
            table.verdict,
            table.cases.len(),
            if_direction_holds(&other)
        ),
        start,
        Duration::from_secs(180),
    );
}

#[test]
fn criterion_4_denominator_growth() {
    let start = Instant::now();
    let inst = curated();
    let rep = check_denominator_growth(&inst, 5);
    let growth_ok = rep.verdict.is_pass() && rep.cases.len() == 9;

    // Negative control: r = 1 keeps the bare generator, whose x is integral.
    let text = std::fs::read_to_string(CURATED).unwrap().replacen("r = 3", "r = 1", 1);
    let bare = parse_instance(&text).unwrap();
    let control = check_denominator_growth(&bare, 5);
    let control_ok = control.cases.len() == 1
        && control.cases[0].key == "precondition"
        && !control.cases[0].verdict.is_pass()
        && !control.verdict.is_pass();
    report(
        4,
        growth_ok && control_ok,
        &format!("growth {:?} over {} cases; r=1 control rejected: {control_ok}", rep.verdict, rep.cases.len()),
        start,
        Duration::from_secs(180),
    );
}

#[test]
fn criterion_5_existence_and_subgroups() {
    let start = Instant::now();
    let inst = curated();
    let k = inst.field();
    let mu = 4i64;
    let shifted = (1..=inst.degree() as i64).fold(FieldElement::one(k), |acc, i| &acc * &FieldElement::from_int(k, mu + i));
    let targets = [
        ("(2)", FractionalIdeal::principal(&FieldElement::from_int(k, 2))),
        ("(3)", FractionalIdeal::principal(&FieldElement::from_int(k, 3))),
        ("(mu+1)(mu+2)", FractionalIdeal::principal(&shifted)),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, ideal) in &targets {
        let found = find_point_with_denominator(&inst, ideal, 50);
        let probe = probe_gi_subgroup(&inst, ideal, 12);
        let least = probe.cases[0].witness["least"].clone();
        ok &= found.is_ok() && probe.verdict.is_pass();
        detail.push(format!("{name}: k={:?} least={least}", found.as_ref().map(|f| f.0).ok()));
    }
    report(5, ok, &detail.join(", "), start, Duration::from_secs(300));
}

fn collect_leaves(v: &Value, path: String, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| collect_leaves(x, format!("{path}/{k}"), out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| collect_leaves(x, format!("{path}/{i}"), out)),
        Value::Null => {}
        _ => out.push(path),
    }
}

fn tamper(v: &mut Value) {
    match v {
        Value::String(s) => {
            *s = match parse_rational(s) {
                Some(q) => format_rational(&(q + BigRational::from_integer(1.into()))),
                None => format!("{s}-tampered"),
            }
        }
        Value::Number(n) => *v = Value::from(n.as_i64().expect("integer fields") + 1),
        Value::Bool(b) => *b = !*b,
        _ => unreachable!("only scalar leaves are tampered"),
    }
}

#[test]
fn criterion_6_certificate_round_trip() {
    let start = Instant::now();
    let inst = curated();
    certification_gate(&inst).unwrap();
    let mut certs = Vec::new();
    let mut ok = true;
    for m in 1..=3 {
        let cert = build_s_certificate(&inst, m, inst.params.k_bound).unwrap();
        let accepted = verify_s_certificate(&inst, &cert).verdict.is_pass();
        let descent = soundness_descent(&inst, &cert);
        let agrees = descent.get("direct-check-agrees").is_some_and(|c| c.verdict.is_pass());
        ok &= accepted && descent.verdict.is_pass() && agrees;
        certs.push(serde_json::to_value(&cert).unwrap());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut named: BTreeMap<String, u32> = BTreeMap::new();
    let mut missed = Vec::new();
    for _ in 0..20 {
        let base = &certs[rng.random_range(0..certs.len())];
        let mut leaves = Vec::new();
        collect_leaves(base, String::new(), &mut leaves);
        let path = &leaves[rng.random_range(0..leaves.len())];
        let mut bad = base.clone();
        tamper(bad.pointer_mut(path).unwrap());
        let verdict = match serde_json::from_value::<SCertificate>(bad) {
            Err(_) => Some("parse".to_string()),
            Ok(c) => verify_s_certificate(&inst, &c).first_failure().map(str::to_string),
        };
        match verdict {
            Some(name) => *named.entry(name).or_insert(0) += 1,
            None => missed.push(path.clone()),
        }
    }
    report(
        6,
        ok && missed.is_empty(),
        &format!("m=1..3 accepted and descended: {ok}; tampers rejected by {named:?}; undetected {missed:?}"),
        start,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_7_chain() {
    let start = Instant::now();
    let inst = curated();
    certification_gate(&inst).unwrap();
    let k = inst.field();
    let mut cache = BTreeMap::new();
    let mut ok = true;
    for w in -3..=5 {
        let cert = certify_of_element(&inst, &FieldElement::from_int(k, w), true, inst.params.k_bound, &mut cache).unwrap();
        ok &= verify_of_certificate(&inst, &cert).verdict.is_pass();
    }
    let mut replay_ok = true;
    for z in -200..=200i64 {
        let t = trace_integer(&BigInt::from(z));
        replay_ok &= t.replay() == Ok(BigInt::from(z));
        let cert = certify_of_element(&inst, &FieldElement::from_int(k, z), false, 0, &mut BTreeMap::new()).unwrap();
        replay_ok &= verify_of_certificate(&inst, &cert).verdict.is_pass();
    }
    report(
        7,
        ok && replay_ok,
        &format!("w in -3..5 with leaves {:?}: {ok}; |z| <= 200 replay: {replay_ok}", cache.keys().collect::<Vec<_>>()),
        start,
        Duration::from_secs(600),
    );
}

/// Representatives of the principal integral ideals of norm at most `bound`.
fn small_principal(k: &Arc<NumberField>, bound: i64) -> Vec<FieldElement> {
    let mut out: Vec<FieldElement> = Vec::new();
    let mut seen: Vec<FractionalIdeal> = Vec::new();
    let r = (0..).find(|r: &i64| r * r > bound).unwrap();
    let range: Vec<Vec<i64>> = if k.degree() == 1 {
        (1..=bound).map(|a| vec![a]).collect()
    } else {
        (-r..=r).flat_map(|a| (-r..=r).map(move |b| vec![a, b])).collect()
    };
    for c in range {
        let x = FieldElement::from_integral_coords(k, &c.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>());
        if x.is_zero() || x.norm().abs() > BigRational::from_integer(bound.into()) {
            continue;
        }
        let i = FractionalIdeal::principal(&x);
        if !seen.contains(&i) {
            seen.push(i);
            out.push(x);
        }
    }
    out
}

#[test]
fn criterion_8_predicate_witnesses() {
    let start = Instant::now();
    let mut pairs = 0;
    let mut mismatches = Vec::new();
    for k in [NumberField::rationals(), gaussian()] {
        let elems = small_principal(&k, 30);
        for x in &elems {
            for y in &elems {
                let divides = FractionalIdeal::principal(x).divides(&FractionalIdeal::principal(y));
                let witness = divisibility_witness(std::slice::from_ref(x), std::slice::from_ref(y));
                let replayed = witness.as_ref().is_ok_and(|w| w.verify());
                if divides != witness.is_ok() || (witness.is_ok() && !replayed) {
                    mismatches.push(format!("{}: {:?} | {:?}", k.name(), x, y));
                }
                pairs += 1;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let g = gaussian();
    let kinds = [PredicateKind::DenDivDen, PredicateKind::DenDivNum, PredicateKind::EltDivDen];
    let mut outcomes: BTreeMap<&str, u32> = BTreeMap::new();
    for i in 0..50 {
        let kind = kinds[i % 3];
        let integral_t = kind == PredicateKind::EltDivDen;
        let t = nonzero(&mut rng, &g, integral_t);
        // Every sixth DenDivNum pair exercises the u = 0 branch.
        let u = if kind == PredicateKind::DenDivNum && i % 6 == 1 { FieldElement::zero(&g) } else { nonzero(&mut rng, &g, false) };
        let truth = match kind {
            PredicateKind::DenDivDen => den_ideal(&t).divides(&den_ideal(&u)),
            PredicateKind::DenDivNum => u.is_zero() || den_ideal(&t).divides(&num_ideal(&u)),
            PredicateKind::EltDivDen => FractionalIdeal::principal(&t).divides(&den_ideal(&u)),
        };
        match predicate_witness(kind, &t, &u) {
            Ok(w) if truth && w.verify().is_ok() => {
                *outcomes.entry(if w.zero_branch { "zero-branch" } else { "witnessed" }).or_insert(0) += 1
            }
            Err(Error::PredicateFalse(_)) if !truth => *outcomes.entry("refuted").or_insert(0) += 1,
            other => mismatches.push(format!("{kind:?} t={t:?} u={u:?}: truth {truth}, got {other:?}")),
        }
    }
    let zero_branch_seen = outcomes.contains_key("zero-branch");
    report(
        8,
        mismatches.is_empty() && zero_branch_seen,
        &format!("{pairs} ideal pairs, predicate outcomes {outcomes:?}, mismatches {}", mismatches.len()),
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_9_four_squares() {
    let start = Instant::now();
    let found = (0..=500).all(|a| four_squares_witness(a).is_ok_and(|w| w.iter().map(|x| x * x).sum::<i64>() == a));
    let refused = (-10..0).all(|a| matches!(four_squares_witness(a), Err(Error::NoWitness)));
    report(9, found && refused, &format!("0..=500 witnessed: {found}; -10..-1 refused: {refused}"), start, Duration::from_secs(10));
}
