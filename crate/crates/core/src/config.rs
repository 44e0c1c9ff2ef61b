//! TOML instance files.
//!
//! Every numeric value is either a TOML integer or a string holding an
//! integer or a fraction `p/q`. Floating-point literals are rejected with the
//! path of the offending field, since no value in an instance is approximate.
//! Field elements are arrays of rationals in power-basis coordinates of `K`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use toml::{Table, Value};

use crate::arith::parse_rational;
use crate::elliptic::{
    validate_instance, RankOneInstance, RankStatus, SearchParams, TamagawaEntry, WeierstrassCurve,
};
use crate::error::{Error, Result};
use crate::numfield::{FieldElement, NumberField, RelativeExtension};
use crate::report::CheckReport;

pub const SCHEMA_VERSION: i64 = 1;

fn err(path: &str, message: impl Into<String>) -> Error {
    Error::Config { path: path.to_string(), message: message.into() }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() { key.to_string() } else { format!("{path}.{key}") }
}

/// Reports the first float anywhere in the document.
fn reject_floats(v: &Value, path: &str) -> Result<()> {
    match v {
        Value::Float(f) => Err(err(path, format!("floating-point literal {f} is not allowed; use an integer or a \"p/q\" string"))),
        Value::Array(a) => a.iter().enumerate().try_for_each(|(i, x)| reject_floats(x, &format!("{path}[{i}]"))),
        Value::Table(t) => t.iter().try_for_each(|(k, x)| reject_floats(x, &join(path, k))),
        _ => Ok(()),
    }
}

/// A table together with its dotted path, for error messages.
struct Node<'a> {
    table: &'a Table,
    path: String,
}

impl<'a> Node<'a> {
    fn get(&self, key: &str) -> Result<&'a Value> {
        self.table.get(key).ok_or_else(|| err(&join(&self.path, key), "missing field"))
    }

    fn table(&self, key: &str) -> Result<Node<'a>> {
        let path = join(&self.path, key);
        match self.get(key)? {
            Value::Table(t) => Ok(Node { table: t, path }),
            _ => Err(err(&path, "expected a table")),
        }
    }

    fn opt_table(&self, key: &str) -> Result<Option<Node<'a>>> {
        if self.table.contains_key(key) { self.table(key).map(Some) } else { Ok(None) }
    }

    fn string(&self, key: &str) -> Result<&'a str> {
        self.get(key)?.as_str().ok_or_else(|| err(&join(&self.path, key), "expected a string"))
    }

    fn rational(&self, key: &str) -> Result<BigRational> {
        rational_value(self.get(key)?, &join(&self.path, key))
    }

    fn integer(&self, key: &str) -> Result<BigInt> {
        let path = join(&self.path, key);
        let q = self.rational(key)?;
        if !q.is_integer() {
            return Err(err(&path, "expected an integer"));
        }
        Ok(q.to_integer())
    }

    fn u64(&self, key: &str) -> Result<u64> {
        let path = join(&self.path, key);
        u64::try_from(self.integer(key)?).map_err(|_| err(&path, "expected a non-negative 64-bit integer"))
    }

    fn opt_u64(&self, key: &str) -> Result<Option<u64>> {
        if self.table.contains_key(key) { self.u64(key).map(Some) } else { Ok(None) }
    }

    fn rationals(&self, key: &str) -> Result<Vec<BigRational>> {
        let path = join(&self.path, key);
        let arr = self.get(key)?.as_array().ok_or_else(|| err(&path, "expected an array"))?;
        arr.iter().enumerate().map(|(i, v)| rational_value(v, &format!("{path}[{i}]"))).collect()
    }

    fn integers(&self, key: &str) -> Result<Vec<BigInt>> {
        let path = join(&self.path, key);
        self.rationals(key)?
            .into_iter()
            .enumerate()
            .map(|(i, q)| if q.is_integer() { Ok(q.to_integer()) } else { Err(err(&format!("{path}[{i}]"), "expected an integer")) })
            .collect()
    }

    fn element(&self, key: &str, k: &Arc<NumberField>) -> Result<FieldElement> {
        let path = join(&self.path, key);
        let coords = self.rationals(key)?;
        FieldElement::from_coords(k, &coords).map_err(|e| err(&path, e.to_string()))
    }
}

fn rational_value(v: &Value, path: &str) -> Result<BigRational> {
    match v {
        Value::Integer(i) => Ok(BigRational::from_integer(BigInt::from(*i))),
        Value::String(s) => parse_rational(s.trim()).ok_or_else(|| err(path, format!("`{s}` is not an integer or a fraction p/q"))),
        _ => Err(err(path, "expected an integer or a \"p/q\" string")),
    }
}

fn field(node: &Node) -> Result<Arc<NumberField>> {
    let name = node.string("name")?;
    let poly = node.integers("polynomial")?;
    let basis_path = join(&node.path, "integral_basis");
    let rows = node.get("integral_basis")?.as_array().ok_or_else(|| err(&basis_path, "expected an array of arrays"))?;
    let mut basis = Vec::with_capacity(rows.len());
    for (j, row) in rows.iter().enumerate() {
        let p = format!("{basis_path}[{j}]");
        let row = row.as_array().ok_or_else(|| err(&p, "expected an array"))?;
        basis.push(row.iter().enumerate().map(|(i, v)| rational_value(v, &format!("{p}[{i}]"))).collect::<Result<Vec<_>>>()?);
    }
    let disc = node.integer("discriminant")?;
    NumberField::new(name, poly, basis, disc).map_err(|e| err(&node.path, e.to_string()))
}

fn small(v: &BigInt, path: &str) -> Result<u64> {
    u64::try_from(v.clone()).map_err(|_| err(path, "expected a small non-negative integer"))
}

/// Parses an instance without running the validation checks.
pub fn parse_instance(text: &str) -> Result<RankOneInstance> {
    let doc: Table = text.parse().map_err(|e: toml::de::Error| err("", e.to_string()))?;
    doc.iter().try_for_each(|(k, v)| reject_floats(v, k))?;
    let root = Node { table: &doc, path: String::new() };

    let version = root.integer("schema_version")?;
    if version != BigInt::from(SCHEMA_VERSION) {
        return Err(err("schema_version", format!("unsupported version {version}; expected {SCHEMA_VERSION}")));
    }
    let name = root.string("name")?.to_string();

    let f = field(&root.table("field_f")?)?;
    let k = field(&root.table("field_k")?)?;

    let ext_node = root.table("extension")?;
    let s_path = join(&ext_node.path, "relative_degree");
    let s = small(&ext_node.integer("relative_degree")?, &s_path)? as usize;
    let ext = RelativeExtension::new(
        f,
        k.clone(),
        ext_node.element("embedding", &k)?,
        ext_node.element("alpha", &k)?,
        s,
        ext_node.element("relative_discriminant", &k)?,
    )
    .map_err(|e| err(&ext_node.path, e.to_string()))?;

    let cn = root.table("curve")?;
    let curve = WeierstrassCurve::new(cn.element("a", &k)?, cn.element("b", &k)?).map_err(|e| err("curve", e.to_string()))?;

    // The generator is not checked against the curve here: `validate` reports
    // that as a named check.
    let gn = root.table("generator")?;
    let p1 = crate::elliptic::CurvePoint::Affine { x: gn.element("x", &k)?, y: gn.element("y", &k)? };

    let an = root.table("arithmetic")?;
    let rank = match (an.opt_u64("rank_f")?, an.opt_u64("rank_k")?) {
        (Some(f), Some(k)) => RankStatus::Attested {
            rank_f: u32::try_from(f).map_err(|_| err(&join(&an.path, "rank_f"), "too large"))?,
            rank_k: u32::try_from(k).map_err(|_| err(&join(&an.path, "rank_k"), "too large"))?,
        },
        (None, None) => RankStatus::Unattested,
        _ => return Err(err(&an.path, "rank_f and rank_k must be given together or not at all")),
    };
    let tam_path = join(&an.path, "tamagawa");
    let tam_vals = an.get("tamagawa")?.as_array().ok_or_else(|| err(&tam_path, "expected an array of tables"))?;
    let mut tamagawa = Vec::with_capacity(tam_vals.len());
    for (i, v) in tam_vals.iter().enumerate() {
        let path = format!("{tam_path}[{i}]");
        let t = v.as_table().ok_or_else(|| err(&path, "expected a table"))?;
        let node = Node { table: t, path: path.clone() };
        let rp = join(&path, "residue_poly");
        let residue_poly = node.integers("residue_poly")?.iter().map(|c| small(c, &rp)).collect::<Result<Vec<_>>>()?;
        tamagawa.push(TamagawaEntry { p: node.u64("prime")?, residue_poly, index: node.u64("index")? });
    }

    let mut params = SearchParams::default();
    if let Some(cs) = root.opt_table("constants")? {
        params.c = cs.rational("c")?;
        params.c_prime = cs.rational("c_prime")?;
    }
    if let Some(b) = root.opt_table("bounds")? {
        let set = |v: &mut u64, key: &str| -> Result<()> {
            if let Some(x) = b.opt_u64(key)? {
                *v = x;
            }
            Ok(())
        };
        set(&mut params.k_bound, "k_bound")?;
        set(&mut params.m_max, "m_max")?;
        set(&mut params.k_max, "k_max")?;
        set(&mut params.norm_box, "norm_box")?;
        set(&mut params.gi_window, "gi_window")?;
        set(&mut params.trial_bound, "trial_bound")?;
        if let Some(x) = b.opt_u64("coord_box")? {
            params.coord_box = i64::try_from(x).map_err(|_| err(&join(&b.path, "coord_box"), "too large"))?;
        }
        if let Some(x) = b.opt_u64("precision")? {
            params.precision = x as usize;
        }
    }

    let mut provenance = BTreeMap::new();
    if let Some(p) = root.opt_table("provenance")? {
        for key in p.table.keys() {
            provenance.insert(key.clone(), p.string(key)?.to_string());
        }
    }

    Ok(RankOneInstance {
        name,
        ext,
        curve,
        p1,
        r: an.u64("r")?,
        ell: an.u64("ell")?,
        torsion_order: an.u64("torsion_order")?,
        index_ek_ef: an.u64("index_EK_EF")?,
        tamagawa,
        rank,
        provenance,
        params,
    })
}

/// Parses and validates; a failing validation lists every failing check.
pub fn instance_from_str(text: &str) -> Result<(RankOneInstance, CheckReport)> {
    let inst = parse_instance(text)?;
    let rep = validate_instance(&inst);
    if !rep.verdict.is_pass() {
        let failures = rep
            .checks
            .iter()
            .filter(|c| !c.verdict.is_pass())
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        return Err(Error::Validation(failures));
    }
    Ok((inst, rep))
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<RankOneInstance> {
    Ok(instance_from_str(&std::fs::read_to_string(path)?)?.0)
}

pub fn read_instance_unvalidated(path: impl AsRef<Path>) -> Result<RankOneInstance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const CURATED: &str = include_str!("../../../instances/curated.toml");

    #[test]
    fn curated_file_loads_and_validates() {
        let (inst, rep) = instance_from_str(CURATED).unwrap();
        assert!(rep.verdict.is_pass());
        assert_eq!(inst.r, 3);
        assert_eq!(inst.params.c_prime, parse_rational("1/2").unwrap());
        assert!(matches!(inst.rank, RankStatus::Attested { rank_f: 1, rank_k: 1 }));
    }

    #[test]
    fn unattested_instance_parses_and_validates() {
        let text = include_str!("../../../instances/gaussian_unattested.toml");
        let (inst, rep) = instance_from_str(text).unwrap();
        assert_eq!(inst.rank, RankStatus::Unattested);
        assert!(rep.verdict.is_pass(), "{rep:?}");
    }

    #[test]
    fn floats_are_rejected_with_their_path() {
        let text = CURATED.replacen("c_prime = \"1/2\"", "c_prime = 0.5", 1);
        match parse_instance(&text) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "constants.c_prime"),
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn failing_validation_lists_all_checks() {
        let text = CURATED.replacen("r = 3", "r = 2", 1);
        match instance_from_str(&text) {
            Err(Error::Validation(v)) => {
                assert!(v.iter().any(|m| m.starts_with("r-divisible-by-torsion-order")));
                assert!(v.iter().any(|m| m.starts_with("r-divisible-by-index")));
            }
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_values_name_the_field() {
        let text = CURATED.replacen("ell = 3", "ell = \"three\"", 1);
        let e = parse_instance(&text).unwrap_err();
        assert!(matches!(e, Error::Config { ref path, .. } if path == "arithmetic.ell"), "{e}");
    }
}
