//! JSON encodings of sets and families. Integers are decimal strings on
//! output; plain JSON integers are accepted on input too.

use std::str::FromStr;

use intersets_core::{FamilySpec, Int, IntSet, ModulusChain, Unit};
use serde_json::{json, Map, Value};

/// A malformed document, located by a JSON path like `family.inner.core`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
}

fn field_err(path: &str, message: impl Into<String>) -> SchemaError {
    SchemaError::Field { path: path.to_string(), message: message.into() }
}

pub fn parse_json(text: &str) -> Result<Value, SchemaError> {
    serde_json::from_str(text).map_err(|e| SchemaError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, SchemaError> {
    v.as_object().ok_or_else(|| field_err(path, "expected an object"))
}

fn get<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, SchemaError> {
    m.get(key).ok_or_else(|| field_err(path, format!("missing field `{key}`")))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

pub fn int_of(v: &Value, path: &str) -> Result<Int, SchemaError> {
    match v {
        Value::String(s) => Int::from_str(s.trim()).map_err(|_| field_err(path, format!("`{s}` is not an integer"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            Int::from_str(&n.to_string()).map_err(|_| field_err(path, "not an integer"))
        }
        _ => Err(field_err(path, "expected an integer (decimal string)")),
    }
}

fn ints_of(v: &Value, path: &str) -> Result<Vec<Int>, SchemaError> {
    let arr = v.as_array().ok_or_else(|| field_err(path, "expected an array"))?;
    arr.iter().enumerate().map(|(i, x)| int_of(x, &format!("{path}[{i}]"))).collect()
}

fn unit_of(v: &Value, path: &str) -> Result<Unit, SchemaError> {
    v.as_i64()
        .and_then(Unit::from_sign)
        .ok_or_else(|| field_err(path, "unit must be 1 or -1"))
}

fn str_ints(xs: &[Int]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn set_from_json(v: &Value, path: &str) -> Result<IntSet, SchemaError> {
    let m = object(v, path)?;
    let kind_path = join(path, "kind");
    let kind = get(m, "kind", path)?.as_str().ok_or_else(|| field_err(&kind_path, "expected a string"))?;
    let f = |key: &str| get(m, key, path).map(|v| (v, join(path, key)));
    let bad = |e: intersets_core::intset::SetError| field_err(path, e.to_string());
    Ok(match kind {
        "empty" => IntSet::Empty,
        "all" => IntSet::all(),
        "nonzero" => IntSet::nonzero(),
        "finite" => {
            let (v, p) = f("elements")?;
            IntSet::finite(ints_of(v, &p)?)
        }
        "cofinite" => {
            let (v, p) = f("excluded")?;
            IntSet::cofinite(ints_of(v, &p)?)
        }
        "congruence" => {
            let (mv, mp) = f("modulus")?;
            let (rv, rp) = f("residues")?;
            IntSet::congruence(int_of(mv, &mp)?, ints_of(rv, &rp)?).map_err(bad)?
        }
        "tail" => {
            let (cv, cp) = f("center")?;
            let (rv, rp) = f("radius")?;
            IntSet::tail(int_of(cv, &cp)?, int_of(rv, &rp)?).map_err(bad)?
        }
        "half_tail" => {
            let (v, p) = f("threshold")?;
            IntSet::half_tail(int_of(v, &p)?)
        }
        "lower_half" => {
            let (v, p) = f("bound")?;
            IntSet::lower_half(int_of(v, &p)?)
        }
        "affine" => {
            let (uv, up) = f("unit")?;
            let (sv, sp) = f("shift")?;
            let (iv, ip) = f("set")?;
            IntSet::affine(unit_of(uv, &up)?, int_of(sv, &sp)?, set_from_json(iv, &ip)?)
        }
        "union" | "intersection" => {
            let (pv, pp) = f("parts")?;
            let arr = pv.as_array().ok_or_else(|| field_err(&pp, "expected an array"))?;
            let parts = arr
                .iter()
                .enumerate()
                .map(|(i, x)| set_from_json(x, &format!("{pp}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            if kind == "union" {
                IntSet::union(parts).map_err(bad)?
            } else {
                IntSet::intersection(parts).map_err(bad)?
            }
        }
        other => return Err(field_err(&kind_path, format!("unknown set kind `{other}`"))),
    })
}

pub fn set_to_json(s: &IntSet) -> Value {
    match s {
        IntSet::Empty => json!({ "kind": "empty" }),
        IntSet::Finite(xs) => json!({ "kind": "finite", "elements": str_ints(xs) }),
        IntSet::Cofinite(xs) => json!({ "kind": "cofinite", "excluded": str_ints(xs) }),
        IntSet::Congruence { modulus, residues } => {
            json!({ "kind": "congruence", "modulus": modulus.to_string(), "residues": str_ints(residues) })
        }
        IntSet::Tail { center, radius } => {
            json!({ "kind": "tail", "center": center.to_string(), "radius": radius.to_string() })
        }
        IntSet::HalfTail { threshold } => json!({ "kind": "half_tail", "threshold": threshold.to_string() }),
        IntSet::Affine { unit, shift, inner } => json!({
            "kind": "affine",
            "unit": unit.sign(),
            "shift": shift.to_string(),
            "set": set_to_json(inner),
        }),
        IntSet::Intersection(parts) => {
            json!({ "kind": "intersection", "parts": parts.iter().map(set_to_json).collect::<Vec<_>>() })
        }
        IntSet::Union(parts) => json!({ "kind": "union", "parts": parts.iter().map(set_to_json).collect::<Vec<_>>() }),
    }
}

fn moduli_of(v: &Value, path: &str) -> Result<ModulusChain, SchemaError> {
    if v.is_array() {
        return Ok(ModulusChain::Explicit(ints_of(v, path)?));
    }
    let m = object(v, path)?;
    let g = get(m, "geometric", path)?;
    let gp = join(path, "geometric");
    let gm = object(g, &gp)?;
    Ok(ModulusChain::Geometric {
        first: int_of(get(gm, "first", &gp)?, &join(&gp, "first"))?,
        ratio: int_of(get(gm, "ratio", &gp)?, &join(&gp, "ratio"))?,
    })
}

fn moduli_to_json(m: &ModulusChain) -> Value {
    match m {
        ModulusChain::Geometric { first, ratio } => {
            json!({ "geometric": { "first": first.to_string(), "ratio": ratio.to_string() } })
        }
        ModulusChain::Explicit(v) => str_ints(v),
    }
}

pub fn family_from_json(v: &Value, path: &str) -> Result<FamilySpec, SchemaError> {
    let m = object(v, path)?;
    let tag_path = join(path, "family");
    let tag = get(m, "family", path)?.as_str().ok_or_else(|| field_err(&tag_path, "expected a string"))?;
    let f = |key: &str| get(m, key, path).map(|v| (v, join(path, key)));
    let core_set = || -> Result<IntSet, SchemaError> {
        match m.get("core") {
            None => Ok(IntSet::Empty),
            Some(v) => set_from_json(v, &join(path, "core")),
        }
    };
    Ok(match tag {
        "tail" => FamilySpec::Tail { core: core_set()? },
        "half_tail" => FamilySpec::HalfTail { core: core_set()? },
        "congruence_chain" => {
            let (cv, cp) = f("core")?;
            let (mv, mp) = f("moduli")?;
            FamilySpec::CongruenceChain { core: ints_of(cv, &cp)?, moduli: moduli_of(mv, &mp)? }
        }
        "coset_tail" => {
            let (sv, sp) = f("step")?;
            let (bv, bp) = f("base")?;
            FamilySpec::CosetTail { step: int_of(sv, &sp)?, base: int_of(bv, &bp)? }
        }
        "enumeration" => {
            let (cv, cp) = f("core")?;
            FamilySpec::Enumeration { core: ints_of(cv, &cp)? }
        }
        "affine" => {
            let (uv, up) = f("unit")?;
            let (sv, sp) = f("shift")?;
            let (iv, ip) = f("inner")?;
            FamilySpec::Affine {
                unit: unit_of(uv, &up)?,
                shift: int_of(sv, &sp)?,
                inner: Box::new(family_from_json(iv, &ip)?),
            }
        }
        "product" => {
            let (lv, lp) = f("left")?;
            let (rv, rp) = f("right")?;
            FamilySpec::Product {
                left: Box::new(family_from_json(lv, &lp)?),
                right: Box::new(family_from_json(rv, &rp)?),
            }
        }
        "explicit" => {
            let (sv, sp) = f("sets")?;
            let arr = sv.as_array().ok_or_else(|| field_err(&sp, "expected an array"))?;
            let sets = arr
                .iter()
                .enumerate()
                .map(|(i, x)| set_from_json(x, &format!("{sp}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            FamilySpec::Explicit { sets }
        }
        other => return Err(field_err(&tag_path, format!("unknown family `{other}`"))),
    })
}

pub fn family_to_json(spec: &FamilySpec) -> Value {
    match spec {
        FamilySpec::Tail { core } => json!({ "family": "tail", "core": set_to_json(core) }),
        FamilySpec::HalfTail { core } => json!({ "family": "half_tail", "core": set_to_json(core) }),
        FamilySpec::CongruenceChain { core, moduli } => json!({
            "family": "congruence_chain",
            "core": str_ints(core),
            "moduli": moduli_to_json(moduli),
        }),
        FamilySpec::CosetTail { step, base } => {
            json!({ "family": "coset_tail", "step": step.to_string(), "base": base.to_string() })
        }
        FamilySpec::Enumeration { core } => json!({ "family": "enumeration", "core": str_ints(core) }),
        FamilySpec::Affine { unit, shift, inner } => json!({
            "family": "affine",
            "unit": unit.sign(),
            "shift": shift.to_string(),
            "inner": family_to_json(inner),
        }),
        FamilySpec::Product { left, right } => {
            json!({ "family": "product", "left": family_to_json(left), "right": family_to_json(right) })
        }
        FamilySpec::Explicit { sets } => {
            json!({ "family": "explicit", "sets": sets.iter().map(set_to_json).collect::<Vec<_>>() })
        }
    }
}

/// Parses a family document.
pub fn parse_family(text: &str) -> Result<FamilySpec, SchemaError> {
    family_from_json(&parse_json(text)?, "")
}
