//! `HReport` as JSON and TSV.

use std::str::FromStr;

use intersets_core::hset::{HReport, HStatus, HVerdict, Witness};
use intersets_core::{Int, Window};
use serde_json::{json, Value};

use crate::schema::{int_of, SchemaError};

pub const TSV_HEADER: &str = "h\tstatus\twitness\tevidence\tQ\twindow";

fn witness_to_json(w: &Witness) -> Value {
    match w {
        Witness::Int(x) => Value::String(x.to_string()),
        Witness::Pair(x, y) => json!([x.to_string(), y.to_string()]),
    }
}

fn witness_from_json(v: &Value, path: &str) -> Result<Witness, SchemaError> {
    match v {
        Value::Array(xs) if xs.len() == 2 => {
            Ok(Witness::Pair(int_of(&xs[0], &format!("{path}[0]"))?, int_of(&xs[1], &format!("{path}[1]"))?))
        }
        other => Ok(Witness::Int(int_of(other, path)?)),
    }
}

fn window_to_json(w: &Window) -> Value {
    json!([w.lo.to_string(), w.hi.to_string()])
}

fn window_from_json(v: &Value, path: &str) -> Result<Window, SchemaError> {
    let bad = || SchemaError::Field { path: path.into(), message: "expected [lo, hi]".into() };
    let xs = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
    let (lo, hi) = (int_of(&xs[0], path)?, int_of(&xs[1], path)?);
    Window::new(lo, hi).map_err(|e| SchemaError::Field { path: path.into(), message: e.to_string() })
}

fn verdict_to_json(v: &HVerdict) -> Value {
    let mut o = json!({
        "h": v.h,
        "status": v.status.label(),
        "witness": v.status.witness().map(witness_to_json),
        "evidence": v.evidence,
        "member": v.member.as_ref().map(witness_to_json),
        "empty_sum": v.empty_sum,
    });
    match &v.status {
        HStatus::EmpiricalEqual { q, window } => {
            o["Q"] = json!(q);
            o["window"] = window_to_json(window);
        }
        HStatus::Undetermined { reason } => o["reason"] = json!(reason),
        _ => {}
    }
    o
}

pub fn report_to_json(r: &HReport) -> Value {
    json!({
        "family": r.family,
        "h_max": r.h_max,
        "Q": r.q,
        "window": window_to_json(&r.window),
        "gen_radius": r.gen_radius.to_string(),
        "verdicts": r.verdicts.iter().map(verdict_to_json).collect::<Vec<_>>(),
    })
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value, SchemaError> {
    v.get(key).ok_or_else(|| SchemaError::Field { path: path.into(), message: format!("missing field `{key}`") })
}

fn usize_of(v: &Value, path: &str) -> Result<usize, SchemaError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| SchemaError::Field { path: path.into(), message: "expected a nonnegative integer".into() })
}

fn str_of<'a>(v: &'a Value, path: &str) -> Result<&'a str, SchemaError> {
    v.as_str().ok_or_else(|| SchemaError::Field { path: path.into(), message: "expected a string".into() })
}

fn verdict_from_json(v: &Value, path: &str) -> Result<HVerdict, SchemaError> {
    let h = usize_of(field(v, "h", path)?, &format!("{path}.h"))?;
    let status = match str_of(field(v, "status", path)?, &format!("{path}.status"))? {
        "certified_in" => HStatus::CertifiedIn,
        "certified_out" => HStatus::CertifiedOut {
            witness: witness_from_json(field(v, "witness", path)?, &format!("{path}.witness"))?,
        },
        "empirical_equal" => HStatus::EmpiricalEqual {
            q: usize_of(field(v, "Q", path)?, &format!("{path}.Q"))?,
            window: window_from_json(field(v, "window", path)?, &format!("{path}.window"))?,
        },
        "undetermined" => HStatus::Undetermined {
            reason: str_of(field(v, "reason", path)?, &format!("{path}.reason"))?.to_string(),
        },
        other => {
            return Err(SchemaError::Field { path: format!("{path}.status"), message: format!("unknown status `{other}`") })
        }
    };
    let evidence = field(v, "evidence", path)?
        .as_array()
        .ok_or_else(|| SchemaError::Field { path: format!("{path}.evidence"), message: "expected an array".into() })?
        .iter()
        .map(|e| str_of(e, &format!("{path}.evidence")).map(String::from))
        .collect::<Result<Vec<_>, _>>()?;
    let member = match v.get("member") {
        None | Some(Value::Null) => None,
        Some(m) => Some(witness_from_json(m, &format!("{path}.member"))?),
    };
    let empty_sum = v.get("empty_sum").and_then(Value::as_bool).unwrap_or(false);
    Ok(HVerdict { h, status, evidence, member, empty_sum })
}

/// Parses and re-validates a report written by [`report_to_json`].
pub fn report_from_json(v: &Value) -> Result<HReport, SchemaError> {
    let verdicts = field(v, "verdicts", "")?
        .as_array()
        .ok_or_else(|| SchemaError::Field { path: "verdicts".into(), message: "expected an array".into() })?
        .iter()
        .enumerate()
        .map(|(i, x)| verdict_from_json(x, &format!("verdicts[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let h_max = usize_of(field(v, "h_max", "")?, "h_max")?;
    for (i, vd) in verdicts.iter().enumerate() {
        if vd.h != i + 1 {
            return Err(SchemaError::Field { path: format!("verdicts[{i}].h"), message: format!("expected h = {}", i + 1) });
        }
    }
    if verdicts.len() != h_max {
        return Err(SchemaError::Field { path: "verdicts".into(), message: format!("expected {h_max} rows") });
    }
    let window = window_from_json(field(v, "window", "")?, "window")?;
    let gen_radius = Int::from_str(str_of(field(v, "gen_radius", "")?, "gen_radius")?)
        .map_err(|_| SchemaError::Field { path: "gen_radius".into(), message: "not an integer".into() })?;
    if gen_radius < window.radius() {
        return Err(SchemaError::Field { path: "gen_radius".into(), message: "below the window radius".into() });
    }
    Ok(HReport {
        family: str_of(field(v, "family", "")?, "family")?.to_string(),
        h_max,
        q: usize_of(field(v, "Q", "")?, "Q")?,
        window,
        gen_radius,
        verdicts,
    })
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

pub fn report_to_tsv(r: &HReport) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    for v in &r.verdicts {
        let witness = v.status.witness().map(|w| w.to_string()).unwrap_or_else(|| "-".into());
        let mut evidence = v.evidence.clone();
        if let HStatus::Undetermined { reason } = &v.status {
            evidence.push(format!("reason={reason}"));
        }
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}:{}\n",
            v.h,
            v.status.label(),
            witness,
            clean(&evidence.join("; ")),
            r.q,
            r.window.lo,
            r.window.hi
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use intersets_core::hset::{compute_h, AnalyzerConfig};
    use intersets_core::{Family, FamilySpec, IntSet};

    fn sample() -> HReport {
        let f = Family::new(FamilySpec::Tail { core: IntSet::Empty }).unwrap();
        compute_h(&f, &AnalyzerConfig { h_max: 3, q: 5, ..AnalyzerConfig::default() }).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = report_to_json(&r).to_string();
        let back = report_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn tsv_has_fixed_columns() {
        let tsv = report_to_tsv(&sample());
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines[0], TSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("2\tcertified_out\t0\t"));
        assert!(lines.iter().all(|l| l.split('\t').count() == 6));
    }

    #[test]
    fn tampered_reports_are_rejected() {
        let mut v = report_to_json(&sample());
        v["verdicts"][1]["h"] = json!(5);
        assert!(report_from_json(&v).is_err());
    }
}
