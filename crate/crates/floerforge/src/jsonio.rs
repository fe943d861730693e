//! Canonical JSON for the external complex and module formats. Output is
//! byte-deterministic: generators sorted by id, differential entries by
//! (from, to), grading integers rendered as decimal strings.

use std::collections::BTreeMap;

use crate::complexes::{BifilteredComplex, BigradedModule, Grading};
use crate::exactalg::{FieldKind, FieldScalar, HalfInt};

pub fn complex_to_json(c: &BifilteredComplex) -> String {
    let mut gens: Vec<(&str, Grading)> =
        c.generators().iter().map(|g| (g.id.as_str(), g.gr)).collect();
    gens.sort_by_key(|(id, _)| id.to_string());
    let gen_parts: Vec<String> = gens
        .iter()
        .map(|(id, gr)| {
            format!(
                "{{\"id\":{},\"gr\":[\"{}\",\"{}\",\"{}\"]}}",
                json_string(id),
                gr.a1.doubled(),
                gr.a2.doubled(),
                gr.maslov.doubled()
            )
        })
        .collect();
    let mut arrows: Vec<(String, String, String)> = c
        .diff_entries()
        .map(|(s, t, coeff)| {
            (
                c.generators()[s].id.clone(),
                c.generators()[t].id.clone(),
                coeff.to_string(),
            )
        })
        .collect();
    arrows.sort();
    let diff_parts: Vec<String> = arrows
        .iter()
        .map(|(f, t, coeff)| {
            format!(
                "{{\"from\":{},\"to\":{},\"c\":{}}}",
                json_string(f),
                json_string(t),
                json_string(coeff)
            )
        })
        .collect();
    format!(
        "{{\"field\":\"{}\",\"generators\":[{}],\"diff\":[{}]}}",
        c.field,
        gen_parts.join(","),
        diff_parts.join(",")
    )
}

pub fn complex_from_json(text: &str) -> Result<BifilteredComplex, String> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| format!("bad JSON: {}", e))?;
    let field = match v.get("field").and_then(|f| f.as_str()) {
        Some("GF2") => FieldKind::GF2,
        Some("Q") => FieldKind::Q,
        other => return Err(format!("unknown field {:?}", other)),
    };
    let mut c = BifilteredComplex::new(field);
    let gens = v
        .get("generators")
        .and_then(|g| g.as_array())
        .ok_or("missing generators")?;
    for g in gens {
        let id = g.get("id").and_then(|x| x.as_str()).ok_or("generator missing id")?;
        let gr = g.get("gr").and_then(|x| x.as_array()).ok_or("generator missing gr")?;
        if gr.len() != 3 {
            return Err(format!("generator {} has malformed gr", id));
        }
        let mut vals = [0i64; 3];
        for (k, x) in gr.iter().enumerate() {
            vals[k] = match x {
                serde_json::Value::Number(n) => {
                    n.as_i64().ok_or_else(|| format!("bad grading in {}", id))?
                }
                serde_json::Value::String(s) => {
                    s.parse().map_err(|_| format!("bad grading string in {}", id))?
                }
                _ => return Err(format!("bad grading entry in {}", id)),
            };
        }
        c.add_generator(
            id,
            Grading::new(
                HalfInt::from_doubled(vals[0]),
                HalfInt::from_doubled(vals[1]),
                HalfInt::from_doubled(vals[2]),
            ),
        );
    }
    if let Some(diff) = v.get("diff").and_then(|d| d.as_array()) {
        for a in diff {
            let from = a.get("from").and_then(|x| x.as_str()).ok_or("arrow missing from")?;
            let to = a.get("to").and_then(|x| x.as_str()).ok_or("arrow missing to")?;
            let coeff = a.get("c").and_then(|x| x.as_str()).unwrap_or("1");
            let coeff = FieldScalar::parse(field, coeff)?;
            if c.index_of(from).is_none() || c.index_of(to).is_none() {
                return Err(format!("arrow references unknown generator {} -> {}", from, to));
            }
            c.add_arrow(from, to, coeff);
        }
    }
    Ok(c)
}

pub fn module_to_json(m: &BigradedModule) -> String {
    let parts: Vec<String> = m
        .ranks
        .iter()
        .map(|(g, r)| {
            format!(
                "{{\"gr\":[\"{}\",\"{}\",\"{}\"],\"rank\":{}}}",
                g.a1.doubled(),
                g.a2.doubled(),
                g.maslov.doubled(),
                r
            )
        })
        .collect();
    format!("{{\"ranks\":[{}]}}", parts.join(","))
}

pub fn hfk_to_json(hfk: &BTreeMap<(HalfInt, HalfInt), usize>) -> String {
    let parts: Vec<String> = hfk
        .iter()
        .map(|((a, m), r)| {
            format!(
                "{{\"alexander\":\"{}\",\"maslov\":\"{}\",\"rank\":{}}}",
                a.doubled(),
                m.doubled(),
                r
            )
        })
        .collect();
    format!("{{\"ranks\":[{}]}}", parts.join(","))
}

pub fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use num_traits::One;

    #[test]
    fn complex_round_trip_canonical() {
        let mut c = BifilteredComplex::new(FieldKind::Q);
        c.add_generator("b", Grading::new(HalfInt::from_int(0), HalfInt::ZERO, HalfInt::from_int(-1)));
        c.add_generator("a", Grading::new(HalfInt::from_int(1), HalfInt::ZERO, HalfInt::from_int(0)));
        c.add_arrow("a", "b", FieldScalar::Q(rat(-3, 2)));
        let s = complex_to_json(&c);
        assert!(s.contains("\"-3/2\""));
        let back = complex_from_json(&s).unwrap();
        assert_eq!(complex_to_json(&back), s);
        assert!(back.is_valid());
        assert!(rat(1, 1).is_one());
    }

    #[test]
    fn rejects_malformed() {
        assert!(complex_from_json("{}").is_err());
        assert!(complex_from_json("{\"field\":\"R\",\"generators\":[]}").is_err());
        let missing = "{\"field\":\"GF2\",\"generators\":[],\"diff\":[{\"from\":\"x\",\"to\":\"y\",\"c\":\"1\"}]}";
        assert!(complex_from_json(missing).is_err());
    }
}
