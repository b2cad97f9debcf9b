//! JSON serialization of presentations.
//!
//! Document layout (schema tag `extrifact/1`):
//!
//! ```json
//! {
//!   "schema": "extrifact/1",
//!   "field_char": 2,
//!   "kind": "full",
//!   "objects": ["S1", "P1", "S2"],
//!   "hom":  { "S1|S1": 1, "S1|P1": 0, ... },
//!   "E":    { "S1|S2": 1, ... },
//!   "Eneg": { ... },
//!   "ambient": { "category": "module", "n": 2, "m": 1, "dual": false }
//! }
//! ```
//!
//! Every ordered label pair must appear in each table; a missing key is an
//! input error, never an implicit zero, and unknown keys are rejected. The
//! `dims` kind omits `ambient` and loads as a table-only presentation;
//! `full` requires `ambient`, rebuilds the realization from it, and then
//! insists the stored tables match the rebuilt ones. Products store a
//! factor list in place of `n`/`m`.

use super::{FactorInfo, Presentation};
use crate::exactlin::Field;
use crate::{Error, Result};
use serde_json::{json, Map, Value};

/// Serializes to the document format; inverse of [`load_presentation`].
pub fn serialize_presentation(p: &Presentation) -> Value {
    let table = |get: &dyn Fn(usize, usize) -> usize| -> Value {
        let mut m = Map::new();
        for (i, x) in p.labels().iter().enumerate() {
            for (j, y) in p.labels().iter().enumerate() {
                m.insert(format!("{x}|{y}"), json!(get(i, j)));
            }
        }
        Value::Object(m)
    };
    let mut doc = Map::new();
    doc.insert("schema".into(), json!("extrifact/1"));
    doc.insert("field_char".into(), json!(p.field().characteristic()));
    doc.insert(
        "kind".into(),
        json!(if p.is_full() { "full" } else { "dims" }),
    );
    doc.insert("objects".into(), json!(p.labels()));
    doc.insert("hom".into(), table(&|i, j| p.hom_dim(i, j)));
    doc.insert("E".into(), table(&|i, j| p.e_dim(i, j)));
    doc.insert("Eneg".into(), table(&|i, j| p.eneg_dim(i, j)));
    if p.is_full() {
        let factors = p.factors();
        let ambient = if factors.len() == 1 && factors[0].prefix.is_empty() {
            json!({
                "category": p.kind_tag(),
                "n": factors[0].n,
                "m": factors[0].m,
                "dual": factors[0].dual,
            })
        } else {
            json!({
                "category": p.kind_tag(),
                "factors": factors
                    .iter()
                    .map(|f| json!({
                        "prefix": f.prefix,
                        "n": f.n,
                        "m": f.m,
                        "dual": f.dual,
                    }))
                    .collect::<Vec<_>>(),
            })
        };
        doc.insert("ambient".into(), ambient);
    }
    Value::Object(doc)
}

fn get_str<'a>(doc: &'a Map<String, Value>, key: &str) -> Result<&'a str> {
    doc.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::input(format!("missing or non-string field {key:?}")))
}

fn get_u64(doc: &Map<String, Value>, key: &str) -> Result<u64> {
    doc.get(key)
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::input(format!("missing or non-integer field {key:?}")))
}

fn read_table(doc: &Map<String, Value>, key: &str, labels: &[String]) -> Result<Vec<Vec<usize>>> {
    let Some(Value::Object(m)) = doc.get(key) else {
        return Err(Error::input(format!("missing or non-object table {key:?}")));
    };
    let k = labels.len();
    let mut out = vec![vec![0usize; k]; k];
    for (i, x) in labels.iter().enumerate() {
        for (j, y) in labels.iter().enumerate() {
            let pair = format!("{x}|{y}");
            let v = m
                .get(&pair)
                .ok_or_else(|| Error::input(format!("table {key:?} misses entry {pair:?}")))?;
            out[i][j] = v.as_u64().ok_or_else(|| {
                Error::input(format!("table {key:?} entry {pair:?} not an integer"))
            })? as usize;
        }
    }
    if m.len() != k * k {
        return Err(Error::input(format!(
            "table {key:?} has {} entries, expected {}",
            m.len(),
            k * k
        )));
    }
    Ok(out)
}

fn read_factor(v: &Value) -> Result<FactorInfo> {
    let Value::Object(f) = v else {
        return Err(Error::input("factor entry must be an object"));
    };
    Ok(FactorInfo {
        prefix: f
            .get("prefix")
            .and_then(Value::as_str)
            .unwrap_or("")
            .to_string(),
        n: get_u64(f, "n")? as usize,
        m: get_u64(f, "m")? as usize,
        dual: f.get("dual").and_then(Value::as_bool).unwrap_or(false),
    })
}

/// Parses a presentation document. Full documents are rebuilt from their
/// ambient description and cross-checked against the stored tables.
pub fn load_presentation(doc: &Value) -> Result<Presentation> {
    let Value::Object(doc) = doc else {
        return Err(Error::input("presentation document must be an object"));
    };
    if get_str(doc, "schema")? != "extrifact/1" {
        return Err(Error::input("unsupported schema tag"));
    }
    let field = Field::new(get_u64(doc, "field_char")?)?;
    let kind = get_str(doc, "kind")?;
    let Some(Value::Array(objs)) = doc.get("objects") else {
        return Err(Error::input("missing object list"));
    };
    let labels: Vec<String> = objs
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::input("object labels must be strings"))
        })
        .collect::<Result<_>>()?;
    let hom = read_table(doc, "hom", &labels)?;
    let e = read_table(doc, "E", &labels)?;
    let eneg = read_table(doc, "Eneg", &labels)?;
    match kind {
        "dims" => Presentation::from_tables(field, labels, hom, e, eneg),
        "full" => {
            let Some(Value::Object(amb)) = doc.get("ambient") else {
                return Err(Error::input("full presentations require an ambient block"));
            };
            let category = amb
                .get("category")
                .and_then(Value::as_str)
                .unwrap_or("extended");
            let factors = if let Some(Value::Array(fs)) = amb.get("factors") {
                fs.iter().map(read_factor).collect::<Result<Vec<_>>>()?
            } else {
                vec![FactorInfo {
                    prefix: String::new(),
                    n: get_u64(amb, "n")? as usize,
                    m: get_u64(amb, "m")? as usize,
                    dual: amb.get("dual").and_then(Value::as_bool).unwrap_or(false),
                }]
            };
            let built = Presentation::from_factors(field, category, factors);
            if built.labels() != labels.as_slice() {
                return Err(Error::input(format!(
                    "object list does not match the ambient description (expected {:?})",
                    built.labels()
                )));
            }
            for (name, stored, of_built) in [
                ("hom", &hom, &built.hom),
                ("E", &e, &built.e),
                ("Eneg", &eneg, &built.eneg),
            ] {
                if stored != of_built {
                    let (i, j) = first_mismatch(stored, of_built);
                    return Err(Error::input(format!(
                        "table {name:?} disagrees with the ambient value at {}|{}",
                        labels[i], labels[j]
                    )));
                }
            }
            Ok(built)
        }
        other => Err(Error::input(format!("unknown kind {other:?}"))),
    }
}

fn first_mismatch(a: &[Vec<usize>], b: &[Vec<usize>]) -> (usize, usize) {
    for (i, (ra, rb)) in a.iter().zip(b).enumerate() {
        for (j, (x, y)) in ra.iter().zip(rb).enumerate() {
            if x != y {
                return (i, j);
            }
        }
    }
    unreachable!("tables compared unequal must differ somewhere")
}

#[cfg(test)]
mod tests {
    use super::super::{build_extended_category, build_module_category, Presentation};
    use super::*;

    fn f2() -> Field {
        Field::new(2).unwrap()
    }

    #[test]
    fn round_trip_module_category() {
        let p = build_module_category(f2(), 2);
        let doc = serialize_presentation(&p);
        let q = load_presentation(&doc).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn round_trip_extended_and_dual() {
        let p = build_extended_category(Field::new(5).unwrap(), 3, 2);
        assert_eq!(load_presentation(&serialize_presentation(&p)).unwrap(), p);
        let d = p.dualize().unwrap();
        assert_eq!(load_presentation(&serialize_presentation(&d)).unwrap(), d);
    }

    #[test]
    fn round_trip_product() {
        let a = build_module_category(f2(), 1);
        let c = build_module_category(f2(), 2);
        let b = Presentation::product(&[("A.", &a), ("C.", &c)]).unwrap();
        assert_eq!(load_presentation(&serialize_presentation(&b)).unwrap(), b);
    }

    #[test]
    fn missing_pair_key_is_an_error() {
        let p = build_module_category(f2(), 2);
        let mut doc = serialize_presentation(&p);
        doc.as_object_mut()
            .unwrap()
            .get_mut("hom")
            .unwrap()
            .as_object_mut()
            .unwrap()
            .remove("S1|P1");
        let err = load_presentation(&doc).unwrap_err().to_string();
        assert!(err.contains("S1|P1"), "got: {err}");
    }

    #[test]
    fn unknown_pair_key_is_an_error() {
        let p = build_module_category(f2(), 2);
        let mut doc = serialize_presentation(&p);
        doc.as_object_mut()
            .unwrap()
            .get_mut("hom")
            .unwrap()
            .as_object_mut()
            .unwrap()
            .insert("S1|Q9".into(), serde_json::json!(1));
        assert!(load_presentation(&doc).is_err());
    }

    #[test]
    fn table_mismatch_with_ambient_is_rejected() {
        let p = build_module_category(f2(), 2);
        let mut doc = serialize_presentation(&p);
        *doc.as_object_mut()
            .unwrap()
            .get_mut("E")
            .unwrap()
            .as_object_mut()
            .unwrap()
            .get_mut("S1|S2")
            .unwrap() = serde_json::json!(0);
        let err = load_presentation(&doc).unwrap_err().to_string();
        assert!(err.contains("S1|S2"), "got: {err}");
    }

    #[test]
    fn dims_documents_load_without_ambient() {
        let p = build_module_category(f2(), 2);
        let mut doc = serialize_presentation(&p);
        let obj = doc.as_object_mut().unwrap();
        obj.remove("ambient");
        *obj.get_mut("kind").unwrap() = serde_json::json!("dims");
        let q = load_presentation(&doc).unwrap();
        assert!(!q.is_full());
        assert_eq!(q.hom_dim(0, 1), p.hom_dim(0, 1));
    }

    #[test]
    fn nonprime_characteristic_is_rejected() {
        let p = build_module_category(f2(), 2);
        let mut doc = serialize_presentation(&p);
        *doc.as_object_mut().unwrap().get_mut("field_char").unwrap() = serde_json::json!(6);
        assert!(load_presentation(&doc).is_err());
    }
}
