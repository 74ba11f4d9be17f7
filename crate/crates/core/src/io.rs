//! JSON input and output. Rationals travel as strings `"p"` or `"p/q"`;
//! plain JSON integers are accepted on input.

use std::fmt;
use std::str::FromStr;

use num::BigInt;
use serde_json::{json, Value};

use crate::arrangement::Arrangement;
use crate::grassmann::Subspace;
use crate::linalg::{QMatrix, Rational};

/// A malformed input, tagged with the JSON field that caused it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub field: String,
    pub message: String,
}

impl InputError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        InputError {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for InputError {}

pub fn rational_to_string(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rationals_to_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational_to_string).collect()
}

pub fn matrix_to_strings(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| rationals_to_strings(m.row(r)))
        .collect()
}

pub fn parse_rational_str(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(p, q))
        }
    }
}

pub fn parse_rational(v: &Value, field: &str) -> Result<Rational, InputError> {
    match v {
        Value::String(s) => parse_rational_str(s)
            .ok_or_else(|| InputError::new(field, format!("`{s}` is not a rational p or p/q"))),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| {
                InputError::new(
                    field,
                    format!("{n} is not an integer; write fractions as \"p/q\""),
                )
            }),
        other => Err(InputError::new(
            field,
            format!("expected a rational string, found {other}"),
        )),
    }
}

fn parse_rows(
    v: &Value,
    field: &str,
    width: Option<usize>,
) -> Result<Vec<Vec<Rational>>, InputError> {
    let rows = v
        .as_array()
        .ok_or_else(|| InputError::new(field, "expected an array of rows"))?;
    rows.iter()
        .enumerate()
        .map(|(r, row)| {
            let name = format!("{field}[{r}]");
            let entries = row
                .as_array()
                .ok_or_else(|| InputError::new(&name, "expected an array of rationals"))?;
            if let Some(w) = width {
                if entries.len() != w {
                    return Err(InputError::new(
                        &name,
                        format!("has {} entries, expected {w}", entries.len()),
                    ));
                }
            }
            entries
                .iter()
                .enumerate()
                .map(|(c, e)| parse_rational(e, &format!("{name}[{c}]")))
                .collect()
        })
        .collect()
}

fn parse_count(obj: &Value, key: &str) -> Result<Option<usize>, InputError> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|x| Some(x as usize))
            .ok_or_else(|| InputError::new(key, "expected a nonnegative integer")),
    }
}

fn parse_object(text: &str) -> Result<Value, InputError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| InputError::new("json", e.to_string()))?;
    if !v.is_object() {
        return Err(InputError::new("json", "expected a JSON object"));
    }
    Ok(v)
}

/// `{"dim": n, "hyperplanes": [[...], ...]}`; the arrangement must be essential.
pub fn parse_arrangement(text: &str) -> Result<Arrangement, InputError> {
    let v = parse_object(text)?;
    let dim = parse_count(&v, "dim")?.ok_or_else(|| InputError::new("dim", "missing"))?;
    let rows = v
        .get("hyperplanes")
        .ok_or_else(|| InputError::new("hyperplanes", "missing"))?;
    let normals = parse_rows(rows, "hyperplanes", Some(dim))?;
    Arrangement::new(dim, &normals).map_err(|e| InputError::new("hyperplanes", e.to_string()))
}

/// `{"k": k, "n": n, "basis": [[...], ...]}`; `k` and `n` are optional but
/// checked when present.
pub fn parse_subspace(text: &str) -> Result<Subspace, InputError> {
    let v = parse_object(text)?;
    let rows_value = v
        .get("basis")
        .ok_or_else(|| InputError::new("basis", "missing"))?;
    let n_given = parse_count(&v, "n")?;
    let rows = parse_rows(rows_value, "basis", n_given)?;
    let n = match (n_given, rows.first()) {
        (Some(n), _) => n,
        (None, Some(r)) => r.len(),
        (None, None) => return Err(InputError::new("n", "required when the basis is empty")),
    };
    if rows.iter().any(|r| r.len() != n) {
        return Err(InputError::new("basis", "rows have different lengths"));
    }
    if let Some(k) = parse_count(&v, "k")? {
        if k != rows.len() {
            return Err(InputError::new(
                "k",
                format!("is {k} but the basis has {} rows", rows.len()),
            ));
        }
    }
    Subspace::from_rows(n, rows).map_err(|e| InputError::new("basis", e.to_string()))
}

pub fn arrangement_json(a: &Arrangement) -> Value {
    json!({
        "dim": a.dim(),
        "hyperplanes": a.hyperplanes().iter().map(|h| rationals_to_strings(h.normal())).collect::<Vec<_>>(),
    })
}

pub fn subspace_json(u: &Subspace) -> Value {
    json!({ "k": u.k(), "n": u.n(), "basis": matrix_to_strings(u.basis()) })
}

pub fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qvec};

    #[test]
    fn rational_round_trip() {
        for s in ["0", "-3", "7/2", "-1/3"] {
            assert_eq!(rational_to_string(&parse_rational_str(s).unwrap()), s);
        }
        assert_eq!(parse_rational_str("4/2"), Some(q(2)));
        assert_eq!(parse_rational_str("1/0"), None);
        assert_eq!(parse_rational_str("x"), None);
        assert_eq!(parse_rational(&json!(5), "f"), Ok(q(5)));
        assert!(parse_rational(&json!(0.5), "f").is_err());
    }

    #[test]
    fn arrangement_parsing() {
        let a =
            parse_arrangement(r#"{"dim": 2, "hyperplanes": [["1","0"], [0, "-1/2"]]}"#).unwrap();
        assert_eq!(a, Arrangement::boolean(2));
        assert_eq!(
            parse_arrangement(&arrangement_json(&a).to_string()).unwrap(),
            a
        );

        let field = |t: &str| parse_arrangement(t).unwrap_err().field;
        assert_eq!(field("not json"), "json");
        assert_eq!(field(r#"{"hyperplanes": []}"#), "dim");
        assert_eq!(field(r#"{"dim": 2}"#), "hyperplanes");
        assert_eq!(
            field(r#"{"dim": 2, "hyperplanes": [["1"]]}"#),
            "hyperplanes[0]"
        );
        assert_eq!(
            field(r#"{"dim": 2, "hyperplanes": [["1", "a"]]}"#),
            "hyperplanes[0][1]"
        );
        assert_eq!(
            field(r#"{"dim": 2, "hyperplanes": [["1", "0"]]}"#),
            "hyperplanes"
        );
    }

    #[test]
    fn subspace_parsing() {
        let u =
            parse_subspace(r#"{"k": 2, "n": 4, "basis": [["1","0","1","0"],["0","1","0","1"]]}"#)
                .unwrap();
        assert_eq!(u.basis().row(1), qvec(&[0, 1, 0, 1]).as_slice());
        assert_eq!(parse_subspace(&subspace_json(&u).to_string()).unwrap(), u);
        let field = |t: &str| parse_subspace(t).unwrap_err().field;
        assert_eq!(field(r#"{"k": 1, "basis": [["1","0"],["0","1"]]}"#), "k");
        assert_eq!(field(r#"{"basis": [["1","2"],["2","4"]]}"#), "basis");
        assert_eq!(field(r#"{"basis": []}"#), "n");
    }
}
