//! JSON formats for algebras, subspaces, maps and equation systems.
//!
//! Algebra: `{"dim": n, "field": "Q" | {"gfp": p}, "brackets": [{"left": i,
//! "right": j, "out": [{"k": k, "c": "num/den"}]}]}` with 0-based indices;
//! omitted brackets are zero. Optional keys: `name`, `subalgebras` (each a
//! list of spanning vectors) and `expected` (free-form reference values).
//! Coefficients may be JSON integers or strings such as `"-3/4"`.

use std::path::Path;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::equations::{EqSystem, TermExpr};
use crate::error::{Error, Result};
use crate::fdalg::StructureAlgebra;
use crate::linalg::{Matrix, Subspace, Vector};
use crate::scalar::{Field, Scalar};

pub fn vector_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_string).collect()
}

pub fn ser_vector<S: Serializer>(v: &Vector, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

pub fn ser_opt_vector<S: Serializer>(v: &Option<Vector>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_vector(v, s),
        None => s.serialize_none(),
    }
}

pub fn vector_json(v: &[Scalar]) -> Value {
    Value::from(vector_strings(v))
}

pub fn vectors_json(vs: &[Vector]) -> Value {
    Value::from(vs.iter().map(|v| vector_json(v)).collect::<Vec<_>>())
}

/// Matrix as a list of rows.
pub fn matrix_json(m: &Matrix) -> Value {
    vectors_json(&m.to_rows())
}

pub fn subspace_json(s: &Subspace) -> Value {
    json!({ "dim": s.dim(), "basis": vectors_json(s.basis()) })
}

fn field_json(f: Field) -> Value {
    match f {
        Field::Rational => json!("Q"),
        Field::Prime(p) => json!({ "gfp": p }),
    }
}

pub fn parse_field(v: &Value) -> Result<Field> {
    match v {
        Value::String(s) => s.parse(),
        Value::Object(o) => match o.get("gfp").and_then(Value::as_u64) {
            Some(p) => Field::prime(p),
            None => Err(Error::Parse("field object must be {\"gfp\": p}".into())),
        },
        _ => Err(Error::Parse(format!("unrecognised field {v}"))),
    }
}

pub fn parse_scalar(field: Field, v: &Value, at: &str) -> Result<Scalar> {
    match v {
        Value::String(s) => field
            .parse(s)
            .map_err(|e| Error::Parse(format!("{at}: {e}"))),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(field.from_i64(i)),
            None => Err(Error::Parse(format!("{at}: coefficient {n} is not an integer; use a \"num/den\" string"))),
        },
        _ => Err(Error::Parse(format!("{at}: expected a coefficient, found {v}"))),
    }
}

pub fn parse_vector(field: Field, v: &Value, at: &str) -> Result<Vector> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{at}: expected an array of coefficients")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| parse_scalar(field, x, &format!("{at}[{i}]")))
        .collect()
}

pub fn parse_vectors(field: Field, v: &Value, at: &str) -> Result<Vec<Vector>> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{at}: expected an array of vectors")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| parse_vector(field, x, &format!("{at}[{i}]")))
        .collect()
}

fn check_len(v: &[Scalar], n: usize) -> Result<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: n,
            found: v.len(),
        })
    }
}

/// Matrix given as a list of rows.
pub fn parse_matrix(field: Field, n: usize, v: &Value, at: &str) -> Result<Matrix> {
    let rows = parse_vectors(field, v, at)?;
    if rows.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: rows.len(),
        });
    }
    Matrix::from_rows(field, n, rows)
}

/// An algebra file together with its optional metadata.
#[derive(Clone, Debug)]
pub struct AlgebraDocument {
    pub name: Option<String>,
    pub algebra: StructureAlgebra,
    pub subalgebras: Vec<Subspace>,
    pub expected: Value,
}

impl AlgebraDocument {
    /// Re-reads every coefficient in another field.
    pub fn over_field(&self, field: Field) -> Result<AlgebraDocument> {
        let algebra = self.algebra.over_field(field)?;
        let subalgebras = self
            .subalgebras
            .iter()
            .map(|s| {
                let basis = s
                    .basis()
                    .iter()
                    .map(|v| v.iter().map(|x| field.convert(x)).collect::<Result<Vector>>())
                    .collect::<Result<Vec<_>>>()?;
                Ok(Subspace::span(field, algebra.dim(), basis))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgebraDocument {
            name: self.name.clone(),
            algebra,
            subalgebras,
            expected: self.expected.clone(),
        })
    }
}

fn get<'a>(o: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value> {
    o.get(key)
        .ok_or_else(|| Error::Parse(format!("{at}: missing key \"{key}\"")))
}

fn get_index(o: &Map<String, Value>, key: &str, at: &str, n: usize) -> Result<usize> {
    let i = get(o, key, at)?
        .as_u64()
        .ok_or_else(|| Error::Parse(format!("{at}.{key}: expected a non-negative integer")))? as usize;
    if i >= n {
        return Err(Error::Parse(format!("{at}.{key}: index {i} out of range for dimension {n}")));
    }
    Ok(i)
}

pub fn algebra_from_json(v: &Value) -> Result<AlgebraDocument> {
    let o = v
        .as_object()
        .ok_or_else(|| Error::Parse("algebra: expected a JSON object".into()))?;
    let n = get(o, "dim", "algebra")?
        .as_u64()
        .ok_or_else(|| Error::Parse("algebra.dim: expected a non-negative integer".into()))? as usize;
    let field = parse_field(get(o, "field", "algebra")?)?;
    let mut constants = vec![field.zero(); n * n * n];
    let brackets = get(o, "brackets", "algebra")?
        .as_array()
        .ok_or_else(|| Error::Parse("algebra.brackets: expected an array".into()))?;
    for (b, entry) in brackets.iter().enumerate() {
        let at = format!("algebra.brackets[{b}]");
        let e = entry
            .as_object()
            .ok_or_else(|| Error::Parse(format!("{at}: expected an object")))?;
        let i = get_index(e, "left", &at, n)?;
        let j = get_index(e, "right", &at, n)?;
        let out = get(e, "out", &at)?
            .as_array()
            .ok_or_else(|| Error::Parse(format!("{at}.out: expected an array")))?;
        for (t, term) in out.iter().enumerate() {
            let tat = format!("{at}.out[{t}]");
            let to = term
                .as_object()
                .ok_or_else(|| Error::Parse(format!("{tat}: expected an object")))?;
            let k = get_index(to, "k", &tat, n)?;
            let c = parse_scalar(field, get(to, "c", &tat)?, &format!("{tat}.c"))?;
            let slot = &mut constants[(i * n + j) * n + k];
            *slot += &c;
        }
    }
    let algebra = StructureAlgebra::new(field, n, constants)?;
    let mut subalgebras = Vec::new();
    if let Some(subs) = o.get("subalgebras") {
        let subs = subs
            .as_array()
            .ok_or_else(|| Error::Parse("algebra.subalgebras: expected an array".into()))?;
        for (s, sv) in subs.iter().enumerate() {
            let vecs = parse_vectors(field, sv, &format!("algebra.subalgebras[{s}]"))?;
            for v in &vecs {
                check_len(v, n)?;
            }
            subalgebras.push(Subspace::span(field, n, vecs));
        }
    }
    Ok(AlgebraDocument {
        name: o.get("name").and_then(Value::as_str).map(str::to_string),
        algebra,
        subalgebras,
        expected: o.get("expected").cloned().unwrap_or(Value::Null),
    })
}

pub fn algebra_to_json(a: &StructureAlgebra) -> Value {
    let n = a.dim();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let out: Vec<Value> = a
                .basis_bracket(i, j)
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| json!({ "k": k, "c": c.to_string() }))
                .collect();
            if !out.is_empty() {
                brackets.push(json!({ "left": i, "right": j, "out": out }));
            }
        }
    }
    json!({ "dim": n, "field": field_json(a.field()), "brackets": brackets })
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn load_algebra(path: &Path) -> Result<AlgebraDocument> {
    algebra_from_json(&read_json(path)?)
        .map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
}

fn term_from_json(field: Field, n: usize, v: &Value, at: &str) -> Result<TermExpr> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{at}: expected a term array")))?;
    let tag = items
        .first()
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse(format!("{at}: term must start with a tag string")))?;
    let arity = |k: usize| -> Result<()> {
        if items.len() == k + 1 {
            Ok(())
        } else {
            Err(Error::Parse(format!("{at}: \"{tag}\" takes {k} argument(s)")))
        }
    };
    match tag {
        "var" => {
            arity(1)?;
            let name = items[1]
                .as_str()
                .ok_or_else(|| Error::Parse(format!("{at}: variable name must be a string")))?;
            Ok(TermExpr::Var(name.to_string()))
        }
        "const" => {
            arity(1)?;
            let c = parse_vector(field, &items[1], &format!("{at}[1]"))?;
            check_len(&c, n)?;
            Ok(TermExpr::Const(c))
        }
        "br" => {
            arity(2)?;
            Ok(TermExpr::Bracket(
                Box::new(term_from_json(field, n, &items[1], &format!("{at}[1]"))?),
                Box::new(term_from_json(field, n, &items[2], &format!("{at}[2]"))?),
            ))
        }
        "smul" => {
            arity(2)?;
            Ok(TermExpr::Scale(
                parse_scalar(field, &items[1], &format!("{at}[1]"))?,
                Box::new(term_from_json(field, n, &items[2], &format!("{at}[2]"))?),
            ))
        }
        "add" => Ok(TermExpr::Sum(
            items[1..]
                .iter()
                .enumerate()
                .map(|(i, t)| term_from_json(field, n, t, &format!("{at}[{}]", i + 1)))
                .collect::<Result<_>>()?,
        )),
        other => Err(Error::Parse(format!("{at}: unknown term tag \"{other}\""))),
    }
}

pub fn term_to_json(t: &TermExpr) -> Value {
    match t {
        TermExpr::Var(x) => json!(["var", x]),
        TermExpr::Const(c) => json!(["const", vector_strings(c)]),
        TermExpr::Bracket(a, b) => json!(["br", term_to_json(a), term_to_json(b)]),
        TermExpr::Scale(c, a) => json!(["smul", c.to_string(), term_to_json(a)]),
        TermExpr::Sum(ts) => {
            let mut v = vec![json!("add")];
            v.extend(ts.iter().map(term_to_json));
            Value::Array(v)
        }
    }
}

/// Parses `{"vars", "eqs", "neqs"}` with constants of length `n`.
pub fn system_from_json(field: Field, n: usize, v: &Value) -> Result<EqSystem> {
    let o = v
        .as_object()
        .ok_or_else(|| Error::Parse("system: expected a JSON object".into()))?;
    let vars = get(o, "vars", "system")?
        .as_array()
        .ok_or_else(|| Error::Parse("system.vars: expected an array".into()))?
        .iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Parse("system.vars: names must be strings".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let list = |key: &str| -> Result<Vec<TermExpr>> {
        match o.get(key) {
            None => Ok(Vec::new()),
            Some(Value::Array(ts)) => ts
                .iter()
                .enumerate()
                .map(|(i, t)| term_from_json(field, n, t, &format!("system.{key}[{i}]")))
                .collect(),
            Some(_) => Err(Error::Parse(format!("system.{key}: expected an array"))),
        }
    };
    EqSystem::new(vars, list("eqs")?, list("neqs")?)
}

pub fn system_to_json(s: &EqSystem) -> Value {
    json!({
        "vars": s.vars,
        "eqs": s.equations.iter().map(term_to_json).collect::<Vec<_>>(),
        "neqs": s.inequations.iter().map(term_to_json).collect::<Vec<_>>(),
    })
}

/// Deterministic pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}
