//! JSON group spec files.
//!
//! ```json
//! {"field": {"Fp": 5}, "dim": 3,
//!  "generators": [[[4,0,0],[0,2,0],[0,0,1]], ...],
//!  "names": ["g", "t1", "t2"], "n_basis": [...], "lie_algebra": [...], "cap": 1000}
//! ```
//!
//! Entries are integers or `"p/q"` strings. Every diagnostic names the JSON
//! path of the offending value, or the line and column for syntax errors.

use std::fmt;
use std::path::Path;

use powroot_core::{Field, GroupSpec, Matrix};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for SpecError {}

fn err<T>(path: &str, message: impl Into<String>) -> Result<T, SpecError> {
    Err(SpecError { path: path.to_string(), message: message.into() })
}

/// A parsed but not yet validated spec file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFile {
    pub field: Field,
    pub dim: usize,
    pub generators: Vec<Matrix>,
    pub names: Vec<String>,
    pub lie_algebra: Option<Vec<Matrix>>,
    /// Matrices `X_i` read by the word syntax `n(c_1,...)` as `I + Σ c_i X_i`.
    pub n_basis: Option<Vec<Matrix>>,
    pub cap: Option<usize>,
}

const KEYS: &[&str] = &["field", "dim", "generators", "names", "lie_algebra", "n_basis", "cap"];

impl SpecFile {
    pub fn load(path: &Path) -> Result<SpecFile, SpecError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SpecError { path: path.display().to_string(), message: e.to_string() })?;
        SpecFile::parse(&text)
    }

    pub fn parse(text: &str) -> Result<SpecFile, SpecError> {
        let root: Value = serde_json::from_str(text).map_err(|e| SpecError {
            path: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        let Value::Object(obj) = &root else {
            return err("$", "expected a JSON object");
        };
        for key in obj.keys() {
            if !KEYS.contains(&key.as_str()) {
                return err(&format!("$.{key}"), format!("unknown key (expected one of {})", KEYS.join(", ")));
            }
        }
        let field = parse_field(obj.get("field").ok_or(SpecError { path: "$.field".into(), message: "missing".into() })?)?;
        let dim = match obj.get("dim") {
            Some(Value::Number(n)) if n.as_u64().is_some_and(|d| d >= 1) => n.as_u64().unwrap() as usize,
            Some(_) => return err("$.dim", "expected a positive integer"),
            None => return err("$.dim", "missing"),
        };
        let generators = match obj.get("generators") {
            Some(v) => parse_matrix_list(field, dim, v, "$.generators")?,
            None => return err("$.generators", "missing"),
        };
        let names = match obj.get("names") {
            None => (1..=generators.len()).map(|i| format!("g{i}")).collect(),
            Some(Value::Array(items)) => {
                if items.len() != generators.len() {
                    return err("$.names", format!("{} names for {} generators", items.len(), generators.len()));
                }
                let mut names = Vec::new();
                for (i, item) in items.iter().enumerate() {
                    let path = format!("$.names[{i}]");
                    let Value::String(s) = item else {
                        return err(&path, "expected a string");
                    };
                    let valid = s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !valid || s == "e" || s == "n" {
                        return err(&path, format!("{s:?} is not a usable generator name"));
                    }
                    if names.contains(s) {
                        return err(&path, format!("duplicate name {s:?}"));
                    }
                    names.push(s.clone());
                }
                names
            }
            Some(_) => return err("$.names", "expected a list of strings"),
        };
        let lie_algebra = obj.get("lie_algebra").map(|v| parse_matrix_list(field, dim, v, "$.lie_algebra")).transpose()?;
        let n_basis = obj.get("n_basis").map(|v| parse_matrix_list(field, dim, v, "$.n_basis")).transpose()?;
        if let Some(basis) = &n_basis {
            for (i, m) in basis.iter().enumerate() {
                if !m.is_strictly_upper_triangular() {
                    return err(&format!("$.n_basis[{i}]"), "expected a strictly upper-triangular matrix");
                }
            }
        }
        let cap = match obj.get("cap") {
            None => None,
            Some(Value::Number(n)) if n.as_u64().is_some_and(|c| c >= 1) => Some(n.as_u64().unwrap() as usize),
            Some(_) => return err("$.cap", "expected a positive integer"),
        };
        Ok(SpecFile { field, dim, generators, names, lie_algebra, n_basis, cap })
    }

    pub fn to_group_spec(&self, cap: Option<usize>) -> GroupSpec {
        GroupSpec {
            field: self.field,
            dim: self.dim,
            generators: self.generators.clone(),
            lie_algebra: self.lie_algebra.clone(),
            cap: cap.or(self.cap),
        }
    }

    /// Basis behind `n(...)`: `n_basis`, else the Lie algebra.
    pub fn word_basis(&self) -> Option<&[Matrix]> {
        self.n_basis.as_deref().or(self.lie_algebra.as_deref())
    }
}

fn parse_field(v: &Value) -> Result<Field, SpecError> {
    match v {
        Value::String(s) if s == "Q" => Ok(Field::Rational),
        Value::Object(o) if o.len() == 1 && o.contains_key("Fp") => match &o["Fp"] {
            Value::Number(n) if n.as_u64().is_some() => {
                Field::prime(n.as_u64().unwrap()).map_err(|e| SpecError { path: "$.field.Fp".into(), message: e.to_string() })
            }
            _ => err("$.field.Fp", "expected a prime"),
        },
        _ => err("$.field", r#"expected "Q" or {"Fp": p}"#),
    }
}

pub fn parse_scalar(field: Field, v: &Value, path: &str) -> Result<powroot_core::FieldScalar, SpecError> {
    let text = match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return err(path, r#"expected an integer or a "p/q" string"#),
    };
    field.parse(&text).map_err(|e| SpecError { path: path.to_string(), message: e.to_string() })
}

pub fn parse_matrix(field: Field, dim: usize, v: &Value, path: &str) -> Result<Matrix, SpecError> {
    let Value::Array(rows) = v else {
        return err(path, "expected a matrix (list of rows)");
    };
    if rows.len() != dim {
        return err(path, format!("expected {dim} rows, found {}", rows.len()));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let Value::Array(entries) = row else {
            return err(&rpath, "expected a row (list of entries)");
        };
        if entries.len() != dim {
            return err(&rpath, format!("expected {dim} entries, found {}", entries.len()));
        }
        for (j, e) in entries.iter().enumerate() {
            data.push(parse_scalar(field, e, &format!("{rpath}[{j}]"))?);
        }
    }
    Ok(Matrix::new(field, dim, dim, data).expect("shape checked"))
}

fn parse_matrix_list(field: Field, dim: usize, v: &Value, path: &str) -> Result<Vec<Matrix>, SpecError> {
    let Value::Array(items) = v else {
        return err(path, "expected a list of matrices");
    };
    items.iter().enumerate().map(|(i, m)| parse_matrix(field, dim, m, &format!("{path}[{i}]"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const G5: &str = r#"{"field": {"Fp": 5}, "dim": 3,
        "generators": [[[4,0,0],[0,2,0],[0,0,1]], [[1,0,1],[0,1,0],[0,0,1]], [[1,0,0],[0,1,1],[0,0,1]]]}"#;

    #[test]
    fn parses_g5() {
        let s = SpecFile::parse(G5).unwrap();
        assert_eq!(s.field, Field::prime(5).unwrap());
        assert_eq!(s.names, vec!["g1", "g2", "g3"]);
        assert_eq!(s.generators[0].get(0, 0), &s.field.from_i64(4));
        assert!(s.to_group_spec(None).validate().is_ok());
    }

    #[test]
    fn rationals_as_strings() {
        let s = SpecFile::parse(r#"{"field": "Q", "dim": 2, "generators": [[["1/2", 0], [0, "-3"]]], "lie_algebra": [[[0,1],[0,0]]]}"#)
            .unwrap();
        assert_eq!(s.generators[0].get(0, 0).to_string(), "1/2");
        assert_eq!(s.generators[0].get(1, 1).to_string(), "-3");
    }

    #[test]
    fn anchored_diagnostics() {
        let e = SpecFile::parse(r#"{"field": "Q", "dim": 2, "generators": [[[1, 0], [0, 1.5]]]}"#).unwrap_err();
        assert_eq!(e.path, "$.generators[0][1][1]");
        let e = SpecFile::parse(r#"{"field": "Q", "dim": 2, "generators": [[[1, 0], [0]]]}"#).unwrap_err();
        assert_eq!(e.path, "$.generators[0][1]");
        let e = SpecFile::parse(r#"{"field": {"Fp": 6}, "dim": 2, "generators": []}"#).unwrap_err();
        assert_eq!(e.path, "$.field.Fp");
        let e = SpecFile::parse(r#"{"field": "Q", "dim": 2, "generators": [], "colour": 1}"#).unwrap_err();
        assert_eq!(e.path, "$.colour");
        let e = SpecFile::parse("{\n\"field\": \"Q\",\n\"dim\": }").unwrap_err();
        assert!(e.path.starts_with("line 3"), "{e}");
        let e = SpecFile::parse(r#"{"field": "Q", "dim": 2, "generators": [[["1/0", 0], [0, 1]]]}"#).unwrap_err();
        assert_eq!(e.path, "$.generators[0][0][0]");
    }

    #[test]
    fn names_are_checked() {
        let base = r#"{"field": {"Fp": 3}, "dim": 1, "generators": [[[2]], [[1]]], "names": NAMES}"#;
        assert!(SpecFile::parse(&base.replace("NAMES", r#"["a", "b"]"#)).is_ok());
        assert_eq!(SpecFile::parse(&base.replace("NAMES", r#"["a", "a"]"#)).unwrap_err().path, "$.names[1]");
        assert_eq!(SpecFile::parse(&base.replace("NAMES", r#"["a", "n"]"#)).unwrap_err().path, "$.names[1]");
        assert_eq!(SpecFile::parse(&base.replace("NAMES", r#"["a"]"#)).unwrap_err().path, "$.names");
    }
}
