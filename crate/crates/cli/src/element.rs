//! Element syntax: a matrix literal such as `[[4,0,0],[0,2,0],[0,0,1]]`, or
//! a word like `g1^2*n(1,1)`, `(g1*g2)^-1` or `e`.

use powroot_core::{FieldScalar, Matrix};

use crate::specfile::{parse_matrix, SpecFile};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("element {input:?}, at offset {offset}: {message}")]
pub struct ElementError {
    pub input: String,
    pub offset: usize,
    pub message: String,
}

pub fn parse_element(spec: &SpecFile, input: &str) -> Result<Matrix, ElementError> {
    let trimmed = input.trim();
    if trimmed.starts_with('[') {
        let value: serde_json::Value = serde_json::from_str(trimmed).map_err(|e| ElementError {
            input: input.into(),
            offset: e.column().saturating_sub(1),
            message: e.to_string(),
        })?;
        return parse_matrix(spec.field, spec.dim, &value, "element")
            .map_err(|e| ElementError { input: input.into(), offset: 0, message: e.to_string() });
    }
    let mut p = Parser { spec, src: input, pos: 0 };
    let m = p.expr()?;
    p.skip_ws();
    if p.pos != input.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(m)
}

struct Parser<'a> {
    spec: &'a SpecFile,
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ElementError> {
        Err(ElementError { input: self.src.into(), offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Matrix, ElementError> {
        let mut m = self.factor()?;
        while self.eat('*') {
            m = &m * &self.factor()?;
        }
        Ok(m)
    }

    fn factor(&mut self) -> Result<Matrix, ElementError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let start = self.pos;
        let len = self.rest().find(|c: char| !(c.is_ascii_digit() || c == '-')).unwrap_or(self.rest().len());
        self.pos += len;
        let Ok(e) = self.src[start..self.pos].parse::<i64>() else {
            self.pos = start;
            return self.fail("expected an integer exponent");
        };
        base.pow(e).or_else(|e| self.fail(e.to_string()))
    }

    fn ident(&mut self) -> &str {
        let len = self.rest().find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(self.rest().len());
        let s = &self.src[self.pos..self.pos + len];
        self.pos += len;
        s
    }

    fn atom(&mut self) -> Result<Matrix, ElementError> {
        if self.eat('(') {
            let m = self.expr()?;
            if !self.eat(')') {
                return self.fail("expected ')'");
            }
            return Ok(m);
        }
        self.skip_ws();
        let start = self.pos;
        let name = self.ident().to_string();
        match name.as_str() {
            "" => self.fail("expected a generator name, 'e', 'n(...)' or '('"),
            "e" => Ok(Matrix::identity(self.spec.field, self.spec.dim)),
            "n" if self.rest().trim_start().starts_with('(') => {
                let coords = self.coords()?;
                self.unipotent(&coords, start)
            }
            _ => match self.spec.names.iter().position(|n| *n == name) {
                Some(i) => Ok(self.spec.generators[i].clone()),
                None => {
                    self.pos = start;
                    self.fail(format!("unknown generator {name:?} (known: {})", self.spec.names.join(", ")))
                }
            },
        }
    }

    fn coords(&mut self) -> Result<Vec<FieldScalar>, ElementError> {
        self.eat('(');
        let Some(len) = self.rest().find(')') else {
            return self.fail("unclosed n(");
        };
        let body = &self.src[self.pos..self.pos + len];
        let mut out = Vec::new();
        for part in body.split(',') {
            match self.spec.field.parse(part) {
                Ok(s) => out.push(s),
                Err(e) => return self.fail(e.to_string()),
            }
        }
        self.pos += len + 1;
        Ok(out)
    }

    fn unipotent(&self, coords: &[FieldScalar], start: usize) -> Result<Matrix, ElementError> {
        let at = |message: String| Err(ElementError { input: self.src.into(), offset: start, message });
        let Some(basis) = self.spec.word_basis() else {
            return at("n(...) needs an n_basis (or lie_algebra) in the spec file".into());
        };
        if basis.len() != coords.len() {
            return at(format!("n(...) takes {} coordinates, got {}", basis.len(), coords.len()));
        }
        let mut m = Matrix::identity(self.spec.field, self.spec.dim);
        for (c, x) in coords.iter().zip(basis) {
            m = &m + &x.scale(c);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g5() -> SpecFile {
        SpecFile::parse(
            r#"{"field": {"Fp": 5}, "dim": 3, "names": ["g", "t", "u"],
                "generators": [[[4,0,0],[0,2,0],[0,0,1]], [[1,0,1],[0,1,0],[0,0,1]], [[1,0,0],[0,1,1],[0,0,1]]],
                "n_basis": [[[0,0,1],[0,0,0],[0,0,0]], [[0,0,0],[0,0,1],[0,0,0]]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn words() {
        let s = g5();
        let g = &s.generators[0];
        assert_eq!(parse_element(&s, "g^2").unwrap(), g.pow(2).unwrap());
        assert_eq!(parse_element(&s, " g * g ").unwrap(), g.pow(2).unwrap());
        assert_eq!(parse_element(&s, "(g*t)^-1").unwrap(), (g * &s.generators[1]).pow(-1).unwrap());
        assert!(parse_element(&s, "e").unwrap().is_identity());
        let x = parse_element(&s, "g^3*n(1,2)").unwrap();
        assert_eq!(x.to_string(), "[[4,0,4],[0,3,1],[0,0,1]]");
        assert_eq!(parse_element(&s, "t*u").unwrap(), parse_element(&s, "n(1,1)").unwrap());
        assert_eq!(parse_element(&s, "[[1,0,0],[0,1,0],[0,0,1]]").unwrap(), parse_element(&s, "e").unwrap());
    }

    #[test]
    fn errors_point_at_the_problem() {
        let s = g5();
        assert_eq!(parse_element(&s, "g*h").unwrap_err().offset, 2);
        assert_eq!(parse_element(&s, "g^x").unwrap_err().offset, 2);
        assert!(parse_element(&s, "n(1)").unwrap_err().message.contains("2 coordinates"));
        assert!(parse_element(&s, "g)").is_err());
        assert!(parse_element(&s, "[[1,0],[0,1]]").is_err());
    }
}
