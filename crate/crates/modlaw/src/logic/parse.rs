use super::ast::Formula;
use crate::error::{Error, Result};
use crate::modular::is_prime;

const KEYWORDS: [&str; 3] = ["exists", "forall", "parity"];

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

/// Parses a formula; errors carry the byte offset where parsing failed.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    /// A raw `[a-z][a-z0-9]*` word, keywords included.
    fn word(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if !matches!(self.src.get(self.pos), Some(b'a'..=b'z')) {
            return None;
        }
        while matches!(self.src.get(self.pos), Some(b'a'..=b'z' | b'0'..=b'9')) {
            self.pos += 1;
        }
        Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn var(&mut self) -> Result<String> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.word() {
            Some(w) if KEYWORDS.contains(&w.as_str()) => {
                self.pos = start;
                Err(self.error(&format!("`{w}` is a keyword, not a variable")))
            }
            Some(w) => Ok(w),
            None => Err(self.error("expected a variable")),
        }
    }

    fn int(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Syntax { offset: start, message: "integer out of range".into() })
    }

    fn quantified(&mut self) -> Result<(String, Formula)> {
        let v = self.var()?;
        self.expect(b'.')?;
        Ok((v, self.formula()?))
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'E') => {
                self.pos += 1;
                self.expect(b'(')?;
                let x = self.var()?;
                self.expect(b',')?;
                let y = self.var()?;
                self.expect(b')')?;
                Ok(Formula::Edge(x, y))
            }
            Some(b'!') => {
                self.pos += 1;
                Ok(Formula::not(self.formula()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let a = self.formula()?;
                let op = self.peek();
                if !matches!(op, Some(b'&' | b'|')) {
                    return Err(self.error("expected `&` or `|`"));
                }
                self.pos += 1;
                let b = self.formula()?;
                self.expect(b')')?;
                Ok(if op == Some(b'&') { Formula::and(a, b) } else { Formula::or(a, b) })
            }
            Some(_) => {
                let start = self.pos;
                let Some(w) = self.word() else {
                    return Err(self.error("expected a formula"));
                };
                match w.as_str() {
                    "exists" => self.quantified().map(|(v, f)| Formula::exists(&v, f)),
                    "forall" => self.quantified().map(|(v, f)| Formula::forall(&v, f)),
                    "parity" => self.quantified().map(|(v, f)| Formula::parity(&v, f)),
                    "mod" if self.peek() == Some(b'[') => {
                        self.pos += 1;
                        let q = self.int()?;
                        self.expect(b',')?;
                        let i = self.int()?;
                        self.expect(b']')?;
                        if !is_prime(q) {
                            return Err(Error::NonPrimeModulus(q));
                        }
                        if i >= q {
                            return Err(Error::ResidueOutOfRange { q, i });
                        }
                        let (v, f) = self.quantified()?;
                        Ok(Formula::modq(q, i, &v, f))
                    }
                    _ => {
                        self.expect(b'=').map_err(|_| Error::Syntax {
                            offset: self.pos,
                            message: format!("expected `=` after variable `{w}` at offset {start}"),
                        })?;
                        let y = self.var()?;
                        Ok(Formula::Equal(w, y))
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        assert_eq!(
            parse("forall x. parity y. E(x,y)").unwrap(),
            Formula::forall("x", Formula::parity("y", Formula::edge("x", "y")))
        );
        assert_eq!(parse("mod[3,2] x. x = x").unwrap(), Formula::modq(3, 2, "x", Formula::equal("x", "x")));
        assert_eq!(parse("E(x"), Err(Error::Syntax { offset: 3, message: "expected `,`".into() }));
    }

    #[test]
    fn errors() {
        assert_eq!(parse("mod[4,1] x. x = x"), Err(Error::NonPrimeModulus(4)));
        assert_eq!(parse("mod[3,3] x. x = x"), Err(Error::ResidueOutOfRange { q: 3, i: 3 }));
        assert!(matches!(parse("exists parity. x = x"), Err(Error::Syntax { offset: 7, .. })));
        assert!(matches!(parse("(x = x & y = y"), Err(Error::Syntax { offset: 14, .. })));
        assert!(matches!(parse("x = x y"), Err(Error::Syntax { offset: 6, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { offset: 0, .. })));
    }

    #[test]
    fn whitespace_and_nesting() {
        let f = parse("  ( !E( a1 ,b ) |exists z.(z=a1&E(z,b)))").unwrap();
        assert_eq!(f.quantifier_depth(), 1);
        assert_eq!(parse(&f.to_string()).unwrap(), f);
        assert_eq!(f.free_variables().into_iter().collect::<Vec<_>>(), vec!["a1".to_string(), "b".to_string()]);
        assert_eq!(parse("mod [2, 1] x . x=x").unwrap().to_string(), "parity x. x = x");
    }
}
