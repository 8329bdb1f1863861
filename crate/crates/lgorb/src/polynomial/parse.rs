//! Parser for polynomial expressions.
//!
//! Grammar: a sum of terms separated by `+`; each term is a product of
//! factors joined by `*`; a factor is `var` or `var^exp` with a positive
//! integer exponent; variable names are identifiers; whitespace is
//! insignificant. No numeric coefficients are admitted — inputs describe
//! polynomials whose monomial coefficients are all 1.

use std::collections::BTreeMap;

use crate::error::{LgError, Result};

/// A parsed term: (variable, exponent) pairs in textual order, with repeated
/// variables merged into their first occurrence.
pub(crate) type RawMonomial = Vec<(String, u64)>;

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, PartialEq, Eq, Clone)]
enum Token {
    Ident(String),
    Number(u64),
    Plus,
    Star,
    Caret,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn error(&self, msg: &str) -> LgError {
        LgError::Parse(format!("{} at byte {}", msg, self.pos))
    }

    fn next_token(&mut self) -> Result<Token> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(Token::End);
        }
        let c = self.src[self.pos];
        match c {
            b'+' => {
                self.pos += 1;
                Ok(Token::Plus)
            }
            b'*' => {
                self.pos += 1;
                Ok(Token::Star)
            }
            b'^' => {
                self.pos += 1;
                Ok(Token::Caret)
            }
            b'0'..=b'9' => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                text.parse::<u64>()
                    .map(Token::Number)
                    .map_err(|_| self.error("integer out of range"))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Ok(Token::Ident(
                    std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string(),
                ))
            }
            _ => Err(self.error(&format!("unexpected character '{}'", c as char))),
        }
    }
}

/// Parses an expression into raw monomials, preserving term order.
pub(crate) fn parse_expression(input: &str) -> Result<Vec<RawMonomial>> {
    let mut lex = Lexer::new(input);
    let mut monomials = Vec::new();
    let mut tok = lex.next_token()?;
    loop {
        // One term: factor (* factor)*
        let mut mono: RawMonomial = Vec::new();
        loop {
            match tok {
                Token::Ident(ref name) => {
                    let var = name.clone();
                    tok = lex.next_token()?;
                    let exp = if tok == Token::Caret {
                        match lex.next_token()? {
                            Token::Number(e) if e >= 1 => {
                                tok = lex.next_token()?;
                                e
                            }
                            Token::Number(_) => {
                                return Err(lex.error("exponent must be positive"))
                            }
                            _ => return Err(lex.error("expected exponent after '^'")),
                        }
                    } else {
                        1
                    };
                    match mono.iter_mut().find(|(v, _)| *v == var) {
                        Some((_, e)) => *e += exp,
                        None => mono.push((var, exp)),
                    }
                }
                Token::Number(_) => {
                    return Err(lex.error("numeric coefficients are not admitted"))
                }
                _ => return Err(lex.error("expected a variable")),
            }
            match tok {
                Token::Star => tok = lex.next_token()?,
                _ => break,
            }
        }
        monomials.push(mono);
        match tok {
            Token::Plus => tok = lex.next_token()?,
            Token::End => break,
            _ => return Err(lex.error("expected '+' or end of input")),
        }
    }
    Ok(monomials)
}

/// Fixes the variable order (declared list, or first textual appearance) and
/// turns raw monomials into exponent rows.
pub(crate) fn resolve_variables(
    monomials: &[RawMonomial],
    declared: Option<&[String]>,
) -> Result<(Vec<String>, Vec<Vec<u64>>)> {
    let names: Vec<String> = match declared {
        Some(list) => {
            let mut seen = std::collections::BTreeSet::new();
            for name in list {
                if !seen.insert(name.clone()) {
                    return Err(LgError::Parse(format!("duplicate variable '{}'", name)));
                }
            }
            for mono in monomials {
                for (var, _) in mono {
                    if !seen.contains(var) {
                        return Err(LgError::Parse(format!("undeclared variable '{}'", var)));
                    }
                }
            }
            list.to_vec()
        }
        None => {
            let mut ordered: Vec<String> = Vec::new();
            for mono in monomials {
                for (var, _) in mono {
                    if !ordered.contains(var) {
                        ordered.push(var.clone());
                    }
                }
            }
            ordered
        }
    };
    let index: BTreeMap<&String, usize> =
        names.iter().enumerate().map(|(i, n)| (n, i)).collect();
    let rows = monomials
        .iter()
        .map(|mono| {
            let mut row = vec![0u64; names.len()];
            for (var, exp) in mono {
                row[index[var]] += exp;
            }
            row
        })
        .collect();
    Ok((names, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_loop_polynomial() {
        let monos = parse_expression("x1^3*x2 + x2^5*x3 + x3^3*x4 + x4^5*x1").unwrap();
        assert_eq!(monos.len(), 4);
        let (names, rows) = resolve_variables(&monos, None).unwrap();
        assert_eq!(names, vec!["x1", "x2", "x3", "x4"]);
        assert_eq!(rows[0], vec![3, 1, 0, 0]);
        assert_eq!(rows[3], vec![1, 0, 0, 5]);
    }

    #[test]
    fn merges_repeated_factors() {
        let monos = parse_expression("x*x^2").unwrap();
        assert_eq!(monos[0], vec![("x".to_string(), 3)]);
    }

    #[test]
    fn first_appearance_order_is_textual() {
        let monos = parse_expression("z^2*y + y^2*x + x^3").unwrap();
        let (names, _) = resolve_variables(&monos, None).unwrap();
        assert_eq!(names, vec!["z", "y", "x"]);
    }

    #[test]
    fn whitespace_and_bare_variables() {
        let monos = parse_expression("  a ^ 2 * b +b^3  ").unwrap();
        let (names, rows) = resolve_variables(&monos, None).unwrap();
        assert_eq!(names, vec!["a", "b"]);
        assert_eq!(rows, vec![vec![2, 1], vec![0, 3]]);
    }

    #[test]
    fn declared_order_overrides_appearance() {
        let monos = parse_expression("y^2 + x^3").unwrap();
        let declared = vec!["x".to_string(), "y".to_string()];
        let (names, rows) = resolve_variables(&monos, Some(&declared)).unwrap();
        assert_eq!(names, vec!["x", "y"]);
        assert_eq!(rows, vec![vec![0, 2], vec![3, 0]]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(parse_expression("2*x").is_err());
        assert!(parse_expression("x^0").is_err());
        assert!(parse_expression("x +").is_err());
        assert!(parse_expression("x & y").is_err());
        assert!(parse_expression("").is_err());
        let monos = parse_expression("x + z").unwrap();
        assert!(resolve_variables(&monos, Some(&["x".to_string()])).is_err());
    }
}
