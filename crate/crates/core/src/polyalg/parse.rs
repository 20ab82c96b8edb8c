//! Recursive-descent parser for the polynomial expression language.
//!
//! ```text
//! expr   := unary (('+' | '-') unary)*       -- leading sign handled by unary
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'i' | identifier | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. Exponents must be nonnegative integer literals.

use super::{MultiPoly, PolyError};
use crate::linalg::C64;

/// `["x1", ..., "xn"]`.
pub fn standard_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

pub fn parse_poly(text: &str, vars: &[String]) -> Result<MultiPoly, PolyError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, vars, end: text.len() };
    let out = p.expr()?;
    if let Some(tok) = p.peek() {
        return Err(PolyError::Syntax { pos: tok.pos, msg: format!("unexpected `{}`", tok.kind) });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Num(f64),
    Int(u32),
    Ident(String),
    Op(char),
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kind::Num(v) => write!(f, "{v}"),
            Kind::Int(v) => write!(f, "{v}"),
            Kind::Ident(s) => f.write_str(s),
            Kind::Op(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: Kind,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_ascii_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            let lit = &text[start..i];
            let kind = if lit.contains('.') {
                let v = lit.parse::<f64>().map_err(|_| PolyError::Syntax {
                    pos: start,
                    msg: format!("malformed number `{lit}`"),
                })?;
                Kind::Num(v)
            } else {
                match lit.parse::<u32>() {
                    Ok(v) => Kind::Int(v),
                    // too large for an exponent, still fine as a coefficient
                    Err(_) => Kind::Num(lit.parse::<f64>().map_err(|_| PolyError::Syntax {
                        pos: start,
                        msg: format!("malformed number `{lit}`"),
                    })?),
                }
            };
            out.push(Token { kind, pos: start });
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { kind: Kind::Ident(text[start..i].to_string()), pos: start });
        } else if "+-*^()".contains(ch) {
            out.push(Token { kind: Kind::Op(ch), pos: i });
            i += 1;
        } else {
            return Err(PolyError::Syntax { pos: i, msg: format!("unexpected character `{ch}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a [String],
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_op(&self) -> Option<char> {
        match self.peek() {
            Some(Token { kind: Kind::Op(c), .. }) => Some(*c),
            _ => None,
        }
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.unary()?;
        while self.peek_op() == Some('*') {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly, PolyError> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, PolyError> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let pos = self.here();
        match self.peek().map(|t| t.kind.clone()) {
            Some(Kind::Int(k)) => {
                self.pos += 1;
                Ok(base.pow(k))
            }
            _ => Err(PolyError::Syntax {
                pos,
                msg: "exponent must be a nonnegative integer literal".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, PolyError> {
        let pos = self.here();
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| PolyError::Syntax { pos, msg: "unexpected end of input".into() })?;
        self.pos += 1;
        match tok.kind {
            Kind::Num(v) => Ok(MultiPoly::constant(self.n(), C64::new(v, 0.0))),
            Kind::Int(v) => Ok(MultiPoly::constant(self.n(), C64::new(f64::from(v), 0.0))),
            Kind::Ident(name) if name == "i" => Ok(MultiPoly::constant(self.n(), C64::new(0.0, 1.0))),
            Kind::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(k) => Ok(MultiPoly::var(self.n(), k)),
                None => Err(PolyError::UnknownIdentifier { name, pos: tok.pos }),
            },
            Kind::Op('(') => {
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(PolyError::Syntax { pos: self.here(), msg: "expected `)`".into() });
                }
                self.pos += 1;
                Ok(inner)
            }
            Kind::Op(c) => Err(PolyError::Syntax { pos: tok.pos, msg: format!("unexpected `{c}`") }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hyperbola_terms() {
        let p = parse_poly("x1*x2 - 1", &standard_vars(2)).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&[1, 1]), c(1.0, 0.0));
        assert_eq!(p.coeff(&[0, 0]), c(-1.0, 0.0));
    }

    #[test]
    fn circle_has_three_terms() {
        let p = parse_poly("x1^2 + x2^2 - 1", &standard_vars(2)).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.total_degree(), 2);
    }

    #[test]
    fn product_of_three() {
        let p = parse_poly("x1*x2*x3 - 1", &standard_vars(3)).unwrap();
        assert_eq!(p.coeff(&[1, 1, 1]), c(1.0, 0.0));
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn parentheses_and_imaginary_unit() {
        let v = standard_vars(2);
        let p = parse_poly(" (x1 + i)^2 ", &v).unwrap();
        assert_eq!(p.coeff(&[2, 0]), c(1.0, 0.0));
        assert_eq!(p.coeff(&[1, 0]), c(0.0, 2.0));
        assert_eq!(p.coeff(&[0, 0]), c(-1.0, 0.0));
        let q = parse_poly("-x1^2", &v).unwrap();
        assert_eq!(q.coeff(&[2, 0]), c(-1.0, 0.0));
        let r = parse_poly("1.5*x2 - .5", &v).unwrap();
        assert_eq!(r.coeff(&[0, 1]), c(1.5, 0.0));
        assert_eq!(r.coeff(&[0, 0]), c(-0.5, 0.0));
    }

    #[test]
    fn errors_carry_positions() {
        let v = standard_vars(2);
        assert_eq!(
            parse_poly("x1 + y", &v),
            Err(PolyError::UnknownIdentifier { name: "y".into(), pos: 5 })
        );
        assert!(matches!(parse_poly("x1 +", &v), Err(PolyError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_poly("x1^2.5", &v), Err(PolyError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("x1^-1", &v), Err(PolyError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("(x1", &v), Err(PolyError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("x1 $ 2", &v), Err(PolyError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("x1 x2", &v), Err(PolyError::Syntax { pos: 3, .. })));
    }
}
