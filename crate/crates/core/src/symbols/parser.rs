use crate::error::ParseError;

use super::{Expr, Var};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { value: f64, integral: Option<u32>, imag: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

fn syntax(pos: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { pos, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' | '.' => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let int_end = j;
                if j < chars.len() && chars[j] == '.' {
                    j += 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                    let mut k = j + 1;
                    if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                        k += 1;
                    }
                    if k < chars.len() && chars[k].is_ascii_digit() {
                        while k < chars.len() && chars[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let lit: String = chars[i..j].iter().collect();
                let value: f64 = lit.parse().map_err(|_| syntax(start, format!("malformed number `{lit}`")))?;
                let integral = if int_end == j { lit.parse::<u32>().ok() } else { None };
                let mut imag = false;
                if j < chars.len() && chars[j] == 'i' && !chars.get(j + 1).is_some_and(|c| c.is_ascii_alphanumeric()) {
                    imag = true;
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_alphanumeric() {
                    return Err(syntax(j, "unexpected character after number (use `*` for products)"));
                }
                i = j;
                out.push((Tok::Num { value, integral, imag }, start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_alphabetic() {
                    j += 1;
                }
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                i = j;
                out.push((Tok::Ident(word), start));
                continue;
            }
            other => return Err(syntax(start, format!("unexpected character `{other}`"))),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = lhs + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    lhs = lhs - self.term()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = lhs * self.unary()?;
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let at = self.at();
            return match self.bump().0 {
                Tok::Num { integral: Some(k), imag: false, .. } => Ok(base.pow(k)),
                _ => Err(syntax(at, "exponent must be a nonnegative integer literal")),
            };
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num { value, imag: false, .. } => Ok(Expr::Real(value)),
            Tok::Num { value, imag: true, .. } => Ok(Expr::Imag(value)),
            Tok::LParen => {
                let inner = self.expr()?;
                match self.peek() {
                    Tok::RParen => {
                        self.bump();
                        Ok(inner)
                    }
                    Tok::End => Err(syntax(at, "unclosed parenthesis")),
                    _ => Err(syntax(self.at(), "expected `)`")),
                }
            }
            Tok::Ident(word) => self.identifier(&word, at),
            Tok::End => Err(syntax(at, "unexpected end of input")),
            other => Err(syntax(at, format!("unexpected token {other:?}"))),
        }
    }

    fn identifier(&mut self, word: &str, at: usize) -> Result<Expr, ParseError> {
        match word {
            "i" => return Ok(Expr::Imag(1.0)),
            "h0" => return Ok(Expr::Var(Var::H0)),
            "exp" => {
                let open = self.at();
                if self.bump().0 != Tok::LParen {
                    return Err(syntax(open, "expected `(` after exp"));
                }
                let inner = self.expr()?;
                return match self.peek() {
                    Tok::RParen => {
                        self.bump();
                        Ok(inner.exp())
                    }
                    Tok::End => Err(syntax(open, "unclosed parenthesis")),
                    _ => Err(syntax(self.at(), "expected `)`")),
                };
            }
            _ => {}
        }
        let split = word.find(|c: char| c.is_ascii_digit()).unwrap_or(word.len());
        let (stem, digits) = word.split_at(split);
        let ctor: fn(usize) -> Var = match stem {
            "x" => Var::X,
            "xi" => Var::Xi,
            "z" => Var::Z,
            "zb" => Var::Zb,
            _ => return Err(ParseError::UnknownVariable { name: word.to_string(), pos: at }),
        };
        let index: usize =
            digits.parse().map_err(|_| ParseError::UnknownVariable { name: word.to_string(), pos: at })?;
        if index == 0 || index > self.n {
            return Err(ParseError::VariableOutOfRange { name: word.to_string(), pos: at, n: self.n });
        }
        Ok(Expr::Var(ctor(index - 1)))
    }
}

/// Parses DSL text over `n` phase-space dimensions.
pub fn parse_expr(text: &str, n: usize) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    if matches!(toks[0].0, Tok::End) {
        return Err(syntax(0, "empty expression"));
    }
    let mut p = Parser { toks, pos: 0, n };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.at(), "trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        assert_eq!(parse_expr("2i", 1).unwrap(), Expr::Imag(2.0));
        assert_eq!(parse_expr("i", 1).unwrap(), Expr::Imag(1.0));
        assert_eq!(parse_expr("1e-7", 1).unwrap(), Expr::Real(1e-7));
        assert_eq!(parse_expr("1.5e3i", 1).unwrap(), Expr::Imag(1500.0));
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["", "   ", "x1 +", "2x1", "x1^1.5", "x1^-2", "exp x1", "x1 ) ", "x1 / 2", "x1^i"] {
            assert!(parse_expr(bad, 1).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(parse_expr("x1*xi1+1", 1).unwrap(), parse_expr(" x1 *  xi1 + 1 ", 1).unwrap());
    }
}
