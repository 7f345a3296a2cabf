//! Parameter arithmetic: `+ - * /`, parentheses, unary minus, numeric
//! literals, the constant `pi` and named parameters.

use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Token {
    Num(f64),
    Ident(usize, usize),
    Op(u8),
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<Token>, String> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' => i += 1,
            b'+' | b'-' | b'*' | b'/' => {
                out.push(Token::Op(c));
                i += 1;
            }
            b'(' => {
                out.push(Token::Open);
                i += 1;
            }
            b')' => {
                out.push(Token::Close);
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                out.push(Token::Num(text.parse().map_err(|_| format!("bad number {text:?}"))?));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token::Ident(start, i));
            }
            _ => return Err(format!("unexpected character {:?} at offset {i}", src[i..].chars().next().unwrap())),
        }
    }
    Ok(out)
}

struct Parser<'a, F> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    lookup: F,
}

impl<F: FnMut(&str) -> Result<f64, String>> Parser<'_, F> {
    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<f64, String> {
        let mut acc = self.term()?;
        while let Some(Token::Op(op @ (b'+' | b'-'))) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<f64, String> {
        let mut acc = self.unary()?;
        while let Some(Token::Op(op @ (b'*' | b'/'))) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == b'*' { acc * rhs } else { acc / rhs };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<f64, String> {
        match self.peek() {
            Some(Token::Op(b'-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Token::Op(b'+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<f64, String> {
        let tok = self.peek().ok_or("unexpected end of expression")?;
        self.pos += 1;
        match tok {
            Token::Num(v) => Ok(v),
            Token::Ident(a, b) => {
                let name = &self.src[a..b];
                if name == "pi" {
                    Ok(std::f64::consts::PI)
                } else {
                    (self.lookup)(name)
                }
            }
            Token::Open => {
                let v = self.expr()?;
                match self.peek() {
                    Some(Token::Close) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    _ => Err("missing ')'".into()),
                }
            }
            Token::Close => Err("unexpected ')'".into()),
            Token::Op(op) => Err(format!("unexpected operator '{}'", op as char)),
        }
    }
}

/// Evaluates `src`, resolving identifiers other than `pi` through `lookup`.
pub fn evaluate_with(src: &str, lookup: impl FnMut(&str) -> Result<f64, String>) -> Result<f64, String> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser { src, tokens, pos: 0, lookup };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input in {src:?}"));
    }
    if !v.is_finite() {
        return Err(format!("{src:?} does not evaluate to a finite number"));
    }
    Ok(v)
}

/// Evaluates `src` against fixed numeric bindings.
pub fn evaluate(src: &str, bindings: &BTreeMap<String, f64>) -> Result<f64, String> {
    evaluate_with(src, |name| bindings.get(name).copied().ok_or_else(|| format!("unknown parameter {name:?}")))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn eval(s: &str) -> Result<f64, String> {
        let mut b = BTreeMap::new();
        b.insert("s".to_string(), 0.7);
        b.insert("delta".to_string(), 2.0 * PI / 3.0);
        evaluate(s, &b)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("1 + 2 * 3").unwrap(), 7.0);
        assert_eq!(eval("(1 + 2) * 3").unwrap(), 9.0);
        assert_eq!(eval("8 / 4 / 2").unwrap(), 1.0);
        assert_eq!(eval("10 - 4 - 3").unwrap(), 3.0);
        assert_eq!(eval("-2 * -3").unwrap(), 6.0);
        assert_eq!(eval("1.5e1 + 2E-1").unwrap(), 15.2);
    }

    #[test]
    fn constants_and_parameters() {
        assert_eq!(eval("2*pi/3").unwrap(), 2.0 * PI / 3.0);
        assert!((eval("delta - s").unwrap() - (2.0 * PI / 3.0 - 0.7)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["", "1 +", "(1", "1)", "2 ** 3", "x", "1/0", "sin(1)", "3 $ 4"] {
            assert!(eval(bad).is_err(), "{bad}");
        }
    }
}
