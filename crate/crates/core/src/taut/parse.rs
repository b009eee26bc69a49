use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Mono, ParamPoly, TautError, TautPoly, Var};

/// Parse an expression such as `A*e^2 + B*e*k1`, `80435*k1^7 + 3/4 k2` or
/// `e^2*(A*e + B*κ₁)`. Ring variables are `e`, `k<i>` / `kappa<i>` / `κ<i>`
/// and `l1` / `λ₁`; any other identifier is a formal parameter. Juxtaposition
/// multiplies.
pub fn parse_taut(src: &str) -> Result<TautPoly, TautError> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
    };
    let out = p.expr()?;
    p.ws();
    if p.pos != p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

fn from_subscript(c: char) -> Option<char> {
    let s = "₀₁₂₃₄₅₆₇₈₉";
    s.chars().position(|x| x == c).map(|i| char::from(b'0' + i as u8))
}

impl Parser {
    fn err(&self, msg: &str) -> TautError {
        TautError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<TautPoly, TautError> {
        let mut acc = TautPoly::zero();
        let mut sign = 1;
        match self.peek() {
            Some('-') | Some('−') => {
                sign = -1;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = acc.add(&t.scale_param(&ParamPoly::integer(sign)));
            match self.peek() {
                Some('+') => sign = 1,
                Some('-') | Some('−') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<TautPoly, TautError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') | Some('·') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if c == '(' || c.is_alphanumeric() => acc = acc.mul(&self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<TautPoly, TautError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.ws();
            let digits = self.digits();
            let k: u32 = digits.parse().map_err(|_| self.err("expected exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<TautPoly, TautError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().unwrap();
                let mut q = BigRational::from_integer(num);
                if self.chars.get(self.pos) == Some(&'/') {
                    self.pos += 1;
                    let den = self.digits();
                    let den: BigInt = den.parse().map_err(|_| self.err("expected denominator"))?;
                    if den == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    q /= BigRational::from_integer(den);
                }
                Ok(TautPoly::term(Mono::one(), ParamPoly::constant(q)))
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() {
                    let c = self.chars[self.pos];
                    if c.is_alphanumeric() || c == '_' || from_subscript(c).is_some() {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let ident: String = self.chars[start..self.pos]
                    .iter()
                    .map(|&c| from_subscript(c).unwrap_or(c))
                    .collect();
                Ok(identifier(&ident))
            }
            Some(_) => Err(self.err("unexpected character")),
        }
    }
}

fn identifier(ident: &str) -> TautPoly {
    let index = |rest: &str| rest.parse::<u32>().ok().filter(|&i| i >= 1);
    let var = if ident == "e" {
        Some(Var::E)
    } else if ident == "l1" || ident == "λ1" || ident == "lambda1" {
        Some(Var::Lambda1)
    } else {
        ["kappa", "k", "κ"]
            .iter()
            .find_map(|p| ident.strip_prefix(p).and_then(index))
            .map(Var::Kappa)
    };
    match var {
        Some(v) => TautPoly::monomial(Mono::var(v), 1),
        None => TautPoly::term(Mono::one(), ParamPoly::param(ident)),
    }
}
