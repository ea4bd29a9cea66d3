use crate::{Error, Result};

/// Dense real polynomial in `z`, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<f64>,
}

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly { coeffs: vec![c] }
    }

    pub fn z() -> Self {
        Poly {
            coeffs: vec![0.0, 1.0],
        }
    }

    fn trim(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
        self
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::constant(0.0);
        }
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or(0.0)
                    + other.coeffs.get(i).copied().unwrap_or(0.0)
            })
            .collect();
        Poly { coeffs }.trim()
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly { coeffs }.trim()
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::constant(1.0);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .skip(1)
            .step_by(2)
            .all(|&c| c == 0.0)
    }
}

/// Recursive-descent parser for the small grammar
/// `expr := term (('+'|'-') term)*`, `term := factor ('*' factor)*`,
/// `factor := base ('^' uint)?`, `base := number | 'z' | '(' expr ')'`,
/// with unary minus on terms. Errors carry the 1-based column.
pub fn parse_poly(text: &str) -> Result<Poly> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        text,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn col(&self) -> usize {
        if self.pos < self.chars.len() {
            self.text[..self.chars[self.pos].0].chars().count() + 1
        } else {
            self.text.chars().count() + 1
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            col: self.col(),
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .chars
            .get(self.pos)
            .is_some_and(|&(_, c)| c.is_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = if self.peek() == Some('-') {
            self.bump();
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.bump();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.bump();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.base()?;
        if self.peek() == Some('^') {
            self.bump();
            let n = self.uint()?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            Some('z') => {
                self.bump();
                Ok(Poly::z())
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|&(_, c)| c.is_ascii_digit() || c == '.')
                {
                    self.pos += 1;
                }
                let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
                s.parse::<f64>()
                    .map(Poly::constant)
                    .map_err(|e| self.err(&format!("bad number '{s}': {e}")))
            }
            Some(c) => Err(self.err(&format!("unexpected character '{c}'"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|&(_, c)| c.is_ascii_digit())
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer exponent"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        s.parse().map_err(|e| self.err(&format!("bad exponent: {e}")))
    }
}
