//! Element coordinates for constructed rings and the textual element
//! literals used on the command line and in reports.
//!
//! Literal forms: an integer for `Zn`, row-major bracketed rows for matrix
//! rings (`[[1,1],[0,0]]`), and parenthesised tuples for products
//! (`(1,2)`). Opposite rings reuse the literal of their base.

use crate::error::{Error, Result};
use crate::ring::Elem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Zn(usize),
    Matrix {
        k: usize,
        triangular: bool,
        base: Box<Shape>,
        base_size: usize,
    },
    Product(Vec<(Shape, usize)>),
    Opposite(Box<Shape>),
}

/// Positions `(row, col)` stored for a `k`×`k` (triangular) matrix, in
/// row-major order.
pub(crate) fn matrix_positions(k: usize, triangular: bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if !triangular || i <= j {
                out.push((i, j));
            }
        }
    }
    out
}

/// Mixed-radix decode, most significant digit first.
pub(crate) fn decode(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (slot, &r) in digits.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    digits
}

pub(crate) fn encode(digits: &[usize], radices: &[usize]) -> usize {
    digits
        .iter()
        .zip(radices)
        .fold(0, |acc, (&d, &r)| acc * r + d)
}

impl Shape {
    pub fn render(&self, index: Elem) -> String {
        match self {
            Shape::Zn(_) => index.to_string(),
            Shape::Opposite(base) => base.render(index),
            Shape::Product(factors) => {
                let radices: Vec<usize> = factors.iter().map(|f| f.1).collect();
                let parts: Vec<String> = decode(index, &radices)
                    .into_iter()
                    .zip(factors)
                    .map(|(d, (s, _))| s.render(d))
                    .collect();
                format!("({})", parts.join(","))
            }
            Shape::Matrix {
                k,
                triangular,
                base,
                base_size,
            } => {
                let positions = matrix_positions(*k, *triangular);
                let digits = decode(index, &vec![*base_size; positions.len()]);
                let mut grid = vec![vec![base.render(0); *k]; *k];
                for ((i, j), d) in positions.into_iter().zip(digits) {
                    grid[i][j] = base.render(d);
                }
                let rows: Vec<String> = grid
                    .into_iter()
                    .map(|row| format!("[{}]", row.join(",")))
                    .collect();
                format!("[{}]", rows.join(","))
            }
        }
    }

    pub fn parse(&self, text: &str) -> Result<Elem> {
        let mut p = LiteralParser {
            src: text.as_bytes(),
            pos: 0,
        };
        let value = p.element(self)?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing characters after element literal"));
        }
        Ok(value)
    }
}

struct LiteralParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl LiteralParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn integer(&mut self) -> Result<i128> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse::<i128>().ok())
            .ok_or_else(|| Error::Parse {
                pos: start,
                msg: "expected an integer".into(),
            })
    }

    fn element(&mut self, shape: &Shape) -> Result<Elem> {
        match shape {
            Shape::Zn(n) => {
                let v = self.integer()?;
                Ok(v.rem_euclid(*n as i128) as usize)
            }
            Shape::Opposite(base) => self.element(base),
            Shape::Product(factors) => {
                self.expect(b'(')?;
                let mut digits = Vec::with_capacity(factors.len());
                for (i, (s, _)) in factors.iter().enumerate() {
                    if i > 0 {
                        self.expect(b',')?;
                    }
                    digits.push(self.element(s)?);
                }
                self.expect(b')')?;
                let radices: Vec<usize> = factors.iter().map(|f| f.1).collect();
                Ok(encode(&digits, &radices))
            }
            Shape::Matrix {
                k,
                triangular,
                base,
                base_size,
            } => {
                let mut grid = vec![vec![0usize; *k]; *k];
                self.expect(b'[')?;
                for (i, row) in grid.iter_mut().enumerate() {
                    if i > 0 {
                        self.expect(b',')?;
                    }
                    self.expect(b'[')?;
                    for (j, slot) in row.iter_mut().enumerate() {
                        if j > 0 {
                            self.expect(b',')?;
                        }
                        let at = self.pos;
                        *slot = self.element(base)?;
                        if *triangular && i > j && *slot != 0 {
                            return Err(Error::Parse {
                                pos: at,
                                msg: "entry below the diagonal of a triangular matrix must be 0"
                                    .into(),
                            });
                        }
                    }
                    self.expect(b']')?;
                }
                self.expect(b']')?;
                let positions = matrix_positions(*k, *triangular);
                let digits: Vec<usize> = positions.iter().map(|&(i, j)| grid[i][j]).collect();
                Ok(encode(&digits, &vec![*base_size; positions.len()]))
            }
        }
    }
}
