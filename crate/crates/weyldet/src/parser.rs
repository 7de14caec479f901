//! ASCII surface syntax for operators and JSON documents for matrices.
//!
//! Expression grammar (whitespace-insensitive between tokens):
//!
//! ```text
//! expr      := sign? term (sign term)*          sign := '+' | '-'
//! term      := factor ('*' factor)*
//! factor    := atom ('^' natural)?
//! atom      := rational | generator | '(' expr ')'
//! rational  := natural ('/' natural)?
//! generator := ('x' | 'd') natural
//! ```
//!
//! Multiplication is always explicit (`x1*d1`, never `x1 d1`), exponents are
//! nonnegative integers, coefficients arbitrary-precision rationals. Syntax
//! errors carry the 1-based byte position of the offending character;
//! generator indices outside `1..=m` are reported separately since they are
//! well-formed text aimed at the wrong algebra.
//!
//! A matrix document is a JSON object `{"m": 2, "n": 2, "entries":
//! [["...", "..."], ["...", "..."]], "label": "optional"}` whose entries are
//! expressions in the syntax above; `n` may be zero, in which case `entries`
//! must be the empty array.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::WeylMatrix;
use crate::rational::Rational;
use crate::weyl::WeylElement;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    m: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, m: usize) -> Self {
        Cursor { bytes: src.as_bytes(), pos: 0, m }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn syntax(&self, message: impl Into<String>) -> Error {
        Error::Syntax { position: self.pos + 1, message: message.into() }
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected '{}'", byte as char)))
        }
    }

    /// A run of ASCII digits, as the raw slice.
    fn digits(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected a number"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits"))
    }

    fn natural_u32(&mut self) -> Result<u32> {
        let start = self.pos;
        let digits = self.digits()?;
        digits.parse::<u32>().map_err(|_| Error::Syntax {
            position: start + 1,
            message: format!("exponent {digits} is too large"),
        })
    }

    fn expr(&mut self) -> Result<WeylElement> {
        self.skip_ws();
        let mut negate = false;
        if let Some(sign @ (b'+' | b'-')) = self.peek() {
            negate = sign == b'-';
            self.pos += 1;
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<WeylElement> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                acc = &acc * &self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<WeylElement> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.natural_u32()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<WeylElement> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let numer = BigInt::parse_bytes(self.digits()?.as_bytes(), 10)
                    .expect("digit run parses");
                let denom = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let start = self.pos;
                    let d = BigInt::parse_bytes(self.digits()?.as_bytes(), 10)
                        .expect("digit run parses");
                    if d == BigInt::from(0) {
                        return Err(Error::Syntax {
                            position: start + 1,
                            message: "zero denominator".into(),
                        });
                    }
                    d
                } else {
                    BigInt::one()
                };
                Ok(WeylElement::constant(self.m, Rational::new(numer, denom)))
            }
            Some(name @ (b'x' | b'd')) => {
                self.pos += 1;
                let start = self.pos;
                let digits = self.digits().map_err(|_| Error::Syntax {
                    position: start + 1,
                    message: format!("expected an index after '{}'", name as char),
                })?;
                let k = digits.parse::<usize>().unwrap_or(usize::MAX);
                if k == 0 || k > self.m {
                    return Err(Error::IndexOutOfRange {
                        name: format!("{}{digits}", name as char),
                        max: self.m,
                    });
                }
                Ok(match name {
                    b'x' => WeylElement::x(self.m, k),
                    _ => WeylElement::d(self.m, k),
                })
            }
            Some(c) => Err(self.syntax(format!("unexpected character '{}'", c as char))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}

/// Parses an expression over `A_m(Q)` in the grammar above.
pub fn parse_weyl_expr(src: &str, m: usize) -> Result<WeylElement> {
    assert!(m >= 1, "need at least one variable");
    let mut cursor = Cursor::new(src, m);
    let value = cursor.expr()?;
    cursor.skip_ws();
    if cursor.pos != cursor.bytes.len() {
        return Err(cursor.syntax("trailing input after expression"));
    }
    Ok(value)
}

/// The JSON shape of a matrix on disk. Entries are expression strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MatrixDocument {
    pub fn from_str(text: &str) -> Result<Self> {
        let doc: MatrixDocument =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if doc.m < 1 {
            return Err(Error::Format("m must be at least 1".into()));
        }
        if doc.entries.len() != doc.n {
            return Err(Error::Dimension(format!(
                "declared n = {} but found {} rows",
                doc.n,
                doc.entries.len()
            )));
        }
        for (i, row) in doc.entries.iter().enumerate() {
            if row.len() != doc.n {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, want {}",
                    i + 1,
                    row.len(),
                    doc.n
                )));
            }
        }
        Ok(doc)
    }

    pub fn to_matrix(&self) -> Result<WeylMatrix> {
        let mut rows = Vec::with_capacity(self.n);
        for (i, row) in self.entries.iter().enumerate() {
            let mut parsed = Vec::with_capacity(self.n);
            for (j, text) in row.iter().enumerate() {
                let entry = parse_weyl_expr(text, self.m).map_err(|e| match e {
                    Error::Syntax { position, message } => Error::Syntax {
                        position,
                        message: format!("entry ({}, {}): {message}", i + 1, j + 1),
                    },
                    other => other,
                })?;
                parsed.push(entry);
            }
            rows.push(parsed);
        }
        Ok(WeylMatrix::from_rows(self.m, self.n, rows))
    }

    pub fn from_matrix(matrix: &WeylMatrix, label: Option<String>) -> Self {
        MatrixDocument {
            m: matrix.num_vars(),
            n: matrix.size(),
            entries: (1..=matrix.size())
                .map(|i| {
                    (1..=matrix.size())
                        .map(|j| crate::printer::format_weyl(matrix.entry(i, j)))
                        .collect()
                })
                .collect(),
            label,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

/// Parses a JSON matrix document into a matrix.
pub fn parse_matrix_document(text: &str) -> Result<WeylMatrix> {
    MatrixDocument::from_str(text)?.to_matrix()
}
