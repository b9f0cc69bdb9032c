//! Dense univariate polynomials in `z` with complex coefficients.
//!
//! Used for the generator coefficients `A(z)`, `B(z)` and for every
//! coefficient `H_m(z)` of the general bivariate series.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polynomial stored by ascending powers of `z`.
///
/// The trailing coefficient is always nonzero; the zero polynomial has no
/// coefficients at all.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PolynomialZ {
    coeffs: Vec<Complex64>,
}

impl PolynomialZ {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `sum |c_k| |z|^k`, the natural scale for residuals at `z`.
    pub fn abs_eval(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl Add for &PolynomialZ {
    type Output = PolynomialZ;

    fn add(self, rhs: &PolynomialZ) -> PolynomialZ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolynomialZ::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &PolynomialZ {
    type Output = PolynomialZ;

    fn sub(self, rhs: &PolynomialZ) -> PolynomialZ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolynomialZ::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &PolynomialZ {
    type Output = PolynomialZ;

    fn neg(self) -> PolynomialZ {
        PolynomialZ::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &PolynomialZ {
    type Output = PolynomialZ;

    fn mul(self, rhs: &PolynomialZ) -> PolynomialZ {
        if self.is_zero() || rhs.is_zero() {
            return PolynomialZ::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolynomialZ::new(out)
    }
}

/// Canonical text form: comma-separated ascending coefficients, each either
/// a real literal or `a+bi` / `a-bi`. Accepted back by [`parse_poly`].
impl fmt::Display for PolynomialZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else if c.im.is_sign_negative() {
                write!(f, "{}-{}i", c.re, -c.im)?;
            } else {
                write!(f, "{}+{}i", c.re, c.im)?;
            }
        }
        Ok(())
    }
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self { chars: text.char_indices().collect(), pos: 0, text }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.text.len(), |&(i, _)| i)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { position: self.offset(), message: message.into() })
    }

    fn digits(&mut self, buf: &mut String) -> usize {
        let mut n = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            buf.push(c);
            self.pos += 1;
            n += 1;
        }
        n
    }

    /// `[sign] digits [. digits] [(e|E) [sign] digits]`, or `inf`/`nan` are rejected.
    fn real(&mut self, allow_sign: bool) -> Result<f64> {
        let start = self.offset();
        let mut buf = String::new();
        if allow_sign {
            if let Some(s @ ('+' | '-')) = self.peek() {
                buf.push(s);
                self.pos += 1;
            }
        }
        let mut mantissa = self.digits(&mut buf);
        if self.peek() == Some('.') {
            buf.push('.');
            self.pos += 1;
            mantissa += self.digits(&mut buf);
        }
        if mantissa == 0 {
            return self.error("expected a decimal number");
        }
        if let Some(e @ ('e' | 'E')) = self.peek() {
            buf.push(e);
            self.pos += 1;
            if let Some(s @ ('+' | '-')) = self.peek() {
                buf.push(s);
                self.pos += 1;
            }
            if self.digits(&mut buf) == 0 {
                return self.error("expected exponent digits");
            }
        }
        buf.parse::<f64>()
            .map_err(|e| Error::Parse { position: start, message: e.to_string() })
    }

    fn coeff(&mut self) -> Result<Complex64> {
        self.skip_ws();
        let re = self.real(true)?;
        self.skip_ws();
        match self.peek() {
            None | Some(',') => Ok(Complex64::new(re, 0.0)),
            Some('i') => {
                self.pos += 1;
                self.skip_ws();
                Ok(Complex64::new(0.0, re))
            }
            Some(sign @ ('+' | '-')) => {
                self.pos += 1;
                self.skip_ws();
                let im = self.real(false)?;
                self.skip_ws();
                if self.bump() != Some('i') {
                    self.pos -= 1;
                    return self.error("expected 'i' after imaginary part");
                }
                let c = Complex64::new(re, if sign == '-' { -im } else { im });
                self.skip_ws();
                Ok(c)
            }
            Some(c) => self.error(format!("unexpected character '{c}'")),
        }
    }
}

/// Parses `coeff ("," coeff)*` with ascending powers of `z`.
///
/// Each `coeff` is a decimal real (`-2`, `0.5`, `1e-3`) or a complex literal
/// `a+bi` / `a-bi`; a bare `bi` is accepted as purely imaginary. Whitespace
/// between tokens is ignored; it may not split a number.
pub fn parse_poly(text: &str) -> Result<PolynomialZ> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    if cur.peek().is_none() {
        return cur.error("empty polynomial");
    }
    let mut coeffs = vec![cur.coeff()?];
    while let Some(c) = cur.peek() {
        if c != ',' {
            return cur.error(format!("expected ',' but found '{c}'"));
        }
        cur.bump();
        coeffs.push(cur.coeff()?);
    }
    Ok(PolynomialZ::new(coeffs))
}
