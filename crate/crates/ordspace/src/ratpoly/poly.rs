//! The polynomial type: representation, arithmetic, parsing, printing.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::Result;

/// Exact rational number. The backing type keeps the denominator positive
/// and the fraction fully reduced; zero is 0/1.
pub type Rational = num_rational::BigRational;

/// Univariate polynomial over Q with coefficients stored in ascending
/// degree order and no trailing zero coefficient. The zero polynomial is
/// the empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn x() -> Self {
        Polynomial::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// x - xi
    pub fn line(xi: &Rational) -> Self {
        Polynomial::new(vec![-xi.clone(), Rational::one()])
    }

    pub fn from_int_coeffs(ascending: &[i64]) -> Self {
        Polynomial::new(
            ascending
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Polynomial::new(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division: `self = q * div + r` with `deg r < deg div`.
    /// Panics on a zero divisor.
    pub fn div_rem(&self, div: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        let dd = div.degree().unwrap();
        let dlc = div.leading_coefficient();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / &dlc;
            quot[k] = factor.clone();
            for (j, c) in div.coeffs.iter().enumerate() {
                let idx = k + j;
                let v = &rem[idx] - c * &factor;
                rem[idx] = v;
            }
            while rem.last().map_or(false, |c| c.is_zero()) {
                rem.pop();
            }
            if rem.len() <= dd {
                break;
            }
        }
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Exact division; returns `None` when the remainder is nonzero.
    pub fn try_exact_div(&self, div: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.div_rem(div);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Primitive integer form with positive leading coefficient: the unique
    /// positive-rational multiple with coprime integer coefficients and
    /// positive leading coefficient, times the sign of the original leading
    /// coefficient removed. Zero maps to zero.
    pub fn normalize_primitive(&self) -> Polynomial {
        let p = self.primitive_keep_sign();
        if p.leading_coefficient().is_negative() {
            p.neg()
        } else {
            p
        }
    }

    /// Primitive integer form, dividing only by a positive constant (the
    /// sign of every coefficient is preserved).
    pub fn primitive_keep_sign(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut denom_lcm = BigInt::one();
        for c in &self.coeffs {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&denom_lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        Polynomial::new(
            ints.into_iter()
                .map(|v| Rational::from_integer(v / &content))
                .collect(),
        )
    }

    /// Integer coefficient vector of the primitive sign-preserving form.
    pub(crate) fn int_coeffs_keep_sign(&self) -> Vec<BigInt> {
        self.primitive_keep_sign()
            .coeffs
            .iter()
            .map(|c| c.numer().clone())
            .collect()
    }

    /// Total order used to keep module outputs deterministic: degree first,
    /// then coefficients compared from the leading one down.
    pub fn cmp_canonical(&self, other: &Polynomial) -> Ordering {
        match self.coeffs.len().cmp(&other.coeffs.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl serde::Serialize for Polynomial {
    /// Canonical JSON form: array of coefficient strings, ascending degree.
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = ser.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> serde::Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(de)?;
        let mut coeffs = Vec::with_capacity(strings.len());
        for s in &strings {
            coeffs.push(parse_rational(s).map_err(serde::de::Error::custom)?);
        }
        Ok(Polynomial::new(coeffs))
    }
}

/// Exact sign of `p(t)`: -1, 0 or +1.
pub fn sign_at_rational(p: &Polynomial, t: &Rational) -> i32 {
    rational_sign(&p.eval(t))
}

pub(crate) fn rational_sign(v: &Rational) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let mag = c.abs();
            if i == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                if i == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

/// Parse a rational literal such as `7`, `-3/4`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    s.parse::<Rational>().map_err(|e| Error::Parse {
        pos: 0,
        msg: format!("invalid rational `{}`: {}", s, e),
    })
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }
}

/// Parse polynomial text: integer or rational coefficients, `^` for powers,
/// `x` as the variable. Examples: `x^2-2`, `3*x^3 - 1/2*x + 7`, `3x`.
pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let mut sc = Scanner::new(text);
    if sc.peek().is_none() {
        return Err(sc.err("empty polynomial"));
    }
    let mut acc = Polynomial::zero();
    let mut sign = if sc.eat(b'-') {
        -1
    } else {
        sc.eat(b'+');
        1
    };
    loop {
        let term = parse_term(&mut sc)?;
        acc = if sign < 0 { acc.sub(&term) } else { acc.add(&term) };
        match sc.peek() {
            None => break,
            Some(b'+') => {
                sc.bump();
                sign = 1;
            }
            Some(b'-') => {
                sc.bump();
                sign = -1;
            }
            Some(other) => {
                return Err(sc.err(format!("unexpected character `{}`", other as char)));
            }
        }
    }
    Ok(acc)
}

fn parse_term(sc: &mut Scanner<'_>) -> Result<Polynomial> {
    let coeff = match sc.peek() {
        Some(b) if b.is_ascii_digit() => {
            let numer = sc.uint()?;
            let denom = if sc.eat(b'/') { sc.uint()? } else { BigInt::one() };
            if denom.is_zero() {
                return Err(sc.err("zero denominator"));
            }
            Some(Rational::new(numer, denom))
        }
        _ => None,
    };
    let explicit_mul = coeff.is_some() && sc.eat(b'*');
    let has_x = match sc.peek() {
        Some(b'x') => {
            sc.bump();
            true
        }
        _ => {
            if explicit_mul {
                return Err(sc.err("expected `x` after `*`"));
            }
            false
        }
    };
    if coeff.is_none() && !has_x {
        return Err(sc.err("expected a coefficient or `x`"));
    }
    let power = if has_x {
        if sc.eat(b'^') {
            let e = sc.uint()?;
            use num_traits::ToPrimitive;
            e.to_usize().ok_or_else(|| sc.err("exponent too large"))?
        } else {
            1
        }
    } else {
        0
    };
    let c = coeff.unwrap_or_else(Rational::one);
    let mut coeffs = vec![Rational::zero(); power + 1];
    coeffs[power] = c;
    Ok(Polynomial::new(coeffs))
}
