//! Exact amplitude arithmetic over the field Q(i, sqrt2).
//!
//! Every amplitude is (a + b*sqrt2) + (c + d*sqrt2)*i with a, b, c, d
//! arbitrary-precision rationals, so simulation never rounds. Real-valued
//! quantities (norms, probabilities) use [`RealValue`] = a + b*sqrt2, whose
//! sign is decidable exactly by comparing a^2 against 2b^2.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Arbitrary-precision rational, the coefficient type everywhere.
pub type Rational = BigRational;

fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Element of Q(sqrt2): `q + s*sqrt2`. Totally ordered with exact sign
/// decisions; used for norms, probabilities and total-variation distances.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RealValue {
    /// rational part
    pub q: Rational,
    /// coefficient of sqrt2
    pub s: Rational,
}

impl RealValue {
    pub fn new(q: Rational, s: Rational) -> Self {
        RealValue { q, s }
    }

    pub fn zero() -> Self {
        RealValue { q: Rational::zero(), s: Rational::zero() }
    }

    pub fn one() -> Self {
        RealValue { q: Rational::one(), s: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        RealValue { q: rat_int(n), s: Rational::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        RealValue { q: BigRational::new(BigInt::from(num), BigInt::from(den)), s: Rational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero() && self.s.is_zero()
    }

    /// Exact sign: 1, 0 or -1. Since sqrt2 is irrational, q + s*sqrt2 = 0
    /// only when q = s = 0; otherwise compare q^2 with 2 s^2 on the branch
    /// where q and s disagree in sign.
    pub fn sign(&self) -> i32 {
        let sq = if self.q.is_zero() { 0 } else if self.q.is_positive() { 1 } else { -1 };
        let ss = if self.s.is_zero() { 0 } else if self.s.is_positive() { 1 } else { -1 };
        match (sq, ss) {
            (0, 0) => 0,
            (1, 0) | (1, 1) | (0, 1) => 1,
            (-1, 0) | (-1, -1) | (0, -1) => -1,
            (1, -1) => {
                // positive iff q^2 > 2 s^2
                let lhs = &self.q * &self.q;
                let rhs = rat_int(2) * &self.s * &self.s;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => 1,
                    Ordering::Less => -1,
                    Ordering::Equal => 0, // unreachable: sqrt2 irrational
                }
            }
            (-1, 1) => {
                // positive iff 2 s^2 > q^2
                let lhs = rat_int(2) * &self.s * &self.s;
                let rhs = &self.q * &self.q;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => 1,
                    Ordering::Less => -1,
                    Ordering::Equal => 0,
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 { -self.clone() } else { self.clone() }
    }

    /// Exact multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        // 1/(q + s*sqrt2) = (q - s*sqrt2)/(q^2 - 2 s^2)
        let den = &self.q * &self.q - rat_int(2) * &self.s * &self.s;
        RealValue { q: &self.q / &den, s: -(&self.s / &den) }
    }

    /// Float rendering. Errors when the value exceeds the f64 range.
    pub fn to_f64(&self) -> Result<f64, FloatOverflow> {
        let q = self.q.to_f64().ok_or(FloatOverflow)?;
        let s = self.s.to_f64().ok_or(FloatOverflow)?;
        let v = q + s * std::f64::consts::SQRT_2;
        if v.is_finite() { Ok(v) } else { Err(FloatOverflow) }
    }
}

impl PartialOrd for RealValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RealValue {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.clone() - other.clone();
        match d.sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("value exceeds the f64 range")]
pub struct FloatOverflow;

impl Add for RealValue {
    type Output = RealValue;
    fn add(self, rhs: RealValue) -> RealValue {
        RealValue { q: self.q + rhs.q, s: self.s + rhs.s }
    }
}

impl AddAssign for RealValue {
    fn add_assign(&mut self, rhs: RealValue) {
        self.q += rhs.q;
        self.s += rhs.s;
    }
}

impl Sub for RealValue {
    type Output = RealValue;
    fn sub(self, rhs: RealValue) -> RealValue {
        RealValue { q: self.q - rhs.q, s: self.s - rhs.s }
    }
}

impl Mul for RealValue {
    type Output = RealValue;
    fn mul(self, rhs: RealValue) -> RealValue {
        // (q1 + s1*r)(q2 + s2*r) = q1 q2 + 2 s1 s2 + (q1 s2 + s1 q2) r
        let q = &self.q * &rhs.q + rat_int(2) * &self.s * &rhs.s;
        let s = &self.q * &rhs.s + &self.s * &rhs.q;
        RealValue { q, s }
    }
}

impl Neg for RealValue {
    type Output = RealValue;
    fn neg(self) -> RealValue {
        RealValue { q: -self.q, s: -self.s }
    }
}

impl Neg for &RealValue {
    type Output = RealValue;
    fn neg(self) -> RealValue {
        RealValue { q: -self.q.clone(), s: -self.s.clone() }
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Amplitude { re: self.clone(), im: RealValue::zero() })
    }
}

impl fmt::Debug for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Complex amplitude (a + b*sqrt2) + (c + d*sqrt2)i, always in canonical
/// reduced form (BigRational keeps denominators positive and reduced; zero
/// is (0,0,0,0)).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Amplitude {
    pub re: RealValue,
    pub im: RealValue,
}

impl Amplitude {
    pub fn new(re: RealValue, im: RealValue) -> Self {
        Amplitude { re, im }
    }

    pub fn zero() -> Self {
        Amplitude { re: RealValue::zero(), im: RealValue::zero() }
    }

    pub fn one() -> Self {
        Amplitude { re: RealValue::one(), im: RealValue::zero() }
    }

    pub fn i() -> Self {
        Amplitude { re: RealValue::zero(), im: RealValue::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Amplitude { re: RealValue::from_int(n), im: RealValue::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Amplitude { re: RealValue::from_ratio(num, den), im: RealValue::zero() }
    }

    /// 1/sqrt2 = sqrt2/2, the Hadamard coefficient.
    pub fn inv_sqrt2() -> Self {
        Amplitude { re: RealValue::new(Rational::zero(), BigRational::new(BigInt::one(), BigInt::from(2))), im: RealValue::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Amplitude { re: self.re.clone(), im: -&self.im }
    }

    /// |z|^2 as an exact real value.
    pub fn norm_sq(&self) -> RealValue {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    /// Exact multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm_sq().inv();
        let c = self.conj();
        Amplitude { re: c.re * n.clone(), im: c.im * n }
    }

    /// Float rendering (re, im). Errors when a coefficient exceeds f64 range.
    pub fn to_f64(&self) -> Result<(f64, f64), FloatOverflow> {
        Ok((self.re.to_f64()?, self.im.to_f64()?))
    }
}

impl Add for Amplitude {
    type Output = Amplitude;
    fn add(self, rhs: Amplitude) -> Amplitude {
        Amplitude { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl AddAssign for Amplitude {
    fn add_assign(&mut self, rhs: Amplitude) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for Amplitude {
    type Output = Amplitude;
    fn sub(self, rhs: Amplitude) -> Amplitude {
        Amplitude { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for Amplitude {
    type Output = Amplitude;
    fn mul(self, rhs: Amplitude) -> Amplitude {
        // (x1 + y1 i)(x2 + y2 i) with x, y in Q(sqrt2)
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Amplitude { re, im }
    }
}

impl Neg for Amplitude {
    type Output = Amplitude;
    fn neg(self) -> Amplitude {
        Amplitude { re: -self.re, im: -self.im }
    }
}

impl fmt::Debug for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---- printing ----

fn fmt_rat(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// One printed term: coefficient together with its sqrt2/i factors.
fn push_term(out: &mut String, coeff: &Rational, suffix: &str) {
    if coeff.is_zero() {
        return;
    }
    let mag = coeff.abs();
    if out.is_empty() {
        if coeff.is_negative() {
            out.push('-');
        }
    } else if coeff.is_negative() {
        out.push('-');
    } else {
        out.push('+');
    }
    if suffix.is_empty() {
        out.push_str(&fmt_rat(&mag));
    } else if mag.is_one() {
        out.push_str(suffix);
    } else {
        out.push_str(&fmt_rat(&mag));
        out.push('*');
        out.push_str(suffix);
    }
}

impl fmt::Display for Amplitude {
    /// Canonical compact form: terms ordered (rational, sqrt2, i, sqrt2*i),
    /// zero terms omitted, "0" for zero. `parse` inverts this exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        push_term(&mut out, &self.re.q, "");
        push_term(&mut out, &self.re.s, "sqrt2");
        push_term(&mut out, &self.im.q, "i");
        push_term(&mut out, &self.im.s, "sqrt2*i");
        if out.is_empty() {
            out.push('0');
        }
        write!(f, "{out}")
    }
}

// ---- parsing ----

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("amplitude syntax error at byte {pos}: {msg}")]
pub struct AmpParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src: src.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AmpParseError> {
        Err(AmpParseError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt, AmpParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    /// atom := integer | "sqrt2" | "i"
    fn atom(&mut self) -> Result<Amplitude, AmpParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'i') => {
                self.pos += 1;
                Ok(Amplitude::i())
            }
            Some(b's') => {
                if self.src[self.pos..].starts_with(b"sqrt2") {
                    self.pos += 5;
                    Ok(Amplitude::new(RealValue::new(Rational::zero(), Rational::one()), RealValue::zero()))
                } else {
                    self.err("expected sqrt2")
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Amplitude::new(RealValue::new(BigRational::from_integer(n), Rational::zero()), RealValue::zero()))
            }
            _ => self.err("expected rational, sqrt2 or i"),
        }
    }

    /// term := ["-"] atom (("*" | "/") atom)*
    fn term(&mut self, leading_sign: i32) -> Result<Amplitude, AmpParseError> {
        let mut acc = self.atom()?;
        loop {
            self.skip_ws();
            let op = match self.peek() {
                Some(b'*') => b'*',
                Some(b'/') => b'/',
                _ => break,
            };
            self.pos += 1;
            let rhs = self.atom()?;
            if op == b'*' {
                acc = acc * rhs;
            } else {
                if rhs.is_zero() {
                    return self.err("division by zero");
                }
                acc = acc * rhs.inv();
            }
        }
        if leading_sign < 0 {
            acc = -acc;
        }
        Ok(acc)
    }

    fn amplitude(&mut self) -> Result<Amplitude, AmpParseError> {
        self.skip_ws();
        let mut sign = 1;
        if self.eat(b'-') {
            sign = -1;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term(sign)?;
        loop {
            self.skip_ws();
            let sign = match self.peek() {
                Some(b'+') => 1,
                Some(b'-') => -1,
                None => break,
                _ => return self.err("expected '+', '-' or end of input"),
            };
            self.pos += 1;
            acc = acc + self.term(sign)?;
        }
        Ok(acc)
    }
}

/// Parse the amplitude grammar. Whitespace is insignificant.
pub fn parse(src: &str) -> Result<Amplitude, AmpParseError> {
    let mut p = Parser::new(src);
    let a = p.amplitude()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    Ok(a)
}

/// Parse a real-valued literal (no `i` terms allowed).
pub fn parse_real(src: &str) -> Result<RealValue, AmpParseError> {
    let a = parse(src)?;
    if !a.im.is_zero() {
        return Err(AmpParseError { pos: 0, msg: "expected a real value, found imaginary terms".into() });
    }
    Ok(a.re)
}
