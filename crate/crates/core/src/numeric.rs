//! Exact arithmetic in a real quadratic field Q(√D).
//!
//! A [`QuadraticNumber`] stores `(p + q√D) / r` with arbitrary-precision
//! integer components, eagerly normalized so that structural equality is
//! value equality. Sign, comparison, floor and ceiling are decided exactly,
//! which is what makes every floor boundary in the quasilattice formulas
//! decidable.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element `(p + q√D) / r` of a real quadratic field.
///
/// Invariants: `r > 0`, `gcd(p, q, r) = 1`, `D` square-free and positive.
/// When `q = 0` the number is rational and may be combined with numbers of
/// any field; the stored `D` then only matters for serialization.
#[derive(Clone, Debug)]
pub struct QuadraticNumber {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: u64,
}

/// The four field operations, for callers that want a single entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Result of an exact floor computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Floor {
    pub value: BigInt,
    pub is_integer: bool,
}

/// Splits `d` as `k² · d'` with `d'` square-free.
fn square_free_part(d: u64) -> (u64, u64) {
    let mut k = 1u64;
    let mut rest = d;
    let mut f = 2u64;
    while f * f <= rest {
        while rest % (f * f) == 0 {
            rest /= f * f;
            k *= f;
        }
        f += 1;
    }
    (k, rest)
}

impl QuadraticNumber {
    /// Builds `(p + q√d) / r`, extracting square factors from `d`.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, r: impl Into<BigInt>, d: u64) -> Result<Self> {
        let (p, mut q, r) = (p.into(), q.into(), r.into());
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if d == 0 {
            return Err(Error::Parse("discriminant must be positive".into()));
        }
        let (k, d) = square_free_part(d);
        q *= k;
        if d == 1 {
            return Ok(Self::raw(p + q, BigInt::zero(), r, 1));
        }
        Ok(Self::raw(p, q, r, d))
    }

    fn raw(p: BigInt, q: BigInt, r: BigInt, d: u64) -> Self {
        let mut x = QuadraticNumber { p, q, r, d };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.r.is_negative() {
            self.p = -&self.p;
            self.q = -&self.q;
            self.r = -&self.r;
        }
        let g = self.p.gcd(&self.q).gcd(&self.r);
        if !g.is_zero() && !g.is_one() {
            self.p /= &g;
            self.q /= &g;
            self.r /= &g;
        }
    }

    /// An integer, tagged with the trivial field.
    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::raw(n.into(), BigInt::zero(), BigInt::one(), 1)
    }

    /// The rational `num / den` (panics if `den == 0`).
    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Self::raw(num.into(), BigInt::zero(), den, 1)
    }

    /// `√d` (square factors extracted).
    pub fn sqrt(d: u64) -> Self {
        Self::new(0, 1, 1, d).expect("positive discriminant")
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// Golden ratio `(1 + √5) / 2`.
    pub fn phi() -> Self {
        Self::new(1, 1, 2, 5).unwrap()
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    /// Discriminant of the field this number was built in.
    pub fn discriminant(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.q.is_zero() && self.r.is_one()
    }

    /// The integer value, if this number is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.p.clone())
    }

    /// Galois conjugate `(p - q√D) / r`.
    pub fn conj(&self) -> Self {
        Self::raw(self.p.clone(), -&self.q, self.r.clone(), self.d)
    }

    fn common_d(&self, other: &Self) -> Result<u64> {
        match (self.q.is_zero(), other.q.is_zero()) {
            (false, false) if self.d != other.d => Err(Error::MixedDiscriminant(self.d, other.d)),
            (false, _) => Ok(self.d),
            (true, false) => Ok(other.d),
            (true, true) => Ok(if self.d == 1 { other.d } else { self.d }),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.common_d(other)?;
        Ok(Self::raw(
            &self.p * &other.r + &other.p * &self.r,
            &self.q * &other.r + &other.q * &self.r,
            &self.r * &other.r,
            d,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_d(other)?;
        let dd = BigInt::from(d);
        Ok(Self::raw(
            &self.p * &other.p + &self.q * &other.q * &dd,
            &self.p * &other.q + &self.q * &other.p,
            &self.r * &other.r,
            d,
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let d = self.common_d(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = BigInt::from(d);
        // x / y = x * conj(y) * r_y / (p_y² - q_y² D)
        let norm = &other.p * &other.p - &other.q * &other.q * &dd;
        let cp = &other.p * &other.r;
        let cq = -(&other.q * &other.r);
        Ok(Self::raw(
            &self.p * &cp + &self.q * &cq * &dd,
            &self.p * &cq + &self.q * &cp,
            &self.r * norm,
            d,
        ))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, exp: i32) -> Result<Self> {
        let base = if exp < 0 { self.recip()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.checked_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Exact sign of the real value: -1, 0 or +1.
    pub fn sign(&self) -> i32 {
        let sp = sign_of(&self.p);
        let sq = sign_of(&self.q);
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        // p and q√D have opposite signs; the larger magnitude wins.
        let p2 = &self.p * &self.p;
        let q2d = &self.q * &self.q * BigInt::from(self.d);
        if p2 > q2d {
            sp
        } else {
            sq
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Greatest integer ≤ x, together with whether x is itself an integer.
    pub fn floor_exact(&self) -> Floor {
        if self.q.is_zero() {
            return Floor {
                value: self.p.div_floor(&self.r),
                is_integer: self.r.is_one(),
            };
        }
        // q√D is irrational, so it lies strictly between f and f + 1, and no
        // multiple of r fits strictly between p + f and p + f + 1.
        let q2d = &self.q * &self.q * BigInt::from(self.d);
        let root = q2d.sqrt();
        let f = if self.q.is_positive() { root } else { -root - 1 };
        Floor {
            value: (&self.p + f).div_floor(&self.r),
            is_integer: false,
        }
    }

    pub fn floor(&self) -> BigInt {
        self.floor_exact().value
    }

    /// Least integer ≥ x.
    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// `[x]_σ`: floor for σ = +1, ceiling for σ = -1.
    pub fn round_sigma(&self, sigma: i32) -> BigInt {
        if sigma >= 0 {
            self.floor()
        } else {
            self.ceil()
        }
    }

    /// Nearest double, for rendering only.
    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        if p.is_finite() && q.is_finite() && r.is_finite() {
            return (p + q * (self.d as f64).sqrt()) / r;
        }
        // Shift everything down to a representable range.
        let bits = self.p.bits().max(self.q.bits()).max(self.r.bits());
        let shift = bits.saturating_sub(900) as usize;
        let down = |x: &BigInt| (x >> shift).to_f64().unwrap_or(0.0);
        (down(&self.p) + down(&self.q) * (self.d as f64).sqrt()) / down(&self.r)
    }

    /// Space-separated text form `"p q r D"`.
    pub fn to_text(&self) -> String {
        format!("{} {} {} {}", self.p, self.q, self.r, self.d)
    }

    /// Human form `"(p+q√D)/r"`.
    pub fn to_human(&self) -> String {
        if self.q.is_zero() {
            return if self.r.is_one() { self.p.to_string() } else { format!("{}/{}", self.p, self.r) };
        }
        let (sign, mag) = if self.q.is_negative() { ('-', -&self.q) } else { ('+', self.q.clone()) };
        format!("({}{}{}√{})/{}", self.p, sign, mag, self.d, self.r)
    }

    fn parse_text(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(Error::Parse(s.to_string()));
        }
        let int = |t: &str| BigInt::from_str(t).map_err(|_| Error::Parse(s.to_string()));
        let d: u64 = parts[3].parse().map_err(|_| Error::Parse(s.to_string()))?;
        Self::new(int(parts[0])?, int(parts[1])?, int(parts[2])?, d).map(|x| x.with_field(d))
    }

    fn parse_human(s: &str) -> Result<Self> {
        let bad = || Error::Parse(s.to_string());
        let (inner, r) = s.rsplit_once(")/").ok_or_else(bad)?;
        let inner = inner.strip_prefix('(').ok_or_else(bad)?;
        let (head, d) = inner.split_once('√').ok_or_else(bad)?;
        // split "p±q" at the last sign that is not the leading one
        let cut = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(bad)?;
        let p = BigInt::from_str(&head[..cut]).map_err(|_| bad())?;
        let q = BigInt::from_str(head[cut..].trim_start_matches('+')).map_err(|_| bad())?;
        let r = BigInt::from_str(r).map_err(|_| bad())?;
        let d: u64 = d.parse().map_err(|_| bad())?;
        Self::new(p, q, r, d).map(|x| x.with_field(d))
    }

    fn parse_rational(s: &str) -> Result<Self> {
        let bad = || Error::Parse(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::raw(n, BigInt::zero(), d, 1))
    }

    /// Keeps the field tag of a rational value so that text round-trips.
    fn with_field(mut self, d: u64) -> Self {
        if self.q.is_zero() {
            let (_, free) = square_free_part(d);
            self.d = free;
        }
        self
    }
}

fn sign_of(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Single-entry field arithmetic.
pub fn arith(x: &QuadraticNumber, y: &QuadraticNumber, op: ArithOp) -> Result<QuadraticNumber> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

impl PartialEq for QuadraticNumber {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.q == other.q
            && self.r == other.r
            && (self.q.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadraticNumber {}

impl Hash for QuadraticNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.q.hash(state);
        self.r.hash(state);
        if !self.q.is_zero() {
            self.d.hash(state);
        }
    }
}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order on a single field. Comparing numbers from two different
/// fields panics, as does any other mixed arithmetic through the operators.
impl Ord for QuadraticNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.checked_sub(other).expect("compare across fields");
        diff.sign().cmp(&0)
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber {
            p: -&self.p,
            q: -&self.q,
            r: self.r.clone(),
            d: self.d,
        }
    }
}

impl Neg for QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        -&self
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadraticNumber> for &QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{}", e),
                }
            }
        }
        impl $trait<QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: QuadraticNumber) -> QuadraticNumber {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadraticNumber> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadraticNumber> for &QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: QuadraticNumber) -> QuadraticNumber {
                self.$method(&rhs)
            }
        }
        impl $trait<i64> for &QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: i64) -> QuadraticNumber {
                self.$method(&QuadraticNumber::from_int(rhs))
            }
        }
        impl $trait<i64> for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: i64) -> QuadraticNumber {
                (&self).$method(&QuadraticNumber::from_int(rhs))
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);
forward_op!(Div, div, checked_div);

impl From<i64> for QuadraticNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigInt> for QuadraticNumber {
    fn from(n: BigInt) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_human())
    }
}

/// Accepts the text form `"p q r D"`, the human form `"(p+q√D)/r"`, and
/// plain rationals such as `"-3/4"` or `"7"`.
impl FromStr for QuadraticNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('(') {
            Self::parse_human(s)
        } else if s.contains(char::is_whitespace) {
            Self::parse_text(s)
        } else {
            Self::parse_rational(s)
        }
    }
}

impl Serialize for QuadraticNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_human())
    }
}

impl<'de> Deserialize<'de> for QuadraticNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
