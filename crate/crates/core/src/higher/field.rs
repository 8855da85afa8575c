//! Exact arithmetic in `Q(γ)` for a real root `γ` of a monic integer
//! polynomial, with signs and floors certified by rational intervals.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::QuadraticNumber;

pub const DEFAULT_PRECISION_CAP: u32 = 4096;
const BASE_BITS: u32 = 96;

type Rat = BigRational;

/// `Q[x]/(p)` with `p` monic and irreducible, embedded by the unique root
/// of `p` in `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    /// Coefficients of `p`, lowest degree first, leading 1 included.
    poly: Vec<BigInt>,
    lo: Rat,
    hi: Rat,
    cap: u32,
}

fn rat(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

fn eval_poly_rat(poly: &[BigInt], x: &Rat) -> Rat {
    poly.iter().rev().fold(Rat::zero(), |acc, c| acc * x + rat(c.clone()))
}

/// `[a, b]` with `a ≤ b`.
#[derive(Clone, Debug)]
struct Interval(Rat, Rat);

impl Interval {
    fn point(x: Rat) -> Self {
        Interval(x.clone(), x)
    }

    fn add_rat(&self, c: &Rat) -> Self {
        Interval(&self.0 + c, &self.1 + c)
    }

    fn mul(&self, o: &Interval) -> Self {
        let p = [&self.0 * &o.0, &self.0 * &o.1, &self.1 * &o.0, &self.1 * &o.1];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Interval(lo, hi)
    }
}

fn eval_interval(coeffs: &[Rat], x: &Interval) -> Interval {
    let mut acc = Interval::point(Rat::zero());
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add_rat(c);
    }
    acc
}

impl NumberField {
    /// `poly` lowest degree first; `(lo, hi)` must isolate a simple root.
    pub fn new(poly: Vec<BigInt>, lo: Rat, hi: Rat) -> Result<Arc<Self>> {
        Self::with_precision_cap(poly, lo, hi, DEFAULT_PRECISION_CAP)
    }

    pub fn with_precision_cap(poly: Vec<BigInt>, lo: Rat, hi: Rat, cap: u32) -> Result<Arc<Self>> {
        if poly.len() < 2 || !poly.last().unwrap().is_one() {
            return Err(Error::InvalidField("polynomial must be monic of degree >= 1".into()));
        }
        if lo >= hi {
            return Err(Error::InvalidField("empty isolating interval".into()));
        }
        let (pl, ph) = (eval_poly_rat(&poly, &lo), eval_poly_rat(&poly, &hi));
        if (pl.signum() * ph.signum()) != -Rat::one() {
            return Err(Error::InvalidField("polynomial does not change sign on the interval".into()));
        }
        let deriv: Vec<Rat> = poly.iter().enumerate().skip(1).map(|(i, c)| rat(c * BigInt::from(i))).collect();
        let mut field = NumberField { poly, lo, hi, cap };
        // shrink until p' keeps one sign, so the root is simple and unique
        let mut steps = 0;
        loop {
            let d = eval_interval(&deriv, &Interval(field.lo.clone(), field.hi.clone()));
            if d.0.is_positive() || d.1.is_negative() {
                break;
            }
            field.bisect();
            steps += 1;
            if steps > cap {
                return Err(Error::InvalidField("could not isolate a simple root".into()));
            }
        }
        let target = Rat::new(BigInt::one(), BigInt::one() << BASE_BITS);
        while &field.hi - &field.lo > target {
            field.bisect();
        }
        Ok(Arc::new(field))
    }

    /// `Q(√d)` with the positive root of `x² - d`.
    pub fn quadratic(d: u64) -> Result<Arc<Self>> {
        let r = num_integer::Roots::sqrt(&d);
        NumberField::new(vec![-BigInt::from(d), BigInt::zero(), BigInt::one()], rat(r), rat(r + 1))
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn precision_cap(&self) -> u32 {
        self.cap
    }

    pub fn poly(&self) -> &[BigInt] {
        &self.poly
    }

    pub fn root_interval(&self) -> (&Rat, &Rat) {
        (&self.lo, &self.hi)
    }

    fn bisect(&mut self) {
        let mid = (&self.lo + &self.hi) / rat(2);
        let pm = eval_poly_rat(&self.poly, &mid);
        if pm.is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        if pm.signum() == eval_poly_rat(&self.poly, &self.lo).signum() {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// The root as an element of the field.
    pub fn gen(self: &Arc<Self>) -> FieldElem {
        let mut c = vec![Rat::zero(); self.degree()];
        if c.len() > 1 {
            c[1] = Rat::one();
            FieldElem::from_coeffs(self.clone(), c)
        } else {
            // degree one: γ is the rational root
            FieldElem::from_coeffs(self.clone(), vec![-rat(self.poly[0].clone())])
        }
    }

    pub fn from_rat(self: &Arc<Self>, x: Rat) -> FieldElem {
        let mut c = vec![Rat::zero(); self.degree()];
        c[0] = x;
        FieldElem::from_coeffs(self.clone(), c)
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElem {
        self.from_rat(rat(n))
    }

    /// Embeds `(p + q√D)/r`; the field must be `Q(√D)` given by `x² - D`.
    pub fn from_quadratic(self: &Arc<Self>, x: &QuadraticNumber) -> Result<FieldElem> {
        let r = x.r().clone();
        let p = Rat::new(x.p().clone(), r.clone());
        if x.is_rational() {
            return Ok(self.from_rat(p));
        }
        let d = BigInt::from(x.discriminant());
        if self.poly != vec![-d, BigInt::zero(), BigInt::one()] {
            return Err(Error::InvalidField(format!("element of Q(√{}) outside this field", x.discriminant())));
        }
        Ok(FieldElem::from_coeffs(self.clone(), vec![p, Rat::new(x.q().clone(), r)]))
    }
}

/// An element `Σ c_i γ^i` of a [`NumberField`].
#[derive(Clone)]
pub struct FieldElem {
    field: Arc<NumberField>,
    coeffs: Vec<Rat>,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem({self})")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}

impl Eq for FieldElem {}

/// Floor of a field element with an integrality flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedFloor {
    pub value: BigInt,
    pub is_integer: bool,
}

fn floor_rat(x: &Rat) -> BigInt {
    x.numer().div_floor(x.denom())
}

impl FieldElem {
    fn from_coeffs(field: Arc<NumberField>, coeffs: Vec<Rat>) -> Self {
        FieldElem { field, coeffs }
    }

    /// Parses whitespace-separated rational coefficients, lowest power first.
    pub fn parse(field: &Arc<NumberField>, s: &str) -> Result<Self> {
        let mut c: Vec<Rat> = s
            .split_whitespace()
            .map(|t| t.parse::<Rat>().map_err(|_| Error::Parse(s.to_string())))
            .collect::<Result<_>>()?;
        if c.is_empty() || c.len() > field.degree() {
            return Err(Error::Parse(s.to_string()));
        }
        c.resize(field.degree(), Rat::zero());
        Ok(FieldElem::from_coeffs(field.clone(), c))
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    fn same_field(&self, o: &FieldElem) -> Result<()> {
        if Arc::ptr_eq(&self.field, &o.field) || self.field == o.field {
            Ok(())
        } else {
            Err(Error::InvalidField("operands from different fields".into()))
        }
    }

    pub fn add(&self, o: &FieldElem) -> Result<FieldElem> {
        self.same_field(o)?;
        let c = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        Ok(FieldElem::from_coeffs(self.field.clone(), c))
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem::from_coeffs(self.field.clone(), self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn sub(&self, o: &FieldElem) -> Result<FieldElem> {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Rat) -> FieldElem {
        FieldElem::from_coeffs(self.field.clone(), self.coeffs.iter().map(|a| a * k).collect())
    }

    pub fn add_int(&self, n: i64) -> FieldElem {
        let mut c = self.coeffs.clone();
        c[0] += rat(n);
        FieldElem::from_coeffs(self.field.clone(), c)
    }

    pub fn mul(&self, o: &FieldElem) -> Result<FieldElem> {
        self.same_field(o)?;
        let n = self.field.degree();
        let mut prod = vec![Rat::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        // reduce by the monic minimal polynomial from the top
        for k in (n..prod.len()).rev() {
            let top = std::mem::replace(&mut prod[k], Rat::zero());
            if top.is_zero() {
                continue;
            }
            for (i, p) in self.field.poly.iter().take(n).enumerate() {
                prod[k - n + i] -= &top * rat(p.clone());
            }
        }
        prod.truncate(n);
        Ok(FieldElem::from_coeffs(self.field.clone(), prod))
    }

    /// Multiplicative inverse by solving the multiplication-matrix system.
    pub fn recip(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.field.degree();
        // column j = self · γ^j
        let mut cols = Vec::with_capacity(n);
        let mut basis = self.field.from_int(1);
        let gen = self.field.gen();
        for _ in 0..n {
            cols.push(self.mul(&basis)?.coeffs);
            basis = basis.mul(&gen)?;
        }
        let mut m: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
        let mut rhs = vec![Rat::zero(); n];
        rhs[0] = Rat::one();
        let x = solve_rat(&mut m, &mut rhs).ok_or_else(|| Error::InvalidField("minimal polynomial is reducible".into()))?;
        Ok(FieldElem::from_coeffs(self.field.clone(), x))
    }

    pub fn div(&self, o: &FieldElem) -> Result<FieldElem> {
        self.mul(&o.recip()?)
    }

    fn enclose(&self, g: &Interval) -> Interval {
        eval_interval(&self.coeffs, g)
    }

    /// Refines a private copy of the root interval until `accept` succeeds.
    fn certify<T>(&self, mut accept: impl FnMut(&Interval) -> Option<T>) -> Result<T> {
        let mut f = (*self.field).clone();
        for _ in 0..=f.cap {
            let iv = self.enclose(&Interval(f.lo.clone(), f.hi.clone()));
            if let Some(v) = accept(&iv) {
                return Ok(v);
            }
            f.bisect();
        }
        Err(Error::PrecisionExhausted(f.cap))
    }

    pub fn sign(&self) -> Result<i32> {
        if self.is_zero() {
            return Ok(0);
        }
        if self.is_rational() {
            return Ok(self.coeffs[0].signum().to_integer().try_into().unwrap());
        }
        self.certify(|iv| {
            if iv.0.is_positive() {
                Some(1)
            } else if iv.1.is_negative() {
                Some(-1)
            } else {
                None
            }
        })
    }

    pub fn cmp_exact(&self, o: &FieldElem) -> Result<Ordering> {
        Ok(self.sub(o)?.sign()?.cmp(&0))
    }

    pub fn floor_certified(&self) -> Result<CertifiedFloor> {
        if self.is_rational() {
            let c = &self.coeffs[0];
            return Ok(CertifiedFloor { value: floor_rat(c), is_integer: c.is_integer() });
        }
        // irrational, so an interval inside [k, k+1) certifies ⌊x⌋ = k
        self.certify(|iv| {
            let (a, b) = (floor_rat(&iv.0), floor_rat(&iv.1));
            (a == b).then_some(a)
        })
        .map(|value| CertifiedFloor { value, is_integer: false })
    }

    /// Converts back to a quadratic number when the field is `Q(√D)`.
    pub fn to_quadratic(&self) -> Result<QuadraticNumber> {
        let p = &self.field.poly;
        let d = if p.len() == 3 && p[1].is_zero() && p[0].is_negative() {
            u64::try_from(-p[0].clone()).map_err(|_| Error::InvalidField("discriminant too large".into()))?
        } else {
            return Err(Error::InvalidField("not a quadratic field of the form x² - D".into()));
        };
        let (a, b) = (&self.coeffs[0], &self.coeffs[1]);
        let r = a.denom().lcm(b.denom());
        let pn = a.numer() * (&r / a.denom());
        let qn = b.numer() * (&r / b.denom());
        QuadraticNumber::new(pn, qn, r, d)
    }

    /// Midpoint of a certified enclosure, for rendering only.
    pub fn approx(&self) -> f64 {
        let iv = self.enclose(&Interval(self.field.lo.clone(), self.field.hi.clone()));
        let mid = (iv.0 + iv.1) / rat(2);
        num_traits::ToPrimitive::to_f64(&mid).unwrap_or(f64::NAN)
    }
}

/// Gaussian elimination over `Q`; `None` if singular.
fn solve_rat(m: &mut [Vec<Rat>], rhs: &mut [Rat]) -> Option<Vec<Rat>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let k = &m[r][col] / &m[col][col];
                for c in col..n {
                    let v = &k * &m[col][c];
                    m[r][c] -= v;
                }
                let v = &k * &rhs[col];
                rhs[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plastic() -> Arc<NumberField> {
        // x³ - x - 1, root ≈ 1.3247
        NumberField::new(vec![BigInt::from(-1), BigInt::from(-1), BigInt::zero(), BigInt::one()], rat(1), rat(2)).unwrap()
    }

    #[test]
    fn plastic_arithmetic() {
        let k = plastic();
        let g = k.gen();
        let g3 = g.mul(&g).unwrap().mul(&g).unwrap();
        assert_eq!(g3, g.add_int(1));
        let inv = g.recip().unwrap();
        assert_eq!(inv.mul(&g).unwrap(), k.from_int(1));
        assert_eq!(g.floor_certified().unwrap().value, BigInt::from(1));
        assert_eq!(g.mul(&g).unwrap().floor_certified().unwrap().value, BigInt::from(1));
        assert_eq!(g.neg().floor_certified().unwrap().value, BigInt::from(-2));
        assert_eq!(g.sub(&k.from_rat(Rat::new(BigInt::from(4), BigInt::from(3)))).unwrap().sign().unwrap(), -1);
    }

    #[test]
    fn quadratic_round_trip() {
        let k = NumberField::quadratic(5).unwrap();
        let phi = QuadraticNumber::phi();
        let e = k.from_quadratic(&phi).unwrap();
        assert_eq!(e.mul(&e).unwrap(), e.add_int(1));
        assert_eq!(e.to_quadratic().unwrap(), phi);
        assert_eq!(e.floor_certified().unwrap().value, BigInt::from(1));
    }

    #[test]
    fn precision_cap_is_enforced() {
        let k = NumberField::with_precision_cap(
            vec![BigInt::from(-2), BigInt::zero(), BigInt::one()],
            rat(1),
            rat(2),
            0,
        )
        .unwrap();
        // 10^40 (√2 - 1) needs far more than 96 bits of root precision
        let big = k.gen().add_int(-1).scale(&rat(BigInt::from(10).pow(40)));
        assert_eq!(big.floor_certified(), Err(Error::PrecisionExhausted(0)));
    }

    #[test]
    fn rejects_bad_interval() {
        assert!(NumberField::new(vec![BigInt::from(-2), BigInt::zero(), BigInt::one()], rat(2), rat(3)).is_err());
    }
}
