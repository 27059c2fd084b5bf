//! Value group `p^Q ∪ {0, ∞}`, p-adic absolute values on `Q`, and monomials `ρ·t^g`.

use alloc::format;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Midpoint of two exponents.
pub fn mid(a: &Q, b: &Q) -> Q {
    (a + b) / qi(2)
}

/// An element of `p^Q ∪ {0, ∞}`; `Exp(q)` stands for `p^q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Radius {
    Zero,
    Exp(Q),
    Infinity,
}

impl Radius {
    pub fn one() -> Radius {
        Radius::Exp(Q::zero())
    }

    pub fn exp(n: i64, d: i64) -> Radius {
        Radius::Exp(q(n, d))
    }

    pub fn expi(n: i64) -> Radius {
        Radius::Exp(qi(n))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Radius::Zero)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Radius::Infinity)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn exponent(&self) -> Option<&Q> {
        match self {
            Radius::Exp(q) => Some(q),
            _ => None,
        }
    }

    /// Product; `Infinity·Zero` is undefined.
    pub fn mul(&self, other: &Radius) -> Result<Radius> {
        match (self, other) {
            (Radius::Infinity, Radius::Zero) | (Radius::Zero, Radius::Infinity) => {
                domain("Infinity·Zero is undefined")
            }
            (Radius::Zero, _) | (_, Radius::Zero) => Ok(Radius::Zero),
            (Radius::Infinity, _) | (_, Radius::Infinity) => Ok(Radius::Infinity),
            (Radius::Exp(a), Radius::Exp(b)) => Ok(Radius::Exp(a + b)),
        }
    }

    /// Quotient `self / other`; only `Exp` divisors are allowed.
    pub fn div(&self, other: &Radius) -> Result<Radius> {
        match other {
            Radius::Exp(b) => Ok(match self {
                Radius::Exp(a) => Radius::Exp(a - b),
                r => r.clone(),
            }),
            _ => domain("division by Zero or Infinity"),
        }
    }

    pub fn pow(&self, e: &Q) -> Result<Radius> {
        match self {
            Radius::Exp(a) => Ok(Radius::Exp(a * e)),
            _ => domain("rational powers are only defined on Exp values"),
        }
    }

    /// Total variant of `pow` used by term evaluation: `0^e` is `0`, `1` or `∞`
    /// for `e > 0`, `e = 0`, `e < 0`.
    pub fn pow_total(&self, e: &Q) -> Radius {
        match self {
            Radius::Exp(a) => Radius::Exp(a * e),
            Radius::Zero => match e.cmp(&Q::zero()) {
                Ordering::Greater => Radius::Zero,
                Ordering::Equal => Radius::one(),
                Ordering::Less => Radius::Infinity,
            },
            Radius::Infinity => match e.cmp(&Q::zero()) {
                Ordering::Greater => Radius::Infinity,
                Ordering::Equal => Radius::one(),
                Ordering::Less => Radius::Zero,
            },
        }
    }

    /// Total product where `Zero` absorbs everything, `Infinity` included.
    pub fn mul_total(&self, other: &Radius) -> Radius {
        match (self, other) {
            (Radius::Zero, _) | (_, Radius::Zero) => Radius::Zero,
            (Radius::Infinity, _) | (_, Radius::Infinity) => Radius::Infinity,
            (Radius::Exp(a), Radius::Exp(b)) => Radius::Exp(a + b),
        }
    }
}

impl PartialOrd for Radius {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Radius {
    fn cmp(&self, other: &Self) -> Ordering {
        use Radius::*;
        match (self, other) {
            (Zero, Zero) | (Infinity, Infinity) => Ordering::Equal,
            (Zero, _) | (_, Infinity) => Ordering::Less,
            (_, Zero) | (Infinity, _) => Ordering::Greater,
            (Exp(a), Exp(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Zero => write!(f, "0"),
            Radius::Infinity => write!(f, "inf"),
            Radius::Exp(q) => write!(f, "p^{q}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusOp<'a> {
    Cmp,
    Mul,
    Pow(&'a Q),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RadiusOutcome {
    Radius(Radius),
    Ordering(Ordering),
}

pub fn radius_arith(a: &Radius, b: &Radius, op: RadiusOp<'_>) -> Result<RadiusOutcome> {
    Ok(match op {
        RadiusOp::Cmp => RadiusOutcome::Ordering(a.cmp(b)),
        RadiusOp::Mul => RadiusOutcome::Radius(a.mul(b)?),
        RadiusOp::Pow(e) => RadiusOutcome::Radius(a.pow(e)?),
    })
}

/// Run-level configuration: the residue characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u64,
}

impl Default for Field {
    fn default() -> Self {
        Field { p: 2 }
    }
}

impl Field {
    pub fn new(p: u64) -> Result<Field> {
        if p < 2 || (2..).take_while(|d: &u64| d.saturating_mul(*d) <= p).any(|d| p % d == 0) {
            return Err(Error::Validation(format!("{p} is not a prime")));
        }
        Ok(Field { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn count(&self, n: &BigInt) -> i64 {
        let p = BigInt::from(self.p);
        let mut n = n.clone();
        let mut k = 0;
        loop {
            let (d, r) = n.div_rem(&p);
            if !r.is_zero() {
                return k;
            }
            n = d;
            k += 1;
        }
    }

    /// p-adic valuation; `None` for zero.
    pub fn valuation(&self, x: &Q) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        Some(self.count(x.numer()) - self.count(x.denom()))
    }

    pub fn abs(&self, x: &Q) -> Radius {
        match self.valuation(x) {
            None => Radius::Zero,
            Some(v) => Radius::Exp(qi(-v)),
        }
    }

    pub fn dist(&self, x: &Q, y: &Q) -> Radius {
        self.abs(&(x - y))
    }

    /// Residue class of an element of the valuation ring.
    pub fn residue(&self, x: &Q) -> Result<u64> {
        if self.valuation(x).is_some_and(|v| v < 0) {
            return domain(format!("{x} is not integral"));
        }
        let n = self.mod_p(x.numer());
        let d = self.mod_p(x.denom());
        Ok(mulmod(n, powmod(d, self.p - 2, self.p), self.p))
    }

    pub fn mod_p(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = n.mod_floor(&p);
        r.to_u64().unwrap_or(0)
    }

    /// Some scalar of absolute value `p^e` for an integer exponent: `p^{-e}`.
    pub fn scalar_of_abs(&self, e: &Q) -> Option<Q> {
        if !e.is_integer() {
            return None;
        }
        let k = e.to_integer().to_i64()?;
        let p = BigInt::from(self.p);
        Some(if k <= 0 {
            Q::from_integer(num_traits::pow(p, (-k) as usize))
        } else {
            Q::new(BigInt::one(), num_traits::pow(p, k as usize))
        })
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// The function `t ↦ ρ·t^g`. A `Zero` coefficient gives the zero function.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub rho: Radius,
    pub g: Q,
}

impl Monomial {
    pub fn new(rho: Radius, g: Q) -> Monomial {
        if rho.is_zero() {
            Monomial::zero()
        } else {
            Monomial { rho, g }
        }
    }

    pub fn zero() -> Monomial {
        Monomial { rho: Radius::Zero, g: Q::zero() }
    }

    /// The identity `t ↦ t`.
    pub fn ident() -> Monomial {
        Monomial { rho: Radius::one(), g: Q::one() }
    }

    pub fn constant(rho: Radius) -> Monomial {
        Monomial::new(rho, Q::zero())
    }

    pub fn eval(&self, t: &Radius) -> Radius {
        if self.rho.is_zero() {
            return Radius::Zero;
        }
        self.rho.mul_total(&t.pow_total(&self.g))
    }

    /// Exponent of the value at `t = p^tau`, for a finite coefficient.
    pub fn exp_at(&self, tau: &Q) -> Option<Q> {
        self.rho.exponent().map(|r| r + &self.g * tau)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.rho.mul_total(&other.rho), &self.g + &other.g)
    }

    /// The unique `t*` with `self(t*) = other(t*)`, if the exponents differ.
    pub fn crossing(&self, other: &Monomial) -> Option<Radius> {
        if self.g == other.g {
            return None;
        }
        let (a, b) = (self.rho.exponent()?, other.rho.exponent()?);
        Some(Radius::Exp((b - a) / (&self.g - &other.g)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalCross {
    pub value: Radius,
    pub crossing: Option<Radius>,
}

pub fn monomial_eval_cross(m1: &Monomial, m2: &Monomial, t: &Radius) -> EvalCross {
    EvalCross { value: m1.eval(t), crossing: m1.crossing(m2) }
}

pub(crate) fn sign(x: &Q) -> Ordering {
    if x.is_negative() {
        Ordering::Less
    } else if x.is_zero() {
        Ordering::Equal
    } else {
        Ordering::Greater
    }
}
