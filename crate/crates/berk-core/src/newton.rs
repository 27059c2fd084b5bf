//! Polynomials over `Q`, Newton polygons, images of discs and local degrees.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bline::BPoint;
use crate::error::{domain, Result};
use crate::valuation::{mid, qi, Field, Monomial, Radius, Q};

/// Dense polynomial `c0 + c1 T + ... + cn T^n`; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Q>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Q>) -> Polynomial {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Polynomial {
        Polynomial::new(cs.iter().map(|c| qi(*c)).collect())
    }

    pub fn zero() -> Polynomial {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Polynomial {
        Polynomial::new(vec![c])
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(Q::one())
    }

    /// `T^n`.
    pub fn monomial(n: usize) -> Polynomial {
        let mut cs = vec![Q::zero(); n + 1];
        cs[n] = Q::one();
        Polynomial { coeffs: cs }
    }

    /// `T - a`.
    pub fn linear_root(a: &Q) -> Polynomial {
        Polynomial::new(vec![-a, Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn scale(&self, k: &Q) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let mut cs = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                cs[i + j] += a * b;
            }
        }
        Polynomial::new(cs)
    }

    pub fn pow(&self, n: usize) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Polynomial::constant(c.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * qi(i as i64)).collect())
    }

    /// Coefficients of `self(a + u)` in `u`, by repeated synthetic division.
    pub fn shift(&self, a: &Q) -> Polynomial {
        let mut cs = self.coeffs.clone();
        let n = cs.len();
        for k in 0..n {
            for i in (k..n - 1).rev() {
                let t = &cs[i + 1] * a;
                cs[i] += t;
            }
        }
        Polynomial::new(cs)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.lead();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Polynomial::zero(), self.clone());
        }
        let mut qs = vec![Q::zero(); r.len() - dd];
        for k in (0..qs.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            qs[k] = c;
        }
        r.truncate(dd);
        (Polynomial::new(qs), Polynomial::new(r))
    }

    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Q::one() / self.lead()))
    }

    pub fn gcd(&self, o: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Gauss norm on `D(0, r)`: `max |ci| r^i`.
    pub fn gauss_norm(&self, r: &Radius, field: Field) -> Radius {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| field.abs(c).mul_total(&r.pow_total(&qi(i as i64))))
            .max()
            .unwrap_or(Radius::Zero)
    }

    /// Indices attaining the Gauss norm at `r > 0`: smallest and largest.
    pub fn dominant(&self, r: &Radius, field: Field) -> Option<(usize, usize)> {
        let vals: Vec<Radius> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| field.abs(c).mul_total(&r.pow_total(&qi(i as i64))))
            .collect();
        let m = vals.iter().max()?.clone();
        if m.is_zero() {
            return None;
        }
        let lo = vals.iter().position(|v| *v == m)?;
        let hi = vals.iter().rposition(|v| *v == m)?;
        Some((lo, hi))
    }

    /// Rational roots with multiplicities, in increasing order.
    pub fn rational_roots(&self) -> Vec<(Q, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let mut p = self.clone();
        let mut zero_mult = 0;
        while p.coeff(0).is_zero() && !p.is_zero() {
            p = Polynomial::new(p.coeffs[1..].to_vec());
            zero_mult += 1;
        }
        if zero_mult > 0 {
            out.push((Q::zero(), zero_mult));
        }
        if !p.is_constant() {
            let ints = integer_coeffs(&p);
            let a0 = ints[0].abs();
            let an = ints[ints.len() - 1].abs();
            let (Some(num_divs), Some(den_divs)) = (divisors(&a0), divisors(&an)) else {
                return out;
            };
            let mut cands: Vec<Q> = Vec::new();
            for n in &num_divs {
                for d in &den_divs {
                    let c = Q::new(n.clone(), d.clone());
                    cands.push(c.clone());
                    cands.push(-c);
                }
            }
            cands.sort();
            cands.dedup();
            for c in cands {
                let lin = Polynomial::linear_root(&c);
                let mut m = 0;
                loop {
                    let (qt, r) = p.div_rem(&lin);
                    if !r.is_zero() {
                        break;
                    }
                    p = qt;
                    m += 1;
                }
                if m > 0 {
                    out.push((c, m));
                }
            }
        }
        out.sort();
        out
    }

    /// Factors `λ ∏ (T - αj)^mj · rest` with `rest` free of rational roots.
    pub fn split_rational(&self) -> (Q, Vec<(Q, usize)>, Polynomial) {
        let roots = self.rational_roots();
        let mut rest = self.clone();
        for (a, m) in &roots {
            for _ in 0..*m {
                rest = rest.div_rem(&Polynomial::linear_root(a)).0;
            }
        }
        let lead = rest.lead();
        (lead.clone(), roots, rest.scale(&(Q::one() / lead)))
    }
}

fn integer_coeffs(p: &Polynomial) -> Vec<BigInt> {
    let l = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect()
}

const DIVISOR_LIMIT: u64 = 1 << 40;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u64()?;
    if n == 0 || n > DIVISOR_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
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
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})T")?,
                _ => write!(f, "({c})T^{i}")?,
            }
        }
        Ok(())
    }
}

/// Valuation of a root; `Infinite` is the root `0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootVal {
    Finite(Q),
    Infinite,
}

/// Lower convex hull of `(i, v(ci))` over the nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, Q)>,
}

impl NewtonPolygon {
    pub fn of(h: &Polynomial, field: Field) -> Result<NewtonPolygon> {
        if h.is_zero() {
            return domain("Newton polygon of the zero polynomial");
        }
        let pts: Vec<(usize, Q)> = h
            .coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| field.valuation(c).map(|v| (i, qi(v))))
            .collect();
        let mut hull: Vec<(usize, Q)> = Vec::new();
        for p in pts {
            while hull.len() >= 2 {
                let (i1, v1) = &hull[hull.len() - 2];
                let (i2, v2) = &hull[hull.len() - 1];
                // drop the middle point unless it lies strictly below the chord
                let lhs = (v2 - v1) * qi((p.0 - i1) as i64);
                let rhs = (&p.1 - v1) * qi((i2 - i1) as i64);
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        Ok(NewtonPolygon { vertices: hull })
    }

    /// `(slope, horizontal length)` of each segment, left to right.
    pub fn segments(&self) -> Vec<(Q, usize)> {
        self.vertices
            .windows(2)
            .map(|w| ((&w[1].1 - &w[0].1) / qi((w[1].0 - w[0].0) as i64), w[1].0 - w[0].0))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonRoots {
    pub polygon: NewtonPolygon,
    /// Sorted; each root listed with multiplicity.
    pub root_valuations: Vec<RootVal>,
}

pub fn polygon_roots(h: &Polynomial, field: Field) -> Result<PolygonRoots> {
    let polygon = NewtonPolygon::of(h, field)?;
    let mut vals = Vec::new();
    let ord0 = polygon.vertices[0].0;
    for _ in 0..ord0 {
        vals.push(RootVal::Infinite);
    }
    for (slope, len) in polygon.segments() {
        for _ in 0..len {
            vals.push(RootVal::Finite(-slope.clone()));
        }
    }
    vals.sort();
    Ok(PolygonRoots { polygon, root_valuations: vals })
}

/// `h(D(a, r)) = D(c0, max_{i≥1} |ci| r^i)` where `h(a + u) = Σ ci u^i`.
pub fn disc_image(h: &Polynomial, a: &Q, r: &Radius, field: Field) -> Result<BPoint> {
    if r.is_infinite() {
        return domain("disc_image needs a finite radius");
    }
    if h.is_constant() {
        return domain("the image of a constant map is degenerate");
    }
    let s = h.shift(a);
    let rad = s
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| field.abs(c).mul_total(&r.pow_total(&qi(i as i64))))
        .max()
        .unwrap_or(Radius::Zero);
    Ok(BPoint { center: s.coeff(0), radius: rad })
}

/// Degree of `h` at `x`: the largest index attaining `max_{i≥1} |ci| r^i`
/// for a type-2 point, the vanishing order of `h(a+u) - h(a)` for a type-1 point.
pub fn local_degree(h: &Polynomial, x: &BPoint, field: Field) -> Result<usize> {
    if h.is_constant() {
        return domain("local degree of a constant map");
    }
    let s = h.shift(&x.center);
    if x.radius.is_zero() {
        return Ok((1..s.coeffs.len()).find(|i| !s.coeffs[*i].is_zero()).unwrap());
    }
    let mut best = Radius::Zero;
    let mut idx = 0;
    for (i, c) in s.coeffs.iter().enumerate().skip(1) {
        let v = field.abs(c).mul_total(&x.radius.pow_total(&qi(i as i64)));
        if !v.is_zero() && v >= best {
            best = v;
            idx = i;
        }
    }
    Ok(idx)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonPiece {
    pub lo: Radius,
    pub hi: Radius,
    pub image_center: Q,
    pub m: Monomial,
    pub degree: usize,
}

/// Upper envelope of `monos[i](t)` over `(lo, hi)`: pieces `(lo, hi, index)`,
/// preferring the larger exponent at ties.
pub fn upper_envelope(monos: &[Monomial], lo: &Radius, hi: &Radius) -> Vec<(Radius, Radius, usize)> {
    let lo_e = lo.exponent().cloned();
    let hi_e = hi.exponent().cloned();
    let inside = |x: &Q| lo_e.as_ref().is_none_or(|l| x > l) && hi_e.as_ref().is_none_or(|h| x < h);
    let mut bps: Vec<Q> = Vec::new();
    for (i, m) in monos.iter().enumerate() {
        for m2 in &monos[i + 1..] {
            if let Some(Radius::Exp(x)) = m.crossing(m2) {
                if inside(&x) {
                    bps.push(x);
                }
            }
        }
    }
    bps.sort();
    bps.dedup();
    let mut bounds: Vec<Option<Q>> = vec![lo_e.clone()];
    bounds.extend(bps.into_iter().map(Some));
    bounds.push(hi_e.clone());
    let mut out: Vec<(Radius, Radius, usize)> = Vec::new();
    for w in bounds.windows(2) {
        let tau = match (&w[0], &w[1]) {
            (Some(a), Some(b)) => mid(a, b),
            (None, Some(b)) => b - Q::one(),
            (Some(a), None) => a + Q::one(),
            (None, None) => Q::zero(),
        };
        let t = Radius::Exp(tau);
        let mut best: Option<(Radius, usize)> = None;
        for (i, m) in monos.iter().enumerate() {
            let v = m.eval(&t);
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(b, j)| v > *b || (v == *b && m.g > monos[*j].g)) {
                best = Some((v, i));
            }
        }
        let Some((_, idx)) = best else { continue };
        let a = w[0].clone().map(Radius::Exp).unwrap_or(Radius::Zero);
        let b = w[1].clone().map(Radius::Exp).unwrap_or(Radius::Infinity);
        match out.last_mut() {
            Some(last) if last.2 == idx && last.1 == a => last.1 = b,
            _ => out.push((a, b, idx)),
        }
    }
    out
}

/// Image radius of `η(a, t)` as a piecewise monomial in `t` on `(s1, s2)`.
pub fn skeleton_monomial(h: &Polynomial, a: &Q, s1: &Radius, s2: &Radius, field: Field) -> Result<Vec<SkeletonPiece>> {
    if h.is_constant() {
        return domain("skeleton map of a constant map");
    }
    if s1 >= s2 {
        return domain("empty interval");
    }
    let s = h.shift(a);
    let monos: Vec<Monomial> = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| if i == 0 { Monomial::zero() } else { Monomial::new(field.abs(c), qi(i as i64)) })
        .collect();
    Ok(upper_envelope(&monos, s1, s2)
        .into_iter()
        .map(|(lo, hi, i)| SkeletonPiece { lo, hi, image_center: s.coeff(0), m: monos[i].clone(), degree: i })
        .collect())
}
