//! Rational self-maps of `P¹`: pushforward of points, multiplicity loci and fibers.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::bline::BPoint;
use crate::bradial::{normalize, Brick, Expr, RadialSet};
use crate::error::{domain, invalid, unsupported, Error, Result};
use crate::formula::{Builder, Formula, Term};
use crate::newton::Polynomial;
use crate::valuation::{qi, Field, Radius, Q};

/// A point of `P¹` of type 1 or 2.
#[derive(Clone, Debug)]
pub enum PPoint {
    Aff(BPoint),
    Inf,
}

impl PPoint {
    pub fn same(&self, o: &PPoint, field: Field) -> bool {
        match (self, o) {
            (PPoint::Aff(a), PPoint::Aff(b)) => a.same(b, field),
            (PPoint::Inf, PPoint::Inf) => true,
            _ => false,
        }
    }

    pub fn affine(&self) -> Option<&BPoint> {
        match self {
            PPoint::Aff(x) => Some(x),
            PPoint::Inf => None,
        }
    }
}

impl From<BPoint> for PPoint {
    fn from(x: BPoint) -> Self {
        PPoint::Aff(x)
    }
}

impl fmt::Display for PPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PPoint::Aff(x) => write!(f, "{x}"),
            PPoint::Inf => write!(f, "∞"),
        }
    }
}

/// `num / den` with coprime numerator and denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    num: Polynomial,
    den: Polynomial,
}

impl RationalMap {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<RationalMap> {
        if den.is_zero() {
            return invalid("zero denominator");
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() { (num, den) } else { (num.div_rem(&g).0, den.div_rem(&g).0) };
        let l = den.lead();
        let (num, den) = (num.scale(&(Q::one() / &l)), den.scale(&(Q::one() / &l)));
        if num.is_constant() && den.is_constant() {
            return invalid("constant map");
        }
        Ok(RationalMap { num, den })
    }

    pub fn polynomial(p: Polynomial) -> Result<RationalMap> {
        RationalMap::new(p, Polynomial::one())
    }

    /// `(aT + b) / (cT + d)`.
    pub fn mobius(a: Q, b: Q, c: Q, d: Q) -> Result<RationalMap> {
        if (&a * &d - &b * &c).is_zero() {
            return invalid("singular Möbius map");
        }
        RationalMap::new(Polynomial::new(vec![b, a]), Polynomial::new(vec![d, c]))
    }

    pub fn identity() -> RationalMap {
        RationalMap { num: Polynomial::monomial(1), den: Polynomial::one() }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The polynomial `num / den` when the denominator is constant.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        self.is_polynomial().then(|| self.num.scale(&(Q::one() / self.den.coeff(0))))
    }

    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    /// Value at `∞`; `None` when it is `∞`.
    pub fn at_infinity(&self) -> Option<Q> {
        let (dn, dd) = (self.num.degree().unwrap_or(0), self.den.degree().unwrap_or(0));
        match dn.cmp(&dd) {
            core::cmp::Ordering::Greater => None,
            core::cmp::Ordering::Equal => Some(self.num.lead() / self.den.lead()),
            core::cmp::Ordering::Less => Some(Q::zero()),
        }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &RationalMap) -> Result<RationalMap> {
        let n = self.degree();
        let hom = |p: &Polynomial| {
            let mut acc = Polynomial::zero();
            for (i, c) in p.coeffs().iter().enumerate() {
                let t = g.num.pow(i).mul(&g.den.pow(n - i)).scale(c);
                acc = acc.add(&t);
            }
            acc
        };
        RationalMap::new(hom(&self.num), hom(&self.den))
    }

    /// A rational center `a'` of `D(x)` whose residue class at `x` holds no pole.
    fn good_center(&self, x: &BPoint, field: Field) -> Option<Q> {
        let step = match &x.radius {
            Radius::Exp(q) if q.is_integer() => field.scalar_of_abs(q),
            _ => None,
        };
        let mut cands = vec![x.center.clone()];
        if let Some(s) = &step {
            for m in 1..field.p().min(64) {
                cands.push(&x.center + s * qi(m as i64));
            }
        }
        cands.into_iter().find(|a| {
            let d = self.den.shift(a);
            d.dominant(&x.radius, field).is_some_and(|(lo, _)| lo == 0)
        })
    }

    /// `|h - b|` at `η(a, r)`.
    fn image_radius(&self, a: &Q, b: &Q, r: &Radius, field: Field) -> Radius {
        let p = self.num.sub(&self.den.scale(b)).shift(a);
        let d = self.den.shift(a);
        let np = p.gauss_norm(r, field);
        let nd = d.gauss_norm(r, field);
        np.div(&nd).expect("nonzero Gauss norm")
    }

    fn push_affine(&self, x: &BPoint, field: Field) -> Option<BPoint> {
        let a = self.good_center(x, field)?;
        let b = self.eval(&a).expect("pole-free center");
        let s = self.image_radius(&a, &b, &x.radius, field);
        Some(BPoint { center: b, radius: s })
    }

    pub fn pushforward(&self, x: &PPoint, field: Field) -> Result<PPoint> {
        let x = match x {
            PPoint::Inf => return Ok(self.at_infinity().map(|c| PPoint::Aff(BPoint::rigid(c))).unwrap_or(PPoint::Inf)),
            PPoint::Aff(x) => x,
        };
        if x.radius.is_zero() {
            return Ok(self.eval(&x.center).map(|v| PPoint::Aff(BPoint::rigid(v))).unwrap_or(PPoint::Inf));
        }
        if let Some(y) = self.push_affine(x, field) {
            return Ok(PPoint::Aff(y));
        }
        let swapped = RationalMap::new(self.den.clone(), self.num.clone())?;
        match swapped.push_affine(x, field) {
            Some(y) => Ok(invert_point(&y, field)),
            None => unsupported(format!("poles of {self} in every rational residue class at {x}")),
        }
    }

    pub fn local_degree(&self, x: &PPoint, field: Field) -> Result<usize> {
        match x {
            PPoint::Inf => {
                let (dn, dd) = (self.num.degree().unwrap_or(0), self.den.degree().unwrap_or(0));
                if dn > dd {
                    return Ok(dn - dd);
                }
                // order of vanishing of h(1/u) - h(∞) at u = 0
                let c = self.at_infinity().unwrap();
                let n = self.degree();
                let rev = |p: &Polynomial| {
                    let mut cs = vec![Q::zero(); n + 1];
                    for (i, v) in p.coeffs().iter().enumerate() {
                        cs[n - i] = v.clone();
                    }
                    Polynomial::new(cs)
                };
                let diff = rev(&self.num).sub(&rev(&self.den).scale(&c));
                Ok((0..=n).find(|i| !diff.coeff(*i).is_zero()).unwrap_or(n))
            }
            PPoint::Aff(x) if x.radius.is_zero() => {
                let a = &x.center;
                let p = match self.eval(a) {
                    Some(b) => self.num.sub(&self.den.scale(&b)),
                    None => self.den.clone(),
                };
                let s = p.shift(a);
                Ok((0..s.coeffs().len()).find(|i| !s.coeff(*i).is_zero()).unwrap_or(0))
            }
            PPoint::Aff(x) => {
                let PPoint::Aff(y) = self.pushforward(&PPoint::Aff(x.clone()), field)? else {
                    return domain("type-2 point mapped to ∞");
                };
                let a = &x.center;
                let top = self.num.sub(&self.den.scale(&y.center)).shift(a);
                let bot = self.den.shift(a);
                let top = reduction(&top, &x.radius, field);
                let bot = reduction(&bot, &x.radius, field);
                let g = fp::gcd(&top, &bot, field.p());
                let dt = fp::degree(&fp::div(&top, &g, field.p()));
                let db = fp::degree(&fp::div(&bot, &g, field.p()));
                Ok(dt.max(db))
            }
        }
    }
}

/// `1/T` on type-1/2 points.
pub fn invert_point(y: &BPoint, field: Field) -> PPoint {
    let c = field.abs(&y.center);
    if c > y.radius {
        let s = y.radius.div(&c.mul_total(&c)).expect("finite");
        PPoint::Aff(BPoint { center: Q::one() / &y.center, radius: s })
    } else if y.radius.is_zero() {
        PPoint::Inf
    } else {
        PPoint::Aff(BPoint { center: Q::zero(), radius: Radius::one().div(&y.radius).expect("finite") })
    }
}

/// Reduction of a polynomial at radius `r`: the unit parts of the dominant
/// coefficients modulo `p`.
fn reduction(p: &Polynomial, r: &Radius, field: Field) -> Vec<u64> {
    let Some((lo, hi)) = p.dominant(r, field) else { return Vec::new() };
    let top = p.gauss_norm(r, field);
    let mut out = vec![0u64; hi + 1];
    for i in lo..=hi {
        let c = p.coeff(i);
        if c.is_zero() || field.abs(&c).mul_total(&r.pow_total(&qi(i as i64))) != top {
            continue;
        }
        let v = field.valuation(&c).unwrap();
        let unit = &c * field.scalar_of_abs(&qi(v)).unwrap();
        out[i] = field.residue(&unit).expect("unit");
    }
    fp::trim(out)
}

mod fp {
    use alloc::vec::Vec;

    use crate::valuation::{mulmod, powmod};

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn degree(a: &[u64]) -> usize {
        a.len().saturating_sub(1)
    }

    fn inv(a: u64, p: u64) -> u64 {
        powmod(a, p - 2, p)
    }

    pub fn rem_quot(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = a.to_vec();
        if a.len() < b.len() {
            return (r, Vec::new());
        }
        let mut q = alloc::vec![0u64; a.len() - b.len() + 1];
        let li = inv(*b.last().unwrap(), p);
        for k in (0..q.len()).rev() {
            let c = mulmod(r[k + b.len() - 1], li, p);
            q[k] = c;
            for (j, bj) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mulmod(c, *bj, p)) % p;
            }
        }
        (trim(r), trim(q))
    }

    pub fn div(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        rem_quot(a, b, p).1
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = rem_quot(&a, &b, p).0;
            a = b;
            b = r;
        }
        a
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusReport {
    pub d: usize,
    pub locus: RadialSet,
    pub region: Vec<Brick>,
    /// The locus is certified only on a sample grid.
    pub residual: bool,
}

/// Grid used when the critical data is not rational.
pub fn residual_grid() -> Vec<BPoint> {
    let mut out = Vec::new();
    for m in -16..=16 {
        for k in -12..=6 {
            out.push(BPoint { center: Q::new(m.into(), 8.into()), radius: Radius::exp(k, 2) });
        }
        out.push(BPoint::rigid(Q::new(m.into(), 8.into())));
    }
    out
}

/// `|ci(a)| r^i` as a term, or `None` when `ci` has non-rational roots.
fn coeff_term(b: &mut Builder, c: &Polynomial, i: usize, field: Field) -> Option<Term> {
    if c.is_zero() {
        return Some(Term::konst(Radius::Zero));
    }
    let (lead, roots, rest) = c.split_rational();
    if !rest.is_constant() {
        return None;
    }
    let mut t = Term::konst(field.abs(&lead));
    for (a, m) in roots {
        t = t.mul(&b.dist(&a).pow(&qi(m as i64)));
    }
    Some(t.mul(&b.r().pow(&qi(i as i64))))
}

/// `{x ∈ region : deg_x(h) = d}` for a polynomial `h`.
pub fn multiplicity_locus(h: &RationalMap, d: usize, region: &Brick, field: Field) -> Result<LocusReport> {
    let Some(p) = h.as_polynomial() else {
        return unsupported("multiplicity loci are computed for polynomial maps");
    };
    let n = p.degree().unwrap_or(0);
    // ci(A) = h^{(i)}(A) / i!
    let mut cs = Vec::with_capacity(n + 1);
    let mut der = p.clone();
    let mut fact = Q::one();
    for i in 0..=n {
        if i > 0 {
            der = der.derivative();
            fact *= qi(i as i64);
        }
        cs.push(der.scale(&(Q::one() / &fact)));
    }
    let mut b = Builder::new();
    let mut terms = Vec::with_capacity(n + 1);
    for (i, c) in cs.iter().enumerate().skip(1) {
        match coeff_term(&mut b, c, i, field) {
            Some(t) => terms.push(t),
            None => return Ok(residual_locus(h, d, region, field)),
        }
    }
    let f = if d == 0 || d > n {
        Formula::False
    } else {
        let zero = Term::konst(Radius::Zero);
        let td = terms[d - 1].clone();
        let mut rigid = vec![b.eq(b.r(), zero.clone())];
        for t in &terms[..d - 1] {
            // at r = 0 the r-power vanishes; use the bare coefficient
            let bare = strip_r(t);
            rigid.push(b.eq(bare, zero.clone()));
        }
        let bare_d = strip_r(&td);
        rigid.push(b.gt(bare_d, zero.clone()));
        let mut wide = vec![b.gt(b.r(), zero.clone()), b.gt(td.clone(), zero)];
        for (j, t) in terms.iter().enumerate() {
            let i = j + 1;
            if i < d {
                wide.push(b.ge(td.clone(), t.clone()));
            } else if i > d {
                wide.push(b.gt(td.clone(), t.clone()));
            }
        }
        Formula::or(vec![Formula::and(rigid), Formula::and(wide)])
    };
    let reg = region.formula(&mut b);
    let all = Formula::and(vec![reg, f]);
    let locus = sweep_formula(&b, &all, field);
    Ok(LocusReport { d, locus, region: vec![region.clone()], residual: false })
}

fn strip_r(t: &Term) -> Term {
    Term {
        coef: t.coef.clone(),
        factors: t.factors.iter().filter(|(v, _)| *v != crate::formula::Var::R).cloned().collect(),
    }
}

fn sweep_formula(b: &Builder, f: &Formula, field: Field) -> RadialSet {
    crate::bradial::sweep_formula(b, f, field)
}

fn residual_locus(h: &RationalMap, d: usize, region: &Brick, field: Field) -> LocusReport {
    let mut pieces = Vec::new();
    for x in residual_grid() {
        if region.member(&x, field) && h.local_degree(&PPoint::Aff(x.clone()), field).ok() == Some(d) {
            pieces.push(crate::bradial::BasicRadial::R0 { a: x.center, s: x.radius });
        }
    }
    let locus = normalize(&Expr::Union(pieces.into_iter().map(Expr::Piece).collect()), field);
    LocusReport { d, locus, region: vec![region.clone()], residual: true }
}

#[derive(Clone, Debug)]
pub struct Fiber {
    pub count: usize,
    pub fiber: Vec<BPoint>,
    pub degrees: Vec<usize>,
}

/// Solves `max_i m_i(t) / max_j n_j(t) = s` on `t > 0` for piecewise monomial
/// numerator and denominator envelopes.
fn solve_radius(p: &Polynomial, d: &Polynomial, s: &Q, field: Field) -> Vec<Radius> {
    use crate::newton::upper_envelope;
    use crate::valuation::Monomial;
    let mono = |q: &Polynomial| -> Vec<Monomial> {
        q.coeffs().iter().enumerate().map(|(i, c)| Monomial::new(field.abs(c), qi(i as i64))).collect()
    };
    let (mp, md) = (mono(p), mono(d));
    let mut out = Vec::new();
    for (lo, hi, i) in upper_envelope(&mp, &Radius::Zero, &Radius::Infinity) {
        for (lo2, hi2, j) in upper_envelope(&md, &lo, &hi) {
            let g = &mp[i].g - &md[j].g;
            let (Some(ri), Some(rj)) = (mp[i].rho.exponent(), md[j].rho.exponent()) else { continue };
            let c = ri - rj;
            if g.is_zero() {
                continue;
            }
            let tau = (s - &c) / &g;
            let t = Radius::Exp(tau);
            if t >= lo2 && t <= hi2 && t > Radius::Zero && t.is_finite() {
                out.push(t);
            }
        }
    }
    out
}

/// Points of `h^{-1}(y)`, found by ascending from the rational preimages of
/// the center of `y`.
pub fn fiber_count(h: &RationalMap, y: &BPoint, declared: &[Q], field: Field) -> Result<Fiber> {
    let b = &y.center;
    let eq = h.num.sub(&h.den.scale(b));
    if eq.is_zero() {
        return domain("constant map");
    }
    let mut centers: Vec<Q> = Vec::new();
    for a in declared {
        if !eq.eval(a).is_zero() || h.den.eval(a).is_zero() {
            return invalid(format!("{a} is not a preimage of {b}"));
        }
        centers.push(a.clone());
    }
    for (a, _) in eq.rational_roots() {
        if !h.den.eval(&a).is_zero() && !centers.contains(&a) {
            centers.push(a);
        }
    }
    centers.sort();
    let mut fiber: Vec<BPoint> = Vec::new();
    let mut degrees = Vec::new();
    for a in &centers {
        let cands: Vec<Radius> = if y.radius.is_zero() {
            vec![Radius::Zero]
        } else {
            let Radius::Exp(s) = &y.radius else { return domain("infinite radius") };
            solve_radius(&eq.shift(a), &h.den.shift(a), s, field)
        };
        for t in cands {
            let x = BPoint { center: a.clone(), radius: t };
            if fiber.iter().any(|f| f.same(&x, field)) {
                continue;
            }
            match h.pushforward(&PPoint::Aff(x.clone()), field)? {
                PPoint::Aff(img) if img.same(y, field) => {
                    degrees.push(h.local_degree(&PPoint::Aff(x.clone()), field)?);
                    fiber.push(x);
                }
                _ => {}
            }
        }
    }
    let total: usize = degrees.iter().sum();
    let inf_deg = match h.pushforward(&PPoint::Inf, field)? {
        PPoint::Aff(img) if img.same(y, field) => h.local_degree(&PPoint::Inf, field)?,
        _ => 0,
    };
    if inf_deg > 0 {
        return unsupported("the fiber contains ∞");
    }
    if total != h.degree() {
        return Err(Error::IncompleteOracle(format!(
            "preimages of {y} found with total degree {total}, expected {}",
            h.degree()
        )));
    }
    Ok(Fiber { count: fiber.len(), fiber, degrees })
}
