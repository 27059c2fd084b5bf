//! Radial subsets of `B`: the basic pieces `R0`..`R7`, their boolean algebra,
//! bricks and Swiss cheeses.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::bline::{span_tree, BPoint};
use crate::error::{invalid, Result};
use crate::formula::{Builder, Formula, Term};
use crate::sweep;
use crate::valuation::{mid, qi, Field, Monomial, Radius, Q};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BasicRadial {
    /// `{η(a, s)}`
    R0 { a: Q, s: Radius },
    /// `{η(a, r) : s1 < r < s2}`
    R1 { a: Q, s1: Radius, s2: Radius },
    /// `s1 < |x-a| < s2`, `ρ1|x-a|^g1 = r < |x-a|`
    R2 { a: Q, s1: Radius, s2: Radius, rho1: Radius, g1: Q },
    /// `s1 < |x-a| < s2`, `ρ1|x-a|^g1 < r < ρ2|x-a|^g2 ≤ |x-a|`
    R3 { a: Q, s1: Radius, s2: Radius, rho1: Radius, g1: Q, rho2: Radius, g2: Q },
    /// `D(x, r) ⊆ D(a, s) ∖ ⋃ D⁻(b, s)`, `r = s1`
    R4 { a: Q, s: Radius, holes: Vec<Q>, s1: Radius },
    /// `D(x, r) ⊆ D(a, s) ∖ ⋃ D⁻(b, s)`, `s1 < r < s2`
    R5 { a: Q, s: Radius, holes: Vec<Q>, s1: Radius, s2: Radius },
    /// `D(x, r) ⊆ D⁻(a, s)`, `r = s1`
    R6 { a: Q, s: Radius, s1: Radius },
    /// `D(x, r) ⊆ D⁻(a, s)`, `s1 < r < s2`
    R7 { a: Q, s: Radius, s1: Radius, s2: Radius },
}

fn mono_term(b: &mut Builder, a: &Q, rho: &Radius, g: &Q) -> Term {
    b.d(a).pow(g).scale(rho)
}

fn k(r: &Radius) -> Term {
    Term::konst(r.clone())
}

impl BasicRadial {
    pub fn kind(&self) -> &'static str {
        match self {
            BasicRadial::R0 { .. } => "R0",
            BasicRadial::R1 { .. } => "R1",
            BasicRadial::R2 { .. } => "R2",
            BasicRadial::R3 { .. } => "R3",
            BasicRadial::R4 { .. } => "R4",
            BasicRadial::R5 { .. } => "R5",
            BasicRadial::R6 { .. } => "R6",
            BasicRadial::R7 { .. } => "R7",
        }
    }

    pub fn center(&self) -> &Q {
        match self {
            BasicRadial::R0 { a, .. }
            | BasicRadial::R1 { a, .. }
            | BasicRadial::R2 { a, .. }
            | BasicRadial::R3 { a, .. }
            | BasicRadial::R4 { a, .. }
            | BasicRadial::R5 { a, .. }
            | BasicRadial::R6 { a, .. }
            | BasicRadial::R7 { a, .. } => a,
        }
    }

    pub fn lower(&self) -> &Radius {
        match self {
            BasicRadial::R0 { s, .. } => s,
            BasicRadial::R1 { s1, .. }
            | BasicRadial::R2 { s1, .. }
            | BasicRadial::R3 { s1, .. }
            | BasicRadial::R4 { s1, .. }
            | BasicRadial::R5 { s1, .. }
            | BasicRadial::R6 { s1, .. }
            | BasicRadial::R7 { s1, .. } => s1,
        }
    }

    pub(crate) fn sort_key(&self) -> (&Q, &Radius) {
        (self.center(), self.lower())
    }

    /// Centers the defining condition refers to.
    pub fn centers(&self) -> Vec<Q> {
        let mut v = vec![self.center().clone()];
        if let BasicRadial::R4 { holes, .. } | BasicRadial::R5 { holes, .. } = self {
            v.extend(holes.iter().cloned());
        }
        v
    }

    pub fn formula(&self, b: &mut Builder) -> Formula {
        use BasicRadial::*;
        match self {
            R0 { a, s } => {
                let f1 = b.eq(b.r(), k(s));
                let da = b.d(a);
                let f2 = b.le(da, k(s));
                Formula::and(vec![f1, f2])
            }
            R1 { a, s1, s2 } => {
                let da = b.d(a);
                let f1 = b.le(da, b.r());
                let f2 = b.lt(k(s1), b.r());
                let f3 = b.lt(b.r(), k(s2));
                Formula::and(vec![f1, f2, f3])
            }
            R2 { a, s1, s2, rho1, g1 } => {
                let mut parts = annulus(b, a, s1, s2);
                let m = mono_term(b, a, rho1, g1);
                parts.push(b.eq(b.r(), m));
                Formula::and(parts)
            }
            R3 { a, s1, s2, rho1, g1, rho2, g2 } => {
                let mut parts = annulus(b, a, s1, s2);
                let m1 = mono_term(b, a, rho1, g1);
                let m2 = mono_term(b, a, rho2, g2);
                parts.push(b.lt(m1, b.r()));
                parts.push(b.lt(b.r(), m2.clone()));
                let da = b.d(a);
                parts.push(b.le(m2, da));
                Formula::and(parts)
            }
            R4 { a, s, holes, s1 } => {
                let mut parts = closed_cyl(b, a, s, holes);
                parts.push(b.eq(b.r(), k(s1)));
                Formula::and(parts)
            }
            R5 { a, s, holes, s1, s2 } => {
                let mut parts = closed_cyl(b, a, s, holes);
                parts.push(b.lt(k(s1), b.r()));
                parts.push(b.lt(b.r(), k(s2)));
                Formula::and(parts)
            }
            R6 { a, s, s1 } => {
                let da = b.d(a);
                let f1 = b.lt(da, k(s));
                let f2 = b.eq(b.r(), k(s1));
                Formula::and(vec![f1, f2])
            }
            R7 { a, s, s1, s2 } => {
                let da = b.d(a);
                let f1 = b.lt(da, k(s));
                let f2 = b.lt(k(s1), b.r());
                let f3 = b.lt(b.r(), k(s2));
                Formula::and(vec![f1, f2, f3])
            }
        }
    }

    /// Direct evaluation of the defining condition.
    pub fn member(&self, x: &BPoint, field: Field) -> bool {
        use BasicRadial::*;
        let r = &x.radius;
        let d = |c: &Q| x.dist_to(c, field);
        let disc_ok = |a: &Q, s: &Radius, holes: &[Q]| {
            d(a) <= *s && holes.iter().all(|b| d(b) >= *s && (r < s || d(b) > *s))
        };
        match self {
            R0 { a, s } => r == s && d(a) <= *s,
            R1 { a, s1, s2 } => d(a) <= *r && s1 < r && r < s2,
            R2 { a, s1, s2, rho1, g1 } => {
                let t = d(a);
                *s1 < t && t < *s2 && *r < t && *r == Monomial::new(rho1.clone(), g1.clone()).eval(&t)
            }
            R3 { a, s1, s2, rho1, g1, rho2, g2 } => {
                let t = d(a);
                let m1 = Monomial::new(rho1.clone(), g1.clone()).eval(&t);
                let m2 = Monomial::new(rho2.clone(), g2.clone()).eval(&t);
                *s1 < t && t < *s2 && *r < t && m1 < *r && *r < m2 && m2 <= t
            }
            R4 { a, s, holes, s1 } => disc_ok(a, s, holes) && r == s1,
            R5 { a, s, holes, s1, s2 } => disc_ok(a, s, holes) && s1 < r && r < s2,
            R6 { a, s, s1 } => d(a) < *s && r == s1,
            R7 { a, s, s1, s2 } => d(a) < *s && s1 < r && r < s2,
        }
    }
}

fn annulus(b: &mut Builder, a: &Q, s1: &Radius, s2: &Radius) -> Vec<Formula> {
    let da = b.d(a);
    vec![b.lt(k(s1), da.clone()), b.lt(da.clone(), k(s2)), b.lt(b.r(), da)]
}

fn closed_cyl(b: &mut Builder, a: &Q, s: &Radius, holes: &[Q]) -> Vec<Formula> {
    let da = b.d(a);
    let mut parts = vec![b.le(da, k(s))];
    for h in holes {
        let db = b.d(h);
        parts.push(b.ge(db.clone(), k(s)));
        let below = b.lt(b.r(), k(s));
        let away = b.gt(db, k(s));
        parts.push(Formula::or(vec![below, away]));
    }
    parts
}

/// A finite disjoint union of basic pieces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RadialSet {
    pub pieces: Vec<BasicRadial>,
}

impl RadialSet {
    pub fn new(pieces: Vec<BasicRadial>) -> RadialSet {
        RadialSet { pieces }
    }

    pub fn empty() -> RadialSet {
        RadialSet::default()
    }

    pub fn is_empty_list(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn member(&self, x: &BPoint, field: Field) -> bool {
        self.pieces.iter().any(|p| p.member(x, field))
    }

    pub fn formula(&self, b: &mut Builder) -> Formula {
        Formula::or(self.pieces.iter().map(|p| p.formula(b)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Brick {
    B0 { a: Q },
    B1 { a: Q, s: Radius },
    B2 { a: Q, s1: Radius, s2: Radius },
    B3 { a: Q, s: Radius, holes: Vec<Q> },
}

pub struct BrickOps {
    pub skeleton: RadialSet,
    pub as_radial: RadialSet,
    pub minus_skeleton: RadialSet,
}

impl Brick {
    pub fn formula(&self, b: &mut Builder) -> Formula {
        match self {
            Brick::B0 { a } => {
                let da = b.d(a);
                b.le(da, Term::konst(Radius::Zero))
            }
            Brick::B1 { a, s } => {
                let da = b.d(a);
                b.lt(da, k(s))
            }
            Brick::B2 { a, s1, s2 } => {
                let da = b.d(a);
                let f1 = b.lt(k(s1), da.clone());
                let f2 = b.lt(da, k(s2));
                Formula::and(vec![f1, f2])
            }
            Brick::B3 { a, s, holes } => {
                let da = b.d(a);
                let mut parts = vec![b.le(da, k(s))];
                for h in holes {
                    let db = b.d(h);
                    parts.push(b.ge(db, k(s)));
                }
                Formula::and(parts)
            }
        }
    }

    pub fn member(&self, x: &BPoint, field: Field) -> bool {
        let d = |c: &Q| x.dist_to(c, field);
        match self {
            Brick::B0 { a } => d(a).is_zero(),
            Brick::B1 { a, s } => d(a) < *s,
            Brick::B2 { a, s1, s2 } => *s1 < d(a) && d(a) < *s2,
            Brick::B3 { a, s, holes } => d(a) <= *s && holes.iter().all(|h| d(h) >= *s),
        }
    }

    pub fn centers(&self) -> Vec<Q> {
        match self {
            Brick::B0 { a } | Brick::B1 { a, .. } | Brick::B2 { a, .. } => vec![a.clone()],
            Brick::B3 { a, holes, .. } => {
                let mut v = vec![a.clone()];
                v.extend(holes.iter().cloned());
                v
            }
        }
    }

    pub fn ops(&self) -> BrickOps {
        use BasicRadial::*;
        let (skel, minus) = match self {
            Brick::B0 { a } => (vec![], vec![R0 { a: a.clone(), s: Radius::Zero }]),
            Brick::B1 { a, s } => (
                vec![],
                vec![
                    R6 { a: a.clone(), s: s.clone(), s1: Radius::Zero },
                    R7 { a: a.clone(), s: s.clone(), s1: Radius::Zero, s2: s.clone() },
                ],
            ),
            Brick::B2 { a, s1, s2 } => (
                vec![R1 { a: a.clone(), s1: s1.clone(), s2: s2.clone() }],
                vec![
                    R2 { a: a.clone(), s1: s1.clone(), s2: s2.clone(), rho1: Radius::Zero, g1: Q::zero() },
                    R3 {
                        a: a.clone(),
                        s1: s1.clone(),
                        s2: s2.clone(),
                        rho1: Radius::Zero,
                        g1: Q::zero(),
                        rho2: Radius::one(),
                        g2: Q::one(),
                    },
                ],
            ),
            Brick::B3 { a, s, holes } => (
                vec![R0 { a: a.clone(), s: s.clone() }],
                vec![
                    R4 { a: a.clone(), s: s.clone(), holes: holes.clone(), s1: Radius::Zero },
                    R5 { a: a.clone(), s: s.clone(), holes: holes.clone(), s1: Radius::Zero, s2: s.clone() },
                ],
            ),
        };
        let mut all = skel.clone();
        all.extend(minus.iter().cloned());
        BrickOps { skeleton: RadialSet::new(skel), as_radial: RadialSet::new(all), minus_skeleton: RadialSet::new(minus) }
    }
}

pub fn brick_ops(b: &Brick) -> BrickOps {
    b.ops()
}

/// A closed or open disc; `radius = Infinity` with `open` is the whole line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disc {
    pub center: Q,
    pub radius: Radius,
    pub open: bool,
}

impl Disc {
    pub fn closed(center: Q, radius: Radius) -> Disc {
        Disc { center, radius, open: false }
    }

    pub fn open(center: Q, radius: Radius) -> Disc {
        Disc { center, radius, open: true }
    }

    pub fn line() -> Disc {
        Disc { center: Q::zero(), radius: Radius::Infinity, open: true }
    }

    fn formula(&self, b: &mut Builder) -> Formula {
        if self.radius.is_infinite() {
            return Formula::True;
        }
        let da = b.d(&self.center);
        if self.open {
            b.lt(da, k(&self.radius))
        } else {
            b.le(da, k(&self.radius))
        }
    }

    fn member(&self, x: &BPoint, field: Field) -> bool {
        let d = x.dist_to(&self.center, field);
        if self.open {
            d < self.radius
        } else {
            d <= self.radius
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwissCheese {
    pub outer: Disc,
    pub holes: Vec<Disc>,
}

impl SwissCheese {
    pub fn line() -> SwissCheese {
        SwissCheese { outer: Disc::line(), holes: vec![] }
    }

    pub fn formula(&self, b: &mut Builder) -> Formula {
        let mut parts = vec![self.outer.formula(b)];
        for h in &self.holes {
            let f = h.formula(b);
            parts.push(Formula::not(f));
        }
        Formula::and(parts)
    }

    pub fn member(&self, x: &BPoint, field: Field) -> bool {
        self.outer.member(x, field) && !self.holes.iter().any(|h| h.member(x, field))
    }

    fn validate(&self, field: Field) -> Result<()> {
        if self.outer.radius.is_infinite() && !self.outer.open {
            return invalid("a closed disc of infinite radius is not allowed");
        }
        for (i, h) in self.holes.iter().enumerate() {
            if h.radius.is_infinite() || (h.open && h.radius.is_zero()) {
                return invalid(format!("inner disc {i} must be a nonempty disc of finite radius"));
            }
            let inner = expr_of_disc(h);
            let outer = expr_of_disc(&self.outer);
            let escapes = Expr::Diff(Box::new(inner.clone()), Box::new(outer.clone()));
            let same = Expr::Diff(Box::new(outer), Box::new(inner));
            if !is_empty(&escapes, field) || is_empty(&same, field) {
                return invalid(format!("inner disc {i} is not properly contained in the outer disc"));
            }
            for (j, g) in self.holes.iter().enumerate().skip(i + 1) {
                let both = Expr::Inter(vec![expr_of_disc(h), expr_of_disc(g)]);
                if !is_empty(&both, field) {
                    return invalid(format!("inner discs {i} and {j} intersect"));
                }
            }
        }
        Ok(())
    }
}

fn expr_of_disc(d: &Disc) -> Expr {
    Expr::Cheese(SwissCheese { outer: d.clone(), holes: vec![] })
}

/// A boolean expression over radial data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Piece(BasicRadial),
    Set(RadialSet),
    Brick(Brick),
    Cheese(SwissCheese),
    Union(Vec<Expr>),
    Inter(Vec<Expr>),
    Diff(Box<Expr>, Box<Expr>),
    Compl(Box<Expr>),
}

impl Expr {
    pub fn union(a: Expr, b: Expr) -> Expr {
        Expr::Union(vec![a, b])
    }

    pub fn inter(a: Expr, b: Expr) -> Expr {
        Expr::Inter(vec![a, b])
    }

    pub fn diff(a: Expr, b: Expr) -> Expr {
        Expr::Diff(Box::new(a), Box::new(b))
    }

    pub fn compl(a: Expr) -> Expr {
        Expr::Compl(Box::new(a))
    }

    pub fn formula(&self, b: &mut Builder) -> Formula {
        match self {
            Expr::Piece(p) => p.formula(b),
            Expr::Set(s) => s.formula(b),
            Expr::Brick(x) => x.formula(b),
            Expr::Cheese(c) => c.formula(b),
            Expr::Union(xs) => Formula::or(xs.iter().map(|x| x.formula(b)).collect()),
            Expr::Inter(xs) => Formula::and(xs.iter().map(|x| x.formula(b)).collect()),
            Expr::Diff(x, y) => {
                let fx = x.formula(b);
                let fy = y.formula(b);
                Formula::and(vec![fx, Formula::not(fy)])
            }
            Expr::Compl(x) => {
                let f = x.formula(b);
                Formula::not(f)
            }
        }
    }

    /// Semantic membership, evaluated piece by piece.
    pub fn member(&self, x: &BPoint, field: Field) -> bool {
        match self {
            Expr::Piece(p) => p.member(x, field),
            Expr::Set(s) => s.member(x, field),
            Expr::Brick(b) => b.member(x, field),
            Expr::Cheese(c) => c.member(x, field),
            Expr::Union(xs) => xs.iter().any(|e| e.member(x, field)),
            Expr::Inter(xs) => xs.iter().all(|e| e.member(x, field)),
            Expr::Diff(a, b) => a.member(x, field) && !b.member(x, field),
            Expr::Compl(a) => !a.member(x, field),
        }
    }
}

fn nonempty_formula(b: &Builder, f: &Formula, field: Field) -> bool {
    sweep::decompose(field, &b.centers, &b.atoms, &|t: &[bool]| f.eval(t), true).nonempty
}

pub fn is_empty(e: &Expr, field: Field) -> bool {
    let mut b = Builder::new();
    let f = e.formula(&mut b);
    !nonempty_formula(&b, &f, field)
}

/// No point lies in two of the given pieces.
pub fn pairwise_disjoint(pieces: &[BasicRadial], field: Field) -> bool {
    let mut b = Builder::new();
    let fs: Vec<Formula> = pieces.iter().map(|p| p.formula(&mut b)).collect();
    let pred = |t: &[bool]| fs.iter().filter(|f| f.eval(t)).count() >= 2;
    !sweep::decompose(field, &b.centers, &b.atoms, &pred, true).nonempty
}

/// The sets are pairwise disjoint and their union is all of `B`.
pub fn is_partition(parts: &[Expr], field: Field) -> bool {
    let mut b = Builder::new();
    let fs: Vec<Formula> = parts.iter().map(|p| p.formula(&mut b)).collect();
    let pred = |t: &[bool]| fs.iter().filter(|f| f.eval(t)).count() != 1;
    !sweep::decompose(field, &b.centers, &b.atoms, &pred, true).nonempty
}

fn r2_regular(s1: &Radius, s2: &Radius, rho: &Radius, g: &Q) -> bool {
    let Radius::Exp(q) = rho else { return false };
    if s1 >= s2 {
        return false;
    }
    let slope = g - Q::one();
    // sup of q + (g-1)τ over the open interval must be ≤ 0, and the function not ≡ 0
    let end = |r: &Radius, at_top: bool| -> Option<Q> {
        match r {
            Radius::Exp(t) => Some(q + &slope * t),
            _ => {
                let grows = if at_top { slope > Q::zero() } else { slope < Q::zero() };
                if slope.is_zero() {
                    Some(q.clone())
                } else if grows {
                    None
                } else {
                    Some(-Q::one())
                }
            }
        }
    };
    let (Some(lo), Some(hi)) = (end(s1, false), end(s2, true)) else { return false };
    lo <= Q::zero() && hi <= Q::zero() && !(slope.is_zero() && q.is_zero())
}

/// Closed-form complement of a regular `R2` piece, following the cylinder
/// inventory of its exterior: above `s2`, on the circle `s2`, between the
/// radii, on and inside the disc of radius `s1`, and along the branch.
pub fn complement_r2(a: &Q, s1: &Radius, s2: &Radius, rho: &Radius, g: &Q) -> Vec<BasicRadial> {
    use BasicRadial::*;
    let z = Radius::Zero;
    let one = Radius::one();
    let mut out = Vec::new();
    if s2.is_finite() {
        out.push(R3 { a: a.clone(), s1: s2.clone(), s2: Radius::Infinity, rho1: z.clone(), g1: Q::zero(), rho2: one.clone(), g2: Q::one() });
        out.push(R2 { a: a.clone(), s1: s2.clone(), s2: Radius::Infinity, rho1: z.clone(), g1: Q::zero() });
        out.push(R5 { a: a.clone(), s: s2.clone(), holes: vec![a.clone()], s1: z.clone(), s2: s2.clone() });
        out.push(R4 { a: a.clone(), s: s2.clone(), holes: vec![a.clone()], s1: z.clone() });
    }
    out.push(R3 { a: a.clone(), s1: s1.clone(), s2: s2.clone(), rho1: z.clone(), g1: Q::zero(), rho2: rho.clone(), g2: g.clone() });
    out.push(R2 { a: a.clone(), s1: s1.clone(), s2: s2.clone(), rho1: z.clone(), g1: Q::zero() });
    out.push(R3 { a: a.clone(), s1: s1.clone(), s2: s2.clone(), rho1: rho.clone(), g1: g.clone(), rho2: one, g2: Q::one() });
    if !s1.is_zero() {
        out.push(R4 { a: a.clone(), s: s1.clone(), holes: vec![], s1: z.clone() });
        out.push(R5 { a: a.clone(), s: s1.clone(), holes: vec![], s1: z.clone(), s2: s1.clone() });
    }
    out.push(R1 { a: a.clone(), s1: s1.clone(), s2: Radius::Infinity });
    out.push(R0 { a: a.clone(), s: s1.clone() });
    out
}

fn piece_leaves(e: &Expr) -> Option<Vec<BasicRadial>> {
    match e {
        Expr::Piece(p) => Some(vec![p.clone()]),
        Expr::Set(s) => Some(s.pieces.clone()),
        Expr::Union(xs) => {
            let mut out = Vec::new();
            for x in xs {
                out.extend(piece_leaves(x)?);
            }
            Some(out)
        }
        _ => None,
    }
}

/// Rewrites a boolean expression as a disjoint list of basic pieces.
pub fn normalize(e: &Expr, field: Field) -> RadialSet {
    if let Expr::Compl(inner) = e {
        if let Expr::Piece(BasicRadial::R2 { a, s1, s2, rho1, g1 }) = inner.as_ref() {
            if r2_regular(s1, s2, rho1, g1) {
                return RadialSet::new(complement_r2(a, s1, s2, rho1, g1));
            }
        }
    }
    if let Some(leaves) = piece_leaves(e) {
        let kept: Vec<BasicRadial> =
            leaves.into_iter().filter(|p| !is_empty(&Expr::Piece(p.clone()), field)).collect();
        if pairwise_disjoint(&kept, field) {
            return RadialSet::new(kept);
        }
    }
    sweep_normalize(e, field)
}

pub(crate) fn sweep_formula(b: &Builder, f: &Formula, field: Field) -> RadialSet {
    RadialSet::new(sweep::decompose(field, &b.centers, &b.atoms, &|t: &[bool]| f.eval(t), false).pieces)
}

/// Normalization through the cell decomposition only, without shortcuts.
pub fn sweep_normalize(e: &Expr, field: Field) -> RadialSet {
    let mut b = Builder::new();
    let f = e.formula(&mut b);
    RadialSet::new(sweep::decompose(field, &b.centers, &b.atoms, &|t: &[bool]| f.eval(t), false).pieces)
}

pub struct EmptyEquals {
    pub empty_a: bool,
    pub equal: bool,
}

pub fn is_empty_equals(a: &Expr, b: &Expr, field: Field) -> EmptyEquals {
    let empty_a = is_empty(a, field);
    let sym = Expr::Union(vec![Expr::diff(a.clone(), b.clone()), Expr::diff(b.clone(), a.clone())]);
    EmptyEquals { empty_a, equal: is_empty(&sym, field) }
}

pub fn equal_sets(a: &Expr, b: &Expr, field: Field) -> bool {
    is_empty_equals(a, b, field).equal
}

pub struct CheeseBricks {
    pub lift: Vec<RadialSet>,
    /// Each brick with the index of the cheese containing it.
    pub bricks: Vec<(Brick, usize)>,
}

fn sample_between(lo: &Radius, hi: &Radius) -> Radius {
    match (lo, hi) {
        (Radius::Exp(a), Radius::Exp(b)) => Radius::Exp(mid(a, b)),
        (Radius::Exp(a), _) => Radius::Exp(a + Q::one()),
        (_, Radius::Exp(b)) => Radius::Exp(b - Q::one()),
        _ => Radius::Exp(qi(0)),
    }
}

/// Lifts Swiss cheeses to `B` and cuts the lifts into bricks.
///
/// A single cheese yields the bricks of its lift; several cheeses must
/// partition the line.
pub fn cheese_to_bricks(input: &[SwissCheese], field: Field) -> Result<CheeseBricks> {
    if input.is_empty() {
        return invalid("no cheese given");
    }
    for c in input {
        c.validate(field)?;
    }
    let exprs: Vec<Expr> = input.iter().map(|c| Expr::Cheese(c.clone())).collect();
    if input.len() > 1 && !is_partition(&exprs, field) {
        return invalid("the cheeses do not partition the line");
    }
    let mut pts = Vec::new();
    for c in input {
        for d in core::iter::once(&c.outer).chain(c.holes.iter()) {
            if d.radius.is_finite() {
                pts.push(BPoint::new(d.center.clone(), d.radius.clone())?);
                if d.open {
                    pts.push(BPoint::rigid(d.center.clone()));
                }
            }
        }
    }
    if pts.is_empty() {
        pts.push(BPoint::rigid(input[0].outer.center.clone()));
    }
    let tree = span_tree(&pts, field)?;
    let owner = |x: &BPoint| input.iter().position(|c| c.member(x, field));
    let mut bricks: Vec<(Brick, Option<usize>)> = Vec::new();
    let n = tree.nodes.len();
    let mut leaf_disc: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let node = &tree.nodes[i];
        let c = node.center.clone();
        if node.radius.is_zero() {
            bricks.push((Brick::B0 { a: c.clone() }, owner(node)));
        } else {
            let holes = tree.children[i].iter().map(|ch| tree.nodes[*ch].center.clone()).collect();
            bricks.push((Brick::B3 { a: c.clone(), s: node.radius.clone(), holes }, owner(node)));
        }
        let up = tree.parent[i].map(|p| tree.nodes[p].radius.clone()).unwrap_or(Radius::Infinity);
        let t = sample_between(&node.radius, &up);
        let x = BPoint { center: c.clone(), radius: t };
        let own = owner(&x);
        // a rigid leaf and the annulus above it merge into an open disc
        if node.radius.is_zero() && own.is_some() && bricks.last().unwrap().1 == own {
            bricks.pop();
            bricks.push((Brick::B1 { a: c, s: up }, own));
            leaf_disc[i] = Some(bricks.len() - 1);
        } else {
            bricks.push((Brick::B2 { a: c, s1: node.radius.clone(), s2: up }, own));
        }
    }
    // open discs hanging below a tube of the same cheese are absorbed
    let mut drop = vec![false; bricks.len()];
    for i in 0..n {
        if tree.nodes[i].radius.is_zero() {
            continue;
        }
        let tube_idx = bricks.iter().position(|(b, _)| matches!(b, Brick::B3 { a, s, .. } if *a == tree.nodes[i].center && *s == tree.nodes[i].radius)).unwrap();
        let own = bricks[tube_idx].1;
        let mut absorbed = Vec::new();
        for ch in &tree.children[i] {
            if let Some(bi) = leaf_disc[*ch] {
                if bricks[bi].1 == own && own.is_some() {
                    drop[bi] = true;
                    absorbed.push(tree.nodes[*ch].center.clone());
                }
            }
        }
        if let (Brick::B3 { holes, .. }, _) = &mut bricks[tube_idx] {
            holes.retain(|h| !absorbed.contains(h));
        }
    }
    let mut out = Vec::new();
    for (i, (b, own)) in bricks.into_iter().enumerate() {
        if drop[i] {
            continue;
        }
        match own {
            Some(o) => out.push((b, o)),
            None if input.len() == 1 => {}
            None => return invalid("a brick lies outside every cheese"),
        }
    }
    out.sort();
    let lift = exprs.iter().map(|e| normalize(e, field)).collect();
    Ok(CheeseBricks { lift, bricks: out })
}

