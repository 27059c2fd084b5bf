//! Radial subsets of a triangulated domain: the radius function `ρ_S`,
//! boolean operations, and the passage `δ` to definable subsets of `X^S`.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Zero;

use crate::bradial::{sweep_formula, BasicRadial, RadialSet};
use crate::error::{invalid, Error, Result};
use crate::facade::{Encoded, Facade};
use crate::formula::{Builder, Formula, Term};
use crate::maps::PPoint;
use crate::valuation::{qi, Monomial, Radius, Q};

/// `lo ⋈ v ⋈ hi` with `⋈` strict unless the flag is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Band {
    pub lo: Radius,
    pub lo_incl: bool,
    pub hi: Radius,
    pub hi_incl: bool,
}

impl Band {
    pub fn new(lo: Radius, lo_incl: bool, hi: Radius, hi_incl: bool) -> Band {
        Band { lo, lo_incl, hi, hi_incl }
    }

    pub fn point(v: Radius) -> Band {
        Band { lo: v.clone(), lo_incl: true, hi: v, hi_incl: true }
    }

    pub fn open(lo: Radius, hi: Radius) -> Band {
        Band { lo, lo_incl: false, hi, hi_incl: false }
    }

    /// `[0, 1]`, the range of `ρ`.
    pub fn unit() -> Band {
        Band::new(Radius::Zero, true, Radius::one(), true)
    }

    pub fn contains(&self, v: &Radius) -> bool {
        let lo = match self.lo.cmp(v) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_incl,
            Ordering::Greater => false,
        };
        let hi = match v.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_incl,
            Ordering::Greater => false,
        };
        lo && hi
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            Ordering::Less => false,
            Ordering::Equal => !(self.lo_incl && self.hi_incl),
            Ordering::Greater => true,
        }
    }
}

/// Disjoint bands in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BandSet(pub Vec<Band>);

impl BandSet {
    pub fn of(bands: Vec<Band>) -> BandSet {
        let mut bs: Vec<Band> = bands.into_iter().filter(|b| !b.is_empty()).collect();
        bs.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_incl.cmp(&a.lo_incl)));
        let mut out: Vec<Band> = Vec::new();
        for b in bs {
            if let Some(last) = out.last_mut() {
                let touch = match last.hi.cmp(&b.lo) {
                    Ordering::Greater => true,
                    Ordering::Equal => last.hi_incl || b.lo_incl,
                    Ordering::Less => false,
                };
                if touch {
                    match last.hi.cmp(&b.hi) {
                        Ordering::Less => {
                            last.hi = b.hi;
                            last.hi_incl = b.hi_incl;
                        }
                        Ordering::Equal => last.hi_incl |= b.hi_incl,
                        Ordering::Greater => {}
                    }
                    continue;
                }
            }
            out.push(b);
        }
        BandSet(out)
    }

    pub fn contains(&self, v: &Radius) -> bool {
        self.0.iter().any(|b| b.contains(v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, o: &BandSet) -> BandSet {
        BandSet::of(self.0.iter().chain(o.0.iter()).cloned().collect())
    }

    /// Complement inside `within`.
    pub fn complement(&self, within: &Band) -> BandSet {
        let mut out = Vec::new();
        let mut lo = within.lo.clone();
        let mut lo_incl = within.lo_incl;
        for b in &self.0 {
            out.push(Band::new(lo, lo_incl, b.lo.clone(), !b.lo_incl));
            lo = b.hi.clone();
            lo_incl = !b.hi_incl;
        }
        out.push(Band::new(lo, lo_incl, within.hi.clone(), within.hi_incl));
        let clipped = BandSet::of(out);
        clipped.intersect_band(within)
    }

    fn intersect_band(&self, w: &Band) -> BandSet {
        let mut out = Vec::new();
        for b in &self.0 {
            let (lo, lo_incl) = match b.lo.cmp(&w.lo) {
                Ordering::Less => (w.lo.clone(), w.lo_incl),
                Ordering::Greater => (b.lo.clone(), b.lo_incl),
                Ordering::Equal => (b.lo.clone(), b.lo_incl && w.lo_incl),
            };
            let (hi, hi_incl) = match b.hi.cmp(&w.hi) {
                Ordering::Greater => (w.hi.clone(), w.hi_incl),
                Ordering::Less => (b.hi.clone(), b.hi_incl),
                Ordering::Equal => (b.hi.clone(), b.hi_incl && w.hi_incl),
            };
            out.push(Band::new(lo, lo_incl, hi, hi_incl));
        }
        BandSet::of(out)
    }

    pub fn intersect(&self, o: &BandSet, within: &Band) -> BandSet {
        self.complement(within).union(&o.complement(within)).complement(within)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePiece {
    /// Points retracting to the type-2 vertex `x` with `ρ` in `band`.
    Vertex { x: usize, band: Band },
    /// Points retracting to the edge at chart coordinate `t ∈ span` with
    /// `f1(t) ⋈ ρ ⋈ f2(t)`.
    Edge { edge: usize, span: Band, f1: Monomial, f1_incl: bool, f2: Monomial, f2_incl: bool },
    /// A type-1 vertex.
    TypeOne { x: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CurveRadialSet {
    pub pieces: Vec<CurvePiece>,
}

impl CurveRadialSet {
    pub fn new(pieces: Vec<CurvePiece>) -> CurveRadialSet {
        CurveRadialSet { pieces }
    }

    pub fn empty() -> CurveRadialSet {
        CurveRadialSet::default()
    }

    pub fn member(&self, fa: &Facade, y: &PPoint) -> Result<bool> {
        let e = fa.encode(y)?;
        Ok(self.pieces.iter().any(|p| piece_member(fa, &e, p)))
    }

    pub fn validate(&self, fa: &Facade) -> Result<()> {
        for p in &self.pieces {
            let ok = match p {
                CurvePiece::Vertex { x, .. } => fa.vertices.get(*x).is_some_and(|v| v.point.point_type() == 2),
                CurvePiece::TypeOne { x } => fa.vertices.get(*x).is_some_and(|v| v.point.point_type() == 1),
                CurvePiece::Edge { edge, .. } => *edge < fa.edges.len(),
            };
            if !ok {
                return invalid(format!("{p:?} does not belong to this triangulation"));
            }
        }
        Ok(())
    }
}

/// `ρ_S` of an encoded point.
pub fn rho(fa: &Facade, e: &Encoded) -> Radius {
    match e {
        Encoded::Vtx1(_) | Encoded::Vtx2(_) => Radius::one(),
        Encoded::Tube(_, _, w) | Encoded::Disc(_, _, w) => w.radius.clone(),
        Encoded::Edge(_, w) => {
            let b = fa.field.abs(&w.center);
            if w.radius >= b {
                Radius::one()
            } else {
                w.radius.div(&b).expect("finite")
            }
        }
    }
}

fn bound_holds(f: &Monomial, t: &Radius, incl: bool, rho: &Radius, lower: bool) -> bool {
    let v = f.eval(t);
    let (a, b) = if lower { (&v, rho) } else { (rho, &v) };
    if incl {
        a <= b
    } else {
        a < b
    }
}

fn piece_member(fa: &Facade, e: &Encoded, p: &CurvePiece) -> bool {
    let r = rho(fa, e);
    match (p, e) {
        (CurvePiece::TypeOne { x }, Encoded::Vtx1(v)) => x == v,
        (CurvePiece::Vertex { x, band }, Encoded::Vtx2(v) | Encoded::Tube(v, _, _) | Encoded::Disc(v, _, _)) => {
            x == v && band.contains(&r)
        }
        (CurvePiece::Edge { edge, span, f1, f1_incl, f2, f2_incl }, Encoded::Edge(i, w)) => {
            let t = w.dist_to(&Q::zero(), fa.field);
            edge == i && span.contains(&t) && bound_holds(f1, &t, *f1_incl, &r, true) && bound_holds(f2, &t, *f2_incl, &r, false)
        }
        _ => false,
    }
}

/// `ρ_S(y)` together with membership in one piece.
pub fn rho_member(fa: &Facade, y: &PPoint, piece: &CurvePiece) -> Result<(Radius, bool)> {
    let e = fa.encode(y)?;
    Ok((rho(fa, &e), piece_member(fa, &e, piece)))
}

/// `π₂^{-1}(band) ∩ Z_x`, minus the residue fibers in `exceptions`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZCylinder {
    pub x: usize,
    pub band: Band,
    pub exceptions: Vec<u64>,
}

impl ZCylinder {
    pub fn member(&self, e: &Encoded) -> bool {
        match e {
            Encoded::Tube(x, a, w) => *x == self.x && !self.exceptions.contains(a) && self.band.contains(&w.radius),
            _ => false,
        }
    }
}

/// A definable subset of `X^S`, given part by part.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Definable {
    pub vtx1: Vec<usize>,
    pub vtx2: Vec<usize>,
    pub tubes: Vec<ZCylinder>,
    /// `(x, i, set)` in the chart of the retained disc `i` at `x`.
    pub discs: Vec<(usize, usize, RadialSet)>,
    /// `(edge, set)` in the edge chart.
    pub edges: Vec<(usize, RadialSet)>,
}

impl Definable {
    pub fn member(&self, fa: &Facade, e: &Encoded) -> bool {
        let f = fa.field;
        match e {
            Encoded::Vtx1(v) => self.vtx1.contains(v),
            Encoded::Vtx2(v) => self.vtx2.contains(v),
            Encoded::Tube(..) => self.tubes.iter().any(|c| c.member(e)),
            Encoded::Disc(x, i, w) => self.discs.iter().any(|(y, j, s)| y == x && j == i && s.member(w, f)),
            Encoded::Edge(i, w) => self.edges.iter().any(|(j, s)| i == j && s.member(w, f)),
        }
    }
}

fn cmp_atom(b: &mut Builder, lhs: Term, rhs: Term, incl: bool) -> Formula {
    if incl {
        b.le(lhs, rhs)
    } else {
        b.lt(lhs, rhs)
    }
}

fn konst(r: &Radius) -> Term {
    Term::konst(r.clone())
}

/// `f(D) · D^k` as a term.
fn mono_term(b: &mut Builder, m: &Monomial, extra: i64) -> Term {
    b.d(&Q::zero()).pow(&(&m.g + qi(extra))).scale(&m.rho)
}

fn band_formula(b: &mut Builder, v: Term, band: &Band) -> Formula {
    let lo = cmp_atom(b, konst(&band.lo), v.clone(), band.lo_incl);
    let hi = cmp_atom(b, v, konst(&band.hi), band.hi_incl);
    Formula::and(vec![lo, hi])
}

fn edge_region(b: &mut Builder, fa: &Facade, edge: usize) -> Formula {
    let e = &fa.edges[edge];
    let d = b.d(&Q::zero());
    band_formula(b, d, &Band::open(e.lo.clone(), e.hi.clone()))
}

fn edge_piece_formula(b: &mut Builder, span: &Band, f1: &Monomial, i1: bool, f2: &Monomial, i2: bool) -> Formula {
    let d = b.d(&Q::zero());
    let r = b.r();
    let span_f = band_formula(b, d.clone(), span);
    let below = b.lt(r.clone(), d.clone());
    let lo = mono_term(b, f1, 1);
    let hi = mono_term(b, f2, 1);
    let off_lo = cmp_atom(b, lo, r.clone(), i1);
    let off_hi = cmp_atom(b, r.clone(), hi, i2);
    let off = Formula::and(vec![below, off_lo, off_hi]);
    let on_eq = b.eq(r, d);
    let lo = mono_term(b, f1, 0);
    let hi = mono_term(b, f2, 0);
    let on_lo = cmp_atom(b, lo, Term::konst(Radius::one()), i1);
    let on_hi = cmp_atom(b, Term::konst(Radius::one()), hi, i2);
    let on = Formula::and(vec![on_eq, on_lo, on_hi]);
    Formula::and(vec![span_f, Formula::or(vec![off, on])])
}

fn disc_pieces(band: &Band) -> Vec<BasicRadial> {
    let one = Radius::one();
    let mut out = Vec::new();
    if band.is_empty() {
        return out;
    }
    if band.lo == band.hi {
        out.push(BasicRadial::R6 { a: Q::zero(), s: one, s1: band.lo.clone() });
        return out;
    }
    if band.lo_incl {
        out.push(BasicRadial::R6 { a: Q::zero(), s: one.clone(), s1: band.lo.clone() });
    }
    if band.hi_incl {
        out.push(BasicRadial::R6 { a: Q::zero(), s: one.clone(), s1: band.hi.clone() });
    }
    out.push(BasicRadial::R7 { a: Q::zero(), s: one, s1: band.lo.clone(), s2: band.hi.clone() });
    out
}

/// `δ`: the definable counterpart of a radial set.
pub fn delta(fa: &Facade, a: &CurveRadialSet) -> Result<Definable> {
    a.validate(fa)?;
    let mut out = Definable::default();
    let below_one = Band::new(Radius::Zero, true, Radius::one(), false);
    for p in &a.pieces {
        match p {
            CurvePiece::TypeOne { x } => out.vtx1.push(*x),
            CurvePiece::Vertex { x, band } => {
                if band.contains(&Radius::one()) {
                    out.vtx2.push(*x);
                }
                for part in BandSet::of(vec![band.clone()]).intersect(&BandSet::of(vec![below_one.clone()]), &Band::unit()).0 {
                    out.tubes.push(ZCylinder { x: *x, band: part.clone(), exceptions: Vec::new() });
                    for i in 0..fa.vertices[*x].discs.len() {
                        out.discs.push((*x, i, RadialSet::new(disc_pieces(&part))));
                    }
                }
            }
            CurvePiece::Edge { edge, span, f1, f1_incl, f2, f2_incl } => {
                let mut b = Builder::new();
                let region = edge_region(&mut b, fa, *edge);
                let body = edge_piece_formula(&mut b, span, f1, *f1_incl, f2, *f2_incl);
                let set = sweep_formula(&b, &Formula::and(vec![region, body]), fa.field);
                out.edges.push((*edge, set));
            }
        }
    }
    out.vtx1.sort();
    out.vtx1.dedup();
    out.vtx2.sort();
    out.vtx2.dedup();
    Ok(out)
}

fn not_radial(msg: alloc::string::String) -> Error {
    Error::Validation(format!("not radial: {msg}"))
}

fn div(a: &Radius, b: &Radius) -> Result<Radius> {
    a.div(b)
}

/// Edge pieces of a chart set centered at `0`.
fn edge_pieces_of(edge: usize, set: &RadialSet) -> Result<Vec<CurvePiece>> {
    let one = Monomial::constant(Radius::one());
    let mut out = Vec::new();
    let shifted = |rho: &Radius, g: &Q| Monomial::new(rho.clone(), g - qi(1));
    for p in &set.pieces {
        if !p.center().is_zero() {
            return Err(not_radial(format!("{p:?} is not centered on the skeleton")));
        }
        let piece = |span: Band, f1: Monomial, f1_incl: bool, f2: Monomial, f2_incl: bool| CurvePiece::Edge {
            edge,
            span,
            f1,
            f1_incl,
            f2,
            f2_incl,
        };
        out.push(match p {
            BasicRadial::R0 { s, .. } => piece(Band::point(s.clone()), one.clone(), true, one.clone(), true),
            BasicRadial::R1 { s1, s2, .. } => piece(Band::open(s1.clone(), s2.clone()), one.clone(), true, one.clone(), true),
            BasicRadial::R2 { s1, s2, rho1, g1, .. } => {
                let m = shifted(rho1, g1);
                piece(Band::open(s1.clone(), s2.clone()), m.clone(), true, m, true)
            }
            BasicRadial::R3 { s1, s2, rho1, g1, rho2, g2, .. } => {
                piece(Band::open(s1.clone(), s2.clone()), shifted(rho1, g1), false, shifted(rho2, g2), false)
            }
            BasicRadial::R4 { s, holes, s1, .. } | BasicRadial::R5 { s, holes, s1, .. } if holes.is_empty() => {
                let s2 = match p {
                    BasicRadial::R5 { s2, .. } => Some(s2.clone()),
                    _ => None,
                };
                let lo_m = Monomial::new(s1.clone(), qi(-1));
                match s2 {
                    None => piece(Band::new(s1.clone(), true, s.clone(), true), lo_m.clone(), true, lo_m, true),
                    Some(s2) => piece(
                        Band::new(s1.clone(), false, s.clone(), true),
                        lo_m,
                        false,
                        Monomial::new(s2.clone(), qi(-1)),
                        false,
                    ),
                }
            }
            BasicRadial::R4 { s, holes, s1, .. } if holes.len() == 1 && holes[0].is_zero() => {
                let m = Monomial::constant(div(s1, s)?);
                piece(Band::point(s.clone()), m.clone(), true, m, true)
            }
            BasicRadial::R5 { s, holes, s1, s2, .. } if holes.len() == 1 && holes[0].is_zero() => piece(
                Band::point(s.clone()),
                Monomial::constant(div(s1, s)?),
                false,
                Monomial::constant(div(s2, s)?),
                false,
            ),
            BasicRadial::R6 { s, s1, .. } => {
                let m = Monomial::new(s1.clone(), qi(-1));
                piece(Band::new(s1.clone(), true, s.clone(), false), m.clone(), true, m, true)
            }
            BasicRadial::R7 { s, s1, s2, .. } => piece(
                Band::new(s1.clone(), false, s.clone(), false),
                Monomial::new(s1.clone(), qi(-1)),
                false,
                Monomial::new(s2.clone(), qi(-1)),
                false,
            ),
            other => return Err(not_radial(format!("{other:?} separates residue classes"))),
        });
    }
    Ok(out)
}

fn disc_bands(set: &RadialSet) -> Result<BandSet> {
    let mut out = Vec::new();
    for p in &set.pieces {
        match p {
            BasicRadial::R6 { a, s, s1 } if a.is_zero() && *s == Radius::one() => out.push(Band::point(s1.clone())),
            BasicRadial::R7 { a, s, s1, s2 } if a.is_zero() && *s == Radius::one() => {
                out.push(Band::open(s1.clone(), s2.clone()))
            }
            other => return Err(not_radial(format!("{other:?} is not a union of radius shells"))),
        }
    }
    Ok(BandSet::of(out))
}

/// `δ^{-1}`: the radial set with a given definable image.
pub fn delta_inverse(fa: &Facade, d: &Definable) -> Result<CurveRadialSet> {
    let mut pieces = Vec::new();
    for x in &d.vtx1 {
        pieces.push(CurvePiece::TypeOne { x: *x });
    }
    for (x, v) in fa.vertices.iter().enumerate() {
        if v.chart.is_none() {
            continue;
        }
        let mut tube = Vec::new();
        for c in d.tubes.iter().filter(|c| c.x == x) {
            if !c.exceptions.is_empty() {
                return Err(not_radial(format!("the cylinder at vertex {x} depends on residues")));
            }
            tube.push(c.band.clone());
        }
        let tube = BandSet::of(tube);
        for i in 0..v.discs.len() {
            let mut bands = BandSet::default();
            for (_, _, s) in d.discs.iter().filter(|(y, j, _)| *y == x && *j == i) {
                bands = bands.union(&disc_bands(s)?);
            }
            if bands != tube {
                return Err(not_radial(format!("vertex {x}: the retained disc {i} differs from the tube")));
            }
        }
        let mut all = tube;
        if d.vtx2.contains(&x) {
            all = all.union(&BandSet::of(vec![Band::point(Radius::one())]));
        }
        pieces.extend(all.0.into_iter().map(|band| CurvePiece::Vertex { x, band }));
    }
    for (e, s) in &d.edges {
        pieces.extend(edge_pieces_of(*e, s)?);
    }
    Ok(CurveRadialSet { pieces })
}

#[derive(Clone, Debug)]
pub enum CurveExpr {
    Set(CurveRadialSet),
    Union(Vec<CurveExpr>),
    Inter(Vec<CurveExpr>),
    Diff(Box<CurveExpr>, Box<CurveExpr>),
    Compl(Box<CurveExpr>),
}

impl CurveExpr {
    pub fn diff(a: CurveExpr, b: CurveExpr) -> CurveExpr {
        CurveExpr::Diff(Box::new(a), Box::new(b))
    }

    pub fn compl(a: CurveExpr) -> CurveExpr {
        CurveExpr::Compl(Box::new(a))
    }

    fn bands(&self, x: usize) -> BandSet {
        let u = Band::unit();
        match self {
            CurveExpr::Set(s) => BandSet::of(
                s.pieces
                    .iter()
                    .filter_map(|p| match p {
                        CurvePiece::Vertex { x: y, band } if *y == x => Some(band.clone()),
                        _ => None,
                    })
                    .collect(),
            )
            .intersect(&BandSet::of(vec![u.clone()]), &u),
            CurveExpr::Union(es) => es.iter().fold(BandSet::default(), |acc, e| acc.union(&e.bands(x))),
            CurveExpr::Inter(es) => es.iter().fold(BandSet::of(vec![u.clone()]), |acc, e| acc.intersect(&e.bands(x), &u)),
            CurveExpr::Diff(a, b) => a.bands(x).intersect(&b.bands(x).complement(&u), &u),
            CurveExpr::Compl(a) => a.bands(x).complement(&u),
        }
    }

    fn has_point(&self, x: usize) -> bool {
        match self {
            CurveExpr::Set(s) => s.pieces.iter().any(|p| matches!(p, CurvePiece::TypeOne { x: y } if *y == x)),
            CurveExpr::Union(es) => es.iter().any(|e| e.has_point(x)),
            CurveExpr::Inter(es) => es.iter().all(|e| e.has_point(x)),
            CurveExpr::Diff(a, b) => a.has_point(x) && !b.has_point(x),
            CurveExpr::Compl(a) => !a.has_point(x),
        }
    }

    fn edge_formula(&self, b: &mut Builder, edge: usize) -> Formula {
        match self {
            CurveExpr::Set(s) => {
                let parts = s
                    .pieces
                    .iter()
                    .filter_map(|p| match p {
                        CurvePiece::Edge { edge: e, span, f1, f1_incl, f2, f2_incl } if *e == edge => {
                            Some(edge_piece_formula(b, span, f1, *f1_incl, f2, *f2_incl))
                        }
                        _ => None,
                    })
                    .collect();
                Formula::or(parts)
            }
            CurveExpr::Union(es) => Formula::or(es.iter().map(|e| e.edge_formula(b, edge)).collect()),
            CurveExpr::Inter(es) => Formula::and(es.iter().map(|e| e.edge_formula(b, edge)).collect()),
            CurveExpr::Diff(x, y) => {
                let fx = x.edge_formula(b, edge);
                let fy = y.edge_formula(b, edge);
                Formula::and(vec![fx, Formula::not(fy)])
            }
            CurveExpr::Compl(x) => Formula::not(x.edge_formula(b, edge)),
        }
    }
}

/// Disjoint pieces with the membership of a boolean expression; complements
/// are taken inside the domain.
pub fn normalize_curve(fa: &Facade, e: &CurveExpr) -> Result<CurveRadialSet> {
    let mut pieces = Vec::new();
    for (x, v) in fa.vertices.iter().enumerate() {
        if v.point.point_type() == 1 {
            if e.has_point(x) {
                pieces.push(CurvePiece::TypeOne { x });
            }
        } else {
            pieces.extend(e.bands(x).0.into_iter().map(|band| CurvePiece::Vertex { x, band }));
        }
    }
    for i in 0..fa.edges.len() {
        let mut b = Builder::new();
        let region = edge_region(&mut b, fa, i);
        let body = e.edge_formula(&mut b, i);
        let set = sweep_formula(&b, &Formula::and(vec![region, body]), fa.field);
        pieces.extend(edge_pieces_of(i, &set)?);
    }
    Ok(CurveRadialSet { pieces })
}

pub fn is_empty_curve(fa: &Facade, a: &CurveRadialSet) -> Result<bool> {
    Ok(normalize_curve(fa, &CurveExpr::Set(a.clone()))?.pieces.is_empty())
}

pub fn equal_curve(fa: &Facade, a: &CurveRadialSet, b: &CurveRadialSet) -> Result<bool> {
    let (x, y) = (CurveExpr::Set(a.clone()), CurveExpr::Set(b.clone()));
    let sym = CurveExpr::Union(vec![CurveExpr::diff(x.clone(), y.clone()), CurveExpr::diff(y, x)]);
    Ok(normalize_curve(fa, &sym)?.pieces.is_empty())
}

/// Adds a type-1 vertex in every excepted residue class and returns the
/// refined facade with the radial set that the exception-free cylinders define.
pub fn refine_away(fa: &Facade, d: &Definable) -> Result<(Facade, CurveRadialSet)> {
    let mut extra = Vec::new();
    for c in &d.tubes {
        let chart = fa.vertices[c.x].chart.as_ref().expect("type-2 vertex");
        for a in &c.exceptions {
            let z = chart.inverse().apply_q(&Q::from_integer((*a).into())).expect("affine chart");
            extra.push(crate::bline::BPoint::rigid(z));
        }
    }
    let fine = crate::facade::refine_facade(fa, &extra)?;
    let mut clean = d.clone();
    for c in clean.tubes.iter_mut() {
        c.exceptions.clear();
    }
    let set = delta_inverse(&fine, &clean)?;
    Ok((fine, set))
}
