//! Triangulations of subdomains of `P¹`, their skeleta and retractions,
//! facades with Möbius charts, and the encoded set `X^S`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::bline::{span_tree, BPoint, DiscTree};
use crate::error::{domain, invalid, unsupported, Error, Result};
use crate::maps::{fiber_count, invert_point, PPoint, RationalMap};
use crate::newton::{upper_envelope, Polynomial};
use crate::valuation::{qi, Field, Monomial, Radius, Q};

/// `(aT + b) / (cT + d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    pub a: Q,
    pub b: Q,
    pub c: Q,
    pub d: Q,
}

fn translate(x: PPoint, v: &Q) -> PPoint {
    match x {
        PPoint::Aff(p) => PPoint::Aff(BPoint { center: p.center + v, radius: p.radius }),
        PPoint::Inf => PPoint::Inf,
    }
}

fn scale(x: PPoint, u: &Q, field: Field) -> PPoint {
    match x {
        PPoint::Aff(p) => PPoint::Aff(BPoint { center: p.center * u, radius: p.radius.mul_total(&field.abs(u)) }),
        PPoint::Inf => PPoint::Inf,
    }
}

impl Mobius {
    pub fn new(a: Q, b: Q, c: Q, d: Q) -> Result<Mobius> {
        if (&a * &d - &b * &c).is_zero() {
            return invalid("singular Möbius map");
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn identity() -> Mobius {
        Mobius { a: Q::one(), b: Q::zero(), c: Q::zero(), d: Q::one() }
    }

    /// `uT + v`.
    pub fn affine(u: Q, v: Q) -> Mobius {
        Mobius { a: u, b: v, c: Q::zero(), d: Q::one() }
    }

    pub fn det(&self) -> Q {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// Image of a rational number; `None` for `∞`.
    pub fn apply_q(&self, x: &Q) -> Option<Q> {
        let den = &self.c * x + &self.d;
        (!den.is_zero()).then(|| (&self.a * x + &self.b) / den)
    }

    pub fn apply(&self, x: &PPoint, field: Field) -> PPoint {
        if self.c.is_zero() {
            let y = scale(x.clone(), &(&self.a / &self.d), field);
            return translate(y, &(&self.b / &self.d));
        }
        let shift = &self.d / &self.c;
        let y = translate(x.clone(), &shift);
        let y = match y {
            PPoint::Inf => PPoint::Aff(BPoint::rigid(Q::zero())),
            PPoint::Aff(p) => invert_point(&p, field),
        };
        let k = -self.det() / (&self.c * &self.c);
        translate(scale(y, &k, field), &(&self.a / &self.c))
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Mobius) -> Mobius {
        Mobius {
            a: &self.a * &g.a + &self.b * &g.c,
            b: &self.a * &g.b + &self.b * &g.d,
            c: &self.c * &g.a + &self.d * &g.c,
            d: &self.c * &g.b + &self.d * &g.d,
        }
    }

    pub fn inverse(&self) -> Mobius {
        Mobius { a: self.d.clone(), b: -self.b.clone(), c: -self.c.clone(), d: self.a.clone() }
    }

    pub fn to_map(&self) -> RationalMap {
        RationalMap::new(Polynomial::new(vec![self.b.clone(), self.a.clone()]), Polynomial::new(vec![self.d.clone(), self.c.clone()]))
            .expect("invertible")
    }

    /// Same map up to a common scalar.
    pub fn equivalent(&self, o: &Mobius) -> bool {
        let s = [&self.a, &self.b, &self.c, &self.d];
        let t = [&o.a, &o.b, &o.c, &o.d];
        (0..4).all(|i| (0..4).all(|j| s[i] * t[j] == s[j] * t[i]))
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}·T + {}) / ({}·T + {})", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    /// The closed disc `D(center, radius)`.
    Disc { center: Q, radius: Radius },
    Affine,
    Projective,
}

impl Domain {
    pub fn contains(&self, y: &PPoint, field: Field) -> bool {
        match (self, y) {
            (Domain::Projective, _) => true,
            (_, PPoint::Inf) => false,
            (Domain::Affine, _) => true,
            (Domain::Disc { center, radius }, PPoint::Aff(p)) => p.dist_to(center, field) <= *radius,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Disc { center, radius } => write!(f, "D({center}, {radius})"),
            Domain::Affine => write!(f, "A1"),
            Domain::Projective => write!(f, "P1"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Mode {
    Validate,
    Refine(Vec<BPoint>),
    /// Drop points of arity at most 2 outside `keep` while the set stays a triangulation.
    Prune(Vec<BPoint>),
}

fn dedup(pts: &[BPoint], field: Field) -> Vec<BPoint> {
    let mut out: Vec<BPoint> = Vec::new();
    for p in pts {
        if !out.iter().any(|q| q.same(p, field)) {
            out.push(p.clone());
        }
    }
    out
}

struct Checked {
    tree: DiscTree,
    /// tree node of every S point
    node_of: Vec<usize>,
    /// S point of every tree node
    point_of: Vec<Option<usize>>,
}

fn check(dom: &Domain, s: &[BPoint], field: Field) -> Result<Checked> {
    if s.is_empty() {
        return invalid("the triangulation must meet the domain");
    }
    for p in s {
        if !dom.contains(&PPoint::Aff(p.clone()), field) {
            return invalid(format!("{p} lies outside {dom}"));
        }
    }
    let tree = span_tree(s, field)?;
    let node_of: Vec<usize> = s.iter().map(|p| tree.find(p, field).expect("node")).collect();
    let mut point_of = vec![None; tree.nodes.len()];
    for (i, n) in node_of.iter().enumerate() {
        point_of[*n] = Some(i);
    }
    let root = tree.root();
    for (n, node) in tree.nodes.iter().enumerate() {
        if point_of[n].is_some() {
            continue;
        }
        if n != root {
            return invalid(format!("the branch point {node} is missing, so its component is neither a disc nor an annulus"));
        }
        if *dom != Domain::Projective || tree.children[n].len() != 2 {
            return invalid(format!("the component containing {node} is neither a disc nor an annulus"));
        }
    }
    if let Domain::Disc { center, radius } = dom {
        let top = BPoint { center: center.clone(), radius: radius.clone() };
        if radius.is_zero() || !tree.nodes[root].same(&top, field) || point_of[root].is_none() {
            return invalid(format!("{top} must belong to the triangulation"));
        }
    }
    Ok(Checked { tree, node_of, point_of })
}

fn arity(dom: &Domain, c: &Checked, i: usize) -> usize {
    let n = c.node_of[i];
    let mut k = c.tree.children[n].len();
    let root = c.tree.root();
    if n != root || *dom == Domain::Affine {
        k += 1;
    }
    if n == root && *dom == Domain::Projective && c.tree.nodes[n].point_type() == 2 {
        k += 1;
    }
    k
}

pub fn triangulate(dom: &Domain, s: &[BPoint], mode: Mode, field: Field) -> Result<Vec<BPoint>> {
    let mut s = dedup(s, field);
    match mode {
        Mode::Validate => {}
        Mode::Refine(extra) => {
            s.extend(extra);
            s = dedup(&s, field);
        }
        Mode::Prune(keep) => {
            check(dom, &s, field)?;
            loop {
                let c = check(dom, &s, field)?;
                let pick = (0..s.len()).rev().find(|&i| {
                    if keep.iter().any(|k| k.same(&s[i], field)) || arity(dom, &c, i) > 2 {
                        return false;
                    }
                    let mut t = s.clone();
                    t.remove(i);
                    check(dom, &t, field).is_ok()
                });
                match pick {
                    Some(i) => {
                        s.remove(i);
                    }
                    None => break,
                }
            }
        }
    }
    check(dom, &s, field)?;
    Ok(s)
}

#[derive(Clone, Debug)]
pub enum EdgeShape {
    /// `{η(center, t) : lo < t < hi}` from vertex `lower` up to `upper`
    /// (`None` for the ray to `∞` in `A¹`).
    Vertical { center: Q, lower: usize, upper: Option<usize> },
    /// The path between two vertices through a branch point outside `S`.
    Bent { c1: Q, c2: Q, v1: usize, v2: usize, join: BPoint },
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub shape: EdgeShape,
    /// Sends the edge onto `{η(0, t) : lo < t < hi}`.
    pub chart: Mobius,
    pub lo: Radius,
    pub hi: Radius,
}

impl Edge {
    /// A skeleton radius inside `(lo, hi)`.
    pub fn mid(&self) -> Radius {
        match (&self.lo, &self.hi) {
            (Radius::Exp(a), Radius::Exp(b)) => Radius::Exp((a + b) / qi(2)),
            (Radius::Exp(a), _) => Radius::Exp(a + qi(1)),
            (_, Radius::Exp(b)) => Radius::Exp(b - qi(1)),
            _ => Radius::one(),
        }
    }

    /// The skeleton point with chart coordinate `t`.
    pub fn skeleton_point(&self, t: &Radius, field: Field) -> BPoint {
        let w = PPoint::Aff(BPoint { center: Q::zero(), radius: t.clone() });
        match self.chart.inverse().apply(&w, field) {
            PPoint::Aff(p) => p,
            PPoint::Inf => unreachable!("skeleton points are affine"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub point: BPoint,
    /// `f_x`, sending the vertex to `η(0, 1)`; type-2 vertices only.
    pub chart: Option<Mobius>,
    /// Residues of the branches at the vertex that carry edges below it.
    pub excluded: Vec<u64>,
    /// Charts of the retained open discs, each onto `D⁻(0, 1)`.
    pub discs: Vec<Mobius>,
}

#[derive(Clone, Debug)]
pub struct Facade {
    pub field: Field,
    pub domain: Domain,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    Vtx(usize),
    Edge(usize),
    Tube(usize),
    Disc(usize, usize),
}

#[derive(Clone, Debug)]
pub enum Encoded {
    Vtx1(usize),
    /// The copy of `η(0, 1)` standing for a type-2 vertex.
    Vtx2(usize),
    Edge(usize, BPoint),
    /// `(α, η)` with `red(η) = α`.
    Tube(usize, u64, BPoint),
    Disc(usize, usize, BPoint),
}

impl Encoded {
    pub fn part(&self) -> Part {
        match self {
            Encoded::Vtx1(v) | Encoded::Vtx2(v) => Part::Vtx(*v),
            Encoded::Edge(e, _) => Part::Edge(*e),
            Encoded::Tube(x, _, _) => Part::Tube(*x),
            Encoded::Disc(x, i, _) => Part::Disc(*x, *i),
        }
    }

    pub fn coord(&self) -> Option<&BPoint> {
        match self {
            Encoded::Vtx1(_) | Encoded::Vtx2(_) => None,
            Encoded::Edge(_, w) | Encoded::Tube(_, _, w) | Encoded::Disc(_, _, w) => Some(w),
        }
    }

    pub fn same(&self, o: &Encoded, field: Field) -> bool {
        match (self, o) {
            (Encoded::Vtx1(a), Encoded::Vtx1(b)) | (Encoded::Vtx2(a), Encoded::Vtx2(b)) => a == b,
            (Encoded::Tube(x, a, w), Encoded::Tube(y, b, v)) => x == y && a == b && w.same(v, field),
            _ => self.part() == o.part() && self.coord().zip(o.coord()).is_some_and(|(w, v)| w.same(v, field)),
        }
    }
}

impl fmt::Display for Encoded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Encoded::Vtx1(v) => write!(f, "Vtx1({v})"),
            Encoded::Vtx2(v) => write!(f, "Vtx2({v})"),
            Encoded::Edge(e, w) => write!(f, "Edge({e}, {w})"),
            Encoded::Tube(x, a, w) => write!(f, "Tube({x}, {a}, {w})"),
            Encoded::Disc(x, i, w) => write!(f, "Disc({x}, {i}, {w})"),
        }
    }
}

/// `f_x = (T - c) / λ` with `|λ| = r`.
fn tube_chart(x: &BPoint, field: Field) -> Result<Mobius> {
    let Radius::Exp(e) = &x.radius else { return domain("tube charts need a type-2 vertex") };
    let Some(l) = field.scalar_of_abs(e) else {
        return unsupported(format!("the radius of {x} is not an absolute value of a rational"));
    };
    Ok(Mobius::affine(Q::one() / &l, -&x.center / &l))
}

pub fn build_facade(dom: &Domain, s: &[BPoint], field: Field) -> Result<Facade> {
    let s = dedup(s, field);
    let c = check(dom, &s, field)?;
    let tree = &c.tree;
    let root = tree.root();
    let mut vertices = Vec::with_capacity(s.len());
    for (i, p) in s.iter().enumerate() {
        let n = c.node_of[i];
        let point = tree.nodes[n].clone();
        let (chart, excluded, discs) = if p.point_type() == 2 {
            let f = tube_chart(&point, field)?;
            let mut ex: Vec<u64> = tree.children[n]
                .iter()
                .map(|ch| field.residue(&f.apply_q(&tree.nodes[*ch].center).unwrap()).expect("integral"))
                .collect();
            ex.sort();
            let mut discs = Vec::new();
            if n == root && *dom == Domain::Projective {
                let Radius::Exp(e) = &point.radius else { unreachable!() };
                let l = field.scalar_of_abs(e).unwrap();
                discs.push(Mobius { a: Q::zero(), b: l, c: Q::one(), d: -point.center.clone() });
            }
            (Some(f), ex, discs)
        } else {
            (None, Vec::new(), Vec::new())
        };
        vertices.push(Vertex { point, chart, excluded, discs });
    }
    if *dom == Domain::Projective && c.point_of[root].is_some() && tree.nodes[root].point_type() == 1 {
        return unsupported("a type-1 top vertex cannot host the disc at ∞");
    }
    let mut edges = Vec::new();
    for (i, _) in s.iter().enumerate() {
        let n = c.node_of[i];
        let me = &tree.nodes[n];
        match tree.parent[n] {
            Some(m) if c.point_of[m].is_some() => edges.push(Edge {
                shape: EdgeShape::Vertical { center: me.center.clone(), lower: i, upper: c.point_of[m] },
                chart: Mobius::affine(Q::one(), -me.center.clone()),
                lo: me.radius.clone(),
                hi: tree.nodes[m].radius.clone(),
            }),
            Some(m) => {
                let other = *tree.children[m].iter().find(|k| **k != n).unwrap();
                let j = c.point_of[other].unwrap();
                if j < i {
                    continue;
                }
                let (c1, c2) = (me.center.clone(), tree.nodes[other].center.clone());
                let big = tree.nodes[m].radius.clone();
                let lo = me.radius.div(&big)?;
                let hi = if tree.nodes[other].radius.is_zero() { Radius::Infinity } else { big.div(&tree.nodes[other].radius)? };
                edges.push(Edge {
                    shape: EdgeShape::Bent { c1: c1.clone(), c2: c2.clone(), v1: i, v2: j, join: tree.nodes[m].clone() },
                    chart: Mobius::new(Q::one(), -c1, Q::one(), -c2)?,
                    lo,
                    hi,
                });
            }
            None if *dom == Domain::Affine => edges.push(Edge {
                shape: EdgeShape::Vertical { center: me.center.clone(), lower: i, upper: None },
                chart: Mobius::affine(Q::one(), -me.center.clone()),
                lo: me.radius.clone(),
                hi: Radius::Infinity,
            }),
            None => {}
        }
    }
    Ok(Facade { field, domain: dom.clone(), vertices, edges })
}

#[derive(Clone, Debug)]
pub struct SkeletonEdge {
    pub from: usize,
    /// `None` for the end at `∞`.
    pub to: Option<usize>,
    pub lo: Radius,
    pub hi: Radius,
}

#[derive(Clone, Debug)]
pub struct SkeletonGraph {
    pub vertices: Vec<BPoint>,
    pub edges: Vec<SkeletonEdge>,
}

impl Facade {
    pub fn points(&self) -> Vec<BPoint> {
        self.vertices.iter().map(|v| v.point.clone()).collect()
    }

    pub fn graph(&self) -> SkeletonGraph {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let (from, to) = match &e.shape {
                    EdgeShape::Vertical { lower, upper, .. } => (*lower, *upper),
                    EdgeShape::Bent { v1, v2, .. } => (*v1, Some(*v2)),
                };
                SkeletonEdge { from, to, lo: e.lo.clone(), hi: e.hi.clone() }
            })
            .collect();
        SkeletonGraph { vertices: self.points(), edges }
    }

    /// Parts other than vertices, in encoding order.
    pub fn parts(&self) -> Vec<Part> {
        let mut out: Vec<Part> = (0..self.edges.len()).map(Part::Edge).collect();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.chart.is_some() {
                out.push(Part::Tube(i));
            }
            for j in 0..v.discs.len() {
                out.push(Part::Disc(i, j));
            }
        }
        out
    }

    pub fn chart(&self, part: Part) -> Option<&Mobius> {
        match part {
            Part::Vtx(_) => None,
            Part::Edge(e) => Some(&self.edges[e].chart),
            Part::Tube(x) => self.vertices[x].chart.as_ref(),
            Part::Disc(x, i) => Some(&self.vertices[x].discs[i]),
        }
    }

    /// Whether a chart coordinate lies in the chart image of `part`.
    pub fn accepts(&self, part: Part, w: &PPoint) -> bool {
        let f = self.field;
        let PPoint::Aff(w) = w else { return false };
        let d0 = w.dist_to(&Q::zero(), f);
        match part {
            Part::Vtx(_) => false,
            Part::Edge(e) => self.edges[e].lo < d0 && d0 < self.edges[e].hi,
            Part::Tube(x) => {
                w.radius < Radius::one()
                    && d0 <= Radius::one()
                    && !self.vertices[x].excluded.contains(&f.residue(&w.center).expect("integral"))
            }
            Part::Disc(_, _) => d0 < Radius::one(),
        }
    }

    fn wrap(&self, part: Part, w: BPoint) -> Encoded {
        match part {
            Part::Vtx(v) => self.vertex_code(v),
            Part::Edge(e) => Encoded::Edge(e, w),
            Part::Tube(x) => Encoded::Tube(x, self.field.residue(&w.center).expect("integral"), w),
            Part::Disc(x, i) => Encoded::Disc(x, i, w),
        }
    }

    fn vertex_code(&self, v: usize) -> Encoded {
        if self.vertices[v].point.point_type() == 1 {
            Encoded::Vtx1(v)
        } else {
            Encoded::Vtx2(v)
        }
    }

    /// The part of `X` containing `y`, with its chart coordinate.
    pub fn locate(&self, y: &PPoint) -> Result<Encoded> {
        let f = self.field;
        if !self.domain.contains(y, f) {
            return domain(format!("{y} lies outside {}", self.domain));
        }
        if let PPoint::Aff(p) = y {
            if let Some(v) = self.vertices.iter().position(|v| v.point.same(p, f)) {
                return Ok(self.vertex_code(v));
            }
        }
        for part in self.parts() {
            let w = self.chart(part).unwrap().apply(y, f);
            if self.accepts(part, &w) {
                let PPoint::Aff(w) = w else { unreachable!() };
                return Ok(self.wrap(part, w));
            }
        }
        Err(Error::Validation(format!("{y} is not covered by the facade")))
    }

    /// Encodes `y` and re-encodes via the chart coordinate of a normalized representative.
    pub fn encode(&self, y: &PPoint) -> Result<Encoded> {
        self.locate(y)
    }

    pub fn check_encoded(&self, e: &Encoded) -> Result<()> {
        let ok = match e {
            Encoded::Vtx1(v) => *v < self.vertices.len() && self.vertices[*v].point.point_type() == 1,
            Encoded::Vtx2(v) => *v < self.vertices.len() && self.vertices[*v].point.point_type() == 2,
            Encoded::Edge(i, w) => *i < self.edges.len() && self.accepts(Part::Edge(*i), &PPoint::Aff(w.clone())),
            Encoded::Tube(x, a, w) => {
                *x < self.vertices.len()
                    && self.vertices[*x].chart.is_some()
                    && self.accepts(Part::Tube(*x), &PPoint::Aff(w.clone()))
                    && self.field.residue(&w.center).ok() == Some(*a)
            }
            Encoded::Disc(x, i, w) => {
                *x < self.vertices.len() && *i < self.vertices[*x].discs.len() && self.accepts(Part::Disc(*x, *i), &PPoint::Aff(w.clone()))
            }
        };
        if ok {
            Ok(())
        } else {
            domain(format!("{e} is not a point of X^S"))
        }
    }

    pub fn decode(&self, e: &Encoded) -> Result<PPoint> {
        self.check_encoded(e)?;
        Ok(match e {
            Encoded::Vtx1(v) | Encoded::Vtx2(v) => PPoint::Aff(self.vertices[*v].point.clone()),
            _ => {
                let w = PPoint::Aff(e.coord().unwrap().clone());
                self.chart(e.part()).unwrap().inverse().apply(&w, self.field)
            }
        })
    }

    /// The retraction `τ_S` onto the skeleton.
    pub fn tau(&self, y: &PPoint) -> Result<BPoint> {
        let e = self.encode(y)?;
        Ok(match &e {
            Encoded::Vtx1(v) | Encoded::Vtx2(v) | Encoded::Tube(v, _, _) | Encoded::Disc(v, _, _) => self.vertices[*v].point.clone(),
            Encoded::Edge(i, w) => self.edges[*i].skeleton_point(&w.dist_to(&Q::zero(), self.field), self.field),
        })
    }

    pub fn on_skeleton(&self, y: &PPoint) -> Result<bool> {
        Ok(match self.encode(y)? {
            Encoded::Vtx1(_) | Encoded::Vtx2(_) => true,
            Encoded::Edge(_, w) => w.radius >= self.field.abs(&w.center),
            _ => false,
        })
    }

    /// The deformation `ν_S(t, y)` for `t ∈ [0, 1]`.
    pub fn nu(&self, t: &Radius, y: &PPoint) -> Result<PPoint> {
        if *t > Radius::one() {
            return domain("deformation time beyond 1");
        }
        let e = self.encode(y)?;
        let f = self.field;
        let moved = match &e {
            Encoded::Vtx1(_) | Encoded::Vtx2(_) => return Ok(y.clone()),
            Encoded::Tube(_, _, w) | Encoded::Disc(_, _, w) => BPoint { center: w.center.clone(), radius: w.radius.clone().max(t.clone()) },
            Encoded::Edge(_, w) => {
                BPoint { center: w.center.clone(), radius: w.radius.clone().max(t.mul_total(&f.abs(&w.center))) }
            }
        };
        Ok(self.chart(e.part()).unwrap().inverse().apply(&PPoint::Aff(moved), f))
    }

    /// The skeleton chart coordinate `t` of a point on or off the edge `i`.
    pub fn edge_coordinate(&self, i: usize, y: &PPoint) -> Option<Radius> {
        match self.chart(Part::Edge(i))?.apply(y, self.field) {
            PPoint::Aff(w) => Some(w.dist_to(&Q::zero(), self.field)),
            PPoint::Inf => None,
        }
    }
}

/// Facade of `S ∪ extra`, keeping vertex ids and numbering each piece of an
/// old edge by that edge, lowest piece first.
pub fn refine_facade(old: &Facade, extra: &[BPoint]) -> Result<Facade> {
    let f = old.field;
    let mut s = old.points();
    s.extend(extra.iter().cloned());
    let mut new = build_facade(&old.domain, &s, f)?;
    let mut owner: Vec<Option<(usize, Radius)>> = Vec::new();
    for e in &new.edges {
        let mid = PPoint::Aff(e.skeleton_point(&e.mid(), f));
        owner.push(match old.encode(&mid)? {
            Encoded::Edge(i, w) => Some((i, w.dist_to(&Q::zero(), f))),
            _ => None,
        });
    }
    let mut order: Vec<usize> = Vec::new();
    for i in 0..old.edges.len() {
        let mut subs: Vec<usize> = (0..new.edges.len()).filter(|j| owner[*j].as_ref().is_some_and(|o| o.0 == i)).collect();
        subs.sort_by(|a, b| owner[*a].as_ref().unwrap().1.cmp(&owner[*b].as_ref().unwrap().1));
        if let Some(first) = subs.first() {
            order.push(*first);
        }
    }
    for i in 0..old.edges.len() {
        let mut subs: Vec<usize> = (0..new.edges.len()).filter(|j| owner[*j].as_ref().is_some_and(|o| o.0 == i)).collect();
        subs.sort_by(|a, b| owner[*a].as_ref().unwrap().1.cmp(&owner[*b].as_ref().unwrap().1));
        order.extend(subs.into_iter().skip(1));
    }
    order.extend((0..new.edges.len()).filter(|j| owner[*j].is_none()));
    let edges = order.iter().map(|j| new.edges[*j].clone()).collect();
    new.edges = edges;
    Ok(new)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    /// Same part, same coordinates.
    Identity,
    /// The point becomes a vertex of the finer facade.
    Vertex,
    /// The point moves to another part or its coordinates change.
    Chart,
}

#[derive(Clone, Debug)]
pub enum Rule {
    Vertex { vertex: usize, at: BPoint },
    Chart { target: Part, sigma: Mobius },
}

/// The transition from a facade to a refinement, as chart-to-chart rules.
#[derive(Clone, Debug)]
pub struct Transport {
    pub rules: Vec<(Part, Vec<Rule>)>,
}

fn parent_part(code: &Encoded) -> Part {
    match code {
        Encoded::Vtx2(x) => Part::Tube(*x),
        c => c.part(),
    }
}

pub fn transport_rules(old: &Facade, new: &Facade) -> Result<Transport> {
    let f = old.field;
    if old.domain != new.domain {
        return invalid("facades over different domains");
    }
    for (i, v) in old.vertices.iter().enumerate() {
        if i >= new.vertices.len() || !new.vertices[i].point.same(&v.point, f) {
            return invalid(format!("{} is not kept by the refinement", v.point));
        }
    }
    let mut rules: Vec<(Part, Vec<Rule>)> = Vec::new();
    let mut add = |p: Part, r: Rule| match rules.iter_mut().find(|(q, _)| *q == p) {
        Some((_, v)) => v.push(r),
        None => rules.push((p, vec![r])),
    };
    for (i, v) in new.vertices.iter().enumerate().skip(old.vertices.len()) {
        let y = PPoint::Aff(v.point.clone());
        let code = old.encode(&y)?;
        let p = code.part();
        let at = match old.chart(p).unwrap().apply(&y, f) {
            PPoint::Aff(w) => w,
            PPoint::Inf => unreachable!(),
        };
        add(p, Rule::Vertex { vertex: i, at });
    }
    for q in new.parts() {
        let p = match q {
            Part::Edge(e) => {
                let ed = &new.edges[e];
                old.encode(&PPoint::Aff(ed.skeleton_point(&ed.mid(), f)))?.part()
            }
            Part::Tube(x) | Part::Disc(x, _) => {
                let code = old.encode(&PPoint::Aff(new.vertices[x].point.clone()))?;
                match (q, &code) {
                    (Part::Disc(_, i), Encoded::Vtx2(y)) => Part::Disc(*y, i),
                    _ => parent_part(&code),
                }
            }
            Part::Vtx(_) => unreachable!(),
        };
        let sigma = new.chart(q).unwrap().compose(&old.chart(p).unwrap().inverse());
        add(p, Rule::Chart { target: q, sigma });
    }
    Ok(Transport { rules })
}

impl Transport {
    pub fn apply(&self, old: &Facade, new: &Facade, e: &Encoded) -> Result<(Encoded, Case)> {
        let f = old.field;
        old.check_encoded(e)?;
        if let Encoded::Vtx1(_) | Encoded::Vtx2(_) = e {
            return Ok((e.clone(), Case::Identity));
        }
        let w = e.coord().unwrap();
        let rules = self.rules.iter().find(|(p, _)| *p == e.part()).map(|r| &r.1);
        for rule in rules.into_iter().flatten() {
            if let Rule::Vertex { vertex, at } = rule {
                if at.same(w, f) {
                    return Ok((new.vertex_code(*vertex), Case::Vertex));
                }
            }
        }
        for rule in rules.into_iter().flatten() {
            if let Rule::Chart { target, sigma } = rule {
                let z = sigma.apply(&PPoint::Aff(w.clone()), f);
                if new.accepts(*target, &z) {
                    let PPoint::Aff(z) = z else { unreachable!() };
                    let same = *target == e.part() && sigma.equivalent(&Mobius::identity());
                    let case = if same { Case::Identity } else { Case::Chart };
                    return Ok((new.wrap(*target, z), case));
                }
            }
        }
        Err(Error::Validation(format!("{e} has no image in the refinement")))
    }
}

pub fn transport_id(old: &Facade, new: &Facade, e: &Encoded) -> Result<Encoded> {
    Ok(transport_rules(old, new)?.apply(old, new, e)?.0)
}

fn compat(msg: String) -> Error {
    Error::Compatibility(msg)
}

/// Checks that `h` maps `S1` into `S2`, pulls `S2` back into `S1`, and
/// matches edges with edges.
pub fn check_compatible(h: &RationalMap, f1: &Facade, f2: &Facade) -> Result<()> {
    let f = f1.field;
    for v in &f1.vertices {
        let y = h.pushforward(&PPoint::Aff(v.point.clone()), f)?;
        if !f2.vertices.iter().any(|w| PPoint::Aff(w.point.clone()).same(&y, f)) {
            return Err(compat(format!("h({}) = {y} is not a vertex of the target", v.point)));
        }
    }
    let fiber = |y: &BPoint| fiber_count(h, y, &[], f).map_err(|e| compat(format!("fiber over {y}: {e}")));
    for w in &f2.vertices {
        for x in fiber(&w.point)?.fiber {
            if f1.domain.contains(&PPoint::Aff(x.clone()), f) && !f1.vertices.iter().any(|v| v.point.same(&x, f)) {
                return Err(compat(format!("{x} maps to the vertex {} but is not a vertex", w.point)));
            }
        }
    }
    for (i, e) in f1.edges.iter().enumerate() {
        let m = PPoint::Aff(e.skeleton_point(&e.mid(), f));
        let y = h.pushforward(&m, f)?;
        if !matches!(f2.encode(&y), Ok(Encoded::Edge(_, _))) {
            return Err(compat(format!("edge {i} is not mapped into an edge")));
        }
    }
    for (j, e) in f2.edges.iter().enumerate() {
        for x in fiber(&e.skeleton_point(&e.mid(), f))?.fiber {
            let x = PPoint::Aff(x);
            if f1.domain.contains(&x, f) && !matches!(f1.encode(&x), Ok(Encoded::Edge(_, _))) {
                return Err(compat(format!("a preimage of edge {j} lies off the edges")));
            }
        }
    }
    Ok(())
}

pub fn map_transport(h: &RationalMap, f1: &Facade, f2: &Facade, e: &Encoded) -> Result<Encoded> {
    let x = f1.decode(e)?;
    f2.encode(&h.pushforward(&x, f1.field)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledEdge {
    pub edge: usize,
    pub target: usize,
    /// `(lo, hi, m)`: on `lo < t < hi` the skeleton coordinate maps to `m(t)`.
    pub pieces: Vec<(Radius, Radius, Monomial)>,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledTube {
    pub vertex: usize,
    pub target: usize,
    /// Residue map as a quotient of polynomials over `F_p`, ascending coefficients.
    pub num: Vec<u64>,
    pub den: Vec<u64>,
}

impl CompiledTube {
    /// Value at a residue; `None` for `∞`.
    pub fn eval(&self, a: u64, p: u64) -> Option<u64> {
        let ev = |cs: &[u64]| cs.iter().rev().fold(0u64, |acc, c| ((acc as u128 * a as u128 + *c as u128) % p as u128) as u64);
        let (n, d) = (ev(&self.num), ev(&self.den));
        (d != 0).then(|| ((n as u128 * crate::valuation::powmod(d, p - 2, p) as u128) % p as u128) as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledMap {
    pub edges: Vec<CompiledEdge>,
    pub tubes: Vec<CompiledTube>,
}

fn monomials(p: &Polynomial, field: Field) -> Vec<Monomial> {
    p.coeffs().iter().enumerate().map(|(i, c)| Monomial::new(field.abs(c), qi(i as i64))).collect()
}

fn conjugate(h: &RationalMap, from: &Mobius, to: &Mobius) -> Result<RationalMap> {
    to.to_map().compose(&h.compose(&from.inverse().to_map())?)
}

pub fn compile(h: &RationalMap, f1: &Facade, f2: &Facade) -> Result<CompiledMap> {
    let f = f1.field;
    check_compatible(h, f1, f2)?;
    let mut edges = Vec::new();
    for (i, e) in f1.edges.iter().enumerate() {
        let m = PPoint::Aff(e.skeleton_point(&e.mid(), f));
        let Encoded::Edge(j, _) = f2.encode(&h.pushforward(&m, f)?)? else { unreachable!() };
        let g = conjugate(h, &e.chart, &f2.edges[j].chart)?;
        let (mn, md) = (monomials(g.num(), f), monomials(g.den(), f));
        let mut pieces: Vec<(Radius, Radius, Monomial)> = Vec::new();
        for (lo, hi, a) in upper_envelope(&mn, &e.lo, &e.hi) {
            for (lo2, hi2, b) in upper_envelope(&md, &lo, &hi) {
                let rho = mn[a].rho.div(&md[b].rho)?;
                let mono = Monomial::new(rho, &mn[a].g - &md[b].g);
                match pieces.last_mut() {
                    Some(last) if last.2 == mono => last.1 = hi2,
                    _ => pieces.push((lo2, hi2, mono)),
                }
            }
        }
        let g = pieces[0].2.g.clone();
        if pieces.len() != 1 || g.is_zero() || !g.is_integer() {
            return Err(compat(format!("edge {i} is not mapped monomially onto edge {j}")));
        }
        let degree = num_traits::Signed::abs(&g).to_integer().try_into().unwrap_or(0usize);
        edges.push(CompiledEdge { edge: i, target: j, pieces, degree });
    }
    let mut tubes = Vec::new();
    for (i, v) in f1.vertices.iter().enumerate() {
        let Some(fx) = &v.chart else { continue };
        let PPoint::Aff(y) = h.pushforward(&PPoint::Aff(v.point.clone()), f)? else { unreachable!() };
        let j = f2.vertices.iter().position(|w| w.point.same(&y, f)).unwrap();
        let Some(fy) = &f2.vertices[j].chart else {
            return Err(compat(format!("vertex {i} maps to a type-1 vertex")));
        };
        let g = conjugate(h, fx, fy)?;
        let one = Radius::one();
        let top = g.num().gauss_norm(&one, f).max(g.den().gauss_norm(&one, f));
        let Radius::Exp(e) = &top else { unreachable!() };
        let l = f.scalar_of_abs(e).unwrap();
        let red = |p: &Polynomial| -> Vec<u64> {
            let mut out: Vec<u64> = p.coeffs().iter().map(|c| f.residue(&(c / &l)).expect("integral")).collect();
            while out.last() == Some(&0) {
                out.pop();
            }
            out
        };
        tubes.push(CompiledTube { vertex: i, target: j, num: red(g.num()), den: red(g.den()) });
    }
    Ok(CompiledMap { edges, tubes })
}
