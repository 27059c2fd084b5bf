//! Type-1/2 points `η(a, r)` of the Berkovich line, seen as closed discs.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{domain, Result};
use crate::valuation::{Field, Radius, Q};

/// The point `η(a, r)`: the closed disc of center `a` and radius `r`.
///
/// Two values denote the same point when the radii agree and the centers
/// are within `r` of each other; use [`BPoint::same`], never structural
/// comparison.
#[derive(Clone, Debug)]
pub struct BPoint {
    pub center: Q,
    pub radius: Radius,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Equal,
    XInsideY,
    YInsideX,
    Disjoint,
}

#[derive(Clone, Debug)]
pub struct DiscRel {
    pub join: BPoint,
    pub relation: Relation,
    /// The smaller disc sits inside the open disc of the larger radius.
    pub strict: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Residue {
    Elem(u64),
    Generic,
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Residue::Elem(a) => write!(f, "{a}"),
            Residue::Generic => write!(f, "generic"),
        }
    }
}

impl BPoint {
    pub fn new(center: Q, radius: Radius) -> Result<BPoint> {
        if radius.is_infinite() {
            return domain("a point cannot have infinite radius");
        }
        Ok(BPoint { center, radius })
    }

    pub fn rigid(center: Q) -> BPoint {
        BPoint { center, radius: Radius::Zero }
    }

    /// The Gauss point `η(0, 1)`.
    pub fn gauss() -> BPoint {
        BPoint { center: Q::from_integer(0.into()), radius: Radius::one() }
    }

    pub fn point_type(&self) -> u8 {
        if self.radius.is_zero() {
            1
        } else {
            2
        }
    }

    /// `max(|a - c|, r)`, the smallest radius of a disc around `c` containing this one.
    pub fn dist_to(&self, c: &Q, field: Field) -> Radius {
        field.dist(&self.center, c).max(self.radius.clone())
    }

    pub fn same(&self, other: &BPoint, field: Field) -> bool {
        self.radius == other.radius && field.dist(&self.center, &other.center) <= self.radius
    }

    /// `D(self) ⊆ D(other)`.
    pub fn inside(&self, other: &BPoint, field: Field) -> bool {
        self.radius <= other.radius && field.dist(&self.center, &other.center) <= other.radius
    }

    pub fn join(&self, other: &BPoint, field: Field) -> BPoint {
        let d = field.dist(&self.center, &other.center);
        let r = d.max(self.radius.clone()).max(other.radius.clone());
        BPoint { center: self.center.clone(), radius: r }
    }

    /// `D(self)` lies in the open disc `D⁻(c, s)`.
    pub fn inside_open(&self, c: &Q, s: &Radius, field: Field) -> bool {
        self.radius < *s && field.dist(&self.center, c) < *s
    }
}

impl fmt::Display for BPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "η({}, {})", self.center, self.radius)
    }
}

pub fn point_eq_type(x: &BPoint, y: &BPoint, field: Field) -> (bool, u8) {
    (x.same(y, field), x.point_type())
}

pub fn disc_rel(x: &BPoint, y: &BPoint, field: Field) -> DiscRel {
    let join = x.join(y, field);
    let d = field.dist(&x.center, &y.center);
    let (relation, strict) = if x.same(y, field) {
        (Relation::Equal, false)
    } else if x.inside(y, field) {
        (Relation::XInsideY, d < y.radius && x.radius < y.radius)
    } else if y.inside(x, field) {
        (Relation::YInsideX, d < x.radius && y.radius < x.radius)
    } else {
        (Relation::Disjoint, false)
    };
    DiscRel { join, relation, strict }
}

/// Reduction `𝔻 ∖ {η(0,1)} → F_p`.
pub fn red(x: &BPoint, field: Field) -> Result<Residue> {
    if x.radius >= Radius::one() || field.abs(&x.center) > Radius::one() {
        return domain(format!("{x} is outside the reduction domain"));
    }
    Ok(Residue::Elem(field.residue(&x.center)?))
}

/// Join-closed hull of finitely many points with its parent structure.
#[derive(Clone, Debug)]
pub struct DiscTree {
    pub nodes: Vec<BPoint>,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
}

impl DiscTree {
    pub fn root(&self) -> usize {
        self.parent.iter().position(|p| p.is_none()).unwrap_or(0)
    }

    pub fn find(&self, x: &BPoint, field: Field) -> Option<usize> {
        self.nodes.iter().position(|n| n.same(x, field))
    }

    /// Nodes ordered so that every child precedes its parent.
    pub fn bottom_up(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by(|a, b| self.nodes[*a].radius.cmp(&self.nodes[*b].radius));
        order
    }
}

pub fn span_tree(pts: &[BPoint], field: Field) -> Result<DiscTree> {
    if pts.is_empty() {
        return domain("span_tree of an empty set");
    }
    let mut nodes: Vec<BPoint> = Vec::new();
    let push = |x: BPoint, nodes: &mut Vec<BPoint>| {
        if !nodes.iter().any(|n| n.same(&x, field)) {
            nodes.push(x);
        }
    };
    for p in pts {
        push(p.clone(), &mut nodes);
    }
    let base = nodes.clone();
    for i in 0..base.len() {
        for j in i + 1..base.len() {
            push(base[i].join(&base[j], field), &mut nodes);
        }
    }
    nodes.sort_by(|a, b| a.center.cmp(&b.center).then_with(|| a.radius.cmp(&b.radius)));
    let n = nodes.len();
    let mut parent = alloc::vec![None; n];
    for i in 0..n {
        let mut best: Option<usize> = None;
        for j in 0..n {
            if i != j && nodes[i].inside(&nodes[j], field) && nodes[i].radius < nodes[j].radius {
                if best.is_none_or(|b| nodes[j].radius < nodes[b].radius) {
                    best = Some(j);
                }
            }
        }
        parent[i] = best;
    }
    let mut children = alloc::vec![Vec::new(); n];
    for i in 0..n {
        if let Some(p) = parent[i] {
            children[p].push(i);
        }
    }
    Ok(DiscTree { nodes, parent, children })
}
