//! Quantifier-free conditions on a point `η(a, r)`, built from monomials in
//! the distances `max(|a - c|, r)`, `|a - c|` and the radius `r`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Zero;

use crate::bline::BPoint;
use crate::valuation::{Field, Radius, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// `max(|a - c|, r)` for the center with this index.
    D(usize),
    /// `|a - c|`; depends on the chosen center of the point, so it should
    /// only appear in conditions that do not.
    Dist(usize),
    /// The radius `r`.
    R,
}

/// `coef · ∏ var^e`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub coef: Radius,
    pub factors: Vec<(Var, Q)>,
}

impl Term {
    pub fn konst(coef: Radius) -> Term {
        Term { coef, factors: Vec::new() }
    }

    pub fn var(v: Var) -> Term {
        Term { coef: Radius::one(), factors: alloc::vec![(v, Q::from_integer(1.into()))] }
    }

    pub fn is_const(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn scale(mut self, r: &Radius) -> Term {
        self.coef = self.coef.mul_total(r);
        self.normalized()
    }

    pub fn pow(mut self, e: &Q) -> Term {
        self.coef = self.coef.pow_total(e);
        for f in self.factors.iter_mut() {
            f.1 = &f.1 * e;
        }
        self.normalized()
    }

    pub fn mul(mut self, other: &Term) -> Term {
        self.coef = self.coef.mul_total(&other.coef);
        self.factors.extend(other.factors.iter().cloned());
        self.normalized()
    }

    fn normalized(mut self) -> Term {
        if self.coef.is_zero() {
            self.factors.clear();
            return self;
        }
        self.factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Var, Q)> = Vec::with_capacity(self.factors.len());
        for (v, e) in self.factors {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 = &last.1 + e,
                _ => out.push((v, e)),
            }
        }
        out.retain(|f| !f.1.is_zero());
        self.factors = out;
        self
    }

    pub fn eval(&self, env: &dyn Fn(Var) -> Radius) -> Radius {
        let mut acc = self.coef.clone();
        for (v, e) in &self.factors {
            acc = acc.mul_total(&env(*v).pow_total(e));
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Lt,
    Le,
    Eq,
}

impl Rel {
    pub fn holds(self, o: Ordering) -> bool {
        match self {
            Rel::Lt => o == Ordering::Less,
            Rel::Le => o != Ordering::Greater,
            Rel::Eq => o == Ordering::Equal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub lhs: Term,
    pub rel: Rel,
    pub rhs: Term,
}

impl Atom {
    pub fn eval(&self, env: &dyn Fn(Var) -> Radius) -> bool {
        self.rel.holds(self.lhs.eval(env).cmp(&self.rhs.eval(env)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Atom(usize),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for f in parts {
            match f {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                f => out.push(f),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for f in parts {
            match f {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                f => out.push(f),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            f => Formula::Not(Box::new(f)),
        }
    }

    pub fn eval(&self, truths: &[bool]) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(i) => truths[*i],
            Formula::Not(f) => !f.eval(truths),
            Formula::And(fs) => fs.iter().all(|f| f.eval(truths)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval(truths)),
        }
    }
}

/// Interns centers and atoms so that several formulas share one table.
#[derive(Clone, Debug, Default)]
pub struct Builder {
    pub centers: Vec<Q>,
    center_index: BTreeMap<Q, usize>,
    pub atoms: Vec<Atom>,
    atom_index: BTreeMap<Atom, usize>,
}

impl Builder {
    pub fn new() -> Builder {
        Builder::default()
    }

    pub fn center(&mut self, c: &Q) -> usize {
        if let Some(i) = self.center_index.get(c) {
            return *i;
        }
        self.centers.push(c.clone());
        self.center_index.insert(c.clone(), self.centers.len() - 1);
        self.centers.len() - 1
    }

    pub fn d(&mut self, c: &Q) -> Term {
        Term::var(Var::D(self.center(c)))
    }

    pub fn dist(&mut self, c: &Q) -> Term {
        Term::var(Var::Dist(self.center(c)))
    }

    pub fn r(&self) -> Term {
        Term::var(Var::R)
    }

    pub fn atom(&mut self, lhs: Term, rel: Rel, rhs: Term) -> Formula {
        if lhs.is_const() && rhs.is_const() {
            return if rel.holds(lhs.coef.cmp(&rhs.coef)) { Formula::True } else { Formula::False };
        }
        let a = Atom { lhs, rel, rhs };
        if let Some(i) = self.atom_index.get(&a) {
            return Formula::Atom(*i);
        }
        self.atoms.push(a.clone());
        self.atom_index.insert(a, self.atoms.len() - 1);
        Formula::Atom(self.atoms.len() - 1)
    }

    pub fn lt(&mut self, a: Term, b: Term) -> Formula {
        self.atom(a, Rel::Lt, b)
    }

    pub fn le(&mut self, a: Term, b: Term) -> Formula {
        self.atom(a, Rel::Le, b)
    }

    pub fn eq(&mut self, a: Term, b: Term) -> Formula {
        self.atom(a, Rel::Eq, b)
    }

    pub fn gt(&mut self, a: Term, b: Term) -> Formula {
        self.atom(b, Rel::Lt, a)
    }

    pub fn ge(&mut self, a: Term, b: Term) -> Formula {
        self.atom(b, Rel::Le, a)
    }

    /// Truth values of every interned atom at a point.
    pub fn truths_at(&self, x: &BPoint, field: Field) -> Vec<bool> {
        let env = point_env(x, &self.centers, field);
        self.atoms.iter().map(|a| a.eval(&env)).collect()
    }
}

pub fn point_env<'a>(x: &'a BPoint, centers: &'a [Q], field: Field) -> impl Fn(Var) -> Radius + 'a {
    move |v| match v {
        Var::D(i) => x.dist_to(&centers[i], field),
        Var::Dist(i) => field.dist(&x.center, &centers[i]),
        Var::R => x.radius.clone(),
    }
}
