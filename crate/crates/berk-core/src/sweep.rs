//! Cell decomposition of `B` adapted to a finite set of centers and atoms.
//!
//! The hull of the centers splits `B` into nodes, hull edges `η(c, t)`,
//! off-hull regions hanging at nodes, and off-hull regions hanging along
//! edges. On each region every atom becomes a condition on `(t, r)` of the
//! form `r ⋈ ρ t^g` or `t ⋈ t*`, so truth is constant on the strata cut out
//! by these curves. One exact sample per stratum decides it.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Zero};

use crate::bline::{span_tree, BPoint};
use crate::bradial::BasicRadial;
use crate::formula::{Atom, Rel, Term, Var};
use crate::valuation::{mid, sign, Field, Monomial, Radius, Q};

#[derive(Clone, Debug)]
enum Val {
    Const(Radius),
    T,
    R,
}

#[derive(Clone, Debug)]
struct LocalTerm {
    coef: Radius,
    gt: Q,
    gr: Q,
}

impl LocalTerm {
    fn at(&self, tau: &Q, r_zero: bool) -> Radius {
        if self.coef.is_zero() {
            return Radius::Zero;
        }
        if r_zero {
            match sign(&self.gr) {
                Ordering::Greater => return Radius::Zero,
                Ordering::Less => return Radius::Infinity,
                Ordering::Equal => {}
            }
        }
        match &self.coef {
            Radius::Exp(c) => Radius::Exp(c + &self.gt * tau),
            other => other.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RRel {
    Lt,
    Le,
    Eq,
    Gt,
    Ge,
}

impl RRel {
    fn holds(self, pos: usize, bound: usize) -> bool {
        match self {
            RRel::Lt => pos < bound,
            RRel::Le => pos <= bound,
            RRel::Eq => pos == bound,
            RRel::Gt => pos > bound,
            RRel::Ge => pos >= bound,
        }
    }
}

#[derive(Clone, Debug)]
enum LAtom {
    Const(bool),
    /// `(a + g τ) rel 0` with `τ = log_p t`.
    T { a: Q, g: Q, rel: Rel },
    /// `r rel m(t)`.
    R { m: usize, rel: RRel },
}

fn holds_sign(x: &Q, rel: Rel) -> bool {
    rel.holds(sign(x))
}

struct Region {
    atoms: Vec<LAtom>,
    terms: Vec<(LocalTerm, LocalTerm)>,
    monos: Vec<Monomial>,
}

fn localize(term: &Term, val: &dyn Fn(Var) -> Val) -> LocalTerm {
    let mut coef = term.coef.clone();
    let mut gt = Q::zero();
    let mut gr = Q::zero();
    for (v, e) in &term.factors {
        match val(*v) {
            Val::Const(x) => coef = coef.mul_total(&x.pow_total(e)),
            Val::T => gt += e,
            Val::R => gr += e,
        }
    }
    LocalTerm { coef, gt, gr }
}

fn rank(r: &Radius) -> u8 {
    match r {
        Radius::Zero => 0,
        Radius::Exp(_) => 1,
        Radius::Infinity => 2,
    }
}

fn build_region(atoms: &[Atom], val: &dyn Fn(Var) -> Val) -> Region {
    let mut monos: Vec<Monomial> = Vec::new();
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut out = Vec::with_capacity(atoms.len());
    let mut terms = Vec::with_capacity(atoms.len());
    for atom in atoms {
        let l = localize(&atom.lhs, val);
        let r = localize(&atom.rhs, val);
        let la = match (&l.coef, &r.coef) {
            (Radius::Exp(ql), Radius::Exp(qr)) => {
                let a = ql - qr;
                let g = &l.gt - &r.gt;
                let e = &l.gr - &r.gr;
                if e.is_zero() {
                    if g.is_zero() {
                        LAtom::Const(holds_sign(&a, atom.rel))
                    } else {
                        LAtom::T { a, g, rel: atom.rel }
                    }
                } else {
                    let m = Monomial::new(Radius::Exp(-&a / &e), -&g / &e);
                    let pos = e > Q::zero();
                    let rel = match (atom.rel, pos) {
                        (Rel::Lt, true) => RRel::Lt,
                        (Rel::Le, true) => RRel::Le,
                        (Rel::Lt, false) => RRel::Gt,
                        (Rel::Le, false) => RRel::Ge,
                        (Rel::Eq, _) => RRel::Eq,
                    };
                    let idx = *index.entry(m.clone()).or_insert_with(|| {
                        monos.push(m);
                        monos.len() - 1
                    });
                    LAtom::R { m: idx, rel }
                }
            }
            (a, b) => LAtom::Const(atom.rel.holds(rank(a).cmp(&rank(b)))),
        };
        out.push(la);
        terms.push((l, r));
    }
    Region { atoms: out, terms, monos }
}

/// Positions of a one-dimensional slice `0 ≤ r < top`: `0` is `r = 0`,
/// odd positions are open bands, even positions `2k` are the graphs of the
/// `k`-th smallest bound value.
struct Slice {
    values: Vec<Q>,
    pos: Vec<usize>,
}

impl Slice {
    fn new(monos: &[Monomial], tau: &Q, top: Option<&Q>) -> Slice {
        let exps: Vec<Q> = monos.iter().map(|m| m.exp_at(tau).expect("finite monomial")).collect();
        let mut values: Vec<Q> = exps.iter().filter(|v| top.is_none_or(|t| *v < t)).cloned().collect();
        values.sort();
        values.dedup();
        let top_pos = 2 * values.len() + 2;
        let pos = exps
            .iter()
            .map(|v| match values.binary_search(v) {
                Ok(i) => 2 * (i + 1),
                Err(_) => top_pos,
            })
            .collect();
        Slice { values, pos }
    }

    fn len(&self) -> usize {
        2 * self.values.len() + 2
    }

    fn top(&self) -> usize {
        self.len()
    }
}

struct Ctx<'a> {
    atoms: &'a [Atom],
    pred: &'a dyn Fn(&[bool]) -> bool,
    stop_early: bool,
    found: bool,
}

impl Ctx<'_> {
    fn check(&mut self, truths: &[bool]) -> bool {
        let t = (self.pred)(truths);
        if t {
            self.found = true;
        }
        t
    }

    fn done(&self) -> bool {
        self.stop_early && self.found
    }

    /// Truth of each position of a slice at a fixed `τ`.
    fn slice_truth(&mut self, reg: &Region, sl: &Slice, tau: &Q) -> Vec<bool> {
        let mut base = vec![false; reg.atoms.len()];
        for (i, la) in reg.atoms.iter().enumerate() {
            base[i] = match la {
                LAtom::Const(b) => *b,
                LAtom::T { a, g, rel } => holds_sign(&(a + g * tau), *rel),
                LAtom::R { .. } => false,
            };
        }
        let mut out = Vec::with_capacity(sl.len());
        let mut truths = base.clone();
        for (i, (l, r)) in reg.terms.iter().enumerate() {
            truths[i] = self.atoms[i].rel.holds(l.at(tau, true).cmp(&r.at(tau, true)));
        }
        out.push(self.check(&truths));
        for p in 1..sl.len() {
            let mut truths = base.clone();
            for (i, la) in reg.atoms.iter().enumerate() {
                if let LAtom::R { m, rel } = la {
                    truths[i] = rel.holds(p, sl.pos[*m]);
                }
            }
            out.push(self.check(&truths));
            if self.done() {
                break;
            }
        }
        out.resize(sl.len(), false);
        out
    }
}

fn direct_truths(atoms: &[Atom], env: &dyn Fn(Var) -> Radius) -> Vec<bool> {
    atoms.iter().map(|a| a.eval(env)).collect()
}

/// Breakpoints strictly inside `(lo, hi)` in exponent space, with `None` for `∓∞`.
fn sorted_inside(mut pts: Vec<Q>, lo: &Option<Q>, hi: &Option<Q>) -> Vec<Q> {
    pts.retain(|x| lo.as_ref().is_none_or(|l| x > l) && hi.as_ref().is_none_or(|h| x < h));
    pts.sort();
    pts.dedup();
    pts
}

fn sample(lo: &Option<Q>, hi: &Option<Q>) -> Q {
    match (lo, hi) {
        (Some(a), Some(b)) => mid(a, b),
        (None, Some(b)) => b - Q::one(),
        (Some(a), None) => a + Q::one(),
        (None, None) => Q::zero(),
    }
}

fn to_radius_lo(x: &Option<Q>) -> Radius {
    x.clone().map(Radius::Exp).unwrap_or(Radius::Zero)
}

fn to_radius_hi(x: &Option<Q>) -> Radius {
    x.clone().map(Radius::Exp).unwrap_or(Radius::Infinity)
}

fn exp_of(r: &Radius) -> Option<Q> {
    r.exponent().cloned()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Desc {
    Graph(Monomial),
    Band(Monomial, Monomial),
}

/// Runs of true positions, split into level sets and open bands.
enum Run {
    Level(usize),
    Band(usize, usize),
}

fn runs(truth: &[bool]) -> Vec<Run> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < truth.len() {
        if !truth[i] {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < truth.len() && truth[j + 1] {
            j += 1;
        }
        let (mut a, mut b) = (i, j);
        if a % 2 == 0 {
            out.push(Run::Level(a));
            a += 1;
        }
        if b % 2 == 0 && b >= a {
            out.push(Run::Level(b));
            b -= 1;
        }
        if a <= b {
            out.push(Run::Band(a, b));
        }
        i = j + 1;
    }
    out
}

struct Node {
    c: usize,
    r: Radius,
    parent: Option<usize>,
    children: Vec<usize>,
}

#[derive(Clone, Debug)]
struct HullRun {
    c: usize,
    lo: Radius,
    lo_incl: bool,
    hi: Radius,
    hi_incl: bool,
    /// Starts at the lower end of the edge (exclusive).
    from_bottom: bool,
    /// Reaches the upper end of the edge (exclusive).
    to_top: bool,
}

pub(crate) struct Outcome {
    pub nonempty: bool,
    pub pieces: Vec<BasicRadial>,
}

pub(crate) fn decompose(
    field: Field,
    centers: &[Q],
    atoms: &[Atom],
    pred: &dyn Fn(&[bool]) -> bool,
    stop_early: bool,
) -> Outcome {
    let owned;
    let centers: &[Q] = if centers.is_empty() {
        owned = vec![Q::zero()];
        &owned
    } else {
        centers
    };
    let pts: Vec<BPoint> = centers.iter().map(|c| BPoint::rigid(c.clone())).collect();
    let tree = span_tree(&pts, field).expect("nonempty");
    let nodes: Vec<Node> = (0..tree.nodes.len())
        .map(|i| Node {
            c: centers.iter().position(|c| *c == tree.nodes[i].center).expect("node center"),
            r: tree.nodes[i].radius.clone(),
            parent: tree.parent[i],
            children: tree.children[i].clone(),
        })
        .collect();
    let n = centers.len();
    let dist: Vec<Vec<Radius>> =
        (0..n).map(|i| (0..n).map(|j| field.dist(&centers[i], &centers[j])).collect()).collect();
    let mut ctx = Ctx { atoms, pred, stop_early, found: false };
    let mut pieces: Vec<BasicRadial> = Vec::new();
    let mut hull: Vec<Vec<HullRun>> = vec![Vec::new(); nodes.len()];
    let mut node_true = vec![false; nodes.len()];

    for (ni, node) in nodes.iter().enumerate() {
        let cn = node.c;
        let rn = node.r.clone();
        let up = node.parent.map(|p| nodes[p].r.clone()).unwrap_or(Radius::Infinity);
        let in_sub = |j: usize| dist[cn][j] <= rn;

        // the node itself
        {
            let x = BPoint { center: centers[cn].clone(), radius: rn.clone() };
            let env = crate::formula::point_env(&x, centers, field);
            let t = direct_truths(atoms, &env);
            node_true[ni] = ctx.check(&t);
            if ctx.done() {
                return Outcome { nonempty: true, pieces };
            }
        }

        // hull edge η(c, t), t ∈ (rn, up)
        {
            let val = |v: Var| match v {
                Var::D(j) if in_sub(j) => Val::T,
                Var::D(j) | Var::Dist(j) => Val::Const(dist[cn][j].clone()),
                Var::R => Val::T,
            };
            let reg = build_region(atoms, &val);
            let lo = exp_of(&rn);
            let hi = exp_of(&up);
            let mut bps = Vec::new();
            for la in &reg.atoms {
                if let LAtom::T { a, g, .. } = la {
                    bps.push(-a / g);
                }
            }
            let bps = sorted_inside(bps, &lo, &hi);
            let mut strata: Vec<(Option<Q>, Option<Q>, bool)> = Vec::new();
            let mut prev = lo.clone();
            for b in bps.iter() {
                strata.push((prev.clone(), Some(b.clone()), false));
                strata.push((Some(b.clone()), Some(b.clone()), true));
                prev = Some(b.clone());
            }
            strata.push((prev, hi.clone(), false));
            let mut truth = Vec::with_capacity(strata.len());
            for (a, b, point) in &strata {
                let tau = if *point { a.clone().unwrap() } else { sample(a, b) };
                let ts: Vec<bool> = reg
                    .atoms
                    .iter()
                    .map(|la| match la {
                        LAtom::Const(b) => *b,
                        LAtom::T { a, g, rel } => holds_sign(&(a + g * &tau), *rel),
                        LAtom::R { .. } => unreachable!("no r on the hull"),
                    })
                    .collect();
                truth.push(ctx.check(&ts));
                if ctx.done() {
                    return Outcome { nonempty: true, pieces };
                }
            }
            let last = strata.len() - 1;
            let mut i = 0;
            while i < strata.len() {
                if !truth[i] {
                    i += 1;
                    continue;
                }
                let mut j = i;
                while j + 1 < strata.len() && truth[j + 1] {
                    j += 1;
                }
                let (lo_r, lo_incl) = if strata[i].2 {
                    (Radius::Exp(strata[i].0.clone().unwrap()), true)
                } else {
                    (to_radius_lo(&strata[i].0), false)
                };
                let (hi_r, hi_incl) = if strata[j].2 {
                    (Radius::Exp(strata[j].0.clone().unwrap()), true)
                } else {
                    (to_radius_hi(&strata[j].1), false)
                };
                hull[ni].push(HullRun {
                    c: cn,
                    lo: lo_r,
                    lo_incl,
                    hi: hi_r,
                    hi_incl,
                    from_bottom: i == 0,
                    to_top: j == last,
                });
                i = j + 1;
            }
        }

        // off-hull at the node: D constant, r ∈ [0, rn)
        if !rn.is_zero() {
            let val = |v: Var| match v {
                Var::D(j) | Var::Dist(j) => Val::Const(dist[cn][j].clone().max(rn.clone())),
                Var::R => Val::R,
            };
            let reg = build_region(atoms, &val);
            let tau = Q::zero();
            let sl = Slice::new(&reg.monos, &tau, rn.exponent());
            let truth = ctx.slice_truth(&reg, &sl, &tau);
            if ctx.done() {
                return Outcome { nonempty: true, pieces };
            }
            let holes: Vec<Q> = node.children.iter().map(|ch| centers[nodes[*ch].c].clone()).collect();
            emit_disc_runs(&mut pieces, &truth, &sl, &centers[cn], &rn, &holes);
        }

        // off-hull along the edge: t ∈ (rn, up), r ∈ [0, t)
        {
            let val = |v: Var| match v {
                Var::D(j) | Var::Dist(j) if in_sub(j) => Val::T,
                Var::D(j) | Var::Dist(j) => Val::Const(dist[cn][j].clone()),
                Var::R => Val::R,
            };
            let reg = build_region(atoms, &val);
            let lo = exp_of(&rn);
            let hi = exp_of(&up);
            let mut bps = Vec::new();
            for la in &reg.atoms {
                if let LAtom::T { a, g, .. } = la {
                    bps.push(-a / g);
                }
            }
            let ident = Monomial::ident();
            for (i, m) in reg.monos.iter().enumerate() {
                if let Some(Radius::Exp(x)) = m.crossing(&ident) {
                    bps.push(x);
                }
                for m2 in &reg.monos[i + 1..] {
                    if let Some(Radius::Exp(x)) = m.crossing(m2) {
                        bps.push(x);
                    }
                }
            }
            let bps = sorted_inside(bps, &lo, &hi);
            let c = &centers[cn];
            let mut active: Vec<(Desc, Radius)> = Vec::new();
            let mut bounds: Vec<Option<Q>> = vec![lo.clone()];
            bounds.extend(bps.iter().cloned().map(Some));
            bounds.push(hi.clone());
            for k in 0..bounds.len() - 1 {
                let tau = sample(&bounds[k], &bounds[k + 1]);
                let sl = Slice::new(&reg.monos, &tau, Some(&tau));
                let truth = ctx.slice_truth(&reg, &sl, &tau);
                if ctx.done() {
                    return Outcome { nonempty: true, pieces };
                }
                let descs = descriptors(&truth, &sl, &reg.monos);
                if k == 0 {
                    active = descs.into_iter().map(|d| (d, to_radius_lo(&bounds[0]))).collect();
                    continue;
                }
                let u = bounds[k].clone().unwrap();
                let ur = Radius::Exp(u.clone());
                let ssl = Slice::new(&reg.monos, &u, Some(&u));
                let mut struth = ctx.slice_truth(&reg, &ssl, &u);
                if ctx.done() {
                    return Outcome { nonempty: true, pieces };
                }
                let mut next: Vec<(Desc, Radius)> = Vec::new();
                for (d, start) in active.drain(..) {
                    if descs.contains(&d) && consume(&d, &ssl, &reg.monos, &mut struth) {
                        next.push((d, start));
                    } else {
                        pieces.push(desc_piece(c, &d, start, ur.clone()));
                    }
                }
                for d in descs {
                    if !next.iter().any(|(e, _)| *e == d) {
                        next.push((d, ur.clone()));
                    }
                }
                active = next;
                emit_disc_runs(&mut pieces, &struth, &ssl, c, &ur, &[c.clone()]);
            }
            for (d, start) in active {
                pieces.push(desc_piece(c, &d, start, to_radius_hi(&hi)));
            }
        }
    }

    // glue hull runs through true nodes
    let order: Vec<usize> = {
        let mut o: Vec<usize> = (0..nodes.len()).collect();
        o.sort_by(|a, b| nodes[*a].r.cmp(&nodes[*b].r));
        o
    };
    let mut consumed = vec![false; nodes.len()];
    for &ni in &order {
        if !node_true[ni] || nodes[ni].r.is_zero() {
            continue;
        }
        let Some(up_i) = hull[ni].iter().position(|h| h.from_bottom) else { continue };
        let child = nodes[ni].children.iter().find_map(|ch| {
            hull[*ch].iter().position(|h| h.to_top).map(|k| (*ch, k))
        });
        let Some((ch, k)) = child else { continue };
        let below = hull[ch].remove(k);
        let above = &mut hull[ni][up_i];
        above.c = below.c;
        above.lo = below.lo;
        above.lo_incl = below.lo_incl;
        above.from_bottom = below.from_bottom;
        consumed[ni] = true;
    }
    for (ni, node) in nodes.iter().enumerate() {
        if node_true[ni] && !consumed[ni] {
            pieces.push(BasicRadial::R0 { a: centers[node.c].clone(), s: node.r.clone() });
        }
    }
    for runs in hull {
        for h in runs {
            let a = centers[h.c].clone();
            if h.lo == h.hi {
                pieces.push(BasicRadial::R0 { a, s: h.lo });
                continue;
            }
            if h.lo_incl {
                pieces.push(BasicRadial::R0 { a: a.clone(), s: h.lo.clone() });
            }
            if h.hi_incl {
                pieces.push(BasicRadial::R0 { a: a.clone(), s: h.hi.clone() });
            }
            pieces.push(BasicRadial::R1 { a, s1: h.lo, s2: h.hi });
        }
    }
    pieces.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()).then_with(|| a.cmp(b)));
    Outcome { nonempty: ctx.found, pieces }
}

fn level_value(sl: &Slice, p: usize) -> Radius {
    if p == 0 {
        Radius::Zero
    } else {
        Radius::Exp(sl.values[p / 2 - 1].clone())
    }
}

fn emit_disc_runs(out: &mut Vec<BasicRadial>, truth: &[bool], sl: &Slice, a: &Q, s: &Radius, holes: &[Q]) {
    for run in runs(truth) {
        match run {
            Run::Level(p) => out.push(BasicRadial::R4 {
                a: a.clone(),
                s: s.clone(),
                holes: holes.to_vec(),
                s1: level_value(sl, p),
            }),
            Run::Band(i, j) => {
                let s1 = level_value(sl, i - 1);
                let s2 = if j + 1 >= sl.len() { s.clone() } else { level_value(sl, j + 1) };
                out.push(BasicRadial::R5 { a: a.clone(), s: s.clone(), holes: holes.to_vec(), s1, s2 });
            }
        }
    }
}

fn mono_at(sl: &Slice, monos: &[Monomial], p: usize) -> Monomial {
    if p == 0 {
        return Monomial::zero();
    }
    if p >= sl.top() {
        return Monomial::ident();
    }
    // distinct monomials never tie inside an open interval
    let k = sl.pos.iter().position(|q| *q == p).expect("position has a monomial");
    monos[k].clone()
}

fn descriptors(truth: &[bool], sl: &Slice, monos: &[Monomial]) -> Vec<Desc> {
    runs(truth)
        .into_iter()
        .map(|r| match r {
            Run::Level(p) => Desc::Graph(mono_at(sl, monos, p)),
            Run::Band(i, j) => Desc::Band(mono_at(sl, monos, i - 1), mono_at(sl, monos, j + 1)),
        })
        .collect()
}

fn mono_pos(m: &Monomial, sl: &Slice, monos: &[Monomial]) -> usize {
    if m.rho.is_zero() {
        return 0;
    }
    if *m == Monomial::ident() {
        return sl.top();
    }
    monos.iter().position(|x| x == m).map(|k| sl.pos[k]).unwrap_or(sl.top())
}

/// Marks the positions a descriptor occupies in a slice; fails unless all are true.
fn consume(d: &Desc, sl: &Slice, monos: &[Monomial], truth: &mut [bool]) -> bool {
    let range = match d {
        Desc::Graph(m) => {
            let p = mono_pos(m, sl, monos);
            if p >= sl.top() {
                return false;
            }
            p..p + 1
        }
        Desc::Band(lo, hi) => {
            let a = mono_pos(lo, sl, monos);
            let b = mono_pos(hi, sl, monos);
            if a >= b {
                return true;
            }
            a + 1..b
        }
    };
    if range.clone().any(|p| p >= truth.len() || !truth[p]) {
        return false;
    }
    for p in range {
        truth[p] = false;
    }
    true
}

fn desc_piece(a: &Q, d: &Desc, s1: Radius, s2: Radius) -> BasicRadial {
    match d {
        Desc::Graph(m) => BasicRadial::R2 { a: a.clone(), s1, s2, rho1: m.rho.clone(), g1: m.g.clone() },
        Desc::Band(lo, hi) => BasicRadial::R3 {
            a: a.clone(),
            s1,
            s2,
            rho1: lo.rho.clone(),
            g1: lo.g.clone(),
            rho2: hi.rho.clone(),
            g2: hi.g.clone(),
        },
    }
}
