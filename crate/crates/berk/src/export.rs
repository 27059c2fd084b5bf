//! DOT and CSV writers.

use std::fmt::Write;

use berk_core::facade::SkeletonGraph;
use berk_core::valuation::q;
use berk_core::{BPoint, DiscTree, Radius};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn label(x: &BPoint) -> String {
    let r = match &x.radius {
        Radius::Zero => "0".to_string(),
        Radius::Infinity => "∞".to_string(),
        Radius::Exp(q) => format!("p^{}", q),
    };
    format!("η({}, {})", x.center, r)
}

fn quote(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn skeleton_dot(g: &SkeletonGraph) -> String {
    let mut s = String::from("graph skeleton {\n");
    for (i, v) in g.vertices.iter().enumerate() {
        writeln!(s, "  v{i} [label=\"{}\"];", quote(&label(v))).unwrap();
    }
    let mut rays = 0;
    for (i, e) in g.edges.iter().enumerate() {
        let to = match e.to {
            Some(t) => format!("v{t}"),
            None => {
                let name = format!("inf{rays}");
                rays += 1;
                writeln!(s, "  {name} [label=\"∞\", shape=point];").unwrap();
                name
            }
        };
        writeln!(s, "  v{} -- {to} [label=\"e{i}\"];", e.from).unwrap();
    }
    s.push_str("}\n");
    s
}

pub fn tree_dot(t: &DiscTree) -> String {
    let mut s = String::from("digraph discs {\n");
    for (i, v) in t.nodes.iter().enumerate() {
        writeln!(s, "  n{i} [label=\"{}\"];", quote(&label(v))).unwrap();
    }
    for (i, p) in t.parent.iter().enumerate() {
        if let Some(p) = p {
            writeln!(s, "  n{p} -> n{i};").unwrap();
        }
    }
    s.push_str("}\n");
    s
}

/// The 32×32 lattice `a = (i - 16)/8`, `r = p^((j - 16)/4)`.
pub fn lattice() -> Vec<BPoint> {
    let mut out = Vec::new();
    for i in 0..32i64 {
        for j in 0..32i64 {
            let a = q(i - 16, 8);
            out.push(BPoint { center: a, radius: Radius::exp(j - 16, 4) });
        }
    }
    out
}

/// `n` points `η(m/2^j, p^(k/4))` drawn from a seeded generator.
pub fn random_points(n: usize, seed: u64) -> Vec<BPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let a = q(rng.gen_range(-64..=64), 1 << rng.gen_range(0..4));
            let r = if rng.gen_ratio(1, 16) { Radius::Zero } else { Radius::exp(rng.gen_range(-24..=24), 4) };
            BPoint { center: a, radius: r }
        })
        .collect()
}

pub fn membership_csv(pts: &[BPoint], member: &dyn Fn(&BPoint) -> bool) -> String {
    let mut s = String::from("a,r,member\n");
    for x in pts {
        let r = match &x.radius {
            Radius::Exp(q) => format!("p^{}/{}", q.numer(), q.denom()),
            Radius::Zero => "zero".into(),
            Radius::Infinity => "inf".into(),
        };
        writeln!(s, "{}/{},{},{}", x.center.numer(), x.center.denom(), r, u8::from(member(x))).unwrap();
    }
    s
}
