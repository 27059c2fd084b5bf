//! The acceptance suite, shared by `berk verify` and the `acceptance` test
//! target. Each criterion reports one line.

use std::fmt;
use std::time::{Duration, Instant};

use berk_core::bradial::{complement_r2, is_partition, normalize, pairwise_disjoint};
use berk_core::curveradial::{delta, delta_inverse, equal_curve, Band, CurvePiece, CurveRadialSet};
use berk_core::facade::{build_facade, compile, map_transport, refine_facade, transport_rules, Case, Domain, Encoded, Facade};
use berk_core::maps::{fiber_count, multiplicity_locus};
use berk_core::newton::{disc_image, polygon_roots, RootVal};
use berk_core::valuation::{q, qi};
use berk_core::{BPoint, BasicRadial, Brick, Expr, Field, Monomial, PPoint, Polynomial, Radius, RationalMap, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {:<28} {:>8.3}s  {}", self.id, self.name, self.elapsed.as_secs_f64(), self.detail)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Config {
        Config { seed: 0 }
    }
}

type Check = fn(&Config) -> (bool, String);

/// `(id, name, wall-clock limit, check)`.
pub const CRITERIA: [(usize, &str, Option<Duration>, Check); 10] = [
    (1, "fig1-golden", Some(Duration::from_secs(1)), fig1),
    (2, "boolean-fuzz", Some(Duration::from_secs(60)), boolean_fuzz),
    (3, "disc-image-oracle", Some(Duration::from_secs(30)), disc_image_oracle),
    (4, "wild-locus", Some(Duration::from_secs(10)), wild_locus),
    (5, "degree-sum", None, degree_sum),
    (6, "facade-round-trip", None, facade_round_trip),
    (7, "refinement-transport", None, refinement_transport),
    (8, "morphism-square", None, morphism_square),
    (9, "delta-bijection", None, delta_bijection),
    (10, "retraction-laws", None, retraction_laws),
];

pub fn run_one(id: usize, cfg: &Config) -> Option<Outcome> {
    let (id, name, limit, check) = *CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (ok, mut detail) = check(cfg);
    let elapsed = start.elapsed();
    let mut passed = ok;
    if let Some(l) = limit {
        if elapsed > l {
            passed = false;
            detail = format!("{detail}; over the {}s limit", l.as_secs());
        }
    }
    Some(Outcome { id, name, passed, detail, elapsed })
}

pub fn run_all(cfg: &Config) -> Vec<Outcome> {
    CRITERIA.iter().filter_map(|c| run_one(c.0, cfg)).collect()
}

fn f2() -> Field {
    Field::new(2).unwrap()
}

fn rng(cfg: &Config, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(1_000_003).wrapping_add(id))
}

fn pt(a: Q, r: Radius) -> BPoint {
    BPoint { center: a, radius: r }
}

fn fail(msg: String) -> (bool, String) {
    (false, msg)
}

fn fig1(_: &Config) -> (bool, String) {
    let f = f2();
    let (a, s1, s2, rho, g) = (qi(0), Radius::one(), Radius::Infinity, Radius::expi(-1), qi(1));
    let x = BasicRadial::R2 { a: a.clone(), s1: s1.clone(), s2: s2.clone(), rho1: rho.clone(), g1: g.clone() };
    let out = normalize(&Expr::compl(Expr::Piece(x.clone())), f);
    let n = out.pieces.len();
    let disjoint = pairwise_disjoint(&out.pieces, f);
    let mut parts = vec![Expr::Piece(x)];
    parts.extend(out.pieces.iter().cloned().map(Expr::Piece));
    let partition = is_partition(&parts, f);
    let closed = complement_r2(&a, &s1, &s2, &rho, &g).len();
    let detail = format!("pieces={n} (want 10), closed-form={closed}, disjoint={disjoint}, X ⊔ pieces = B: {partition}");
    (n == 10 && disjoint && partition, detail)
}

fn lattice_center(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-16..=16), 1 << rng.gen_range(0..=3))
}

fn sixth(rng: &mut ChaCha8Rng) -> Radius {
    Radius::exp(rng.gen_range(-36..=36), 6)
}

fn any_radius(rng: &mut ChaCha8Rng) -> Radius {
    match rng.gen_range(0..10) {
        0 => Radius::Zero,
        1 => Radius::Infinity,
        _ => sixth(rng),
    }
}

fn fin_radius(rng: &mut ChaCha8Rng) -> Radius {
    if rng.gen_ratio(1, 8) {
        Radius::Zero
    } else {
        sixth(rng)
    }
}

fn mono(rng: &mut ChaCha8Rng) -> (Radius, Q) {
    let rho = if rng.gen_ratio(1, 6) { Radius::Zero } else { Radius::exp(rng.gen_range(-12..=0), 6) };
    (rho, q(rng.gen_range(-6..=12), 6))
}

fn rand_piece(rng: &mut ChaCha8Rng) -> BasicRadial {
    let a = lattice_center(rng);
    match rng.gen_range(0..8) {
        0 => BasicRadial::R0 { a, s: fin_radius(rng) },
        1 => BasicRadial::R1 { a, s1: any_radius(rng), s2: any_radius(rng) },
        2 => {
            let (rho1, g1) = mono(rng);
            BasicRadial::R2 { a, s1: any_radius(rng), s2: any_radius(rng), rho1, g1 }
        }
        3 => {
            let ((rho1, g1), (rho2, g2)) = (mono(rng), mono(rng));
            BasicRadial::R3 { a, s1: any_radius(rng), s2: any_radius(rng), rho1, g1, rho2, g2 }
        }
        4 => {
            let holes = (0..rng.gen_range(0..2)).map(|_| lattice_center(rng)).collect();
            BasicRadial::R4 { a, s: fin_radius(rng), holes, s1: fin_radius(rng) }
        }
        5 => {
            let holes = (0..rng.gen_range(0..2)).map(|_| lattice_center(rng)).collect();
            BasicRadial::R5 { a, s: fin_radius(rng), holes, s1: any_radius(rng), s2: any_radius(rng) }
        }
        6 => BasicRadial::R6 { a, s: any_radius(rng), s1: fin_radius(rng) },
        _ => BasicRadial::R7 { a, s: any_radius(rng), s1: any_radius(rng), s2: any_radius(rng) },
    }
}

fn rand_expr(rng: &mut ChaCha8Rng, leaves: &[BasicRadial], depth: usize) -> Expr {
    if depth == 0 || rng.gen_ratio(1, 3) {
        return Expr::Piece(leaves[rng.gen_range(0..leaves.len())].clone());
    }
    match rng.gen_range(0..4) {
        0 => Expr::union(rand_expr(rng, leaves, depth - 1), rand_expr(rng, leaves, depth - 1)),
        1 => Expr::inter(rand_expr(rng, leaves, depth - 1), rand_expr(rng, leaves, depth - 1)),
        2 => Expr::diff(rand_expr(rng, leaves, depth - 1), rand_expr(rng, leaves, depth - 1)),
        _ => Expr::compl(rand_expr(rng, leaves, depth - 1)),
    }
}

/// Points on the generator lattice, so that boundaries are hit.
fn lattice_point(rng: &mut ChaCha8Rng) -> BPoint {
    let r = if rng.gen_ratio(1, 8) { Radius::Zero } else { sixth(rng) };
    pt(lattice_center(rng), r)
}

fn boolean_fuzz(cfg: &Config) -> (bool, String) {
    let f = f2();
    let mut master = rng(cfg, 2);
    let seeds: Vec<u64> = (0..500).map(|_| master.gen()).collect();
    let failures: Vec<String> = seeds
        .par_iter()
        .filter_map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(*s);
            let leaves: Vec<BasicRadial> = (0..rng.gen_range(1..=4)).map(|_| rand_piece(&mut rng)).collect();
            let e = rand_expr(&mut rng, &leaves, 3);
            let out = normalize(&e, f);
            for _ in 0..200 {
                let x = lattice_point(&mut rng);
                let hits = out.pieces.iter().filter(|p| p.member(&x, f)).count();
                if hits > 1 || (hits == 1) != e.member(&x, f) {
                    return Some(format!("{x} in {e:?}"));
                }
            }
            if !pairwise_disjoint(&out.pieces, f) {
                return Some(format!("overlapping output for {e:?}"));
            }
            None
        })
        .collect();
    match failures.first() {
        None => (true, "500 expressions x 200 points, 0 failures".into()),
        Some(first) => fail(format!("{} failures, first: {first}", failures.len())),
    }
}

fn binom(n: usize, k: usize) -> Q {
    let mut c = qi(1);
    for i in 0..k {
        c = c * qi((n - i) as i64) / qi((i + 1) as i64);
    }
    c
}

/// `max_{i≥1} |c_i| r^i` for the expansion of `h` at `a`, by direct binomial
/// expansion.
fn recentered_radius(h: &Polynomial, a: &Q, r: &Radius, f: Field) -> Radius {
    let cs = h.coeffs();
    let mut best = Radius::Zero;
    for i in 1..cs.len() {
        let mut ci = qi(0);
        let mut apow = qi(1);
        for j in i..cs.len() {
            ci += &cs[j] * binom(j, i) * &apow;
            apow *= a;
        }
        let term = f.abs(&ci).mul_total(&r.pow_total(&qi(i as i64)));
        best = best.max(term);
    }
    best
}

fn disc_image_oracle(cfg: &Config) -> (bool, String) {
    let f = f2();
    let mut rng = rng(cfg, 3);
    for n in 0..100 {
        let deg = rng.gen_range(1..=5);
        let mut cs: Vec<Q> = (0..=deg).map(|_| q(rng.gen_range(-32..=32), rng.gen_range(1..=32))).collect();
        if cs[deg] == qi(0) {
            cs[deg] = qi(1);
        }
        let h = Polynomial::new(cs);
        if h.is_constant() {
            continue;
        }
        let a = q(rng.gen_range(-64..=64), rng.gen_range(1..=16));
        let k = rng.gen_range(-8..=4);
        let r = Radius::expi(k);
        let img = match disc_image(&h, &a, &r, f) {
            Ok(x) => x,
            Err(e) => return fail(format!("polynomial {n}: {e}")),
        };
        let want = recentered_radius(&h, &a, &r, f);
        if img.radius != want {
            return fail(format!("{h} on D({a}, {r}): s = {} but the oracle gives {want}", img.radius));
        }
        let step = Q::from_integer(2.into()).pow(-k as i32);
        for _ in 0..200 {
            let u = q(rng.gen_range(-1000..=1000), 2 * rng.gen_range(0..50) + 1);
            let x = &a + &step * u;
            if f.dist(&h.eval(&x), &img.center) > img.radius {
                return fail(format!("{h}({x}) leaves {img}"));
            }
        }
    }
    (true, "100 polynomials x 200 points, radius matches the recentering oracle".into())
}

fn locus_grid() -> Vec<BPoint> {
    let mut out = Vec::new();
    for m in -16..=16 {
        for k in -12..=12 {
            out.push(pt(q(m, 8), Radius::exp(k, 2)));
        }
    }
    out
}

fn wild_locus(_: &Config) -> (bool, String) {
    use BasicRadial::*;
    let f = f2();
    let line = Brick::B1 { a: qi(0), s: Radius::Infinity };
    let z = || qi(0);
    let skeleton = vec![R0 { a: z(), s: Radius::Zero }, R1 { a: z(), s1: Radius::Zero, s2: Radius::Infinity }];
    let mut t2_want = skeleton.clone();
    t2_want.push(R2 { a: z(), s1: Radius::Zero, s2: Radius::Infinity, rho1: Radius::expi(-1), g1: qi(1) });
    t2_want.push(R3 {
        a: z(),
        s1: Radius::Zero,
        s2: Radius::Infinity,
        rho1: Radius::expi(-1),
        g1: qi(1),
        rho2: Radius::one(),
        g2: qi(1),
    });
    let cases = [(vec![0, 0, 1], 2, t2_want), (vec![0, 0, 0, 1], 3, skeleton)];
    let mut checked = 0;
    for (cs, d, want) in cases {
        let h = RationalMap::polynomial(Polynomial::from_ints(&cs)).unwrap();
        let rep = match multiplicity_locus(&h, d, &line, f) {
            Ok(r) => r,
            Err(e) => return fail(format!("{h}: {e}")),
        };
        if rep.residual {
            return fail(format!("{h}: residual mode"));
        }
        let want = Expr::Set(berk_core::RadialSet::new(want));
        if !berk_core::bradial::equal_sets(&Expr::Set(rep.locus.clone()), &want, f) {
            return fail(format!("{h}: locus differs symbolically"));
        }
        for x in locus_grid() {
            let deg = match h.local_degree(&x.clone().into(), f) {
                Ok(v) => v,
                Err(e) => return fail(format!("{h} at {x}: {e}")),
            };
            if rep.locus.member(&x, f) != (deg == d) {
                return fail(format!("{h} at {x}: degree {deg}"));
            }
            checked += 1;
        }
    }
    (true, format!("T^2 and T^3 loci equal the expected sets; {checked} grid points agree"))
}

/// Every root of `h - h(a)` is rational or lies in `D(a, r)`, so the whole
/// fiber over `h(η(a, r))` has rational centers.
fn rational_root_data(h: &Polynomial, a: &Q, r: &Radius, f: Field) -> bool {
    let (_, _, rest) = h.sub(&Polynomial::constant(h.eval(a))).split_rational();
    if rest.is_constant() {
        return true;
    }
    match polygon_roots(&rest.shift(a), f) {
        Ok(poly) => poly.root_valuations.iter().all(|v| match v {
            RootVal::Finite(v) => Radius::Exp(-v.clone()) <= *r,
            RootVal::Infinite => true,
        }),
        Err(_) => false,
    }
}

fn degree_sum(cfg: &Config) -> (bool, String) {
    let mut rng = rng(cfg, 5);
    let mut total = 0;
    for p in [2, 3] {
        let f = Field::new(p).unwrap();
        for cs in [vec![0, 0, 1], vec![-1, 0, 1], vec![0, 0, 0, 1]] {
            let poly = Polynomial::from_ints(&cs);
            let h = RationalMap::polynomial(poly.clone()).unwrap();
            let mut done = 0;
            for _ in 0..20_000 {
                if done == 50 {
                    break;
                }
                let a = q(rng.gen_range(-24..=24), rng.gen_range(1..=6));
                let r = if rng.gen_ratio(1, 6) { Radius::Zero } else { Radius::exp(rng.gen_range(-8..=6), 2) };
                if !rational_root_data(&poly, &a, &r, f) {
                    continue;
                }
                let x = pt(a.clone(), r);
                let y = match h.pushforward(&x.clone().into(), f) {
                    Ok(PPoint::Aff(y)) => y,
                    other => return fail(format!("{h} at {x}: {other:?}")),
                };
                let b = poly.eval(&a);
                let y = pt(b.clone(), y.radius);
                let roots: Vec<Q> = poly.sub(&Polynomial::constant(b)).rational_roots().into_iter().map(|(r, _)| r).collect();
                match fiber_count(&h, &y, &roots, f) {
                    Ok(fib) => {
                        let s: usize = fib.degrees.iter().sum();
                        if s != h.degree() {
                            return fail(format!("p={p} {h} over {y}: degrees sum to {s}"));
                        }
                    }
                    Err(e) => return fail(format!("p={p} {h} over {y}: {e}")),
                }
                done += 1;
            }
            if done < 50 {
                return fail(format!("p={p} {h}: only {done} fibers with rational root data drawn"));
            }
            total += done;
        }
    }
    (true, format!("{total} fibers, every degree sum equals deg h"))
}

pub fn unit_disc() -> Domain {
    Domain::Disc { center: qi(0), radius: Radius::one() }
}

/// The three fixtures with `S = {η(0, 1)}`: closed unit disc, affine line,
/// projective line.
pub fn fixtures() -> Vec<Facade> {
    [unit_disc(), Domain::Affine, Domain::Projective]
        .iter()
        .map(|d| build_facade(d, &[BPoint::gauss()], f2()).expect("fixture"))
        .collect()
}

pub fn sample(rng: &mut ChaCha8Rng, dom: &Domain, f: Field) -> PPoint {
    loop {
        if *dom == Domain::Projective && rng.gen_ratio(1, 40) {
            return PPoint::Inf;
        }
        let j = rng.gen_range(0..5);
        let a = q(rng.gen_range(-64..=64), 1 << j) * qi(rng.gen_range(1..4)) / qi(rng.gen_range(1..4));
        let r = if rng.gen_ratio(1, 8) { Radius::Zero } else { Radius::exp(rng.gen_range(-14..=10), 2) };
        let y = PPoint::Aff(pt(a, r));
        if dom.contains(&y, f) {
            return y;
        }
    }
}

fn facade_round_trip(cfg: &Config) -> (bool, String) {
    let f = f2();
    let mut rng = rng(cfg, 6);
    let mut tubes = 0;
    for fa in fixtures() {
        for _ in 0..1000 {
            let y = sample(&mut rng, &fa.domain, f);
            let e = match fa.encode(&y) {
                Ok(e) => e,
                Err(err) => return fail(format!("encode {y}: {err}")),
            };
            if let Encoded::Tube(_, a, w) = &e {
                let e2 = w.radius < Radius::one() && f.abs(&w.center) <= Radius::one() && f.residue(&w.center).ok() == Some(*a);
                if !e2 {
                    return fail(format!("{y} -> {e} breaks red(η) = α"));
                }
                tubes += 1;
            }
            match fa.decode(&e) {
                Ok(back) if back.same(&y, f) => {}
                other => return fail(format!("{y} -> {e} -> {other:?}")),
            }
        }
    }
    (true, format!("3 fixtures x 1000 points, {tubes} tube values satisfy red(η) = α"))
}

fn refinement_transport(cfg: &Config) -> (bool, String) {
    let f = f2();
    let d = &fixtures()[0];
    let fine = match refine_facade(d, &[pt(qi(0), Radius::expi(-1))]) {
        Ok(x) => x,
        Err(e) => return fail(e.to_string()),
    };
    let rules = match transport_rules(d, &fine) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let mut rng = rng(cfg, 7);
    let mut counts = [0usize; 3];
    for _ in 0..1000 {
        let y = sample(&mut rng, &d.domain, f);
        let e = d.encode(&y).unwrap();
        let want = fine.encode(&y).unwrap();
        let (got, case) = match rules.apply(d, &fine, &e) {
            Ok(x) => x,
            Err(err) => return fail(format!("{y}: {err}")),
        };
        if !got.same(&want, f) {
            return fail(format!("{y}: transported {got}, encoded {want}"));
        }
        // residue class 0 of the old tube is the one that changes
        let expected = match &e {
            Encoded::Tube(_, 0, w) if w.radius == Radius::expi(-1) && f.abs(&w.center) <= Radius::expi(-1) => Case::Vertex,
            Encoded::Tube(_, 0, _) => Case::Chart,
            _ => Case::Identity,
        };
        if case != expected {
            return fail(format!("{y}: case {case:?}, expected {expected:?}"));
        }
        counts[case as usize] += 1;
    }
    (true, format!("1000 points agree; identity/vertex/chart = {}/{}/{}", counts[0], counts[1], counts[2]))
}

fn morphism_square(cfg: &Config) -> (bool, String) {
    let f = f2();
    let h = RationalMap::polynomial(Polynomial::from_ints(&[0, 0, 1])).unwrap();
    let d = &fixtures()[0];
    let mut rng = rng(cfg, 8);
    for _ in 0..1000 {
        let y = sample(&mut rng, &d.domain, f);
        let lhs = h.pushforward(&y, f).and_then(|z| d.encode(&z));
        let rhs = d.encode(&y).and_then(|e| map_transport(&h, d, d, &e));
        match (lhs, rhs) {
            (Ok(a), Ok(b)) if a.same(&b, f) => {}
            (a, b) => return fail(format!("{y}: {a:?} vs {b:?}")),
        }
    }
    let a = &fixtures()[1];
    let c = match compile(&h, a, a) {
        Ok(c) => c,
        Err(e) => return fail(e.to_string()),
    };
    let sq = Monomial::new(Radius::one(), qi(2));
    let ok = c.edges.len() == 1 && c.edges[0].pieces.len() == 1 && c.edges[0].pieces[0].2 == sq && c.edges[0].degree == 2;
    if !ok {
        return fail(format!("compiled edge is {:?}", c.edges));
    }
    for k in 1..=10 {
        let t = Radius::exp(k, 3);
        let img = map_transport(&h, a, a, &Encoded::Edge(0, pt(qi(0), t.clone())));
        match img {
            Ok(e) if e.same(&Encoded::Edge(0, pt(qi(0), sq.eval(&t))), f) => {}
            other => return fail(format!("t = {t}: {other:?}")),
        }
    }
    (true, "1000 squares commute; compiled A1 edge is t -> t^2, degree 2, at 10 radii".into())
}

fn rand_rho(rng: &mut ChaCha8Rng) -> Radius {
    if rng.gen_ratio(1, 8) {
        Radius::Zero
    } else {
        Radius::exp(rng.gen_range(-8..=0), 2)
    }
}

fn rand_band(rng: &mut ChaCha8Rng, lo: &Radius, hi: &Radius, pick: &mut dyn FnMut(&mut ChaCha8Rng) -> Radius) -> Band {
    let clamp = |r: Radius| r.max(lo.clone()).min(hi.clone());
    let (mut a, mut b) = (clamp(pick(rng)), clamp(pick(rng)));
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    Band::new(a, rng.gen(), b, rng.gen())
}

pub fn random_curve_set(rng: &mut ChaCha8Rng, fa: &Facade) -> CurveRadialSet {
    let mut pieces = Vec::new();
    for _ in 0..rng.gen_range(0..4) {
        let x = rng.gen_range(0..fa.vertices.len());
        if fa.vertices[x].point.point_type() == 1 {
            pieces.push(CurvePiece::TypeOne { x });
        } else {
            let band = rand_band(rng, &Radius::Zero, &Radius::one(), &mut rand_rho);
            pieces.push(CurvePiece::Vertex { x, band });
        }
    }
    if !fa.edges.is_empty() {
        for _ in 0..rng.gen_range(0..3) {
            let i = rng.gen_range(0..fa.edges.len());
            let e = &fa.edges[i];
            let mid = e.mid().exponent().cloned().unwrap_or_else(|| qi(0));
            let mut pick = |rng: &mut ChaCha8Rng| Radius::Exp(&mid + q(rng.gen_range(-6..=6), 2));
            let span = rand_band(rng, &e.lo, &e.hi, &mut pick);
            let mono = |rng: &mut ChaCha8Rng| Monomial::new(rand_rho(rng), q(rng.gen_range(-2..=2), 2));
            let (f1, f2) = (mono(rng), mono(rng));
            pieces.push(CurvePiece::Edge { edge: i, span, f1, f1_incl: rng.gen(), f2, f2_incl: rng.gen() });
        }
    }
    CurveRadialSet::new(pieces)
}

fn delta_bijection(cfg: &Config) -> (bool, String) {
    let f = f2();
    let mut rng = rng(cfg, 9);
    for fa in fixtures() {
        for _ in 0..100 {
            let a = random_curve_set(&mut rng, &fa);
            let back = match delta(&fa, &a).and_then(|d| Ok((delta_inverse(&fa, &d)?, d))) {
                Ok(x) => x,
                Err(e) => return fail(format!("{a:?}: {e}")),
            };
            let (back, d) = back;
            match equal_curve(&fa, &a, &back) {
                Ok(true) => {}
                other => return fail(format!("{a:?} round trips to {back:?} ({other:?})")),
            }
            for _ in 0..200 {
                let y = sample(&mut rng, &fa.domain, f);
                let e = fa.encode(&y).unwrap();
                if a.member(&fa, &y).unwrap() != d.member(&fa, &e) {
                    return fail(format!("{y} in {a:?}"));
                }
            }
        }
    }
    (true, "3 fixtures x 100 sets round trip; membership commutes on 200 points each".into())
}

fn retraction_laws(cfg: &Config) -> (bool, String) {
    let f = f2();
    let mut rng = rng(cfg, 10);
    for fa in fixtures() {
        for _ in 0..1000 {
            let y = sample(&mut rng, &fa.domain, f);
            let t = match fa.tau(&y) {
                Ok(t) => PPoint::Aff(t),
                Err(e) => return fail(format!("tau {y}: {e}")),
            };
            let ok = fa.on_skeleton(&t).unwrap_or(false)
                && fa.tau(&t).is_ok_and(|tt| t.same(&PPoint::Aff(tt), f))
                && (!fa.on_skeleton(&y).unwrap_or(true) || t.same(&y, f))
                && fa.nu(&Radius::Zero, &y).is_ok_and(|z| z.same(&y, f))
                && fa.nu(&Radius::one(), &y).is_ok_and(|z| fa.on_skeleton(&z).unwrap_or(false));
            if !ok {
                return fail(format!("retraction laws fail at {y} on {:?}", fa.domain));
            }
        }
    }
    (true, "3 fixtures x 1000 points".into())
}
