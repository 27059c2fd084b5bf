use berk_core::curveradial::{
    delta, delta_inverse, equal_curve, is_empty_curve, normalize_curve, refine_away, rho, rho_member, Band, CurveExpr,
    CurvePiece, CurveRadialSet, ZCylinder,
};
use berk_core::facade::{build_facade, Domain, Facade};
use berk_core::valuation::{q, qi};
use berk_core::{BPoint, BasicRadial, Field, Monomial, PPoint, Radius, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f2() -> Field {
    Field::new(2).unwrap()
}

fn pt(a: Q, r: Radius) -> BPoint {
    BPoint::new(a, r).unwrap()
}

fn unit_disc() -> Domain {
    Domain::Disc { center: qi(0), radius: Radius::one() }
}

fn fixtures() -> Vec<(Domain, Facade)> {
    let f = f2();
    let sets = vec![
        (unit_disc(), vec![BPoint::gauss()]),
        (Domain::Affine, vec![BPoint::gauss()]),
        (Domain::Affine, vec![BPoint::gauss(), pt(qi(0), Radius::expi(-2)), pt(qi(1), Radius::Zero)]),
        (Domain::Projective, vec![pt(qi(0), Radius::expi(-2)), pt(qi(1), Radius::expi(-2))]),
    ];
    sets.into_iter().map(|(d, s)| (d.clone(), build_facade(&d, &s, f).unwrap())).collect()
}

fn sample(rng: &mut ChaCha8Rng, dom: &Domain, f: Field) -> PPoint {
    loop {
        if *dom == Domain::Projective && rng.gen_ratio(1, 40) {
            return PPoint::Inf;
        }
        let j = rng.gen_range(0..5);
        let a = q(rng.gen_range(-64..=64), 1 << j) * Q::from_integer(rng.gen_range(1..4).into()) / qi(rng.gen_range(1..4));
        let r = if rng.gen_ratio(1, 8) { Radius::Zero } else { Radius::exp(rng.gen_range(-14..=10), 2) };
        let y = PPoint::Aff(pt(a, r));
        if dom.contains(&y, f) {
            return y;
        }
    }
}

fn rand_rho(rng: &mut ChaCha8Rng) -> Radius {
    if rng.gen_ratio(1, 8) {
        Radius::Zero
    } else {
        Radius::exp(rng.gen_range(-8..=0), 2)
    }
}

fn rand_band(rng: &mut ChaCha8Rng, lo: Radius, hi: Radius, pick: &mut dyn FnMut(&mut ChaCha8Rng) -> Radius) -> Band {
    let mut a = pick(rng).max(lo.clone()).min(hi.clone());
    let mut b = pick(rng).max(lo).min(hi);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    Band::new(a, rng.gen(), b, rng.gen())
}

fn rand_set(rng: &mut ChaCha8Rng, fa: &Facade) -> CurveRadialSet {
    let mut pieces = Vec::new();
    for _ in 0..rng.gen_range(0..4) {
        let x = rng.gen_range(0..fa.vertices.len());
        if fa.vertices[x].point.point_type() == 1 {
            pieces.push(CurvePiece::TypeOne { x });
        } else {
            let band = rand_band(rng, Radius::Zero, Radius::one(), &mut rand_rho);
            pieces.push(CurvePiece::Vertex { x, band });
        }
    }
    if !fa.edges.is_empty() {
        for _ in 0..rng.gen_range(0..3) {
            let i = rng.gen_range(0..fa.edges.len());
            let e = &fa.edges[i];
            let mid = e.mid().exponent().unwrap().clone();
            let mut pick = |rng: &mut ChaCha8Rng| Radius::Exp(mid.clone() + q(rng.gen_range(-6..=6), 2));
            let span = rand_band(rng, e.lo.clone(), e.hi.clone(), &mut pick);
            let mono = |rng: &mut ChaCha8Rng| Monomial::new(rand_rho(rng), q(rng.gen_range(-2..=2), 2));
            let (f1, f2) = (mono(rng), mono(rng));
            pieces.push(CurvePiece::Edge { edge: i, span, f1, f1_incl: rng.gen(), f2, f2_incl: rng.gen() });
        }
    }
    CurveRadialSet::new(pieces)
}

#[test]
fn rho_examples() {
    let f = f2();
    let fa = build_facade(&unit_disc(), &[BPoint::gauss()], f).unwrap();
    let y = PPoint::Aff(pt(qi(3), Radius::expi(-2)));
    assert_eq!(rho(&fa, &fa.encode(&y).unwrap()), Radius::expi(-2));
    assert_eq!(rho(&fa, &fa.encode(&PPoint::Aff(BPoint::gauss())).unwrap()), Radius::one());
    let piece = CurvePiece::Vertex { x: 0, band: Band::new(Radius::expi(-3), false, Radius::expi(-1), true) };
    assert_eq!(rho_member(&fa, &y, &piece).unwrap(), (Radius::expi(-2), true));
    let far = PPoint::Aff(pt(qi(3), Radius::expi(-3)));
    assert_eq!(rho_member(&fa, &far, &piece).unwrap(), (Radius::expi(-3), false));
}

#[test]
fn delta_examples() {
    let f = f2();
    let fa = build_facade(&unit_disc(), &[BPoint::gauss()], f).unwrap();
    let band = Band::new(Radius::expi(-3), false, Radius::expi(-1), true);
    let a = CurveRadialSet::new(vec![CurvePiece::Vertex { x: 0, band: band.clone() }]);
    let d = delta(&fa, &a).unwrap();
    assert_eq!(d.tubes, vec![ZCylinder { x: 0, band, exceptions: vec![] }]);
    assert!(d.vtx2.is_empty() && d.edges.is_empty());
    assert_eq!(delta_inverse(&fa, &d).unwrap(), a);

    let empty = CurveRadialSet::empty();
    let d = delta(&fa, &empty).unwrap();
    assert!(delta_inverse(&fa, &d).unwrap().pieces.is_empty());

    let aff = build_facade(&Domain::Affine, &[BPoint::gauss()], f).unwrap();
    let e = &aff.edges[0];
    let span = Band::open(e.lo.clone(), e.hi.clone());
    let band = CurvePiece::Edge {
        edge: 0,
        span,
        f1: Monomial::new(Radius::expi(-1), qi(1)),
        f1_incl: false,
        f2: Monomial::new(Radius::one(), qi(1)),
        f2_incl: false,
    };
    let a = CurveRadialSet::new(vec![band]);
    let d = delta(&aff, &a).unwrap();
    assert_eq!(d.edges.len(), 1);
    assert!(d.edges[0].1.pieces.iter().any(|p| matches!(p, BasicRadial::R3 { .. })));
    assert!(equal_curve(&aff, &a, &delta_inverse(&aff, &d).unwrap()).unwrap());

    let other = CurveRadialSet::new(vec![CurvePiece::Edge {
        edge: 3,
        span: Band::unit(),
        f1: Monomial::constant(Radius::Zero),
        f1_incl: true,
        f2: Monomial::constant(Radius::one()),
        f2_incl: true,
    }]);
    assert!(delta(&aff, &other).is_err());
}

#[test]
fn boolean_examples() {
    let f = f2();
    let fa = build_facade(&unit_disc(), &[BPoint::gauss()], f).unwrap();
    let a = CurveRadialSet::new(vec![CurvePiece::Vertex {
        x: 0,
        band: Band::new(Radius::expi(-3), false, Radius::expi(-1), true),
    }]);
    let c = normalize_curve(&fa, &CurveExpr::compl(CurveExpr::Set(a.clone()))).unwrap();
    assert_eq!(
        c.pieces,
        vec![
            CurvePiece::Vertex { x: 0, band: Band::new(Radius::Zero, true, Radius::expi(-3), true) },
            CurvePiece::Vertex { x: 0, band: Band::new(Radius::expi(-1), false, Radius::one(), true) },
        ]
    );
    let both = CurveExpr::Inter(vec![CurveExpr::Set(a.clone()), CurveExpr::compl(CurveExpr::Set(a.clone()))]);
    assert!(normalize_curve(&fa, &both).unwrap().pieces.is_empty());
    assert!(!is_empty_curve(&fa, &a).unwrap());
}

#[test]
fn normalized_pieces_are_disjoint() {
    let f = f2();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (dom, fa) in fixtures() {
        for _ in 0..10 {
            let a = rand_set(&mut rng, &fa);
            let b = rand_set(&mut rng, &fa);
            let u = CurveExpr::Union(vec![CurveExpr::Set(a.clone()), CurveExpr::Set(b.clone())]);
            let n = normalize_curve(&fa, &u).unwrap();
            for _ in 0..100 {
                let y = sample(&mut rng, &dom, f);
                let hits = n.pieces.iter().filter(|p| rho_member(&fa, &y, p).unwrap().1).count();
                let want = a.member(&fa, &y).unwrap() || b.member(&fa, &y).unwrap();
                assert!(hits <= 1, "{y} lies in {hits} pieces");
                assert_eq!(hits == 1, want, "{y}");
            }
        }
    }
}

#[test]
fn delta_round_trip_and_membership() {
    let f = f2();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut edge_hits = 0;
    for (dom, fa) in fixtures() {
        for _ in 0..25 {
            let a = rand_set(&mut rng, &fa);
            let d = delta(&fa, &a).unwrap();
            let back = delta_inverse(&fa, &d).unwrap();
            assert!(equal_curve(&fa, &a, &back).unwrap(), "{a:?}");
            for _ in 0..100 {
                let y = sample(&mut rng, &dom, f);
                let e = fa.encode(&y).unwrap();
                let m = a.member(&fa, &y).unwrap();
                assert_eq!(m, d.member(&fa, &e), "{y} in {a:?}");
                if m && matches!(e, berk_core::facade::Encoded::Edge(..)) {
                    edge_hits += 1;
                }
                assert_eq!(m, back.member(&fa, &y).unwrap(), "{y}");
            }
        }
    }
    assert!(edge_hits > 20, "{edge_hits}");
}

#[test]
fn delta_preserves_unions() {
    let f = f2();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (dom, fa) in fixtures() {
        for _ in 0..10 {
            let a = rand_set(&mut rng, &fa);
            let b = rand_set(&mut rng, &fa);
            let mut ab = a.clone();
            ab.pieces.extend(b.pieces.clone());
            let (da, db, dab) = (delta(&fa, &a).unwrap(), delta(&fa, &b).unwrap(), delta(&fa, &ab).unwrap());
            for _ in 0..100 {
                let e = fa.encode(&sample(&mut rng, &dom, f)).unwrap();
                assert_eq!(dab.member(&fa, &e), da.member(&fa, &e) || db.member(&fa, &e));
            }
        }
    }
}

#[test]
fn exceptions_are_refined_away() {
    let f = f2();
    let dom = unit_disc();
    let fa = build_facade(&dom, &[BPoint::gauss()], f).unwrap();
    let a = CurveRadialSet::new(vec![CurvePiece::Vertex { x: 0, band: Band::new(Radius::Zero, true, Radius::one(), false) }]);
    let mut d = delta(&fa, &a).unwrap();
    d.tubes[0].exceptions.push(1);
    assert!(delta_inverse(&fa, &d).is_err());
    let (fine, set) = refine_away(&fa, &d).unwrap();
    assert_eq!(fine.vertices.len(), 2);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..500 {
        let y = sample(&mut rng, &dom, f);
        let want = d.member(&fa, &fa.encode(&y).unwrap());
        assert_eq!(set.member(&fine, &y).unwrap(), want, "{y}");
    }
}
