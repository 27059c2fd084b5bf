use berk_core::facade::{
    build_facade, check_compatible, compile, map_transport, refine_facade, transport_rules, triangulate, Case, Domain, Encoded,
    Facade, Mode, Part,
};
use berk_core::valuation::{q, qi};
use berk_core::{BPoint, Error, Field, Monomial, PPoint, Polynomial, Radius, RationalMap, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f2() -> Field {
    Field::new(2).unwrap()
}

fn pt(a: Q, r: Radius) -> BPoint {
    BPoint::new(a, r).unwrap()
}

fn gauss() -> BPoint {
    BPoint::gauss()
}

fn unit_disc() -> Domain {
    Domain::Disc { center: qi(0), radius: Radius::one() }
}

fn fixtures() -> Vec<Facade> {
    [unit_disc(), Domain::Affine, Domain::Projective].iter().map(|d| build_facade(d, &[gauss()], f2()).unwrap()).collect()
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

#[test]
fn triangulation_examples() {
    let f = f2();
    assert!(triangulate(&Domain::Affine, &[gauss()], Mode::Validate, f).is_ok());
    assert!(matches!(triangulate(&Domain::Affine, &[], Mode::Validate, f), Err(Error::Validation(_))));
    let up = pt(qi(0), Radius::expi(1));
    let s = triangulate(&Domain::Affine, &[gauss()], Mode::Refine(vec![up.clone()]), f).unwrap();
    assert_eq!(s.len(), 2);
    let back = triangulate(&Domain::Affine, &s, Mode::Prune(vec![gauss()]), f).unwrap();
    assert_eq!(back.len(), 1);
    assert!(back[0].same(&gauss(), f));
    // a branch point outside S
    let two = [pt(qi(0), Radius::expi(-2)), pt(qi(1), Radius::expi(-2))];
    assert!(triangulate(&Domain::Affine, &two, Mode::Validate, f).is_err());
    assert!(triangulate(&Domain::Projective, &two, Mode::Validate, f).is_ok());
    assert!(triangulate(&unit_disc(), &[pt(qi(0), Radius::expi(-1))], Mode::Validate, f).is_err());
    assert!(triangulate(&unit_disc(), &[gauss(), pt(qi(1, ), Radius::expi(2))], Mode::Validate, f).is_err());
}

#[test]
fn facade_examples() {
    let f = f2();
    let fx = fixtures();
    let d = &fx[0];
    assert_eq!((d.vertices.len(), d.edges.len()), (1, 0));
    assert!(d.vertices[0].chart.as_ref().unwrap().is_identity());
    assert!(d.vertices[0].excluded.is_empty() && d.vertices[0].discs.is_empty());
    let a = &fx[1];
    assert_eq!(a.edges.len(), 1);
    assert!(a.edges[0].chart.is_identity());
    assert_eq!((a.edges[0].lo.clone(), a.edges[0].hi.clone()), (Radius::one(), Radius::Infinity));
    let p = &fx[2];
    assert_eq!((p.edges.len(), p.vertices[0].discs.len()), (0, 1));
    assert_eq!(p.vertices[0].discs[0].apply_q(&qi(4)), Some(q(1, 4)));

    let e = d.encode(&pt(qi(3), Radius::expi(-2)).into()).unwrap();
    assert!(matches!(&e, Encoded::Tube(0, 1, w) if w.same(&pt(qi(3), Radius::expi(-2)), f)));
    assert!(matches!(d.encode(&gauss().into()).unwrap(), Encoded::Vtx2(0)));
    assert!(matches!(d.encode(&pt(q(1, 2), Radius::Zero).into()), Err(Error::Domain(_))));
    assert!(matches!(p.encode(&PPoint::Inf).unwrap(), Encoded::Disc(0, 0, _)));
    assert!(p.decode(&Encoded::Disc(0, 0, pt(qi(1), Radius::Zero))).is_err());
}

#[test]
fn retraction_examples() {
    let f = f2();
    let a = &fixtures()[1];
    assert!(a.tau(&pt(qi(2), Radius::expi(-5)).into()).unwrap().same(&gauss(), f));
    let y = pt(qi(4), Radius::expi(3));
    assert!(a.tau(&y.clone().into()).unwrap().same(&pt(qi(0), Radius::expi(3)), f));
}

#[test]
fn round_trips_and_retraction_laws() {
    let f = f2();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let two = [pt(qi(0), Radius::expi(-2)), pt(qi(1), Radius::expi(-2)), pt(qi(4), Radius::Zero)];
    let mut all = fixtures();
    all.push(build_facade(&Domain::Projective, &two, f).unwrap());
    all.push(build_facade(&Domain::Affine, &[gauss(), pt(qi(2), Radius::Zero), pt(qi(3), Radius::expi(-3))], f).unwrap());
    for fa in &all {
        for _ in 0..1000 {
            let y = sample(&mut rng, &fa.domain, f);
            let e = fa.encode(&y).unwrap();
            if let Encoded::Tube(_, a, w) = &e {
                assert_eq!(f.residue(&w.center).unwrap(), *a);
            }
            assert!(fa.decode(&e).unwrap().same(&y, f), "{y} -> {e}");
            assert!(fa.encode(&fa.decode(&e).unwrap()).unwrap().same(&e, f));
            let t = PPoint::Aff(fa.tau(&y).unwrap());
            assert!(fa.on_skeleton(&t).unwrap());
            assert!(fa.tau(&t).unwrap().same(t.affine().unwrap(), f));
            if fa.on_skeleton(&y).unwrap() {
                assert!(t.same(&y, f));
            }
            assert!(fa.nu(&Radius::Zero, &y).unwrap().same(&y, f));
            assert!(fa.on_skeleton(&fa.nu(&Radius::one(), &y).unwrap()).unwrap());
            let mid = fa.nu(&Radius::exp(-1, 2), &y).unwrap();
            assert!(fa.tau(&mid).unwrap().same(t.affine().unwrap(), f));
        }
    }
}

#[test]
fn refinement_transport() {
    let f = f2();
    let d = &fixtures()[0];
    let fine = refine_facade(d, &[pt(qi(0), Radius::expi(-1))]).unwrap();
    assert_eq!((fine.vertices.len(), fine.edges.len()), (2, 1));
    let rules = transport_rules(d, &fine).unwrap();
    let (e, case) = rules.apply(d, &fine, &Encoded::Tube(0, 0, pt(qi(0), Radius::expi(-1)))).unwrap();
    assert!(matches!(e, Encoded::Vtx2(1)));
    assert_eq!(case, Case::Vertex);
    let (e, case) = rules.apply(d, &fine, &Encoded::Tube(0, 1, pt(qi(3), Radius::expi(-2)))).unwrap();
    assert!(matches!(&e, Encoded::Tube(0, 1, w) if w.same(&pt(qi(3), Radius::expi(-2)), f)));
    assert_eq!(case, Case::Identity);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let y = sample(&mut rng, &d.domain, f);
        let e = d.encode(&y).unwrap();
        let want = fine.encode(&y).unwrap();
        let (got, _) = rules.apply(d, &fine, &e).unwrap();
        assert!(got.same(&want, f), "{y}: {got} vs {want}");
    }
}

#[test]
fn refinement_of_edges_keeps_ids() {
    let f = f2();
    let a = &fixtures()[1];
    let fine = refine_facade(a, &[pt(qi(0), Radius::expi(2))]).unwrap();
    assert_eq!(fine.edges.len(), 2);
    assert_eq!((fine.edges[0].lo.clone(), fine.edges[0].hi.clone()), (Radius::one(), Radius::expi(2)));
    let rules = transport_rules(a, &fine).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..500 {
        let y = sample(&mut rng, &a.domain, f);
        let (got, _) = rules.apply(a, &fine, &a.encode(&y).unwrap()).unwrap();
        assert!(got.same(&fine.encode(&y).unwrap(), f));
    }
    let p = build_facade(&Domain::Projective, &[pt(qi(0), Radius::expi(-2)), pt(qi(1), Radius::expi(-2))], f).unwrap();
    for z in [gauss(), pt(qi(0), Radius::expi(-1)), pt(qi(1), Radius::expi(-3))] {
        let fine = refine_facade(&p, &[z]).unwrap();
        let rules = transport_rules(&p, &fine).unwrap();
        for _ in 0..300 {
            let y = sample(&mut rng, &p.domain, f);
            let (got, _) = rules.apply(&p, &fine, &p.encode(&y).unwrap()).unwrap();
            assert!(got.same(&fine.encode(&y).unwrap(), f));
        }
    }
}

#[test]
fn morphism_square() {
    let f = f2();
    let h = RationalMap::polynomial(Polynomial::from_ints(&[0, 0, 1])).unwrap();
    let d = &fixtures()[0];
    check_compatible(&h, d, d).unwrap();
    let e = map_transport(&h, d, d, &Encoded::Tube(0, 1, pt(qi(3), Radius::expi(-2)))).unwrap();
    assert!(matches!(&e, Encoded::Tube(0, 1, w) if w.same(&pt(qi(9), Radius::expi(-3)), f)));
    assert!(matches!(map_transport(&h, d, d, &Encoded::Vtx2(0)).unwrap(), Encoded::Vtx2(0)));
    let c = compile(&h, d, d).unwrap();
    assert_eq!((c.tubes[0].num.clone(), c.tubes[0].den.clone()), (vec![0, 0, 1], vec![1]));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let y = sample(&mut rng, &d.domain, f);
        let lhs = d.encode(&h.pushforward(&y, f).unwrap()).unwrap();
        let rhs = map_transport(&h, d, d, &d.encode(&y).unwrap()).unwrap();
        assert!(lhs.same(&rhs, f));
        if let (Encoded::Tube(_, a, _), Encoded::Tube(_, b, _)) = (d.encode(&y).unwrap(), &rhs) {
            assert_eq!(c.tubes[0].eval(a, 2), Some(*b));
        }
    }
    let a = &fixtures()[1];
    let c = compile(&h, a, a).unwrap();
    assert_eq!(c.edges.len(), 1);
    assert_eq!(c.edges[0].pieces.len(), 1);
    assert_eq!(c.edges[0].pieces[0].2, Monomial::new(Radius::one(), qi(2)));
    assert_eq!(c.edges[0].degree, 2);
    for k in 1..=10 {
        let t = Radius::exp(k, 3);
        let e = Encoded::Edge(0, pt(qi(0), t.clone()));
        let img = map_transport(&h, a, a, &e).unwrap();
        assert!(img.same(&Encoded::Edge(0, pt(qi(0), c.edges[0].pieces[0].2.eval(&t))), f));
    }
    let shift = RationalMap::polynomial(Polynomial::from_ints(&[0, 2])).unwrap();
    assert!(matches!(check_compatible(&shift, a, a), Err(Error::Compatibility(_))));
    let _ = Part::Vtx(0);
}
