use berk_core::bradial::{is_partition, Expr};
use berk_core::maps::{fiber_count, multiplicity_locus};
use berk_core::newton::local_degree as poly_degree;
use berk_core::valuation::{q, qi};
use berk_core::{BPoint, Brick, Error, Field, PPoint, Polynomial, Radius, RationalMap, Q};
use proptest::prelude::*;

fn f2() -> Field {
    Field::new(2).unwrap()
}

fn pt(a: Q, r: Radius) -> BPoint {
    BPoint::new(a, r).unwrap()
}

fn poly(cs: &[i64]) -> RationalMap {
    RationalMap::polynomial(Polynomial::from_ints(cs)).unwrap()
}

fn aff(p: PPoint) -> BPoint {
    p.affine().cloned().expect("affine image")
}

/// Points `η(m/2^j, Exp(q))` with `q ∈ ℤ/6 ∩ [-6, 3]`, plus the rigid points.
fn grid() -> Vec<BPoint> {
    let mut out = Vec::new();
    for j in 0..3 {
        for m in -6..=6i64 {
            let a = q(m, 1 << j);
            if j > 0 && m % 2 == 0 {
                continue;
            }
            for k in (-36..=18).step_by(3) {
                out.push(pt(a.clone(), Radius::exp(k, 6)));
            }
            out.push(BPoint::rigid(a));
        }
    }
    out
}

#[test]
fn pushforward_examples() {
    let f = f2();
    let t2 = poly(&[0, 0, 1]);
    let y = aff(t2.pushforward(&pt(qi(1), Radius::expi(-2)).into(), f).unwrap());
    assert!(y.same(&pt(qi(1), Radius::expi(-3)), f));
    let inv = RationalMap::mobius(qi(0), qi(1), qi(1), qi(0)).unwrap();
    for e in [q(-3, 2), qi(0), q(1, 3), qi(2)] {
        let y = aff(inv.pushforward(&pt(qi(0), Radius::Exp(e.clone())).into(), f).unwrap());
        assert!(y.same(&pt(qi(0), Radius::Exp(-e)), f), "{y}");
    }
    let id = RationalMap::identity();
    for x in grid().into_iter().take(60) {
        assert!(aff(id.pushforward(&x.clone().into(), f).unwrap()).same(&x, f));
    }
    assert!(matches!(inv.pushforward(&BPoint::rigid(qi(0)).into(), f).unwrap(), PPoint::Inf));
    assert!(matches!(t2.pushforward(&PPoint::Inf, f).unwrap(), PPoint::Inf));
}

#[test]
fn affine_maps_act_exactly() {
    let f = f2();
    let m = RationalMap::mobius(q(4, 3), q(1, 5), qi(0), qi(1)).unwrap();
    for x in grid() {
        let y = aff(m.pushforward(&x.clone().into(), f).unwrap());
        let want = pt(q(4, 3) * &x.center + q(1, 5), x.radius.mul_total(&Radius::expi(-2)));
        assert!(y.same(&want, f));
        assert_eq!(m.local_degree(&x.into(), f).unwrap(), 1);
    }
}

#[test]
fn rational_degree_agrees_with_polynomial_degree() {
    let f = f2();
    for cs in [vec![0, 0, 1], vec![1, -3, 0, 1], vec![0, 2, -1, 0, 1], vec![3, 0, 0, 0, 0, 1]] {
        let p = Polynomial::from_ints(&cs);
        let h = RationalMap::polynomial(p.clone()).unwrap();
        for x in grid() {
            assert_eq!(h.local_degree(&x.clone().into(), f).unwrap(), poly_degree(&p, &x, f).unwrap());
        }
    }
}

#[test]
fn locus_examples() {
    let f = f2();
    let line = Brick::B1 { a: qi(0), s: Radius::Infinity };
    let t2 = poly(&[0, 0, 1]);
    let t3 = poly(&[0, 0, 0, 1]);
    let n2 = multiplicity_locus(&t2, 2, &line, f).unwrap();
    let n1 = multiplicity_locus(&t2, 1, &line, f).unwrap();
    let n3 = multiplicity_locus(&t3, 3, &line, f).unwrap();
    assert!(!n2.residual && !n1.residual && !n3.residual);
    for x in grid() {
        let da = f.abs(&x.center);
        let edge = Radius::expi(-1).mul_total(&da);
        assert_eq!(n2.locus.member(&x, f), x.radius >= edge, "{x}");
        assert_eq!(n1.locus.member(&x, f), x.radius < edge, "{x}");
        assert_eq!(n3.locus.member(&x, f), x.radius >= da, "{x}");
    }
    let parts = [Expr::Set(n1.locus), Expr::Set(n2.locus)];
    assert!(is_partition(&parts, f));
}

#[test]
fn locus_agrees_with_pointwise_degree() {
    let f = f2();
    let region = Brick::B1 { a: qi(0), s: Radius::expi(3) };
    for cs in [vec![0, 0, 1], vec![0, -3, 0, 1], vec![0, 0, 0, -2, 1], vec![0, 0, 3, 2]] {
        let h = poly(&cs);
        let mut loci = Vec::new();
        for d in 1..=h.degree() {
            let rep = multiplicity_locus(&h, d, &region, f).unwrap();
            for x in grid().into_iter().filter(|x| region.member(x, f)) {
                let deg = h.local_degree(&x.clone().into(), f).unwrap();
                assert!(!rep.residual, "{h}");
                assert_eq!(rep.locus.member(&x, f), deg == d, "{h} d={d} {x}");
            }
            loci.push(Expr::Set(rep.locus));
        }
        if h.degree() > 1 {
            let mut all = loci.clone();
            all.push(Expr::compl(Expr::Brick(region.clone())));
            assert!(is_partition(&all, f), "{h}");
        }
    }
}

#[test]
fn residual_mode_for_irrational_critical_points() {
    let f = f2();
    let h = poly(&[0, 2, 0, 1]);
    let region = Brick::B1 { a: qi(0), s: Radius::expi(2) };
    let rep = multiplicity_locus(&h, 1, &region, f).unwrap();
    assert!(rep.residual);
    for x in berk_core::maps::residual_grid() {
        if region.member(&x, f) {
            assert_eq!(rep.locus.member(&x, f), h.local_degree(&x.clone().into(), f).unwrap() == 1);
        }
    }
    let r = RationalMap::mobius(qi(1), qi(0), qi(1), qi(1)).unwrap();
    assert!(matches!(multiplicity_locus(&r, 1, &region, f), Err(Error::Unsupported(_))));
}

#[test]
fn fiber_examples() {
    let f = f2();
    let t2 = poly(&[0, 0, 1]);
    let fib = fiber_count(&t2, &pt(qi(1), Radius::expi(-3)), &[qi(1), qi(-1)], f).unwrap();
    assert_eq!(fib.count, 2);
    assert!(fib.fiber.iter().any(|x| x.same(&pt(qi(1), Radius::expi(-2)), f)));
    assert!(fib.fiber.iter().any(|x| x.same(&pt(qi(-1), Radius::expi(-2)), f)));
    let fib = fiber_count(&t2, &pt(qi(0), Radius::expi(-2)), &[], f).unwrap();
    assert_eq!(fib.count, 1);
    assert!(fib.fiber[0].same(&pt(qi(0), Radius::expi(-1)), f));
    let fib = fiber_count(&t2, &BPoint::rigid(qi(0)), &[], f).unwrap();
    assert_eq!((fib.count, fib.degrees.clone()), (1, vec![2]));
    let miss = fiber_count(&t2, &pt(qi(2), Radius::expi(-3)), &[], f);
    assert!(matches!(miss, Err(Error::IncompleteOracle(_))));
    assert!(fiber_count(&t2, &pt(qi(1), Radius::expi(-3)), &[qi(3)], f).is_err());
}

fn small_map() -> impl Strategy<Value = RationalMap> {
    let coef = (-6i64..6, 1i64..4).prop_map(|(n, d)| q(n, d));
    (prop::collection::vec(coef.clone(), 1..4), prop::collection::vec(coef, 0..3)).prop_filter_map("degenerate", |(mut n, mut d)| {
        n.push(qi(1));
        d.push(qi(1));
        RationalMap::new(Polynomial::new(n), Polynomial::new(d)).ok()
    })
}

fn point() -> impl Strategy<Value = BPoint> {
    ((-12i64..12), (1i64..4), (-8i64..6)).prop_map(|(n, d, k)| pt(q(n, d), Radius::exp(k, 2)))
}

proptest! {
    #[test]
    fn image_seminorm_matches(h in small_map(), x in point(), c in (-20i64..20, 1i64..5)) {
        let f = f2();
        let Ok(PPoint::Aff(y)) = h.pushforward(&x.clone().into(), f) else { return Ok(()) };
        let c = q(c.0, c.1);
        let top = h.num().sub(&h.den().scale(&c)).shift(&x.center).gauss_norm(&x.radius, f);
        let bot = h.den().shift(&x.center).gauss_norm(&x.radius, f);
        prop_assert_eq!(y.dist_to(&c, f), top.div(&bot).unwrap());
    }

    #[test]
    fn rational_degree_is_multiplicative(g in small_map(), h in small_map(), x in point()) {
        let f = f2();
        let gh = g.compose(&h).unwrap();
        let (Ok(y), Ok(dh)) = (h.pushforward(&x.clone().into(), f), h.local_degree(&x.clone().into(), f)) else { return Ok(()) };
        let (Ok(dg), Ok(dgh)) = (g.local_degree(&y, f), gh.local_degree(&x.into(), f)) else { return Ok(()) };
        prop_assert_eq!(dgh, dg * dh);
        prop_assert!(dh >= 1 && dh <= h.degree());
    }

    #[test]
    fn fiber_degrees_sum_to_degree(cs in prop::collection::vec(-4i64..4, 1..3), x in point()) {
        let f = f2();
        let mut p = Polynomial::from_ints(&[1]);
        for c in &cs {
            p = p.mul(&Polynomial::new(vec![qi(-c), qi(1)]));
        }
        let h = RationalMap::polynomial(p).unwrap();
        let y = aff(h.pushforward(&x.clone().into(), f).unwrap());
        match fiber_count(&h, &y, &[], f) {
            Ok(fib) => {
                prop_assert_eq!(fib.degrees.iter().sum::<usize>(), h.degree());
                prop_assert!(fib.fiber.iter().any(|z| z.same(&x, f)));
            }
            Err(Error::IncompleteOracle(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
