use berk_core::newton::{disc_image, local_degree, polygon_roots, skeleton_monomial, RootVal};
use berk_core::valuation::{q, qi};
use berk_core::{BPoint, Field, Monomial, Polynomial, Radius, Q};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f2() -> Field {
    Field::new(2).unwrap()
}

fn t2() -> Polynomial {
    Polynomial::from_ints(&[0, 0, 1])
}

#[test]
fn root_valuations() {
    let r = polygon_roots(&Polynomial::from_ints(&[-2, 0, 1]), f2()).unwrap();
    assert_eq!(r.root_valuations, vec![RootVal::Finite(q(1, 2)), RootVal::Finite(q(1, 2))]);
    let r = polygon_roots(&Polynomial::from_ints(&[0, 1]), f2()).unwrap();
    assert_eq!(r.root_valuations, vec![RootVal::Infinite]);
    let r = polygon_roots(&Polynomial::from_ints(&[4, 1, 2]), f2()).unwrap();
    assert_eq!(r.root_valuations, vec![RootVal::Finite(qi(-1)), RootVal::Finite(qi(2))]);
    assert!(polygon_roots(&Polynomial::zero(), f2()).is_err());
}

#[test]
fn disc_images() {
    let x = disc_image(&t2(), &qi(1), &Radius::expi(-2), f2()).unwrap();
    assert!(x.same(&BPoint::new(qi(1), Radius::expi(-3)).unwrap(), f2()));
    let x = disc_image(&t2(), &qi(0), &Radius::exp(2, 3), f2()).unwrap();
    assert!(x.same(&BPoint::new(qi(0), Radius::exp(4, 3)).unwrap(), f2()));
    assert!(disc_image(&Polynomial::constant(qi(3)), &qi(0), &Radius::one(), f2()).is_err());
}

#[test]
fn local_degrees() {
    let f = f2();
    for k in [-3, 0, 2] {
        assert_eq!(local_degree(&t2(), &BPoint::new(qi(0), Radius::expi(k)).unwrap(), f).unwrap(), 2);
    }
    assert_eq!(local_degree(&t2(), &BPoint::new(qi(1), Radius::expi(-2)).unwrap(), f).unwrap(), 1);
    assert_eq!(local_degree(&t2(), &BPoint::new(qi(1), Radius::expi(-1)).unwrap(), f).unwrap(), 2);
    assert_eq!(local_degree(&t2(), &BPoint::rigid(qi(0)), f).unwrap(), 2);
    assert_eq!(local_degree(&t2(), &BPoint::rigid(qi(1)), f).unwrap(), 1);
}

#[test]
fn skeleton_pieces() {
    let f = f2();
    let p = skeleton_monomial(&t2(), &qi(0), &Radius::expi(-3), &Radius::one(), f).unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!((p[0].m.clone(), p[0].degree), (Monomial::new(Radius::one(), qi(2)), 2));
    let p = skeleton_monomial(&t2(), &qi(1), &Radius::Zero, &Radius::expi(-1), f).unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!((p[0].m.clone(), p[0].degree), (Monomial::new(Radius::expi(-1), qi(1)), 1));
    let p = skeleton_monomial(&t2(), &qi(1), &Radius::expi(-1), &Radius::one(), f).unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!((p[0].m.clone(), p[0].degree), (Monomial::new(Radius::one(), qi(2)), 2));
}

#[test]
fn disc_image_contains_samples() {
    let f = f2();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = Polynomial::from_ints(&[3, -1, 5, 2]);
    let (a, r) = (q(1, 3), Radius::expi(-2));
    let img = disc_image(&h, &a, &r, f).unwrap();
    for _ in 0..1000 {
        let x = &a + Q::from_integer(4.into()) * qi(rng.gen_range(-500..500)) / qi(2 * rng.gen_range(0..40) + 1);
        let d = f.dist(&h.eval(&x), &img.center);
        assert!(d <= img.radius);
    }
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    (prop::collection::vec((-12i64..12, 1i64..5), 1..4)).prop_map(|cs| {
        let mut v: Vec<Q> = cs.iter().map(|(n, d)| q(*n, *d)).collect();
        v.insert(0, qi(0));
        v.push(qi(1));
        Polynomial::new(v)
    })
}

fn point() -> impl Strategy<Value = BPoint> {
    ((-16i64..16), (1i64..5), (-12i64..8)).prop_map(|(n, d, k)| BPoint::new(q(n, d), Radius::exp(k, 2)).unwrap())
}

proptest! {
    #[test]
    fn slope_lengths_sum_to_degree(h in small_poly()) {
        let r = polygon_roots(&h, f2()).unwrap();
        prop_assert_eq!(r.root_valuations.len(), h.degree().unwrap());
    }

    #[test]
    fn degree_is_multiplicative(g in small_poly(), h in small_poly(), x in point()) {
        let f = f2();
        let gh = g.compose(&h);
        let y = disc_image(&h, &x.center, &x.radius, f).unwrap();
        let lhs = local_degree(&gh, &x, f).unwrap();
        let rhs = local_degree(&g, &y, f).unwrap() * local_degree(&h, &x, f).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_is_monotone_in_radius(h in small_poly(), x in point(), k in 1i64..6) {
        let f = f2();
        let d0 = local_degree(&h, &x, f).unwrap();
        let up = BPoint::new(x.center.clone(), x.radius.mul_total(&Radius::exp(k, 2))).unwrap();
        let d1 = local_degree(&h, &up, f).unwrap();
        prop_assert!(d0 >= 1 && d0 <= d1 && d1 <= h.degree().unwrap());
    }

    #[test]
    fn skeleton_matches_disc_image(h in small_poly(), a in (-8i64..8)) {
        let f = f2();
        let a = qi(a);
        for piece in skeleton_monomial(&h, &a, &Radius::expi(-6), &Radius::expi(4), f).unwrap() {
            let (lo, hi) = (piece.lo.exponent().unwrap().clone(), piece.hi.exponent().unwrap().clone());
            for j in 1..=10 {
                let t = Radius::Exp(&lo + (&hi - &lo) * q(j, 11));
                let img = disc_image(&h, &a, &t, f).unwrap();
                prop_assert_eq!(img.radius, piece.m.eval(&t));
                prop_assert_eq!(local_degree(&h, &BPoint::new(a.clone(), t).unwrap(), f).unwrap(), piece.degree);
            }
        }
    }
}
