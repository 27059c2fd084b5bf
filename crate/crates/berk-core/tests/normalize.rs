use berk_core::bradial::{is_empty, normalize, sweep_normalize, BasicRadial, Expr};
use berk_core::valuation::{q, qi, Field, Radius, Q};
use berk_core::BPoint;
use proptest::prelude::*;

fn field() -> Field {
    Field::new(2).unwrap()
}

fn center() -> impl Strategy<Value = Q> {
    prop_oneof![Just(qi(0)), Just(qi(1)), Just(qi(2)), Just(qi(3)), Just(q(1, 2)), Just(qi(4)), Just(qi(6))]
}

fn radius() -> impl Strategy<Value = Radius> {
    prop_oneof![
        1 => Just(Radius::Zero),
        1 => Just(Radius::Infinity),
        6 => (-4i64..=4).prop_map(|k| Radius::exp(k, 2)),
    ]
}

fn fin_radius() -> impl Strategy<Value = Radius> {
    prop_oneof![1 => Just(Radius::Zero), 5 => (-4i64..=4).prop_map(|k| Radius::exp(k, 2))]
}

fn mono() -> impl Strategy<Value = (Radius, Q)> {
    (
        prop_oneof![1 => Just(Radius::Zero), 4 => (-2i64..=2).prop_map(|k| Radius::exp(k, 2))],
        prop_oneof![Just(qi(0)), Just(q(1, 2)), Just(qi(1)), Just(qi(2)), Just(qi(-1))],
    )
}

fn piece() -> impl Strategy<Value = BasicRadial> {
    prop_oneof![
        (center(), fin_radius()).prop_map(|(a, s)| BasicRadial::R0 { a, s }),
        (center(), radius(), radius()).prop_map(|(a, s1, s2)| BasicRadial::R1 { a, s1, s2 }),
        (center(), radius(), radius(), mono())
            .prop_map(|(a, s1, s2, (rho1, g1))| BasicRadial::R2 { a, s1, s2, rho1, g1 }),
        (center(), radius(), radius(), mono(), mono()).prop_map(|(a, s1, s2, (rho1, g1), (rho2, g2))| {
            BasicRadial::R3 { a, s1, s2, rho1, g1, rho2, g2 }
        }),
        (center(), fin_radius(), prop::collection::vec(center(), 0..2), fin_radius())
            .prop_map(|(a, s, holes, s1)| BasicRadial::R4 { a, s, holes, s1 }),
        (center(), fin_radius(), prop::collection::vec(center(), 0..2), radius(), radius())
            .prop_map(|(a, s, holes, s1, s2)| BasicRadial::R5 { a, s, holes, s1, s2 }),
        (center(), radius(), fin_radius()).prop_map(|(a, s, s1)| BasicRadial::R6 { a, s, s1 }),
        (center(), radius(), radius(), radius()).prop_map(|(a, s, s1, s2)| BasicRadial::R7 { a, s, s1, s2 }),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = piece().prop_map(Expr::Piece);
    leaf.prop_recursive(2, 6, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..3).prop_map(Expr::Union),
            prop::collection::vec(inner.clone(), 2..3).prop_map(Expr::Inter),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::diff(a, b)),
            inner.prop_map(Expr::compl),
        ]
    })
}

/// Points around the centers used by the generators, at every radius on the
/// grid, so that graphs and circles are hit.
fn probe_points() -> Vec<BPoint> {
    let mut xs: Vec<Q> = Vec::new();
    for n in -3..=9 {
        for d in [1, 2, 4, 3] {
            xs.push(q(n, d));
        }
    }
    xs.push(qi(16));
    xs.push(qi(32));
    xs.push(q(1, 8));
    xs.push(q(17, 16));
    let mut rs = vec![Radius::Zero];
    for k in -12..=12 {
        rs.push(Radius::exp(k, 4));
    }
    let mut out = Vec::new();
    for x in &xs {
        for r in &rs {
            out.push(BPoint { center: x.clone(), radius: r.clone() });
        }
    }
    out
}

fn check(e: &Expr, norm: &[BasicRadial]) {
    let f = field();
    for x in probe_points() {
        let want = e.member(&x, f);
        let hits = norm.iter().filter(|p| p.member(&x, f)).count();
        assert!(hits <= 1, "pieces overlap at {x}: {norm:?}");
        assert_eq!(want, hits == 1, "membership differs at {x} for {e:?}\nnormalized: {norm:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sweep_matches_direct_membership(e in expr()) {
        let out = sweep_normalize(&e, field());
        check(&e, &out.pieces);
    }

    #[test]
    fn normalize_matches_direct_membership(e in expr()) {
        let out = normalize(&e, field());
        check(&e, &out.pieces);
    }

    #[test]
    fn normalized_pieces_are_nonempty(e in expr()) {
        let f = field();
        for p in sweep_normalize(&e, f).pieces {
            prop_assert!(!is_empty(&Expr::Piece(p.clone()), f), "empty piece {:?}", p);
        }
    }
}

#[test]
fn point_plus_open_segment() {
    let f = field();
    let e = Expr::union(
        Expr::Piece(BasicRadial::R0 { a: qi(0), s: Radius::one() }),
        Expr::Piece(BasicRadial::R1 { a: qi(0), s1: Radius::one(), s2: Radius::expi(2) }),
    );
    let out = sweep_normalize(&e, f);
    check(&e, &out.pieces);
}
