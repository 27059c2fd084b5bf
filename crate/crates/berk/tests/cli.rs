use std::path::PathBuf;
use std::process::{Command, Output};

use berk::schema;
use berk_core::bradial::{equal_sets, normalize};
use berk_core::curveradial::{equal_curve, Band, CurvePiece, CurveRadialSet};
use berk_core::facade::{build_facade, Domain};
use berk_core::valuation::{q, qi};
use berk_core::{BPoint, BasicRadial, Expr, Field, Monomial, Radius};

fn berk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_berk")).args(args).env_remove("BERK_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("berk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const T2: &str = r#"{"num":{"coeffs":["0","0","1"]},"den":{"coeffs":["1"]}}"#;

#[test]
fn degree_example() {
    let o = berk(&["degree", "--p", "2", "--map", T2, "--point", r#"{"a":"1","r":{"exp":"-2"}}"#]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn skeleton_example() {
    let path = tmp("out.dot");
    let tri = r#"{"domain":"A1","points":[{"a":"0","r":{"exp":"0"}}]}"#;
    let o = berk(&["skeleton", "--tri", tri, "--dot", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("graph skeleton {\n"));
    assert_eq!(dot.matches("label=\"η(").count(), 1);
    assert_eq!(dot.matches(" -- ").count(), 1);
    assert!(dot.contains("v0 -- inf0"));
    assert!(dot.contains("η(0, p^0)"));
}

#[test]
fn fig1_listing() {
    let o = berk(&["normalize", "--expr", &data("fig1_complement.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["disjoint"], serde_json::Value::Bool(true));
    let n = v["count"].as_u64().unwrap();
    assert_eq!(n as usize, v["set"]["pieces"].as_array().unwrap().len());
    let text = berk(&["normalize", "--format", "text", "--expr", &data("fig1_complement.json")]);
    assert!(stdout(&text).ends_with(&format!("pieces: {n}\n")));
}

#[test]
fn exit_codes() {
    let bad_schema = berk(&["degree", "--map", r#"{"num":{"coeffs":["0","x"]}}"#, "--point", r#"{"a":"1","r":"zero"}"#]);
    assert_eq!(bad_schema.status.code(), Some(2));
    let err = String::from_utf8(bad_schema.stderr).unwrap();
    assert!(err.contains("map.num.coeffs[1]"), "{err}");
    let missing = berk(&["member", "--set", r#"{"kind":"R0","a":"0"}"#, "--point", r#"{"a":"0","r":"zero"}"#]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8(missing.stderr).unwrap().contains("set.s"));
    let tri = r#"{"domain":{"disc":{"a":"0","r":{"exp":"0"}}},"points":[{"a":"0","r":{"exp":"0"}}]}"#;
    let outside = berk(&["encode", "--tri", tri, "--point", r#"{"a":"1/2","r":"zero"}"#]);
    assert_eq!(outside.status.code(), Some(3));
    let pairing = berk(&["degree", "--format", "csv", "--map", T2, "--point", r#"{"a":"1","r":"zero"}"#]);
    assert_eq!(pairing.status.code(), Some(2));
}

#[test]
fn sample_csv() {
    let set = r#"{"kind":"R6","a":"0","s":{"exp":"0"},"s1":{"exp":"-1"}}"#;
    let o = berk(&["sample", "--set", set]);
    let csv = stdout(&o);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("a,r,member"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 32 * 32);
    assert!(rows.contains(&"-2/1,p^-1/1,1") && rows.contains(&"0/1,p^-1/1,1"));
    assert!(rows.contains(&"1/2,p^-1/1,0"));
    assert!(rows.contains(&"1/1,p^-1/1,0"));
    let again = berk(&["sample", "--set", set]);
    assert_eq!(o.stdout, again.stdout);
    let a = berk(&["sample", "--samples", "50", "--seed", "4", "--set", set]);
    let b = Command::new(env!("CARGO_BIN_EXE_berk"))
        .args(["sample", "--samples", "50", "--seed", "9", "--set", set])
        .env("BERK_SEED", "4")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 51);
}

#[test]
fn radial_sets_round_trip_through_json() {
    let f = Field::new(2).unwrap();
    let e = Expr::union(
        Expr::Piece(BasicRadial::R3 {
            a: q(1, 2),
            s1: Radius::expi(-1),
            s2: Radius::Infinity,
            rho1: Radius::Zero,
            g1: qi(0),
            rho2: Radius::exp(-1, 3),
            g2: qi(1),
        }),
        Expr::Piece(BasicRadial::R5 { a: qi(3), s: Radius::one(), holes: vec![qi(1)], s1: Radius::Zero, s2: Radius::one() }),
    );
    let set = normalize(&e, f);
    let text = schema::render(&schema::radial_set_out(&set));
    let back = schema::radial_set(&serde_json::from_str(&text).unwrap(), "set").unwrap();
    assert!(equal_sets(&Expr::Set(back.clone()), &Expr::Set(set), f));
    assert_eq!(text, schema::render(&schema::radial_set_out(&back)));
    let o = berk(&["normalize", "--expr", &text]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let again = schema::radial_set(&v["set"], "set").unwrap();
    assert!(equal_sets(&Expr::Set(again), &Expr::Set(back), f));
}

#[test]
fn values_round_trip_through_json() {
    let f = Field::new(2).unwrap();
    let x = BPoint::new(q(-7, 12), Radius::exp(-5, 3)).unwrap();
    let v = schema::point_out(&x);
    assert_eq!(v["a"], "-7/12");
    assert_eq!(v["r"]["exp"], "-5/3");
    assert!(schema::point(&v, "p").unwrap().same(&x, f));
    for r in [Radius::Zero, Radius::Infinity, Radius::exp(4, 6)] {
        assert_eq!(schema::radius(&schema::radius_out(&r), "r").unwrap(), r);
    }
    let fa = build_facade(&Domain::Affine, &[BPoint::gauss()], f).unwrap();
    let a = CurveRadialSet::new(vec![
        CurvePiece::Vertex { x: 0, band: Band::new(Radius::expi(-3), false, Radius::expi(-1), true) },
        CurvePiece::Edge {
            edge: 0,
            span: Band::open(Radius::one(), Radius::Infinity),
            f1: Monomial::new(Radius::expi(-1), qi(1)),
            f1_incl: false,
            f2: Monomial::new(Radius::one(), qi(1)),
            f2_incl: false,
        },
    ]);
    let back = schema::curve_set(&schema::curve_set_out(&a), "set").unwrap();
    assert!(equal_curve(&fa, &a, &back).unwrap());
    for y in [x.clone().into(), berk_core::PPoint::Inf] {
        let e = build_facade(&Domain::Projective, &[BPoint::gauss()], f).unwrap().encode(&y).unwrap();
        assert!(schema::encoded(&schema::encoded_out(&e), "code").unwrap().same(&e, f));
    }
}

#[test]
fn facade_commands() {
    let tri = r#"{"domain":{"disc":{"a":"0","r":{"exp":"0"}}},"points":[{"a":"0","r":{"exp":"0"}}]}"#;
    let code = stdout(&berk(&["encode", "--tri", tri, "--point", r#"{"a":"3","r":{"exp":"-2"}}"#]));
    let v: serde_json::Value = serde_json::from_str(&code).unwrap();
    assert_eq!((v["part"].as_str(), v["alpha"].as_u64()), (Some("tube"), Some(1)));
    let back = stdout(&berk(&["decode", "--tri", tri, "--code", &code]));
    let p: serde_json::Value = serde_json::from_str(&back).unwrap();
    assert_eq!(p["r"]["exp"], "-2/1");
    let moved = stdout(&berk(&["transport", "--tri", tri, "--code", &code, "--map", T2]));
    let m: serde_json::Value = serde_json::from_str(&moved).unwrap();
    assert_eq!(m["code"]["w"]["r"]["exp"], "-3/1");
    let vertex = r#"{"part":"tube","x":0,"alpha":0,"w":{"a":"0","r":{"exp":"-1"}}}"#;
    let refined = stdout(&berk(&["transport", "--tri", tri, "--code", vertex, "--refine", r#"[{"a":"0","r":{"exp":"-1"}}]"#]));
    let r: serde_json::Value = serde_json::from_str(&refined).unwrap();
    assert_eq!((r["case"].as_str(), r["code"]["part"].as_str()), (Some("vertex"), Some("vtx2")));
    let compiled = stdout(&berk(&["compile-map", "--map", T2, "--tri", r#"{"domain":"A1","points":[{"a":"0","r":{"exp":"0"}}]}"#]));
    let c: serde_json::Value = serde_json::from_str(&compiled).unwrap();
    assert_eq!(c["edges"][0]["pieces"][0]["m"]["g"], "2/1");
    let fac = berk(&["facade", "--tri", tri]);
    assert_eq!(fac.status.code(), Some(0));
    let dot = stdout(&berk(&["facade", "--format", "dot", "--tri", tri]));
    assert!(dot.starts_with("digraph discs {"));
}

#[test]
fn map_commands() {
    let o = stdout(&berk(&["image", "--map", T2, "--point", r#"{"a":"1","r":{"exp":"-2"}}"#]));
    let v: serde_json::Value = serde_json::from_str(&o).unwrap();
    assert_eq!((v["a"].as_str(), v["r"]["exp"].as_str()), (Some("1/1"), Some("-3/1")));
    let fib = stdout(&berk(&["fiber", "--map", T2, "--point", r#"{"a":"1","r":{"exp":"-3"}}"#, "--roots", r#"["1","-1"]"#]));
    let v: serde_json::Value = serde_json::from_str(&fib).unwrap();
    assert_eq!(v["count"], 2);
    let loc = stdout(&berk(&["locus", "--map", T2, "--d", "2"]));
    let v: serde_json::Value = serde_json::from_str(&loc).unwrap();
    assert_eq!(v["residual"], false);
    let member = stdout(&berk(&["member", "--set", r#"{"brick":{"kind":"B1","a":"0","s":{"exp":"0"}}}"#, "--point", r#"{"a":"1/2","r":"zero"}"#]));
    assert_eq!(member, "false\n");
    let tri = r#"{"domain":"A1","points":[{"a":"0","r":{"exp":"0"}}]}"#;
    let set = r#"{"pieces":[{"kind":"vertex","x":0,"band":{"lo":"zero","lo_incl":true,"hi":{"exp":"-1"},"hi_incl":false}}]}"#;
    let d: serde_json::Value = serde_json::from_str(&stdout(&berk(&["delta", "--tri", tri, "--set", set]))).unwrap();
    assert_eq!(d["equal"], true);
}

#[test]
fn verify_single_criterion() {
    let o = berk(&["verify", "--criterion", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("[PASS]  6 facade-round-trip"));
    assert_eq!(berk(&["verify", "--criterion", "11"]).status.code(), Some(2));
}
