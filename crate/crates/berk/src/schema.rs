//! JSON forms of kernel values.
//!
//! Rationals are written `"num/den"` in lowest terms; radii as
//! `{"zero": true}`, `{"exp": "q"}` (meaning `p^q`) or `{"inf": true}`.

use std::fmt;
use std::str::FromStr;

use berk_core::bradial::Disc;
use berk_core::curveradial::{Band, CurvePiece, CurveRadialSet};
use berk_core::facade::{Domain, Edge, EdgeShape, Encoded, Facade, Mobius};
use berk_core::maps::{Fiber, LocusReport};
use berk_core::{BPoint, BasicRadial, Brick, Expr, Monomial, PPoint, Polynomial, Radius, RadialSet, RationalMap, SwissCheese, Q};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub path: String,
    pub msg: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.msg)
    }
}

impl std::error::Error for SchemaError {}

pub type Parsed<T> = Result<T, SchemaError>;

fn err<T>(path: &str, msg: impl Into<String>) -> Parsed<T> {
    Err(SchemaError { path: path.to_string(), msg: msg.into() })
}

fn at(path: &str, key: &str) -> String {
    format!("{path}.{key}")
}

fn idx(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

fn obj<'a>(v: &'a Value, path: &str) -> Parsed<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| SchemaError { path: path.into(), msg: "expected an object".into() })
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Parsed<&'a Value> {
    obj(v, path)?.get(key).ok_or_else(|| SchemaError { path: at(path, key), msg: "missing".into() })
}

fn arr<'a>(v: &'a Value, path: &str) -> Parsed<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| SchemaError { path: path.into(), msg: "expected an array".into() })
}

fn list<T>(v: &Value, path: &str, f: impl Fn(&Value, &str) -> Parsed<T>) -> Parsed<Vec<T>> {
    arr(v, path)?.iter().enumerate().map(|(i, x)| f(x, &idx(path, i))).collect()
}

fn uint(v: &Value, path: &str) -> Parsed<usize> {
    match v.as_u64() {
        Some(n) => Ok(n as usize),
        None => err(path, "expected a nonnegative integer"),
    }
}

fn boolean(v: &Value, path: &str) -> Parsed<bool> {
    v.as_bool().ok_or_else(|| SchemaError { path: path.into(), msg: "expected a boolean".into() })
}

fn opt<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.as_object().and_then(|m| m.get(key))
}

pub fn rational(v: &Value, path: &str) -> Parsed<Q> {
    match v {
        Value::String(s) => Q::from_str(s.trim()).or_else(|e| err(path, format!("bad rational {s:?}: {e}"))),
        Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().unwrap().into())),
        _ => err(path, "expected a rational string \"num/den\""),
    }
}

pub fn q_out(x: &Q) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

pub fn radius(v: &Value, path: &str) -> Parsed<Radius> {
    match v {
        Value::String(s) if s == "zero" => Ok(Radius::Zero),
        Value::String(s) if s == "inf" => Ok(Radius::Infinity),
        Value::Object(m) => {
            if m.len() != 1 {
                return err(path, "expected exactly one of zero, exp, inf");
            }
            let (k, x) = m.iter().next().unwrap();
            match k.as_str() {
                "zero" if x == &Value::Bool(true) => Ok(Radius::Zero),
                "inf" if x == &Value::Bool(true) => Ok(Radius::Infinity),
                "exp" => Ok(Radius::Exp(rational(x, &at(path, "exp"))?)),
                _ => err(&at(path, k), "expected zero: true, inf: true or exp: \"q\""),
            }
        }
        _ => err(path, "expected a radius"),
    }
}

pub fn radius_out(r: &Radius) -> Value {
    match r {
        Radius::Zero => json!({"zero": true}),
        Radius::Infinity => json!({"inf": true}),
        Radius::Exp(q) => json!({"exp": q_out(q)}),
    }
}

pub fn point(v: &Value, path: &str) -> Parsed<BPoint> {
    let a = rational(field(v, "a", path)?, &at(path, "a"))?;
    let r = radius(field(v, "r", path)?, &at(path, "r"))?;
    BPoint::new(a, r).or_else(|e| err(path, e.to_string()))
}

pub fn point_out(x: &BPoint) -> Value {
    json!({"a": q_out(&x.center), "r": radius_out(&x.radius)})
}

pub fn ppoint(v: &Value, path: &str) -> Parsed<PPoint> {
    match v {
        Value::String(s) if s == "inf" => Ok(PPoint::Inf),
        _ => Ok(PPoint::Aff(point(v, path)?)),
    }
}

pub fn ppoint_out(x: &PPoint) -> Value {
    match x {
        PPoint::Inf => json!("inf"),
        PPoint::Aff(p) => point_out(p),
    }
}

pub fn polynomial(v: &Value, path: &str) -> Parsed<Polynomial> {
    let p = at(path, "coeffs");
    Ok(Polynomial::new(list(field(v, "coeffs", path)?, &p, rational)?))
}

pub fn polynomial_out(p: &Polynomial) -> Value {
    json!({"coeffs": p.coeffs().iter().map(q_out).collect::<Vec<_>>()})
}

pub fn map(v: &Value, path: &str) -> Parsed<RationalMap> {
    let num = polynomial(field(v, "num", path)?, &at(path, "num"))?;
    let den = match opt(v, "den") {
        Some(d) => polynomial(d, &at(path, "den"))?,
        None => Polynomial::one(),
    };
    RationalMap::new(num, den).or_else(|e| err(path, e.to_string()))
}

pub fn map_out(h: &RationalMap) -> Value {
    json!({"num": polynomial_out(h.num()), "den": polynomial_out(h.den())})
}

pub fn monomial(v: &Value, path: &str) -> Parsed<Monomial> {
    let rho = radius(field(v, "rho", path)?, &at(path, "rho"))?;
    let g = rational(field(v, "g", path)?, &at(path, "g"))?;
    Ok(Monomial::new(rho, g))
}

pub fn monomial_out(m: &Monomial) -> Value {
    json!({"rho": radius_out(&m.rho), "g": q_out(&m.g)})
}

fn rad(v: &Value, key: &str, path: &str) -> Parsed<Radius> {
    radius(field(v, key, path)?, &at(path, key))
}

fn rat(v: &Value, key: &str, path: &str) -> Parsed<Q> {
    rational(field(v, key, path)?, &at(path, key))
}

fn rats(v: &Value, key: &str, path: &str) -> Parsed<Vec<Q>> {
    match opt(v, key) {
        Some(x) => list(x, &at(path, key), rational),
        None => Ok(Vec::new()),
    }
}

fn kind<'a>(v: &'a Value, path: &str) -> Parsed<&'a str> {
    field(v, "kind", path)?.as_str().ok_or_else(|| SchemaError { path: at(path, "kind"), msg: "expected a string".into() })
}

pub fn basic(v: &Value, path: &str) -> Parsed<BasicRadial> {
    let a = || rat(v, "a", path);
    let r = |k: &str| rad(v, k, path);
    Ok(match kind(v, path)? {
        "R0" => BasicRadial::R0 { a: a()?, s: r("s")? },
        "R1" => BasicRadial::R1 { a: a()?, s1: r("s1")?, s2: r("s2")? },
        "R2" => BasicRadial::R2 { a: a()?, s1: r("s1")?, s2: r("s2")?, rho1: r("rho1")?, g1: rat(v, "g1", path)? },
        "R3" => BasicRadial::R3 {
            a: a()?,
            s1: r("s1")?,
            s2: r("s2")?,
            rho1: r("rho1")?,
            g1: rat(v, "g1", path)?,
            rho2: r("rho2")?,
            g2: rat(v, "g2", path)?,
        },
        "R4" => BasicRadial::R4 { a: a()?, s: r("s")?, holes: rats(v, "holes", path)?, s1: r("s1")? },
        "R5" => BasicRadial::R5 { a: a()?, s: r("s")?, holes: rats(v, "holes", path)?, s1: r("s1")?, s2: r("s2")? },
        "R6" => BasicRadial::R6 { a: a()?, s: r("s")?, s1: r("s1")? },
        "R7" => BasicRadial::R7 { a: a()?, s: r("s")?, s1: r("s1")?, s2: r("s2")? },
        k => return err(&at(path, "kind"), format!("unknown piece kind {k:?}")),
    })
}

pub fn basic_out(p: &BasicRadial) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(p.kind()));
    let mut put = |k: &str, v: Value| {
        m.insert(k.into(), v);
    };
    match p {
        BasicRadial::R0 { a, s } => {
            put("a", q_out(a));
            put("s", radius_out(s));
        }
        BasicRadial::R1 { a, s1, s2 } => {
            put("a", q_out(a));
            put("s1", radius_out(s1));
            put("s2", radius_out(s2));
        }
        BasicRadial::R2 { a, s1, s2, rho1, g1 } => {
            put("a", q_out(a));
            put("s1", radius_out(s1));
            put("s2", radius_out(s2));
            put("rho1", radius_out(rho1));
            put("g1", q_out(g1));
        }
        BasicRadial::R3 { a, s1, s2, rho1, g1, rho2, g2 } => {
            put("a", q_out(a));
            put("s1", radius_out(s1));
            put("s2", radius_out(s2));
            put("rho1", radius_out(rho1));
            put("g1", q_out(g1));
            put("rho2", radius_out(rho2));
            put("g2", q_out(g2));
        }
        BasicRadial::R4 { a, s, holes, s1 } => {
            put("a", q_out(a));
            put("s", radius_out(s));
            put("holes", Value::Array(holes.iter().map(q_out).collect()));
            put("s1", radius_out(s1));
        }
        BasicRadial::R5 { a, s, holes, s1, s2 } => {
            put("a", q_out(a));
            put("s", radius_out(s));
            put("holes", Value::Array(holes.iter().map(q_out).collect()));
            put("s1", radius_out(s1));
            put("s2", radius_out(s2));
        }
        BasicRadial::R6 { a, s, s1 } => {
            put("a", q_out(a));
            put("s", radius_out(s));
            put("s1", radius_out(s1));
        }
        BasicRadial::R7 { a, s, s1, s2 } => {
            put("a", q_out(a));
            put("s", radius_out(s));
            put("s1", radius_out(s1));
            put("s2", radius_out(s2));
        }
    }
    Value::Object(m)
}

pub fn radial_set(v: &Value, path: &str) -> Parsed<RadialSet> {
    Ok(RadialSet::new(list(field(v, "pieces", path)?, &at(path, "pieces"), basic)?))
}

pub fn radial_set_out(s: &RadialSet) -> Value {
    json!({"pieces": s.pieces.iter().map(basic_out).collect::<Vec<_>>()})
}

pub fn brick(v: &Value, path: &str) -> Parsed<Brick> {
    let a = || rat(v, "a", path);
    let r = |k: &str| rad(v, k, path);
    Ok(match kind(v, path)? {
        "B0" => Brick::B0 { a: a()? },
        "B1" => Brick::B1 { a: a()?, s: r("s")? },
        "B2" => Brick::B2 { a: a()?, s1: r("s1")?, s2: r("s2")? },
        "B3" => Brick::B3 { a: a()?, s: r("s")?, holes: rats(v, "holes", path)? },
        k => return err(&at(path, "kind"), format!("unknown brick kind {k:?}")),
    })
}

pub fn brick_out(b: &Brick) -> Value {
    match b {
        Brick::B0 { a } => json!({"kind": "B0", "a": q_out(a)}),
        Brick::B1 { a, s } => json!({"kind": "B1", "a": q_out(a), "s": radius_out(s)}),
        Brick::B2 { a, s1, s2 } => json!({"kind": "B2", "a": q_out(a), "s1": radius_out(s1), "s2": radius_out(s2)}),
        Brick::B3 { a, s, holes } => {
            json!({"kind": "B3", "a": q_out(a), "s": radius_out(s), "holes": holes.iter().map(q_out).collect::<Vec<_>>()})
        }
    }
}

fn disc(v: &Value, path: &str) -> Parsed<Disc> {
    let a = rat(v, "a", path)?;
    let r = rad(v, "r", path)?;
    let open = match opt(v, "open") {
        Some(o) => boolean(o, &at(path, "open"))?,
        None => false,
    };
    Ok(if open { Disc::open(a, r) } else { Disc::closed(a, r) })
}

fn cheese(v: &Value, path: &str) -> Parsed<SwissCheese> {
    let outer = match opt(v, "outer") {
        Some(o) => disc(o, &at(path, "outer"))?,
        None => Disc::line(),
    };
    let holes = match opt(v, "holes") {
        Some(h) => list(h, &at(path, "holes"), disc)?,
        None => Vec::new(),
    };
    Ok(SwissCheese { outer, holes })
}

/// A boolean expression: `{"op": "union|inter|diff|compl", "args": [...]}`,
/// a piece (`{"kind": "R0", ...}`), a set (`{"pieces": [...]}`), a brick
/// (`{"brick": {...}}`) or a Swiss cheese (`{"cheese": {...}}`).
pub fn expr(v: &Value, path: &str) -> Parsed<Expr> {
    if let Some(op) = opt(v, "op") {
        let args = list(field(v, "args", path)?, &at(path, "args"), expr)?;
        let op = op.as_str().unwrap_or("");
        let n = args.len();
        let mut it = args.into_iter();
        return match (op, n) {
            ("union", _) => Ok(Expr::Union(it.collect())),
            ("inter", _) => Ok(Expr::Inter(it.collect())),
            ("diff", 2) => Ok(Expr::diff(it.next().unwrap(), it.next().unwrap())),
            ("compl", 1) => Ok(Expr::compl(it.next().unwrap())),
            ("diff" | "compl", _) => err(&at(path, "args"), format!("wrong number of arguments for {op}")),
            _ => err(&at(path, "op"), format!("unknown operation {op:?}")),
        };
    }
    if opt(v, "kind").is_some() {
        return Ok(Expr::Piece(basic(v, path)?));
    }
    if opt(v, "pieces").is_some() {
        return Ok(Expr::Set(radial_set(v, path)?));
    }
    if let Some(b) = opt(v, "brick") {
        return Ok(Expr::Brick(brick(b, &at(path, "brick"))?));
    }
    if let Some(c) = opt(v, "cheese") {
        return Ok(Expr::Cheese(cheese(c, &at(path, "cheese"))?));
    }
    err(path, "expected op, kind, pieces, brick or cheese")
}

pub fn domain(v: &Value, path: &str) -> Parsed<Domain> {
    match v {
        Value::String(s) if s == "A1" => Ok(Domain::Affine),
        Value::String(s) if s == "P1" => Ok(Domain::Projective),
        Value::Object(_) => {
            let d = field(v, "disc", path)?;
            let p = at(path, "disc");
            Ok(Domain::Disc { center: rat(d, "a", &p)?, radius: rad(d, "r", &p)? })
        }
        _ => err(path, "expected \"A1\", \"P1\" or {\"disc\": {\"a\", \"r\"}}"),
    }
}

pub fn domain_out(d: &Domain) -> Value {
    match d {
        Domain::Affine => json!("A1"),
        Domain::Projective => json!("P1"),
        Domain::Disc { center, radius } => json!({"disc": {"a": q_out(center), "r": radius_out(radius)}}),
    }
}

pub struct Triangulation {
    pub domain: Domain,
    pub points: Vec<BPoint>,
}

pub fn triangulation(v: &Value, path: &str) -> Parsed<Triangulation> {
    Ok(Triangulation {
        domain: domain(field(v, "domain", path)?, &at(path, "domain"))?,
        points: list(field(v, "points", path)?, &at(path, "points"), point)?,
    })
}

pub fn triangulation_out(d: &Domain, pts: &[BPoint]) -> Value {
    json!({"domain": domain_out(d), "points": pts.iter().map(point_out).collect::<Vec<_>>()})
}

pub fn encoded(v: &Value, path: &str) -> Parsed<Encoded> {
    let part = field(v, "part", path)?.as_str().unwrap_or("");
    let n = |k: &str| uint(field(v, k, path)?, &at(path, k));
    let w = || point(field(v, "w", path)?, &at(path, "w"));
    Ok(match part {
        "vtx1" => Encoded::Vtx1(n("x")?),
        "vtx2" => Encoded::Vtx2(n("x")?),
        "edge" => Encoded::Edge(n("edge")?, w()?),
        "tube" => Encoded::Tube(n("x")?, n("alpha")? as u64, w()?),
        "disc" => Encoded::Disc(n("x")?, n("i")?, w()?),
        p => return err(&at(path, "part"), format!("unknown part {p:?}")),
    })
}

pub fn encoded_out(e: &Encoded) -> Value {
    match e {
        Encoded::Vtx1(x) => json!({"part": "vtx1", "x": x}),
        Encoded::Vtx2(x) => json!({"part": "vtx2", "x": x}),
        Encoded::Edge(i, w) => json!({"part": "edge", "edge": i, "w": point_out(w)}),
        Encoded::Tube(x, a, w) => json!({"part": "tube", "x": x, "alpha": a, "w": point_out(w)}),
        Encoded::Disc(x, i, w) => json!({"part": "disc", "x": x, "i": i, "w": point_out(w)}),
    }
}

pub fn mobius_out(m: &Mobius) -> Value {
    json!({"a": q_out(&m.a), "b": q_out(&m.b), "c": q_out(&m.c), "d": q_out(&m.d)})
}

fn edge_out(e: &Edge) -> Value {
    let shape = match &e.shape {
        EdgeShape::Vertical { center, lower, upper } => {
            json!({"vertical": {"center": q_out(center), "lower": lower, "upper": upper}})
        }
        EdgeShape::Bent { c1, c2, v1, v2, join } => {
            json!({"bent": {"c1": q_out(c1), "c2": q_out(c2), "v1": v1, "v2": v2, "join": point_out(join)}})
        }
    };
    json!({"shape": shape, "chart": mobius_out(&e.chart), "lo": radius_out(&e.lo), "hi": radius_out(&e.hi)})
}

pub fn facade_out(f: &Facade) -> Value {
    let vertices: Vec<Value> = f
        .vertices
        .iter()
        .map(|v| {
            json!({
                "point": point_out(&v.point),
                "chart": v.chart.as_ref().map(mobius_out),
                "excluded": v.excluded,
                "discs": v.discs.iter().map(mobius_out).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "p": f.field.p(),
        "domain": domain_out(&f.domain),
        "vertices": vertices,
        "edges": f.edges.iter().map(edge_out).collect::<Vec<_>>(),
    })
}

fn band(v: &Value, path: &str) -> Parsed<Band> {
    let incl = |k: &str| boolean(field(v, k, path)?, &at(path, k));
    Ok(Band::new(rad(v, "lo", path)?, incl("lo_incl")?, rad(v, "hi", path)?, incl("hi_incl")?))
}

fn band_out(b: &Band) -> Value {
    json!({"lo": radius_out(&b.lo), "lo_incl": b.lo_incl, "hi": radius_out(&b.hi), "hi_incl": b.hi_incl})
}

pub fn curve_piece(v: &Value, path: &str) -> Parsed<CurvePiece> {
    let n = |k: &str| uint(field(v, k, path)?, &at(path, k));
    let b = |k: &str| boolean(field(v, k, path)?, &at(path, k));
    let m = |k: &str| monomial(field(v, k, path)?, &at(path, k));
    Ok(match kind(v, path)? {
        "vertex" => CurvePiece::Vertex { x: n("x")?, band: band(field(v, "band", path)?, &at(path, "band"))? },
        "edge" => CurvePiece::Edge {
            edge: n("edge")?,
            span: band(field(v, "span", path)?, &at(path, "span"))?,
            f1: m("f1")?,
            f1_incl: b("f1_incl")?,
            f2: m("f2")?,
            f2_incl: b("f2_incl")?,
        },
        "type1" => CurvePiece::TypeOne { x: n("x")? },
        k => err(&at(path, "kind"), format!("unknown curve piece kind {k:?}"))?,
    })
}

pub fn curve_piece_out(p: &CurvePiece) -> Value {
    match p {
        CurvePiece::Vertex { x, band } => json!({"kind": "vertex", "x": x, "band": band_out(band)}),
        CurvePiece::Edge { edge, span, f1, f1_incl, f2, f2_incl } => json!({
            "kind": "edge", "edge": edge, "span": band_out(span),
            "f1": monomial_out(f1), "f1_incl": f1_incl, "f2": monomial_out(f2), "f2_incl": f2_incl,
        }),
        CurvePiece::TypeOne { x } => json!({"kind": "type1", "x": x}),
    }
}

pub fn curve_set(v: &Value, path: &str) -> Parsed<CurveRadialSet> {
    Ok(CurveRadialSet::new(list(field(v, "pieces", path)?, &at(path, "pieces"), curve_piece)?))
}

pub fn curve_set_out(s: &CurveRadialSet) -> Value {
    json!({"pieces": s.pieces.iter().map(curve_piece_out).collect::<Vec<_>>()})
}

pub fn locus_out(r: &LocusReport) -> Value {
    json!({
        "d": r.d,
        "residual": r.residual,
        "region": r.region.iter().map(brick_out).collect::<Vec<_>>(),
        "locus": radial_set_out(&r.locus),
    })
}

pub fn fiber_out(f: &Fiber) -> Value {
    json!({"count": f.count, "fiber": f.fiber.iter().map(point_out).collect::<Vec<_>>(), "degrees": f.degrees})
}

/// Pretty JSON with sorted keys and a final newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
