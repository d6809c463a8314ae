//! Symbolic calculus for the product `pi: A0 (+) A1 -> A2` of Besov and
//! Triebel-Lizorkin spaces: necessary conditions, the multiplication domain,
//! receiving regions and embeddings.
//!
//! Every inequality is affine in `1/p` and `1/q` (with `1/inf = 0`). Equality
//! is decided with the relative tolerance [`TOL`], which also decides whether
//! a point sits on an edge or inside a region.

mod audit;
mod domain;
mod embedding;
mod necessary;
mod region;
pub mod rules;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Weight;
pub use crate::norms::Scale;

pub use audit::{audit_region, consistency_audit, AuditReport, Violation};
pub use domain::{borderline_conditions, domain_check};
pub use embedding::{bounded_domain_embedding_check, embedding_check, linf_embedding, EmbedTarget};
pub use necessary::{necessary_conditions, violated, Condition, Holds};
pub use region::{algebra_check, member, receiving_region, Judgement, Membership, Piece, ReceivingRegion, Shape, WBound};

pub const TOL: f64 = 1e-12;

pub(crate) fn eq(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= TOL * 1f64.max(a.abs()).max(b.abs())
}

pub(crate) fn le(a: f64, b: f64) -> bool {
    a <= b || eq(a, b)
}

pub(crate) fn lt(a: f64, b: f64) -> bool {
    a < b && !eq(a, b)
}

pub(crate) fn ge(a: f64, b: f64) -> bool {
    le(b, a)
}

pub(crate) fn gt(a: f64, b: f64) -> bool {
    lt(b, a)
}

pub(crate) fn recip(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

fn pos(x: f64) -> f64 {
    x.max(0.0)
}

fn neg(x: f64) -> f64 {
    (-x).max(0.0)
}

/// `min(a, b, a + b)`.
pub fn min_plus(a: f64, b: f64) -> f64 {
    a.min(b).min(a + b)
}

/// Parameters `(s, p, q)` of `B^s_{p,q}` or `F^s_{p,q}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParam {
    pub scale: Scale,
    pub s: f64,
    #[serde(with = "ext_real")]
    pub p: f64,
    #[serde(with = "ext_real")]
    pub q: f64,
}

impl SpaceParam {
    pub fn new(scale: Scale, s: f64, p: f64, q: f64) -> Result<Self> {
        let sp = SpaceParam { scale, s, p, q };
        sp.validate()?;
        Ok(sp)
    }

    /// `B^s_{p,q}`; panics on invalid parameters.
    pub fn b(s: f64, p: f64, q: f64) -> Self {
        Self::new(Scale::B, s, p, q).expect("valid Besov parameters")
    }

    /// `F^s_{p,q}`; panics on invalid parameters.
    pub fn f(s: f64, p: f64, q: f64) -> Self {
        Self::new(Scale::F, s, p, q).expect("valid Triebel-Lizorkin parameters")
    }

    pub fn validate(&self) -> Result<()> {
        if !self.s.is_finite() {
            return Err(Error::InvalidParam(format!("s must be finite, got {}", self.s)));
        }
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if v.is_nan() || v <= 0.0 {
                return Err(Error::InvalidParam(format!("{name} must lie in (0, inf], got {v}")));
            }
        }
        if self.scale == Scale::F && self.p.is_infinite() {
            return Err(Error::InvalidParam("the F scale needs p < inf".into()));
        }
        Ok(())
    }

    pub fn with_scale(self, scale: Scale) -> Self {
        SpaceParam { scale, ..self }
    }

    pub fn with_q(self, q: f64) -> Self {
        SpaceParam { q, ..self }
    }

    pub fn inv_p(&self) -> f64 {
        recip(self.p)
    }

    pub fn inv_q(&self) -> f64 {
        recip(self.q)
    }

    /// `|M|/p`.
    pub fn a(&self, ctx: &Context) -> f64 {
        ctx.mtot * self.inv_p()
    }

    /// `s - |M|/p`.
    pub fn delta(&self, ctx: &Context) -> f64 {
        self.s - self.a(ctx)
    }
}

impl fmt::Display for SpaceParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = |v: f64| if v.is_infinite() { "inf".to_string() } else { v.to_string() };
        write!(f, "{}:{}:{}:{}", self.scale, self.s, e(self.p), e(self.q))
    }
}

/// Parses `SCALE:s:p:q`, e.g. `B:1:2:inf`.
impl FromStr for SpaceParam {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidParam(format!("expected SCALE:s:p:q, got `{text}`")));
        }
        let scale = match parts[0] {
            "B" | "b" => Scale::B,
            "F" | "f" => Scale::F,
            other => return Err(Error::InvalidParam(format!("unknown scale `{other}`"))),
        };
        SpaceParam::new(scale, parse_ext(parts[1])?, parse_ext(parts[2])?, parse_ext(parts[3])?)
    }
}

/// A real number or `inf`.
pub fn parse_ext(t: &str) -> Result<f64> {
    match t.trim() {
        "inf" | "Inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        v => v.parse::<f64>().map_err(|_| Error::InvalidParam(format!("bad number `{v}`"))),
    }
}

pub(crate) mod ext_real {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) => super::parse_ext(&t).map_err(serde::de::Error::custom),
        }
    }
}

/// What the calculus needs to know about the weight: `|M|`, and whether
/// `M = (1, ..., 1)` so that the isotropic sharpenings apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Context {
    pub mtot: f64,
    pub isotropic: bool,
}

impl Context {
    pub fn new(mtot: f64, isotropic: bool) -> Result<Self> {
        if !(mtot.is_finite() && mtot >= 1.0) {
            return Err(Error::InvalidParam(format!("|M| must be a finite number >= 1, got {mtot}")));
        }
        Ok(Context { mtot, isotropic })
    }

    pub fn isotropic(n: usize) -> Self {
        Context { mtot: n as f64, isotropic: true }
    }

    pub fn from_weight(w: &Weight) -> Self {
        Context { mtot: w.total(), isotropic: w.is_isotropic() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Bounded,
    Unbounded,
    Open,
}

/// A decision together with the rules it rests on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub rules: Vec<&'static str>,
}

impl Verdict {
    pub fn bounded(rules: Vec<&'static str>) -> Self {
        Verdict { status: Status::Bounded, rules }
    }

    pub fn unbounded(rules: Vec<&'static str>) -> Self {
        Verdict { status: Status::Unbounded, rules }
    }

    pub fn open(rules: Vec<&'static str>) -> Self {
        Verdict { status: Status::Open, rules }
    }

    pub fn is_bounded(&self) -> bool {
        self.status == Status::Bounded
    }
}

/// `1/p`, `q` and `|M|/p*_1` for an ordered pair `s0 >= s1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Derived {
    pub inv_p: f64,
    #[serde(with = "ext_real")]
    pub p: f64,
    #[serde(with = "ext_real")]
    pub q: f64,
    /// `|M|/p*_1`
    pub a_star: f64,
    #[serde(with = "ext_real")]
    pub p_star1: f64,
}

pub fn derived_exponents(a0: &SpaceParam, a1: &SpaceParam, ctx: &Context) -> Result<Derived> {
    if lt(a0.s, a1.s) {
        return Err(Error::InvalidParam(format!("need s0 >= s1, got s0 = {}, s1 = {}", a0.s, a1.s)));
    }
    let inv_p = a0.inv_p() + a1.inv_p();
    let inv_q = if eq(a0.s, a1.s) { a0.inv_q().min(a1.inv_q()) } else { a1.inv_q() };
    let (d0, d1) = (a0.delta(ctx), a1.delta(ctx));
    let a_star = a1.a(ctx) + neg(d0) + pos(d1 - pos(d0));
    Ok(Derived { inv_p, p: recip(inv_p), q: recip(inv_q), a_star, p_star1: ctx.mtot * recip(a_star) })
}

/// The pair ordered so that `s0 >= s1`.
pub fn ordered(a0: SpaceParam, a1: SpaceParam) -> (SpaceParam, SpaceParam) {
    if a0.s < a1.s {
        (a1, a0)
    } else {
        (a0, a1)
    }
}

/// Three-valued truth used when a rule depends on a statement left open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    pub fn and(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }

    pub fn or(self, o: Tri) -> Tri {
        match (self, o) {
            (Tri::True, _) | (_, Tri::True) => Tri::True,
            (Tri::False, Tri::False) => Tri::False,
            _ => Tri::Unknown,
        }
    }

    /// `cond => self`.
    pub fn when(self, cond: bool) -> Tri {
        if cond {
            self
        } else {
            Tri::True
        }
    }
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        Tri::from_bool(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_plus_examples() {
        assert_eq!(min_plus(1.0, 2.0), 1.0);
        assert_eq!(min_plus(-1.0, 2.0), -1.0);
        assert_eq!(min_plus(1.0, -0.5), -0.5);
        assert_eq!(min_plus(-1.0, -1.0), -2.0);
    }

    #[test]
    fn derived_examples() {
        let ctx = Context::isotropic(1);
        let d = derived_exponents(&SpaceParam::b(1.0, 2.0, 2.0), &SpaceParam::b(0.2, 2.0, 8.0), &ctx).unwrap();
        assert!((d.a_star - 0.5).abs() < 1e-15);
        assert_eq!(d.p_star1, 2.0);
        assert_eq!(d.q, 8.0);
        assert_eq!(d.inv_p, 1.0);
        let d = derived_exponents(&SpaceParam::b(0.25, 2.0, 2.0), &SpaceParam::b(0.0, 2.0, 2.0), &ctx).unwrap();
        assert!((d.a_star - 0.75).abs() < 1e-15);
        let d = derived_exponents(&SpaceParam::b(1.0, 2.0, 3.0), &SpaceParam::b(1.0, 2.0, 2.0), &ctx).unwrap();
        assert_eq!(d.q, 3.0);
        assert!(derived_exponents(&SpaceParam::b(0.0, 2.0, 2.0), &SpaceParam::b(1.0, 2.0, 2.0), &ctx).is_err());
    }

    #[test]
    fn parse_and_print() {
        let a: SpaceParam = "B:1:2:inf".parse().unwrap();
        assert_eq!(a, SpaceParam::b(1.0, 2.0, f64::INFINITY));
        assert_eq!(a.to_string(), "B:1:2:inf");
        assert!("F:1:inf:2".parse::<SpaceParam>().is_err());
        assert!("B:1:2".parse::<SpaceParam>().is_err());
        assert!("X:1:2:2".parse::<SpaceParam>().is_err());
        assert!("B:1:0:2".parse::<SpaceParam>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let a = SpaceParam::b(1.0, f64::INFINITY, 2.0);
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, r#"{"scale":"B","s":1.0,"p":"inf","q":2.0}"#);
        let back: SpaceParam = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn tri_logic() {
        use Tri::*;
        assert_eq!(True.and(Unknown), Unknown);
        assert_eq!(False.and(Unknown), False);
        assert_eq!(True.or(Unknown), True);
        assert_eq!(False.or(Unknown), Unknown);
        assert_eq!(False.when(false), True);
    }
}
