use std::str::FromStr;

use serde::Serialize;

use super::rules::*;
use super::{eq, ge, gt, le, lt, parse_ext, Context, Scale, SpaceParam, Tri, Verdict};
use crate::error::{Error, Result};

/// Target of an embedding: another space, or `L_r` with `r` in `(0, inf]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EmbedTarget {
    Space(SpaceParam),
    Lebesgue {
        #[serde(with = "super::ext_real")]
        r: f64,
    },
}

/// Parses `L:r` (e.g. `L:inf`) or `SCALE:s:p:q`.
impl FromStr for EmbedTarget {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        if let Some(r) = text.strip_prefix("L:").or_else(|| text.strip_prefix("l:")) {
            let r = parse_ext(r)?;
            if r.is_nan() || r <= 0.0 {
                return Err(Error::InvalidParam(format!("r must lie in (0, inf], got {r}")));
            }
            return Ok(EmbedTarget::Lebesgue { r });
        }
        Ok(EmbedTarget::Space(text.parse()?))
    }
}

/// `A -> L_inf`, with `Unknown` for the one case left open:
/// `F^{|M|}_{1,q}`, `q > 1`, anisotropic.
pub fn linf_embedding(a: &SpaceParam, ctx: &Context) -> Tri {
    let edge = a.a(ctx);
    if gt(a.s, edge) {
        return Tri::True;
    }
    if lt(a.s, edge) {
        return Tri::False;
    }
    match a.scale {
        Scale::B => Tri::from(le(a.q, 1.0)),
        Scale::F => {
            if lt(a.p, 1.0) || (eq(a.p, 1.0) && le(a.q, 1.0)) || (ctx.isotropic && le(a.p, 1.0)) {
                Tri::True
            } else if gt(a.p, 1.0) {
                Tri::False
            } else {
                Tri::Unknown
            }
        }
    }
}

fn linf_rule(scale: Scale) -> &'static str {
    match scale {
        Scale::B => EMB_LINF_B,
        Scale::F => EMB_LINF_F,
    }
}

fn lebesgue_check(a: &SpaceParam, r: f64, ctx: &Context) -> Verdict {
    if r.is_infinite() {
        return match linf_embedding(a, ctx) {
            Tri::True => Verdict::bounded(vec![linf_rule(a.scale)]),
            Tri::False => Verdict::unbounded(vec![EMB_CONVERSE]),
            Tri::Unknown => Verdict::open(vec![EMB_OPEN]),
        };
    }
    let m = ctx.mtot;
    let (s, edge, b) = (a.s, a.a(ctx), m / r);
    let mut bad = Vec::new();
    if lt(s, 0.0) {
        bad.push(THETA_SCALING);
    }
    if gt(b, edge) || lt(b, edge - s) {
        bad.push(RHO_SCALING);
    }
    if !bad.is_empty() {
        return Verdict::unbounded(bad);
    }
    let lr_rule = if a.scale == Scale::F { EMB_LR_F } else { EMB_LR_B };
    if gt(s, 0.0) && ge(s, edge) {
        // drop a little smoothness and land strictly inside the Sobolev range
        return Verdict::bounded(vec![EMB_EPS, lr_rule]);
    }
    if lt(s, m * (a.inv_p() - 1.0).max(0.0)) {
        return Verdict::open(vec![UNREACHED]);
    }
    if gt(s, 0.0) {
        // |M|/t = |M|/p - s, and p <= r <= t holds by the checks above
        let t = m / (edge - s);
        let at_end = eq(b, edge - s);
        let ok = match a.scale {
            Scale::F => true,
            Scale::B => !at_end || lt(a.q, t) || (le(a.q, t) && (le(t, 2.0) || ctx.isotropic)),
        };
        return if ok { Verdict::bounded(vec![lr_rule]) } else { Verdict::open(vec![UNREACHED]) };
    }
    // s = 0 forces r = p >= 1
    let ok = match a.scale {
        Scale::F => le(a.q, if gt(a.p, 1.0) { 2.0 } else { 1.0 }),
        Scale::B => le(a.q, a.p.min(2.0)),
    };
    if ok {
        Verdict::bounded(vec![lr_rule])
    } else {
        Verdict::open(vec![UNREACHED])
    }
}

/// `A -> target` on the whole space.
pub fn embedding_check(a: &SpaceParam, target: &EmbedTarget, ctx: &Context) -> Verdict {
    let t = match target {
        EmbedTarget::Lebesgue { r } => return lebesgue_check(a, *r, ctx),
        EmbedTarget::Space(t) => t,
    };
    let (sa, sb) = (a.a(ctx), t.a(ctx));
    let (ds, dt) = (a.s - sa, t.s - sb);
    let mut bad = Vec::new();
    if gt(t.s, a.s) {
        bad.push(THETA_SCALING);
    }
    if gt(sb, sa) || gt(dt, ds) {
        bad.push(RHO_SCALING);
    }
    if !bad.is_empty() {
        return Verdict::unbounded(bad);
    }
    let (w, wt) = (a.inv_q(), t.inv_q());
    let same = a.scale == t.scale;
    let iso = ctx.isotropic;
    if eq(sa, sb) {
        if lt(t.s, a.s) {
            let rules = if same { vec![EMB_EPS] } else { vec![EMB_EPS, EMB_CROSS] };
            return Verdict::bounded(rules);
        }
        if gt(w, wt) {
            return Verdict::unbounded(vec![THETA_FAMILY]);
        }
        let ok = match (a.scale, t.scale) {
            (Scale::B, Scale::F) => le(a.q, a.p.min(t.q)),
            (Scale::F, Scale::B) => ge(t.q, a.p.max(a.q)),
            _ => true,
        };
        let rules = if same { vec![EMB_SIMPLE] } else { vec![EMB_CROSS] };
        return if ok { Verdict::bounded(rules) } else { Verdict::open(vec![UNREACHED]) };
    }
    // here |M|/r < |M|/p
    let sobolev = if a.scale == Scale::B { EMB_SOBOLEV_B } else { EMB_SOBOLEV_F };
    if lt(dt, ds) {
        let rules = if same { vec![sobolev] } else { vec![sobolev, EMB_EPS, EMB_CROSS] };
        return Verdict::bounded(rules);
    }
    match (a.scale, t.scale) {
        (Scale::B, Scale::B) => {
            if le(w, wt) {
                Verdict::bounded(vec![EMB_SOBOLEV_B])
            } else {
                Verdict::unbounded(vec![RHO_FAMILY])
            }
        }
        (Scale::F, Scale::F) => Verdict::bounded(vec![EMB_SOBOLEV_F]),
        (Scale::B, Scale::F) => {
            let ok = if iso { le(a.q, t.p) } else { lt(a.q, t.p) || (eq(a.q, t.p) && le(t.p, t.q)) };
            if ok {
                Verdict::bounded(vec![EMB_JAWERTH])
            } else {
                Verdict::open(vec![UNREACHED])
            }
        }
        (Scale::F, Scale::B) => {
            let ok = if iso { le(a.p, t.q) } else { lt(a.p, t.q) || (le(a.q, a.p) && eq(a.p, t.q)) };
            if ok {
                Verdict::bounded(vec![EMB_JAWERTH])
            } else {
                Verdict::open(vec![UNREACHED])
            }
        }
    }
}

/// `A -> target` over a bounded open set, where the integral exponent may
/// also decrease.
pub fn bounded_domain_embedding_check(a: &SpaceParam, t: &SpaceParam, ctx: &Context) -> Verdict {
    let (ds, dt) = (a.delta(ctx), t.delta(ctx));
    let mut bad = Vec::new();
    if gt(t.s, a.s) {
        bad.push(THETA_SCALING);
    }
    if gt(dt, ds) {
        bad.push(RHO_SCALING);
    }
    if !bad.is_empty() {
        return Verdict::unbounded(bad);
    }
    let same_s = eq(t.s, a.s);
    let on_line = eq(dt, ds);
    let strict = !same_s && !on_line;
    match (a.scale, t.scale) {
        (Scale::B, Scale::B) => {
            if strict || le(a.q, t.q) {
                Verdict::bounded(vec![DOMAIN_B])
            } else {
                Verdict::open(vec![UNREACHED])
            }
        }
        (Scale::F, Scale::F) => {
            if !same_s || le(a.q, t.q) {
                Verdict::bounded(vec![DOMAIN_F])
            } else {
                Verdict::open(vec![UNREACHED])
            }
        }
        // B^s_{p,q} -> B^t_{r,min(r,o)} -> F^t_{r,o}
        (Scale::B, Scale::F) => {
            if strict {
                Verdict::bounded(vec![DOMAIN_B, EMB_EPS, EMB_CROSS])
            } else if le(a.q, t.p.min(t.q)) {
                Verdict::bounded(vec![DOMAIN_B, EMB_CROSS])
            } else {
                Verdict::open(vec![UNREACHED])
            }
        }
        // F^s_{p,q} -> B^s_{p,max(p,q)} -> B^t_{r,o}
        (Scale::F, Scale::B) => {
            if strict {
                Verdict::bounded(vec![EMB_CROSS, EMB_EPS, DOMAIN_B])
            } else if le(a.p.max(a.q), t.q) {
                Verdict::bounded(vec![EMB_CROSS, DOMAIN_B])
            } else {
                Verdict::open(vec![UNREACHED])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Status;

    fn ctx1() -> Context {
        Context::isotropic(1)
    }

    #[test]
    fn examples() {
        let c = ctx1();
        let inf = f64::INFINITY;
        let v = embedding_check(&SpaceParam::b(1.0, 2.0, 2.0), &EmbedTarget::Space(SpaceParam::b(0.5, inf, 2.0)), &c);
        assert_eq!(v, Verdict::bounded(vec![EMB_SOBOLEV_B]));
        let v = embedding_check(&SpaceParam::b(0.5, 2.0, 2.0), &EmbedTarget::Lebesgue { r: inf }, &c);
        assert_eq!(v.status, Status::Unbounded);
        let aniso = Context::new(3.0, false).unwrap();
        let v = embedding_check(&SpaceParam::f(3.0, 1.0, 2.0), &EmbedTarget::Lebesgue { r: inf }, &aniso);
        assert_eq!(v, Verdict::open(vec![EMB_OPEN]));
        let iso = Context::isotropic(3);
        let v = embedding_check(&SpaceParam::f(3.0, 1.0, 2.0), &EmbedTarget::Lebesgue { r: inf }, &iso);
        assert_eq!(v.status, Status::Bounded);
    }

    #[test]
    fn bounded_domain_examples() {
        let c = ctx1();
        let v = bounded_domain_embedding_check(&SpaceParam::b(1.0, 4.0, 2.0), &SpaceParam::b(1.0, 2.0, 2.0), &c);
        assert_eq!(v.status, Status::Bounded);
        let v =
            bounded_domain_embedding_check(&SpaceParam::f(1.0, 4.0, f64::INFINITY), &SpaceParam::f(0.5, 2.0, 3.0), &c);
        assert_eq!(v.status, Status::Bounded);
        let v = bounded_domain_embedding_check(&SpaceParam::b(0.5, 4.0, 2.0), &SpaceParam::b(1.0, 2.0, 2.0), &c);
        assert_eq!(v.status, Status::Unbounded);
        // the whole space does not allow p to drop
        let v = embedding_check(&SpaceParam::b(1.0, 4.0, 2.0), &EmbedTarget::Space(SpaceParam::b(1.0, 2.0, 2.0)), &c);
        assert_eq!(v.status, Status::Unbounded);
    }

    #[test]
    fn lebesgue_targets() {
        let c = ctx1();
        let l = |r: f64| EmbedTarget::Lebesgue { r };
        assert_eq!(embedding_check(&SpaceParam::f(0.25, 2.0, 5.0), &l(4.0), &c).status, Status::Bounded);
        assert_eq!(embedding_check(&SpaceParam::f(0.25, 2.0, 5.0), &l(5.0), &c).status, Status::Unbounded);
        assert_eq!(embedding_check(&SpaceParam::b(0.25, 2.0, 5.0), &l(4.0), &c).status, Status::Open);
        assert_eq!(embedding_check(&SpaceParam::b(0.25, 2.0, 2.0), &l(4.0), &c).status, Status::Bounded);
        assert_eq!(embedding_check(&SpaceParam::b(0.0, 2.0, 2.0), &l(2.0), &c).status, Status::Bounded);
        assert_eq!(embedding_check(&SpaceParam::b(-0.1, 2.0, 2.0), &l(2.0), &c).status, Status::Unbounded);
        assert_eq!(embedding_check(&SpaceParam::b(1.0, 2.0, 2.0), &l(1.0), &c).status, Status::Unbounded);
        assert_eq!(embedding_check(&SpaceParam::b(1.0, 2.0, 2.0), &l(7.0), &c).status, Status::Bounded);
    }

    #[test]
    fn target_parsing() {
        assert_eq!("L:inf".parse::<EmbedTarget>().unwrap(), EmbedTarget::Lebesgue { r: f64::INFINITY });
        assert!(matches!("F:1:2:2".parse::<EmbedTarget>().unwrap(), EmbedTarget::Space(_)));
        assert!("L:0".parse::<EmbedTarget>().is_err());
    }
}
