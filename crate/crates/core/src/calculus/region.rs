//! Receiving regions `P(A0, A1)` as unions of pieces in the coordinates
//! `(s2, b = |M|/p2, w = 1/q2)`.

use serde::Serialize;

use super::domain::{domain_check, is_generic, same_scale_images};
use super::embedding::linf_embedding;
use super::ext_real;
use super::necessary::{necessary_conditions, violated};
use super::rules::*;
use super::{derived_exponents, eq, ge, gt, le, lt, min_plus, ordered, recip, Context, Derived, Scale, SpaceParam, Tri};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Yes,
    No,
    Open,
}

/// The `(s2, b)` part of a piece.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// `s2 < s_max`, `0 <= b <= b_max`, `s2 - b < diag`
    Interior { s_max: f64, diag: f64, b_max: f64 },
    /// `s2 = s`, `b_lo < b <= b_hi`
    TopEdge { s: f64, b_lo: f64, b_hi: f64 },
    /// `s2 = s`, `b = b`
    Vertex { s: f64, b: f64 },
    /// `s2 < s_max`, `s2 - b = diag`, `b > b_min` (or `>=` when `b_min_included`)
    Diagonal { s_max: f64, diag: f64, b_min: f64, b_min_included: bool },
}

impl Shape {
    pub fn contains(&self, s2: f64, b: f64) -> bool {
        match *self {
            Shape::Interior { s_max, diag, b_max } => lt(s2, s_max) && b >= 0.0 && le(b, b_max) && lt(s2 - b, diag),
            Shape::TopEdge { s, b_lo, b_hi } => eq(s2, s) && gt(b, b_lo) && le(b, b_hi),
            Shape::Vertex { s, b: v } => eq(s2, s) && eq(b, v),
            Shape::Diagonal { s_max, diag, b_min, b_min_included } => {
                lt(s2, s_max) && eq(s2 - b, diag) && if b_min_included { ge(b, b_min) } else { gt(b, b_min) }
            }
        }
    }
}

/// Upper bound on `w = 1/q2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WBound {
    #[serde(with = "ext_real")]
    pub max: f64,
    pub strict: bool,
}

impl WBound {
    pub fn any() -> Self {
        WBound { max: f64::INFINITY, strict: false }
    }

    /// `q2 >= q`.
    pub fn q_at_least(q: f64) -> Self {
        WBound { max: recip(q), strict: false }
    }

    pub fn w_at_most(w: f64) -> Self {
        WBound { max: w, strict: false }
    }

    pub fn contains(&self, w: f64) -> bool {
        if self.strict {
            lt(w, self.max)
        } else {
            le(w, self.max)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Piece {
    pub shape: Shape,
    /// receiving scale; `None` for both
    pub target: Option<Scale>,
    pub w: WBound,
    /// `Yes` for proven receivers, `Open` where the status is not settled
    pub status: Membership,
    pub rules: Vec<&'static str>,
}

impl Piece {
    fn contains(&self, s2: f64, b: f64, w: f64) -> bool {
        self.shape.contains(s2, b) && self.w.contains(w)
    }

    fn accepts(&self, scale: Scale) -> bool {
        self.target.is_none_or(|t| t == scale)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReceivingRegion {
    /// factors ordered so that `s0 >= s1`
    pub a0: SpaceParam,
    pub a1: SpaceParam,
    pub ctx: Context,
    pub derived: Derived,
    /// `min+(s0 - |M|/p0, s1 - |M|/p1)`
    pub min_plus: f64,
    pub pieces: Vec<Piece>,
    /// receiving scales for which every point outside the pieces is known to fail
    pub complete: Vec<Scale>,
}

/// Outcome of [`member`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Judgement {
    pub membership: Membership,
    pub rules: Vec<&'static str>,
}

fn push_clause(out: &mut Vec<Piece>, truth: Tri, shape: Shape, target: Scale, w: WBound, rules: Vec<&'static str>) {
    let status = match truth {
        Tri::True => Membership::Yes,
        Tri::Unknown => Membership::Open,
        Tri::False => return,
    };
    out.push(Piece { shape, target: Some(target), w, status, rules });
}

/// `q < t = |M|/(|M|/p - s)`, relaxed to `q <= t` when `t <= 2` or `M` is
/// isotropic. Failure is `False` only when `settled` says so.
fn q_below_t(a: &SpaceParam, ctx: &Context, settled: bool) -> Tri {
    let gap = a.a(ctx) - a.s;
    if gap.is_nan() || gap <= 0.0 {
        return Tri::False;
    }
    let t = ctx.mtot / gap;
    if lt(a.q, t) {
        Tri::True
    } else if eq(a.q, t) {
        if le(t, 2.0) || ctx.isotropic {
            Tri::True
        } else {
            Tri::Unknown
        }
    } else if settled {
        Tri::False
    } else {
        Tri::Unknown
    }
}

struct Setup {
    b0: SpaceParam,
    b1: SpaceParam,
    ctx: Context,
    d: Derived,
    a: [f64; 2],
    delta: [f64; 2],
    w: [f64; 2],
    mp: f64,
}

impl Setup {
    fn new(b0: SpaceParam, b1: SpaceParam, ctx: &Context) -> Result<Self> {
        let d = derived_exponents(&b0, &b1, ctx)?;
        let delta = [b0.delta(ctx), b1.delta(ctx)];
        Ok(Setup {
            b0,
            b1,
            ctx: *ctx,
            d,
            a: [b0.a(ctx), b1.a(ctx)],
            delta,
            w: [b0.inv_q(), b1.inv_q()],
            mp: min_plus(delta[0], delta[1]),
        })
    }

    fn w_bar(&self) -> f64 {
        recip(self.d.q)
    }

    fn vertex(&self) -> Shape {
        Shape::Vertex { s: self.b1.s, b: self.d.a_star }
    }

    fn top_edge(&self, b_hi: f64) -> Shape {
        Shape::TopEdge { s: self.b1.s, b_lo: self.d.a_star, b_hi }
    }

    fn interior(&self, s_max: f64, b_max: f64) -> Shape {
        Shape::Interior { s_max, diag: self.mp, b_max }
    }

    fn diagonal(&self, b_min_included: bool) -> Shape {
        Shape::Diagonal { s_max: self.b1.s, diag: self.mp, b_min: 0.0, b_min_included }
    }
}

fn generic_fff(st: &Setup, out: &mut Vec<Piece>) {
    let (b0, b1, ctx) = (&st.b0, &st.b1, &st.ctx);
    let [a0, a1] = st.a;
    let [d0, d1] = st.delta;
    let (l0, l1) = (linf_embedding(b0, ctx), linf_embedding(b1, ctx));
    out.push(Piece {
        shape: st.top_edge(st.d.inv_p * ctx.mtot),
        target: Some(Scale::F),
        w: WBound::w_at_most(st.w_bar()),
        status: Membership::Yes,
        rules: vec![FFF],
    });
    let first = l0.and(l1.when(eq(d0, 0.0) && eq(d1, 0.0)));
    let s0_ok = gt(b0.s, 0.0) && le(b0.s, a0);
    let l0_if_edge = l0.when(eq(b0.s, a0));
    let second = Tri::from(s0_ok).and(
        Tri::from(gt(b1.s, a1))
            .or(Tri::from(lt(b1.s, a1)).and(l0_if_edge))
            .or(Tri::from(eq(b1.s, a1)).and(l1).and(l0_if_edge)),
    );
    for (truth, tag) in [(first, FFF_VERTEX_1), (second, FFF_VERTEX_2)] {
        let open_tag = if truth == Tri::Unknown { Some(EMB_OPEN) } else { None };
        let mut rules = vec![FFF, tag];
        rules.extend(open_tag);
        push_clause(out, truth, st.vertex(), Scale::F, WBound::w_at_most(st.w_bar()), rules.clone());
        rules[0] = FFF2;
        push_clause(out, truth, st.diagonal(false), Scale::F, WBound::any(), rules);
    }
}

fn generic_bbb(st: &Setup, out: &mut Vec<Piece>) {
    let (b0, b1, ctx) = (&st.b0, &st.b1, &st.ctx);
    let [a0, a1] = st.a;
    let [d0, d1] = st.delta;
    let [w0, w1] = st.w;
    let l0 = linf_embedding(b0, ctx);
    let l1 = linf_embedding(b1, ctx);
    let wb = st.w_bar();
    out.push(Piece {
        shape: st.top_edge(st.d.inv_p * ctx.mtot),
        target: Some(Scale::B),
        w: WBound::w_at_most(wb),
        status: Membership::Yes,
        rules: vec![BBB],
    });

    let p_ok = Tri::from(gt(b0.s, 0.0) && le(b0.s, a0));
    let t = Tri::from;
    let wmin = w0.min(w1);
    // vertex clauses: (truth, w bound)
    let guard1 = q_below_t(b1, ctx, false).when(eq(b1.s, b0.s) && eq(b0.s, a0));
    let first = [
        (t(ge(d1, d0)).and(l1.when(eq(b1.s, a1))), wmin),
        (t(ge(d1, 0.0) && lt(d1, d0)), wb),
        (t(lt(d1, d0) && gt(b1.s, 0.0) && lt(b1.s, a1)).and(guard1), wb),
        (t(lt(d1, d0) && le(b1.s, 0.0) && lt(b1.s, a1)), w1),
    ];
    let below = lt(b0.s, a0);
    let g0 = q_below_t(b0, ctx, false);
    let second = [
        (t(gt(b1.s, a1)), wmin),
        (t(eq(b1.s, a1) && below).and(l1).and(g0), wmin),
        (t(gt(b1.s, 0.0) && lt(b1.s, a1) && below && gt(b0.s, b1.s)).and(g0), w1),
        (
            t(gt(b1.s, 0.0) && lt(b1.s, a1) && below && eq(b0.s, b1.s))
                .and(q_below_t(b0, ctx, ctx.isotropic))
                .and(q_below_t(b1, ctx, ctx.isotropic)),
            wmin,
        ),
        (t(lt(b1.s, a1) && below && le(b1.s, 0.0)).and(g0), w1),
    ];
    for (truth, w) in first {
        let truth = l0.and(truth);
        let mut rules = vec![BBB, BBB_VERTEX_1];
        if truth == Tri::Unknown {
            rules.push(VERTEX_OPEN);
        }
        push_clause(out, truth, st.vertex(), Scale::B, WBound::w_at_most(w), rules);
    }
    for (truth, w) in second {
        let truth = p_ok.and(truth);
        let mut rules = vec![BBB, BBB_VERTEX_2];
        if truth == Tri::Unknown {
            rules.push(VERTEX_OPEN);
        }
        push_clause(out, truth, st.vertex(), Scale::B, WBound::w_at_most(w), rules);
    }

    let diag_first = [
        (t(gt(d1, d0)), w0),
        (t(eq(d1, d0)).and(l1.when(eq(b1.s, a1))), wmin),
        (t(lt(d1, d0)), w1),
    ];
    let diag_second = [
        (t(gt(b1.s, a1)), w0),
        (t(eq(b1.s, a1) && below).and(l1), w0),
        (t(lt(b1.s, a1) && below), w0 + w1),
    ];
    for (truth, w) in diag_first {
        push_clause(out, l0.and(truth), st.diagonal(true), Scale::B, WBound::w_at_most(w), vec![BBB2, BBB_DIAG_1]);
    }
    for (truth, w) in diag_second {
        push_clause(out, p_ok.and(truth), st.diagonal(true), Scale::B, WBound::w_at_most(w), vec![BBB2, BBB_DIAG_2]);
    }
}

/// `s0 = -s1 = s > 0` with `1/p0 + 1/p1 <= 1`.
fn zero_sum_border(st: &Setup, out: &mut Vec<Piece>) {
    let (b0, ctx) = (&st.b0, &st.ctx);
    let scale = b0.scale;
    let [a0, _] = st.a;
    let w1 = st.w[1];
    let s = b0.s;
    let inv_p = st.d.inv_p;
    let theorem = if scale == Scale::F { FFF3 } else { BBB3 };
    out.push(Piece {
        shape: st.top_edge(inv_p * ctx.mtot),
        target: Some(scale),
        w: WBound::w_at_most(w1),
        status: Membership::Yes,
        rules: vec![theorem],
    });
    match scale {
        Scale::F => {
            let f_vertex = gt(s, a0) || (lt(s, a0) && lt(inv_p, 1.0));
            push_clause(out, f_vertex.into(), st.vertex(), Scale::F, WBound::w_at_most(w1), vec![FFF3]);
            let b_vertex = lt(s, a0) && eq(inv_p, 1.0);
            push_clause(out, b_vertex.into(), st.vertex(), Scale::B, WBound::w_at_most(0.0), vec![FFF3, BORDER_B_OPEN]);
        }
        Scale::B => {
            let l0 = linf_embedding(b0, ctx);
            let relaxed = le(inv_p, 0.5) || ctx.isotropic;
            let eps_bound = WBound { max: w1.min(inv_p), strict: !relaxed && ge(w1, inv_p) };
            let p_gt_1 = lt(inv_p, 1.0);
            let p_eq_1 = eq(inv_p, 1.0);
            let first = [
                (Tri::from(gt(s, a0)), WBound::w_at_most(w1)),
                (Tri::from(eq(s, a0) && p_gt_1), eps_bound),
                (Tri::from(eq(s, a0) && p_eq_1), WBound::w_at_most(0.0)),
            ];
            for (truth, w) in first {
                push_clause(out, l0.and(truth), st.vertex(), Scale::B, w, vec![BBB3, BBB3_VERTEX_1]);
            }
            let g0 = Tri::from(gt(s, 0.0) && lt(s, a0)).and(q_below_t(b0, ctx, false));
            let second = [(Tri::from(p_gt_1), eps_bound), (Tri::from(p_eq_1), WBound::w_at_most(0.0))];
            for (truth, w) in second {
                let truth = g0.and(truth);
                // only proven receivers here; the catalogue is not complete anyway
                if truth == Tri::True {
                    push_clause(out, truth, st.vertex(), Scale::B, w, vec![BBB3, BBB3_VERTEX_2]);
                }
            }
        }
    }
    out.push(Piece {
        shape: st.interior(st.b1.s, inv_p * ctx.mtot),
        target: None,
        w: WBound::any(),
        status: Membership::Yes,
        rules: vec![theorem, EMB_EPS],
    });
}

/// `s0 + s1 = |M|/p0 + |M|/p1 - |M| > 0` and `s1 < 0`.
fn negative_border(st: &Setup, out: &mut Vec<Piece>) {
    let (b0, ctx) = (&st.b0, &st.ctx);
    let scale = b0.scale;
    let m = ctx.mtot;
    let [a0, _] = st.a;
    let w1 = st.w[1];
    let theorem = if scale == Scale::F { FFF4 } else { BBB4 };
    out.push(Piece {
        shape: st.top_edge(m),
        target: Some(scale),
        w: WBound::w_at_most(w1),
        status: Membership::Yes,
        rules: vec![theorem],
    });
    let l0 = linf_embedding(b0, ctx);
    let above = Tri::from(gt(b0.s, a0));
    let at = Tri::from(eq(b0.s, a0)).and(l0);
    let inside = Tri::from(gt(b0.s, 0.0) && lt(b0.s, a0));
    let inside = match scale {
        Scale::F => inside,
        Scale::B => inside.and(q_below_t(b0, ctx, false)),
    };
    push_clause(out, above, st.vertex(), scale, WBound::w_at_most(w1), vec![theorem]);
    push_clause(out, at, st.vertex(), Scale::B, WBound::w_at_most(0.0), vec![theorem]);
    if inside == Tri::True {
        push_clause(out, inside, st.vertex(), Scale::B, WBound::w_at_most(0.0), vec![theorem, BORDER_B_OPEN]);
    }
    out.push(Piece {
        shape: st.interior(st.b1.s, m),
        target: None,
        w: WBound::any(),
        status: Membership::Yes,
        rules: vec![theorem, EMB_EPS],
    });
}

/// `s0 + s1 = |M|/p0 + |M|/p1 - |M| > 0` and `s0 >= s1 >= 0`: a Sobolev
/// embedding of one factor below smoothness zero leads back to the case
/// `s1 < 0`, which gives receivers with `s2 < 0` only.
fn positive_border(st: &Setup, out: &mut Vec<Piece>) {
    let m = st.ctx.mtot;
    let excess = st.a[0] + st.a[1] - m;
    let reducible = [(&st.b0, st.a[0]), (&st.b1, st.a[1])].iter().any(|(f, a)| lt(f.s, *a) && lt(f.s, excess));
    if !reducible {
        return;
    }
    let (tag, theorem) = if st.b0.scale == Scale::F { (FF_BORDER_POS, FFF4) } else { (BB_BORDER_POS, BBB4) };
    out.push(Piece {
        shape: st.interior(0.0, m),
        target: None,
        w: WBound::any(),
        status: Membership::Yes,
        rules: vec![tag, theorem, EMB_SOBOLEV_B, EMB_EPS],
    });
}

/// Pieces for an ordered same-scale pair in the multiplication domain.
fn same_scale_pieces(st: &Setup) -> Vec<Piece> {
    let mut out = Vec::new();
    let (b0, b1, ctx) = (&st.b0, &st.b1, &st.ctx);
    if is_generic(b0, b1, ctx) {
        let theorem = if b0.scale == Scale::F { FFF2 } else { BBB2 };
        out.push(Piece {
            shape: st.interior(b1.s, st.d.inv_p * ctx.mtot),
            target: None,
            w: WBound::any(),
            status: Membership::Yes,
            rules: vec![theorem, EMB_EPS],
        });
        match b0.scale {
            Scale::F => generic_fff(st, &mut out),
            Scale::B => generic_bbb(st, &mut out),
        }
    } else if eq(b0.s + b1.s, 0.0) {
        zero_sum_border(st, &mut out);
    } else if lt(b1.s, 0.0) {
        negative_border(st, &mut out);
    } else {
        positive_border(st, &mut out);
    }
    out
}

fn pieces_for(st: &Setup) -> Result<Vec<Piece>> {
    let (b0, b1, ctx) = (st.b0, st.b1, st.ctx);
    if b0.scale == b1.scale {
        return Ok(same_scale_pieces(st));
    }
    let mut pieces = Vec::new();
    if is_generic(&b0, &b1, &ctx) {
        pieces.push(Piece {
            shape: st.interior(b1.s, st.d.inv_p * ctx.mtot),
            target: None,
            w: WBound::any(),
            status: Membership::Yes,
            rules: vec![MIXED],
        });
    }
    for (c0, c1) in same_scale_images(&b0, &b1) {
        if !domain_check(&c0, &c1, &ctx).is_bounded() {
            continue;
        }
        for mut piece in same_scale_pieces(&Setup::new(c0, c1, &ctx)?) {
            if piece.status == Membership::Yes {
                piece.rules.insert(0, MIXED_REDUCTION);
                pieces.push(piece);
            }
        }
    }
    Ok(pieces)
}

/// The receiving region of `pi` on `A0 (+) A1`; fails unless
/// [`domain_check`] says `Bounded`.
pub fn receiving_region(a0: &SpaceParam, a1: &SpaceParam, ctx: &Context) -> Result<ReceivingRegion> {
    a0.validate()?;
    a1.validate()?;
    let v = domain_check(a0, a1, ctx);
    if !v.is_bounded() {
        return Err(Error::NotBounded(format!("{:?}: {}", v.status, v.rules.join(", "))));
    }
    let (b0, b1) = ordered(*a0, *a1);
    let st = Setup::new(b0, b1, ctx)?;
    let mut pieces = pieces_for(&st)?;
    // with s0 = s1 either factor may play the part of A0
    if eq(b0.s, b1.s) && b0 != b1 {
        pieces.extend(pieces_for(&Setup::new(b1, b0, ctx)?)?);
    }
    let complete = if b0.scale == b1.scale && is_generic(&b0, &b1, ctx) { vec![b0.scale] } else { Vec::new() };
    Ok(ReceivingRegion { a0: b0, a1: b1, ctx: *ctx, derived: st.d, min_plus: st.mp, pieces, complete })
}

impl ReceivingRegion {
    /// `|M|/p2` of a receiving parameter.
    pub fn b_of(&self, a2: &SpaceParam) -> f64 {
        a2.a(&self.ctx)
    }

    fn yes_piece(&self, scale: Scale, s2: f64, b: f64, w: f64) -> Option<&Piece> {
        self.pieces.iter().find(|p| p.status == Membership::Yes && p.accepts(scale) && p.contains(s2, b, w))
    }
}

/// Whether `pi: A0 (+) A1 -> A2` is bounded, as far as the region knows.
pub fn member(a2: &SpaceParam, region: &ReceivingRegion) -> Result<Judgement> {
    a2.validate()?;
    let bad = violated(&necessary_conditions(&region.a0, &region.a1, a2, &region.ctx));
    if !bad.is_empty() {
        return Ok(Judgement { membership: Membership::No, rules: bad });
    }
    let (s2, b, w) = (a2.s, region.b_of(a2), a2.inv_q());
    if let Some(p) = region.yes_piece(a2.scale, s2, b, w) {
        return Ok(Judgement { membership: Membership::Yes, rules: p.rules.clone() });
    }
    // F^s_{p,q} -> B^s_{p,q} for p <= q, and B^s_{p,min(p,q)} -> F^s_{p,q}
    let switched = match a2.scale {
        Scale::B if a2.p.is_finite() && le(a2.p, a2.q) => region.yes_piece(Scale::F, s2, b, w),
        Scale::F => region.yes_piece(Scale::B, s2, b, w.max(a2.inv_p())),
        Scale::B => None,
    };
    if let Some(p) = switched {
        let mut rules = p.rules.clone();
        rules.push(TARGET_SWITCH);
        return Ok(Judgement { membership: Membership::Yes, rules });
    }
    if let Some(p) =
        region.pieces.iter().find(|p| p.status == Membership::Open && p.accepts(a2.scale) && p.contains(s2, b, w))
    {
        return Ok(Judgement { membership: Membership::Open, rules: p.rules.clone() });
    }
    if region.complete.contains(&a2.scale) {
        Ok(Judgement { membership: Membership::No, rules: vec![REGION_COMPLETE] })
    } else {
        Ok(Judgement { membership: Membership::Open, rules: vec![UNREACHED] })
    }
}

/// Whether `A` is a multiplication algebra, i.e. receives `pi: A (+) A`.
pub fn algebra_check(a: &SpaceParam, ctx: &Context) -> Result<Judgement> {
    match receiving_region(a, a, ctx) {
        Ok(region) => member(a, &region),
        Err(Error::NotBounded(_)) => {
            let v = domain_check(a, a, ctx);
            let membership = if v.status == super::Status::Unbounded { Membership::No } else { Membership::Open };
            Ok(Judgement { membership, rules: v.rules })
        }
        Err(e) => Err(e),
    }
}
