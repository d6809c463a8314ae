use serde::Serialize;

use super::rules::*;
use super::{eq, ge, le, Context, Scale, SpaceParam};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Holds {
    Yes,
    No,
    NotApplicable,
}

impl Holds {
    fn from(b: bool) -> Self {
        if b {
            Holds::Yes
        } else {
            Holds::No
        }
    }

    /// `premise => conclusion`, reported as not applicable when the premise fails.
    fn implication(premise: bool, conclusion: impl FnOnce() -> bool) -> Self {
        if premise {
            Holds::from(conclusion())
        } else {
            Holds::NotApplicable
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub rule: &'static str,
    /// factor index for the rules stated once per factor
    pub j: Option<u8>,
    pub holds: Holds,
}

/// Evaluates the conditions every bounded `pi: A0 (+) A1 -> A2` must satisfy.
///
/// The scale-dependent rules are dispatched on `(A0, A1, A2)`; a rule stated
/// for `BF.` is applied to `FB.` with the factors exchanged.
pub fn necessary_conditions(a0: &SpaceParam, a1: &SpaceParam, a2: &SpaceParam, ctx: &Context) -> Vec<Condition> {
    let m = ctx.mtot;
    let f = [a0, a1];
    let a = [a0.a(ctx), a1.a(ctx)];
    let d = [a0.delta(ctx), a1.delta(ctx)];
    let w = [a0.inv_q(), a1.inv_q()];
    let (s2, d2, w2) = (a2.s, a2.delta(ctx), a2.inv_q());
    let sum = a0.s + a1.s;
    let mut out = Vec::with_capacity(16);
    let mut push = |rule, j: Option<u8>, holds| out.push(Condition { rule, j, holds });

    push(NCSS_1, None, Holds::from(ge(sum, a[0] + a[1] - m)));
    push(NCSS_2, None, Holds::from(ge(sum, 0.0)));
    push(NCSS_3, None, Holds::from(le(s2, a0.s.min(a1.s))));
    push(NCSS_4, None, Holds::from(le(a2.a(ctx), a[0] + a[1])));
    push(NCSS_5, None, Holds::from(le(d2, d[0].min(d[1]))));
    push(NCSS_6, None, Holds::from(le(d2, d[0] + d[1])));
    for j in 0..2 {
        let k = 1 - j;
        let h = Holds::implication(eq(d2, d[k]) && eq(f[j].s, a[j]), || match f[j].scale {
            Scale::B => le(f[j].q, 1.0),
            Scale::F => le(f[j].p, 1.0),
        });
        push(NCSS_7, Some(j as u8), h);
    }

    let on_line_1 = eq(sum, a[0] + a[1] - m);
    let h = match (a0.scale, a1.scale) {
        (Scale::B, Scale::B) => Holds::implication(on_line_1, || ge(w[0] + w[1], 1.0)),
        (Scale::B, Scale::F) => Holds::implication(on_line_1, || ge(w[0] + a1.inv_p(), 1.0)),
        (Scale::F, Scale::B) => Holds::implication(on_line_1, || ge(w[1] + a0.inv_p(), 1.0)),
        (Scale::F, Scale::F) => Holds::NotApplicable,
    };
    push(NCSS_1P, None, h);
    push(NCSS_2P, None, Holds::implication(eq(sum, 0.0), || ge(w[0] + w[1], 1.0)));
    for j in 0..2 {
        push(NCSS_3P, Some(j as u8), Holds::implication(eq(s2, f[j].s), || le(w2, w[j])));
    }
    for j in 0..2 {
        let applies = f[j].scale == Scale::B && a2.scale == Scale::B && eq(d2, d[j]);
        push(NCSS_5P, Some(j as u8), Holds::implication(applies, || le(w2, w[j])));
    }
    let bbb = a0.scale == Scale::B && a1.scale == Scale::B && a2.scale == Scale::B;
    push(NCSS_6P, None, Holds::implication(bbb && eq(d2, d[0] + d[1]), || le(w2, w[0] + w[1])));
    out
}

/// Rules among `conds` that fail.
pub fn violated(conds: &[Condition]) -> Vec<&'static str> {
    let mut v: Vec<&'static str> = conds.iter().filter(|c| c.holds == Holds::No).map(|c| c.rule).collect();
    v.dedup();
    v
}
