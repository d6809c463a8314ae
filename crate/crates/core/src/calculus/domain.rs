use super::necessary::{necessary_conditions, violated, Condition};
use super::rules::*;
use super::{eq, gt, lt, ordered, pos, Context, Scale, SpaceParam, Verdict};

/// Conditions (1), (1'), (2) and (2'): the ones that involve `A0` and `A1` only.
pub fn borderline_conditions(a0: &SpaceParam, a1: &SpaceParam, ctx: &Context) -> Vec<Condition> {
    necessary_conditions(a0, a1, a1, ctx)
        .into_iter()
        .filter(|c| [NCSS_1, NCSS_2, NCSS_1P, NCSS_2P].contains(&c.rule))
        .collect()
}

/// Whether `(s_j, p_j)` lies strictly above `|M|(1/p0 + 1/p1 - 1)_+`.
pub(crate) fn is_generic(a0: &SpaceParam, a1: &SpaceParam, ctx: &Context) -> bool {
    gt(a0.s + a1.s, pos(a0.a(ctx) + a1.a(ctx) - ctx.mtot))
}

/// Sufficiency rules for a same-scale borderline pair with `max(s0, s1) > 0`
/// whose borderline conditions hold.
fn same_scale_border(a0: &SpaceParam, a1: &SpaceParam) -> Vec<&'static str> {
    let (b0, b1) = ordered(*a0, *a1);
    let zero_sum = eq(b0.s + b1.s, 0.0);
    match b0.scale {
        Scale::B if zero_sum => vec![COR_DSCR, BBB3],
        Scale::B if lt(b1.s, 0.0) => vec![COR_DSCR, BBB4],
        Scale::B => vec![COR_DSCR, BB_BORDER_POS],
        Scale::F if zero_sum => vec![COR_DSCR, FFF3],
        Scale::F if lt(b1.s, 0.0) => vec![COR_DSCR, FFF4],
        Scale::F => vec![COR_DSCR, FF_BORDER_POS],
    }
}

/// Same-scale pairs that a mixed pair embeds into factorwise without loss of
/// smoothness: `F^s_{p,q} -> B^s_{p,max(p,q)}` and, for `q <= p`,
/// `B^s_{p,q} -> F^s_{p,q}`.
pub(crate) fn same_scale_images(a0: &SpaceParam, a1: &SpaceParam) -> Vec<(SpaceParam, SpaceParam)> {
    let to_b = |a: &SpaceParam| match a.scale {
        Scale::B => *a,
        Scale::F => SpaceParam { scale: Scale::B, q: a.q.max(a.p), ..*a },
    };
    let to_f = |a: &SpaceParam| match a.scale {
        Scale::F => Some(*a),
        Scale::B if a.p.is_finite() && a.q <= a.p => Some(a.with_scale(Scale::F)),
        Scale::B => None,
    };
    let mut out = vec![(to_b(a0), to_b(a1))];
    if let (Some(f0), Some(f1)) = (to_f(a0), to_f(a1)) {
        out.push((f0, f1));
    }
    out
}

/// Decides whether `pi` is bounded on `A0 (+) A1` into some space.
pub fn domain_check(a0: &SpaceParam, a1: &SpaceParam, ctx: &Context) -> Verdict {
    let bad = violated(&borderline_conditions(a0, a1, ctx));
    if !bad.is_empty() {
        return Verdict::unbounded(bad);
    }
    if is_generic(a0, a1, ctx) {
        return Verdict::bounded(vec![GENERIC]);
    }
    if eq(a0.s, 0.0) && eq(a1.s, 0.0) {
        return Verdict::open(vec![ST_OPEN]);
    }
    if a0.scale == a1.scale {
        return Verdict::bounded(same_scale_border(a0, a1));
    }
    for (c0, c1) in same_scale_images(a0, a1) {
        if violated(&borderline_conditions(&c0, &c1, ctx)).is_empty() {
            let mut rules = vec![MIXED_REDUCTION];
            rules.extend(same_scale_border(&c0, &c1));
            return Verdict::bounded(rules);
        }
    }
    Verdict::open(vec![UNREACHED])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::Status;

    #[test]
    fn examples() {
        let ctx = Context::isotropic(1);
        let v = domain_check(&SpaceParam::b(1.0, 2.0, 2.0), &SpaceParam::b(1.0, 2.0, 2.0), &ctx);
        assert_eq!(v, Verdict::bounded(vec![GENERIC]));
        let v = domain_check(&SpaceParam::f(0.5, 2.0, 2.0), &SpaceParam::f(-0.5, 2.0, 2.0), &ctx);
        assert_eq!(v.status, Status::Bounded);
        assert!(v.rules.contains(&FFF3));
        let v = domain_check(&SpaceParam::b(0.0, 2.0, 2.0), &SpaceParam::b(0.0, 2.0, 2.0), &ctx);
        assert_eq!(v, Verdict::open(vec![ST_OPEN]));
        let v = domain_check(&SpaceParam::b(0.5, 2.0, 4.0), &SpaceParam::b(-0.5, 2.0, 4.0), &ctx);
        assert_eq!(v, Verdict::unbounded(vec![NCSS_1P, NCSS_2P]));
    }

    #[test]
    fn mixed_borderline() {
        let ctx = Context::isotropic(1);
        // B(1/2, 2, 1) x F(-1/2, 2, 2): the F factor lands in B(-1/2, 2, 2) and 1 + 1/2 >= 1
        let v = domain_check(&SpaceParam::b(0.5, 2.0, 1.0), &SpaceParam::f(-0.5, 2.0, 2.0), &ctx);
        assert_eq!(v.status, Status::Bounded);
        assert_eq!(v.rules[0], MIXED_REDUCTION);
        // 1/q0 + 1/p1 < 1 violates the BF form of (1')
        let v = domain_check(&SpaceParam::b(1.0, 1.0, 4.0), &SpaceParam::f(-0.5, 2.0, 2.0), &ctx);
        assert_eq!(v.status, Status::Unbounded);
    }
}
