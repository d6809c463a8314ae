use proptest::prelude::*;

use paracalc::calculus::{
    derived_exponents, domain_check, member, min_plus, ordered, receiving_region, Context, Membership, SpaceParam,
    Status,
};
use paracalc::Scale;

const INF: f64 = f64::INFINITY;

/// Quarter-integer smoothness and reciprocal exponents, so borderline cases
/// occur often and compare exactly.
fn space() -> impl Strategy<Value = SpaceParam> {
    (any::<bool>(), -8i32..=12, 0i32..=8, 0i32..=8).prop_map(|(is_b, s, ip, iq)| {
        let scale = if is_b { Scale::B } else { Scale::F };
        let ip = if scale == Scale::F { ip.max(1) } else { ip };
        let ext = |k: i32| if k == 0 { INF } else { 4.0 / k as f64 };
        SpaceParam { scale, s: s as f64 / 4.0, p: ext(ip), q: ext(iq) }
    })
}

fn context() -> impl Strategy<Value = Context> {
    (1u8..=3, any::<bool>()).prop_map(|(m, iso)| Context { mtot: m as f64, isotropic: m == 1 || iso })
}

/// `|M|/p*_1` written out with `(x)_+ = max(x, 0)` and `(x)_- = max(-x, 0)`.
fn a_star_reference(a0: &SpaceParam, a1: &SpaceParam, m: f64) -> f64 {
    let plus = |x: f64| if x > 0.0 { x } else { 0.0 };
    let minus = |x: f64| if x < 0.0 { -x } else { 0.0 };
    let inv = |p: f64| if p.is_infinite() { 0.0 } else { 1.0 / p };
    let d0 = a0.s - m * inv(a0.p);
    let d1 = a1.s - m * inv(a1.p);
    m * inv(a1.p) + minus(d0) + plus(d1 - plus(d0))
}

#[test]
fn derived_exponent_examples() {
    let ctx = Context::isotropic(1);
    let d = derived_exponents(&SpaceParam::b(1.0, 2.0, 2.0), &SpaceParam::b(0.2, 2.0, 2.0), &ctx).unwrap();
    assert!((d.p_star1 - 2.0).abs() < 1e-12);
    let d = derived_exponents(&SpaceParam::b(0.25, 2.0, 2.0), &SpaceParam::b(0.0, 2.0, 2.0), &ctx).unwrap();
    assert!((d.a_star - 0.75).abs() < 1e-12);
    let d = derived_exponents(&SpaceParam::b(1.0, 2.0, 3.0), &SpaceParam::b(1.0, 2.0, 2.0), &ctx).unwrap();
    assert_eq!(d.q, 3.0);
    let d = derived_exponents(&SpaceParam::b(1.0, 2.0, 2.0), &SpaceParam::b(0.2, 2.0, 8.0), &ctx).unwrap();
    assert_eq!(d.q, 8.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn derived_matches_reference(a0 in space(), a1 in space(), ctx in context()) {
        let (b0, b1) = ordered(a0, a1);
        let d = derived_exponents(&b0, &b1, &ctx).unwrap();
        let want = a_star_reference(&b0, &b1, ctx.mtot);
        prop_assert!((d.a_star - want).abs() <= 1e-12 * want.abs().max(1.0));
        let inv = |p: f64| if p.is_infinite() { 0.0 } else { 1.0 / p };
        prop_assert!((d.inv_p - inv(b0.p) - inv(b1.p)).abs() < 1e-12);
    }

    #[test]
    fn min_plus_is_max_form(s0 in -8i32..=12, s1 in -8i32..=12, b0 in 0i32..=12, b1 in 0i32..=12, b in 0i32..=16) {
        // s2 = s1: s1 - b <= min+(s0 - b0, s1 - b1) iff b >= max(b0 + s1 - s0, b1, b1 + b0 - s0)
        let (s0, s1) = (s0.max(s1) as f64 / 4.0, s0.min(s1) as f64 / 4.0);
        let (b0, b1, b) = (b0 as f64 / 4.0, b1 as f64 / 4.0, b as f64 / 4.0);
        let lhs = s1 - b <= min_plus(s0 - b0, s1 - b1);
        let rhs = b >= (b0 + s1 - s0).max(b1).max(b1 + b0 - s0);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn domain_check_commutes(a0 in space(), a1 in space(), ctx in context()) {
        prop_assert_eq!(domain_check(&a0, &a1, &ctx).status, domain_check(&a1, &a0, &ctx).status);
    }

    #[test]
    fn region_commutes(a0 in space(), a1 in space(), a2 in space(), ctx in context()) {
        let (Ok(r01), Ok(r10)) = (receiving_region(&a0, &a1, &ctx), receiving_region(&a1, &a0, &ctx)) else {
            prop_assert!(domain_check(&a0, &a1, &ctx).status != Status::Bounded);
            return Ok(());
        };
        prop_assert_eq!(member(&a2, &r01).unwrap().membership, member(&a2, &r10).unwrap().membership);
    }

    #[test]
    fn corollary_equivalence(a0 in space(), a1 in space(), ctx in context(), f in any::<bool>()) {
        let scale = if f { Scale::F } else { Scale::B };
        let fix = |a: SpaceParam| {
            let p = if scale == Scale::F && a.p.is_infinite() { 4.0 } else { a.p };
            SpaceParam { scale, p, ..a }
        };
        let (a0, a1) = (fix(a0), fix(a1));
        prop_assume!(a0.s.max(a1.s) > 0.0);
        let m = ctx.mtot;
        let inv = |p: f64| if p.is_infinite() { 0.0 } else { 1.0 / p };
        let sum = a0.s + a1.s;
        let line = m * (inv(a0.p) + inv(a1.p) - 1.0);
        let wsum = inv(a0.q) + inv(a1.q);
        let ok = sum >= line - 1e-12
            && sum >= 0.0
            && (scale == Scale::F || (sum - line).abs() > 1e-12 || wsum >= 1.0 - 1e-12)
            && (sum.abs() > 1e-12 || wsum >= 1.0 - 1e-12);
        let want = if ok { Status::Bounded } else { Status::Unbounded };
        prop_assert_eq!(domain_check(&a0, &a1, &ctx).status, want);
    }

    #[test]
    fn member_monotone(
        a0 in space(),
        a1 in space(),
        a2 in space(),
        ctx in context(),
        ds in 1i32..=8,
        dq in 0i32..=8,
    ) {
        let Ok(region) = receiving_region(&a0, &a1, &ctx) else { return Ok(()) };
        prop_assume!(member(&a2, &region).unwrap().membership == Membership::Yes);
        let lower = SpaceParam { s: a2.s - ds as f64 / 4.0, ..a2 };
        prop_assert_ne!(member(&lower, &region).unwrap().membership, Membership::No, "{} from {}", lower, a2);
        let w = (1.0 / a2.q) * dq as f64 / 8.0;
        let larger_q = a2.with_q(if w == 0.0 { INF } else { 1.0 / w });
        prop_assert_ne!(member(&larger_q, &region).unwrap().membership, Membership::No, "{} from {}", larger_q, a2);
    }

    #[test]
    fn members_pass_necessary_conditions(a0 in space(), a1 in space(), ctx in context(), seed in any::<u64>()) {
        if domain_check(&a0, &a1, &ctx).status == Status::Bounded {
            let report = paracalc::calculus::consistency_audit(&a0, &a1, &ctx, 200, seed).unwrap();
            prop_assert!(report.is_clean(), "{:?}", report.violations.first());
        }
    }
}
