use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::necessary::{necessary_conditions, violated};
use super::region::{receiving_region, Membership, Piece, ReceivingRegion, Shape};
use super::{Context, Scale, SpaceParam};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub piece: usize,
    pub a2: SpaceParam,
    pub rules: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub samples: usize,
    /// samples skipped because their piece is empty
    pub skipped: usize,
    pub violations: Vec<Violation>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples `samples` points of the region of `A0 (+) A1` and checks each
/// against the necessary conditions.
pub fn consistency_audit(
    a0: &SpaceParam,
    a1: &SpaceParam,
    ctx: &Context,
    samples: usize,
    seed: u64,
) -> Result<AuditReport> {
    let region = receiving_region(a0, a1, ctx)?;
    Ok(audit_region(&region, samples, seed))
}

fn sample_w(rng: &mut ChaCha8Rng, piece: &Piece) -> f64 {
    let max = piece.w.max;
    if max.is_infinite() {
        return if rng.gen_bool(0.1) { 0.0 } else { rng.gen_range(0.0..4.0) };
    }
    let u: f64 = rng.gen();
    if u < 0.1 || max <= 0.0 {
        0.0
    } else if u < 0.35 && !piece.w.strict {
        max
    } else {
        max * rng.gen_range(0.0..1.0)
    }
}

/// A point `(s2, b)` of the shape, endpoints included with positive probability.
fn sample_shape(rng: &mut ChaCha8Rng, shape: &Shape) -> Option<(f64, f64)> {
    match *shape {
        Shape::Interior { s_max, diag, b_max } => {
            if b_max < 0.0 {
                return None;
            }
            let u: f64 = rng.gen();
            let b = if u < 0.15 {
                b_max
            } else if u < 0.25 {
                0.0
            } else {
                rng.gen_range(0.0..=b_max)
            };
            let top = s_max.min(diag + b);
            Some((top - rng.gen_range(1e-6..3.0), b))
        }
        Shape::TopEdge { s, b_lo, b_hi } => {
            if b_hi <= b_lo {
                return None;
            }
            let b = if rng.gen_bool(0.25) { b_hi } else { b_hi - (b_hi - b_lo) * rng.gen_range(0.0..1.0) };
            Some((s, b))
        }
        Shape::Vertex { s, b } => Some((s, b)),
        Shape::Diagonal { s_max, diag, b_min, b_min_included } => {
            let b_top = s_max - diag;
            if b_top <= b_min {
                return None;
            }
            let b = if b_min_included && rng.gen_bool(0.2) {
                b_min
            } else {
                b_min + (b_top - b_min) * rng.gen_range(1e-9..1.0 - 1e-9)
            };
            Some((diag + b, b))
        }
    }
}

/// Checks sampled points of every piece, proven or open, against the
/// necessary conditions.
pub fn audit_region(region: &ReceivingRegion, samples: usize, seed: u64) -> AuditReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AuditReport { samples, skipped: 0, violations: Vec::new() };
    let relevant: Vec<usize> =
        (0..region.pieces.len()).filter(|&i| region.pieces[i].status != Membership::No).collect();
    if relevant.is_empty() {
        report.skipped = samples;
        return report;
    }
    let m = region.ctx.mtot;
    for _ in 0..samples {
        let idx = relevant[rng.gen_range(0..relevant.len())];
        let piece = &region.pieces[idx];
        let Some((s2, b)) = sample_shape(&mut rng, &piece.shape) else {
            report.skipped += 1;
            continue;
        };
        let scale = piece.target.unwrap_or(if rng.gen_bool(0.5) { Scale::B } else { Scale::F });
        if b <= 0.0 && scale == Scale::F {
            report.skipped += 1;
            continue;
        }
        let w = sample_w(&mut rng, piece);
        let p2 = if b <= 0.0 { f64::INFINITY } else { m / b };
        let q2 = if w <= 0.0 { f64::INFINITY } else { 1.0 / w };
        let a2 = SpaceParam { scale, s: s2, p: p2, q: q2 };
        let bad = violated(&necessary_conditions(&region.a0, &region.a1, &a2, &region.ctx));
        if !bad.is_empty() {
            report.violations.push(Violation { piece: idx, a2, rules: bad });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::WBound;

    #[test]
    fn generic_fff_is_clean() {
        let ctx = Context::isotropic(2);
        let r = consistency_audit(&SpaceParam::f(1.5, 2.0, 3.0), &SpaceParam::f(0.4, 3.0, 2.0), &ctx, 10_000, 7).unwrap();
        assert!(r.is_clean(), "{:?}", &r.violations[..r.violations.len().min(3)]);
        assert!(r.skipped < r.samples / 2);
    }

    #[test]
    fn widened_sum_exponent_is_caught() {
        let ctx = Context::isotropic(1);
        let a = SpaceParam::b(1.0, 2.0, 2.0);
        let mut region = receiving_region(&a, &a, &ctx).unwrap();
        for p in region.pieces.iter_mut() {
            if matches!(p.shape, Shape::TopEdge { .. }) {
                p.w = WBound { max: 2.0, strict: false };
            }
        }
        let r = audit_region(&region, 2_000, 1);
        assert!(!r.is_clean());
        assert!(r.violations.iter().all(|v| v.rules.iter().any(|x| x.contains("3′"))));
    }
}
