//! Discrete Lebesgue, Besov and Triebel-Lizorkin quasi-norms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Decomposition, GridFunction};
use crate::partition::LpSystem;

/// Besov (`B`) or Triebel-Lizorkin (`F`) scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scale {
    B,
    F,
}

impl std::fmt::Display for Scale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scale::B => "B",
            Scale::F => "F",
        })
    }
}

/// Smoothness `s`, integral exponent `p` and sum exponent `q`; `f64::INFINITY` allowed for `p`, `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormParams {
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

impl NormParams {
    pub fn new(s: f64, p: f64, q: f64) -> Result<Self> {
        let np = NormParams { s, p, q };
        np.validate()?;
        Ok(np)
    }

    fn validate(&self) -> Result<()> {
        if !self.s.is_finite() {
            return Err(Error::InvalidParam(format!("s must be finite, got {}", self.s)));
        }
        check_exponent("p", self.p)?;
        check_exponent("q", self.q)
    }
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v <= 0.0 {
        return Err(Error::InvalidParam(format!("{name} must lie in (0, inf], got {v}")));
    }
    Ok(())
}

fn power_mean(values: impl Iterator<Item = f64>, p: f64, weight: f64) -> f64 {
    if p.is_infinite() {
        return values.fold(0.0, f64::max);
    }
    let sum: f64 = values.map(|v| v.powf(p)).sum();
    (sum * weight).powf(1.0 / p)
}

/// `(sum |u|^p cellvol)^{1/p}`, or `max |u|` for `p = inf`.
pub fn lp_norm(u: &GridFunction, p: f64) -> Result<f64> {
    check_exponent("p", p)?;
    Ok(power_mean(u.values().iter().map(|z| z.norm()), p, u.grid().cell_volume()))
}

/// `(sum |a_j|^q)^{1/q}`, or `max |a_j|` for `q = inf`.
pub fn lq_seq(a: &[f64], q: f64) -> Result<f64> {
    check_exponent("q", q)?;
    Ok(power_mean(a.iter().map(|v| v.abs()), q, 1.0))
}

fn level_weight(s: f64, j: i64) -> f64 {
    (s * j as f64).exp2()
}

impl Decomposition {
    /// `|| {2^{sj} ||u_j||_{L_p}}_{j<=J} ||_{l_q}`.
    pub fn besov_norm(&self, np: &NormParams) -> Result<f64> {
        np.validate()?;
        let mut terms = Vec::new();
        for (j, b) in self.bands_raw() {
            terms.push(level_weight(np.s, j) * lp_norm(b, np.p)?);
        }
        lq_seq(&terms, np.q)
    }

    /// `|| (sum_{j<=J} |2^{sj} u_j(x)|^q)^{1/q} ||_{L_p}`; needs `p < inf`.
    pub fn tl_norm(&self, np: &NormParams) -> Result<f64> {
        np.validate()?;
        if np.p.is_infinite() {
            return Err(Error::InvalidParam("Triebel-Lizorkin norms need p < inf".into()));
        }
        let mut acc = vec![0.0; self.grid().len()];
        for (j, b) in self.bands_raw() {
            let w = level_weight(np.s, j);
            if np.q.is_infinite() {
                for (a, z) in acc.iter_mut().zip(b.values()) {
                    *a = f64::max(*a, w * z.norm());
                }
            } else {
                for (a, z) in acc.iter_mut().zip(b.values()) {
                    *a += (w * z.norm()).powf(np.q);
                }
            }
        }
        let inv_q = if np.q.is_infinite() { 1.0 } else { 1.0 / np.q };
        Ok(power_mean(acc.into_iter().map(|a| a.powf(inv_q)), np.p, self.grid().cell_volume()))
    }
}

impl Decomposition {
    /// Norm in the given scale.
    pub fn norm(&self, scale: Scale, np: &NormParams) -> Result<f64> {
        match scale {
            Scale::B => self.besov_norm(np),
            Scale::F => self.tl_norm(np),
        }
    }
}

/// Besov quasi-norm over the levels `0..=j_max` (default: the largest unaliased level).
pub fn besov_norm(u: &GridFunction, sys: &LpSystem, np: &NormParams, j_max: Option<i64>) -> Result<f64> {
    decompose(u, sys, j_max)?.besov_norm(np)
}

/// Triebel-Lizorkin quasi-norm over the levels `0..=j_max`.
pub fn tl_norm(u: &GridFunction, sys: &LpSystem, np: &NormParams, j_max: Option<i64>) -> Result<f64> {
    if np.p.is_infinite() {
        return Err(Error::InvalidParam("Triebel-Lizorkin norms need p < inf".into()));
    }
    decompose(u, sys, j_max)?.tl_norm(np)
}

fn decompose(u: &GridFunction, sys: &LpSystem, j_max: Option<i64>) -> Result<Decomposition> {
    match j_max {
        Some(j) => Decomposition::new(u, sys, j),
        None => Decomposition::full(u, sys),
    }
}

/// Ratio `||{2^{sj} (sum_{k<=j} |a_k|^r)^{1/r}}||_{l_q} / ||{2^{sj} a_j}||_{l_q}`
/// for `s < 0`; the zero sequence gives 0.
pub fn weighted_cumulative_check(a: &[f64], s: f64, q: f64, r: f64) -> Result<f64> {
    if s.is_nan() || s >= 0.0 {
        return Err(Error::InvalidParam(format!("cumulative bound needs s < 0, got {s}")));
    }
    check_exponent("q", q)?;
    check_exponent("r", r)?;
    let weighted: Vec<f64> = a.iter().enumerate().map(|(j, v)| level_weight(s, j as i64) * v.abs()).collect();
    let den = lq_seq(&weighted, q)?;
    if den == 0.0 {
        return Ok(0.0);
    }
    let mut running = 0.0_f64;
    let cumulative: Vec<f64> = a
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let c = if r.is_infinite() {
                running = running.max(v.abs());
                running
            } else {
                running += v.abs().powf(r);
                running.powf(1.0 / r)
            };
            level_weight(s, j as i64) * c
        })
        .collect();
    Ok(lq_seq(&cumulative, q)? / den)
}
