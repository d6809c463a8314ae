//! Anisotropic weights, dilations and the quasi-homogeneous modulus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weight vector `M = (m_1, ..., m_n)` with every `m_j >= 1` and `min m_j = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Weight {
    m: Vec<f64>,
    total: f64,
}

impl Weight {
    pub fn new(m: Vec<f64>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidWeight("empty weight".into()));
        }
        if m.iter().any(|&v| !v.is_finite() || v < 1.0) {
            return Err(Error::InvalidWeight(format!("entries must be finite and >= 1, got {m:?}")));
        }
        let min = m.iter().cloned().fold(f64::INFINITY, f64::min);
        if min != 1.0 {
            return Err(Error::InvalidWeight(format!("smallest entry must equal 1, got {min}")));
        }
        let total = m.iter().sum();
        Ok(Weight { m, total })
    }

    pub fn isotropic(n: usize) -> Self {
        Weight::new(vec![1.0; n.max(1)]).expect("isotropic weight is valid")
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    /// `|M| = m_1 + ... + m_n`.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn components(&self) -> &[f64] {
        &self.m
    }

    pub fn is_isotropic(&self) -> bool {
        self.m.iter().all(|&v| v == 1.0)
    }

    /// First axis with `m_j = 1`.
    pub fn unit_axis(&self) -> usize {
        self.m.iter().position(|&v| v == 1.0).expect("weight has a unit entry")
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.m.len() {
            return Err(Error::DimensionMismatch { expected: self.m.len(), got: len });
        }
        Ok(())
    }

    /// `t^M x`, componentwise `t^{m_i} x_i`.
    pub fn dilate(&self, t: f64, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x.len())?;
        Ok(x.iter().zip(&self.m).map(|(xi, mi)| t.powf(*mi) * xi).collect())
    }

    /// The quasi-homogeneous modulus `[x]`: the `t > 0` solving
    /// `sum_i (x_i / t^{m_i})^2 = 1`, with `[0] = 0`.
    pub fn modulus(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        Ok(self.modulus_unchecked(x))
    }

    pub(crate) fn modulus_unchecked(&self, x: &[f64]) -> f64 {
        if self.is_isotropic() {
            return euclidean(x);
        }
        solve_modulus(x, &self.m)
    }
}

impl TryFrom<Vec<f64>> for Weight {
    type Error = Error;
    fn try_from(m: Vec<f64>) -> Result<Self> {
        Weight::new(m)
    }
}

impl From<Weight> for Vec<f64> {
    fn from(w: Weight) -> Vec<f64> {
        w.m
    }
}

/// Free-function form of [`Weight::dilate`].
pub fn dilate(t: f64, m: &Weight, x: &[f64]) -> Result<Vec<f64>> {
    m.dilate(t, x)
}

/// Free-function form of [`Weight::modulus`].
pub fn aniso_modulus(x: &[f64], m: &Weight) -> Result<f64> {
    m.modulus(x)
}

fn euclidean(x: &[f64]) -> f64 {
    // scaled accumulation so that huge or tiny entries do not overflow
    let scale = x.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let s: f64 = x.iter().map(|v| (v / scale) * (v / scale)).sum();
    scale * s.sqrt()
}

// Works with u = ln t throughout; g(u) = sum exp(2(ln|x_i| - m_i u)) - 1 is
// strictly decreasing, so the root is bracketed and unique.
fn solve_modulus(x: &[f64], m: &[f64]) -> f64 {
    let terms: Vec<(f64, f64)> = x
        .iter()
        .zip(m)
        .filter(|(xi, _)| **xi != 0.0)
        .map(|(xi, mi)| (xi.abs().ln(), *mi))
        .collect();
    if terms.is_empty() {
        return 0.0;
    }
    if terms.len() == 1 {
        let (lx, mi) = terms[0];
        return (lx / mi).exp();
    }

    let half_ln_n = 0.5 * (x.len() as f64).ln();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &(lx, mi) in &terms {
        let r = lx / mi;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    lo -= half_ln_n;
    hi += half_ln_n;

    let g = |u: f64| -> (f64, f64) {
        let mut val = -1.0;
        let mut der = 0.0;
        for &(lx, mi) in &terms {
            let e = (2.0 * (lx - mi * u)).exp();
            val += e;
            der -= 2.0 * mi * e;
        }
        (val, der)
    };

    // bisection to a relative bracket of 1e-6 in t
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if g(mid).0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut u = 0.5 * (lo + hi);
    for _ in 0..50 {
        let (val, der) = g(u);
        if der == 0.0 {
            break;
        }
        let step = val / der;
        let next = (u - step).clamp(lo - 1e-6, hi + 1e-6);
        let done = (next - u).abs() <= 1e-15 * (1.0 + u.abs());
        u = next;
        if done {
            break;
        }
    }
    u.exp()
}
