//! Smooth dyadic partition of unity in the anisotropic modulus.
//!
//! `Psi(t) = f(b - t) / (f(b - t) + f(t - a))` with `f(x) = exp(-1/x)` for
//! `x > 0`. The standard system uses `a = 11/10`, `b = 13/10`; then
//! `psi_j(xi) = Psi(2^-j [xi])` for `j >= 0`, `psi_j = 0` for `j < 0`, and
//! `phi_j = psi_j - psi_{j-1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Plateau radius of the standard cutoff.
pub const R_INNER: f64 = 1.1;
/// Support radius of the standard cutoff.
pub const R_OUTER: f64 = 1.3;

fn bump_edge(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// A cutoff `Psi` equal to 1 on `[0, a]` and 0 on `[b, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpSystem {
    a: f64,
    b: f64,
}

impl Default for LpSystem {
    fn default() -> Self {
        LpSystem { a: R_INNER, b: R_OUTER }
    }
}

impl LpSystem {
    pub fn standard() -> Self {
        Self::default()
    }

    /// Another admissible cutoff; `1 <= a < b < 2a` keeps bands two apart disjoint.
    pub fn with_radii(a: f64, b: f64) -> Result<Self> {
        if !(a >= 1.0 && b > a && b < 2.0 * a) {
            return Err(Error::InvalidParam(format!("cutoff radii need 1 <= a < b < 2a, got a={a}, b={b}")));
        }
        Ok(LpSystem { a, b })
    }

    /// Dilated bump used to check that results do not depend on the cutoff.
    pub fn alternate() -> Self {
        LpSystem { a: 1.2, b: 1.7 }
    }

    pub fn inner(&self) -> f64 {
        self.a
    }

    pub fn outer(&self) -> f64 {
        self.b
    }

    /// The profile `Psi(t)`.
    pub fn profile(&self, t: f64) -> f64 {
        if t <= self.a {
            return 1.0;
        }
        if t >= self.b {
            return 0.0;
        }
        let hi = bump_edge(self.b - t);
        let lo = bump_edge(t - self.a);
        hi / (hi + lo)
    }

    /// `psi_j` evaluated at modulus value `r = [xi]`.
    pub fn psi(&self, j: i64, r: f64) -> f64 {
        if j < 0 {
            return 0.0;
        }
        self.profile(r * scale_down(j))
    }

    /// `phi_j = psi_j - psi_{j-1}` at modulus value `r`.
    pub fn phi(&self, j: i64, r: f64) -> f64 {
        self.psi(j, r) - self.psi(j - 1, r)
    }

    /// Closed modulus interval outside of which `phi_j` vanishes.
    pub fn band_support(&self, j: i64) -> (f64, f64) {
        if j < 0 {
            return (0.0, 0.0);
        }
        let hi = self.b * scale_up(j);
        let lo = if j == 0 { 0.0 } else { self.a * scale_up(j - 1) };
        (lo, hi)
    }

    /// Modulus interval on which `phi_j = 1`.
    pub fn band_plateau(&self, j: i64) -> (f64, f64) {
        let hi = self.a * scale_up(j);
        let lo = if j == 0 { 0.0 } else { self.b * scale_up(j - 1) };
        (lo, hi)
    }

    /// `|sum_{j<=J} phi_j - psi_J|` at modulus value `r`.
    pub fn partition_defect(&self, big_j: i64, r: f64) -> f64 {
        let mut sum = 0.0;
        for j in 0..=big_j {
            sum += self.phi(j, r);
        }
        (sum - self.psi(big_j, r)).abs()
    }
}

fn scale_down(j: i64) -> f64 {
    2f64.powi(-(j as i32))
}

fn scale_up(j: i64) -> f64 {
    2f64.powi(j as i32)
}
