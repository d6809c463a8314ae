//! Paraproduct splitting of pointwise products.
//!
//! With `u_j` the Littlewood-Paley pieces and `u^k = u_0 + ... + u_k`:
//!
//! * `pi1(u, v) = sum_{j<=J} u^{j-2} v_j`
//! * `pi2(u, v) = sum_{j<=J} (u_{j-1} v_j + u_j v_j + u_j v_{j-1})`
//! * `pi3(u, v) = pi1(v, u)`
//!
//! and `pi1 + pi2 + pi3 = u^J v^J`. Products are formed on a grid with twice
//! as many points per axis (zero padding in frequency), so no product of two
//! unaliased pieces wraps around.

use crate::error::{Error, Result};
use crate::grid::{dft, upsample, Decomposition, GridFunction, TorusGrid};
use crate::partition::LpSystem;

const OVERSAMPLING: usize = 2;
const ROUNDOFF: f64 = 1e-13;

/// Two functions decomposed on the oversampled grid.
pub struct ProductSetup {
    fine: TorusGrid,
    u: Decomposition,
    v: Decomposition,
}

impl ProductSetup {
    /// `j_max` defaults to the largest level that is unaliased on the input grid.
    pub fn new(u: &GridFunction, v: &GridFunction, sys: &LpSystem, j_max: Option<i64>) -> Result<Self> {
        if u.grid() != v.grid() {
            return Err(Error::InvalidGrid("factors live on different grids".into()));
        }
        let coarse = u.grid();
        let top = coarse.max_level_for(sys).ok_or(Error::Alias { level: 0, max_level: None })?;
        let j = j_max.unwrap_or(top);
        coarse.check_level(sys, j)?;
        let fine = coarse.refined(OVERSAMPLING);
        let decompose = |w: &GridFunction| Decomposition::from_spectrum(dft(w).zero_pad(&fine)?, sys, j);
        Ok(ProductSetup { u: decompose(u)?, v: decompose(v)?, fine })
    }

    pub fn fine_grid(&self) -> &TorusGrid {
        &self.fine
    }

    pub fn j_max(&self) -> i64 {
        self.u.j_max()
    }

    pub fn swapped(self) -> Self {
        ProductSetup { fine: self.fine, u: self.v, v: self.u }
    }

    /// `sum_j a^{j-2} b_j`, the low-high part.
    fn low_high(&self, a: &Decomposition, b: &Decomposition) -> GridFunction {
        let mut out = GridFunction::zeros(&self.fine);
        let mut low = GridFunction::zeros(&self.fine);
        for j in 0..=self.j_max() {
            if j >= 2 {
                if let Some(piece) = a.band(j - 2) {
                    low.add_assign(piece);
                }
            }
            if let Some(high) = b.band(j) {
                out.add_assign(&low.mul(high).expect("same grid"));
            }
        }
        out
    }

    fn diagonal_term(&self, j: i64) -> GridFunction {
        let mut out = GridFunction::zeros(&self.fine);
        for (a, b) in [(j - 1, j), (j, j), (j, j - 1)] {
            if let (Some(x), Some(y)) = (self.u.band(a), self.v.band(b)) {
                out.add_assign(&x.mul(y).expect("same grid"));
            }
        }
        out
    }

    pub fn pi1(&self) -> GridFunction {
        self.low_high(&self.u, &self.v)
    }

    pub fn pi2(&self) -> GridFunction {
        let mut out = GridFunction::zeros(&self.fine);
        for j in 0..=self.j_max() {
            out.add_assign(&self.diagonal_term(j));
        }
        out
    }

    pub fn pi3(&self) -> GridFunction {
        self.low_high(&self.v, &self.u)
    }

    /// `u^J v^J`.
    pub fn truncated_product(&self) -> GridFunction {
        self.truncated_product_at(self.j_max())
    }

    /// `u^k v^k` for `k <= J`.
    pub fn truncated_product_at(&self, k: i64) -> GridFunction {
        self.u.partial_sum(k).mul(&self.v.partial_sum(k)).expect("same grid")
    }

    /// `L2` norm of the part of each summand outside its predicted frequency
    /// window, relative to the summand's own `L2` norm. Summands below
    /// `ROUNDOFF * max|u^J| max|v^J|` are round-off and count as zero.
    pub fn spectral_support_report(&self) -> SupportReport {
        let sys = *self.u.system();
        let floor = ROUNDOFF * self.u.partial_sum(self.j_max()).max_abs() * self.v.partial_sum(self.j_max()).max_abs();
        let (r, big_r) = (sys.inner(), sys.outer());
        let mut levels = Vec::new();
        let mut low_u = GridFunction::zeros(&self.fine);
        let mut low_v = GridFunction::zeros(&self.fine);
        for j in 0..=self.j_max() {
            if j >= 2 {
                if let Some(p) = self.u.band(j - 2) {
                    low_u.add_assign(p);
                }
                if let Some(p) = self.v.band(j - 2) {
                    low_v.add_assign(p);
                }
            }
            let scale = 2f64.powi(j as i32);
            let lo = (big_r / 4.0 - r / 2.0).abs() * scale;
            let hi = 1.25 * big_r * scale;
            let outer = |f: Option<GridFunction>, inside: &dyn Fn(f64) -> bool| -> f64 {
                match f {
                    None => 0.0,
                    Some(f) if f.max_abs() > floor => leak(&f, inside),
                    Some(_) => 0.0,
                }
            };
            let s1 = self.v.band(j).map(|b| low_u.mul(b).expect("same grid"));
            let s3 = self.u.band(j).map(|b| b.mul(&low_v).expect("same grid"));
            let annulus = |x: f64| x >= lo && x <= hi;
            let ball = |x: f64| x <= big_r * 2.0 * scale;
            levels.push(LevelLeak {
                level: j,
                low_high: outer(s1, &annulus),
                high_low: outer(s3, &annulus),
                diagonal: outer(Some(self.diagonal_term(j)), &ball),
            });
        }
        SupportReport { levels }
    }
}

fn leak(f: &GridFunction, inside: &dyn Fn(f64) -> bool) -> f64 {
    let spec = dft(f);
    let total = spec.energy_where(|_| true);
    if total == 0.0 {
        return 0.0;
    }
    spec.energy_where(|x| !inside(x)) / total
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct LevelLeak {
    pub level: i64,
    /// `u^{j-2} v_j` outside `|R/4 - r/2| 2^j <= [xi] <= 5R/4 2^j`
    pub low_high: f64,
    /// `u_j v^{j-2}` outside the same annulus
    pub high_low: f64,
    /// the diagonal summand outside `[xi] <= R 2^{j+1}`
    pub diagonal: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SupportReport {
    pub levels: Vec<LevelLeak>,
}

impl SupportReport {
    pub fn worst(&self) -> f64 {
        self.levels.iter().map(|l| l.low_high.max(l.high_low).max(l.diagonal)).fold(0.0, f64::max)
    }
}

pub fn pi1(u: &GridFunction, v: &GridFunction, sys: &LpSystem, j_max: Option<i64>) -> Result<GridFunction> {
    Ok(ProductSetup::new(u, v, sys, j_max)?.pi1())
}

pub fn pi2(u: &GridFunction, v: &GridFunction, sys: &LpSystem, j_max: Option<i64>) -> Result<GridFunction> {
    Ok(ProductSetup::new(u, v, sys, j_max)?.pi2())
}

pub fn pi3(u: &GridFunction, v: &GridFunction, sys: &LpSystem, j_max: Option<i64>) -> Result<GridFunction> {
    Ok(ProductSetup::new(u, v, sys, j_max)?.pi3())
}

/// `u^k v^k` on the oversampled grid.
pub fn pi_product(u: &GridFunction, v: &GridFunction, sys: &LpSystem, k: i64) -> Result<GridFunction> {
    Ok(ProductSetup::new(u, v, sys, Some(k))?.truncated_product())
}

/// Pointwise product on the oversampled grid.
pub fn oversampled_product(u: &GridFunction, v: &GridFunction) -> Result<GridFunction> {
    if u.grid() != v.grid() {
        return Err(Error::InvalidGrid("factors live on different grids".into()));
    }
    let fine = u.grid().refined(OVERSAMPLING);
    upsample(u, &fine)?.mul(&upsample(v, &fine)?)
}

/// `max |pi1 + pi2 + pi3 - u^J v^J| / max |u^J v^J|`.
pub fn decomposition_residual(setup: &ProductSetup) -> f64 {
    let sum = setup.pi1().add(&setup.pi2()).expect("same grid").add(&setup.pi3()).expect("same grid");
    let target = setup.truncated_product();
    let scale = target.max_abs();
    let diff = sum.sub(&target).expect("same grid").max_abs();
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// Relative distance of `u^k v^k` to the pointwise product for `k = 0..=J`.
pub fn convergence_probe(u: &GridFunction, v: &GridFunction, sys: &LpSystem) -> Result<Vec<f64>> {
    let setup = ProductSetup::new(u, v, sys, None)?;
    let exact = oversampled_product(u, v)?;
    (0..=setup.j_max()).map(|k| exact.relative_max_diff(&setup.truncated_product_at(k))).collect()
}

/// `sup |u^k v^k|` over the sample points where `region` holds, for `k = 0..=J`.
pub fn locality_probe(
    u: &GridFunction,
    v: &GridFunction,
    sys: &LpSystem,
    region: impl Fn(&[f64]) -> bool,
) -> Result<Vec<f64>> {
    let setup = ProductSetup::new(u, v, sys, None)?;
    let fine = setup.fine_grid().clone();
    let mask: Vec<bool> = (0..fine.len()).map(|i| region(&fine.position_at(i))).collect();
    Ok((0..=setup.j_max())
        .map(|k| {
            let w = setup.truncated_product_at(k);
            w.values().iter().zip(&mask).filter(|(_, m)| **m).fold(0.0, |acc: f64, (z, _)| acc.max(z.norm()))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Weight;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn grid() -> TorusGrid {
        TorusGrid::new(Weight::isotropic(1), vec![256], vec![2.0 * PI]).unwrap()
    }

    fn smooth(g: &TorusGrid, a: f64, b: f64) -> GridFunction {
        GridFunction::from_fn(g, |x| Complex64::new((a * x[0]).cos() + 0.3 * (b * x[0]).sin(), 0.1 * x[0].sin()))
    }

    #[test]
    fn pieces_add_up() {
        let sys = LpSystem::standard();
        let g = grid();
        let setup = ProductSetup::new(&smooth(&g, 3.0, 17.0), &smooth(&g, 5.0, 40.0), &sys, None).unwrap();
        assert!(decomposition_residual(&setup) < 1e-13);
    }

    #[test]
    fn constant_left_factor() {
        let sys = LpSystem::standard();
        let g = grid();
        let c = GridFunction::from_fn(&g, |_| Complex64::new(2.5, 0.0));
        let v = smooth(&g, 6.0, 21.0);
        let setup = ProductSetup::new(&c, &v, &sys, None).unwrap();
        let fine = setup.fine_grid().clone();
        let vd = Decomposition::from_spectrum(dft(&v).zero_pad(&fine).unwrap(), &sys, setup.j_max()).unwrap();
        let expect = vd
            .partial_sum(setup.j_max())
            .sub(&vd.band_or_zero(0))
            .unwrap()
            .sub(&vd.band_or_zero(1))
            .unwrap()
            .scale(Complex64::new(2.5, 0.0));
        assert!(setup.pi1().relative_max_diff(&expect).unwrap() < 1e-13);
    }

    #[test]
    fn aliased_truncation_rejected() {
        let g = grid();
        let u = smooth(&g, 1.0, 2.0);
        let top = g.max_level().unwrap();
        assert!(ProductSetup::new(&u, &u, &LpSystem::standard(), Some(top + 1)).is_err());
    }
}
