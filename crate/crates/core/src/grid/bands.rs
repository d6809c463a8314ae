use rayon::prelude::*;

use super::{dft, idft, GridFunction, Spectrum, TorusGrid};
use crate::error::{Error, Result};
use crate::partition::LpSystem;

/// `F^{-1} phi_j F u`.
pub fn band_project(u: &GridFunction, sys: &LpSystem, j: i64) -> Result<GridFunction> {
    if j < 0 {
        return Ok(GridFunction::zeros(u.grid()));
    }
    u.grid().check_level(sys, j)?;
    Ok(idft(&dft(u).radial_multiply(|r| sys.phi(j, r))))
}

/// `u^k = F^{-1} psi_k F u`; zero for `k < 0`.
pub fn smooth_truncate(u: &GridFunction, sys: &LpSystem, k: i64) -> Result<GridFunction> {
    if k < 0 {
        return Ok(GridFunction::zeros(u.grid()));
    }
    u.grid().check_level(sys, k)?;
    Ok(idft(&dft(u).radial_multiply(|r| sys.psi(k, r))))
}

/// The pieces `u_0, ..., u_J` of a function, sharing one forward transform.
///
/// A band whose masked coefficients are all exactly zero is stored as `None`
/// and skipped by the norms.
#[derive(Debug, Clone)]
pub struct Decomposition {
    grid: TorusGrid,
    sys: LpSystem,
    spectrum: Spectrum,
    bands: Vec<Option<GridFunction>>,
}

impl Decomposition {
    pub fn new(u: &GridFunction, sys: &LpSystem, j_max: i64) -> Result<Self> {
        Self::from_spectrum(dft(u), sys, j_max)
    }

    /// Uses the largest unaliased level.
    pub fn full(u: &GridFunction, sys: &LpSystem) -> Result<Self> {
        let j = u.grid().max_level_for(sys).ok_or(Error::Alias { level: 0, max_level: None })?;
        Self::new(u, sys, j)
    }

    pub fn from_spectrum(spectrum: Spectrum, sys: &LpSystem, j_max: i64) -> Result<Self> {
        if j_max < 0 {
            return Err(Error::InvalidParam(format!("truncation level must be >= 0, got {j_max}")));
        }
        let grid = spectrum.grid().clone();
        grid.check_level(sys, j_max)?;
        // warm the modulus cache before going parallel
        grid.modulus_table();
        let bands = (0..=j_max)
            .into_par_iter()
            .map(|j| {
                let masked = spectrum.radial_multiply(|r| sys.phi(j, r));
                if masked.is_zero() {
                    None
                } else {
                    Some(idft(&masked))
                }
            })
            .collect();
        Ok(Decomposition { grid, sys: *sys, spectrum, bands })
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn system(&self) -> &LpSystem {
        &self.sys
    }

    pub fn j_max(&self) -> i64 {
        self.bands.len() as i64 - 1
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// `u_j`, or `None` when the band is identically zero.
    pub fn band(&self, j: i64) -> Option<&GridFunction> {
        if j < 0 {
            return None;
        }
        self.bands.get(j as usize).and_then(|b| b.as_ref())
    }

    /// `u_j` materialized, zeros included.
    pub fn band_or_zero(&self, j: i64) -> GridFunction {
        self.band(j).cloned().unwrap_or_else(|| GridFunction::zeros(&self.grid))
    }

    /// `u_0 + ... + u_j`.
    pub fn partial_sum(&self, j: i64) -> GridFunction {
        let mut acc = GridFunction::zeros(&self.grid);
        for i in 0..=j.min(self.j_max()) {
            if let Some(b) = self.band(i) {
                acc.add_assign(b);
            }
        }
        acc
    }

    /// `||u - u^J||_{L2} / ||u||_{L2}`, measured on the coefficients.
    pub fn tail_ratio(&self) -> f64 {
        let j = self.j_max();
        let total = self.spectrum.energy_where(|_| true);
        if total == 0.0 {
            return 0.0;
        }
        let table = self.grid.modulus_table();
        let tail: f64 = self
            .spectrum
            .values()
            .iter()
            .zip(table)
            .map(|(z, r)| (z * (1.0 - self.sys.psi(j, *r))).norm_sqr())
            .sum::<f64>()
            .sqrt();
        tail / total
    }

    pub(crate) fn bands_raw(&self) -> impl Iterator<Item = (i64, &GridFunction)> {
        self.bands.iter().enumerate().filter_map(|(j, b)| b.as_ref().map(|b| (j as i64, b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::geometry::Weight;
    use std::f64::consts::PI;

    fn sample_grid() -> TorusGrid {
        TorusGrid::new(Weight::isotropic(1), vec![256], vec![2.0 * PI]).unwrap()
    }

    fn wiggly(g: &TorusGrid) -> GridFunction {
        GridFunction::from_fn(g, |x| {
            let t = x[0];
            Complex64::new((-(t * t)).exp() + (7.0 * t).sin() * 0.3, (3.0 * t).cos() * 0.2)
        })
    }

    #[test]
    fn bands_sum_to_truncation() {
        let g = sample_grid();
        let sys = LpSystem::standard();
        let u = wiggly(&g);
        let jm = g.max_level().unwrap();
        let d = Decomposition::new(&u, &sys, jm).unwrap();
        let trunc = smooth_truncate(&u, &sys, jm).unwrap();
        assert!(d.partial_sum(jm).relative_max_diff(&trunc).unwrap() < 1e-12);
    }

    #[test]
    fn aliased_levels_rejected() {
        let g = sample_grid();
        let sys = LpSystem::standard();
        let u = wiggly(&g);
        let jm = g.max_level().unwrap();
        assert!(matches!(band_project(&u, &sys, jm + 1), Err(Error::Alias { .. })));
        assert!(band_project(&u, &sys, jm).is_ok());
        assert_eq!(smooth_truncate(&u, &sys, -1).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn band_projection_is_band_limited() {
        let g = sample_grid();
        let sys = LpSystem::standard();
        let u = wiggly(&g);
        for j in 0..=g.max_level().unwrap() {
            let b = band_project(&u, &sys, j).unwrap();
            let (lo, hi) = sys.band_support(j);
            let spec = dft(&b);
            let outside = spec.energy_where(|r| r < lo || r > hi);
            assert!(outside <= 1e-13 * u.l2_norm().max(1e-300), "j={j} leak={outside}");
        }
    }
}
