//! Identities and limits for products of witnesses.
//!
//! * `Phi_0(theta_{N,+}^{(s)} theta_{N,-}^{(-s)}) = N theta^2` exactly;
//! * `Phi_{2^k+1}(Omega_N^{(t0)} Omega_N^{(t1)}) = 2^{-2^k (t0+t1)} omega_{2^k}^2` exactly;
//! * `omega N^{-1} sum_{k=N}^{2N-1} omega(2^{-kM} .) -> omega` as `N` grows;
//! * `2^{k|M|} Phi_0(rho_k^2) -> ||rho^2||_{L1} F^{-1} Phi_0` as `k` grows.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Weight;
use crate::grid::{band_project, dft, synthesize, GridFunction, Spectrum, TorusGrid};
use crate::norms::lp_norm;
use crate::partition::LpSystem;
use crate::witness::{rho_l2_squared, WitnessSpec};

/// Product of two functions whose spectra fit together below the Nyquist frequency.
fn exact_product(a: &GridFunction, b: &GridFunction, radius: f64) -> Result<GridFunction> {
    let g = a.grid();
    for (axis, m) in g.weight().components().iter().enumerate() {
        if radius.powf(*m) >= g.nyquist(axis) {
            return Err(Error::Alias { level: radius.log2().ceil() as i64, max_level: g.max_level() });
        }
    }
    a.mul(b)
}

/// `max |Phi_0(theta_{N,+}^{(s0)} theta_{N,-}^{(-s0)}) - N theta^2| / max |N theta^2|`.
pub fn theta_pair_defect(grid: &TorusGrid, n: u32, s0: f64) -> Result<f64> {
    let plus = WitnessSpec::ThetaFamilyPlus { n, t: s0 };
    let minus = WitnessSpec::ThetaFamilyMinus { n, t: -s0 };
    let radius = plus.outer_radius()? + minus.outer_radius()?;
    let prod = exact_product(&plus.build(grid)?, &minus.build(grid)?, radius)?;
    let low = band_project(&prod, &LpSystem::standard(), 0)?;
    let theta = WitnessSpec::Theta.build(grid)?;
    let expect = theta.mul(&theta)?.scale(Complex64::new(n as f64, 0.0));
    low.relative_max_diff(&expect)
}

/// A one-dimensional grid holding `Omega_N` squared without aliasing.
pub fn omega_square_grid(n: u32) -> Result<TorusGrid> {
    let top = 1u64 << (n + 1);
    if top > 20 {
        return Err(Error::InvalidParam(format!("Omega_N with N = {n} needs frequencies 2^{top}")));
    }
    // omega_4 spans 2^4/4 = 4 frequency units; a period of 8 pi gives 16 bins
    let period = 8.0 * PI;
    let nyquist = 2.0 * 2f64.powi(top as i32) * 1.01;
    let size = ((2.0 * nyquist * period / (2.0 * PI)).ceil() as usize).next_power_of_two();
    TorusGrid::new(Weight::isotropic(1), vec![size], vec![period])
}

/// `max |Phi_{2^k+1}(Omega_N^{(t0)} Omega_N^{(t1)}) - 2^{-2^k(t0+t1)} omega_{2^k}^2|`,
/// relative to the right-hand side, for `2 <= k <= N+1`.
pub fn omega_square_defect(grid: &TorusGrid, n: u32, k: u32, t0: f64, t1: f64) -> Result<f64> {
    if !(2..=n + 1).contains(&k) {
        return Err(Error::InvalidParam(format!("need 2 <= k <= N+1, got k = {k}, N = {n}")));
    }
    let a = WitnessSpec::BigOmegaFamily { n, t: t0 };
    let b = WitnessSpec::BigOmegaFamily { n, t: t1 };
    let radius = a.outer_radius()? + b.outer_radius()?;
    let prod = exact_product(&a.build(grid)?, &b.build(grid)?, radius)?;
    let level = (1i64 << k) + 1;
    let lhs = band_project(&prod, &LpSystem::standard(), level)?;
    let e = 1i64 << k;
    let rhs = WitnessSpec::OmegaKSq { k: e }.build(grid)?.scale(Complex64::new((-(e as f64) * (t0 + t1)).exp2(), 0.0));
    lhs.relative_max_diff(&rhs)
}

fn trig_eval(terms: &[(Vec<f64>, Complex64)], volume: f64, x: &[f64]) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for (xi, c) in terms {
        let phase: f64 = xi.iter().zip(x).map(|(a, b)| a * b).sum();
        sum += c * Complex64::from_polar(1.0, phase);
    }
    sum / volume
}

/// `sup |omega N^{-1} sum_{k=N}^{2N-1} omega(2^{-kM} x) - omega(x)|` over every
/// `stride`-th sample point.
pub fn omega_average_distance(grid: &TorusGrid, n: u32, stride: usize) -> Result<f64> {
    if n == 0 || stride == 0 {
        return Err(Error::InvalidParam("need N >= 1 and stride >= 1".into()));
    }
    let omega = WitnessSpec::Omega.build(grid)?;
    let terms = dft(&omega).nonzero_terms();
    let m = grid.weight().components().to_vec();
    let volume = grid.volume();
    let mut worst = 0.0_f64;
    let mut y = vec![0.0; grid.dim()];
    for flat in (0..grid.len()).step_by(stride) {
        let x = grid.position_at(flat);
        let mut avg = Complex64::new(0.0, 0.0);
        for k in n..2 * n {
            for a in 0..x.len() {
                y[a] = x[a] * (-(k as f64) * m[a]).exp2();
            }
            avg += trig_eval(&terms, volume, &y);
        }
        avg /= n as f64;
        let w = omega.values()[flat];
        worst = worst.max((w * avg - w).norm());
    }
    Ok(worst)
}

/// `|| 2^{k|M|} Phi_0(rho_k^2) - ||rho^2||_{L1} F^{-1} Phi_0 ||_{L_p}` for each `k` in `ks`.
pub fn rho_square_distances(grid: &TorusGrid, ks: &[i64], p: f64) -> Result<Vec<f64>> {
    let sys = LpSystem::standard();
    let weight = grid.weight().clone();
    let c = rho_l2_squared(&weight);
    let table = grid.modulus_table();
    let limit_spec = Spectrum::new(grid.clone(), table.iter().map(|r| Complex64::new(c * sys.phi(0, *r), 0.0)).collect())?;
    let limit = synthesize(limit_spec);
    ks.iter()
        .map(|&k| {
            if k < 1 {
                return Err(Error::InvalidParam(format!("rho_k limit runs over k >= 1, got {k}")));
            }
            let spec = WitnessSpec::RhoK { k };
            let rho = spec.build(grid)?;
            let sq = exact_product(&rho, &rho, 2.0 * spec.outer_radius()?)?;
            let scaled = band_project(&sq, &sys, 0)?.scale(Complex64::new((k as f64 * weight.total()).exp2(), 0.0));
            lp_norm(&scaled.sub(&limit)?, p)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    /// relative defect of the theta pair identity with `N = 3`, `s0 = 1`
    pub theta_pair: f64,
    /// relative defect of the Omega square identity with `N = 3`, `k = 2`
    pub omega_square: f64,
    /// `(N, distance)` for the omega average
    pub omega_average: Vec<(u32, f64)>,
    /// `(k, L_inf distance)` for the rho square limit
    pub rho_square: Vec<(i64, f64)>,
}

impl LimitReport {
    pub fn omega_average_improves(&self) -> bool {
        self.omega_average.windows(2).all(|w| w[1].1 < w[0].1)
    }

    pub fn rho_square_decreasing(&self) -> bool {
        self.rho_square.windows(2).all(|w| w[1].1 < w[0].1)
    }
}

/// All four checks on one-dimensional grids: `grid` for the theta, omega
/// average and rho parts, and a dedicated fine grid for the Omega square.
pub fn limit_demos(grid: &TorusGrid) -> Result<LimitReport> {
    let theta_pair = theta_pair_defect(grid, 3, 1.0)?;
    let omega_square = omega_square_defect(&omega_square_grid(3)?, 3, 2, 0.5, -0.25)?;
    let omega_average =
        [4u32, 8].iter().map(|&n| Ok((n, omega_average_distance(grid, n, 4)?))).collect::<Result<Vec<_>>>()?;
    let top = (1..=7).filter(|k| 2f64.powi(k + 1) < grid.nyquist(0)).max().unwrap_or(1) as i64;
    let ks: Vec<i64> = (1..=top).collect();
    let rho_square = ks.iter().copied().zip(rho_square_distances(grid, &ks, f64::INFINITY)?).collect();
    Ok(LimitReport { theta_pair, omega_square, omega_average, rho_square })
}

/// Pairings `phi(0) H_k`, `H_k = 1 + 1/2 + ... + 1/k`, of the divergent
/// sequence against a test function, with the least-squares slope of
/// `phi(0) H_k` against `ln k`.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceReport {
    pub phi0: f64,
    pub values: Vec<(u64, f64)>,
    pub slope: f64,
    pub intercept: f64,
}

pub fn divergence_demo(k_max: u64, phi0: f64) -> Result<DivergenceReport> {
    if k_max < 2 {
        return Err(Error::InvalidParam(format!("need K >= 2, got {k_max}")));
    }
    if phi0 == 0.0 || !phi0.is_finite() {
        return Err(Error::InvalidParam(format!("phi(0) must be finite and nonzero, got {phi0}")));
    }
    let mut h = 0.0;
    let values: Vec<(u64, f64)> = (1..=k_max)
        .map(|k| {
            h += 1.0 / k as f64;
            (k, phi0 * h)
        })
        .collect();
    let n = values.len() as f64;
    let xs: Vec<f64> = values.iter().map(|(k, _)| (*k as f64).ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = values.iter().map(|(_, y)| y).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, (_, y)) in xs.iter().zip(&values) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = sxy / sxx / phi0;
    Ok(DivergenceReport { phi0, slope, intercept: my - slope * phi0 * mx, values })
}
