//! Periodic sampling grids, grid functions and their spectra.
//!
//! Samples are stored row-major with axis 1 slowest. Along axis `i` the
//! storage index `k` stands for the signed integer `k - N_i/2`, so positions
//! are `(k - N_i/2) L_i / N_i` and frequencies `(k - N_i/2) 2 pi / L_i`; the
//! origin and the zero frequency both sit at index `N_i/2`.

mod bands;
mod fft;
pub mod io;

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Weight;
use crate::partition::LpSystem;

pub use bands::{band_project, smooth_truncate, Decomposition};

struct GridInner {
    weight: Weight,
    sizes: Vec<usize>,
    periods: Vec<f64>,
    len: usize,
    modulus: OnceLock<Vec<f64>>,
    plans: fft::Plans,
}

/// A torus `prod_i [-L_i/2, L_i/2)` sampled with `N_i` points per axis.
/// Cloning is cheap; clones share cached tables.
#[derive(Clone)]
pub struct TorusGrid(Arc<GridInner>);

impl std::fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TorusGrid")
            .field("weight", &self.0.weight)
            .field("sizes", &self.0.sizes)
            .field("periods", &self.0.periods)
            .finish()
    }
}

impl PartialEq for TorusGrid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.weight == other.0.weight
                && self.0.sizes == other.0.sizes
                && self.0.periods == other.0.periods)
    }
}

impl TorusGrid {
    pub fn new(weight: Weight, sizes: Vec<usize>, periods: Vec<f64>) -> Result<Self> {
        let n = weight.dim();
        if sizes.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: sizes.len() });
        }
        if periods.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: periods.len() });
        }
        if sizes.iter().any(|&s| s < 2 || s % 2 != 0) {
            return Err(Error::InvalidGrid(format!("sizes must be even and >= 2, got {sizes:?}")));
        }
        if periods.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
            return Err(Error::InvalidGrid(format!("periods must be positive, got {periods:?}")));
        }
        let len = sizes
            .iter()
            .try_fold(1usize, |acc, &s| acc.checked_mul(s))
            .ok_or_else(|| Error::InvalidGrid("grid too large".into()))?;
        let plans = fft::Plans::new(&sizes);
        Ok(TorusGrid(Arc::new(GridInner {
            weight,
            sizes,
            periods,
            len,
            modulus: OnceLock::new(),
            plans,
        })))
    }

    /// Cubic grid with the same size and period on every axis.
    pub fn uniform(weight: Weight, size: usize, period: f64) -> Result<Self> {
        let n = weight.dim();
        TorusGrid::new(weight, vec![size; n], vec![period; n])
    }

    /// One-dimensional grid used when nothing else is specified:
    /// period `512 pi` (frequency spacing 1/256) and `2^18` points.
    pub fn default_1d() -> Self {
        TorusGrid::new(Weight::isotropic(1), vec![1 << 18], vec![512.0 * PI]).expect("valid default grid")
    }

    pub fn weight(&self) -> &Weight {
        &self.0.weight
    }

    pub fn dim(&self) -> usize {
        self.0.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0.sizes
    }

    pub fn periods(&self) -> &[f64] {
        &self.0.periods
    }

    /// Total number of samples.
    pub fn len(&self) -> usize {
        self.0.len
    }

    pub fn is_empty(&self) -> bool {
        self.0.len == 0
    }

    /// `prod_i L_i / N_i`.
    pub fn cell_volume(&self) -> f64 {
        self.0.sizes.iter().zip(&self.0.periods).map(|(n, l)| l / *n as f64).product()
    }

    /// `prod_i L_i`.
    pub fn volume(&self) -> f64 {
        self.0.periods.iter().product()
    }

    /// Frequency spacing `2 pi / L_i`.
    pub fn frequency_step(&self, axis: usize) -> f64 {
        2.0 * PI / self.0.periods[axis]
    }

    /// `pi N_i / L_i`, the largest representable frequency magnitude.
    pub fn nyquist(&self, axis: usize) -> f64 {
        PI * self.0.sizes[axis] as f64 / self.0.periods[axis]
    }

    pub fn signed_index(&self, axis: usize, k: usize) -> i64 {
        k as i64 - (self.0.sizes[axis] / 2) as i64
    }

    pub fn position(&self, axis: usize, k: usize) -> f64 {
        self.signed_index(axis, k) as f64 * self.0.periods[axis] / self.0.sizes[axis] as f64
    }

    pub fn frequency(&self, axis: usize, k: usize) -> f64 {
        self.signed_index(axis, k) as f64 * self.frequency_step(axis)
    }

    /// Storage index of the origin (and of the zero frequency).
    pub fn origin_index(&self) -> usize {
        self.flat_index(&self.0.sizes.iter().map(|n| n / 2).collect::<Vec<_>>())
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.0.sizes).fold(0, |acc, (k, n)| acc * n + k)
    }

    pub fn multi_index(&self, mut flat: usize, out: &mut [usize]) {
        for axis in (0..self.dim()).rev() {
            let n = self.0.sizes[axis];
            out[axis] = flat % n;
            flat /= n;
        }
    }

    /// Frequency vector at a storage index.
    pub fn frequency_at(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0; self.dim()];
        self.multi_index(flat, &mut idx);
        idx.iter().enumerate().map(|(a, &k)| self.frequency(a, k)).collect()
    }

    /// Position vector at a storage index.
    pub fn position_at(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0; self.dim()];
        self.multi_index(flat, &mut idx);
        idx.iter().enumerate().map(|(a, &k)| self.position(a, k)).collect()
    }

    /// Storage index of the lattice frequency closest to `xi`, if it is on the grid.
    pub fn frequency_index(&self, xi: &[f64]) -> Option<usize> {
        let mut multi = Vec::with_capacity(self.dim());
        for (axis, &x) in xi.iter().enumerate() {
            let k = (x / self.frequency_step(axis)).round() as i64 + (self.0.sizes[axis] / 2) as i64;
            if k < 0 || k >= self.0.sizes[axis] as i64 {
                return None;
            }
            multi.push(k as usize);
        }
        Some(self.flat_index(&multi))
    }

    /// `[xi]` for every lattice frequency, in storage order.
    pub fn modulus_table(&self) -> &[f64] {
        self.0.modulus.get_or_init(|| {
            let n = self.dim();
            let mut out = Vec::with_capacity(self.len());
            let mut idx = vec![0usize; n];
            let mut xi = vec![0.0; n];
            for flat in 0..self.len() {
                self.multi_index(flat, &mut idx);
                for a in 0..n {
                    xi[a] = self.frequency(a, idx[a]);
                }
                out.push(self.0.weight.modulus_unchecked(&xi));
            }
            out
        })
    }

    /// Largest `J` such that the ball `[xi] <= b 2^J` lies strictly inside
    /// the frequency box on every axis (`b` is the support radius of `sys`).
    pub fn max_level_for(&self, sys: &LpSystem) -> Option<i64> {
        let mut best: Option<i64> = None;
        for j in 0..64 {
            if self.level_fits(sys, j) {
                best = Some(j);
            } else {
                break;
            }
        }
        best
    }

    /// [`max_level_for`](Self::max_level_for) with the standard system.
    pub fn max_level(&self) -> Option<i64> {
        self.max_level_for(&LpSystem::standard())
    }

    pub(crate) fn level_fits(&self, sys: &LpSystem, j: i64) -> bool {
        let radius = sys.outer() * 2f64.powi(j as i32);
        self.0
            .weight
            .components()
            .iter()
            .enumerate()
            .all(|(axis, m)| radius.powf(*m) < self.nyquist(axis))
    }

    pub(crate) fn check_level(&self, sys: &LpSystem, j: i64) -> Result<()> {
        if j >= 0 && !self.level_fits(sys, j) {
            return Err(Error::Alias { level: j, max_level: self.max_level_for(sys) });
        }
        Ok(())
    }

    /// Same torus with `factor` times as many points per axis.
    pub fn refined(&self, factor: usize) -> TorusGrid {
        let sizes = self.0.sizes.iter().map(|n| n * factor).collect();
        TorusGrid::new(self.0.weight.clone(), sizes, self.0.periods.clone()).expect("refinement of a valid grid")
    }

    pub(crate) fn plans(&self) -> &fft::Plans {
        &self.0.plans
    }
}

/// Complex samples on a [`TorusGrid`].
#[derive(Clone)]
pub struct GridFunction {
    grid: TorusGrid,
    data: Vec<Complex64>,
    // exact spectrum when the function was synthesized in frequency space
    spectrum: Option<Arc<Vec<Complex64>>>,
}

impl std::fmt::Debug for GridFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GridFunction").field("grid", &self.grid).field("len", &self.data.len()).finish()
    }
}

impl GridFunction {
    pub fn new(grid: TorusGrid, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: data.len() });
        }
        Ok(GridFunction { grid, data, spectrum: None })
    }

    pub fn zeros(grid: &TorusGrid) -> Self {
        GridFunction { grid: grid.clone(), data: vec![Complex64::new(0.0, 0.0); grid.len()], spectrum: None }
    }

    /// Samples `f(x)` at every grid point.
    pub fn from_fn(grid: &TorusGrid, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let n = grid.dim();
        let mut idx = vec![0usize; n];
        let mut x = vec![0.0; n];
        let data = (0..grid.len())
            .map(|flat| {
                grid.multi_index(flat, &mut idx);
                for a in 0..n {
                    x[a] = grid.position(a, idx[a]);
                }
                f(&x)
            })
            .collect();
        GridFunction { grid: grid.clone(), data, spectrum: None }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        self.spectrum = None;
        &mut self.data
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.data
    }

    pub fn value_at_origin(&self) -> Complex64 {
        self.data[self.grid.origin_index()]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `(sum |u|^2 cellvol)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.data.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("operands live on different grids".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.check_same_grid(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(GridFunction { grid: self.grid.clone(), data, spectrum: None })
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.check_same_grid(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(GridFunction { grid: self.grid.clone(), data, spectrum: None })
    }

    /// Pointwise product. Callers are responsible for aliasing; see
    /// [`crate::paraproduct`] for oversampled products.
    pub fn mul(&self, other: &GridFunction) -> Result<GridFunction> {
        self.check_same_grid(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect();
        Ok(GridFunction { grid: self.grid.clone(), data, spectrum: None })
    }

    pub fn scale(&self, c: Complex64) -> GridFunction {
        GridFunction {
            grid: self.grid.clone(),
            data: self.data.iter().map(|z| z * c).collect(),
            spectrum: self.spectrum.as_ref().map(|s| Arc::new(s.iter().map(|z| z * c).collect())),
        }
    }

    pub(crate) fn add_assign(&mut self, other: &GridFunction) {
        debug_assert!(self.grid == other.grid);
        self.spectrum = None;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    /// Largest pointwise difference relative to the largest value of `self`.
    pub fn relative_max_diff(&self, other: &GridFunction) -> Result<f64> {
        self.check_same_grid(other)?;
        let scale = self.max_abs().max(other.max_abs());
        let diff = self.data.iter().zip(&other.data).fold(0.0, |m: f64, (a, b)| m.max((a - b).norm()));
        Ok(if scale == 0.0 { diff } else { diff / scale })
    }
}

/// Fourier coefficients on the lattice of a [`TorusGrid`].
#[derive(Clone)]
pub struct Spectrum {
    grid: TorusGrid,
    data: Vec<Complex64>,
}

impl std::fmt::Debug for Spectrum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectrum").field("grid", &self.grid).finish()
    }
}

impl Spectrum {
    pub fn new(grid: TorusGrid, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: data.len() });
        }
        Ok(Spectrum { grid, data })
    }

    /// Evaluates `f(xi)` at every lattice frequency.
    pub fn from_fn(grid: &TorusGrid, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let n = grid.dim();
        let mut idx = vec![0usize; n];
        let mut xi = vec![0.0; n];
        let data = (0..grid.len())
            .map(|flat| {
                grid.multi_index(flat, &mut idx);
                for a in 0..n {
                    xi[a] = grid.frequency(a, idx[a]);
                }
                f(&xi)
            })
            .collect();
        Spectrum { grid: grid.clone(), data }
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Multiplies coefficient `xi` by `m([xi])`.
    pub fn radial_multiply(&self, m: impl Fn(f64) -> f64) -> Spectrum {
        let table = self.grid.modulus_table();
        let data = self.data.iter().zip(table).map(|(z, r)| z * m(*r)).collect();
        Spectrum { grid: self.grid.clone(), data }
    }

    /// Embeds the coefficients into the lattice of a finer grid over the same torus.
    pub fn zero_pad(&self, fine: &TorusGrid) -> Result<Spectrum> {
        if fine.periods() != self.grid.periods() || fine.weight() != self.grid.weight() {
            return Err(Error::InvalidGrid("zero padding needs the same torus".into()));
        }
        if fine.sizes().iter().zip(self.grid.sizes()).any(|(f, c)| f < c) {
            return Err(Error::InvalidGrid("target grid is coarser".into()));
        }
        let n = self.grid.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); fine.len()];
        let mut idx = vec![0usize; n];
        let mut fidx = vec![0usize; n];
        for (flat, z) in self.data.iter().enumerate() {
            if *z == Complex64::new(0.0, 0.0) {
                continue;
            }
            self.grid.multi_index(flat, &mut idx);
            for a in 0..n {
                fidx[a] = idx[a] + (fine.sizes()[a] - self.grid.sizes()[a]) / 2;
            }
            out[fine.flat_index(&fidx)] = *z;
        }
        Ok(Spectrum { grid: fine.clone(), data: out })
    }

    /// Energy `(sum |c|^2)^{1/2}` over the lattice points where `keep([xi])` holds.
    pub fn energy_where(&self, keep: impl Fn(f64) -> bool) -> f64 {
        let table = self.grid.modulus_table();
        self.data.iter().zip(table).filter(|(_, r)| keep(**r)).map(|(z, _)| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }

    /// Nonzero coefficients with their frequencies.
    pub fn nonzero_terms(&self) -> Vec<(Vec<f64>, Complex64)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(flat, c)| (self.grid.frequency_at(flat), *c))
            .collect()
    }
}

/// Forward transform `u -> cellvol * sum_x u(x) e^{-i x.xi}`.
pub fn dft(u: &GridFunction) -> Spectrum {
    if let Some(s) = &u.spectrum {
        return Spectrum { grid: u.grid.clone(), data: s.as_ref().clone() };
    }
    let mut data = u.data.clone();
    fft::transform(&u.grid, &mut data, false);
    let c = u.grid.cell_volume();
    for z in &mut data {
        *z *= c;
    }
    Spectrum { grid: u.grid.clone(), data }
}

/// Inverse of [`dft`]: `u(x) = (1/prod L_i) sum_xi c(xi) e^{i x.xi}`.
pub fn idft(s: &Spectrum) -> GridFunction {
    let mut data = s.data.clone();
    fft::transform(&s.grid, &mut data, true);
    let c = 1.0 / s.grid.volume();
    for z in &mut data {
        *z *= c;
    }
    GridFunction { grid: s.grid.clone(), data, spectrum: None }
}

/// Like [`idft`], but the result remembers its exact coefficients so that a
/// later [`dft`] returns them without round-off.
pub fn synthesize(s: Spectrum) -> GridFunction {
    let mut u = idft(&s);
    u.spectrum = Some(Arc::new(s.data));
    u
}

/// Spectral interpolation onto a finer grid over the same torus.
pub fn upsample(u: &GridFunction, fine: &TorusGrid) -> Result<GridFunction> {
    let s = dft(u).zero_pad(fine)?;
    Ok(synthesize(s))
}
