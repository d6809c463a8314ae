//! Test functions with known Besov/Triebel-Lizorkin norms.
//!
//! All of them are synthesized from their Fourier transforms:
//!
//! * `theta^(xi) = c Psi(26 [xi])`, supported in `[xi] <= 1/20`, scaled so `theta(0) = 1`;
//! * `rho^(xi) = Psi(13/10 [xi]) - Psi(44/30 [xi])`, supported in `3/4 <= [xi] <= 1`;
//! * `omega^(xi) = c rho^(xi) Psi(13/3 [xi - zeta])` with `zeta` the unit vector
//!   on the first axis of weight 1, scaled so `omega(0) = 1`.
//!
//! `rho_k(x) = rho(2^{kM} x)`, `omega_k(x) = omega(2^{kM} x)` and
//! `theta_k(x) = theta(x) exp(i sgn(k) 2^|k| x_j0)`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Weight;
use crate::grid::{synthesize, GridFunction, Spectrum, TorusGrid};
use crate::norms::{lp_norm, lq_seq, NormParams, Scale};
use crate::partition::LpSystem;

const THETA_DILATION: f64 = 26.0;
const THETA_RADIUS: f64 = 1.0 / 20.0;
const RHO_INNER: f64 = 0.75;
const RHO_OUTER: f64 = 1.0;
const OMEGA_LOCALIZER: f64 = 13.0 / 3.0;
const OMEGA_RADIUS: f64 = 0.3;
const MIN_BINS: f64 = 8.0;

/// Description of a test function, e.g. `{"kind":"rho_k","k":3}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessSpec {
    Theta,
    Rho,
    Omega,
    ThetaK { k: i64 },
    RhoK { k: i64 },
    OmegaK { k: i64 },
    /// `omega_k^2`
    OmegaKSq { k: i64 },
    /// `theta theta_k`
    ThetaThetaK { k: i64 },
    /// `theta omega_k`
    ThetaOmegaK { k: i64 },
    /// `sum_{k=1}^N 2^{-kt} theta_k`
    ThetaFamilyPlus {
        #[serde(rename = "N")]
        n: u32,
        t: f64,
    },
    /// `sum_{k=1}^N 2^{-kt} theta_{-k}`
    ThetaFamilyMinus {
        #[serde(rename = "N")]
        n: u32,
        t: f64,
    },
    /// `sum_{k=l+1}^{l+N} 2^{-kt} rho_k`
    RhoFamily {
        #[serde(rename = "N")]
        n: u32,
        l: i64,
        t: f64,
    },
    /// `sum_{k=N+1}^{2N} 2^{-kt} omega_k`
    OmegaFamily {
        #[serde(rename = "N")]
        n: u32,
        t: f64,
    },
    /// `sum_{k=2}^{N+1} 2^{-2^k t} omega_{2^k}`
    #[serde(rename = "Omega_family")]
    BigOmegaFamily {
        #[serde(rename = "N")]
        n: u32,
        t: f64,
    },
    /// `omega_{3N} sum_{k=N+1}^{2N} omega_k`
    OmegaPair {
        #[serde(rename = "N")]
        n: u32,
    },
}

/// One spectral building block of a witness.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Atom {
    Theta(i64),
    Rho(i64),
    Omega(i64),
}

impl Atom {
    /// Largest modulus in the spectral support.
    fn outer_radius(&self) -> f64 {
        match *self {
            Atom::Theta(0) => THETA_RADIUS,
            Atom::Theta(k) => 2f64.powi(k.abs() as i32) + THETA_RADIUS,
            Atom::Rho(k) | Atom::Omega(k) => RHO_OUTER * 2f64.powi(k as i32),
        }
    }

    /// Level of the band whose plateau contains the support.
    fn level(&self) -> i64 {
        match *self {
            Atom::Theta(k) => k.abs(),
            Atom::Rho(k) | Atom::Omega(k) => k.max(0),
        }
    }
}

/// A weighted sum of atoms, optionally multiplied by a second sum.
struct Recipe {
    terms: Vec<(f64, Atom)>,
    times: Option<Vec<(f64, Atom)>>,
}

impl WitnessSpec {
    fn recipe(&self) -> Result<Recipe> {
        let single = |a: Atom| vec![(1.0, a)];
        let geometric = |range: std::ops::RangeInclusive<i64>, t: f64, atom: fn(i64) -> Atom| {
            range.map(|k| ((-(k as f64) * t).exp2(), atom(k))).collect::<Vec<_>>()
        };
        let positive = |n: u32| {
            if n == 0 {
                Err(Error::InvalidParam("family length N must be >= 1".into()))
            } else {
                Ok(n as i64)
            }
        };
        Ok(match *self {
            WitnessSpec::Theta => Recipe { terms: single(Atom::Theta(0)), times: None },
            WitnessSpec::Rho => Recipe { terms: single(Atom::Rho(0)), times: None },
            WitnessSpec::Omega => Recipe { terms: single(Atom::Omega(0)), times: None },
            WitnessSpec::ThetaK { k } => Recipe { terms: single(Atom::Theta(k)), times: None },
            WitnessSpec::RhoK { k } => Recipe { terms: single(Atom::Rho(k)), times: None },
            WitnessSpec::OmegaK { k } => {
                require_natural(k)?;
                Recipe { terms: single(Atom::Omega(k)), times: None }
            }
            WitnessSpec::OmegaKSq { k } => {
                require_natural(k)?;
                Recipe { terms: single(Atom::Omega(k)), times: Some(single(Atom::Omega(k))) }
            }
            WitnessSpec::ThetaThetaK { k } => {
                Recipe { terms: single(Atom::Theta(0)), times: Some(single(Atom::Theta(k))) }
            }
            WitnessSpec::ThetaOmegaK { k } => {
                require_natural(k)?;
                Recipe { terms: single(Atom::Theta(0)), times: Some(single(Atom::Omega(k))) }
            }
            WitnessSpec::ThetaFamilyPlus { n, t } => {
                Recipe { terms: geometric(1..=positive(n)?, t, Atom::Theta), times: None }
            }
            WitnessSpec::ThetaFamilyMinus { n, t } => {
                let terms = (1..=positive(n)?).map(|k| ((-(k as f64) * t).exp2(), Atom::Theta(-k))).collect();
                Recipe { terms, times: None }
            }
            WitnessSpec::RhoFamily { n, l, t } => {
                if l < 0 {
                    return Err(Error::InvalidParam(format!("offset l must be >= 0, got {l}")));
                }
                Recipe { terms: geometric(l + 1..=l + positive(n)?, t, Atom::Rho), times: None }
            }
            WitnessSpec::OmegaFamily { n, t } => {
                let n = positive(n)?;
                Recipe { terms: geometric(n + 1..=2 * n, t, Atom::Omega), times: None }
            }
            WitnessSpec::BigOmegaFamily { n, t } => {
                let n = positive(n)?;
                if n + 1 > 5 {
                    return Err(Error::InvalidParam("Omega family limited to N <= 4".into()));
                }
                let terms = (2..=n + 1)
                    .map(|k| {
                        let e = 1i64 << k;
                        ((-(e as f64) * t).exp2(), Atom::Omega(e))
                    })
                    .collect();
                Recipe { terms, times: None }
            }
            WitnessSpec::OmegaPair { n } => {
                let n = positive(n)?;
                Recipe {
                    terms: single(Atom::Omega(3 * n)),
                    times: Some((n + 1..=2 * n).map(|k| (1.0, Atom::Omega(k))).collect()),
                }
            }
        })
    }

    /// Levels on which the witness has nonzero Littlewood-Paley pieces.
    pub fn levels(&self) -> Result<Vec<i64>> {
        let r = self.recipe()?;
        let mut out: Vec<i64> = match &r.times {
            None => r.terms.iter().map(|(_, a)| a.level()).collect(),
            Some(_) => {
                return Err(Error::InvalidParam("product witnesses span several levels".into()));
            }
        };
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Largest modulus in the spectral support.
    pub fn outer_radius(&self) -> Result<f64> {
        let r = self.recipe()?;
        let a = r.terms.iter().map(|(_, a)| a.outer_radius()).fold(0.0, f64::max);
        let b = r.times.as_ref().map_or(0.0, |t| t.iter().map(|(_, a)| a.outer_radius()).fold(0.0, f64::max));
        Ok(a + b)
    }

    /// Samples the witness on `grid`.
    pub fn build(&self, grid: &TorusGrid) -> Result<GridFunction> {
        let recipe = self.recipe()?;
        let radius = self.outer_radius()?;
        check_fits(grid, radius)?;
        let first = synthesize(sum_spectrum(grid, &recipe.terms)?);
        match &recipe.times {
            None => Ok(first),
            Some(times) => first.mul(&synthesize(sum_spectrum(grid, times)?)),
        }
    }
}

fn require_natural(k: i64) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidParam(format!("omega_k needs k >= 1, got {k}")));
    }
    Ok(())
}

fn check_fits(grid: &TorusGrid, radius: f64) -> Result<()> {
    for (axis, m) in grid.weight().components().iter().enumerate() {
        if radius.powf(*m) >= grid.nyquist(axis) {
            return Err(Error::Alias { level: radius.log2().ceil() as i64, max_level: grid.max_level() });
        }
    }
    Ok(())
}

fn check_resolution(grid: &TorusGrid, atom: Atom) -> Result<()> {
    for (axis, &m) in grid.weight().components().iter().enumerate() {
        let extent = match atom {
            Atom::Theta(_) => 2.0 * THETA_RADIUS.powf(m),
            Atom::Rho(k) | Atom::Omega(k) => 2f64.powf(k as f64 * m) * (RHO_OUTER.powf(m) - RHO_INNER.powf(m)),
        };
        let bins = extent / grid.frequency_step(axis);
        if bins < MIN_BINS {
            return Err(Error::Resolution(format!(
                "{atom:?} spans {bins:.2} frequency bins on axis {} (need {MIN_BINS})",
                axis + 1
            )));
        }
    }
    Ok(())
}

fn sum_spectrum(grid: &TorusGrid, terms: &[(f64, Atom)]) -> Result<Spectrum> {
    let mut total = Spectrum::new(grid.clone(), vec![Complex64::new(0.0, 0.0); grid.len()])?;
    for &(c, atom) in terms {
        check_resolution(grid, atom)?;
        add_atom(&mut total, atom, c)?;
    }
    Ok(total)
}

fn sys() -> LpSystem {
    LpSystem::standard()
}

fn rho_profile(r: f64) -> f64 {
    let s = sys();
    s.profile(1.3 * r) - s.profile(44.0 / 30.0 * r)
}

fn theta_profile(r: f64) -> f64 {
    sys().profile(THETA_DILATION * r)
}

fn omega_profile(weight: &Weight, xi: &[f64], zeta_axis: usize, r: f64) -> f64 {
    let radial = rho_profile(r);
    if radial == 0.0 {
        return 0.0;
    }
    let shifted: Vec<f64> =
        xi.iter().enumerate().map(|(i, v)| if i == zeta_axis { v - 1.0 } else { *v }).collect();
    radial * sys().profile(OMEGA_LOCALIZER * weight.modulus_unchecked(&shifted))
}

fn add_atom(total: &mut Spectrum, atom: Atom, coeff: f64) -> Result<()> {
    let grid = total.grid().clone();
    let weight = grid.weight().clone();
    let j0 = weight.unit_axis();
    let mtot = weight.total();
    let n = grid.dim();
    let norms = normalizers(&weight);
    let table = grid.modulus_table();
    let mut idx = vec![0usize; n];
    let mut xi = vec![0.0; n];
    let out = total.values_mut();
    match atom {
        Atom::Rho(k) => {
            let amp = coeff * (-(k as f64) * mtot).exp2();
            let shrink = (-(k as f64)).exp2();
            for (z, r) in out.iter_mut().zip(table) {
                let v = rho_profile(r * shrink);
                if v != 0.0 {
                    *z += amp * v;
                }
            }
        }
        Atom::Omega(k) => {
            let amp = coeff * norms.omega * (-(k as f64) * mtot).exp2();
            let shrink = (-(k as f64)).exp2();
            for (flat, (z, r)) in out.iter_mut().zip(table).enumerate() {
                let rr = r * shrink;
                if !(rr > RHO_INNER && rr < RHO_OUTER) {
                    continue;
                }
                grid.multi_index(flat, &mut idx);
                for a in 0..n {
                    xi[a] = grid.frequency(a, idx[a]) * shrink.powf(weight.components()[a]);
                }
                let v = omega_profile(&weight, &xi, j0, rr);
                if v != 0.0 {
                    *z += amp * v;
                }
            }
        }
        Atom::Theta(k) => {
            let shift = if k == 0 { 0.0 } else { (k.signum() as f64) * 2f64.powi(k.abs() as i32) };
            let step = grid.frequency_step(j0);
            let bins = shift / step;
            if (bins - bins.round()).abs() > 1e-9 {
                return Err(Error::Resolution(format!(
                    "modulation 2^{} is not a lattice frequency (spacing {step})",
                    k.abs()
                )));
            }
            let amp = coeff * norms.theta;
            let boxes: Vec<f64> = weight.components().iter().map(|m| THETA_RADIUS.powf(*m)).collect();
            for (flat, z) in out.iter_mut().enumerate() {
                grid.multi_index(flat, &mut idx);
                let mut inside = true;
                for a in 0..n {
                    xi[a] = grid.frequency(a, idx[a]) - if a == j0 { shift } else { 0.0 };
                    if xi[a].abs() > boxes[a] {
                        inside = false;
                        break;
                    }
                }
                if !inside {
                    continue;
                }
                let v = theta_profile(weight.modulus_unchecked(&xi));
                if v != 0.0 {
                    *z += amp * v;
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
struct Normalizers {
    theta: f64,
    omega: f64,
}

// Scale factors making theta(0) = omega(0) = 1 on R^n, from a midpoint rule
// on a box around each spectral support (the integrands are smooth and
// vanish to all orders at the support boundary).
fn normalizers(weight: &Weight) -> Normalizers {
    static CACHE: OnceLock<Mutex<HashMap<Vec<u64>, Normalizers>>> = OnceLock::new();
    let key: Vec<u64> = weight.components().iter().map(|m| m.to_bits()).collect();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(n) = cache.lock().expect("normalizer cache").get(&key) {
        return *n;
    }
    let n = weight.dim();
    let j0 = weight.unit_axis();
    let m = weight.components();
    let per_axis = (2f64.powf(20.0 / n as f64)).floor().max(16.0) as usize;

    let theta_box: Vec<(f64, f64)> = m.iter().map(|mi| (-THETA_RADIUS.powf(*mi), THETA_RADIUS.powf(*mi))).collect();
    let theta_int = box_integral(&theta_box, per_axis, |xi| theta_profile(weight.modulus_unchecked(xi)));

    let omega_box: Vec<(f64, f64)> = m
        .iter()
        .enumerate()
        .map(|(i, mi)| {
            let h = OMEGA_RADIUS.powf(*mi);
            if i == j0 {
                (1.0 - h, 1.0 + h)
            } else {
                (-h, h)
            }
        })
        .collect();
    let omega_int =
        box_integral(&omega_box, per_axis, |xi| omega_profile(weight, xi, j0, weight.modulus_unchecked(xi)));

    let scale = (2.0 * PI).powi(n as i32);
    let out = Normalizers { theta: scale / theta_int, omega: scale / omega_int };
    cache.lock().expect("normalizer cache").insert(key, out);
    out
}

/// `||rho||_{L2}^2 = ||rho^2||_{L1}` on `R^n`, by Parseval from the explicit spectrum.
pub fn rho_l2_squared(weight: &Weight) -> f64 {
    let n = weight.dim();
    let per_axis = (2f64.powf(20.0 / n as f64)).floor().max(16.0) as usize;
    let bounds = vec![(-RHO_OUTER, RHO_OUTER); n];
    let int = box_integral(&bounds, per_axis, |xi| rho_profile(weight.modulus_unchecked(xi)).powi(2));
    int / (2.0 * PI).powi(n as i32)
}

fn box_integral(bounds: &[(f64, f64)], per_axis: usize, f: impl Fn(&[f64]) -> f64) -> f64 {
    let n = bounds.len();
    let steps: Vec<f64> = bounds.iter().map(|(a, b)| (b - a) / per_axis as f64).collect();
    let cell: f64 = steps.iter().product();
    let total = per_axis.pow(n as u32);
    let mut xi = vec![0.0; n];
    let mut sum = 0.0;
    for mut flat in 0..total {
        for a in (0..n).rev() {
            let k = flat % per_axis;
            flat /= per_axis;
            xi[a] = bounds[a].0 + (k as f64 + 0.5) * steps[a];
        }
        sum += f(&xi);
    }
    sum * cell
}

/// The base functions sampled on a reference grid, used for oracle norms.
#[derive(Debug, Clone)]
pub struct BaseNorms {
    weight_total: f64,
    theta: GridFunction,
    rho: GridFunction,
    omega: GridFunction,
    theta_sq: GridFunction,
    omega_sq: GridFunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseFunction {
    Theta,
    Rho,
    Omega,
    ThetaSquared,
    OmegaSquared,
}

impl BaseNorms {
    /// Samples the base functions on `reference`, which should be fine and
    /// large enough for their tails to be negligible.
    pub fn new(reference: &TorusGrid) -> Result<Self> {
        let theta = WitnessSpec::Theta.build(reference)?;
        let rho = WitnessSpec::Rho.build(reference)?;
        let omega = WitnessSpec::Omega.build(reference)?;
        let theta_sq = theta.mul(&theta)?;
        let omega_sq = omega.mul(&omega)?;
        Ok(BaseNorms { weight_total: reference.weight().total(), theta, rho, omega, theta_sq, omega_sq })
    }

    /// Base norms on the default one-dimensional grid.
    pub fn default_1d() -> &'static BaseNorms {
        static BASE: OnceLock<BaseNorms> = OnceLock::new();
        BASE.get_or_init(|| BaseNorms::new(&TorusGrid::default_1d()).expect("default grid resolves base functions"))
    }

    pub fn function(&self, which: BaseFunction) -> &GridFunction {
        match which {
            BaseFunction::Theta => &self.theta,
            BaseFunction::Rho => &self.rho,
            BaseFunction::Omega => &self.omega,
            BaseFunction::ThetaSquared => &self.theta_sq,
            BaseFunction::OmegaSquared => &self.omega_sq,
        }
    }

    pub fn lp(&self, which: BaseFunction, p: f64) -> Result<f64> {
        lp_norm(self.function(which), p)
    }
}

/// Closed-form norm of a witness in terms of base-function norms.
pub fn oracle_norm(spec: &WitnessSpec, scale: Scale, np: &NormParams, base: &BaseNorms) -> Result<f64> {
    let mtot = base.weight_total;
    let s = np.s;
    let d = s - if np.p.is_infinite() { 0.0 } else { mtot / np.p };
    let pow2 = |e: f64| e.exp2();
    let series = |exps: Vec<f64>| -> Result<f64> { lq_seq(&exps.into_iter().map(pow2).collect::<Vec<_>>(), np.q) };
    let besov_only = |what: &str| -> Result<()> {
        if scale == Scale::F {
            return Err(Error::InvalidParam(format!("no closed-form F norm for {what}")));
        }
        Ok(())
    };
    if scale == Scale::F && np.p.is_infinite() {
        return Err(Error::InvalidParam("Triebel-Lizorkin norms need p < inf".into()));
    }
    use BaseFunction as Bf;
    Ok(match *spec {
        WitnessSpec::Theta => base.lp(Bf::Theta, np.p)?,
        WitnessSpec::Rho => base.lp(Bf::Rho, np.p)?,
        WitnessSpec::Omega => base.lp(Bf::Omega, np.p)?,
        WitnessSpec::ThetaK { k } => base.lp(Bf::Theta, np.p)? * pow2(k.abs() as f64 * s),
        WitnessSpec::RhoK { k } if k >= 1 => base.lp(Bf::Rho, np.p)? * pow2(k as f64 * d),
        WitnessSpec::RhoK { k } => base.lp(Bf::Rho, np.p)? * pow2(k as f64 * (d - s)),
        WitnessSpec::OmegaK { k } => base.lp(Bf::Omega, np.p)? * pow2(k as f64 * d),
        WitnessSpec::OmegaKSq { k } => base.lp(Bf::OmegaSquared, np.p)? * pow2(k as f64 * d + s),
        WitnessSpec::ThetaThetaK { k } => base.lp(Bf::ThetaSquared, np.p)? * pow2(k.abs() as f64 * s),
        WitnessSpec::ThetaFamilyPlus { n, t } | WitnessSpec::ThetaFamilyMinus { n, t } => {
            base.lp(Bf::Theta, np.p)? * series((1..=n as i64).map(|k| k as f64 * (s - t)).collect())?
        }
        WitnessSpec::RhoFamily { n, l, t } => {
            besov_only("rho families")?;
            base.lp(Bf::Rho, np.p)? * series((l + 1..=l + n as i64).map(|k| k as f64 * (d - t)).collect())?
        }
        WitnessSpec::OmegaFamily { n, t } => {
            besov_only("omega families")?;
            let n = n as i64;
            base.lp(Bf::Omega, np.p)? * series((n + 1..=2 * n).map(|k| k as f64 * (d - t)).collect())?
        }
        WitnessSpec::BigOmegaFamily { n, t } => {
            besov_only("Omega families")?;
            base.lp(Bf::Omega, np.p)? * series((2..=n as i64 + 1).map(|k| (1i64 << k) as f64 * (d - t)).collect())?
        }
        WitnessSpec::ThetaOmegaK { .. } | WitnessSpec::OmegaPair { .. } => {
            return Err(Error::InvalidParam(format!("no closed-form norm for {spec:?}")));
        }
    })
}

/// A grid on which `spec` is resolved and its pieces are unaliased.
///
/// One-dimensional witnesses whose lowest dilation level is `k0 >= 1` use a
/// torus of period `512 pi / 2^k0`: `rho_k` on a torus of period `L` is
/// `rho` on one of period `2^k L`, so this keeps the periodization error at
/// the level of the default grid while using `2^k0` times fewer points.
pub fn suggest_grid(spec: &WitnessSpec, weight: &Weight) -> Result<TorusGrid> {
    let recipe = spec.recipe()?;
    let atoms: Vec<Atom> =
        recipe.terms.iter().chain(recipe.times.iter().flatten()).map(|(_, a)| *a).collect();
    let has_theta = atoms.iter().any(|a| matches!(a, Atom::Theta(_)));
    let k_min = atoms
        .iter()
        .map(|a| match a {
            Atom::Rho(k) | Atom::Omega(k) => *k,
            Atom::Theta(_) => 0,
        })
        .min()
        .unwrap_or(0);
    let shrink = if has_theta { 0 } else { k_min.clamp(0, 8) };
    let period = 512.0 * PI / 2f64.powi(shrink as i32);

    let radius = spec.outer_radius()?;
    let top_level = atoms.iter().map(Atom::level).max().unwrap_or(0) + i64::from(recipe.times.is_some());
    let band_radius = LpSystem::standard().outer() * 2f64.powi(top_level as i32);
    let need = radius.max(band_radius) * 1.01;
    let sizes = weight
        .components()
        .iter()
        .map(|m| {
            let nyq = need.powf(*m);
            let n = (2.0 * nyq * period / (2.0 * PI)).ceil() as usize;
            n.next_power_of_two().max(16)
        })
        .collect();
    TorusGrid::new(weight.clone(), sizes, vec![period; weight.dim()])
}
