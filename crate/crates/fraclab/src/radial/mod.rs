//! Radial function machinery: profiles on 1-D radius grids, the Hankel
//! (radial Fourier) transform pair, spectral Gagliardo seminorms, weighted
//! norms, high/low frequency splits, and the empirical Strauss and Hölder
//! ratio evaluators.
//!
//! Convention: the unitary angular-frequency Fourier transform, under which
//! the radial reduction in dimension n reads
//!
//! ```text
//! û₀(ω) = ∫₀^∞ u₀(r) [J_ν(rω) / (rω)^ν] r^(n-1) dr,   ν = n/2 - 1,
//! ```
//!
//! is its own inverse on radial functions, fixes the Gaussian e^{-r²/2}, and
//! satisfies Plancherel with constant one. All inequality ratios reported by
//! this crate are normalization independent, so correctness is certified by
//! the Gaussian fixed point, Plancherel, and round-trip tests rather than by
//! reproducing any particular constant convention.

mod hankel;
mod norms;
mod profiles;
mod ratios;
mod split;

pub use hankel::{hankel_inverse, hankel_transform, HankelPlan};
pub use norms::{gagliardo_radial, weighted_norm_radial, Spectral};
pub use profiles::{band_limited_family, band_limited_profile, bump_profile, gaussian_profile};
pub use ratios::{holder_ratio, holder_ratio_with, strauss_ratio, strauss_ratio_with};
pub use split::{frequency_split, frequency_split_with, FrequencySplit};

use crate::bessel::gamma_nu_plus_one;
use crate::error::{Error, Result};
use crate::quadrature;
use std::f64::consts::PI;

/// Surface measure of the unit sphere S^{n-1}: 2 π^{n/2} / Γ(n/2).
pub fn sphere_area(n: u32) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_nu_plus_one(n - 2)
}

/// A radial function sampled on a strictly increasing radius grid.
///
/// Carries its ambient dimension; the Bessel order ν = n/2 - 1 is always
/// derived from it, never stored independently.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    radii: Vec<f64>,
    values: Vec<f64>,
    n: u32,
}

impl RadialProfile {
    pub fn new(radii: Vec<f64>, values: Vec<f64>, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("profile dimension n = {n} must be >= 2")));
        }
        if radii.len() != values.len() {
            return Err(Error::domain(format!(
                "radius grid ({}) and values ({}) differ in length",
                radii.len(),
                values.len()
            )));
        }
        if radii.len() < 2 {
            return Err(Error::domain("profile needs at least 2 radii"));
        }
        if radii[0] < 0.0 || !quadrature::is_strictly_increasing(&radii) {
            return Err(Error::domain("radii must be strictly increasing and >= 0"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("profile values must be finite"));
        }
        Ok(RadialProfile { radii, values, n })
    }

    /// Sample `f` on the given radius grid.
    pub fn from_fn(radii: &[f64], n: u32, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = radii.iter().map(|&r| f(r)).collect();
        Self::new(radii.to_vec(), values, n)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    /// Bessel order ν = n/2 - 1 of the radial Fourier kernel.
    pub fn nu(&self) -> f64 {
        self.n as f64 / 2.0 - 1.0
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Max of |u| over the grid.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> RadialProfile {
        RadialProfile {
            radii: self.radii.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            n: self.n,
        }
    }
}

/// Default frequency grid: dense on [0, 4] where the spectra of smooth
/// test profiles live, coarser out to 24 for the seminorm reach.
pub fn default_omega_grid() -> Vec<f64> {
    quadrature::dense_coarse_grid(513, 4.0, 511, 24.0)
}
