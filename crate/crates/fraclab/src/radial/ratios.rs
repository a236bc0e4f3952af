//! Empirical constants for the radial decay and Hölder inequalities.
//!
//! For a profile u and parameters (n, s, q, a) the decay inequality reads
//! |u(x)| ≤ C |x|^{-σ} [u]^θ ‖u‖^{1-θ}_{L^q_a}; `strauss_ratio` reports the
//! best (smallest) constant C that makes it an equality somewhere on the
//! grid. Likewise `holder_ratio` reports the empirical constant of
//! |u(x₁) - u(x₂)| ≤ C_ε |x₁ - x₂|^α ‖u‖_{H^s_{q,a}} away from the origin.
//! No claim is made that these approach the optimal constants.

use super::norms::Spectral;
use super::RadialProfile;
use crate::error::{Error, Result};
use crate::params::{exponents, ProblemParams};

/// Index of the first grid point admitted into the sup (keeps the σ-weighted
/// sup away from r = 0 where the bound is vacuous for bounded profiles).
const SUP_START_INDEX: usize = 4;

/// Empirical decay constant: sup_{r ≥ r_min} r^σ |u₀(r)| divided by
/// \[u\]^θ ‖u‖^{1-θ}_{L^q_a}.
pub fn strauss_ratio(u: &RadialProfile, params: &ProblemParams) -> Result<f64> {
    let spectral = Spectral::new(u.radii(), &super::default_omega_grid(), u.dim())?;
    strauss_ratio_with(&spectral, u, params)
}

/// Same ratio reusing a cached transform pair.
pub fn strauss_ratio_with(spectral: &Spectral, u: &RadialProfile, params: &ProblemParams) -> Result<f64> {
    if params.s <= 0.5 {
        return Err(Error::domain(format!(
            "decay inequality requires s > 1/2, got s = {}",
            params.s
        )));
    }
    if params.n != u.dim() {
        return Err(Error::domain("profile and parameter dimensions differ"));
    }
    let e = exponents(params)?;
    let gag = spectral.gagliardo(u, params.s)?;
    let wn = spectral.weighted_norm(u, params.q, params.a)?;
    let denom = gag.powf(e.theta) * wn.powf(1.0 - e.theta);
    if denom == 0.0 {
        return Err(Error::domain("zero profile: the ratio is undefined"));
    }
    let sup = u
        .radii()
        .iter()
        .zip(u.values())
        .skip(SUP_START_INDEX)
        .map(|(&r, &v)| r.powf(e.sigma) * v.abs())
        .fold(0.0f64, f64::max);
    Ok(sup / denom)
}

/// Empirical Hölder constant on [eps, r_max]:
/// max |u₀(r₁) - u₀(r₂)| / |r₁ - r₂|^α over grid pairs, divided by the
/// energy-space norm ‖u‖_{H^s_{q,a}}.
pub fn holder_ratio(u: &RadialProfile, params: &ProblemParams, eps: f64) -> Result<f64> {
    let spectral = Spectral::new(u.radii(), &super::default_omega_grid(), u.dim())?;
    holder_ratio_with(&spectral, u, params, eps)
}

pub fn holder_ratio_with(
    spectral: &Spectral,
    u: &RadialProfile,
    params: &ProblemParams,
    eps: f64,
) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::domain(format!("inner radius eps = {eps} must be positive")));
    }
    let e = exponents(params)?;
    let idx: Vec<usize> = (0..u.len()).filter(|&i| u.radii()[i] >= eps).collect();
    if idx.len() < 2 {
        return Err(Error::domain(format!(
            "fewer than two grid points at radius >= {eps}"
        )));
    }
    let norm = spectral.energy_norm(u, params)?;
    if norm == 0.0 {
        return Err(Error::domain("zero profile: the ratio is undefined"));
    }
    let r = u.radii();
    let v = u.values();
    let mut sup = 0.0f64;
    for (k, &i) in idx.iter().enumerate() {
        for &j in &idx[k + 1..] {
            let d = (v[i] - v[j]).abs() / (r[j] - r[i]).powf(e.alpha);
            sup = sup.max(d);
        }
    }
    Ok(sup / norm)
}
