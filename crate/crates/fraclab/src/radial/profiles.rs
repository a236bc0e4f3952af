//! Named profile families used by the surveys and the test suite.

use super::{default_omega_grid, HankelPlan, RadialProfile};
use crate::quadrature::standard_bump;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Gaussian e^{-r²/(2 width²)}.
pub fn gaussian_profile(r_grid: &[f64], n: u32, width: f64) -> RadialProfile {
    RadialProfile::from_fn(r_grid, n, |r| (-r * r / (2.0 * width * width)).exp())
        .expect("gaussian profile on valid grid")
}

/// The standard smooth bump exp(-1/(1-(r/radius)²)), supported in r < radius.
pub fn bump_profile(r_grid: &[f64], n: u32, radius: f64) -> RadialProfile {
    RadialProfile::from_fn(r_grid, n, |r| standard_bump(r / radius))
        .expect("bump profile on valid grid")
}

/// A seeded band-limited profile: the transform is a sum of narrow Gaussian
/// bumps at frequencies below ~3, so the profile is smooth, decays fast, and
/// round-trips through the transform pair to high accuracy.
pub fn band_limited_profile(r_grid: &[f64], n: u32, seed: u64) -> RadialProfile {
    let omega = default_omega_grid();
    let plan = HankelPlan::new(&omega, r_grid, n).expect("band-limited synthesis plan");
    band_limited_with_plan(&plan, seed)
}

/// Build a whole family of band-limited profiles with one synthesis plan.
pub fn band_limited_family(r_grid: &[f64], n: u32, seeds: impl IntoIterator<Item = u64>) -> Vec<RadialProfile> {
    let omega = default_omega_grid();
    let plan = HankelPlan::new(&omega, r_grid, n).expect("band-limited synthesis plan");
    seeds.into_iter().map(|s| band_limited_with_plan(&plan, s)).collect()
}

fn band_limited_with_plan(plan: &HankelPlan, seed: u64) -> RadialProfile {
    let n = plan.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut modes = Vec::new();
    for _ in 0..5 {
        let amp: f64 = rng.random_range(0.2..1.0);
        let center: f64 = rng.random_range(0.3..1.2);
        let width: f64 = rng.random_range(0.25..0.45);
        modes.push((amp, center, width));
    }
    // Even in ω (radial in frequency space), so the synthesized profile is
    // smooth at the origin and decays superpolynomially.
    let uhat = RadialProfile::from_fn(plan.source_grid(), n, |o| {
        modes
            .iter()
            .map(|(a, c, w)| {
                a * ((-((o - c) / w).powi(2)).exp() + (-((o + c) / w).powi(2)).exp())
            })
            .sum()
    })
    .expect("band-limited spectrum on valid grid");
    let mut u = plan.apply(&uhat).expect("band-limited synthesis");
    // Taper to compact support: the synthesis leaves tiny quadrature noise
    // out to the grid edge, which would trip the tail-mass guard.
    let r_max = *u.radii().last().unwrap();
    let radii = u.radii().to_vec();
    for (v, r) in u.values_mut().iter_mut().zip(&radii) {
        *v *= crate::quadrature::smooth_step((r / r_max - 0.7) / 0.2);
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::geometric_uniform_grid;

    #[test]
    fn bump_is_compactly_supported() {
        let grid = geometric_uniform_grid(512, 1e-3, 0.5, 8.0);
        let u = bump_profile(&grid, 2, 1.5);
        for (r, v) in grid.iter().zip(u.values()) {
            if *r >= 1.5 {
                assert_eq!(*v, 0.0);
            }
        }
        assert!(u.max_abs() > 0.3);
    }

    #[test]
    fn band_limited_is_deterministic_in_seed() {
        let grid = geometric_uniform_grid(256, 1e-3, 0.5, 40.0);
        let a = band_limited_profile(&grid, 2, 3);
        let b = band_limited_profile(&grid, 2, 3);
        assert_eq!(a.values(), b.values());
        let c = band_limited_profile(&grid, 2, 4);
        assert_ne!(a.values(), c.values());
    }
}
