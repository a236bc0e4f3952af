//! Spectral seminorms and weighted Lebesgue norms of radial profiles.

use super::hankel::HankelPlan;
use super::{default_omega_grid, sphere_area, RadialProfile};
use crate::error::{Error, Result};
use crate::params::ProblemParams;
use crate::quadrature::composite_weights;

/// Cached transform pair plus quadrature weights for a fixed pair of grids.
/// Everything that evaluates more than one seminorm should go through this.
/// The inverse plan is built on first use; norm-only callers never pay for
/// it.
pub struct Spectral {
    fwd: HankelPlan,
    inv: std::sync::OnceLock<HankelPlan>,
    r_weights: Vec<f64>,
    omega_weights: Vec<f64>,
    n: u32,
}

impl Spectral {
    pub fn new(r_grid: &[f64], omega_grid: &[f64], n: u32) -> Result<Self> {
        Ok(Spectral {
            fwd: HankelPlan::new(r_grid, omega_grid, n)?,
            inv: std::sync::OnceLock::new(),
            r_weights: composite_weights(r_grid)?,
            omega_weights: composite_weights(omega_grid)?,
            n,
        })
    }

    /// Default grids: the 2048-point radius grid and the 1024-point
    /// frequency grid.
    pub fn with_default_grids(n: u32) -> Result<Self> {
        Self::new(&crate::quadrature::default_radius_grid(), &default_omega_grid(), n)
    }

    pub fn r_grid(&self) -> &[f64] {
        self.fwd.source_grid()
    }

    pub fn omega_grid(&self) -> &[f64] {
        self.fwd.target_grid()
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn transform(&self, u: &RadialProfile) -> Result<RadialProfile> {
        self.fwd.apply(u)
    }

    pub fn inverse(&self, uhat: &RadialProfile) -> Result<RadialProfile> {
        self.inverse_plan().apply(uhat)
    }

    pub(crate) fn inverse_plan(&self) -> &HankelPlan {
        self.inv.get_or_init(|| {
            HankelPlan::new(self.omega_grid().to_vec().as_slice(), self.r_grid().to_vec().as_slice(), self.n)
                .expect("grids validated at construction")
        })
    }

    /// Gagliardo seminorm \[u\]_{H^s} through the frequency side:
    /// ( |S^{n-1}| ∫ ω^{2s} |û₀(ω)|² ω^{n-1} dω )^{1/2}.
    pub fn gagliardo(&self, u: &RadialProfile, s: f64) -> Result<f64> {
        Ok(self.gagliardo_sq(u, s)?.sqrt())
    }

    pub fn gagliardo_sq(&self, u: &RadialProfile, s: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&s) && s != 0.0 {
            return Err(Error::domain(format!("order s = {s} must lie in [0, 1)")));
        }
        let uhat = self.fwd.apply(u)?;
        self.gagliardo_sq_of_transform(&uhat, s)
    }

    /// Seminorm² from an already-computed transform.
    pub fn gagliardo_sq_of_transform(&self, uhat: &RadialProfile, s: f64) -> Result<f64> {
        let nm1 = (self.n - 1) as i32;
        let omega = self.omega_grid();
        let mut total = 0.0;
        let mut tail = 0.0;
        let cut = 0.9 * omega[omega.len() - 1];
        for ((&w, &wt), &v) in omega.iter().zip(&self.omega_weights).zip(uhat.values()) {
            let term = wt * w.powf(2.0 * s) * w.powi(nm1) * v * v;
            total += term;
            if w >= cut {
                tail += term;
            }
        }
        // Seminorm integrands of smooth compactly supported profiles decay
        // slowly in frequency; allow up to ~1e-4 relative truncation before
        // refusing (the transform itself is guarded separately at 1e-8).
        if total > 0.0 && tail / total > 1e-4 {
            return Err(Error::Truncation {
                reason: "seminorm integrand carries mass at the top of the frequency grid".into(),
                tail_fraction: tail / total,
            });
        }
        Ok(sphere_area(self.n) * total)
    }

    /// Weighted Lebesgue norm ‖u‖_{L^q_a} on the radius grid.
    pub fn weighted_norm(&self, u: &RadialProfile, q: f64, a: f64) -> Result<f64> {
        weighted_norm_on(u, q, a, self.r_grid(), &self.r_weights)
    }

    /// Energy-space norm ( \[u\]² + ‖u‖²_{L^q_a} )^{1/2}.
    pub fn energy_norm(&self, u: &RadialProfile, params: &ProblemParams) -> Result<f64> {
        let gag = self.gagliardo_sq(u, params.s)?;
        let wn = self.weighted_norm(u, params.q, params.a)?;
        Ok((gag + wn * wn).sqrt())
    }

    /// Plain L² norm over R^n.
    pub fn l2_norm(&self, u: &RadialProfile) -> Result<f64> {
        self.weighted_norm(u, 2.0, 0.0)
    }
}

fn weighted_norm_on(u: &RadialProfile, q: f64, a: f64, grid: &[f64], weights: &[f64]) -> Result<f64> {
    let n = u.dim() as f64;
    if a <= -n {
        return Err(Error::domain(format!("weight power a = {a} must be > -n = {}", -n)));
    }
    if q < 1.0 {
        return Err(Error::domain(format!("exponent q = {q} must be >= 1")));
    }
    let pow = a + n - 1.0;
    let mut sum = 0.0;
    for ((&r, &w), &v) in grid.iter().zip(weights).zip(u.values()) {
        if r == 0.0 {
            if pow == 0.0 {
                sum += w * v.abs().powf(q);
            } else if pow < 0.0 {
                // Singular-but-integrable weight: replace the node term by the
                // analytic stub ∫_0^{r₁} r^{a+n-1} |u(0)|^q dr.
                let r1 = grid[1];
                sum += v.abs().powf(q) * r1.powf(a + n) / (a + n);
            }
            // pow > 0: the node contributes exactly zero.
        } else {
            sum += w * r.powf(pow) * v.abs().powf(q);
        }
    }
    Ok((sphere_area(u.dim()) * sum).powf(1.0 / q))
}

/// ‖u‖_{L^q_a} = ( ∫ |u|^q |x|^a dx )^{1/q} by quadrature on the profile's
/// own grid.
pub fn weighted_norm_radial(u: &RadialProfile, q: f64, a: f64) -> Result<f64> {
    let weights = composite_weights(u.radii())?;
    weighted_norm_on(u, q, a, u.radii(), &weights)
}

/// Gagliardo seminorm via a one-shot transform onto the default frequency
/// grid. `s = 0` reduces to the L² norm (Plancherel).
pub fn gagliardo_radial(u: &RadialProfile, s: f64) -> Result<f64> {
    let spectral = Spectral::new(u.radii(), &default_omega_grid(), u.dim())?;
    spectral.gagliardo(u, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{geometric_uniform_grid, uniform_grid};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn indicator_l2_norm_is_sqrt_area_of_disc() {
        // u ≡ 1 on [0, 1], 0 after, q = 2, a = 0, n = 2: the norm is sqrt(π).
        let grid = uniform_grid(4001, 2.0);
        let u = RadialProfile::from_fn(&grid, 2, |r| if r <= 1.0 { 1.0 } else { 0.0 }).unwrap();
        let norm = weighted_norm_radial(&u, 2.0, 0.0).unwrap();
        // O(h) error at the jump.
        assert_relative_eq!(norm, PI.sqrt(), max_relative = 2e-3);
    }

    #[test]
    fn weighted_norm_is_absolutely_homogeneous() {
        let grid = uniform_grid(512, 10.0);
        let u = RadialProfile::from_fn(&grid, 2, |r| (-r * r / 2.0).exp()).unwrap();
        let base = weighted_norm_radial(&u, 3.0, 0.5).unwrap();
        let scaled = weighted_norm_radial(&u.scaled(-2.5), 3.0, 0.5).unwrap();
        assert_relative_eq!(scaled, 2.5 * base, max_relative = 1e-13);
    }

    #[test]
    fn gaussian_weighted_norm_matches_cartesian_oracle() {
        // q = 2, a = 2, n = 2 for the Gaussian e^{-r²/2}; 2-D Cartesian
        // midpoint quadrature as the independent oracle.
        let grid = uniform_grid(2048, 12.0);
        let u = RadialProfile::from_fn(&grid, 2, |r| (-r * r / 2.0).exp()).unwrap();
        let norm = weighted_norm_radial(&u, 2.0, 2.0).unwrap();

        let ng = 1200;
        let l = 12.0;
        let h = 2.0 * l / ng as f64;
        let mut sum = 0.0;
        for i in 0..ng {
            let x = -l + (i as f64 + 0.5) * h;
            for j in 0..ng {
                let y = -l + (j as f64 + 0.5) * h;
                let r2 = x * x + y * y;
                sum += r2 * (-r2).exp();
            }
        }
        let oracle = (sum * h * h).sqrt();
        assert_relative_eq!(norm, oracle, max_relative = 1e-4);
    }

    #[test]
    fn weighted_norm_rejects_weight_at_or_below_minus_n() {
        let grid = uniform_grid(64, 2.0);
        let u = RadialProfile::from_fn(&grid, 2, |r| (-r).exp()).unwrap();
        assert!(weighted_norm_radial(&u, 2.0, -2.0).is_err());
        assert!(weighted_norm_radial(&u, 2.0, -2.5).is_err());
    }

    #[test]
    fn gagliardo_at_s_zero_is_plancherel() {
        // On an analytically sampled Gaussian the multiplier-free seminorm
        // must reproduce the L² norm to 1e-8.
        let r = uniform_grid(2048, 20.0);
        let u = RadialProfile::from_fn(&r, 2, |r| (-r * r / 2.0).exp()).unwrap();
        let spectral = Spectral::new(&r, &uniform_grid(1024, 8.0), 2).unwrap();
        let left = spectral.gagliardo(&u, 0.0).unwrap();
        let right = spectral.l2_norm(&u).unwrap();
        assert_relative_eq!(left, right, max_relative = 1e-8);
        // Both equal sqrt(π) for this Gaussian.
        assert_relative_eq!(right, PI.sqrt(), max_relative = 1e-9);

        // Synthesized band-limited input: same identity at transform accuracy.
        let rg = geometric_uniform_grid(2048, 1e-3, 0.5, 40.0);
        let ub = crate::radial::band_limited_profile(&rg, 2, 7);
        let sp = Spectral::new(&rg, &uniform_grid(1024, 8.0), 2).unwrap();
        assert_relative_eq!(
            sp.gagliardo(&ub, 0.0).unwrap(),
            sp.l2_norm(&ub).unwrap(),
            max_relative = 1e-6
        );
    }

    #[test]
    fn gaussian_gagliardo_matches_closed_form() {
        // [e^{-r²/2}]²_{H^s} = 2π ∫ ω^{2s+1} e^{-ω²} dω = π Γ(s+1) in n = 2.
        let r = uniform_grid(2048, 16.0);
        let w = uniform_grid(1024, 10.0);
        let spectral = Spectral::new(&r, &w, 2).unwrap();
        let u = RadialProfile::from_fn(&r, 2, |r| (-r * r / 2.0).exp()).unwrap();
        for (s, gamma_s_plus_1) in [(0.75, 0.9190625268488832), (0.5, 0.8862269254527580)] {
            let got = spectral.gagliardo_sq(&u, s).unwrap();
            assert_relative_eq!(got, PI * gamma_s_plus_1, max_relative = 1e-7);
        }
    }

    #[test]
    fn gagliardo_monotone_in_s_for_high_frequency_profile() {
        // û supported in ω >= 1 makes s ↦ [u]_{H^s} nondecreasing. The
        // spectrum must be C^∞ so the synthesized profile decays fast enough
        // for the truncation guard.
        let w = uniform_grid(512, 6.0);
        let uhat = RadialProfile::from_fn(&w, 2, |o| {
            crate::quadrature::standard_bump((o - 2.1) / 0.9)
        })
        .unwrap();
        let r = uniform_grid(1024, 50.0);
        let spectral = Spectral::new(&r, &w, 2).unwrap();
        let mut u = spectral.inverse(&uhat).unwrap();
        // Shave synthesis noise at the outer edge.
        let radii = u.radii().to_vec();
        for (v, rr) in u.values_mut().iter_mut().zip(&radii) {
            *v *= crate::quadrature::smooth_step((rr / 50.0 - 0.7) / 0.2);
        }
        let mut prev = 0.0;
        for s in [0.0, 0.25, 0.5, 0.75, 0.9] {
            let g = spectral.gagliardo(&u, s).unwrap();
            assert!(g >= prev, "s = {s}: {g} < {prev}");
            prev = g;
        }
    }
}
