//! The killed nonlocal energy on a two-dimensional Cartesian grid.
//!
//! Functions live on an N×N cell-centered grid covering [-Nh/2, Nh/2]² and
//! vanish identically outside the ball |x| < R (the killed condition). The
//! Gagliardo energy splits exactly into interior pairs plus an exterior
//! kernel term:
//!
//! ```text
//! [u]² = C(n,s) [ 1/2 ∬_{B×B} (u(x)-u(y))² K(x-y) dx dy + ∫_B u(x)² κ(x) dx ]
//! K(z) = |z|^{-(n+2s)},   κ(x) = ∫_{|y|>R} K(x-y) dy
//! ```
//!
//! and the discrete form mirrors that split term by term. The grid module is
//! fixed to n = 2 (the radial machinery covers general dimensions).

mod energy;
mod fft;
mod kernel;

pub use energy::{energy_gradient, gagliardo_grid, weighted_integral_grid, EnergyReport, GagliardoMode, GridEnergy};
pub use kernel::{exterior_kernel, exterior_kernel_radial, normalization_constant};

use crate::error::{Error, Result};

/// A function on an N×N cell-centered grid with spacing h, supported on the
/// open ball |x| < R. Values at nodes with |x| ≥ R are identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    n_side: usize,
    h: f64,
    radius: f64,
    values: Vec<f64>,
    mask: Vec<bool>,
}

impl GridFunction {
    /// The all-zero function on the given grid. Requires N·h ≥ 2R so the
    /// grid covers the ball.
    pub fn zeros(n_side: usize, h: f64, radius: f64) -> Result<Self> {
        if n_side < 4 {
            return Err(Error::domain(format!("grid side {n_side} too small")));
        }
        if !(h > 0.0 && radius > 0.0) {
            return Err(Error::domain("grid spacing and radius must be positive"));
        }
        if (n_side as f64) * h < 2.0 * radius - 1e-12 {
            return Err(Error::domain(format!(
                "grid does not cover the ball: N*h = {} < 2R = {}",
                n_side as f64 * h,
                2.0 * radius
            )));
        }
        let mut mask = vec![false; n_side * n_side];
        for i in 0..n_side {
            for j in 0..n_side {
                let (x, y) = coord(n_side, h, i, j);
                mask[i * n_side + j] = x * x + y * y < radius * radius;
            }
        }
        Ok(GridFunction { n_side, h, radius, values: vec![0.0; n_side * n_side], mask })
    }

    /// Sample `f(x, y)` on the masked nodes.
    pub fn from_fn(n_side: usize, h: f64, radius: f64, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut g = Self::zeros(n_side, h, radius)?;
        for i in 0..n_side {
            for j in 0..n_side {
                let idx = i * n_side + j;
                if g.mask[idx] {
                    let (x, y) = coord(n_side, h, i, j);
                    g.values[idx] = f(x, y);
                }
            }
        }
        Ok(g)
    }

    pub fn n_side(&self) -> usize {
        self.n_side
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn ball_radius(&self) -> f64 {
        self.radius
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Coordinates of node (i, j).
    pub fn coord(&self, i: usize, j: usize) -> (f64, f64) {
        coord(self.n_side, self.h, i, j)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_side + j
    }

    /// Overwrite values (off-mask entries are zeroed, preserving the killed
    /// invariant).
    pub fn set_values(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.values.len() {
            return Err(Error::domain("value buffer length mismatch"));
        }
        self.values.copy_from_slice(values);
        self.enforce_mask();
        Ok(())
    }

    /// Apply `f` to every masked value, then re-enforce the killed invariant.
    pub fn update(&mut self, mut f: impl FnMut(usize, f64) -> f64) {
        for idx in 0..self.values.len() {
            if self.mask[idx] {
                self.values[idx] = f(idx, self.values[idx]);
            }
        }
        self.enforce_mask();
    }

    pub fn enforce_mask(&mut self) {
        for (v, &m) in self.values.iter_mut().zip(&self.mask) {
            if !m {
                *v = 0.0;
            }
        }
    }

    /// Grid l² norm (no measure factor).
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, c: f64) -> GridFunction {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= c;
        }
        out
    }

    /// Replace u by its angular average over radius bins of width h.
    /// Idempotent (bitwise: bins whose values already agree are passed
    /// through), supported on the mask, and an L² contraction.
    pub fn radial_average(&self) -> GridFunction {
        let nbins = (self.radius / self.h).ceil() as usize + 2;
        let mut sums = vec![0.0f64; nbins];
        let mut counts = vec![0usize; nbins];
        let mut first = vec![f64::NAN; nbins];
        let mut all_same = vec![true; nbins];
        let bin_of = |g: &GridFunction, i: usize, j: usize| -> usize {
            let (x, y) = g.coord(i, j);
            ((x * x + y * y).sqrt() / g.h) as usize
        };
        for i in 0..self.n_side {
            for j in 0..self.n_side {
                let idx = self.index(i, j);
                if self.mask[idx] {
                    let bin = bin_of(self, i, j);
                    let v = self.values[idx];
                    sums[bin] += v;
                    if counts[bin] == 0 {
                        first[bin] = v;
                    } else if first[bin] != v {
                        all_same[bin] = false;
                    }
                    counts[bin] += 1;
                }
            }
        }
        let mut out = self.clone();
        for i in 0..self.n_side {
            for j in 0..self.n_side {
                let idx = self.index(i, j);
                if self.mask[idx] {
                    let bin = bin_of(self, i, j);
                    out.values[idx] = if all_same[bin] {
                        first[bin]
                    } else {
                        sums[bin] / counts[bin] as f64
                    };
                }
            }
        }
        out
    }

    /// Nonradiality index ν(u) = ‖u - Πu‖₂ / ‖u‖₂ ∈ [0, 1], with Π the
    /// angular-average projection. Zero iff the discrete function is radial.
    pub fn nonradiality_index(&self) -> Result<f64> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::domain("nonradiality index of the zero function"));
        }
        let avg = self.radial_average();
        let diff: f64 = self
            .values
            .iter()
            .zip(avg.values())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        Ok(diff / norm)
    }
}

fn coord(n_side: usize, h: f64, i: usize, j: usize) -> (f64, f64) {
    let half = n_side as f64 / 2.0;
    ((i as f64 + 0.5 - half) * h, (j as f64 + 0.5 - half) * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn mask_matches_cell_center_membership() {
        let g = GridFunction::zeros(32, 0.25, 4.0).unwrap();
        for i in 0..32 {
            for j in 0..32 {
                let (x, y) = g.coord(i, j);
                assert_eq!(g.mask()[g.index(i, j)], x * x + y * y < 16.0);
            }
        }
    }

    #[test]
    fn grid_must_cover_ball() {
        assert!(GridFunction::zeros(16, 0.25, 4.0).is_err());
        assert!(GridFunction::zeros(32, 0.25, 4.0).is_ok());
    }

    #[test]
    fn values_are_killed_outside_the_ball() {
        let mut g = GridFunction::from_fn(32, 0.25, 3.0, |_, _| 1.0).unwrap();
        for (v, m) in g.values().iter().zip(g.mask()) {
            assert_eq!(*v != 0.0, *m);
        }
        let n2 = g.values().len();
        g.set_values(&vec![2.0; n2]).unwrap();
        for (v, m) in g.values().iter().zip(g.mask()) {
            assert_eq!(*v != 0.0, *m);
        }
    }

    #[test]
    fn radial_average_is_idempotent_and_contracting() {
        let g = GridFunction::from_fn(48, 0.2, 4.0, |x, y| x + 0.3 * y * y).unwrap();
        let p1 = g.radial_average();
        let p2 = p1.radial_average();
        assert_eq!(p1.values(), p2.values());
        assert!(p1.norm() <= g.norm() + 1e-14);
    }

    #[test]
    fn radial_data_is_a_fixed_point_of_the_average() {
        // Constant per radius bin: binned radial data.
        let h = 0.2;
        let g = GridFunction::from_fn(48, h, 4.0, |x, y| {
            let bin = ((x * x + y * y).sqrt() / h) as usize;
            bin as f64 * 0.7
        })
        .unwrap();
        let p = g.radial_average();
        for (a, b) in g.values().iter().zip(p.values()) {
            assert_relative_eq!(a, b, max_relative = 1e-14);
        }
    }

    #[test]
    fn nonradiality_of_radial_and_quadrant_data() {
        let radial = GridFunction::from_fn(48, 0.2, 4.0, |x, y| {
            let bin = ((x * x + y * y).sqrt() / 0.2) as usize;
            (-((bin as f64) * 0.2)).exp()
        })
        .unwrap();
        let nu = radial.nonradiality_index().unwrap();
        assert!(nu <= 1e-14, "binned radial data must project to itself, nu = {nu}");

        // Indicator of one quadrant: strongly nonradial.
        let quadrant = GridFunction::from_fn(48, 0.2, 4.0, |x, y| {
            if x > 0.0 && y > 0.0 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let nu = quadrant.nonradiality_index().unwrap();
        assert!(nu >= 0.5, "quadrant nonradiality {nu}");

        // Independent bin-count oracle: for a 0/1 function with k of K nodes
        // lit per bin, ν² = 1 - (Σ k²/K) / (Σ k).
        let mut per_bin: std::collections::HashMap<usize, (usize, usize)> = Default::default();
        for i in 0..48 {
            for j in 0..48 {
                let idx = quadrant.index(i, j);
                if quadrant.mask()[idx] {
                    let (x, y) = quadrant.coord(i, j);
                    let bin = ((x * x + y * y).sqrt() / 0.2) as usize;
                    let e = per_bin.entry(bin).or_insert((0, 0));
                    e.1 += 1;
                    if quadrant.values()[idx] > 0.0 {
                        e.0 += 1;
                    }
                }
            }
        }
        let lit: usize = per_bin.values().map(|(k, _)| k).sum();
        let sum_sq: f64 = per_bin.values().map(|&(k, total)| (k * k) as f64 / total as f64).sum();
        let oracle = (1.0 - sum_sq / lit as f64).sqrt();
        assert_relative_eq!(nu, oracle, max_relative = 1e-12);

        // Amplitude invariance.
        let nu2 = quadrant.scaled(3.7).nonradiality_index().unwrap();
        assert_relative_eq!(nu, nu2, max_relative = 1e-13);

        assert!(GridFunction::zeros(48, 0.2, 4.0).unwrap().nonradiality_index().is_err());
    }
}
