//! One-dimensional quadrature building blocks: grid constructors, composite
//! weights for point-valued integrands, adaptive Simpson, and the smooth
//! cut-off glue used by frequency splits and ball truncations.

use crate::error::{Error, Result};

/// Strictly increasing radius grid used by radial profiles and frequency
/// grids. The default is geometric near the origin, then uniform:
/// {0} ∪ geometric[1e-3, 1) ∪ uniform[1, r_max].
pub fn default_radius_grid() -> Vec<f64> {
    geometric_uniform_grid(2048, 1e-3, 1.0, 64.0)
}

/// `total` points: 0, then a geometric block on [r_inner, r_switch), then a
/// uniform block on [r_switch, r_max]. A quarter of the points go to the
/// geometric block.
pub fn geometric_uniform_grid(total: usize, r_inner: f64, r_switch: f64, r_max: f64) -> Vec<f64> {
    assert!(total >= 8 && r_inner > 0.0 && r_switch > r_inner && r_max > r_switch);
    let n_geo = total / 4;
    let n_uni = total - 1 - n_geo;
    let mut grid = Vec::with_capacity(total);
    grid.push(0.0);
    let ratio = (r_switch / r_inner).powf(1.0 / n_geo as f64);
    let mut r = r_inner;
    for _ in 0..n_geo {
        grid.push(r);
        r *= ratio;
    }
    let h = (r_max - r_switch) / (n_uni - 1) as f64;
    for k in 0..n_uni {
        grid.push(r_switch + h * k as f64);
    }
    grid
}

/// Uniform grid of `n` points on [0, r_max].
pub fn uniform_grid(n: usize, r_max: f64) -> Vec<f64> {
    assert!(n >= 2);
    let h = r_max / (n - 1) as f64;
    (0..n).map(|k| h * k as f64).collect()
}

/// Two uniform blocks: `n_dense` points on [0, mid], then `n_coarse` more on
/// (mid, r_max]. Used for frequency grids where the spectra of interest live
/// at low frequency but the seminorm still wants some reach.
pub fn dense_coarse_grid(n_dense: usize, mid: f64, n_coarse: usize, r_max: f64) -> Vec<f64> {
    assert!(n_dense >= 2 && n_coarse >= 1 && r_max > mid && mid > 0.0);
    let mut grid = uniform_grid(n_dense, mid);
    let h = (r_max - mid) / n_coarse as f64;
    for k in 1..=n_coarse {
        grid.push(mid + h * k as f64);
    }
    grid
}

pub fn is_strictly_increasing(grid: &[f64]) -> bool {
    grid.windows(2).all(|w| w[1] > w[0])
}

/// Composite quadrature weights for point values on an arbitrary strictly
/// increasing grid: each interval is integrated with the cubic through the
/// four nearest nodes (one-sided at the ends). Fourth order on smooth data;
/// exact for cubics. Reduces the boundary error that plain trapezoid leaves
/// on integrands that do not vanish at the ends.
pub fn composite_weights(grid: &[f64]) -> Result<Vec<f64>> {
    let m = grid.len();
    if m < 2 {
        return Err(Error::domain("quadrature grid needs at least 2 points"));
    }
    if !is_strictly_increasing(grid) {
        return Err(Error::domain("quadrature grid must be strictly increasing"));
    }
    if m < 4 {
        // Fall back to trapezoid for tiny grids.
        let mut w = vec![0.0; m];
        for i in 0..m - 1 {
            let half = 0.5 * (grid[i + 1] - grid[i]);
            w[i] += half;
            w[i + 1] += half;
        }
        return Ok(w);
    }
    let mut w = vec![0.0; m];
    for i in 0..m - 1 {
        // Stencil of 4 nodes around the interval [grid[i], grid[i+1]].
        let s = if i == 0 {
            0
        } else if i + 2 >= m {
            m - 4
        } else {
            i - 1
        };
        let nodes = [grid[s], grid[s + 1], grid[s + 2], grid[s + 3]];
        let (a, b) = (grid[i], grid[i + 1]);
        // Integrate each Lagrange basis polynomial over [a, b].
        for (j, wj) in lagrange_integrals(&nodes, a, b).iter().enumerate() {
            w[s + j] += wj;
        }
    }
    Ok(w)
}

/// ∫_a^b of the four cubic Lagrange basis polynomials on `nodes`.
fn lagrange_integrals(nodes: &[f64; 4], a: f64, b: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    // 4-point Gauss-Legendre on [a, b] integrates cubics exactly.
    const GX: [f64; 4] = [
        -0.8611363115940526,
        -0.3399810435848563,
        0.3399810435848563,
        0.8611363115940526,
    ];
    const GW: [f64; 4] = [
        0.3478548451374538,
        0.6521451548625461,
        0.6521451548625461,
        0.3478548451374538,
    ];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    for (gx, gw) in GX.iter().zip(GW.iter()) {
        let x = mid + half * gx;
        for j in 0..4 {
            let mut basis = 1.0;
            for k in 0..4 {
                if k != j {
                    basis *= (x - nodes[k]) / (nodes[j] - nodes[k]);
                }
            }
            out[j] += gw * half * basis;
        }
    }
    out
}

/// Plain trapezoid weights (kept for cross-checks and tiny grids).
pub fn trapezoid_weights(grid: &[f64]) -> Vec<f64> {
    let m = grid.len();
    let mut w = vec![0.0; m];
    for i in 0..m - 1 {
        let half = 0.5 * (grid[i + 1] - grid[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    w
}

/// Adaptive Simpson with absolute tolerance, for smooth 1-D integrands.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    adaptive_simpson_min_depth(f, a, b, tol, 0)
}

/// Adaptive Simpson that refuses to accept an interval before `min_depth`
/// bisections. Oscillatory integrands alias the plain error estimate at
/// coarse resolution; forcing a few levels of refinement first makes the
/// estimate trustworthy.
pub fn adaptive_simpson_min_depth(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    min_depth: u32,
) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
        force: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || (force == 0 && delta.abs() <= 15.0 * tol) {
            left + right + delta / 15.0
        } else {
            let next_force = force.saturating_sub(1);
            recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1, next_force)
                + recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1, next_force)
        }
    }
    let (fa, fb) = (f(a), f(b));
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 48, min_depth)
}

/// C^∞ transition: exactly 1 for x ≤ 0, exactly 0 for x ≥ 1, glued with
/// exp(-1/t) in between. The basic brick for the frequency-split multiplier
/// and the ball cut-off.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x >= 1.0 {
        0.0
    } else {
        let g = |t: f64| (-1.0 / t).exp();
        let down = g(1.0 - x);
        let up = g(x);
        down / (down + up)
    }
}

/// The split multiplier ψ: radial, ≡ 1 on [0, 1/2], ≡ 0 on [1, ∞).
pub fn psi_multiplier(r: f64) -> f64 {
    smooth_step(2.0 * (r - 0.5))
}

/// The standard compactly supported bump exp(-1/(1-r²)) on r < 1, zero
/// outside, normalized to value exp(-1) at the origin.
pub fn standard_bump(r: f64) -> f64 {
    if r.abs() < 1.0 {
        (-1.0 / (1.0 - r * r)).exp()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn composite_weights_integrate_polynomials_exactly() {
        let grid = geometric_uniform_grid(64, 1e-2, 0.5, 3.0);
        let w = composite_weights(&grid).unwrap();
        for deg in 0..=3 {
            let exact = 3.0f64.powi(deg + 1) / (deg + 1) as f64;
            let num: f64 = grid.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            assert_relative_eq!(num, exact, max_relative = 1e-12);
        }
    }

    #[test]
    fn composite_weights_on_smooth_decay() {
        // ∫_0^40 e^{-r²/2} r dr = 1 - e^{-800} ≈ 1, fourth-order in h.
        let integral = |n: usize| -> f64 {
            let grid = uniform_grid(n, 40.0);
            let w = composite_weights(&grid).unwrap();
            grid.iter().zip(&w).map(|(r, w)| w * (-r * r / 2.0).exp() * r).sum()
        };
        let coarse = (integral(512) - 1.0).abs();
        let fine = (integral(1024) - 1.0).abs();
        assert!(fine < 5e-7, "error at 1024 points: {fine:.3e}");
        assert!(coarse / fine > 8.0, "convergence order too low: {coarse:.3e} -> {fine:.3e}");
    }

    #[test]
    fn default_grid_shape() {
        let g = default_radius_grid();
        assert_eq!(g.len(), 2048);
        assert_eq!(g[0], 0.0);
        assert!(is_strictly_increasing(&g));
        assert_abs_diff_eq!(*g.last().unwrap(), 64.0, epsilon = 1e-12);
    }

    #[test]
    fn adaptive_simpson_on_oscillatory() {
        let v = adaptive_simpson(&|x: f64| (10.0 * x).sin(), 0.0, 1.0, 1e-12);
        assert_relative_eq!(v, (1.0 - (10.0f64).cos()) / 10.0, max_relative = 1e-10);
    }

    #[test]
    fn smooth_step_endpoints_exact() {
        assert_eq!(smooth_step(-0.1), 1.0);
        assert_eq!(smooth_step(0.0), 1.0);
        assert_eq!(smooth_step(1.0), 0.0);
        assert_eq!(smooth_step(2.0), 0.0);
        assert!(smooth_step(0.5) > 0.0 && smooth_step(0.5) < 1.0);
        assert_eq!(psi_multiplier(0.4), 1.0);
        assert_eq!(psi_multiplier(1.1), 0.0);
    }
}
