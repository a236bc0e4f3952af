//! Reproducible experiment harness: R-sweeps of the radial and unrestricted
//! levels, translated-bump decay of the unrestricted whole-space level,
//! cut-off convergence, and the inequality surveys.

use crate::error::{Error, Result};
use crate::grid::{GagliardoMode, GridEnergy, GridFunction};
use crate::params::{exponents, validate, ProblemParams};
use crate::quadrature::{dense_coarse_grid, smooth_step, standard_bump};
use crate::radial::{
    band_limited_family, bump_profile, gaussian_profile, strauss_ratio_with, RadialProfile,
    Spectral,
};
use crate::solver::{solve_full, solve_radial, solve_whole_space, RadialGridSpec, SolveOptions};
use rayon::prelude::*;

/// How grids are sized across a radius sweep.
///
/// The default keeps the spacing fixed while the grid grows with R, so the
/// discretization bias does not vary along the sweep and the levels are
/// comparable; fixing N instead is available behind this switch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridPolicy {
    FixedSpacing { h: f64 },
    FixedSide { n: usize },
}

impl GridPolicy {
    /// Default: the spacing that puts 192 cells across the largest default
    /// ball (R = 24).
    pub fn default_sweep() -> Self {
        GridPolicy::FixedSpacing { h: 0.25 }
    }

    pub fn dimensions(&self, radius: f64) -> (usize, f64) {
        match *self {
            GridPolicy::FixedSpacing { h } => {
                let mut n = (2.0 * radius / h).ceil() as usize;
                if n % 2 == 1 {
                    n += 1;
                }
                (n, h)
            }
            GridPolicy::FixedSide { n } => (n, 2.0 * radius / n as f64),
        }
    }
}

/// One radius of the sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub radius: f64,
    /// Radial level m(R).
    pub radial_level: f64,
    /// Unrestricted level M(R).
    pub full_level: f64,
    /// m - M ≥ -1e-6 by construction.
    pub gap: f64,
    /// (m - M)/m.
    pub relative_gap: f64,
    /// Nonradiality index of the unrestricted minimizer.
    pub nonradiality: f64,
    pub radial_converged: bool,
    pub full_converged: bool,
    /// Minimum of the unrestricted minimizer over the interior nodes
    /// (strictly positive echoes the minimum principle).
    pub full_interior_min: f64,
}

/// Sweep output: rows by R ascending plus the whole-space radial reference.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub params: ProblemParams,
    pub policy: GridPolicy,
    pub rows: Vec<SweepRow>,
    /// m(∞) from the truncated whole-space solve.
    pub whole_space_level: f64,
    pub whole_space_converged: bool,
    pub whole_space_suspect: bool,
    /// Minimizers of the final row, for inspection and serialization.
    pub final_radial_minimizer: Option<GridFunction>,
    pub final_full_minimizer: Option<GridFunction>,
}

/// Run the radial and unrestricted solves on the same grid for each R, the
/// radial minimizer seeding the unrestricted multi-start, and append the
/// whole-space reference level.
pub fn sweep_radii(
    params: &ProblemParams,
    r_list: &[f64],
    policy: GridPolicy,
    whole_space_l: f64,
    opts: &SolveOptions,
) -> Result<SweepResult> {
    if r_list.is_empty() || r_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("R list must be nonempty and strictly ascending"));
    }
    if !validate(params).passed() {
        return Err(Error::domain("parameters fail the admissibility checks"));
    }

    struct RowOut {
        row: SweepRow,
        radial_min: GridFunction,
        full_min: GridFunction,
    }

    let rows: Result<Vec<RowOut>> = r_list
        .par_iter()
        .map(|&radius| -> Result<RowOut> {
            let (n_side, h) = policy.dimensions(radius);
            let op = GridEnergy::assemble(n_side, h, radius, params)?;
            let radial = solve_radial(&op, opts)?;
            let full = solve_full(&op, radial.minimizer.as_grid(), opts)?;
            let full_grid = full.minimizer.as_grid().expect("grid solve").clone();
            let interior_min = full_grid
                .values()
                .iter()
                .zip(full_grid.mask())
                .filter(|(_, &m)| m)
                .map(|(v, _)| *v)
                .fold(f64::INFINITY, f64::min);
            let gap = radial.level - full.level;
            let row = SweepRow {
                radius,
                radial_level: radial.level,
                full_level: full.level,
                gap,
                relative_gap: gap / radial.level,
                nonradiality: full.nonradiality.unwrap_or(f64::NAN),
                radial_converged: radial.converged,
                full_converged: full.converged,
                full_interior_min: interior_min,
            };
            Ok(RowOut {
                row,
                radial_min: radial.minimizer.as_grid().expect("grid solve").clone(),
                full_min: full_grid,
            })
        })
        .collect();
    let mut rows = rows?;

    let whole = solve_whole_space(params, whole_space_l, &RadialGridSpec::default(), opts)?;
    let last = rows.pop();
    let (final_radial_minimizer, final_full_minimizer, all_rows) = match last {
        Some(out) => {
            let mut list: Vec<SweepRow> = rows.iter().map(|r| r.row).collect();
            list.push(out.row);
            (Some(out.radial_min), Some(out.full_min), list)
        }
        None => (None, None, Vec::new()),
    };

    Ok(SweepResult {
        params: *params,
        policy,
        rows: all_rows,
        whole_space_level: whole.level,
        whole_space_converged: whole.converged,
        whole_space_suspect: whole.truncation_suspect,
        final_radial_minimizer,
        final_full_minimizer,
    })
}

/// One translated-bump quotient evaluation.
#[derive(Debug, Clone, Copy)]
pub struct BumpRow {
    pub t: f64,
    /// Q(u_t) = E(u_t) / G(u_t)^{2/p}.
    pub quotient: f64,
    /// The explicit upper bound ( \[u\]² + (1+t)^a ‖u‖² ) / ((t-1)^b ‖u‖_p^p)^{2/p}.
    pub upper_bound: f64,
}

#[derive(Debug, Clone)]
pub struct BumpDecayResult {
    pub params: ProblemParams,
    pub rows: Vec<BumpRow>,
    /// Least-squares slope of log Q against log t over the last four rows.
    pub fitted_slope: f64,
    /// a - 2b/p, the decay rate forced by the two-sided weight bounds.
    pub predicted_slope: f64,
    /// \[u\]², computed once: the seminorm is translation invariant.
    pub seminorm_sq: f64,
}

/// Decay of the quotient along translations u_t(x) = u(x - t v) of a bump
/// supported in the unit ball. The seminorm is computed once on the bump's
/// own grid; the weighted terms see the translated positions exactly.
pub fn bump_decay(params: &ProblemParams, t_list: &[f64]) -> Result<BumpDecayResult> {
    if 2.0 * params.b <= params.a * params.p {
        return Err(Error::domain(
            "bump decay requires 2b > ap (otherwise the unrestricted whole-space level stays positive)",
        ));
    }
    if t_list.len() < 4 || t_list.windows(2).any(|w| w[1] <= w[0]) || t_list[0] < 2.0 {
        return Err(Error::domain("t list must be ascending with at least 4 entries, all >= 2"));
    }

    // The bump on its own local ball: support B_1 inside B_2.
    let n_side = 256;
    let h = 4.0 / n_side as f64;
    let op = GridEnergy::assemble(n_side, h, 2.0, params)?;
    let u = GridFunction::from_fn(n_side, h, 2.0, |x, y| {
        standard_bump((x * x + y * y).sqrt())
    })?;
    let seminorm_sq = op.gagliardo_sq(&u, GagliardoMode::Convolution)?;
    let h2 = h * h;
    let (l2_plain, lp_plain) = {
        let mut l2 = 0.0;
        let mut lp = 0.0;
        for &v in u.values() {
            l2 += v * v;
            lp += v.powf(params.p);
        }
        (l2 * h2, lp * h2)
    };

    let mut rows = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let mut lower = 0.0;
        let mut constraint = 0.0;
        for i in 0..n_side {
            for j in 0..n_side {
                let idx = u.index(i, j);
                let v = u.values()[idx];
                if v != 0.0 {
                    let (x, y) = u.coord(i, j);
                    // Translated position along +x.
                    let r = ((x + t) * (x + t) + y * y).sqrt();
                    lower += r.powf(params.a) * v * v;
                    constraint += r.powf(params.b) * v.powf(params.p);
                }
            }
        }
        lower *= h2;
        constraint *= h2;
        let quotient = (seminorm_sq + lower) / constraint.powf(2.0 / params.p);
        let upper_bound = (seminorm_sq + (1.0 + t).powf(params.a) * l2_plain)
            / ((t - 1.0).powf(params.b) * lp_plain).powf(2.0 / params.p);
        rows.push(BumpRow { t, quotient, upper_bound });
    }

    let tail = &rows[rows.len() - 4..];
    let fitted_slope = least_squares_slope(
        &tail.iter().map(|r| r.t.ln()).collect::<Vec<_>>(),
        &tail.iter().map(|r| r.quotient.ln()).collect::<Vec<_>>(),
    );
    let predicted_slope = params.a - 2.0 * params.b / params.p;

    Ok(BumpDecayResult { params: *params, rows, fitted_slope, predicted_slope, seminorm_sq })
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        num += (xi - mx) * (yi - my);
        den += (xi - mx) * (xi - mx);
    }
    num / den
}

/// One row of the cut-off convergence table.
#[derive(Debug, Clone, Copy)]
pub struct CutoffRow {
    pub radius: f64,
    /// ‖η_R u - u‖_{H^s_{q,a}}.
    pub error: f64,
}

#[derive(Debug, Clone)]
pub struct CutoffResult {
    pub rows: Vec<CutoffRow>,
    /// ‖u‖_{H^s_{q,a}} for scale.
    pub norm: f64,
}

/// Convergence η_R·u → u in the energy norm as R grows, with the smooth
/// cut-off η ≡ 1 on [0, 1/2], ≡ 0 on [1, ∞) applied at scale R.
pub fn cutoff_convergence(
    u: &RadialProfile,
    params: &ProblemParams,
    r_list: &[f64],
) -> Result<CutoffResult> {
    if r_list.is_empty() || r_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("R list must be nonempty and strictly ascending"));
    }
    // Small cut-off radii produce sharp transitions; give the seminorm the
    // extended frequency reach.
    let omega_grid = dense_coarse_grid(1025, 8.0, 1023, 64.0);
    let spectral = Spectral::new(u.radii(), &omega_grid, u.dim())?;
    let norm = spectral.energy_norm(u, params)?;
    let radii = u.radii().to_vec();
    let mut rows = Vec::with_capacity(r_list.len());
    for &radius in r_list {
        let mut diff = u.clone();
        for (v, r) in diff.values_mut().iter_mut().zip(&radii) {
            // η_R(r) - 1 vanishes identically for r ≤ R/2.
            *v *= smooth_step(2.0 * (r / radius - 0.5)) - 1.0;
        }
        let error = spectral.energy_norm(&diff, params)?;
        rows.push(CutoffRow { radius, error });
    }
    Ok(CutoffResult { rows, norm })
}

/// Named, versioned profile family for the surveys.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub name: String,
    pub gaussian_widths: Vec<f64>,
    pub bump_radii: Vec<f64>,
    pub band_limited_seeds: Vec<u64>,
}

impl Default for FamilySpec {
    fn default() -> Self {
        FamilySpec {
            name: "survey-v1".into(),
            gaussian_widths: vec![0.5, 0.75, 1.0, 1.5, 2.0],
            bump_radii: vec![0.75, 1.0, 1.5, 2.0, 3.0],
            band_limited_seeds: (0..10).collect(),
        }
    }
}

impl FamilySpec {
    /// Materialize the family on a radius grid.
    pub fn build(&self, r_grid: &[f64], n: u32) -> Vec<(String, RadialProfile)> {
        let mut members = Vec::new();
        for &w in &self.gaussian_widths {
            members.push((format!("gaussian-w{w}"), gaussian_profile(r_grid, n, w)));
        }
        for &r in &self.bump_radii {
            members.push((format!("bump-r{r}"), bump_profile(r_grid, n, r)));
        }
        let band = band_limited_family(r_grid, n, self.band_limited_seeds.iter().copied());
        for (seed, profile) in self.band_limited_seeds.iter().zip(band) {
            members.push((format!("band-limited-{seed}"), profile));
        }
        members
    }
}

/// One survey member's outcome.
#[derive(Debug, Clone)]
pub struct SurveyRow {
    pub member: String,
    pub ratio: f64,
    pub seminorm: f64,
    pub weighted_norm: f64,
    /// False for degenerate members skipped with a warning.
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct SurveyResult {
    pub rows: Vec<SurveyRow>,
    /// Family maximum of the ratio: the empirical constant.
    pub max_ratio: f64,
}

fn survey_grid() -> (Vec<f64>, Vec<f64>) {
    (
        crate::quadrature::default_radius_grid(),
        // Bump spectra reach farther than band-limited ones.
        dense_coarse_grid(1025, 8.0, 1023, 64.0),
    )
}

/// Decay-inequality survey: the empirical constant of
/// |u(x)| ≤ C |x|^{-σ} \[u\]^θ ‖u‖^{1-θ} over the named family.
pub fn strauss_survey(params: &ProblemParams, family: &FamilySpec) -> Result<SurveyResult> {
    let (r_grid, omega_grid) = survey_grid();
    let spectral = Spectral::new(&r_grid, &omega_grid, params.n)?;
    let members = family.build(&r_grid, params.n);
    let rows: Vec<SurveyRow> = members
        .par_iter()
        .map(|(name, u)| survey_member(&spectral, name, u, params, SurveyKind::Strauss))
        .collect();
    finish_survey(rows)
}

/// Weighted interpolation-inequality survey: the empirical constant of
/// ‖u‖_{L^p_b} ≤ C \[u\]^η ‖u‖_{L^q_a}^{1-η}.
pub fn gn_survey(params: &ProblemParams, family: &FamilySpec) -> Result<SurveyResult> {
    let report = validate(params);
    let cond = report
        .checks
        .iter()
        .find(|c| c.name == "compactness (general q)")
        .map(|c| c.pass)
        .unwrap_or(false);
    if !cond {
        return Err(Error::domain(
            "interpolation survey requires the general-q compactness condition",
        ));
    }
    let (r_grid, omega_grid) = survey_grid();
    let spectral = Spectral::new(&r_grid, &omega_grid, params.n)?;
    let members = family.build(&r_grid, params.n);
    let rows: Vec<SurveyRow> = members
        .par_iter()
        .map(|(name, u)| survey_member(&spectral, name, u, params, SurveyKind::Interpolation))
        .collect();
    finish_survey(rows)
}

enum SurveyKind {
    Strauss,
    Interpolation,
}

fn survey_member(
    spectral: &Spectral,
    name: &str,
    u: &RadialProfile,
    params: &ProblemParams,
    kind: SurveyKind,
) -> SurveyRow {
    let seminorm = match spectral.gagliardo(u, params.s) {
        Ok(v) => v,
        Err(_) => {
            return SurveyRow {
                member: name.into(),
                ratio: f64::NAN,
                seminorm: f64::NAN,
                weighted_norm: f64::NAN,
                ok: false,
            }
        }
    };
    let weighted_norm = spectral.weighted_norm(u, params.q, params.a).unwrap_or(f64::NAN);
    if !(seminorm > 0.0) || !(weighted_norm > 0.0) {
        return SurveyRow { member: name.into(), ratio: f64::NAN, seminorm, weighted_norm, ok: false };
    }
    let ratio = match kind {
        SurveyKind::Strauss => strauss_ratio_with(spectral, u, params),
        SurveyKind::Interpolation => exponents(params).and_then(|e| {
            let lhs = spectral.weighted_norm(u, params.p, params.b)?;
            Ok(lhs / (seminorm.powf(e.eta) * weighted_norm.powf(1.0 - e.eta)))
        }),
    };
    match ratio {
        Ok(ratio) => SurveyRow { member: name.into(), ratio, seminorm, weighted_norm, ok: true },
        Err(_) => SurveyRow { member: name.into(), ratio: f64::NAN, seminorm, weighted_norm, ok: false },
    }
}

fn finish_survey(rows: Vec<SurveyRow>) -> Result<SurveyResult> {
    let max_ratio = rows
        .iter()
        .filter(|r| r.ok)
        .map(|r| r.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    if !max_ratio.is_finite() {
        return Err(Error::domain("every family member was degenerate"));
    }
    Ok(SurveyResult { rows, max_ratio })
}
