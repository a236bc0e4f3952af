//! Constrained minimization of the Rayleigh quotients defining the ground
//! state levels m(R), M(R) and m(∞).
//!
//! The constraint G(u) = ∫ |x|^b (u⁺)^p = 1 is p-homogeneous, so it is
//! enforced exactly by renormalization u ← u / G(u)^{1/p} instead of a
//! penalty. Each iteration takes an Armijo-backtracked step along -∇E
//! restricted to the constraint tangent (along that direction the
//! renormalization correction is second order), applies the
//! nonnegative-part projection (which never increases the seminorm and
//! leaves G unchanged), the angular-average projection when the radial
//! class is requested, and renormalizes. Convergence is declared when the
//! constraint-tangent part of the gradient is small relative to the full
//! gradient.

use crate::error::{Error, Result};
use crate::grid::{GridEnergy, GridFunction};
use crate::params::ProblemParams;
use crate::quadrature::{composite_weights, dense_coarse_grid};
use crate::radial::{sphere_area, HankelPlan, RadialProfile};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Knobs of the projected-gradient descent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub max_iters: usize,
    /// Relative tolerance on the projected gradient norm.
    pub grad_tol: f64,
    /// Initial step length.
    pub step0: f64,
    /// Sufficient-decrease parameter in (0, 1).
    pub armijo_c: f64,
    /// Base seed for random starts (start index is added per start).
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_iters: 20_000, grad_tol: 1e-6, step0: 0.1, armijo_c: 1e-4, seed: 7 }
    }
}

impl SolveOptions {
    fn validate(&self) -> Result<()> {
        if self.max_iters == 0 || !(self.grad_tol > 0.0) || !(self.step0 > 0.0) {
            return Err(Error::domain("solver options must be positive"));
        }
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return Err(Error::domain("armijo_c must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// One iteration record of the descent.
#[derive(Debug, Clone, Copy)]
pub struct TraceRow {
    pub iter: usize,
    pub level: f64,
    pub grad_norm: f64,
    pub step: f64,
}

/// The minimizer payload: ball problems return grid functions, whole-space
/// problems radial profiles.
#[derive(Debug, Clone)]
pub enum Minimizer {
    Grid(GridFunction),
    Radial(RadialProfile),
}

impl Minimizer {
    pub fn as_grid(&self) -> Option<&GridFunction> {
        match self {
            Minimizer::Grid(g) => Some(g),
            _ => None,
        }
    }

    pub fn as_radial(&self) -> Option<&RadialProfile> {
        match self {
            Minimizer::Radial(r) => Some(r),
            _ => None,
        }
    }
}

/// Outcome of a constrained minimization.
#[derive(Debug, Clone)]
pub struct MinimizationResult {
    pub minimizer: Minimizer,
    /// Attained value of E(u) with G(u) = 1: this is the reported level.
    pub level: f64,
    /// Lagrange multiplier recovered from stationarity (least-squares fit of
    /// ∇E against ∇G, rescaled to the convention in which it equals the
    /// level). The identity multiplier ≈ level is a convergence check, not a
    /// definition.
    pub multiplier: f64,
    /// |G(u) - 1| at the returned point.
    pub constraint_residual: f64,
    /// ν(u) for grid minimizers; `None` for radial profiles.
    pub nonradiality: Option<f64>,
    pub iters: usize,
    pub converged: bool,
    /// Level reached from each start, in start order.
    pub start_levels: Vec<f64>,
    pub winning_start: usize,
    /// Iteration trace of the winning start.
    pub trace: Vec<TraceRow>,
    /// Whole-space solves: set when the decay check at the truncation radius
    /// failed (profile may be feeling the artificial boundary).
    pub truncation_suspect: bool,
}

/// A constrained variational problem over a flat vector of degrees of
/// freedom: energy, constraint, their gradients, and the feasibility
/// projection.
pub trait VariationalProblem {
    fn dof(&self) -> usize;
    fn energy(&self, u: &[f64]) -> f64;
    fn energy_gradient(&self, u: &[f64]) -> Vec<f64>;
    fn constraint(&self, u: &[f64]) -> f64;
    fn constraint_gradient(&self, u: &[f64]) -> Vec<f64>;
    /// Homogeneity degree p of the constraint.
    fn constraint_degree(&self) -> f64;
    /// Pointwise feasibility projection: nonnegative part, support mask, and
    /// (when requested) the angular average.
    fn project(&self, u: &mut [f64], radial: bool);
    /// Projection of an arbitrary vector onto the radial subspace (identity
    /// for problems that are radial by construction).
    fn radialize(&self, _v: &mut [f64]) {}
}

/// Core solve from one starting point.
#[derive(Debug, Clone)]
pub struct CoreSolve {
    pub values: Vec<f64>,
    pub level: f64,
    pub multiplier: f64,
    pub constraint_residual: f64,
    pub iters: usize,
    pub converged: bool,
    pub trace: Vec<TraceRow>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Projected-gradient descent with Armijo backtracking and exact constraint
/// renormalization.
pub fn minimize(
    problem: &dyn VariationalProblem,
    u0: &[f64],
    radial: bool,
    opts: &SolveOptions,
) -> Result<CoreSolve> {
    opts.validate()?;
    if u0.len() != problem.dof() {
        return Err(Error::domain("starting point has the wrong dimension"));
    }
    let p = problem.constraint_degree();

    let mut u = u0.to_vec();
    problem.project(&mut u, radial);
    let g0 = problem.constraint(&u);
    if !(g0 > 0.0) {
        return Err(Error::domain(format!(
            "starting point has nonpositive constraint value G = {g0}"
        )));
    }
    let scale = g0.powf(-1.0 / p);
    for v in &mut u {
        *v *= scale;
    }

    let mut energy = problem.energy(&u);
    let mut step = opts.step0;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iters = 0;
    let mut prev_point: Option<(Vec<f64>, Vec<f64>)> = None;

    for iter in 0..opts.max_iters {
        iters = iter + 1;
        let mut grad = problem.energy_gradient(&u);
        let mut cgrad = problem.constraint_gradient(&u);
        if radial {
            // Restrict the descent to the radial subspace.
            problem.radialize(&mut grad);
            problem.radialize(&mut cgrad);
        }
        let cg_sq = dot(&cgrad, &cgrad);
        let lambda_ls = if cg_sq > 0.0 { dot(&grad, &cgrad) / cg_sq } else { 0.0 };

        // Constraint-tangent residual with the nonnegativity active set
        // removed: at u_i = 0 an outward-pushing component cannot move. The
        // residual is both the convergence measure and the step direction;
        // along it the renormalization correction is second order, so the
        // first-order decrease is exactly its squared norm.
        let mut residual = vec![0.0; u.len()];
        let mut res_sq = 0.0;
        let mut grad_sq = 0.0;
        for i in 0..u.len() {
            let r = grad[i] - lambda_ls * cgrad[i];
            grad_sq += grad[i] * grad[i];
            if !(u[i] == 0.0 && r > 0.0) {
                residual[i] = r;
                res_sq += r * r;
            }
        }
        let rel = (res_sq / grad_sq.max(f64::MIN_POSITIVE)).sqrt();
        trace.push(TraceRow { iter, level: energy, grad_norm: rel, step });

        if rel <= opts.grad_tol {
            converged = true;
            break;
        }

        // Barzilai-Borwein trial step from the last accepted move (Armijo
        // still guards the actual acceptance), falling back to the grown
        // previous step when the curvature estimate is unusable.
        if let Some((pu, pr)) = &prev_point {
            let mut sy = 0.0;
            let mut yy = 0.0;
            for i in 0..u.len() {
                let si = u[i] - pu[i];
                let yi = residual[i] - pr[i];
                sy += si * yi;
                yy += yi * yi;
            }
            if sy > 0.0 && yy > 0.0 {
                step = (sy / yy).clamp(1e-12, 1e8);
            }
        }
        prev_point = Some((u.clone(), residual.clone()));

        // Armijo backtracking on the projected, renormalized step.
        let mut accepted = false;
        while step > 1e-18 * opts.step0 {
            let mut cand: Vec<f64> =
                u.iter().zip(&residual).map(|(v, r)| v - step * r).collect();
            problem.project(&mut cand, radial);
            let gc = problem.constraint(&cand);
            if gc > 0.0 {
                let s = gc.powf(-1.0 / p);
                for v in &mut cand {
                    *v *= s;
                }
                let cand_energy = problem.energy(&cand);
                // Sufficient decrease, with a noise-floor regime: once the
                // demanded decrease drops below the floating-point evaluation
                // noise of the energy, the comparison carries no information
                // and the search would starve before the gradient test is
                // met; there the step is accepted as long as the energy does
                // not rise above the noise band, and convergence is judged by
                // the (still clean) gradient alone.
                let demanded = opts.armijo_c * step * res_sq;
                let noise_floor = 16.0 * f64::EPSILON * energy.abs();
                let bound = if demanded <= noise_floor {
                    energy + noise_floor
                } else {
                    energy - demanded
                };
                if cand_energy <= bound {
                    debug_assert!(cand_energy <= energy + 1e-12 * energy.abs());
                    u = cand;
                    energy = cand_energy;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            // No acceptable step at any length: the iterate is numerically
            // stationary; report as-is with the convergence flag unset.
            break;
        }
        step = (step * 1.5).min(1e6 * opts.step0);
    }

    let mut cgrad = problem.constraint_gradient(&u);
    let mut grad = problem.energy_gradient(&u);
    if radial {
        // Stationarity holds in the radial subspace; the multiplier fit must
        // live there too.
        problem.radialize(&mut grad);
        problem.radialize(&mut cgrad);
    }
    let cg_sq = dot(&cgrad, &cgrad);
    let lambda_ls = if cg_sq > 0.0 { dot(&grad, &cgrad) / cg_sq } else { 0.0 };
    let multiplier = lambda_ls * p / 2.0;
    let constraint_residual = (problem.constraint(&u) - 1.0).abs();

    Ok(CoreSolve { values: u, level: energy, multiplier, constraint_residual, iters, converged, trace })
}

// ---------------------------------------------------------------------------
// Ball problems on the grid.

/// Adapter exposing an assembled [`GridEnergy`] as a flat variational
/// problem.
pub struct GridProblem<'a> {
    op: &'a GridEnergy,
}

impl<'a> GridProblem<'a> {
    pub fn new(op: &'a GridEnergy) -> Self {
        GridProblem { op }
    }

    fn wrap(&self, u: &[f64]) -> GridFunction {
        let mut g = self.op.template().clone();
        g.set_values(u).expect("dof length checked by the solver");
        g
    }
}

impl VariationalProblem for GridProblem<'_> {
    fn dof(&self) -> usize {
        self.op.template().values().len()
    }

    fn energy(&self, u: &[f64]) -> f64 {
        self.op.energy(&self.wrap(u)).expect("geometry fixed").energy
    }

    fn energy_gradient(&self, u: &[f64]) -> Vec<f64> {
        self.op.gradient(&self.wrap(u)).expect("geometry fixed").values().to_vec()
    }

    fn constraint(&self, u: &[f64]) -> f64 {
        self.op.constraint(&self.wrap(u))
    }

    fn constraint_gradient(&self, u: &[f64]) -> Vec<f64> {
        self.op.constraint_gradient(&self.wrap(u)).expect("geometry fixed").values().to_vec()
    }

    fn constraint_degree(&self) -> f64 {
        self.op.params().p
    }

    fn project(&self, u: &mut [f64], radial: bool) {
        let mut g = self.wrap(u);
        g.update(|_, v| v.max(0.0));
        if radial {
            g = g.radial_average();
        }
        u.copy_from_slice(g.values());
    }

    fn radialize(&self, v: &mut [f64]) {
        let g = self.wrap(v).radial_average();
        v.copy_from_slice(g.values());
    }
}

fn run_starts(
    op: &GridEnergy,
    starts: Vec<(String, GridFunction)>,
    radial: bool,
    opts: &SolveOptions,
) -> Result<MinimizationResult> {
    let problem = GridProblem::new(op);
    let mut outcomes = Vec::new();
    for (_, start) in &starts {
        outcomes.push(minimize(&problem, start.values(), radial, opts));
    }
    let mut start_levels = Vec::new();
    let mut best: Option<(usize, CoreSolve)> = None;
    for (k, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(solve) => {
                start_levels.push(solve.level);
                let better = match &best {
                    None => true,
                    // Lowest level wins; ties resolved by lowest start index.
                    Some((_, b)) => solve.level < b.level - 1e-10,
                };
                if better {
                    best = Some((k, solve));
                }
            }
            Err(e) => {
                start_levels.push(f64::NAN);
                if starts.len() == 1 {
                    return Err(e);
                }
            }
        }
    }
    let (winning_start, solve) =
        best.ok_or_else(|| Error::Convergence("every start failed".into()))?;
    let mut minimizer = op.template().clone();
    minimizer.set_values(&solve.values)?;
    let nonradiality = minimizer.nonradiality_index().ok();
    Ok(MinimizationResult {
        minimizer: Minimizer::Grid(minimizer),
        level: solve.level,
        multiplier: solve.multiplier,
        constraint_residual: solve.constraint_residual,
        nonradiality,
        iters: solve.iters,
        converged: solve.converged,
        start_levels,
        winning_start,
        trace: solve.trace,
        truncation_suspect: false,
    })
}

fn gaussian_start(op: &GridEnergy, center: (f64, f64), width: f64) -> GridFunction {
    let t = op.template();
    GridFunction::from_fn(t.n_side(), t.spacing(), t.ball_radius(), |x, y| {
        let dx = x - center.0;
        let dy = y - center.1;
        (-(dx * dx + dy * dy) / (2.0 * width * width)).exp()
    })
    .expect("geometry is valid")
}

fn random_start(op: &GridEnergy, seed: u64) -> GridFunction {
    let t = op.template();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = GridFunction::zeros(t.n_side(), t.spacing(), t.ball_radius()).expect("geometry");
    g.update(|_, _| rng.random_range(0.0..1.0));
    g
}

/// Unrestricted ground state M(R): multi-start descent over (0) an optional
/// warm start — the sweep passes the radial minimizer here so that
/// M ≤ m holds structurally — (1) a centered Gaussian, (2) an off-center
/// bump at 0.6R, (3) a seeded random nonnegative field.
pub fn solve_full(
    op: &GridEnergy,
    warm: Option<&GridFunction>,
    opts: &SolveOptions,
) -> Result<MinimizationResult> {
    let r = op.template().ball_radius();
    let mut starts = Vec::new();
    if let Some(w) = warm {
        starts.push(("radial warm start".to_string(), w.clone()));
    }
    starts.push(("centered gaussian".into(), gaussian_start(op, (0.0, 0.0), r / 3.0)));
    starts.push(("off-center bump".into(), gaussian_start(op, (0.6 * r, 0.0), r / 6.0)));
    starts.push(("seeded random".into(), random_start(op, opts.seed + starts.len() as u64)));
    run_starts(op, starts, false, opts)
}

/// Radial ground state m(R): the same engine constrained to the radial class
/// by angular-average projection, on the same grid as [`solve_full`].
pub fn solve_radial(op: &GridEnergy, opts: &SolveOptions) -> Result<MinimizationResult> {
    let r = op.template().ball_radius();
    let starts = vec![
        ("centered gaussian".to_string(), gaussian_start(op, (0.0, 0.0), r / 3.0)),
        ("radialized random".to_string(), random_start(op, opts.seed).radial_average()),
    ];
    run_starts(op, starts, true, opts)
}

// ---------------------------------------------------------------------------
// Whole-space radial problem.

/// Radial grid specification for the truncated whole-space solve.
#[derive(Debug, Clone, Copy)]
pub struct RadialGridSpec {
    /// Number of radius points on [0, L].
    pub points: usize,
    /// Number of frequency points.
    pub omega_points: usize,
    /// Frequency reach.
    pub omega_max: f64,
}

impl Default for RadialGridSpec {
    fn default() -> Self {
        RadialGridSpec { points: 768, omega_points: 768, omega_max: 48.0 }
    }
}

/// Discrete whole-space energy on profiles over [0, L] with u(L) = 0: the
/// seminorm through a cached transform, the weighted terms by quadrature.
pub struct RadialWholeSpace {
    params: ProblemParams,
    r_grid: Vec<f64>,
    plan: HankelPlan,
    /// |S^{n-1}| wt_k ω^{2s + n - 1} per frequency node.
    spectral_weights: Vec<f64>,
    /// |S^{n-1}| wt_i r^{a + n - 1} per radius node.
    lower_weights: Vec<f64>,
    /// |S^{n-1}| wt_i r^{b + n - 1}.
    constraint_weights: Vec<f64>,
}

impl RadialWholeSpace {
    pub fn assemble(params: &ProblemParams, l: f64, spec: &RadialGridSpec) -> Result<Self> {
        if params.n != 2 {
            return Err(Error::domain("the whole-space solver is assembled for n = 2"));
        }
        if !(l > 1.0) {
            return Err(Error::domain(format!("truncation radius L = {l} too small")));
        }
        // Cell-centered radius grid: every node carries positive measure, so
        // there is no near-null degree of freedom at the origin.
        let h = l / spec.points as f64;
        let r_grid: Vec<f64> = (0..spec.points).map(|k| (k as f64 + 0.5) * h).collect();
        // The frequency grid must reach past the radius-grid Nyquist π/h:
        // otherwise oscillations representable on the grid alias above the
        // seminorm's reach and become energetically free junk.
        let omega_max = spec.omega_max.max(1.05 * std::f64::consts::PI / h);
        let omega = dense_coarse_grid(
            spec.omega_points / 2 + 1,
            6.0,
            spec.omega_points / 2 - 1,
            omega_max,
        );
        let plan = HankelPlan::new(&r_grid, &omega, params.n)?;
        let area = sphere_area(params.n);
        let nm1 = params.nf() - 1.0;
        let wt_omega = composite_weights(&omega)?;
        let spectral_weights = omega
            .iter()
            .zip(&wt_omega)
            .map(|(&o, &w)| area * w * o.powf(2.0 * params.s + nm1))
            .collect();
        let wt_r = composite_weights(&r_grid)?;
        let weight = |pow: f64| -> Vec<f64> {
            r_grid
                .iter()
                .zip(&wt_r)
                .map(|(&r, &w)| area * w * r.powf(pow + nm1))
                .collect()
        };
        Ok(RadialWholeSpace {
            params: *params,
            lower_weights: weight(params.a),
            constraint_weights: weight(params.b),
            r_grid,
            plan,
            spectral_weights,
        })
    }

    pub fn r_grid(&self) -> &[f64] {
        &self.r_grid
    }

    fn transform_values(&self, u: &[f64]) -> Vec<f64> {
        let profile = RadialProfile::new(self.r_grid.clone(), u.to_vec(), self.params.n)
            .expect("solver vectors are finite");
        self.plan.apply_unchecked(&profile).values().to_vec()
    }

    pub fn gagliardo_sq(&self, u: &[f64]) -> f64 {
        let uhat = self.transform_values(u);
        uhat.iter().zip(&self.spectral_weights).map(|(v, w)| w * v * v).sum()
    }
}

impl VariationalProblem for RadialWholeSpace {
    fn dof(&self) -> usize {
        self.r_grid.len()
    }

    fn energy(&self, u: &[f64]) -> f64 {
        let q = self.params.q;
        let lower: f64 =
            u.iter().zip(&self.lower_weights).map(|(v, w)| w * v.abs().powf(q)).sum();
        self.gagliardo_sq(u) + lower
    }

    fn energy_gradient(&self, u: &[f64]) -> Vec<f64> {
        // d/du of Σ w_k (Hu)_k² is 2 Hᵀ (w ⊙ Hu).
        let uhat = self.transform_values(u);
        let weighted: Vec<f64> =
            uhat.iter().zip(&self.spectral_weights).map(|(v, w)| w * v).collect();
        let weighted_profile =
            RadialProfile::new(self.plan.target_grid().to_vec(), weighted, self.params.n)
                .expect("finite");
        // Hᵀ applied through the same kernel: build the transpose action by
        // applying the plan row-wise.
        let mut grad = self.plan.apply_transpose(weighted_profile.values());
        let q = self.params.q;
        for ((g, v), w) in grad.iter_mut().zip(u).zip(&self.lower_weights) {
            *g = 2.0 * *g + w * q * v.abs().powf(q - 2.0) * v;
        }
        grad
    }

    fn constraint(&self, u: &[f64]) -> f64 {
        let p = self.params.p;
        u.iter().zip(&self.constraint_weights).map(|(v, w)| w * v.max(0.0).powf(p)).sum()
    }

    fn constraint_gradient(&self, u: &[f64]) -> Vec<f64> {
        let p = self.params.p;
        u.iter()
            .zip(&self.constraint_weights)
            .map(|(v, w)| w * p * v.max(0.0).powf(p - 1.0))
            .collect()
    }

    fn constraint_degree(&self) -> f64 {
        self.params.p
    }

    fn project(&self, u: &mut [f64], _radial: bool) {
        for v in u.iter_mut() {
            *v = v.max(0.0);
        }
    }
}

/// Whole-space radial ground state m(∞) on the truncated domain [0, L].
///
/// After the solve, the radial decay bound with the profile's own empirical
/// constant is evaluated at L; if the predicted bound there exceeds 1e-6 of
/// the profile peak the result is flagged truncation-suspect.
pub fn solve_whole_space(
    params: &ProblemParams,
    l: f64,
    spec: &RadialGridSpec,
    opts: &SolveOptions,
) -> Result<MinimizationResult> {
    if !(params.s > 0.5 && params.s < 1.0) {
        return Err(Error::domain(format!(
            "whole-space solver requires 1/2 < s < min(1, n/2), got s = {}",
            params.s
        )));
    }
    let problem = RadialWholeSpace::assemble(params, l, spec)?;
    let start: Vec<f64> = problem.r_grid().iter().map(|&r| (-r * r / 2.0).exp()).collect();
    let solve = minimize(&problem, &start, true, opts)?;

    let profile = RadialProfile::new(problem.r_grid().to_vec(), solve.values.clone(), params.n)?;
    let peak = profile.max_abs();
    // Decay check at the truncation radius: the profile must have come down
    // to 1e-6 of its peak over the outer tenth of the domain, otherwise the
    // artificial boundary is still felt. (Minimizers of the nonlocal
    // quotient have algebraic tails ~ r^{-(n+2s)}, so this dictates how
    // large L must be.)
    let tail_peak = profile
        .radii()
        .iter()
        .zip(profile.values())
        .filter(|(&r, _)| r >= 0.9 * l)
        .map(|(_, &v)| v.abs())
        .fold(0.0f64, f64::max);
    let truncation_suspect = tail_peak > 1e-6 * peak;

    Ok(MinimizationResult {
        minimizer: Minimizer::Radial(profile),
        level: solve.level,
        multiplier: solve.multiplier,
        constraint_residual: solve.constraint_residual,
        nonradiality: None,
        iters: solve.iters,
        converged: solve.converged,
        start_levels: vec![solve.level],
        winning_start: 0,
        trace: solve.trace,
        truncation_suspect,
    })
}
