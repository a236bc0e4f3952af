//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured numbers (run with `--nocapture` to see them). Tolerances are
//! pinned here, not tuned elsewhere.
//!
//! Criterion 7's slope clause is evaluated exactly as stated and is expected
//! red at the pinned translation window; see that test for the measured
//! transient analysis and the large-translation verification of the same
//! decay mechanism.

use fraclab::config::RunConfig;
use fraclab::experiments::{
    bump_decay, cutoff_convergence, gn_survey, strauss_survey, sweep_radii, FamilySpec,
    GridPolicy,
};
use fraclab::grid::{GagliardoMode, GridEnergy, GridFunction};
use fraclab::params::{exact, exponents, optimize_two_term, validate, ProblemParams};
use fraclab::quadrature::{
    composite_weights, dense_coarse_grid, geometric_uniform_grid, standard_bump, uniform_grid,
};
use fraclab::radial::{
    band_limited_family, gaussian_profile, sphere_area, strauss_ratio_with, HankelPlan,
    RadialProfile, Spectral,
};
use fraclab::solver::{solve_whole_space, RadialGridSpec, SolveOptions};
use num_rational::Rational64 as Q;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn reference() -> ProblemParams {
    ProblemParams::reference()
}

#[test]
fn c01_exponent_reductions() {
    // σ(n, s=1, q=2, a=0) = (n-1)/2 exactly, in rational arithmetic.
    for n in 2..=10i64 {
        let sigma = exact::sigma(n, Q::from_integer(1), Q::from_integer(2), Q::from_integer(0));
        assert_eq!(sigma, Q::new(n - 1, 2), "criterion 1: sigma reduction failed at n = {n}");
    }
    // θ(s, q=2) = 1/(2s) exactly for s in {3/5, 3/4, 9/10}.
    for (num, den) in [(3i64, 5i64), (3, 4), (9, 10)] {
        let s = Q::new(num, den);
        let theta = exact::theta(s, Q::from_integer(2));
        assert_eq!(
            theta,
            (Q::from_integer(2) * s).recip(),
            "criterion 1: theta reduction failed at s = {num}/{den}"
        );
    }
    // The f64 path agrees with the rational path at the reference config.
    let e = exponents(&reference()).unwrap();
    assert!((e.sigma - 7.0 / 12.0).abs() < 1e-15);
    assert!((e.theta - 2.0 / 3.0).abs() < 1e-15);
    println!("criterion 01 (exponent reductions): PASS — sigma=(n-1)/2 for n=2..10, theta=1/(2s) exact");
}

#[test]
fn c02_transform_suite() {
    let r = geometric_uniform_grid(2048, 1e-3, 0.5, 48.0);
    let w = fraclab::radial::default_omega_grid();
    let fwd = HankelPlan::new(&r, &w, 2).unwrap();
    let inv = HankelPlan::new(&w, &r, 2).unwrap();
    let r_mass = composite_weights(&r).unwrap();
    let w_mass = composite_weights(&w).unwrap();
    let area = sphere_area(2);
    let l2 = |p: &RadialProfile, grid: &[f64], ws: &[f64]| -> f64 {
        (area
            * grid
                .iter()
                .zip(ws)
                .zip(p.values())
                .map(|((&x, &wt), &v)| wt * x * v * v)
                .sum::<f64>())
        .sqrt()
    };

    let mut worst_plancherel = 0.0f64;
    let mut worst_round_trip = 0.0f64;
    for (i, u) in band_limited_family(&r, 2, 0..10).iter().enumerate() {
        let uhat = fwd.apply(u).unwrap();
        let nu = l2(u, &r, &r_mass);
        let nhat = l2(&uhat, &w, &w_mass);
        let plancherel = (nu - nhat).abs() / nu;
        worst_plancherel = worst_plancherel.max(plancherel);
        assert!(plancherel <= 1e-6, "criterion 2: Plancherel {plancherel:.2e} at member {i}");

        let back = inv.apply(&uhat).unwrap();
        let mut diff = back.clone();
        for (d, orig) in diff.values_mut().iter_mut().zip(u.values()) {
            *d -= orig;
        }
        let rt = l2(&diff, &r, &r_mass) / nu;
        worst_round_trip = worst_round_trip.max(rt);
        assert!(rt <= 1e-6, "criterion 2: round trip {rt:.2e} at member {i}");
    }

    // Gaussian fixed point.
    let rg = uniform_grid(1024, 20.0);
    let wg = uniform_grid(512, 8.0);
    let gauss = RadialProfile::from_fn(&rg, 2, |r| (-r * r / 2.0).exp()).unwrap();
    let ghat = HankelPlan::new(&rg, &wg, 2).unwrap().apply(&gauss).unwrap();
    // Relative to the unit peak of the fixed point.
    let mut worst_gauss = 0.0f64;
    for (rho, v) in ghat.radii().iter().zip(ghat.values()) {
        let expect = (-rho * rho / 2.0).exp();
        worst_gauss = worst_gauss.max((v - expect).abs());
    }
    assert!(worst_gauss <= 1e-6, "criterion 2: Gaussian fixed point {worst_gauss:.2e}");

    println!(
        "criterion 02 (transform suite): PASS — plancherel {worst_plancherel:.2e}, round trip {worst_round_trip:.2e}, gaussian {worst_gauss:.2e}"
    );
}

#[test]
fn c03_cross_method_energy() {
    let params = reference();
    // Spectral reference on fine radial grids.
    let r = uniform_grid(2048, 16.0);
    let w = dense_coarse_grid(1025, 8.0, 1343, 92.0);
    let plan = HankelPlan::new(&r, &w, 2).unwrap();
    let wts = composite_weights(&w).unwrap();
    let spectral_sq = |width: f64| -> f64 {
        let u = RadialProfile::from_fn(&r, 2, |rr| standard_bump(rr / width)).unwrap();
        let uhat = plan.apply(&u).unwrap();
        sphere_area(2)
            * w.iter()
                .zip(&wts)
                .zip(uhat.values())
                .map(|((&o, &wt), &v)| wt * o.powf(2.0 * params.s) * o * v * v)
                .sum::<f64>()
    };

    let op = GridEnergy::assemble(128, 1.0 / 16.0, 4.0, &params).unwrap();
    let mut worst_cross = 0.0f64;
    let mut worst_modes = 0.0f64;
    for width in [0.7, 0.85, 1.0] {
        let reference_sq = spectral_sq(width);
        let u = GridFunction::from_fn(128, 1.0 / 16.0, 4.0, |x, y| {
            standard_bump((x * x + y * y).sqrt() / width)
        })
        .unwrap();
        let direct = op.gagliardo_sq(&u, GagliardoMode::Direct).unwrap();
        let conv = op.gagliardo_sq(&u, GagliardoMode::Convolution).unwrap();
        let modes = op.verify_modes(&u).unwrap();
        worst_modes = worst_modes.max(modes);
        assert!(modes <= 1e-10, "criterion 3: mode disagreement {modes:.2e} at width {width}");
        for (label, grid_sq) in [("direct", direct), ("convolution", conv)] {
            let rel = (grid_sq / reference_sq - 1.0).abs();
            worst_cross = worst_cross.max(rel);
            assert!(
                rel <= 0.02,
                "criterion 3: {label} vs spectral {rel:.4} at width {width}"
            );
        }
    }
    println!(
        "criterion 03 (cross-method energy): PASS — worst grid/spectral deviation {worst_cross:.4}, direct-vs-convolution {worst_modes:.2e}"
    );
}

#[test]
fn c04_gradient_oracle() {
    let params = reference();
    let op = GridEnergy::assemble(64, 1.0 / 8.0, 4.0, &params).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst = 0.0f64;
    for pair in 0..10 {
        let mut u = GridFunction::zeros(64, 1.0 / 8.0, 4.0).unwrap();
        u.update(|_, _| rng.random_range(0.05..1.0));
        let mut v = GridFunction::zeros(64, 1.0 / 8.0, 4.0).unwrap();
        v.update(|_, _| rng.random_range(-1.0..1.0));

        let g = op.gradient(&u).unwrap();
        let pairing: f64 = g.values().iter().zip(v.values()).map(|(a, b)| a * b).sum();
        let eps = 1e-5;
        let mut up = u.clone();
        up.update(|idx, val| val + eps * v.values()[idx]);
        let mut um = u.clone();
        um.update(|idx, val| val - eps * v.values()[idx]);
        let fd = (op.energy(&up).unwrap().energy - op.energy(&um).unwrap().energy) / (2.0 * eps);
        let rel = ((pairing - fd) / fd).abs();
        worst = worst.max(rel);
        assert!(rel <= 1e-5, "criterion 4: pair {pair}: gradient vs FD rel {rel:.2e}");
    }
    println!("criterion 04 (gradient oracle): PASS — worst relative deviation {worst:.2e} over 10 pairs");
}

#[test]
fn c05_strauss_invariances() {
    let params = reference();
    let r = geometric_uniform_grid(2048, 1e-3, 0.5, 64.0);
    let w = dense_coarse_grid(1025, 8.0, 1023, 64.0);
    let spectral = Spectral::new(&r, &w, 2).unwrap();

    // Amplitude scaling: exact 1-homogeneity.
    let u = gaussian_profile(&r, 2, 1.0);
    let base = strauss_ratio_with(&spectral, &u, &params).unwrap();
    let mut worst_amp = 0.0f64;
    for c in [1e-3, 0.2, 5.0, 4e3] {
        let ratio = strauss_ratio_with(&spectral, &u.scaled(c), &params).unwrap();
        worst_amp = worst_amp.max((ratio / base - 1.0).abs());
    }
    assert!(worst_amp <= 1e-12, "criterion 5: amplitude invariance {worst_amp:.2e}");

    // Dilation u(λ·) at λ in {1/2, 2, 4}: exact analytic resampling.
    let mut worst_dilation = 0.0f64;
    for lambda in [0.5, 2.0, 4.0] {
        let dilated = gaussian_profile(&r, 2, 1.0 / lambda);
        let ratio = strauss_ratio_with(&spectral, &dilated, &params).unwrap();
        worst_dilation = worst_dilation.max((ratio / base - 1.0).abs());
    }
    assert!(worst_dilation <= 1e-3, "criterion 5: dilation invariance {worst_dilation:.2e}");

    // Family max stable under grid refinement x2.
    let family = FamilySpec::default();
    let coarse = strauss_survey(&params, &family).unwrap().max_ratio;
    let fine = {
        let r2 = geometric_uniform_grid(4096, 1e-3, 0.5, 64.0);
        let spectral2 = Spectral::new(&r2, &w, 2).unwrap();
        let members = family.build(&r2, 2);
        members
            .iter()
            .map(|(_, u)| strauss_ratio_with(&spectral2, u, &params).unwrap())
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let drift = (fine / coarse - 1.0).abs();
    assert!(coarse.is_finite() && fine.is_finite());
    assert!(drift <= 0.10, "criterion 5: family max drift {drift:.4} under refinement");

    println!(
        "criterion 05 (strauss invariances): PASS — amplitude {worst_amp:.2e}, dilation {worst_dilation:.2e}, family max {coarse:.4} (drift {drift:.4} under x2 refinement)"
    );
}

#[test]
fn c06_headline_symmetry_breaking() {
    let params = reference();
    assert!(validate(&params).passed(), "criterion 6: reference config must be admissible");
    let opts = SolveOptions::default();
    let r_list = [1.0, 2.0, 4.0, 8.0, 16.0, 24.0];
    let sweep =
        sweep_radii(&params, &r_list, GridPolicy::default_sweep(), 64.0, &opts).unwrap();

    // (i) Set inclusion row by row.
    for row in &sweep.rows {
        assert!(
            row.full_level <= row.radial_level + 1e-6,
            "criterion 6(i): M > m at R = {}",
            row.radius
        );
    }
    // (ii) M nonincreasing within 2x solver tolerance.
    for pair in sweep.rows.windows(2) {
        assert!(
            pair[1].full_level <= pair[0].full_level + 2.0 * opts.grad_tol,
            "criterion 6(ii): M increased from R={} to R={}",
            pair[0].radius,
            pair[1].radius
        );
    }
    // (iii) Gap, nonradiality, and interior positivity at R = 24, with the
    // stated escalation to R = 32 and/or b = 1.25 before declaring failure.
    let mut last = *sweep.rows.last().unwrap();
    let mut escalated = String::new();
    if !(last.relative_gap >= 0.05 && last.nonradiality >= 0.1 && last.full_interior_min > 0.0) {
        let extended = sweep_radii(
            &params,
            &[32.0],
            GridPolicy::default_sweep(),
            64.0,
            &opts,
        )
        .unwrap();
        last = extended.rows[0];
        escalated = " (escalated to R = 32)".into();
    }
    assert!(last.relative_gap >= 0.05, "criterion 6(iii): relative gap {}", last.relative_gap);
    assert!(last.nonradiality >= 0.1, "criterion 6(iii): nonradiality {}", last.nonradiality);
    assert!(
        last.full_interior_min > 0.0,
        "criterion 6(iii): interior minimum {} not strictly positive",
        last.full_interior_min
    );
    // (iv) The radial level has reached its whole-space limit within 10%.
    let m24 = sweep.rows.last().unwrap().radial_level;
    let minf = sweep.whole_space_level;
    let plateau = (m24 / minf - 1.0).abs();
    assert!(plateau <= 0.10, "criterion 6(iv): m(24) = {m24} vs m(inf) = {minf}");

    println!(
        "criterion 06 (headline symmetry breaking): PASS{escalated} — rel gap {:.4}, nonradiality {:.4}, interior min {:.3e}, m(24)/m(inf)-1 = {:+.4}",
        last.relative_gap, last.nonradiality, last.full_interior_min, m24 / minf - 1.0
    );
}

#[test]
fn c07_translated_bump_decay() {
    let params = reference();

    // Seminorm translation invariance: the quotient reuses one seminorm for
    // every translation; a fresh assembly of the same geometry reproduces it
    // to 1e-10.
    let op1 = GridEnergy::assemble(256, 4.0 / 256.0, 2.0, &params).unwrap();
    let op2 = GridEnergy::assemble(256, 4.0 / 256.0, 2.0, &params).unwrap();
    let bump = GridFunction::from_fn(256, 4.0 / 256.0, 2.0, |x, y| {
        standard_bump((x * x + y * y).sqrt())
    })
    .unwrap();
    let sq1 = op1.gagliardo_sq(&bump, GagliardoMode::Convolution).unwrap();
    let sq2 = op2.gagliardo_sq(&bump, GagliardoMode::Convolution).unwrap();
    let invariance = (sq1 - sq2).abs() / sq1;
    assert!(invariance <= 1e-10, "criterion 7: seminorm invariance {invariance:.2e}");

    // Quotient below the explicit bound for every t.
    let result = bump_decay(&params, &[4.0, 8.0, 16.0, 32.0]).unwrap();
    for row in &result.rows {
        assert!(
            row.quotient <= row.upper_bound,
            "criterion 7: quotient above bound at t = {}",
            row.t
        );
    }

    // Decay-mechanism verification: in the asymptotic regime the fitted
    // slope reaches a - 2b/p (the transient analysis below shows why the
    // pinned window cannot).
    let asymptotic = bump_decay(&params, &[4096.0, 8192.0, 16384.0, 32768.0]).unwrap();
    let asym_err = (asymptotic.fitted_slope / asymptotic.predicted_slope - 1.0).abs();
    assert!(
        asym_err <= 0.15,
        "criterion 7: asymptotic slope {} vs predicted {}",
        asymptotic.fitted_slope,
        asymptotic.predicted_slope
    );

    // The slope clause exactly as stated: fitted log-log slope over
    // t in {4, 8, 16, 32} within 15% of a - 2b/p = -1/6.
    let slope_err = (result.fitted_slope / result.predicted_slope - 1.0).abs();
    println!(
        "criterion 07 (translated-bump decay): invariance {invariance:.2e} PASS, bound PASS, \
         asymptotic slope {:.4} (err {asym_err:.3}) PASS; pinned-window slope {:.4} vs {:.4} (err {slope_err:.2})",
        asymptotic.fitted_slope, result.fitted_slope, result.predicted_slope
    );
    assert!(
        slope_err <= 0.15,
        "criterion 7: FAIL (expected): fitted slope {:.4} over t = {{4,8,16,32}} is not within 15% of {:.4}. \
         The quotient numerator is [u]^2 + integral(|x|^a u_t^2): the seminorm term {:.4} is pinned by \
         translation invariance while the weighted term grows only like t^a with a = 1/2, so the two stay \
         comparable throughout the pinned window and the measured slope reflects the transient, not the \
         decay rate; the crossover sits near t ~ 1e3 for this bump. The same fit over t = {{4096..32768}} \
         gives {:.4}, within 15% of the predicted rate, confirming the decay mechanism at the stated \
         tolerance.",
        result.fitted_slope,
        result.predicted_slope,
        result.seminorm_sq,
        asymptotic.fitted_slope
    );
}

#[test]
fn c08_cutoff_convergence() {
    let params = reference();
    let grid = geometric_uniform_grid(1024, 1e-3, 0.5, 48.0);

    // Strictly decreasing error for the Gaussian, ending below 1e-4 of the
    // norm.
    let gauss = gaussian_profile(&grid, 2, 1.0);
    let res = cutoff_convergence(&gauss, &params, &[1.0, 2.0, 3.0, 4.0, 6.0, 8.0]).unwrap();
    for pair in res.rows.windows(2) {
        assert!(
            pair[1].error < pair[0].error,
            "criterion 8: error not strictly decreasing at R = {}",
            pair[1].radius
        );
    }
    let final_rel = res.rows.last().unwrap().error / res.norm;
    assert!(final_rel <= 1e-4, "criterion 8: final error {final_rel:.2e} of the norm");

    // Exact zero once the support sits inside B_{R/2}.
    let bump = fraclab::radial::bump_profile(&grid, 2, 1.0);
    let res_bump = cutoff_convergence(&bump, &params, &[2.0, 4.0, 8.0]).unwrap();
    for row in &res_bump.rows {
        assert_eq!(row.error, 0.0, "criterion 8: compact-support case at R = {}", row.radius);
    }
    println!(
        "criterion 08 (cut-off convergence): PASS — strictly decreasing, final error {final_rel:.2e} of the norm, compact-support case exactly zero"
    );
}

#[test]
fn c09_gn_survey() {
    let params = reference();
    // η at the reference config equals the hand-derived 1/4 to 1e-12.
    let e = exponents(&params).unwrap();
    assert!(
        (e.eta - 0.25).abs() <= 1e-12,
        "criterion 9: eta = {} vs hand-derived 0.25",
        e.eta
    );
    assert_eq!(exact::eta(2, Q::new(3, 4), Q::from_integer(3), Q::from_integer(2), Q::new(1, 2), Q::from_integer(1)), Q::new(1, 4));

    let survey = gn_survey(&params, &FamilySpec::default()).unwrap();
    for row in &survey.rows {
        assert!(row.ok && row.ratio.is_finite(), "criterion 9: member {} not finite", row.member);
    }

    // Dilation drift <= 5% across λ in {1/4, 1, 4}.
    let r = geometric_uniform_grid(2048, 1e-3, 0.5, 64.0);
    let w = dense_coarse_grid(1025, 8.0, 1023, 64.0);
    let spectral = Spectral::new(&r, &w, 2).unwrap();
    let ratio_of = |width: f64| -> f64 {
        let u = gaussian_profile(&r, 2, width);
        let lhs = spectral.weighted_norm(&u, params.p, params.b).unwrap();
        let sem = spectral.gagliardo(&u, params.s).unwrap();
        let wn = spectral.weighted_norm(&u, params.q, params.a).unwrap();
        lhs / (sem.powf(e.eta) * wn.powf(1.0 - e.eta))
    };
    let ratios = [ratio_of(4.0), ratio_of(1.0), ratio_of(0.25)];
    let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let drift = (max - min) / min;
    assert!(drift <= 0.05, "criterion 9: dilation drift {drift:.4}");

    println!(
        "criterion 09 (interpolation survey): PASS — eta = 0.25 exactly, {} finite ratios, max {:.4}, dilation drift {drift:.4}",
        survey.rows.len(),
        survey.max_ratio
    );
}

#[test]
fn c10_two_term_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..100 {
        let c1 = rng.random_range(1e-3..1e3f64);
        let c2 = rng.random_range(1e-3..1e3f64);
        let e1 = rng.random_range(0.05..4.0f64);
        let e2 = rng.random_range(0.05..4.0f64);
        let opt = optimize_two_term(c1, c2, e1, e2).unwrap();
        // Brute-force sampling oracle on [λ0/100, 100 λ0].
        for i in 0..100 {
            let t = i as f64 / 99.0;
            let lam = opt.lambda0 * 100f64.powf(2.0 * t - 1.0);
            let f = c1 * lam.powf(e1) + c2 * lam.powf(-e2);
            assert!(
                opt.fmin <= f * (1.0 + 1e-12),
                "criterion 10: case {case}: f({lam}) = {f} below fmin = {}",
                opt.fmin
            );
        }
    }
    println!("criterion 10 (two-term minimum): PASS — global minimality over 100 random tuples x 100 samples");
}

#[test]
fn acceptance_config_is_the_reference_config() {
    // The sweep and survey defaults used above are exactly the reference
    // configuration shipped with the binary.
    let cfg = RunConfig::reference();
    assert_eq!(cfg.params, reference());
    assert_eq!(cfg.r_list, vec![1.0, 2.0, 4.0, 8.0, 16.0, 24.0]);
    assert_eq!(cfg.t_list, vec![4.0, 8.0, 16.0, 32.0]);
    assert_eq!(RadialGridSpec::default().points, 768);
}
