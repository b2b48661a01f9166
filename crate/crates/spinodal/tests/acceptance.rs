//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Run with `cargo test --test acceptance -- --nocapture --test-threads=1`
//! to see the lines in order.

mod common;

use spinodal::classify::{
    self, CoupledParams, EntropyCoupling, ModelParams, SymmetryClass, TransitionType,
};
use spinodal::domain::{DomainSpec, ModeIndex};
use spinodal::phase;
use spinodal::reduced::{self, ReducedSystem, Stability};
use spinodal::solver::{
    self, InitialCondition, RowStatus, RunParams, SolverConfig, Stabilization, SweepOptions,
};
use std::f64::consts::PI;
use std::time::Instant;

fn p(lambda: f64, g2: f64, g3: f64) -> ModelParams {
    ModelParams::new(lambda, g2, g3).unwrap()
}

fn line_domain(grid: usize) -> DomainSpec {
    DomainSpec::rectangular(&[PI], grid).unwrap()
}

fn steady_config(dt: f64) -> SolverConfig {
    SolverConfig {
        dt,
        stabilization: Stabilization::Auto,
        dealias: false,
        steady_tol: 1e-9,
        max_time: 1e4,
        initial: InitialCondition::SeededMode { amplitude: 1e-4, perturbation: 1e-6, seed: 1 },
    }
}

/// Criterion 1: threshold reproduction (classifier flips exactly at
/// gamma3 = 2 for m=1 and 26/3 for m=2 with L=pi, gamma2=3) and matching
/// branch behaviour of the full equation, in under five minutes.
#[test]
fn acceptance_01_threshold_reproduction() {
    let start = Instant::now();
    // classifier flips
    for (m, threshold) in [(1usize, 2.0), (2, 26.0 / 3.0)] {
        let above = classify::classify_rectangular(&p(1.0, 3.0, threshold + 1e-6), PI, m).unwrap();
        let below = classify::classify_rectangular(&p(1.0, 3.0, threshold - 1e-6), PI, m).unwrap();
        let tie = classify::classify_rectangular(&p(1.0, 3.0, threshold), PI, m).unwrap();
        assert_eq!(above.transition_type, TransitionType::TypeI, "m={m}");
        assert_eq!(below.transition_type, TransitionType::TypeII, "m={m}");
        assert_eq!(tie.transition_type, TransitionType::AtThreshold, "m={m}");
        assert!((above.threshold_gamma3.unwrap() - threshold).abs() < 1e-12);
    }

    // continuous branch: gamma3 = 3 (Type-I), amplitudes bounded by the
    // square-root law for lambda - lambda0 <= 0.05
    let domain = line_domain(64);
    let params = RunParams::Classic(p(1.0, 3.0, 3.0));
    let config = steady_config(0.2);
    let lambdas: Vec<f64> = (1..=5).map(|i| 1.0 + 0.01 * i as f64).collect();
    let branch =
        solver::sweep_branch(&domain, &params, &lambdas, &config, &SweepOptions::default())
            .unwrap();
    let sigma0 = classify::sigma1_at_criticality(&p(1.0, 3.0, 3.0), PI);
    let coeff = (2.0 / sigma0).sqrt();
    for row in &branch.rows {
        assert_eq!(row.status, RowStatus::Converged, "lambda={}", row.lambda);
        let amp = row.amplitudes.iter().cloned().fold(0.0f64, |m, v| m.max(v.abs()));
        let bound = 2.0 * coeff * (row.lambda - 1.0).sqrt();
        assert!(amp < bound, "amp {amp} vs bound {bound} at lambda {}", row.lambda);
        assert!(amp > 0.01, "branch did not leave zero at lambda {}", row.lambda);
    }

    // jump branch: gamma3 = 1 (Type-II), amplitude above 0.3 just past onset
    let params = RunParams::Classic(p(1.01, 3.0, 1.0));
    let config = steady_config(0.05);
    let mut state = solver::init_state(&domain, &params, &config).unwrap();
    let outcome = solver::run_to_steady(&mut state, &params, &config).unwrap();
    assert_eq!(outcome.status, solver::SteadyStatus::Converged);
    let amp = state.u.amplitude(&ModeIndex::cosine(&[1])).unwrap().abs();
    assert!(amp > 0.3, "jump amplitude {amp} <= 0.3");

    // the far branch is confirmed by the independent Galerkin-Newton oracle
    let oracle = common::Galerkin1d { length: PI, gamma2: 3.0, gamma3: 1.0, lambda: 1.01, n_modes: 32 };
    let branches = oracle.branch_amplitudes();
    let far = branches
        .iter()
        .map(|a| a[0].abs())
        .filter(|a| (a - amp).abs() / amp < 0.05)
        .count();
    assert!(far > 0, "no Galerkin branch within 5% of the jumped amplitude {amp}");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "criterion 1 took {elapsed:?}");
    println!(
        "ACCEPTANCE 1 PASS: thresholds flip at 2 and 26/3; continuous/jump sweeps match \
         (jump amp {amp:.3}; {elapsed:.1?})"
    );
}

/// Criterion 2: the amplitude law at L=pi, gamma2=0, gamma3=2: converged
/// amplitude 0.1414 within 10% at lambda=1.03, with smaller relative error
/// at lambda=1.01.
#[test]
fn acceptance_02_amplitude_law() {
    let domain = line_domain(64);
    let mut errors = Vec::new();
    for lambda in [1.03, 1.01] {
        let params = RunParams::Classic(p(lambda, 0.0, 2.0));
        let config = SolverConfig { steady_tol: 1e-11, ..steady_config(0.1) };
        let mut state = solver::init_state(&domain, &params, &config).unwrap();
        let outcome = solver::run_to_steady(&mut state, &params, &config).unwrap();
        assert_eq!(outcome.status, solver::SteadyStatus::Converged);
        let amp = state.u.amplitude(&ModeIndex::cosine(&[1])).unwrap().abs();
        let predicted = (2.0 * (lambda - 1.0) / 3.0).sqrt();
        errors.push((amp - predicted).abs() / predicted);

        // cross-check against the independent Galerkin-Newton oracle
        let oracle =
            common::Galerkin1d { length: PI, gamma2: 0.0, gamma3: 2.0, lambda, n_modes: 32 };
        let sol = oracle.solve(&[predicted]).expect("oracle found no steady state");
        assert!((sol[0].abs() - amp).abs() < 1e-5, "PDE {amp} vs oracle {}", sol[0]);
    }
    assert!((errors[0] * 0.1414f64 / 0.1414) < 0.10, "error at 1.03 is {}", errors[0]);
    assert!(errors[1] < errors[0], "errors {errors:?} are not asymptotically consistent");
    println!(
        "ACCEPTANCE 2 PASS: amplitude 0.1414 matched within {:.2}% at lambda=1.03, \
         {:.2}% at 1.01",
        errors[0] * 100.0,
        errors[1] * 100.0
    );
}

/// Criterion 3: critical exponents. The continuous box branch fits
/// beta in [0.45, 0.55]; the quadratic-dominated scalar branch fits
/// beta in [0.9, 1.1]; a synthetic square-root law fits 0.5 to 1e-6.
#[test]
fn acceptance_03_critical_exponents() {
    // synthetic sanity
    let rows: Vec<solver::BranchRow> = (0..8)
        .map(|i| {
            let eps = 1e-3 * (100.0f64).powf(i as f64 / 7.0);
            solver::BranchRow {
                lambda: 1.0 + eps,
                temperature: None,
                amplitudes: vec![eps.sqrt()],
                energy: 0.0,
                mass: 0.0,
                status: RowStatus::Converged,
            }
        })
        .collect();
    let synthetic = solver::BifurcationBranch {
        lambda0: 1.0,
        tracked: vec![ModeIndex::cosine(&[1])],
        rows,
    };
    let fit = solver::fit_exponent(&synthetic, 1.0).unwrap();
    assert!((fit.beta - 0.5).abs() < 1e-6);

    // continuous box branch, swept downward so continuation tracks it
    let domain = line_domain(64);
    let params = RunParams::Classic(p(1.0, 0.0, 2.0));
    let config = steady_config(0.2);
    let lambdas: Vec<f64> = (0..8)
        .map(|i| 1.0 + 0.1 * (0.01f64).powf(i as f64 / 7.0))
        .collect();
    let branch =
        solver::sweep_branch(&domain, &params, &lambdas, &config, &SweepOptions::default())
            .unwrap();
    let fit = solver::fit_exponent(&branch, branch.lambda0).unwrap();
    assert!(
        (0.45..=0.55).contains(&fit.beta),
        "continuous-branch exponent {} outside [0.45, 0.55]",
        fit.beta
    );
    let beta_pde = fit.beta;

    // scalar normal form with a quadratic term: attractor branch is linear
    let (q, c) = (-2.0, -1.0);
    let rows: Vec<solver::BranchRow> = (0..8)
        .map(|i| {
            let lam = 1e-3 * (100.0f64).powf(i as f64 / 7.0);
            let system = ReducedSystem::scalar(lam, q, c);
            let roots = reduced::scalar_equilibria(&system).unwrap();
            // the branch connected to the origin
            let v = roots
                .iter()
                .cloned()
                .min_by(|a, b| a.abs().total_cmp(&b.abs()))
                .unwrap();
            solver::BranchRow {
                lambda: lam,
                temperature: None,
                amplitudes: vec![v],
                energy: 0.0,
                mass: 0.0,
                status: RowStatus::Converged,
            }
        })
        .collect();
    let scalar_branch = solver::BifurcationBranch {
        lambda0: 0.0,
        tracked: vec![ModeIndex::cosine(&[1])],
        rows,
    };
    let fit = solver::fit_exponent(&scalar_branch, 0.0).unwrap();
    assert!(
        (0.9..=1.1).contains(&fit.beta),
        "normal-form exponent {} outside [0.9, 1.1]",
        fit.beta
    );
    println!(
        "ACCEPTANCE 3 PASS: exponents beta = {:.3} (sqrt law) and {:.3} (linear law)",
        beta_pde, fit.beta
    );
}

/// Criterion 4: equilibrium inventory. 8 (m=2) and 26 (m=3) nonzero
/// equilibria confirmed by a 21^m multi-start Newton oracle; block-formula
/// eigenvalues match numerical ones to 1e-8; minimal attractors are 4
/// (m=2) and 8/6 (m=3) on the two sides of gamma3 = 22 L^2 g2^2 / (9 pi^2).
#[test]
fn acceptance_04_equilibrium_inventory() {
    // m=2 spec example
    let sys2 = ReducedSystem::rect(2, 3.0, 1.0, 2.0).unwrap();
    let inv2 = reduced::find_equilibria(&sys2).unwrap();
    assert_eq!(inv2.equilibria.len(), 8);
    let y_max = (3.0f64).sqrt();
    assert_eq!(common::multistart_equilibrium_count(&sys2, 21, 2.0 * y_max), 8);

    // m=3 from model coefficients (gamma2=1, gamma3=2, L=pi, lambda=1.05)
    let sys3 = reduced::build_reduced_system(
        &p(1.05, 1.0, 2.0),
        &reduced::ReducedDomain::Rectangular { length: PI, m: 3 },
        1.05,
        None,
    )
    .unwrap();
    let inv3 = reduced::find_equilibria(&sys3).unwrap();
    assert_eq!(inv3.equilibria.len(), 26);
    let y_max3 = (sys3.beta1 / sys3.cubic_self.min(sys3.cubic_cross)).sqrt();
    assert_eq!(common::multistart_equilibrium_count(&sys3, 21, 2.0 * y_max3), 26);

    // block-formula eigenvalues match the numerical ones at every seed
    for (sys, m) in [(&sys2, 2usize), (&sys3, 3)] {
        let inv = reduced::find_equilibria(sys).unwrap();
        for e in &inv.equilibria {
            let support = e.y.iter().filter(|v| v.abs() > 1e-9).count();
            let block = reduced::block_eigenvalues(sys, support).unwrap();
            for (a, b) in e.eigenvalues.iter().zip(&block) {
                assert!((a - b).abs() < 1e-8, "m={m}: eigen {a} vs block {b}");
            }
        }
    }

    // minimal attractors: m=2 always 4; m=3 flips 8 -> 6 across 22/9 c
    let count_attractors = |sys: &ReducedSystem| {
        reduced::find_equilibria(sys)
            .unwrap()
            .equilibria
            .iter()
            .filter(|e| e.stability == Stability::Attractor)
            .count()
    };
    assert_eq!(count_attractors(&sys2), 4);
    // gamma2 = 1, L = pi: 22 L^2 g2^2 / (9 pi^2) = 22/9 ~ 2.444
    let below = reduced::build_reduced_system(
        &p(1.05, 1.0, 2.0),
        &reduced::ReducedDomain::Rectangular { length: PI, m: 3 },
        1.05,
        None,
    )
    .unwrap();
    let above = reduced::build_reduced_system(
        &p(1.05, 1.0, 3.0),
        &reduced::ReducedDomain::Rectangular { length: PI, m: 3 },
        1.05,
        None,
    )
    .unwrap();
    let n_below = count_attractors(&below);
    let n_above = count_attractors(&above);
    assert_eq!(n_below, 8, "diagonal side");
    assert_eq!(n_above, 6, "axis side");
    // the stable classes are the full diagonals / the axes respectively
    let stable_class = |sys: &ReducedSystem| {
        reduced::find_equilibria(sys)
            .unwrap()
            .equilibria
            .into_iter()
            .find(|e| e.stability == Stability::Attractor)
            .map(|e| e.class)
    };
    assert_eq!(stable_class(&below), Some(SymmetryClass::FullDiagonal));
    assert_eq!(stable_class(&above), Some(SymmetryClass::Axis));
    println!(
        "ACCEPTANCE 4 PASS: inventories 8/26 confirmed by 21^m multistart; block eigenvalues \
         to 1e-8; minimal attractors 4 (m=2), {n_below}/{n_above} (m=3)"
    );
}

/// Criterion 5: straight-line orbits: exactly 8 verified orbits for m=2 and
/// 26 for m=3, field-parallelism residual < 1e-12.
#[test]
fn acceptance_05_straight_line_orbits() {
    // m=2 at criticality with sigma1 + sigma2 != 0
    let m2 = ReducedSystem::rect_from_sigmas(2, PI, 0.0, 4.0, 1.0).unwrap();
    let r2 = reduced::find_straight_line_orbits(&m2).unwrap();
    assert_eq!(r2.orbit_count, 8);
    assert!(r2.lines.iter().all(|l| l.parallelism_residual < 1e-12));

    // m=3 with sigma1 != sigma2
    let m3 = ReducedSystem::rect_from_sigmas(3, PI, 0.0, 4.0, 1.0).unwrap();
    let r3 = reduced::find_straight_line_orbits(&m3).unwrap();
    assert_eq!(r3.orbit_count, 26);
    assert!(r3.lines.iter().all(|l| l.parallelism_residual < 1e-12));
    println!("ACCEPTANCE 5 PASS: 8 and 26 line orbits verified, residual < 1e-12");
}

/// Criterion 6: conservation and dissipation over 20 randomized runs of
/// 1e4 steps: |mass| < 1e-10 (relative to the sup norm) throughout, free
/// energy non-increasing per step within 1e-8.
#[test]
fn acceptance_06_conservation_dissipation() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut domains: Vec<DomainSpec> = Vec::new();
    for _ in 0..12 {
        let l = rng.random_range(2.0..5.0);
        domains.push(DomainSpec::rectangular(&[l], 64).unwrap());
    }
    for _ in 0..4 {
        let l1 = rng.random_range(2.0..4.0);
        let l2 = rng.random_range(1.0..3.0);
        domains.push(DomainSpec::rectangular(&[l1, l2], 16).unwrap());
    }
    domains.push(DomainSpec::loop_domain(3.0, 16).unwrap());
    domains.push(DomainSpec::loop_domain(4.0, 16).unwrap());
    domains.push(DomainSpec::torus(2, 16).unwrap());
    domains.push(DomainSpec::torus(2, 16).unwrap());
    assert_eq!(domains.len(), 20);

    for (i, domain) in domains.iter().enumerate() {
        let lambda = rng.random_range(0.5..1.5);
        let gamma2 = rng.random_range(0.0..1.0);
        let gamma3 = rng.random_range(1.0..3.0);
        let params = RunParams::Classic(p(lambda, gamma2, gamma3));
        let config = SolverConfig {
            dt: 1e-3,
            initial: InitialCondition::Random { amplitude: 0.05, seed: 100 + i as u64 },
            ..Default::default()
        };
        let mut state = solver::init_state(domain, &params, &config).unwrap();
        let mut prev = solver::observables(&state, &params).unwrap().free_energy;
        let mut worst_mass = 0.0f64;
        for _ in 0..10_000 {
            solver::step(&mut state, &params, &config).unwrap();
            let obs = solver::observables(&state, &params).unwrap();
            assert!(
                obs.free_energy <= prev + 1e-8,
                "run {i}: energy rose {prev} -> {}",
                obs.free_energy
            );
            prev = obs.free_energy;
            let rel = obs.mass.abs() / state.u.max_abs_nodal().max(1e-30);
            worst_mass = worst_mass.max(rel);
        }
        assert!(worst_mass < 1e-10, "run {i}: mass drift {worst_mass}");
    }
    println!("ACCEPTANCE 6 PASS: 20 runs x 1e4 steps, mass < 1e-10, energy monotone to 1e-8");
}

/// Criterion 7: coupled consistency. With mu = 0, the coupled verdict
/// matches the classic one with gamma3' = gamma3 - a2 g1 / a1 over 100
/// random draws; with mu = 1 the decisive sigma is reproduced to 1e-12.
#[test]
fn acceptance_07_coupled_consistency() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    for draw in 0..100 {
        let length = rng.random_range(1.0..5.0);
        let m = if rng.random_bool(0.5) { 1 } else { 2 };
        let gamma2 = rng.random_range(-2.0..2.0);
        let alpha1 = rng.random_range(0.2..3.0);
        let alpha2 = rng.random_range(0.2..3.0);
        let gamma1 = rng.random_range(0.2..3.0);
        let shift = alpha2 * gamma1 / alpha1;
        let gamma3 = shift + rng.random_range(0.05..4.0);
        let coupled = CoupledParams {
            base: p(1.0, gamma2, gamma3),
            coupling: EntropyCoupling::new(0.0, alpha1, alpha2, gamma1).unwrap(),
        };
        let verdict_coupled = classify::classify_coupled(&coupled, length, m).unwrap();
        let verdict_plain =
            classify::classify_rectangular(&p(1.0, gamma2, gamma3 - shift), length, m).unwrap();
        assert_eq!(
            verdict_coupled.transition_type, verdict_plain.transition_type,
            "draw {draw}: L={length}, m={m}, g2={gamma2}, g3={gamma3}, shift={shift}"
        );
    }

    // mu = 1 sigma value to 1e-12
    let cp = CoupledParams {
        base: p(1.0, 0.0, 2.0),
        coupling: EntropyCoupling::new(1.0, 1.0, 1.0, 1.0).unwrap(),
    };
    let r = classify::classify_coupled(&cp, PI, 1).unwrap();
    assert!((r.sigma.unwrap() - 1.9).abs() < 1e-12);
    println!("ACCEPTANCE 7 PASS: 100/100 mu=0 verdicts agree; sigma(mu=1) = 1.9 to 1e-12");
}

/// Criterion 8: phase-diagram predictions. Critical length pi/sqrt(2) for
/// the unit material; T* >= T0 on a 50-point grid with equality at 1/2;
/// the metastable-band table matches an independent closed-form oracle.
#[test]
fn acceptance_08_phase_diagram() {
    let mat = phase::MaterialParams::unit();
    let l0 = phase::critical_length(&mat);
    assert!((l0 - PI / 2.0f64.sqrt()).abs() < 1e-12);

    // 50-point u0 grid including 1/2 exactly (the offset keeps the evenly
    // spaced points away from 1/2)
    let mut u0_grid: Vec<f64> = (0..49).map(|i| 0.04 + 0.9 * i as f64 / 48.0).collect();
    u0_grid.push(0.5);
    u0_grid.sort_by(|a, b| a.total_cmp(b));
    u0_grid.dedup();
    assert_eq!(u0_grid.len(), 50);

    for &u0 in &u0_grid {
        let m = mat.with_u0(u0).unwrap();
        let t0 = phase::lambda_sign_change_temperature(&m);
        let ts = phase::t_star(&m).unwrap().bisected;
        assert!(ts >= t0 * (1.0 - 1e-9), "T* < T0 at u0={u0}");
        // bisection against the independent closed form
        let closed = common::t_star_closed_form(1.0, 1.0, u0);
        assert!(
            (ts - closed).abs() < 1e-8 * closed,
            "T* bisection {ts} vs closed form {closed} at u0={u0}"
        );
        if (u0 - 0.5).abs() < 1e-12 {
            assert!((ts - t0).abs() < 1e-9, "band width {} at u0=1/2", ts - t0);
        }
    }

    // region table against the oracle at every grid point; the offset keeps
    // grid temperatures off the exact region boundaries
    let t_grid: Vec<f64> = (1..=24).map(|i| 0.0137 + 0.58 * i as f64 / 24.0).collect();
    let rows = phase::emit_diagram(&mat, &u0_grid, &t_grid).unwrap();
    for row in &rows {
        let t0 = 2.0 * row.u0 * (1.0 - row.u0); // a = R = 1
        let ts = common::t_star_closed_form(1.0, 1.0, row.u0);
        let expected = if row.t > ts {
            phase::PhaseRegion::Stable
        } else if row.t > t0 {
            phase::PhaseRegion::Metastable
        } else {
            phase::PhaseRegion::Unstable
        };
        assert_eq!(row.region, expected, "at (u0, T) = ({}, {})", row.u0, row.t);
    }
    println!(
        "ACCEPTANCE 8 PASS: L0 = pi/sqrt(2); T* >= T0 on 50 points (equality at 1/2); \
         {} table cells match the oracle",
        rows.len()
    );
}

/// Criterion 9: singularity torus. A converged steady state on the 2-torus
/// at gamma2 = 0 stays steady (residual < 10 * steady_tol) under 10 random
/// translations; a random field fails the same test by orders of magnitude.
#[test]
fn acceptance_09_torus_invariance() {
    use rand::{Rng, SeedableRng};
    let domain = DomainSpec::torus(2, 32).unwrap();
    let params = RunParams::Classic(p(1.5, 0.0, 1.0));
    let config = SolverConfig {
        dt: 0.02,
        steady_tol: 1e-9,
        max_time: 2e3,
        initial: InitialCondition::SeededMode { amplitude: 1e-4, perturbation: 1e-6, seed: 9 },
        ..Default::default()
    };
    let mut state = solver::init_state(&domain, &params, &config).unwrap();
    let outcome = solver::run_to_steady(&mut state, &params, &config).unwrap();
    assert_eq!(outcome.status, solver::SteadyStatus::Converged);
    let obs = solver::observables(&state, &params).unwrap();
    let amp = obs.amplitudes.iter().map(|(_, a)| a.abs()).fold(0.0f64, f64::max);
    assert!(amp > 0.1, "steady state is trivial (amp {amp})");

    // zero shift reproduces the converged residual
    let res0 = solver::torus_invariance_check(&state, &params, &[0.0, 0.0]).unwrap();
    assert!(res0 < config.steady_tol);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4242);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let shift = [
            rng.random_range(0.0..2.0 * PI),
            rng.random_range(0.0..2.0 * PI),
        ];
        let res = solver::torus_invariance_check(&state, &params, &shift).unwrap();
        worst = worst.max(res);
        assert!(res < 10.0 * config.steady_tol, "residual {res} after shift {shift:?}");
    }

    // negative control: a random field is far from steady
    let mut junk = solver::init_state(
        &domain,
        &params,
        &SolverConfig {
            initial: InitialCondition::Random { amplitude: 0.3, seed: 7 },
            ..config.clone()
        },
    )
    .unwrap();
    junk.t = 0.0;
    let res_junk = solver::residual_inf(&junk, &params).unwrap();
    assert!(res_junk > 1e3 * config.steady_tol, "negative control residual {res_junk}");
    println!(
        "ACCEPTANCE 9 PASS: 10 translated residuals <= {worst:.2e} < 10*tol; \
         negative control at {res_junk:.2e}"
    );
}

/// Criterion 10: determinism. The same configuration and seed produce
/// byte-identical reports and tables on repeated runs.
#[test]
fn acceptance_10_determinism() {
    let text = "\
[domain]
kind = rectangular
lengths = 3.141592653589793
grid = 16

[params]
lambda = 1.05
gamma2 = 0.5
gamma3 = 2.0

[solver]
dt = 0.01
max_time = 50.0
steady_tol = 1e-9

[sweep]
lambdas = 1.02, 1.04, 1.06
fit_exponent = false

[run]
seed = 42
";
    let run_once = |dir: &str| {
        let mut rc = spinodal::config::parse_config(spinodal::config::Subcommand::Sweep, text)
            .unwrap();
        rc.out_dir = dir.to_string();
        spinodal::cli::run(&rc).unwrap();
        let mut blobs = Vec::new();
        for name in ["report.txt", "branch.csv"] {
            blobs.push(std::fs::read(format!("{dir}/{name}")).unwrap());
        }
        blobs
    };
    let a = run_once("target/acceptance-determinism-a");
    let b = run_once("target/acceptance-determinism-b");
    assert_eq!(a, b, "outputs differ between identical runs");
    println!("ACCEPTANCE 10 PASS: byte-identical report and branch table across runs");
}
