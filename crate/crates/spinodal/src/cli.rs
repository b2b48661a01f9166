//! Subcommand dispatch and file output.
//!
//! `spinodal <classify|reduce|simulate|sweep|diagram> --config <path>
//! [--out <dir>] [--seed <u64>] [--jobs <n>]`
//!
//! Every run writes `report.txt` into the output directory (also on partial
//! failure), plus subcommand-specific CSV tables. Exit codes: 0 success,
//! 1 configuration error, 2 numerical failure.

use crate::classify::{self, TransitionReport};
use crate::config::{DomainConfig, RunConfig, Subcommand};
use crate::domain::{DomainKind, DomainSpec};
use crate::error::{Error, Result};
use crate::phase;
use crate::reduced;
use crate::report::{self, Report};
use crate::solver::{self, RunParams};
use std::path::{Path, PathBuf};

/// Parsed command line.
#[derive(Debug, Clone)]
pub struct CliArgs {
    pub subcommand: Subcommand,
    pub config_path: String,
    pub out_override: Option<String>,
    pub seed_override: Option<u64>,
    pub jobs_override: Option<usize>,
}

pub const USAGE: &str = "\
usage: spinodal <classify|reduce|simulate|sweep|diagram> --config <path>
                [--out <dir>] [--seed <u64>] [--jobs <n>]";

/// Parses the argument vector (without the program name).
pub fn parse_args(args: &[String]) -> Result<CliArgs> {
    let mut it = args.iter();
    let sub = it
        .next()
        .and_then(|s| Subcommand::parse(s))
        .ok_or_else(|| Error::InvalidParams(format!("missing or unknown subcommand\n{USAGE}")))?;
    let mut config_path = None;
    let mut out_override = None;
    let mut seed_override = None;
    let mut jobs_override = None;
    while let Some(flag) = it.next() {
        let mut value = || {
            it.next()
                .cloned()
                .ok_or_else(|| Error::InvalidParams(format!("flag {flag} needs a value\n{USAGE}")))
        };
        match flag.as_str() {
            "--config" => config_path = Some(value()?),
            "--out" => out_override = Some(value()?),
            "--seed" => {
                seed_override = Some(value()?.parse().map_err(|_| {
                    Error::InvalidParams("--seed needs an unsigned integer".into())
                })?)
            }
            "--jobs" => {
                jobs_override = Some(value()?.parse().map_err(|_| {
                    Error::InvalidParams("--jobs needs a positive integer".into())
                })?)
            }
            other => {
                return Err(Error::InvalidParams(format!("unknown flag '{other}'\n{USAGE}")));
            }
        }
    }
    Ok(CliArgs {
        subcommand: sub,
        config_path: config_path
            .ok_or_else(|| Error::InvalidParams(format!("--config is required\n{USAGE}")))?,
        out_override,
        seed_override,
        jobs_override,
    })
}

fn report_header(rc: &RunConfig) -> Report {
    let mut r = Report::new();
    r.push_str("tool.name", "spinodal");
    r.push_str("tool.version", env!("CARGO_PKG_VERSION"));
    r.push_str("run.subcommand", rc.subcommand.as_str());
    r.push_int("run.seed", rc.seed as i64);
    r.push_int("run.jobs", rc.jobs as i64);
    for (section, key, value) in &rc.echo {
        r.push_str(&format!("config.{section}.{key}"), value.clone());
    }
    r
}

fn push_transition(r: &mut Report, prefix: &str, t: &TransitionReport) {
    r.push_str(&format!("{prefix}.transition_type"), t.transition_type.as_str());
    r.push_opt_num(&format!("{prefix}.lambda_critical"), t.lambda_critical);
    r.push_opt_num(&format!("{prefix}.threshold_gamma3"), t.threshold_gamma3);
    r.push_opt_num(&format!("{prefix}.margin"), t.margin);
    r.push_opt_num(&format!("{prefix}.sigma"), t.sigma);
    r.push_opt_num(
        &format!("{prefix}.amplitude_coefficient"),
        t.predicted_amplitude_coefficient,
    );
    r.push_opt_num(&format!("{prefix}.type3_slope"), t.type3_slope);
    r.push_opt_num(&format!("{prefix}.critical_exponent"), t.critical_exponent);
    use classify::EquilibriumStructure as Es;
    let structure = match &t.predicted_equilibria {
        Es::TwoAttractors => "two attracting states +-u".to_string(),
        Es::SaddlePairBelow => {
            "two saddles below criticality; two saddle-node points".to_string()
        }
        Es::SphereInventory { m, equilibrium_count, minimal_attractors, stable_class } => {
            format!(
                "S^{} attractor with {equilibrium_count} equilibria; {minimal_attractors} minimal \
                 attractors{}",
                m - 1,
                stable_class.map(|c| format!(" of class {}", c.as_str())).unwrap_or_default()
            )
        }
        Es::SphereInventoryBothSides { m, equilibrium_count } => format!(
            "{equilibrium_count} equilibria on both sides of criticality (m={m}); saddle-node below"
        ),
        Es::CycleOfEquilibria => "circle of equilibria".to_string(),
        Es::CycleSeparationBelow => {
            "circle of equilibria separating below criticality".to_string()
        }
        Es::TorusInventory { n, tori } => {
            let parts: Vec<String> = tori
                .iter()
                .map(|(k, count, dim)| format!("k={k}: {count} tori of dim {dim}"))
                .collect();
            format!("S^{} attractor; singularity tori [{}]", 2 * n - 1, parts.join("; "))
        }
        Es::AtLeast2m { m } => format!("at least {} equilibria", 2 * m),
        Es::MixedPair => "one attractor (continuous sector), one saddle".to_string(),
        Es::EvenOrderUndecided { m } => {
            format!("jump-or-mixed at even order (m={m})")
        }
    };
    r.push_str(&format!("{prefix}.equilibria"), structure);
    for (i, note) in t.notes.iter().enumerate() {
        r.push_str(&format!("{prefix}.note.{i}"), note.clone());
    }
}

fn rect_longest_and_multiplicity(lengths: &[f64]) -> (f64, usize) {
    let lmax = lengths.iter().cloned().fold(f64::MIN, f64::max);
    let m = lengths
        .iter()
        .filter(|&&l| {
            // rho contribution pi^2/l^2 ties within the eigenvalue tolerance
            (lmax / l - 1.0).abs() < crate::domain::EIGENVALUE_TIE_TOL
        })
        .count();
    (lmax, m)
}

fn classify_for(rc: &RunConfig) -> Result<(TransitionReport, Option<f64>)> {
    let params = rc
        .params
        .as_ref()
        .ok_or_else(|| Error::InvalidParams("classification needs [params]".into()))?;
    let domain = rc
        .domain
        .as_ref()
        .ok_or_else(|| Error::InvalidParams("classification needs [domain]".into()))?;
    match domain {
        DomainConfig::General { m, a, rho1 } => {
            let base = params.base();
            let interaction = match a {
                Some(a) if *m == 1 => classify::QuadraticInteraction::SimpleIntegral(*a),
                _ => classify::QuadraticInteraction::IsolatedZero,
            };
            match classify::classify_general(base, *m, interaction)? {
                classify::GeneralVerdict::Classified(mut t) => {
                    t.lambda_critical = t.lambda_critical.or(*rho1);
                    Ok((t, None))
                }
                classify::GeneralVerdict::DeferredToCubic => Err(Error::InvalidParams(
                    "quadratic interaction degenerates; classify with the box analysis".into(),
                )),
            }
        }
        DomainConfig::Spec(spec) => {
            let t = match (&spec.kind, params) {
                (DomainKind::Rectangular { lengths }, RunParams::Classic(p)) => {
                    let (l, m) = rect_longest_and_multiplicity(lengths);
                    classify::classify_rectangular(p, l, m)?
                }
                (DomainKind::Rectangular { lengths }, RunParams::Coupled(cp)) => {
                    let (l, m) = rect_longest_and_multiplicity(lengths);
                    classify::classify_coupled(cp, l, m)?
                }
                (DomainKind::Loop { r0 }, RunParams::Classic(p)) => classify::classify_loop(p, *r0)?,
                (DomainKind::Torus { dim }, RunParams::Classic(p)) => {
                    classify::classify_whole_space(p, *dim)?
                }
                (_, RunParams::Coupled(_)) => {
                    return Err(Error::InvalidParams(
                        "entropy coupling is classified on rectangular domains".into(),
                    ))
                }
            };
            let lambda = params.base().lambda;
            Ok((t, Some(lambda)))
        }
    }
}

fn run_classify(rc: &RunConfig, r: &mut Report) -> Result<()> {
    let (t, lambda) = classify_for(rc)?;
    push_transition(r, "classification", &t);
    // amplitude predictions at the configured lambda, when meaningful
    if let (Some(lambda), Some(DomainConfig::Spec(spec)), Some(params)) =
        (lambda, rc.domain.as_ref(), rc.params.as_ref())
    {
        if t.transition_type == classify::TransitionType::TypeI
            && t.lambda_critical.map(|l0| lambda >= l0).unwrap_or(false)
        {
            let dom = match &spec.kind {
                DomainKind::Rectangular { lengths } => {
                    let (l, m) = rect_longest_and_multiplicity(lengths);
                    Some(classify::AmplitudeDomain::Rectangular { length: l, m })
                }
                DomainKind::Loop { r0 } => Some(classify::AmplitudeDomain::Loop { r0: *r0 }),
                DomainKind::Torus { .. } => None,
            };
            if let (Some(dom), RunParams::Classic(p)) = (dom, params) {
                for (i, pred) in classify::predict_amplitudes(p, &dom, lambda)?.iter().enumerate() {
                    r.push_str(&format!("amplitudes.{i}.class"), pred.class.as_str());
                    if let Some(count) = pred.count {
                        r.push_int(&format!("amplitudes.{i}.count"), count as i64);
                    }
                    r.push_num(&format!("amplitudes.{i}.value"), pred.amplitude);
                }
            }
        }
    }
    Ok(())
}

fn reduced_domain_of(spec: &DomainSpec) -> Result<reduced::ReducedDomain> {
    Ok(match &spec.kind {
        DomainKind::Rectangular { lengths } => {
            let (l, m) = rect_longest_and_multiplicity(lengths);
            reduced::ReducedDomain::Rectangular { length: l, m }
        }
        DomainKind::Loop { r0 } => reduced::ReducedDomain::Loop { r0: *r0 },
        DomainKind::Torus { dim } => reduced::ReducedDomain::WholeSpace { n: *dim },
    })
}

fn run_reduce(rc: &RunConfig, r: &mut Report, out: &Path) -> Result<()> {
    let spec = rc.reduce.clone().unwrap_or(crate::config::ReduceSpec {
        y0: None,
        t_end: 20.0,
        dt: 1e-2,
        scalar: None,
    });
    let system = if let Some((q, c)) = spec.scalar {
        let lambda = rc.params.as_ref().map(|p| p.base().lambda).unwrap_or(0.0);
        reduced::ReducedSystem::scalar(lambda, q, c)
    } else {
        let params = rc
            .params
            .as_ref()
            .ok_or_else(|| Error::InvalidParams("reduce needs [params] or scalar coefficients".into()))?;
        let domain = match rc.domain.as_ref() {
            Some(DomainConfig::Spec(s)) => s,
            _ => return Err(Error::InvalidParams("reduce needs a concrete [domain]".into())),
        };
        let rd = reduced_domain_of(domain)?;
        let (base, coupling) = match params {
            RunParams::Classic(p) => (p, None),
            RunParams::Coupled(cp) => (&cp.base, Some(&cp.coupling)),
        };
        reduced::build_reduced_system(base, &rd, base.lambda, coupling)?
    };

    r.push_num("reduced.beta1", system.beta1);
    r.push_num("reduced.cubic_self", system.cubic_self);
    r.push_num("reduced.cubic_cross", system.cubic_cross);
    r.push_num("reduced.quadratic", system.quadratic);
    r.push_int("reduced.dimension", system.dim() as i64);

    if let reduced::ReducedFamily::RectCubic { m } = system.family {
        let inventory = reduced::find_equilibria(&system)?;
        r.push_int("equilibria.count", inventory.equilibria.len() as i64);
        let attractors =
            inventory.equilibria.iter().filter(|e| e.stability == reduced::Stability::Attractor);
        r.push_int("equilibria.attractors", attractors.count() as i64);
        for (i, w) in inventory.warnings.iter().enumerate() {
            r.push_str(&format!("equilibria.warning.{i}"), w.clone());
        }
        report::write_equilibria_csv(&out.join("equilibria.csv"), &inventory.equilibria)?;
        r.push_str("files.equilibria", "equilibria.csv");

        if m >= 2 {
            let orbits = reduced::find_straight_line_orbits(&system)?;
            r.push_int("line_orbits.lines", orbits.lines.len() as i64);
            r.push_int("line_orbits.orbits", orbits.orbit_count as i64);
            if let Some(d) = &orbits.degenerate_family {
                r.push_str("line_orbits.degenerate", d.clone());
            }
        }
        if system.beta1.abs() <= 1e-9 {
            let origin = reduced::classify_origin(&system)?;
            r.push_str(
                "origin.verdict",
                match origin.verdict {
                    reduced::OriginVerdict::AsymptoticallyStable => "asymptotically_stable",
                    reduced::OriginVerdict::Unstable => "unstable",
                    reduced::OriginVerdict::Indeterminate => "indeterminate",
                },
            );
            r.push_num("origin.max_radial", origin.max_radial);
            r.push_bool("origin.sign_test", origin.sign_test);
        }
    }

    if system.family == reduced::ReducedFamily::ScalarQuadCubic {
        match reduced::fold_point(&system, (-1e6, 1e6)) {
            Ok(fold) => {
                r.push_num("fold.lambda_star", fold.lambda_star);
                r.push_num("fold.y_star", fold.y_star);
            }
            Err(Error::NoFold) => r.push_str("fold.status", "none in range"),
            Err(e) => return Err(e),
        }
    }

    if let Some(y0) = &spec.y0 {
        let trajectory = reduced::integrate(&system, y0, spec.t_end, spec.dt)?;
        report::write_trajectory_csv(&out.join("trajectory.csv"), &system, &trajectory)?;
        r.push_str("files.trajectory", "trajectory.csv");
        let last = trajectory.states.last().unwrap();
        for (i, v) in last.iter().enumerate() {
            r.push_num(&format!("trajectory.final.{i}"), *v);
        }
    }
    Ok(())
}

fn run_simulate(rc: &RunConfig, r: &mut Report, out: &Path) -> Result<()> {
    let params = rc.params.as_ref().unwrap();
    let domain = match rc.domain.as_ref() {
        Some(DomainConfig::Spec(s)) => s,
        _ => return Err(Error::InvalidParams("simulate needs a concrete [domain]".into())),
    };
    for (i, w) in domain.warnings().iter().chain(rc.solver.warnings(domain, params).iter()).enumerate()
    {
        r.push_str(&format!("warnings.{i}"), w.clone());
    }
    let mut state = solver::init_state(domain, params, &rc.solver)?;
    let tracked = crate::domain::first_modes(domain, 8);
    let mut rows: Vec<(f64, Vec<f64>, f64, f64, &str)> = Vec::new();
    let record = |state: &solver::SimState, rows: &mut Vec<(f64, Vec<f64>, f64, f64, &str)>| {
        if let Ok(obs) = solver::observables(state, params) {
            let amps = obs.amplitudes.iter().map(|(_, a)| *a).collect();
            rows.push((state.t, amps, obs.free_energy, obs.mass, "running"));
        }
    };
    record(&state, &mut rows);
    let total_steps = (rc.solver.max_time / rc.solver.dt).ceil() as usize;
    let stride = (total_steps / 1000).max(1);
    let mut outcome = None;
    for step_idx in 0..total_steps {
        let info = solver::step(&mut state, params, &rc.solver)?;
        if (step_idx + 1) % stride == 0 {
            record(&state, &mut rows);
        }
        if info.residual < rc.solver.steady_tol {
            outcome = Some((solver::SteadyStatus::Converged, info.residual));
            break;
        }
    }
    let (status, residual) = match outcome {
        Some((s, res)) => (s, res),
        None => (solver::SteadyStatus::MaxTime, solver::residual_inf(&state, params)?),
    };
    let obs = solver::observables(&state, params)?;
    let status_str = match status {
        solver::SteadyStatus::Converged => "converged",
        solver::SteadyStatus::MaxTime => "max_time",
    };
    rows.push((
        state.t,
        obs.amplitudes.iter().map(|(_, a)| *a).collect(),
        obs.free_energy,
        obs.mass,
        status_str,
    ));
    report::write_timeseries_csv(&out.join("timeseries.csv"), &tracked, &rows)?;
    report::write_snapshot(&out.join("field.txt"), &state.u, state.t)?;
    r.push_str("files.timeseries", "timeseries.csv");
    r.push_str("files.snapshot", "field.txt");
    r.push_str("simulate.status", status_str);
    r.push_num("simulate.t_final", state.t);
    r.push_num("simulate.residual", residual);
    r.push_num("simulate.energy", obs.free_energy);
    r.push_num("simulate.mass", obs.mass);
    for (mode, amp) in &obs.amplitudes {
        r.push_num(&format!("simulate.amplitude.{}", mode.label()), *amp);
    }

    // classifier cross-check: flag a discrepancy when a Type-I prediction
    // misses the measured steady amplitude by more than 25%
    if let (Ok((t, _)), RunParams::Classic(p)) = (classify_for(rc), params) {
        if t.transition_type == classify::TransitionType::TypeI {
            if let (Some(l0), Some(coeff)) = (t.lambda_critical, t.predicted_amplitude_coefficient)
            {
                if p.lambda > l0 && status == solver::SteadyStatus::Converged {
                    let predicted = coeff * (p.lambda - l0).sqrt();
                    let measured =
                        obs.amplitudes.iter().map(|(_, a)| a.abs()).fold(0.0f64, f64::max);
                    r.push_num("simulate.predicted_amplitude", predicted);
                    if predicted > 0.0 && ((measured - predicted) / predicted).abs() > 0.25 {
                        r.push_str(
                            "discrepancies.amplitude",
                            format!(
                                "measured amplitude {measured:.6e} vs predicted {predicted:.6e}"
                            ),
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

fn temperature_of_lambda(mat: &phase::MaterialParams, lambda: f64) -> f64 {
    // invert lambda(T) = 2 a l^2/k - l^2 R T / (k u0 (1-u0))
    let l2k = mat.l * mat.l / mat.k;
    (2.0 * mat.a * l2k - lambda) * mat.u0 * (1.0 - mat.u0) / (l2k * mat.gas_constant)
}

fn run_sweep(rc: &RunConfig, r: &mut Report, out: &Path) -> Result<()> {
    let params = rc.params.as_ref().unwrap();
    let domain = match rc.domain.as_ref() {
        Some(DomainConfig::Spec(s)) => s,
        _ => return Err(Error::InvalidParams("sweep needs a concrete [domain]".into())),
    };
    let sweep = rc.sweep.as_ref().unwrap();
    let options = solver::SweepOptions { continuation: sweep.continuation, jobs: rc.jobs };
    let mut branch = solver::sweep_branch(domain, params, &sweep.lambdas, &rc.solver, &options)?;
    if let Some(mat) = &rc.material {
        for row in &mut branch.rows {
            row.temperature = Some(temperature_of_lambda(mat, row.lambda));
        }
    }
    report::write_branch_csv(&out.join("branch.csv"), &branch)?;
    r.push_str("files.branch", "branch.csv");
    r.push_num("sweep.lambda0", branch.lambda0);
    r.push_int("sweep.rows", branch.rows.len() as i64);
    let failed = branch.rows.iter().filter(|x| x.status == solver::RowStatus::Failed).count();
    let jumped = branch.rows.iter().filter(|x| x.status == solver::RowStatus::Jumped).count();
    r.push_int("sweep.failed_rows", failed as i64);
    r.push_int("sweep.jumped_rows", jumped as i64);
    if sweep.fit_exponent {
        match solver::fit_exponent(&branch, branch.lambda0) {
            Ok(fit) => {
                r.push_num("exponent.beta", fit.beta);
                r.push_num("exponent.residual_rms", fit.residual_rms);
                r.push_int("exponent.rows_used", fit.rows_used as i64);
            }
            Err(e) => r.push_str("exponent.error", e.to_string()),
        }
    }
    // classifier cross-check on the sweep shape
    if let Ok((t, _)) = classify_for(rc) {
        push_transition(r, "classification", &t);
        let continuous_expected = t.transition_type == classify::TransitionType::TypeI;
        if continuous_expected && jumped > 0 {
            r.push_str(
                "discrepancies.branch",
                format!("classifier predicts a continuous branch but {jumped} rows jumped"),
            );
        }
    }
    Ok(())
}

fn run_diagram(rc: &RunConfig, r: &mut Report, out: &Path) -> Result<()> {
    let mat = rc.material.as_ref().unwrap();
    let spec = rc.diagram.clone().unwrap_or(crate::config::DiagramSpec {
        u0_min: 0.05,
        u0_max: 0.95,
        u0_count: 50,
        t_min: None,
        t_max: None,
        t_count: 200,
    });
    let u0_grid: Vec<f64> = if spec.u0_count == 1 {
        vec![spec.u0_min]
    } else {
        (0..spec.u0_count)
            .map(|i| {
                spec.u0_min + (spec.u0_max - spec.u0_min) * i as f64 / (spec.u0_count - 1) as f64
            })
            .collect()
    };
    // default T range: (0, 1.2 T1] at the symmetric composition
    let t1 = phase::lambda_sign_change_temperature(&mat.with_u0(0.5)?);
    let t_lo = spec.t_min.unwrap_or(1.2 * t1 / spec.t_count as f64);
    let t_hi = spec.t_max.unwrap_or(1.2 * t1);
    let t_grid: Vec<f64> = if spec.t_count == 1 {
        vec![t_lo]
    } else {
        (0..spec.t_count)
            .map(|i| t_lo + (t_hi - t_lo) * i as f64 / (spec.t_count - 1) as f64)
            .collect()
    };
    let rows = phase::emit_diagram(mat, &u0_grid, &t_grid)?;
    report::write_diagram_csv(&out.join("diagram.csv"), &rows)?;
    r.push_str("files.diagram", "diagram.csv");

    let t0_curve: Vec<(f64, f64)> = u0_grid
        .iter()
        .map(|&u0| {
            let m = mat.with_u0(u0)?;
            Ok((u0, phase::lambda_sign_change_temperature(&m)))
        })
        .collect::<Result<_>>()?;
    let tstar_curve: Vec<(f64, f64)> = u0_grid
        .iter()
        .map(|&u0| Ok((u0, phase::t_star(&mat.with_u0(u0)?)?.bisected)))
        .collect::<Result<_>>()?;
    report::write_curve_csv(&out.join("t0_curve.csv"), "u0,T0", &t0_curve)?;
    report::write_curve_csv(&out.join("tstar_curve.csv"), "u0,Tstar", &tstar_curve)?;
    r.push_str("files.t0_curve", "t0_curve.csv");
    r.push_str("files.tstar_curve", "tstar_curve.csv");
    r.push_num("diagram.critical_length", phase::critical_length(mat));

    // discrepancy log: printed vs derived spinodal cubic and fold curve
    let mid = mat.with_u0(0.25)?;
    let t_probe = phase::lambda_sign_change_temperature(&mid);
    let coeffs = phase::spinodal_coefficients(&mid, t_probe)?;
    r.push_str(
        "discrepancies.b3",
        format!(
            "printed b3 = {:.6e} vs derivative of the free energy = {:.6e} at u0=0.25",
            coeffs.b3_printed, coeffs.b3
        ),
    );
    let ts = phase::t_star(&mid)?;
    r.push_str(
        "discrepancies.t_star",
        format!(
            "printed T* = {:.6e} vs fold-condition bisection = {:.6e} at u0=0.25",
            ts.printed, ts.bisected
        ),
    );
    Ok(())
}

/// Runs a validated configuration, writing all outputs under its output
/// directory. Returns the report (also written to `report.txt`).
pub fn run(rc: &RunConfig) -> Result<Report> {
    let out = PathBuf::from(&rc.out_dir);
    std::fs::create_dir_all(&out)?;
    let mut r = report_header(rc);
    let body = match rc.subcommand {
        Subcommand::Classify => run_classify(rc, &mut r),
        Subcommand::Reduce => run_reduce(rc, &mut r, &out),
        Subcommand::Simulate => run_simulate(rc, &mut r, &out),
        Subcommand::Sweep => run_sweep(rc, &mut r, &out),
        Subcommand::Diagram => run_diagram(rc, &mut r, &out),
    };
    match body {
        Ok(()) => {
            r.push_str("run.status", "ok");
            std::fs::write(out.join("report.txt"), r.to_text())?;
            Ok(r)
        }
        Err(e) => {
            // always leave a report behind, then propagate
            r.push_str("run.status", "failed");
            r.push_str("run.error", e.to_string());
            let _ = std::fs::write(out.join("report.txt"), r.to_text());
            Err(e)
        }
    }
}

/// Full CLI entry point; returns the process exit code.
pub fn main_impl(args: &[String]) -> i32 {
    let cli = match parse_args(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let text = match std::fs::read_to_string(&cli.config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.config_path);
            return 1;
        }
    };
    let mut rc = match crate::config::parse_config(cli.subcommand, &text) {
        Ok(rc) => rc,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    if let Some(out) = cli.out_override {
        rc.out_dir = out;
    }
    if let Some(seed) = cli.seed_override {
        rc.seed = seed;
        // the seed also feeds the initial condition
        if let crate::solver::InitialCondition::SeededMode { amplitude, perturbation, .. } =
            rc.solver.initial
        {
            rc.solver.initial =
                crate::solver::InitialCondition::SeededMode { amplitude, perturbation, seed };
        } else if let crate::solver::InitialCondition::Random { amplitude, .. } = rc.solver.initial
        {
            rc.solver.initial = crate::solver::InitialCondition::Random { amplitude, seed };
        }
    }
    if let Some(jobs) = cli.jobs_override {
        rc.jobs = jobs.max(1);
    }
    match run(&rc) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
