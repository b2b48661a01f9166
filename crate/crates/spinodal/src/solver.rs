//! Pseudospectral time integration of the full equation
//!
//! ```text
//! du/dt = -Lap^2 u - lambda Lap u + Lap(gamma2 u^2 + gamma3 u^3)
//! ```
//!
//! and of the entropy-coupled pair
//!
//! ```text
//! dS/dt = mu Lap S - alpha1 S - alpha2 u^2
//! du/dt = -Lap^2 u - lambda Lap u + Lap(gamma1 S u + gamma2 u^2 + gamma3 u^3).
//! ```
//!
//! Scheme: first-order semi-implicit. The linear part `-Lap^2 - lambda Lap`
//! is treated implicitly in spectral space together with a stabilization
//! term `s Lap^2` that is added implicitly and subtracted explicitly, so the
//! implicit factor stays positive for any step size; the nonlinearity is
//! explicit, with optional 3/2-rule dealiasing. Steady states are exact
//! fixed points of the scheme independent of `dt`.

use crate::classify::{CoupledParams, ModelParams};
use crate::domain::{first_modes, DomainKind, DomainSpec, ModeIndex};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Simulation state: order parameter, optional entropy deviation, time.
#[derive(Debug, Clone)]
pub struct SimState {
    pub u: SpectralField,
    pub entropy: Option<SpectralField>,
    pub t: f64,
}

/// Model parameters of a run (classic or entropy-coupled).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunParams {
    Classic(ModelParams),
    Coupled(CoupledParams),
}

impl RunParams {
    pub fn base(&self) -> &ModelParams {
        match self {
            RunParams::Classic(p) => p,
            RunParams::Coupled(c) => &c.base,
        }
    }
}

/// Stabilization constant selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stabilization {
    /// `s = 2 max(|lambda|, gamma3 ||u||_inf^2)`, refreshed every step.
    Auto,
    Fixed(f64),
}

/// How a run is seeded.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// First eigenmode at `amplitude`, plus a reproducible random
    /// perturbation of the low modes at `perturbation` (0 disables).
    SeededMode { amplitude: f64, perturbation: f64, seed: u64 },
    /// Random low-mode data at `amplitude`.
    Random { amplitude: f64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub stabilization: Stabilization,
    pub dealias: bool,
    /// Convergence threshold on the sup norm of the spectral residual.
    pub steady_tol: f64,
    pub max_time: f64,
    pub initial: InitialCondition,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt: 1e-3,
            stabilization: Stabilization::Auto,
            dealias: false,
            steady_tol: 1e-9,
            max_time: 1e4,
            initial: InitialCondition::SeededMode { amplitude: 1e-4, perturbation: 1e-6, seed: 0 },
        }
    }
}

impl SolverConfig {
    /// Time-step advisories: warns when `dt * max_K beta_K >= 0.5`.
    pub fn warnings(&self, domain: &DomainSpec, params: &RunParams) -> Vec<String> {
        let mut w = Vec::new();
        let rho = SpectralField::rho_table(domain);
        let lambda = params.base().lambda;
        let max_growth =
            rho.iter().map(|&r| r * (lambda - r)).fold(f64::NEG_INFINITY, f64::max).max(0.0);
        if self.dt * max_growth >= 0.5 {
            w.push(format!(
                "dt * max linear growth rate = {:.3} >= 0.5; transients may be inaccurate",
                self.dt * max_growth
            ));
        }
        w
    }
}

/// Builds the initial state for a run.
pub fn init_state(domain: &DomainSpec, params: &RunParams, config: &SolverConfig) -> Result<SimState> {
    let mut u = SpectralField::zeros(domain);
    let leads = first_modes(domain, 8);
    match &config.initial {
        InitialCondition::SeededMode { amplitude, perturbation, seed } => {
            if let Some(mode) = leads.first() {
                u.set_amplitude(mode, *amplitude)?;
            }
            if *perturbation > 0.0 {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                for (mode, _) in crate::domain::build_basis(domain, 4) {
                    let bump: f64 = rng.random_range(-1.0..1.0);
                    let current = u.amplitude(&mode)?;
                    u.set_amplitude(&mode, current + perturbation * bump)?;
                }
            }
        }
        InitialCondition::Random { amplitude, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            for (mode, _) in crate::domain::build_basis(domain, 4) {
                u.set_amplitude(&mode, amplitude * rng.random_range(-1.0..1.0))?;
            }
        }
    }
    u.project_zero_mean();
    let entropy = match params {
        RunParams::Classic(_) => None,
        RunParams::Coupled(_) => Some(SpectralField::zeros(domain)),
    };
    Ok(SimState { u, entropy, t: 0.0 })
}

fn nonlinear_spectral(state: &SimState, params: &RunParams, dealias: bool) -> Result<SpectralField> {
    let domain = state.u.domain().clone();
    let base = *params.base();
    match params {
        RunParams::Classic(_) => SpectralField::pointwise(
            &domain,
            dealias,
            |nodal: &[Vec<f64>]| {
                nodal[0]
                    .iter()
                    .map(|&u| base.gamma2 * u * u + base.gamma3 * u * u * u)
                    .collect()
            },
            &[&state.u],
        ),
        RunParams::Coupled(cp) => {
            let gamma1 = cp.coupling.gamma1;
            let s = state
                .entropy
                .as_ref()
                .ok_or_else(|| Error::Numerical("coupled run without entropy field".into()))?;
            SpectralField::pointwise(
                &domain,
                dealias,
                |nodal: &[Vec<f64>]| {
                    nodal[0]
                        .iter()
                        .zip(&nodal[1])
                        .map(|(&u, &s)| gamma1 * s * u + base.gamma2 * u * u + base.gamma3 * u * u * u)
                        .collect()
                },
                &[&state.u, s],
            )
        }
    }
}

fn stabilization_constant(config: &SolverConfig, params: &RunParams, umax: f64) -> f64 {
    match config.stabilization {
        Stabilization::Fixed(s) => s,
        Stabilization::Auto => {
            let b = params.base();
            2.0 * b.lambda.abs().max(b.gamma3 * umax * umax)
        }
    }
}

/// Outcome of one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    /// Sup norm over modes of `du/dt` evaluated at the pre-step state
    /// (coupled runs take the max with the entropy equation residual).
    pub residual: f64,
}

/// Advances the state by one semi-implicit step and reports the spectral
/// residual of the state it left behind.
pub fn step(state: &mut SimState, params: &RunParams, config: &SolverConfig) -> Result<StepInfo> {
    let domain = state.u.domain().clone();
    let rho = SpectralField::rho_table(&domain);
    let dt = config.dt;
    let lambda = params.base().lambda;

    let nhat = nonlinear_spectral(state, params, config.dealias)?;
    let umax = state.u.max_abs_nodal();
    if !umax.is_finite() {
        return Err(Error::Numerical(format!("non-finite field at t = {}", state.t)));
    }
    let s = stabilization_constant(config, params, umax);

    let mut residual = 0.0f64;
    {
        let n = nhat.coeffs();
        let u = state.u.coeffs_mut();
        for i in 0..u.len() {
            let r = rho[i];
            let rhs = (-r * r + lambda * r) * u[i] - r * n[i];
            residual = residual.max(rhs.norm());
            let numerator = u[i] * (1.0 + dt * s * r * r) - n[i] * (dt * r);
            let denominator = 1.0 + dt * (r * r - lambda * r + s * r * r);
            u[i] = numerator / denominator;
        }
    }
    state.u.project_zero_mean();

    if let RunParams::Coupled(cp) = params {
        let c = cp.coupling;
        let u2 = SpectralField::pointwise(
            &domain,
            config.dealias,
            |nodal: &[Vec<f64>]| nodal[0].iter().map(|&u| u * u).collect(),
            &[&state.u],
        )?;
        let entropy = state
            .entropy
            .as_mut()
            .ok_or_else(|| Error::Numerical("coupled run without entropy field".into()))?;
        let q = u2.coeffs();
        let sc = entropy.coeffs_mut();
        for i in 0..sc.len() {
            let r = rho[i];
            let rhs = (-c.mu * r - c.alpha1) * sc[i] - c.alpha2 * q[i];
            residual = residual.max(rhs.norm());
            sc[i] = (sc[i] - q[i] * (dt * c.alpha2)) / (1.0 + dt * (c.mu * r + c.alpha1));
        }
    }

    state.t += dt;
    if !state.u.is_finite() {
        return Err(Error::Numerical(format!(
            "NaN/inf in spectral coefficients at t = {}",
            state.t
        )));
    }
    if state.u.max_abs_nodal() > 1e6 {
        return Err(Error::BlowUp(1e6));
    }
    Ok(StepInfo { residual })
}

/// Spectral residual `||du/dt||_inf` of the current state (coupled runs take
/// the max over both equations).
pub fn residual_inf(state: &SimState, params: &RunParams) -> Result<f64> {
    let domain = state.u.domain().clone();
    let rho = SpectralField::rho_table(&domain);
    let lambda = params.base().lambda;
    let nhat = nonlinear_spectral(state, params, false)?;
    let mut res = 0.0f64;
    for (i, (u, n)) in state.u.coeffs().iter().zip(nhat.coeffs()).enumerate() {
        let r = rho[i];
        res = res.max(((-r * r + lambda * r) * u - r * n).norm());
    }
    if let (RunParams::Coupled(cp), Some(entropy)) = (params, &state.entropy) {
        let c = cp.coupling;
        let u2 = SpectralField::pointwise(
            &domain,
            false,
            |nodal: &[Vec<f64>]| nodal[0].iter().map(|&u| u * u).collect(),
            &[&state.u],
        )?;
        for (i, (s, q)) in entropy.coeffs().iter().zip(u2.coeffs()).enumerate() {
            let r = rho[i];
            res = res.max(((-c.mu * r - c.alpha1) * s - c.alpha2 * q).norm());
        }
    }
    Ok(res)
}

/// Diagnostics of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    /// `int u dx`; identically zero up to roundoff.
    pub mass: f64,
    /// `int [ |grad u|^2/2 - lambda u^2/2 + gamma2 u^3/3 + gamma3 u^4/4 ] dx`.
    pub free_energy: f64,
    /// Amplitudes of the first (critical) eigenmodes.
    pub amplitudes: Vec<(ModeIndex, f64)>,
}

/// Computes mass, free energy, and tracked-mode amplitudes. The quadratic
/// energy terms are evaluated spectrally; the cubic and quartic terms by
/// nodal quadrature.
pub fn observables(state: &SimState, params: &RunParams) -> Result<Observables> {
    let domain = state.u.domain();
    let b = params.base();
    let nodal = state.u.to_nodal();
    let cell = domain.volume() / nodal.len() as f64;
    let (mut int_u3, mut int_u4) = (0.0, 0.0);
    for &v in &nodal {
        let v3 = v * v * v;
        int_u3 += v3;
        int_u4 += v3 * v;
    }
    int_u3 *= cell;
    int_u4 *= cell;
    let free_energy = 0.5 * state.u.h1_sq() - 0.5 * b.lambda * state.u.l2_sq()
        + b.gamma2 / 3.0 * int_u3
        + b.gamma3 / 4.0 * int_u4;
    let amplitudes = first_modes(domain, 8)
        .into_iter()
        .map(|m| {
            let a = state.u.amplitude(&m)?;
            Ok((m, a))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Observables { mass: state.u.mass(), free_energy, amplitudes })
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SteadyStatus {
    Converged,
    MaxTime,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyOutcome {
    pub status: SteadyStatus,
    pub residual: f64,
    pub steps: usize,
}

/// Integrates until the spectral residual drops below `steady_tol` or
/// `max_time` is reached.
pub fn run_to_steady(
    state: &mut SimState,
    params: &RunParams,
    config: &SolverConfig,
) -> Result<SteadyOutcome> {
    let mut steps = 0usize;
    let mut residual = f64::INFINITY;
    while state.t < config.max_time {
        let info = step(state, params, config)?;
        residual = info.residual;
        steps += 1;
        if residual < config.steady_tol {
            return Ok(SteadyOutcome { status: SteadyStatus::Converged, residual, steps });
        }
    }
    Ok(SteadyOutcome { status: SteadyStatus::MaxTime, residual, steps })
}

/// Row status in a branch table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Converged,
    /// Converged, but onto the far branch (amplitude above the jump scale).
    Jumped,
    MaxTime,
    Failed,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Converged => "converged",
            RowStatus::Jumped => "jumped",
            RowStatus::MaxTime => "max_time",
            RowStatus::Failed => "failed",
        }
    }
}

/// One row of a bifurcation branch.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchRow {
    pub lambda: f64,
    /// Temperature behind this row, when the sweep was driven by one.
    pub temperature: Option<f64>,
    /// Signed amplitudes of the tracked modes.
    pub amplitudes: Vec<f64>,
    pub energy: f64,
    pub mass: f64,
    pub status: RowStatus,
}

/// Steady-state amplitudes and energies along a control-parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationBranch {
    pub lambda0: f64,
    pub tracked: Vec<ModeIndex>,
    pub rows: Vec<BranchRow>,
}

/// Continuation options for [`sweep_branch`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Seed each row with the previous steady state.
    pub continuation: bool,
    /// Worker threads when continuation is disabled.
    pub jobs: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { continuation: true, jobs: 1 }
    }
}

/// Amplitude scale of the continuous branch, `coeff * sqrt(lambda - lambda0)`,
/// with `coeff` from the leading cubic coefficient of the geometry.
fn type1_scale(domain: &DomainSpec, params: &ModelParams, lambda: f64, lambda0: f64) -> f64 {
    if lambda <= lambda0 {
        return 0.0;
    }
    let sigma = match &domain.kind {
        DomainKind::Rectangular { lengths } => {
            let l = lengths.iter().cloned().fold(0.0f64, f64::max);
            crate::classify::sigma1_at_criticality(params, l) / 2.0
        }
        DomainKind::Loop { r0 } => {
            0.75 * params.gamma3 - r0 * r0 * params.gamma2 * params.gamma2 / 6.0
        }
        DomainKind::Torus { .. } => 0.75 * params.gamma3 - params.gamma2 * params.gamma2 / 6.0,
    };
    (2.0 * (lambda - lambda0) / sigma.abs().max(1e-12)).sqrt()
}

fn with_lambda(params: &RunParams, lambda: f64) -> RunParams {
    match params {
        RunParams::Classic(p) => RunParams::Classic(ModelParams { lambda, ..*p }),
        RunParams::Coupled(c) => RunParams::Coupled(CoupledParams {
            base: ModelParams { lambda, ..c.base },
            coupling: c.coupling,
        }),
    }
}

fn run_one_row(
    domain: &DomainSpec,
    params: &RunParams,
    config: &SolverConfig,
    lambda: f64,
    lambda0: f64,
    tracked: &[ModeIndex],
    seed_state: Option<&SimState>,
) -> BranchRow {
    let row_params = with_lambda(params, lambda);
    let mut state = match seed_state {
        Some(s) if s.u.max_abs_nodal() > 10.0 * seed_amplitude(config) => {
            let mut st = s.clone();
            st.t = 0.0;
            st
        }
        _ => match init_state(domain, &row_params, config) {
            Ok(s) => s,
            Err(_) => {
                return BranchRow {
                    lambda,
                    temperature: None,
                    amplitudes: vec![f64::NAN; tracked.len()],
                    energy: f64::NAN,
                    mass: f64::NAN,
                    status: RowStatus::Failed,
                }
            }
        },
    };
    match run_to_steady(&mut state, &row_params, config) {
        Ok(outcome) => {
            let obs = match observables(&state, &row_params) {
                Ok(o) => o,
                Err(_) => {
                    return BranchRow {
                        lambda,
                        temperature: None,
                        amplitudes: vec![f64::NAN; tracked.len()],
                        energy: f64::NAN,
                        mass: f64::NAN,
                        status: RowStatus::Failed,
                    }
                }
            };
            let amplitudes: Vec<f64> = tracked
                .iter()
                .map(|m| state.u.amplitude(m).unwrap_or(f64::NAN))
                .collect();
            let amp_max = amplitudes.iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));
            let scale = type1_scale(domain, row_params.base(), lambda, lambda0);
            let status = match outcome.status {
                SteadyStatus::MaxTime => RowStatus::MaxTime,
                SteadyStatus::Converged => {
                    let jumped = if lambda > lambda0 {
                        amp_max > 10.0 * scale
                    } else {
                        amp_max > 100.0 * seed_amplitude(config)
                    };
                    if jumped {
                        RowStatus::Jumped
                    } else {
                        RowStatus::Converged
                    }
                }
            };
            BranchRow {
                lambda,
                temperature: None,
                amplitudes,
                energy: obs.free_energy,
                mass: obs.mass,
                status,
            }
        }
        Err(_) => BranchRow {
            lambda,
            temperature: None,
            amplitudes: vec![f64::NAN; tracked.len()],
            energy: f64::NAN,
            mass: f64::NAN,
            status: RowStatus::Failed,
        },
    }
}

fn seed_amplitude(config: &SolverConfig) -> f64 {
    match &config.initial {
        InitialCondition::SeededMode { amplitude, .. } => *amplitude,
        InitialCondition::Random { amplitude, .. } => *amplitude,
    }
}

/// Sweeps the control parameter over `lambdas` (strictly monotone), running
/// each row to steady state. With continuation enabled the converged state
/// of one row seeds the next; otherwise rows are independent and may run on
/// `jobs` worker threads. Failures mark their row and the sweep continues.
pub fn sweep_branch(
    domain: &DomainSpec,
    params: &RunParams,
    lambdas: &[f64],
    config: &SolverConfig,
    options: &SweepOptions,
) -> Result<BifurcationBranch> {
    for w in lambdas.windows(2) {
        if w[1] == w[0] || (w[1] > w[0]) != (lambdas[1] > lambdas[0]) {
            return Err(Error::InvalidParams("lambda values must be strictly monotone".into()));
        }
    }
    let basis = crate::domain::build_basis(domain, 8);
    let lambda0 = crate::domain::first_eigenvalue(&basis)
        .map(|(r, _)| r)
        .ok_or_else(|| Error::InvalidParams("empty eigenbasis".into()))?;
    let tracked = first_modes(domain, 8);
    let mut rows: Vec<BranchRow> = Vec::with_capacity(lambdas.len());

    if options.continuation || options.jobs <= 1 {
        let mut carry: Option<SimState> = None;
        for &lam in lambdas {
            let seed = if options.continuation { carry.as_ref() } else { None };
            let row_params = with_lambda(params, lam);
            // run and retain the state for the next row
            let mut state = match seed {
                Some(s) if s.u.max_abs_nodal() > 10.0 * seed_amplitude(config) => {
                    let mut st = s.clone();
                    st.t = 0.0;
                    st
                }
                _ => match init_state(domain, &row_params, config) {
                    Ok(s) => s,
                    Err(_) => {
                        rows.push(BranchRow {
                            lambda: lam,
                            temperature: None,
                            amplitudes: vec![f64::NAN; tracked.len()],
                            energy: f64::NAN,
                            mass: f64::NAN,
                            status: RowStatus::Failed,
                        });
                        continue;
                    }
                },
            };
            match run_to_steady(&mut state, &row_params, config) {
                Ok(outcome) => {
                    let obs = observables(&state, &row_params)?;
                    let amplitudes: Vec<f64> = tracked
                        .iter()
                        .map(|m| state.u.amplitude(m).unwrap_or(f64::NAN))
                        .collect();
                    let amp_max =
                        amplitudes.iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));
                    let scale = type1_scale(domain, row_params.base(), lam, lambda0);
                    let status = match outcome.status {
                        SteadyStatus::MaxTime => RowStatus::MaxTime,
                        SteadyStatus::Converged => {
                            let jumped = if lam > lambda0 {
                                amp_max > 10.0 * scale
                            } else {
                                amp_max > 100.0 * seed_amplitude(config)
                            };
                            if jumped {
                                RowStatus::Jumped
                            } else {
                                RowStatus::Converged
                            }
                        }
                    };
                    rows.push(BranchRow {
                        lambda: lam,
                        temperature: None,
                        amplitudes,
                        energy: obs.free_energy,
                        mass: obs.mass,
                        status,
                    });
                    carry = Some(state);
                }
                Err(_) => {
                    rows.push(BranchRow {
                        lambda: lam,
                        temperature: None,
                        amplitudes: vec![f64::NAN; tracked.len()],
                        energy: f64::NAN,
                        mass: f64::NAN,
                        status: RowStatus::Failed,
                    });
                    carry = None;
                }
            }
        }
    } else {
        // independent rows striped over a small worker pool
        let jobs = options.jobs.min(lambdas.len()).max(1);
        let mut slots: Vec<Option<BranchRow>> = vec![None; lambdas.len()];
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for worker in 0..jobs {
                let tracked = &tracked;
                let handle = scope.spawn(move || {
                    let mut local = Vec::new();
                    for (i, &lam) in lambdas.iter().enumerate() {
                        if i % jobs != worker {
                            continue;
                        }
                        local.push((
                            i,
                            run_one_row(domain, params, config, lam, lambda0, tracked, None),
                        ));
                    }
                    local
                });
                handles.push(handle);
            }
            for handle in handles {
                for (i, row) in handle.join().expect("sweep worker panicked") {
                    slots[i] = Some(row);
                }
            }
        });
        rows = slots.into_iter().map(|r| r.expect("row not filled")).collect();
    }

    Ok(BifurcationBranch { lambda0, tracked, rows })
}

/// A least-squares critical-exponent fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    /// Slope of log(amplitude) against log(lambda - lambda0).
    pub beta: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual_rms: f64,
    pub rows_used: usize,
}

/// Fits the critical exponent from the converged supercritical rows with
/// `lambda - lambda0` in `[1e-3, 1e-1]`; at least 5 such rows are required.
pub fn fit_exponent(branch: &BifurcationBranch, lambda0: f64) -> Result<ExponentFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for row in &branch.rows {
        if !matches!(row.status, RowStatus::Converged | RowStatus::Jumped) {
            continue;
        }
        let eps = row.lambda - lambda0;
        if !(1e-3..=1e-1).contains(&eps) {
            continue;
        }
        let amp = row.amplitudes.iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));
        if amp <= 0.0 || !amp.is_finite() {
            continue;
        }
        xs.push(eps.ln());
        ys.push(amp.ln());
    }
    if xs.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "exponent fit needs >= 5 converged rows with lambda-lambda0 in [1e-3, 1e-1], got {}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    Ok(ExponentFit { beta: slope, residual_rms: (ss / n).sqrt(), rows_used: xs.len() })
}

/// Translates a converged state along the torus and returns the steady
/// residual of the translated state; small values certify that the whole
/// translation orbit consists of steady states.
pub fn torus_invariance_check(state: &SimState, params: &RunParams, shift: &[f64]) -> Result<f64> {
    let translated = SimState {
        u: state.u.translate(shift)?,
        entropy: match &state.entropy {
            Some(s) => Some(s.translate(shift)?),
            None => None,
        },
        t: state.t,
    };
    residual_inf(&translated, params)
}
