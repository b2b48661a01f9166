//! Finite-dimensional dynamics on the critical modes near onset.
//!
//! Families:
//!
//! * `RectCubic` (box, multiplicity m):
//!   `dy_i/dt = beta1 y_i - y_i (a1 y_i^2 + a2 sum_{j!=i} y_j^2)`,
//!   `a_i = pi^2 sigma_i / (2 L^2)`;
//! * `Loop`: the same with `a1 = a2` on the `(cos, sin)` amplitude pair;
//! * `ScalarQuadCubic`: `dv/dt = beta1 v + q v^2 + c v^3` (homogeneous
//!   spinodal expansion and the mixed-transition normal form);
//! * `WholeSpace`: n cos/sin pairs with isotropic coupling through the mode
//!   intensities `I_j = y_j^2 + z_j^2`.
//!
//! All cubic families are gradient systems; [`potential`] exposes the
//! Lyapunov function used by the dissipation tests.

use crate::classify::{reduced_coefficients, EntropyCoupling, ModelParams, SymmetryClass};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

/// Trajectories are aborted once the state norm passes this radius.
pub const BLOWUP_RADIUS: f64 = 1e6;

/// Eigenvalue magnitude below which a stability label is refused.
pub const STABILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedFamily {
    /// Box reduced system with `m` critical modes.
    RectCubic { m: usize },
    /// Thin-loop pair (rotationally symmetric cubic).
    Loop,
    /// Scalar normal form with quadratic and cubic terms.
    ScalarQuadCubic,
    /// Periodic bulk: `pairs` cos/sin amplitude pairs.
    WholeSpace { pairs: usize },
}

/// A reduced ODE with its coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedSystem {
    pub family: ReducedFamily,
    /// Linear growth rate of the critical modes.
    pub beta1: f64,
    /// Self-coupling cubic coefficient (`a1`, loop `c`, whole-space `c1`,
    /// scalar `c`).
    pub cubic_self: f64,
    /// Cross-coupling cubic coefficient (`a2`, whole-space `c2`); unused for
    /// scalar systems.
    pub cubic_cross: f64,
    /// Quadratic coefficient of the scalar family; zero otherwise.
    pub quadratic: f64,
}

impl ReducedSystem {
    pub fn rect(m: usize, beta1: f64, a1: f64, a2: f64) -> Result<Self> {
        if m == 0 || m > 3 {
            return Err(Error::UnsupportedMultiplicity(m));
        }
        Ok(ReducedSystem {
            family: ReducedFamily::RectCubic { m },
            beta1,
            cubic_self: a1,
            cubic_cross: a2,
            quadratic: 0.0,
        })
    }

    /// Box system specified by the sigma coefficients (`a_i = pi^2 sigma_i / 2L^2`).
    pub fn rect_from_sigmas(m: usize, length: f64, beta1: f64, sigma1: f64, sigma2: f64) -> Result<Self> {
        let scale = PI * PI / (2.0 * length * length);
        Self::rect(m, beta1, scale * sigma1, scale * sigma2)
    }

    pub fn loop_pair(beta1: f64, cubic: f64) -> Self {
        ReducedSystem {
            family: ReducedFamily::Loop,
            beta1,
            cubic_self: cubic,
            cubic_cross: cubic,
            quadratic: 0.0,
        }
    }

    pub fn scalar(beta1: f64, quadratic: f64, cubic: f64) -> Self {
        ReducedSystem {
            family: ReducedFamily::ScalarQuadCubic,
            beta1,
            cubic_self: cubic,
            cubic_cross: 0.0,
            quadratic,
        }
    }

    pub fn whole_space(pairs: usize, beta1: f64, c1: f64, c2: f64) -> Result<Self> {
        if pairs == 0 || pairs > 3 {
            return Err(Error::InvalidParams(format!("whole-space pairs must be 1..=3, got {pairs}")));
        }
        Ok(ReducedSystem {
            family: ReducedFamily::WholeSpace { pairs },
            beta1,
            cubic_self: c1,
            cubic_cross: c2,
            quadratic: 0.0,
        })
    }

    /// Phase-space dimension.
    pub fn dim(&self) -> usize {
        match self.family {
            ReducedFamily::RectCubic { m } => m,
            ReducedFamily::Loop => 2,
            ReducedFamily::ScalarQuadCubic => 1,
            ReducedFamily::WholeSpace { pairs } => 2 * pairs,
        }
    }
}

/// Geometry selector for [`build_reduced_system`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReducedDomain {
    Rectangular { length: f64, m: usize },
    Loop { r0: f64 },
    WholeSpace { n: usize },
}

/// Builds the reduced system of a geometry at the given control parameter,
/// with optional entropy-coupling corrections (box only).
pub fn build_reduced_system(
    params: &ModelParams,
    domain: &ReducedDomain,
    lambda: f64,
    coupling: Option<&EntropyCoupling>,
) -> Result<ReducedSystem> {
    match domain {
        ReducedDomain::Rectangular { length, m } => {
            let c = reduced_coefficients(params, *length, lambda, coupling)?;
            ReducedSystem::rect_from_sigmas(*m, *length, c.beta1, c.sigma1, c.sigma2)
        }
        ReducedDomain::Loop { r0 } => {
            if coupling.is_some() {
                return Err(Error::InvalidParams("entropy coupling is only reduced on boxes".into()));
            }
            let lambda0 = 1.0 / (r0 * r0);
            let pole = 4.0 * lambda0;
            if (lambda - pole).abs() < crate::classify::RESONANCE_TOL {
                return Err(Error::Resonance { lambda, pole });
            }
            let cubic = lambda0
                * (0.75 * params.gamma3 + params.gamma2 * params.gamma2 / (2.0 * (lambda - pole)));
            Ok(ReducedSystem::loop_pair(lambda0 * (lambda - lambda0), cubic))
        }
        ReducedDomain::WholeSpace { n } => {
            if coupling.is_some() {
                return Err(Error::InvalidParams("entropy coupling is only reduced on boxes".into()));
            }
            for pole in [4.0, 2.0] {
                if (lambda - pole).abs() < crate::classify::RESONANCE_TOL {
                    return Err(Error::Resonance { lambda, pole });
                }
            }
            let g2sq = params.gamma2 * params.gamma2;
            let c1 = 0.75 * params.gamma3 + g2sq / (2.0 * (lambda - 4.0));
            let c2 = 1.5 * params.gamma3 + 2.0 * g2sq / (lambda - 2.0);
            ReducedSystem::whole_space(*n, lambda - 1.0, c1, c2)
        }
    }
}

/// Right-hand side of the reduced ODE.
pub fn vector_field(system: &ReducedSystem, y: &[f64]) -> Vec<f64> {
    assert_eq!(y.len(), system.dim(), "state dimension mismatch");
    match system.family {
        ReducedFamily::RectCubic { m } => {
            let total_sq: f64 = y.iter().map(|v| v * v).sum();
            (0..m)
                .map(|i| {
                    let yi2 = y[i] * y[i];
                    system.beta1 * y[i]
                        - y[i] * (system.cubic_self * yi2 + system.cubic_cross * (total_sq - yi2))
                })
                .collect()
        }
        ReducedFamily::Loop => {
            let r2 = y[0] * y[0] + y[1] * y[1];
            vec![
                system.beta1 * y[0] - system.cubic_self * y[0] * r2,
                system.beta1 * y[1] - system.cubic_self * y[1] * r2,
            ]
        }
        ReducedFamily::ScalarQuadCubic => {
            let v = y[0];
            vec![system.beta1 * v + system.quadratic * v * v + system.cubic_self * v * v * v]
        }
        ReducedFamily::WholeSpace { pairs } => {
            let intensity: Vec<f64> =
                (0..pairs).map(|j| y[j] * y[j] + y[pairs + j] * y[pairs + j]).collect();
            let total: f64 = intensity.iter().sum();
            let mut out = vec![0.0; 2 * pairs];
            for j in 0..pairs {
                let coupling =
                    system.cubic_self * intensity[j] + system.cubic_cross * (total - intensity[j]);
                out[j] = system.beta1 * y[j] - y[j] * coupling;
                out[pairs + j] = system.beta1 * y[pairs + j] - y[pairs + j] * coupling;
            }
            out
        }
    }
}

/// Jacobian of [`vector_field`]; symmetric for the gradient families.
pub fn jacobian(system: &ReducedSystem, y: &[f64]) -> DMatrix<f64> {
    let n = system.dim();
    assert_eq!(y.len(), n, "state dimension mismatch");
    let mut j = DMatrix::zeros(n, n);
    match system.family {
        ReducedFamily::RectCubic { m } => {
            let total_sq: f64 = y.iter().map(|v| v * v).sum();
            for i in 0..m {
                let yi2 = y[i] * y[i];
                j[(i, i)] = system.beta1
                    - 3.0 * system.cubic_self * yi2
                    - system.cubic_cross * (total_sq - yi2);
                for k in 0..m {
                    if k != i {
                        j[(i, k)] = -2.0 * system.cubic_cross * y[i] * y[k];
                    }
                }
            }
        }
        ReducedFamily::Loop => {
            let c = system.cubic_self;
            let (a, b) = (y[0], y[1]);
            j[(0, 0)] = system.beta1 - c * (3.0 * a * a + b * b);
            j[(1, 1)] = system.beta1 - c * (a * a + 3.0 * b * b);
            j[(0, 1)] = -2.0 * c * a * b;
            j[(1, 0)] = -2.0 * c * a * b;
        }
        ReducedFamily::ScalarQuadCubic => {
            let v = y[0];
            j[(0, 0)] = system.beta1 + 2.0 * system.quadratic * v + 3.0 * system.cubic_self * v * v;
        }
        ReducedFamily::WholeSpace { pairs } => {
            let intensity: Vec<f64> =
                (0..pairs).map(|p| y[p] * y[p] + y[pairs + p] * y[pairs + p]).collect();
            let total: f64 = intensity.iter().sum();
            let (c1, c2) = (system.cubic_self, system.cubic_cross);
            for p in 0..pairs {
                let coupling = c1 * intensity[p] + c2 * (total - intensity[p]);
                let (yp, zp) = (y[p], y[pairs + p]);
                j[(p, p)] = system.beta1 - coupling - 2.0 * c1 * yp * yp;
                j[(pairs + p, pairs + p)] = system.beta1 - coupling - 2.0 * c1 * zp * zp;
                j[(p, pairs + p)] = -2.0 * c1 * yp * zp;
                j[(pairs + p, p)] = -2.0 * c1 * yp * zp;
                for q in 0..pairs {
                    if q == p {
                        continue;
                    }
                    j[(p, q)] = -2.0 * c2 * yp * y[q];
                    j[(p, pairs + q)] = -2.0 * c2 * yp * y[pairs + q];
                    j[(pairs + p, q)] = -2.0 * c2 * zp * y[q];
                    j[(pairs + p, pairs + q)] = -2.0 * c2 * zp * y[pairs + q];
                }
            }
        }
    }
    j
}

/// Lyapunov potential of the gradient families (`field = -grad V`).
pub fn potential(system: &ReducedSystem, y: &[f64]) -> f64 {
    match system.family {
        ReducedFamily::RectCubic { m } => {
            let mut v = 0.0;
            for i in 0..m {
                v += -0.5 * system.beta1 * y[i] * y[i] + 0.25 * system.cubic_self * y[i].powi(4);
                for k in (i + 1)..m {
                    v += system.cubic_cross * y[i] * y[i] * y[k] * y[k];
                }
            }
            v
        }
        ReducedFamily::Loop => {
            let r2 = y[0] * y[0] + y[1] * y[1];
            -0.5 * system.beta1 * r2 + 0.25 * system.cubic_self * r2 * r2
        }
        ReducedFamily::ScalarQuadCubic => {
            let v = y[0];
            -0.5 * system.beta1 * v * v - system.quadratic * v.powi(3) / 3.0
                - 0.25 * system.cubic_self * v.powi(4)
        }
        ReducedFamily::WholeSpace { pairs } => {
            let intensity: Vec<f64> =
                (0..pairs).map(|p| y[p] * y[p] + y[pairs + p] * y[pairs + p]).collect();
            let mut v = 0.0;
            for p in 0..pairs {
                v += -0.5 * system.beta1 * intensity[p] + 0.25 * system.cubic_self * intensity[p] * intensity[p];
                for q in (p + 1)..pairs {
                    v += system.cubic_cross * intensity[p] * intensity[q];
                }
            }
            v
        }
    }
}

/// Stability label of an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Attractor,
    Saddle,
    Repeller,
    /// Some eigenvalue is within [`STABILITY_TOL`] of zero.
    Degenerate,
}

impl Stability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stability::Attractor => "attractor",
            Stability::Saddle => "saddle",
            Stability::Repeller => "repeller",
            Stability::Degenerate => "degenerate",
        }
    }
}

/// One equilibrium of the reduced system.
#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub y: Vec<f64>,
    /// Jacobian eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub stability: Stability,
    pub class: SymmetryClass,
}

/// Equilibrium inventory plus warnings about empty strata.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriaReport {
    pub equilibria: Vec<Equilibrium>,
    pub warnings: Vec<String>,
}

fn eigenvalues_sym(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

fn stability_from_eigenvalues(ev: &[f64]) -> Stability {
    if ev.iter().any(|e| e.abs() <= STABILITY_TOL) {
        Stability::Degenerate
    } else if ev.iter().all(|&e| e < 0.0) {
        Stability::Attractor
    } else if ev.iter().all(|&e| e > 0.0) {
        Stability::Repeller
    } else {
        Stability::Saddle
    }
}

fn symmetry_class(y: &[f64]) -> SymmetryClass {
    let nonzero = y.iter().filter(|v| v.abs() > 1e-12).count();
    if nonzero <= 1 {
        SymmetryClass::Axis
    } else if nonzero == y.len() {
        SymmetryClass::FullDiagonal
    } else {
        SymmetryClass::FaceDiagonal
    }
}

/// Damped Newton refinement of an equilibrium seed; tolerance 1e-12 on the
/// sup norm of the field, at most 50 iterations.
pub fn newton_polish(system: &ReducedSystem, seed: &[f64]) -> Option<Vec<f64>> {
    let mut y = DVector::from_column_slice(seed);
    for _ in 0..50 {
        let f = DVector::from_vec(vector_field(system, y.as_slice()));
        let res = f.amax();
        if res < 1e-12 {
            return Some(y.as_slice().to_vec());
        }
        let j = jacobian(system, y.as_slice());
        let step = j.lu().solve(&f)?;
        // damping: halve until the residual does not grow
        let mut scale = 1.0;
        loop {
            let trial = &y - &step * scale;
            let res_trial =
                DVector::from_vec(vector_field(system, trial.as_slice())).amax();
            if res_trial <= res || scale < 1.0 / 64.0 {
                y = trial;
                break;
            }
            scale *= 0.5;
        }
    }
    let res = DVector::from_vec(vector_field(system, y.as_slice())).amax();
    (res < 1e-10).then(|| y.as_slice().to_vec())
}

/// Enumerates all nonzero equilibria of a box reduced system from the closed
/// form over support patterns, polished by Newton and labelled by Jacobian
/// eigenvalues. For `beta1 <= 0` the nontrivial list is empty.
pub fn find_equilibria(system: &ReducedSystem) -> Result<EquilibriaReport> {
    let m = match system.family {
        ReducedFamily::RectCubic { m } => m,
        _ => {
            return Err(Error::InvalidParams(
                "equilibrium enumeration applies to the box cubic family".into(),
            ))
        }
    };
    let mut report = EquilibriaReport { equilibria: Vec::new(), warnings: Vec::new() };
    if system.beta1 <= 0.0 {
        return Ok(report);
    }
    let (a1, a2) = (system.cubic_self, system.cubic_cross);
    for support in 1usize..=m {
        let denom = a1 + (support as f64 - 1.0) * a2;
        if denom <= 0.0 {
            report.warnings.push(format!(
                "stratum with {support} active modes is empty: a1 + (s-1) a2 = {denom:.6e} <= 0"
            ));
            continue;
        }
        let amp = (system.beta1 / denom).sqrt();
        // choose which coordinates are active
        for mask in 1u32..(1 << m) {
            if mask.count_ones() as usize != support {
                continue;
            }
            let active: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            // all sign patterns over the active coordinates
            for signs in 0u32..(1 << support) {
                let mut y = vec![0.0; m];
                for (bit, &i) in active.iter().enumerate() {
                    y[i] = if signs & (1 << bit) != 0 { -amp } else { amp };
                }
                let polished = newton_polish(system, &y).unwrap_or(y);
                let ev = eigenvalues_sym(&jacobian(system, &polished));
                let stability = stability_from_eigenvalues(&ev);
                report.equilibria.push(Equilibrium {
                    class: symmetry_class(&polished),
                    y: polished,
                    eigenvalues: ev,
                    stability,
                });
            }
        }
    }
    Ok(report)
}

/// Eigenvalues of the block Jacobian at a closed-form equilibrium with
/// `support` active coordinates, sorted ascending: `-2 beta1` once,
/// `2 beta1 (a2-a1)/(a1+(s-1)a2)` with multiplicity `s-1`, and
/// `beta1 (a1-a2)/(a1+(s-1)a2)` with multiplicity `m-s`.
pub fn block_eigenvalues(system: &ReducedSystem, support: usize) -> Result<Vec<f64>> {
    let m = match system.family {
        ReducedFamily::RectCubic { m } => m,
        _ => return Err(Error::InvalidParams("block formula applies to the box family".into())),
    };
    if support == 0 || support > m {
        return Err(Error::InvalidParams(format!("support must be 1..={m}, got {support}")));
    }
    let (a1, a2) = (system.cubic_self, system.cubic_cross);
    let denom = a1 + (support as f64 - 1.0) * a2;
    if denom <= 0.0 {
        return Err(Error::InvalidParams("stratum is empty (nonpositive denominator)".into()));
    }
    let mut ev = vec![-2.0 * system.beta1];
    ev.extend(std::iter::repeat_n(2.0 * system.beta1 * (a2 - a1) / denom, support - 1));
    ev.extend(std::iter::repeat_n(system.beta1 * (a1 - a2) / denom, m - support));
    ev.sort_by(|a, b| a.total_cmp(b));
    Ok(ev)
}

/// An invariant straight line through the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct LineOrbit {
    /// Unit direction vector.
    pub direction: Vec<f64>,
    /// Sup norm of the component of the field orthogonal to the line,
    /// sampled along it.
    pub parallelism_residual: f64,
}

/// Straight-line orbit inventory.
#[derive(Debug, Clone, PartialEq)]
pub struct LineOrbitReport {
    pub lines: Vec<LineOrbit>,
    /// Two orbits per verified line (the origin splits it).
    pub orbit_count: usize,
    /// Set when `a1 == a2` and every radial line is invariant.
    pub degenerate_family: Option<String>,
}

/// Verifies the candidate straight-line orbits of a box system with
/// m in {2,3}: coordinate axes, two-mode diagonals, and full diagonals.
pub fn find_straight_line_orbits(system: &ReducedSystem) -> Result<LineOrbitReport> {
    let m = match system.family {
        ReducedFamily::RectCubic { m } if m == 2 || m == 3 => m,
        ReducedFamily::RectCubic { .. } => {
            return Err(Error::InvalidParams("line orbits are enumerated for m in {2,3}".into()))
        }
        _ => return Err(Error::InvalidParams("line orbits apply to the box family".into())),
    };
    let (a1, a2) = (system.cubic_self, system.cubic_cross);
    let scale = a1.abs().max(a2.abs()).max(1.0);
    if (a1 - a2).abs() < 1e-12 * scale {
        return Ok(LineOrbitReport {
            lines: Vec::new(),
            orbit_count: 0,
            degenerate_family: Some(
                "isotropic cubic (sigma1 == sigma2): every radial line is an orbit; \
                 the family is not isolated"
                    .into(),
            ),
        });
    }

    let mut candidates: Vec<Vec<f64>> = Vec::new();
    for i in 0..m {
        let mut d = vec![0.0; m];
        d[i] = 1.0;
        candidates.push(d);
    }
    if m == 2 {
        candidates.push(vec![1.0, 1.0]);
        candidates.push(vec![1.0, -1.0]);
    } else {
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            for s in [1.0, -1.0] {
                let mut d = vec![0.0; m];
                d[i] = 1.0;
                d[j] = s;
                candidates.push(d);
            }
        }
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                candidates.push(vec![1.0, s1, s2]);
            }
        }
    }

    let mut lines = Vec::new();
    for cand in candidates {
        let norm: f64 = cand.iter().map(|v| v * v).sum::<f64>().sqrt();
        let dir: Vec<f64> = cand.iter().map(|v| v / norm).collect();
        let mut residual = 0.0f64;
        for radius in [0.5, 1.0, 2.0] {
            let point: Vec<f64> = dir.iter().map(|v| v * radius).collect();
            let f = vector_field(system, &point);
            let radial: f64 = f.iter().zip(&dir).map(|(a, b)| a * b).sum();
            let orth: f64 = f
                .iter()
                .zip(&dir)
                .map(|(a, b)| a - radial * b)
                .map(|v| v * v)
                .sum::<f64>()
                .sqrt();
            residual = residual.max(orth);
        }
        if residual < 1e-12 * scale.max(system.beta1.abs()) {
            lines.push(LineOrbit { direction: dir, parallelism_residual: residual });
        }
    }
    let orbit_count = 2 * lines.len();
    Ok(LineOrbitReport { lines, orbit_count, degenerate_family: None })
}

/// Verdict on the origin at criticality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OriginVerdict {
    AsymptoticallyStable,
    Unstable,
    /// The cubic form is below 1e-12 everywhere on the sphere.
    Indeterminate,
}

/// Result of the origin stability test at criticality.
#[derive(Debug, Clone, PartialEq)]
pub struct OriginReport {
    pub verdict: OriginVerdict,
    /// Maximum of the radial cubic component `<g(y), y>` over the unit sphere.
    pub max_radial: f64,
    /// The sign test `sigma1 > 0 && sigma1 + sigma2 > 0` (equivalently on
    /// `a1`, `a2`); exact for m <= 2, necessary for m = 3.
    pub sign_test: bool,
}

/// Decides asymptotic stability of the origin at criticality (`beta1 = 0`)
/// by maximizing the radial component of the cubic field over the unit
/// sphere. The maximum is found numerically over a deterministic direction
/// sweep and cross-checked against the exact value on the intensity simplex.
pub fn classify_origin(system: &ReducedSystem) -> Result<OriginReport> {
    let m = match system.family {
        ReducedFamily::RectCubic { m } => m,
        ReducedFamily::Loop => 2,
        _ => {
            return Err(Error::InvalidParams(
                "origin classification applies to the cubic families".into(),
            ))
        }
    };
    if system.beta1.abs() > 1e-9 {
        return Err(Error::InvalidParams(format!(
            "origin test requires beta1 = 0 (criticality), got {}",
            system.beta1
        )));
    }
    let (a1, a2) = (system.cubic_self, system.cubic_cross);

    // Exact: <g(y), y> = -[(a1 - a2) S + a2] with S = sum y_i^4 in [1/m, 1].
    let value_at = |s: f64| -((a1 - a2) * s + a2);
    let exact_max = value_at(1.0).max(value_at(1.0 / m as f64));

    // Numeric sweep over the sphere.
    let mut max_radial = f64::NEG_INFINITY;
    let steps = 60;
    let mut eval = |y: &[f64]| {
        let f = vector_field(system, y);
        let radial: f64 = f.iter().zip(y).map(|(a, b)| a * b).sum();
        max_radial = max_radial.max(radial);
    };
    match m {
        1 => {
            eval(&[1.0]);
            eval(&[-1.0]);
        }
        2 => {
            for i in 0..(4 * steps) {
                let t = 2.0 * PI * i as f64 / (4 * steps) as f64;
                eval(&[t.cos(), t.sin()]);
            }
        }
        _ => {
            for i in 0..(2 * steps) {
                let phi = PI * i as f64 / (2 * steps) as f64;
                for j in 0..(4 * steps) {
                    let th = 2.0 * PI * j as f64 / (4 * steps) as f64;
                    eval(&[phi.sin() * th.cos(), phi.sin() * th.sin(), phi.cos()]);
                }
            }
        }
    }
    max_radial = max_radial.max(exact_max);

    let scale = a1.abs().max(a2.abs()).max(1e-30);
    let verdict = if max_radial.abs() < 1e-12 * scale {
        OriginVerdict::Indeterminate
    } else if max_radial < 0.0 {
        OriginVerdict::AsymptoticallyStable
    } else {
        OriginVerdict::Unstable
    };
    Ok(OriginReport { verdict, max_radial, sign_test: a1 > 0.0 && a1 + a2 > 0.0 })
}

/// A computed trajectory of the reduced system.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

/// Fixed-step fourth-order (classic Runge-Kutta) integration.
pub fn integrate(system: &ReducedSystem, y0: &[f64], t_end: f64, dt: f64) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParams(format!("dt must be > 0, got {dt}")));
    }
    if y0.len() != system.dim() {
        return Err(Error::SizeMismatch(format!(
            "state has {} entries, system dimension is {}",
            y0.len(),
            system.dim()
        )));
    }
    let steps = (t_end / dt).ceil() as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut y = y0.to_vec();
    let mut t = 0.0;
    times.push(t);
    states.push(y.clone());
    let axpy = |y: &[f64], k: &[f64], h: f64| -> Vec<f64> {
        y.iter().zip(k).map(|(a, b)| a + h * b).collect()
    };
    for _ in 0..steps {
        let k1 = vector_field(system, &y);
        let k2 = vector_field(system, &axpy(&y, &k1, dt / 2.0));
        let k3 = vector_field(system, &axpy(&y, &k2, dt / 2.0));
        let k4 = vector_field(system, &axpy(&y, &k3, dt));
        for i in 0..y.len() {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += dt;
        let norm: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() || norm > BLOWUP_RADIUS {
            return Err(Error::BlowUp(BLOWUP_RADIUS));
        }
        times.push(t);
        states.push(y.clone());
    }
    Ok(Trajectory { times, states })
}

/// A saddle-node point of the scalar family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fold {
    pub lambda_star: f64,
    pub y_star: f64,
}

/// Locates the fold of `dv/dt = lambda v + q v^2 + c v^3`, where the nonzero
/// equilibrium pair `v = (-q +- sqrt(q^2 - 4 c lambda)) / (2c)` merges:
/// `lambda* = q^2 / (4c)`, `v* = -q / (2c)`. Errors when `c = 0` (no fold)
/// or the fold lies outside `lambda_range`.
pub fn fold_point(system: &ReducedSystem, lambda_range: (f64, f64)) -> Result<Fold> {
    if system.family != ReducedFamily::ScalarQuadCubic {
        return Err(Error::InvalidParams("fold location applies to the scalar family".into()));
    }
    let (q, c) = (system.quadratic, system.cubic_self);
    if q == 0.0 {
        // pitchfork degeneracy: the pair merges at the origin
        return Ok(Fold { lambda_star: 0.0, y_star: 0.0 });
    }
    if c == 0.0 {
        return Err(Error::NoFold);
    }
    let lambda_star = q * q / (4.0 * c);
    let y_star = -q / (2.0 * c);
    if lambda_star < lambda_range.0 || lambda_star > lambda_range.1 {
        return Err(Error::NoFold);
    }
    Ok(Fold { lambda_star, y_star })
}

/// Nonzero equilibria of the scalar family at its current `beta1`,
/// ascending. Used for normal-form branch continuation.
pub fn scalar_equilibria(system: &ReducedSystem) -> Result<Vec<f64>> {
    if system.family != ReducedFamily::ScalarQuadCubic {
        return Err(Error::InvalidParams("scalar equilibria need the scalar family".into()));
    }
    let (lam, q, c) = (system.beta1, system.quadratic, system.cubic_self);
    let mut roots = Vec::new();
    if c == 0.0 {
        if q != 0.0 {
            roots.push(-lam / q);
        }
    } else {
        let disc = q * q - 4.0 * c * lam;
        if disc >= 0.0 {
            let s = disc.sqrt();
            roots.push((-q + s) / (2.0 * c));
            roots.push((-q - s) / (2.0 * c));
        }
    }
    roots.retain(|v| v.abs() > 0.0 && v.is_finite());
    roots.sort_by(|a, b| a.total_cmp(b));
    Ok(roots)
}
