//! From material parameters to phase-diagram predictions.
//!
//! The regular-solution molar free energy
//!
//! ```text
//! g(u) = mu_A (1-u) + mu_B u + R T [(1-u) ln(1-u) + u ln u] + a u (1-u)
//! ```
//!
//! yields the control parameter `lambda(T) = 2 a l^2/k - l^2 R T / (k u0 (1-u0))`.
//! Phase separation needs `lambda(T) > C/L^2`, which produces a critical
//! temperature `T0(L)` and a critical container size `L0` below which no
//! separation occurs at any temperature. The homogeneous (spinodal)
//! expansion of `-dg/du` around `u0` gives the scalar normal form with
//! coefficients `b2 = -g'''(u0)/2`, `b3 = -g''''(u0)/6`; its fold condition
//! `b2^2 - 4 b3 lambda = 0` defines `T*(u0) >= T0(u0)`, bounding the
//! metastable band of the diagram.
//!
//! `b2`/`b3` come from differentiating `g` directly. The printed closed
//! form for `b3` disagrees with that differentiation (at `u0 = 1/2` it
//! gives `-16RT` against `-16RT/3`); both values are carried so the
//! discrepancy can be reported, never silently corrected.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::solver::{BifurcationBranch, RowStatus};
use std::f64::consts::PI;

/// Physical inputs of the phase-diagram map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Repulsion measure between the two components (energy/mole).
    pub a: f64,
    /// Molar gas constant (energy/mole/K).
    pub gas_constant: f64,
    /// Molar fraction of component B, in (0,1).
    pub u0: f64,
    /// Reference length of the nondimensionalization.
    pub l: f64,
    /// Mobility coefficient.
    pub k: f64,
    /// Geometry constant `C` in `lambda = C/L^2`; `pi^2` for a box.
    pub c_geom: f64,
}

impl MaterialParams {
    pub fn new(a: f64, gas_constant: f64, u0: f64, l: f64, k: f64, c_geom: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("R", gas_constant), ("l", l), ("k", k), ("C", c_geom)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(u0.is_finite() && u0 > 0.0 && u0 < 1.0) {
            return Err(Error::InvalidParams(format!("u0 must lie in (0,1), got {u0}")));
        }
        Ok(MaterialParams { a, gas_constant, u0, l, k, c_geom })
    }

    /// Unit material: `a = R = l = k = 1`, `u0 = 1/2`, `C = pi^2`.
    pub fn unit() -> Self {
        MaterialParams { a: 1.0, gas_constant: 1.0, u0: 0.5, l: 1.0, k: 1.0, c_geom: PI * PI }
    }

    pub fn with_u0(&self, u0: f64) -> Result<Self> {
        MaterialParams::new(self.a, self.gas_constant, u0, self.l, self.k, self.c_geom)
    }
}

/// `lambda(T) = 2 a l^2 / k - l^2 R T / (k u0 (1-u0))`.
pub fn lambda_of_t(mat: &MaterialParams, t: f64) -> f64 {
    let l2k = mat.l * mat.l / mat.k;
    2.0 * mat.a * l2k - l2k * mat.gas_constant * t / (mat.u0 * (1.0 - mat.u0))
}

/// Temperature at which `lambda` changes sign (infinite-domain limit):
/// `T1 = 2 a u0 (1-u0) / R`.
pub fn lambda_sign_change_temperature(mat: &MaterialParams) -> f64 {
    2.0 * mat.a * mat.u0 * (1.0 - mat.u0) / mat.gas_constant
}

/// Critical temperature of a container of diameter scale `length`:
/// the root of `lambda(T) = C / L^2`, or `None` when it is not positive
/// (no separation at any temperature).
pub fn critical_temperature(mat: &MaterialParams, length: f64) -> Option<f64> {
    let t0 = mat.u0 * (1.0 - mat.u0)
        * (2.0 * mat.a - mat.c_geom * mat.k / (mat.l * mat.l * length * length))
        / mat.gas_constant;
    (t0 > 0.0).then_some(t0)
}

/// Critical container size `L0 = sqrt(C k / (2 a l^2))`: below it
/// `lambda(0) < C/L^2` and no separation occurs.
pub fn critical_length(mat: &MaterialParams) -> f64 {
    (mat.c_geom * mat.k / (2.0 * mat.a * mat.l * mat.l)).sqrt()
}

/// Coefficients of the homogeneous (spinodal) normal form at `(u0, T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinodalCoefficients {
    /// `2a - RT/(u0(1-u0))`.
    pub lambda: f64,
    /// `-g'''(u0)/2 = RT (1-2u0) / (2 u0^2 (1-u0)^2)`.
    pub b2: f64,
    /// `-g''''(u0)/6 = -RT (1 - 3u0 + 3u0^2) / (3 u0^3 (1-u0)^3)`; negative
    /// on all of (0,1).
    pub b3: f64,
    /// The printed closed form `-(1-u0-2u0^2+3u0^3) RT / (3 u0^3 (1-u0)^4)`,
    /// carried for discrepancy reporting.
    pub b3_printed: f64,
}

/// Taylor coefficients of `-dg/du` around `u0` from the analytic third and
/// fourth derivatives of the free energy.
pub fn spinodal_coefficients(mat: &MaterialParams, t: f64) -> Result<SpinodalCoefficients> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParams(format!("temperature must be > 0, got {t}")));
    }
    let u = mat.u0;
    if !(1e-6..=1.0 - 1e-6).contains(&u) {
        return Err(Error::InvalidParams(format!("u0 = {u} is too close to 0 or 1")));
    }
    let rt = mat.gas_constant * t;
    let lambda = 2.0 * mat.a - rt / (u * (1.0 - u));
    let b2 = rt * (1.0 - 2.0 * u) / (2.0 * u * u * (1.0 - u) * (1.0 - u));
    let b3 = -rt * (1.0 - 3.0 * u + 3.0 * u * u) / (3.0 * u.powi(3) * (1.0 - u).powi(3));
    let b3_printed =
        -(1.0 - u - 2.0 * u * u + 3.0 * u.powi(3)) * rt / (3.0 * u.powi(3) * (1.0 - u).powi(4));
    Ok(SpinodalCoefficients { lambda, b2, b3, b3_printed })
}

/// The fold temperature `T*` and the printed-formula value for comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TStar {
    /// Root of `b2(T)^2 - 4 b3(T) lambda(T) = 0`, located by bisection.
    pub bisected: f64,
    /// `T* = 2 a u0 (1-u0) / (R (1 - beta(u0)))` with the printed `beta`.
    pub printed: f64,
}

/// Solves the fold condition for `T`. The discriminant is positive for small
/// `T` and negative for large `T`; the sign change is bracketed on
/// `(0, 10 T1]` and bisected to relative 1e-12.
pub fn t_star(mat: &MaterialParams) -> Result<TStar> {
    let t1 = lambda_sign_change_temperature(mat);
    let disc = |t: f64| -> Result<f64> {
        let c = spinodal_coefficients(mat, t)?;
        Ok(c.b2 * c.b2 - 4.0 * c.b3 * c.lambda)
    };
    let mut lo = 1e-12 * t1;
    let mut hi = lo;
    let mut found = false;
    // march up to 10 T1 looking for the sign change
    let steps = 400;
    let mut prev_t = lo;
    let mut prev_d = disc(lo)?;
    for i in 1..=steps {
        let t = 10.0 * t1 * i as f64 / steps as f64;
        let d = disc(t)?;
        if prev_d > 0.0 && d <= 0.0 {
            lo = prev_t;
            hi = t;
            found = true;
            break;
        }
        prev_t = t;
        prev_d = d;
    }
    if !found {
        return Err(Error::Numerical(format!(
            "no root of the fold discriminant in (0, {:.3e}]",
            10.0 * t1
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if disc(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) < 1e-12 * hi {
            break;
        }
    }
    let bisected = 0.5 * (lo + hi);

    let u = mat.u0;
    let beta_printed = 3.0 * (1.0 - 2.0 * u).powi(2) * (1.0 - u)
        / (16.0 * (1.0 - u - 2.0 * u * u + 3.0 * u.powi(3)));
    let printed = 2.0 * mat.a * u * (1.0 - u) / (mat.gas_constant * (1.0 - beta_printed));
    Ok(TStar { bisected, printed })
}

/// Latent heat released when the system jumps from the homogeneous state to
/// a separated state `u`: `dH = -(alpha2 T / alpha1) int u^2 dx <= 0`.
pub fn latent_heat(u_steady: &SpectralField, alpha1: f64, alpha2: f64, t: f64) -> Result<f64> {
    if !(alpha1 > 0.0 && alpha1.is_finite()) {
        return Err(Error::InvalidParams(format!("alpha1 must be > 0, got {alpha1}")));
    }
    Ok(-(alpha2 * t / alpha1) * u_steady.l2_sq())
}

/// Heat-capacity jump at `T0` from a branch of converged free energies
/// parameterized by temperature: `dC = -T0 (F''_below - F''_above)`, with
/// each side's second derivative taken from a least-squares quadratic in
/// `T - T0`. Rows on the homogeneous side with `F = 0` contribute zero.
pub fn heat_capacity_jump(branch: &BifurcationBranch, t0: f64) -> Result<f64> {
    let mut below: Vec<(f64, f64)> = Vec::new();
    let mut above: Vec<(f64, f64)> = Vec::new();
    for row in &branch.rows {
        let Some(t) = row.temperature else { continue };
        if !matches!(row.status, RowStatus::Converged | RowStatus::Jumped) {
            continue;
        }
        if !row.energy.is_finite() {
            continue;
        }
        if t < t0 {
            below.push((t - t0, row.energy));
        } else if t > t0 {
            above.push((t - t0, row.energy));
        }
    }
    if below.len() < 3 || above.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need >= 3 converged rows on each side of T0, got {} below / {} above",
            below.len(),
            above.len()
        )));
    }
    let second_derivative = |pts: &[(f64, f64)]| -> f64 {
        // least squares fit F = c0 + c1 x + c2 x^2; returns 2 c2
        let n = pts.len() as f64;
        let (mut sx, mut sx2, mut sx3, mut sx4) = (0.0, 0.0, 0.0, 0.0);
        let (mut sy, mut sxy, mut sx2y) = (0.0, 0.0, 0.0);
        for &(x, y) in pts {
            let x2 = x * x;
            sx += x;
            sx2 += x2;
            sx3 += x2 * x;
            sx4 += x2 * x2;
            sy += y;
            sxy += x * y;
            sx2y += x2 * y;
        }
        let m = nalgebra::Matrix3::new(n, sx, sx2, sx, sx2, sx3, sx2, sx3, sx4);
        let rhs = nalgebra::Vector3::new(sy, sxy, sx2y);
        match m.lu().solve(&rhs) {
            Some(c) => 2.0 * c[2],
            None => f64::NAN,
        }
    };
    let f2_below = second_derivative(&below);
    let f2_above = second_derivative(&above);
    if !(f2_below.is_finite() && f2_above.is_finite()) {
        return Err(Error::Numerical("degenerate quadratic fit near T0".into()));
    }
    Ok(-t0 * (f2_below - f2_above))
}

/// Region of the `(u0, T)` diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseRegion {
    /// `T > T*`: the homogeneous state is the only stable one.
    Stable,
    /// `T0 < T <= T*`: homogeneous and separated states coexist.
    Metastable,
    /// `T <= T0`: the homogeneous state is unstable (spinodal).
    Unstable,
}

impl PhaseRegion {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseRegion::Stable => "stable",
            PhaseRegion::Metastable => "metastable",
            PhaseRegion::Unstable => "unstable",
        }
    }
}

/// One cell of the emitted diagram table.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramRow {
    pub u0: f64,
    pub t: f64,
    /// Spinodal curve `T0(u0) = 2 a u0 (1-u0) / R`.
    pub t0: f64,
    /// Fold curve `T*(u0)` (bisected).
    pub t_star: f64,
    pub region: PhaseRegion,
}

/// Tabulates the diagram regions over a `u0` x `T` grid. The metastable
/// band is `T0 < T <= T*`; it has zero width at `u0 = 1/2`.
pub fn emit_diagram(mat: &MaterialParams, u0_grid: &[f64], t_grid: &[f64]) -> Result<Vec<DiagramRow>> {
    if u0_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::InvalidParams("diagram grids must be non-empty".into()));
    }
    let mut rows = Vec::with_capacity(u0_grid.len() * t_grid.len());
    for &u0 in u0_grid {
        let m = mat.with_u0(u0)?;
        let t0 = lambda_sign_change_temperature(&m);
        let ts = t_star(&m)?.bisected;
        for &t in t_grid {
            let region = if t > ts {
                PhaseRegion::Stable
            } else if t > t0 {
                PhaseRegion::Metastable
            } else {
                PhaseRegion::Unstable
            };
            rows.push(DiagramRow { u0, t, t0, t_star: ts, region });
        }
    }
    Ok(rows)
}
