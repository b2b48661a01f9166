//! Domain geometry, eigenbases, and exact mode-product integrals.
//!
//! Three domain families are supported, each with an explicit eigenbasis of
//! the negative Laplacian restricted to zero-mean functions:
//!
//! * `Rectangular`: box (0,L1) x .. x (0,Ln), 1 <= n <= 3, with no-flux walls.
//!   Eigenfunctions are products of unit-amplitude cosines,
//!   `rho_K = pi^2 sum_i k_i^2 / L_i^2`.
//! * `Loop`: thin annulus of mean radius `r0` and unit gap, flattened to
//!   (theta, r) with the separable operator `d^2/dr^2 + r0^-2 d^2/dtheta^2`.
//!   Fourier modes around the loop, cosines across the gap,
//!   `rho = (k_theta/r0)^2 + (pi k_r)^2`.
//! * `Torus`: [0, 2pi)^n periodic box; `cos(k.x)` / `sin(k.x)` pairs with
//!   `rho = |k|^2`.
//!
//! The constant mode is excluded everywhere: total solute is conserved, so
//! all fields live in the zero-mean subspace.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Relative tolerance for grouping degenerate eigenvalues.
pub const EIGENVALUE_TIE_TOL: f64 = 1e-9;

/// Geometry family.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind {
    /// Box with no-flux (Neumann) walls; `lengths.len()` in 1..=3.
    Rectangular { lengths: Vec<f64> },
    /// Thin loop of mean radius `r0`, unit gap.
    Loop { r0: f64 },
    /// Periodic box [0,2pi)^n, `dim` in 1..=3.
    Torus { dim: usize },
}

/// A domain plus its collocation resolution (same point count per axis).
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub grid_points_per_dim: usize,
}

/// One collocation/spectral axis of the tensor grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    /// Cosine (Neumann) axis over (0, length); midpoint collocation.
    Cosine { length: f64 },
    /// Periodic axis over [0, 2pi); `freq_scale` multiplies the integer
    /// wavenumber in the eigenvalue (1 for torus axes, 1/r0 for the loop).
    Periodic { freq_scale: f64 },
}

/// Trigonometric parity of a mode. Rectangular modes are always `Cosine`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Cosine,
    Sine,
}

/// Index of a single eigenfunction.
///
/// * Rectangular: `k[i] >= 0` per axis, not all zero, parity `Cosine`.
/// * Loop: `k = [k_theta, k_r]`, parity applies to the theta factor.
/// * Torus: canonical wave vector (first nonzero entry positive); parity
///   selects `cos(k.x)` or `sin(k.x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    pub k: Vec<i32>,
    pub parity: Parity,
}

impl ModeIndex {
    pub fn cosine(k: &[i32]) -> Self {
        ModeIndex { k: k.to_vec(), parity: Parity::Cosine }
    }

    pub fn sine(k: &[i32]) -> Self {
        ModeIndex { k: k.to_vec(), parity: Parity::Sine }
    }

    /// Short label used in CSV headers, e.g. `1_0` or `s1_0`.
    pub fn label(&self) -> String {
        let body: Vec<String> = self.k.iter().map(|k| k.to_string()).collect();
        match self.parity {
            Parity::Cosine => body.join("_"),
            Parity::Sine => format!("s{}", body.join("_")),
        }
    }
}

impl DomainSpec {
    pub fn rectangular(lengths: &[f64], grid_points_per_dim: usize) -> Result<Self> {
        let spec = DomainSpec {
            kind: DomainKind::Rectangular { lengths: lengths.to_vec() },
            grid_points_per_dim,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn loop_domain(r0: f64, grid_points_per_dim: usize) -> Result<Self> {
        let spec = DomainSpec { kind: DomainKind::Loop { r0 }, grid_points_per_dim };
        spec.validate()?;
        Ok(spec)
    }

    pub fn torus(dim: usize, grid_points_per_dim: usize) -> Result<Self> {
        let spec = DomainSpec { kind: DomainKind::Torus { dim }, grid_points_per_dim };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.grid_points_per_dim < 16 {
            return Err(Error::InvalidParams(format!(
                "grid_points_per_dim must be >= 16, got {}",
                self.grid_points_per_dim
            )));
        }
        match &self.kind {
            DomainKind::Rectangular { lengths } => {
                if lengths.is_empty() || lengths.len() > 3 {
                    return Err(Error::InvalidParams(format!(
                        "rectangular domain needs 1..=3 lengths, got {}",
                        lengths.len()
                    )));
                }
                for &l in lengths {
                    if !(l.is_finite() && l > 0.0) {
                        return Err(Error::InvalidParams(format!("side length must be > 0, got {l}")));
                    }
                }
            }
            DomainKind::Loop { r0 } => {
                if !(r0.is_finite() && *r0 > 0.0) {
                    return Err(Error::InvalidParams(format!("loop radius must be > 0, got {r0}")));
                }
            }
            DomainKind::Torus { dim } => {
                if *dim == 0 || *dim > 3 {
                    return Err(Error::InvalidParams(format!("torus dimension must be 1..=3, got {dim}")));
                }
            }
        }
        Ok(())
    }

    /// Non-fatal configuration advisories (thin-gap assumption, etc).
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if let DomainKind::Loop { r0 } = self.kind {
            if r0 < 3.0 {
                w.push(format!(
                    "loop mean radius r0={r0} is below 3; the thin-gap operator assumes r0 >> 1"
                ));
            }
        }
        w
    }

    /// Tensor rank of the collocation grid.
    pub fn dims(&self) -> usize {
        match &self.kind {
            DomainKind::Rectangular { lengths } => lengths.len(),
            DomainKind::Loop { .. } => 2,
            DomainKind::Torus { dim } => *dim,
        }
    }

    /// Measure of the domain (loop uses the flattened (theta, r) measure).
    pub fn volume(&self) -> f64 {
        match &self.kind {
            DomainKind::Rectangular { lengths } => lengths.iter().product(),
            DomainKind::Loop { .. } => 2.0 * std::f64::consts::PI,
            DomainKind::Torus { dim } => (2.0 * std::f64::consts::PI).powi(*dim as i32),
        }
    }

    /// Per-axis description, in tensor order.
    pub fn axes(&self) -> Vec<Axis> {
        match &self.kind {
            DomainKind::Rectangular { lengths } => {
                lengths.iter().map(|&l| Axis::Cosine { length: l }).collect()
            }
            DomainKind::Loop { r0 } => vec![
                Axis::Periodic { freq_scale: 1.0 / r0 },
                Axis::Cosine { length: 1.0 },
            ],
            DomainKind::Torus { dim } => {
                vec![Axis::Periodic { freq_scale: 1.0 }; *dim]
            }
        }
    }

    /// Checks that a mode index is admissible for this domain.
    pub fn validate_mode(&self, mode: &ModeIndex) -> Result<()> {
        if mode.k.len() != self.dims() {
            return Err(Error::InvalidParams(format!(
                "mode has {} components, domain has {} axes",
                mode.k.len(),
                self.dims()
            )));
        }
        if mode.k.iter().all(|&k| k == 0) {
            return Err(Error::InvalidParams(
                "the constant mode |K|^2 = 0 is excluded by the zero-mean constraint".into(),
            ));
        }
        match &self.kind {
            DomainKind::Rectangular { .. } => {
                if mode.parity == Parity::Sine {
                    return Err(Error::InvalidParams("rectangular modes are cosines only".into()));
                }
                if mode.k.iter().any(|&k| k < 0) {
                    return Err(Error::InvalidParams("rectangular wavenumbers must be >= 0".into()));
                }
            }
            DomainKind::Loop { .. } => {
                if mode.k.iter().any(|&k| k < 0) {
                    return Err(Error::InvalidParams("loop wavenumbers must be >= 0".into()));
                }
                if mode.parity == Parity::Sine && mode.k[0] == 0 {
                    return Err(Error::InvalidParams("sine parity needs k_theta >= 1".into()));
                }
            }
            DomainKind::Torus { .. } => {
                let first = mode.k.iter().find(|&&k| k != 0).copied().unwrap_or(0);
                if first < 0 {
                    return Err(Error::InvalidParams(
                        "torus wave vectors are canonical: first nonzero entry positive".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Laplacian eigenvalue `rho_K` of a mode.
    pub fn rho(&self, mode: &ModeIndex) -> f64 {
        let axes = self.axes();
        mode.k
            .iter()
            .zip(axes.iter())
            .map(|(&k, axis)| match axis {
                Axis::Cosine { length } => {
                    let f = k as f64 * std::f64::consts::PI / length;
                    f * f
                }
                Axis::Periodic { freq_scale } => {
                    let f = k as f64 * freq_scale;
                    f * f
                }
            })
            .sum()
    }
}

/// Linearized growth rate `beta_K(lambda) = rho_K (lambda - rho_K)` of a mode.
pub fn growth_rate(domain: &DomainSpec, mode: &ModeIndex, lambda: f64) -> f64 {
    let rho = domain.rho(mode);
    rho * (lambda - rho)
}

/// Enumerates the eigenbasis up to `max_modes_per_dim` wavenumbers per axis,
/// sorted by ascending eigenvalue; ties are broken lexicographically by the
/// index vector, cosine before sine. Degenerate eigenvalues appear once per
/// index.
pub fn build_basis(domain: &DomainSpec, max_modes_per_dim: usize) -> Vec<(ModeIndex, f64)> {
    let mut modes: Vec<ModeIndex> = Vec::new();
    match &domain.kind {
        DomainKind::Rectangular { lengths } => {
            let n = lengths.len();
            let mut k = vec![0i32; n];
            enumerate_nonneg(&mut k, 0, max_modes_per_dim as i32, &mut |k| {
                if k.iter().any(|&v| v != 0) {
                    modes.push(ModeIndex::cosine(k));
                }
            });
        }
        DomainKind::Loop { .. } => {
            let max = max_modes_per_dim as i32;
            for kt in 0..max {
                for kr in 0..max {
                    if kt == 0 && kr == 0 {
                        continue;
                    }
                    modes.push(ModeIndex::cosine(&[kt, kr]));
                    if kt >= 1 {
                        modes.push(ModeIndex::sine(&[kt, kr]));
                    }
                }
            }
        }
        DomainKind::Torus { dim } => {
            let max = max_modes_per_dim as i32;
            let mut k = vec![0i32; *dim];
            enumerate_signed(&mut k, 0, max, &mut |k| {
                let first = k.iter().find(|&&v| v != 0).copied().unwrap_or(0);
                if first > 0 {
                    modes.push(ModeIndex::cosine(k));
                    modes.push(ModeIndex::sine(k));
                }
            });
        }
    }
    let mut with_rho: Vec<(ModeIndex, f64)> =
        modes.into_iter().map(|m| { let r = domain.rho(&m); (m, r) }).collect();
    with_rho.sort_by(|a, b| {
        a.1.total_cmp(&b.1)
            .then_with(|| a.0.k.cmp(&b.0.k))
            .then_with(|| a.0.parity.cmp(&b.0.parity))
    });
    with_rho
}

fn enumerate_nonneg(k: &mut Vec<i32>, axis: usize, max: i32, f: &mut impl FnMut(&Vec<i32>)) {
    if axis == k.len() {
        f(k);
        return;
    }
    for v in 0..max {
        k[axis] = v;
        enumerate_nonneg(k, axis + 1, max, f);
    }
    k[axis] = 0;
}

fn enumerate_signed(k: &mut Vec<i32>, axis: usize, max: i32, f: &mut impl FnMut(&Vec<i32>)) {
    if axis == k.len() {
        f(k);
        return;
    }
    for v in -(max - 1)..max {
        k[axis] = v;
        enumerate_signed(k, axis + 1, max, f);
    }
    k[axis] = 0;
}

/// First (minimal) eigenvalue and its multiplicity, using the relative tie
/// tolerance [`EIGENVALUE_TIE_TOL`].
pub fn first_eigenvalue(basis: &[(ModeIndex, f64)]) -> Option<(f64, usize)> {
    let rho1 = basis.first()?.1;
    let mult = basis.iter().take_while(|(_, r)| *r <= rho1 * (1.0 + EIGENVALUE_TIE_TOL)).count();
    Some((rho1, mult))
}

/// The modes attaining the minimal eigenvalue.
pub fn first_modes(domain: &DomainSpec, max_modes_per_dim: usize) -> Vec<ModeIndex> {
    let basis = build_basis(domain, max_modes_per_dim);
    match first_eigenvalue(&basis) {
        Some((_, mult)) => basis.into_iter().take(mult).map(|(m, _)| m).collect(),
        None => Vec::new(),
    }
}

/// Exact integral over the domain of a product of 2..=4 eigenfunctions.
///
/// Each eigenfunction is expanded into complex exponentials with integer
/// frequency vectors; only the zero-frequency combinations survive
/// integration, so the result is a finite rational combination of the axis
/// lengths. No sampled quadrature is involved.
pub fn mode_product_integral(domain: &DomainSpec, modes: &[&ModeIndex]) -> Result<f64> {
    if modes.len() < 2 || modes.len() > 4 {
        return Err(Error::InvalidParams(format!(
            "mode_product_integral takes 2..=4 modes, got {}",
            modes.len()
        )));
    }
    for m in modes {
        domain.validate_mode(m)?;
    }
    let dims = domain.dims();
    // Term = (coefficient, integer frequency per axis).
    type Term = (Complex64, Vec<i64>);
    let half = Complex64::new(0.5, 0.0);
    let half_over_i = Complex64::new(0.0, -0.5); // 1/(2i)

    let expand = |mode: &ModeIndex| -> Vec<Term> {
        match &domain.kind {
            DomainKind::Rectangular { .. } => {
                // Product over axes of cos(k pi x / L): split each nonzero k
                // into two exponentials.
                let mut terms: Vec<Term> = vec![(Complex64::new(1.0, 0.0), vec![0i64; dims])];
                for (axis, &k) in mode.k.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    let mut next = Vec::with_capacity(terms.len() * 2);
                    for (c, f) in &terms {
                        for sign in [1i64, -1] {
                            let mut f2 = f.clone();
                            f2[axis] = sign * k as i64;
                            next.push((c * half, f2));
                        }
                    }
                    terms = next;
                }
                terms
            }
            DomainKind::Loop { .. } => {
                // theta factor (cos or sin of k_theta theta) times a gap cosine.
                let kt = mode.k[0] as i64;
                let kr = mode.k[1] as i64;
                let theta_terms: Vec<(Complex64, i64)> = if kt == 0 {
                    vec![(Complex64::new(1.0, 0.0), 0)]
                } else {
                    match mode.parity {
                        Parity::Cosine => vec![(half, kt), (half, -kt)],
                        Parity::Sine => vec![(half_over_i, kt), (-half_over_i, -kt)],
                    }
                };
                let r_terms: Vec<(Complex64, i64)> = if kr == 0 {
                    vec![(Complex64::new(1.0, 0.0), 0)]
                } else {
                    vec![(half, kr), (half, -kr)]
                };
                let mut terms = Vec::new();
                for (ct, ft) in &theta_terms {
                    for (cr, fr) in &r_terms {
                        terms.push((ct * cr, vec![*ft, *fr]));
                    }
                }
                terms
            }
            DomainKind::Torus { .. } => {
                let k: Vec<i64> = mode.k.iter().map(|&v| v as i64).collect();
                let neg: Vec<i64> = k.iter().map(|v| -v).collect();
                match mode.parity {
                    Parity::Cosine => vec![(half, k), (half, neg)],
                    Parity::Sine => vec![(half_over_i, k), (-half_over_i, neg)],
                }
            }
        }
    };

    let mut product: Vec<Term> = vec![(Complex64::new(1.0, 0.0), vec![0i64; dims])];
    for mode in modes {
        let factor = expand(mode);
        let mut next = Vec::with_capacity(product.len() * factor.len());
        for (c1, f1) in &product {
            for (c2, f2) in &factor {
                let f: Vec<i64> = f1.iter().zip(f2).map(|(a, b)| a + b).collect();
                next.push((c1 * c2, f));
            }
        }
        product = next;
    }

    let dc: Complex64 = product
        .into_iter()
        .filter(|(_, f)| f.iter().all(|&v| v == 0))
        .map(|(c, _)| c)
        .sum();
    debug_assert!(dc.im.abs() < 1e-14);
    Ok(dc.re * domain.volume())
}
