//! Independent oracles for the integration suites.
//!
//! Everything here deliberately avoids the crate's solver/enumeration code
//! paths: hand-rolled cosine transforms, finite differences, multi-start
//! Newton, dense continuation. Results from these routines are compared
//! against the implementation, never derived from it.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinodal::reduced::{self, ReducedSystem};
use std::f64::consts::PI;

/// Steady states of the 1-D box problem by Newton on a cosine-Galerkin
/// truncation: `(rho_k - lambda) a_k + N_k(a) = 0` for `k = 1..=n_modes`,
/// `N = gamma2 u^2 + gamma3 u^3`.
pub struct Galerkin1d {
    pub length: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub lambda: f64,
    pub n_modes: usize,
}

impl Galerkin1d {
    fn nodal(&self, a: &[f64], grid: usize) -> Vec<f64> {
        let mut u = vec![0.0; grid];
        for (j, uj) in u.iter_mut().enumerate() {
            let x = (j as f64 + 0.5) / grid as f64; // x / L
            let mut acc = 0.0;
            for (k, ak) in a.iter().enumerate() {
                acc += ak * ((k + 1) as f64 * PI * x).cos();
            }
            *uj = acc;
        }
        u
    }

    /// Residual vector of the truncated steady equation.
    pub fn residual(&self, a: &[f64]) -> Vec<f64> {
        let grid = 8 * self.n_modes.max(8);
        let u = self.nodal(a, grid);
        let n: Vec<f64> =
            u.iter().map(|&v| self.gamma2 * v * v + self.gamma3 * v * v * v).collect();
        // forward cosine transform of N on the midpoint grid
        let mut res = vec![0.0; self.n_modes];
        for (k, rk) in res.iter_mut().enumerate() {
            let kk = (k + 1) as f64;
            let mut acc = 0.0;
            for (j, nj) in n.iter().enumerate() {
                let x = (j as f64 + 0.5) / grid as f64;
                acc += nj * (kk * PI * x).cos();
            }
            let nk = 2.0 * acc / grid as f64;
            let rho = kk * PI / self.length;
            *rk = (rho * rho - self.lambda) * a[k] + nk;
        }
        res
    }

    /// Damped Newton with a finite-difference Jacobian from `seed`.
    pub fn solve(&self, seed: &[f64]) -> Option<Vec<f64>> {
        let n = self.n_modes;
        let mut a = vec![0.0; n];
        a[..seed.len().min(n)].copy_from_slice(&seed[..seed.len().min(n)]);
        for _ in 0..100 {
            let r = self.residual(&a);
            let rnorm = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if rnorm < 1e-11 {
                return Some(a);
            }
            // finite-difference Jacobian
            let mut jac = nalgebra::DMatrix::zeros(n, n);
            for col in 0..n {
                let h = 1e-7 * a[col].abs().max(1.0);
                let mut ap = a.clone();
                ap[col] += h;
                let rp = self.residual(&ap);
                for row in 0..n {
                    jac[(row, col)] = (rp[row] - r[row]) / h;
                }
            }
            let rhs = nalgebra::DVector::from_vec(r.clone());
            let step = jac.lu().solve(&rhs)?;
            let mut scale = 1.0;
            loop {
                let trial: Vec<f64> =
                    a.iter().zip(step.iter()).map(|(x, s)| x - scale * s).collect();
                let tnorm =
                    self.residual(&trial).iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if tnorm < rnorm || scale < 1.0 / 1024.0 {
                    a = trial;
                    break;
                }
                scale *= 0.5;
            }
        }
        let rnorm = self.residual(&a).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        (rnorm < 1e-9).then_some(a)
    }

    /// All steady branches reachable from a spread of first-mode seeds;
    /// deduplicated, sorted by |a1|.
    pub fn branch_amplitudes(&self) -> Vec<Vec<f64>> {
        let mut found: Vec<Vec<f64>> = Vec::new();
        for seed1 in [0.05, 0.2, 0.5, 1.0, 2.0, 3.0, 5.0] {
            for sign in [1.0, -1.0] {
                if let Some(a) = self.solve(&[sign * seed1]) {
                    let dup = found.iter().any(|b| {
                        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0f64, f64::max) < 1e-6
                    });
                    if !dup {
                        found.push(a);
                    }
                }
            }
        }
        found.sort_by(|a, b| a[0].abs().total_cmp(&b[0].abs()));
        found
    }
}

/// Central finite-difference Jacobian of a reduced vector field.
pub fn fd_jacobian(system: &ReducedSystem, y: &[f64], h: f64) -> Vec<Vec<f64>> {
    let n = y.len();
    let mut jac = vec![vec![0.0; n]; n];
    for col in 0..n {
        let mut yp = y.to_vec();
        let mut ym = y.to_vec();
        yp[col] += h;
        ym[col] -= h;
        let fp = reduced::vector_field(system, &yp);
        let fm = reduced::vector_field(system, &ym);
        for row in 0..n {
            jac[row][col] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    jac
}

/// Counts the distinct nonzero equilibria found by Newton from every node
/// of a `grid^m` lattice over `[-range, range]^m`.
pub fn multistart_equilibrium_count(system: &ReducedSystem, grid: usize, range: f64) -> usize {
    let m = system.dim();
    let mut found: Vec<Vec<f64>> = Vec::new();
    let total = grid.pow(m as u32);
    for flat in 0..total {
        let mut idx = flat;
        let mut y = vec![0.0; m];
        for v in y.iter_mut() {
            let i = idx % grid;
            idx /= grid;
            *v = -range + 2.0 * range * i as f64 / (grid - 1) as f64;
        }
        let Some(root) = newton_from(system, &y) else { continue };
        let norm = root.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue; // origin
        }
        let dup = found.iter().any(|b| {
            root.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0f64, f64::max) < 1e-6
        });
        if !dup {
            found.push(root);
        }
    }
    found.len()
}

fn newton_from(system: &ReducedSystem, seed: &[f64]) -> Option<Vec<f64>> {
    let mut y = nalgebra::DVector::from_column_slice(seed);
    for _ in 0..80 {
        let f = nalgebra::DVector::from_vec(reduced::vector_field(system, y.as_slice()));
        if f.amax() < 1e-12 {
            return Some(y.as_slice().to_vec());
        }
        let j = reduced::jacobian(system, y.as_slice());
        let step = j.lu().solve(&f)?;
        y -= step;
        if y.amax() > 1e4 {
            return None;
        }
    }
    None
}

/// Maximum of `<g(y), y>` over the unit sphere by seeded random sampling.
pub fn sphere_max_radial(system: &ReducedSystem, samples: usize, seed: u64) -> f64 {
    let m = system.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..samples {
        let mut y: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0f64)).collect();
        let norm: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        for v in y.iter_mut() {
            *v /= norm;
        }
        let f = reduced::vector_field(system, &y);
        let radial: f64 = f.iter().zip(&y).map(|(a, b)| a * b).sum();
        best = best.max(radial);
    }
    best
}

/// Locates the fold of `dv/dt = lambda v + q v^2 + c v^3` by continuing the
/// outer nonzero root downward in lambda until it merges with its partner.
pub fn fold_by_continuation(q: f64, c: f64) -> Option<(f64, f64)> {
    assert!(c < 0.0 && q != 0.0);
    // at lambda = 0 the outer root is v = -q/c
    let root = |lambda: f64, guess: f64| -> Option<f64> {
        let mut v = guess;
        for _ in 0..100 {
            let f = lambda * v + q * v * v + c * v * v * v;
            let d = lambda + 2.0 * q * v + 3.0 * c * v * v;
            if d.abs() < 1e-14 {
                return None;
            }
            let step = f / d;
            v -= step;
            if step.abs() < 1e-14 {
                return Some(v);
            }
        }
        None
    };
    let mut lambda = 0.0;
    let mut v = root(0.0, -q / c)?;
    let dl = 1e-4 * (q * q / (4.0 * c)).abs().max(1e-6);
    let mut last_good = (lambda, v);
    loop {
        let next = lambda - dl;
        match root(next, v) {
            // the two roots merge where the derivative degenerates; past the
            // fold Newton either fails or lands on a far root
            Some(r) if (r - v).abs() < 100.0 * dl.sqrt() => {
                lambda = next;
                v = r;
                last_good = (lambda, v);
                if lambda < -1e6 {
                    return None;
                }
            }
            _ => {
                return Some(last_good);
            }
        }
    }
}

/// Composite Simpson quadrature on [0, length].
pub fn simpson(f: impl Fn(f64) -> f64, length: f64, intervals: usize) -> f64 {
    let n = if intervals % 2 == 0 { intervals } else { intervals + 1 };
    let h = length / n as f64;
    let mut acc = f(0.0) + f(length);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h);
    }
    acc * h / 3.0
}

/// Term-by-term derivatives of the molar free energy
/// `g = RT [(1-u) ln(1-u) + u ln u] + a u (1-u)` (the linear chemical
/// potential terms drop out beyond the first derivative).
pub struct FreeEnergyDerivatives {
    pub g2: f64,
    pub g3: f64,
    pub g4: f64,
}

pub fn free_energy_derivatives(a: f64, gas_constant: f64, t: f64, u: f64) -> FreeEnergyDerivatives {
    let rt = gas_constant * t;
    // d^2/du^2 [u ln u] = 1/u, d^2/du^2 [(1-u) ln(1-u)] = 1/(1-u)
    let g2 = rt * (1.0 / u + 1.0 / (1.0 - u)) - 2.0 * a;
    let g3 = rt * (-1.0 / (u * u) + 1.0 / ((1.0 - u) * (1.0 - u)));
    let g4 = rt * (2.0 / (u * u * u) + 2.0 / ((1.0 - u) * (1.0 - u) * (1.0 - u)));
    FreeEnergyDerivatives { g2, g3, g4 }
}

/// The raw free energy for finite-difference checks.
pub fn free_energy(a: f64, gas_constant: f64, t: f64, u: f64) -> f64 {
    gas_constant * t * ((1.0 - u) * (1.0 - u).ln() + u * u.ln()) + a * u * (1.0 - u)
}

/// Fourth derivative by second-order central differences.
pub fn fd4(f: impl Fn(f64) -> f64, u: f64, h: f64) -> f64 {
    (f(u + 2.0 * h) - 4.0 * f(u + h) + 6.0 * f(u) - 4.0 * f(u - h) + f(u - 2.0 * h)) / h.powi(4)
}

/// Third derivative by second-order central differences.
pub fn fd3(f: impl Fn(f64) -> f64, u: f64, h: f64) -> f64 {
    (f(u + 2.0 * h) - 2.0 * f(u + h) + 2.0 * f(u - h) - f(u - 2.0 * h)) / (2.0 * h.powi(3))
}

/// Closed-form fold temperature derived by eliminating `T` from
/// `b2^2 = 4 b3 lambda`: `T* = T0(u0) * 16 (1 - 3u + 3u^2) / (13 - 36u + 36u^2)`.
pub fn t_star_closed_form(a: f64, gas_constant: f64, u0: f64) -> f64 {
    let t0 = 2.0 * a * u0 * (1.0 - u0) / gas_constant;
    t0 * 16.0 * (1.0 - 3.0 * u0 + 3.0 * u0 * u0) / (13.0 - 36.0 * u0 + 36.0 * u0 * u0)
}
