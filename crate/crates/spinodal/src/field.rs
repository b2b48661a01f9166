//! Spectral fields on tensor collocation grids and their transforms.
//!
//! A [`SpectralField`] stores the complex spectral tensor of a real field:
//! cosine (DCT) coefficients along Neumann axes, two-sided Fourier
//! coefficients along periodic axes. Per-axis transform matrices are cached
//! globally; they are immutable after construction and shared across
//! threads.
//!
//! Conventions (amplitude-1 eigenfunctions):
//!
//! * cosine axis: `u(x) = sum_k a_k cos(k pi x / L)`, midpoint collocation
//!   `x_j = (j + 1/2) L / n`;
//! * periodic axis: `u(x) = sum_f c_f e^{i f x}`, `x_j = 2 pi j / n`, with
//!   `c_{-f} = conj(c_f)` for real fields.

use crate::domain::{Axis, DomainSpec, ModeIndex, Parity};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug)]
enum AxisTransform {
    Cosine { fwd: Vec<f64>, inv: Vec<f64>, n: usize },
    Periodic { fwd: Vec<Complex64>, inv: Vec<Complex64>, n: usize },
}

#[derive(PartialEq, Eq, Hash)]
struct AxisKey {
    periodic: bool,
    n: usize,
    length_bits: u64,
}

fn axis_cache() -> &'static Mutex<HashMap<AxisKey, Arc<AxisTransform>>> {
    static CACHE: OnceLock<Mutex<HashMap<AxisKey, Arc<AxisTransform>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn axis_transform(axis: &Axis, n: usize) -> Arc<AxisTransform> {
    let key = match axis {
        Axis::Cosine { length } => AxisKey { periodic: false, n, length_bits: length.to_bits() },
        Axis::Periodic { .. } => AxisKey { periodic: true, n, length_bits: 0 },
    };
    let mut cache = axis_cache().lock().unwrap();
    cache
        .entry(key)
        .or_insert_with(|| Arc::new(build_axis_transform(axis, n)))
        .clone()
}

fn build_axis_transform(axis: &Axis, n: usize) -> AxisTransform {
    match axis {
        Axis::Cosine { .. } => {
            // DCT-II forward / DCT-III inverse on the midpoint grid.
            let mut fwd = vec![0.0; n * n];
            let mut inv = vec![0.0; n * n];
            for k in 0..n {
                let w = if k == 0 { 1.0 / n as f64 } else { 2.0 / n as f64 };
                for j in 0..n {
                    let c = (k as f64 * std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos();
                    fwd[k * n + j] = w * c;
                    inv[j * n + k] = c;
                }
            }
            AxisTransform::Cosine { fwd, inv, n }
        }
        Axis::Periodic { .. } => {
            let mut fwd = vec![Complex64::ZERO; n * n];
            let mut inv = vec![Complex64::ZERO; n * n];
            for k in 0..n {
                for j in 0..n {
                    let phase = 2.0 * std::f64::consts::PI * (j * k % n) as f64 / n as f64;
                    let w = Complex64::new(phase.cos(), phase.sin());
                    fwd[k * n + j] = w.conj() / n as f64;
                    inv[j * n + k] = w;
                }
            }
            AxisTransform::Periodic { fwd, inv, n }
        }
    }
}

impl AxisTransform {
    fn apply(&self, forward: bool, data: &mut [Complex64], dims: &[usize], axis: usize) {
        let n = dims[axis];
        let stride: usize = dims[axis + 1..].iter().product();
        let outer: usize = dims[..axis].iter().product();
        let mut line = vec![Complex64::ZERO; n];
        let mut out = vec![Complex64::ZERO; n];
        for o in 0..outer {
            for s in 0..stride {
                let base = o * n * stride + s;
                for i in 0..n {
                    line[i] = data[base + i * stride];
                }
                match self {
                    AxisTransform::Cosine { fwd, inv, n } => {
                        let m = if forward { fwd } else { inv };
                        for r in 0..*n {
                            let mut acc = Complex64::ZERO;
                            let row = &m[r * n..(r + 1) * n];
                            for i in 0..*n {
                                acc += row[i] * line[i];
                            }
                            out[r] = acc;
                        }
                    }
                    AxisTransform::Periodic { fwd, inv, n } => {
                        let m = if forward { fwd } else { inv };
                        for r in 0..*n {
                            let mut acc = Complex64::ZERO;
                            let row = &m[r * n..(r + 1) * n];
                            for i in 0..*n {
                                acc += row[i] * line[i];
                            }
                            out[r] = acc;
                        }
                    }
                }
                for i in 0..n {
                    data[base + i * stride] = out[i];
                }
            }
        }
    }
}

/// A real scalar field stored spectrally on its domain.
#[derive(Debug, Clone)]
pub struct SpectralField {
    domain: DomainSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(domain: &DomainSpec) -> Self {
        let len = domain.grid_points_per_dim.pow(domain.dims() as u32);
        SpectralField { domain: domain.clone(), coeffs: vec![Complex64::ZERO; len] }
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    fn dims_vec(&self) -> Vec<usize> {
        vec![self.domain.grid_points_per_dim; self.domain.dims()]
    }

    /// Builds a field from nodal values on the tensor grid (row-major).
    pub fn from_nodal(domain: &DomainSpec, nodal: &[f64]) -> Result<Self> {
        let mut f = SpectralField::zeros(domain);
        if nodal.len() != f.coeffs.len() {
            return Err(Error::SizeMismatch(format!(
                "expected {} nodal values, got {}",
                f.coeffs.len(),
                nodal.len()
            )));
        }
        for (c, &v) in f.coeffs.iter_mut().zip(nodal) {
            *c = Complex64::new(v, 0.0);
        }
        let dims = f.dims_vec();
        for (axis_idx, axis) in domain.axes().iter().enumerate() {
            axis_transform(axis, domain.grid_points_per_dim).apply(true, &mut f.coeffs, &dims, axis_idx);
        }
        Ok(f)
    }

    /// Nodal values on the tensor grid (row-major).
    pub fn to_nodal(&self) -> Vec<f64> {
        let mut work = self.coeffs.clone();
        let dims = self.dims_vec();
        for (axis_idx, axis) in self.domain.axes().iter().enumerate() {
            axis_transform(axis, self.domain.grid_points_per_dim).apply(false, &mut work, &dims, axis_idx);
        }
        work.into_iter().map(|c| c.re).collect()
    }

    /// Collocation points along one axis.
    pub fn grid_points(domain: &DomainSpec, axis: usize) -> Vec<f64> {
        let n = domain.grid_points_per_dim;
        match domain.axes()[axis] {
            Axis::Cosine { length } => {
                (0..n).map(|j| (j as f64 + 0.5) * length / n as f64).collect()
            }
            Axis::Periodic { .. } => {
                (0..n).map(|j| 2.0 * std::f64::consts::PI * j as f64 / n as f64).collect()
            }
        }
    }

    fn flat_index(&self, idx: &[usize]) -> usize {
        let n = self.domain.grid_points_per_dim;
        idx.iter().fold(0usize, |acc, &i| acc * n + i)
    }

    /// Signed frequency of a periodic-axis tensor slot.
    fn slot_freq(n: usize, i: usize) -> i64 {
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    fn mode_slot(&self, mode: &ModeIndex) -> Result<usize> {
        self.domain.validate_mode(mode)?;
        let n = self.domain.grid_points_per_dim;
        let axes = self.domain.axes();
        let mut idx = Vec::with_capacity(mode.k.len());
        for (d, &k) in mode.k.iter().enumerate() {
            match axes[d] {
                Axis::Cosine { .. } => {
                    if k as usize >= n {
                        return Err(Error::SizeMismatch(format!("wavenumber {k} exceeds grid {n}")));
                    }
                    idx.push(k as usize);
                }
                Axis::Periodic { .. } => {
                    if (k.unsigned_abs() as usize) >= n / 2 {
                        return Err(Error::SizeMismatch(format!(
                            "frequency {k} exceeds resolvable band of grid {n}"
                        )));
                    }
                    idx.push(if k >= 0 { k as usize } else { (n as i64 + k as i64) as usize });
                }
            }
        }
        Ok(self.flat_index(&idx))
    }

    fn conjugate_slot(&self, mode: &ModeIndex) -> Option<usize> {
        // Slot of the -k partner on periodic axes, if distinct.
        let n = self.domain.grid_points_per_dim;
        let axes = self.domain.axes();
        let mut idx = Vec::with_capacity(mode.k.len());
        let mut distinct = false;
        for (d, &k) in mode.k.iter().enumerate() {
            match axes[d] {
                Axis::Cosine { .. } => idx.push(k as usize),
                Axis::Periodic { .. } => {
                    if k != 0 {
                        distinct = true;
                    }
                    let neg = -k;
                    idx.push(if neg >= 0 { neg as usize } else { (n as i64 + neg as i64) as usize });
                }
            }
        }
        if distinct {
            Some(self.flat_index(&idx))
        } else {
            None
        }
    }

    /// Amplitude of one eigenfunction in the amplitude-1 convention.
    pub fn amplitude(&self, mode: &ModeIndex) -> Result<f64> {
        let slot = self.mode_slot(mode)?;
        let c = self.coeffs[slot];
        let has_periodic_freq = self.conjugate_slot(mode).is_some();
        Ok(match (mode.parity, has_periodic_freq) {
            (Parity::Cosine, false) => c.re,
            (Parity::Cosine, true) => 2.0 * c.re,
            (Parity::Sine, _) => -2.0 * c.im,
        })
    }

    /// Sets the amplitude of one eigenfunction, preserving the other parity.
    pub fn set_amplitude(&mut self, mode: &ModeIndex, value: f64) -> Result<()> {
        let slot = self.mode_slot(mode)?;
        let conj_slot = self.conjugate_slot(mode);
        let mut c = self.coeffs[slot];
        match (mode.parity, conj_slot.is_some()) {
            (Parity::Cosine, false) => c = Complex64::new(value, c.im),
            (Parity::Cosine, true) => c.re = value / 2.0,
            (Parity::Sine, _) => c.im = -value / 2.0,
        }
        self.coeffs[slot] = c;
        if let Some(cs) = conj_slot {
            self.coeffs[cs] = c.conj();
        }
        Ok(())
    }

    /// Removes the constant mode; all other coefficients are untouched.
    pub fn project_zero_mean(&mut self) {
        self.coeffs[0] = Complex64::ZERO;
    }

    /// Mean value of the field.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Integral of the field over the domain.
    pub fn mass(&self) -> f64 {
        self.mean() * self.domain.volume()
    }

    fn axis_weight(&self, axes: &[Axis], idx: &[usize]) -> f64 {
        let mut w = 1.0;
        for (d, axis) in axes.iter().enumerate() {
            if let Axis::Cosine { .. } = axis {
                if idx[d] != 0 {
                    w *= 0.5;
                }
            }
        }
        w
    }

    fn for_each_slot(&self, mut f: impl FnMut(usize, &[usize])) {
        let n = self.domain.grid_points_per_dim;
        let rank = self.domain.dims();
        let mut idx = vec![0usize; rank];
        for flat in 0..self.coeffs.len() {
            let mut rem = flat;
            for d in (0..rank).rev() {
                idx[d] = rem % n;
                rem /= n;
            }
            f(flat, &idx);
        }
    }

    /// Laplacian eigenvalue attached to every tensor slot.
    pub fn rho_table(domain: &DomainSpec) -> Vec<f64> {
        let f = SpectralField::zeros(domain);
        let axes = domain.axes();
        let n = domain.grid_points_per_dim;
        let mut rho = vec![0.0; f.coeffs.len()];
        f.for_each_slot(|flat, idx| {
            let mut r = 0.0;
            for (d, axis) in axes.iter().enumerate() {
                match axis {
                    Axis::Cosine { length } => {
                        let fr = idx[d] as f64 * std::f64::consts::PI / length;
                        r += fr * fr;
                    }
                    Axis::Periodic { freq_scale } => {
                        let fr = Self::slot_freq(n, idx[d]) as f64 * freq_scale;
                        r += fr * fr;
                    }
                }
            }
            rho[flat] = r;
        });
        rho
    }

    /// `int u^2 dx` via the spectral Parseval identity.
    pub fn l2_sq(&self) -> f64 {
        let axes = self.domain.axes();
        let mut acc = 0.0;
        self.for_each_slot(|flat, idx| {
            acc += self.coeffs[flat].norm_sqr() * self.axis_weight(&axes, idx);
        });
        acc * self.domain.volume()
    }

    /// `int |grad u|^2 dx = -int u (Lap u) dx`, spectrally exact.
    pub fn h1_sq(&self) -> f64 {
        let axes = self.domain.axes();
        let rho = Self::rho_table(&self.domain);
        let mut acc = 0.0;
        self.for_each_slot(|flat, idx| {
            acc += rho[flat] * self.coeffs[flat].norm_sqr() * self.axis_weight(&axes, idx);
        });
        acc * self.domain.volume()
    }

    /// Sup norm of the nodal values.
    pub fn max_abs_nodal(&self) -> f64 {
        self.to_nodal().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Translates the field along periodic axes. `shift` gives one coordinate
    /// offset per axis; offsets on cosine axes must be zero.
    pub fn translate(&self, shift: &[f64]) -> Result<Self> {
        if shift.len() != self.domain.dims() {
            return Err(Error::SizeMismatch(format!(
                "shift has {} entries for a rank-{} domain",
                shift.len(),
                self.domain.dims()
            )));
        }
        let axes = self.domain.axes();
        for (d, axis) in axes.iter().enumerate() {
            if matches!(axis, Axis::Cosine { .. }) && shift[d] != 0.0 {
                return Err(Error::InvalidParams(
                    "translation is only defined along periodic axes".into(),
                ));
            }
        }
        let n = self.domain.grid_points_per_dim;
        let mut out = self.clone();
        self.for_each_slot(|flat, idx| {
            let mut phase = 0.0;
            for (d, axis) in axes.iter().enumerate() {
                if let Axis::Periodic { .. } = axis {
                    phase += Self::slot_freq(n, idx[d]) as f64 * shift[d];
                }
            }
            out.coeffs[flat] = self.coeffs[flat] * Complex64::new(phase.cos(), phase.sin());
        });
        Ok(out)
    }

    /// Mirror image through the centre of one cosine axis
    /// (`x -> L - x`, i.e. `a_k -> (-1)^k a_k`).
    pub fn mirror(&self, axis: usize) -> Result<Self> {
        let axes = self.domain.axes();
        if !matches!(axes.get(axis), Some(Axis::Cosine { .. })) {
            return Err(Error::InvalidParams("mirror needs a cosine axis".into()));
        }
        let mut out = self.clone();
        self.for_each_slot(|flat, idx| {
            if idx[axis] % 2 == 1 {
                out.coeffs[flat] = -self.coeffs[flat];
            }
        });
        Ok(out)
    }

    /// Pointwise product in nodal space, optionally dealiased by zero-padding
    /// each axis to 3/2 of its length.
    pub fn pointwise(domain: &DomainSpec, dealias: bool, f: impl Fn(&[Vec<f64>]) -> Vec<f64>, inputs: &[&SpectralField]) -> Result<SpectralField> {
        if dealias {
            let fine = DomainSpec {
                kind: domain.kind.clone(),
                grid_points_per_dim: (3 * domain.grid_points_per_dim).div_ceil(2),
            };
            let padded: Vec<SpectralField> =
                inputs.iter().map(|u| u.resample(&fine)).collect::<Result<_>>()?;
            let nodal: Vec<Vec<f64>> = padded.iter().map(|u| u.to_nodal()).collect();
            let product = f(&nodal);
            let coarse = SpectralField::from_nodal(&fine, &product)?;
            coarse.resample(domain)
        } else {
            let nodal: Vec<Vec<f64>> = inputs.iter().map(|u| u.to_nodal()).collect();
            let product = f(&nodal);
            SpectralField::from_nodal(domain, &product)
        }
    }

    /// Re-expresses the field on a finer or coarser grid of the same domain
    /// (spectral pad / truncate).
    pub fn resample(&self, target: &DomainSpec) -> Result<SpectralField> {
        if target.kind != self.domain.kind {
            return Err(Error::InvalidParams("resample requires the same geometry".into()));
        }
        let mut out = SpectralField::zeros(target);
        let n_src = self.domain.grid_points_per_dim;
        let n_dst = target.grid_points_per_dim;
        let axes = self.domain.axes();
        let rank = self.domain.dims();
        self.for_each_slot(|flat, idx| {
            let mut dst_idx = vec![0usize; rank];
            for (d, axis) in axes.iter().enumerate() {
                match axis {
                    Axis::Cosine { .. } => {
                        if idx[d] >= n_dst {
                            return;
                        }
                        dst_idx[d] = idx[d];
                    }
                    Axis::Periodic { .. } => {
                        let f = Self::slot_freq(n_src, idx[d]);
                        if f.unsigned_abs() as usize >= n_dst / 2 {
                            return;
                        }
                        dst_idx[d] = if f >= 0 { f as usize } else { (n_dst as i64 + f) as usize };
                    }
                }
            }
            let dst_flat = dst_idx.iter().fold(0usize, |acc, &i| acc * n_dst + i);
            out.coeffs[dst_flat] = self.coeffs[flat];
        });
        Ok(out)
    }
}
