//! Subtraction kernels `S(ω, ω′)` for the beamsplitter and up-conversion
//! schemes, with slow, jittered and instantaneous photodetection.
//!
//! A kernel acts on mode functions as `(S f)(ω) = ∫ S(ω, ω′) f(ω′) dω′`. Kernels
//! proportional to `δ(ω − ω′)` are kept as multiplication operators
//! ([`KernelMatrix::Diagonal`]) and never discretized as a delta.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::grid::{FrequencyGrid, SpectralAmplitude};
use crate::linalg::{check_hermitian, max_abs};
use crate::modes::{DetectorModel, DetectorResponse, FilterModel};

/// Reflectivity above which the single-photon (first order) treatment of
/// the beamsplitter becomes questionable.
pub const WEAK_REFLECTIVITY_LIMIT: f64 = 0.3;

/// Storage of a kernel on a grid.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelMatrix {
    /// Multiplication operator `d(ω)`, i.e. `S(ω, ω′) = d(ω) δ(ω − ω′)`.
    Diagonal(Vec<f64>),
    /// Kernel samples `H_ij = S(ω_i, ω_j)`.
    Dense(DMatrix<Complex64>),
}

/// Hermitian, positive semidefinite subtraction kernel.
///
/// The physical kernel is `scale · matrix`; `scale` carries `r²` or `|C|²`
/// (times the detector efficiency).
#[derive(Debug, Clone, PartialEq)]
pub struct KernelOperator {
    grid: FrequencyGrid,
    matrix: KernelMatrix,
    scale: f64,
}

impl KernelOperator {
    pub fn diagonal(grid: FrequencyGrid, values: Vec<f64>, scale: f64) -> Result<Self> {
        check_scale(scale)?;
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} diagonal values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < -1e-10) {
            return Err(invalid("diagonal", format!("entries must be nonnegative, found {v}")));
        }
        Ok(Self {
            grid,
            matrix: KernelMatrix::Diagonal(values.into_iter().map(|v| v.max(0.0)).collect()),
            scale,
        })
    }

    pub fn dense(grid: FrequencyGrid, values: DMatrix<Complex64>, scale: f64) -> Result<Self> {
        check_scale(scale)?;
        if values.nrows() != grid.len() || values.ncols() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} kernel for {} grid points",
                values.nrows(),
                values.ncols(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("kernel", "non-finite entry"));
        }
        check_hermitian(&values, 1e-12)?;
        Ok(Self {
            grid,
            matrix: KernelMatrix::Dense(hermitian_part(&values)),
            scale,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn matrix(&self) -> &KernelMatrix {
        &self.matrix
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.matrix, KernelMatrix::Diagonal(_))
    }

    /// Same kernel with the overall prefactor multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        check_scale(self.scale * factor)?;
        Ok(Self {
            scale: self.scale * factor,
            ..self.clone()
        })
    }

    /// Matrix of the discretized operator, `A_ij` with `(S f)_i = Σ_j A_ij f_j`.
    ///
    /// Its eigenvalues are the subtraction efficiencies. For a diagonal kernel
    /// this is `scale · diag(d)`.
    pub fn operator_matrix(&self) -> DMatrix<Complex64> {
        match &self.matrix {
            KernelMatrix::Diagonal(d) => DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                d.len(),
                d.iter().map(|v| Complex64::new(self.scale * v, 0.0)),
            )),
            KernelMatrix::Dense(h) => h * Complex64::new(self.scale * self.grid.spacing(), 0.0),
        }
    }

    /// Trace of [`operator_matrix`](Self::operator_matrix), i.e. `Σ_j σ_j`.
    /// For dense kernels this is `scale ∫ S(ω, ω) dω`.
    pub fn trace(&self) -> f64 {
        match &self.matrix {
            KernelMatrix::Diagonal(d) => self.scale * d.iter().sum::<f64>(),
            KernelMatrix::Dense(h) => {
                self.scale * self.grid.spacing() * (0..h.nrows()).map(|i| h[(i, i)].re).sum::<f64>()
            }
        }
    }

    /// `(S f)(ω)`.
    pub fn apply(&self, f: &SpectralAmplitude) -> Result<SpectralAmplitude> {
        if f.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let values = match &self.matrix {
            KernelMatrix::Diagonal(d) => f
                .values()
                .iter()
                .zip(d)
                .map(|(x, w)| x * (self.scale * w))
                .collect(),
            KernelMatrix::Dense(h) => {
                let v = nalgebra::DVector::from_column_slice(f.values());
                let out = h * v * Complex64::new(self.scale * self.grid.spacing(), 0.0);
                out.iter().copied().collect()
            }
        };
        SpectralAmplitude::new(self.grid, values)
    }
}

fn check_scale(scale: f64) -> Result<()> {
    if scale.is_finite() && scale >= 0.0 {
        Ok(())
    } else {
        Err(invalid("scale", format!("must be nonnegative, got {scale}")))
    }
}

fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()))
}

fn is_real(m: &DMatrix<Complex64>) -> bool {
    m.iter().all(|v| v.im == 0.0)
}

fn to_complex(m: DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// `Rᴴ M R`, using real arithmetic when both factors are real.
fn sandwich(r: &DMatrix<Complex64>, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    if is_real(r) && is_real(m) {
        let rr = r.map(|x| x.re);
        let mr = m.map(|x| x.re);
        to_complex(rr.transpose() * (mr * &rr))
    } else {
        r.adjoint() * (m * r)
    }
}

/// `Rᴴ diag(w) R`, using real arithmetic when `R` is real.
fn weighted_gram(r: &DMatrix<Complex64>, weights: &[f64]) -> DMatrix<Complex64> {
    if is_real(r) {
        let rr = r.map(|x| x.re);
        let mut wr = rr.clone();
        for (mut row, w) in wr.row_iter_mut().zip(weights) {
            row *= *w;
        }
        to_complex(rr.transpose() * wr)
    } else {
        let mut wr = r.clone();
        for (mut row, w) in wr.row_iter_mut().zip(weights) {
            row *= Complex64::new(*w, 0.0);
        }
        r.adjoint() * wr
    }
}

/// Interaction kernel `R(ν, ω)` coupling signal frequency `ω` to split-arm
/// frequency `ν`.
#[derive(Debug, Clone, PartialEq)]
pub enum ParametricKernel {
    /// `R(ν, ω) = r δ(ν − ω)`.
    Beamsplitter { grid: FrequencyGrid, reflectivity: f64 },
    /// `R(ν_a, ω_j) = C · shape[(a, j)]`; rows index `ν`, columns `ω`.
    Dense {
        grid: FrequencyGrid,
        shape: DMatrix<Complex64>,
        coupling: f64,
    },
}

impl ParametricKernel {
    pub fn beamsplitter(reflectivity: f64, grid: FrequencyGrid) -> Result<Self> {
        check_reflectivity(reflectivity)?;
        Ok(Self::Beamsplitter { grid, reflectivity })
    }

    pub fn from_matrix(grid: FrequencyGrid, shape: DMatrix<Complex64>, coupling: f64) -> Result<Self> {
        if shape.nrows() != grid.len() || shape.ncols() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} interaction kernel for {} grid points",
                shape.nrows(),
                shape.ncols(),
                grid.len()
            )));
        }
        if shape.iter().any(|v| !v.is_finite()) {
            return Err(invalid("shape", "non-finite entry"));
        }
        check_scale(coupling)?;
        Ok(Self::Dense {
            grid,
            shape,
            coupling,
        })
    }

    /// Up-conversion kernel `R(ν, ω) = C α(ν − ω) Φ(ν)` for a gate spectrum
    /// `α` and a phase-matching function `Φ` of the converted frequency.
    pub fn upconversion(
        gate: &SpectralAmplitude,
        phasematch: &SpectralAmplitude,
        coupling: f64,
    ) -> Result<Self> {
        if gate.grid() != phasematch.grid() {
            return Err(Error::GridMismatch);
        }
        let grid = *gate.grid();
        let n = grid.len();
        let points: Vec<f64> = grid.points().collect();
        let phi = phasematch.values();
        let shape = DMatrix::from_fn(n, n, |a, j| gate.value_at(points[a] - points[j]) * phi[a]);
        Self::from_matrix(grid, shape, coupling)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        match self {
            Self::Beamsplitter { grid, .. } | Self::Dense { grid, .. } => grid,
        }
    }
}

fn check_reflectivity(r: f64) -> Result<()> {
    if !(r.is_finite() && (0.0..=1.0).contains(&r)) {
        return Err(invalid("reflectivity", format!("must lie in [0, 1], got {r}")));
    }
    if r > WEAK_REFLECTIVITY_LIMIT {
        log::warn!("reflectivity {r} is not small; single-photon splitting assumes r << 1");
    }
    Ok(())
}

/// Slow-detector beamsplitter kernel `r² |F(ω)|² δ(ω − ω′)`.
pub fn beamsplitter_kernel_slow(
    reflectivity: f64,
    filter: &FilterModel,
    grid: &FrequencyGrid,
) -> Result<KernelOperator> {
    check_reflectivity(reflectivity)?;
    KernelOperator::diagonal(*grid, filter.power_on(grid)?, reflectivity * reflectivity)
}

/// Slow-detector up-conversion kernel
/// `S(ω, ω′) = ∫ dν R*(ν, ω) R(ν, ω′) |F(ν)|²` with `R(ν, ω) = C α(ν − ω) Φ(ν)`.
///
/// The filter acts on the converted frequency `ν`. With `filter = None` the
/// converted photon is not filtered.
pub fn upconversion_kernel(
    gate: &SpectralAmplitude,
    phasematch: &SpectralAmplitude,
    coupling: f64,
    filter: Option<&FilterModel>,
    grid: &FrequencyGrid,
) -> Result<KernelOperator> {
    if gate.grid() != grid || phasematch.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let r = ParametricKernel::upconversion(gate, phasematch, coupling)?;
    let filter = filter.cloned().unwrap_or(FilterModel::Flat);
    time_resolved_kernel(&r, &filter, &DetectorModel::slow(), 0.0)
}

/// General subtraction kernel for click time `t_click`:
///
/// `S_t(ω, ω′) = ∬ dν dν′ R*(ν, ω) F*(ν) Γ(ν − ν′) e^{i(ν−ν′)t} F(ν′) R(ν′, ω′)`
///
/// where `Γ` is the spectral response of the detector. A slow detector
/// (`Γ = δ`) reduces this to the slow kernels above.
pub fn time_resolved_kernel(
    r: &ParametricKernel,
    filter: &FilterModel,
    detector: &DetectorModel,
    t_click: f64,
) -> Result<KernelOperator> {
    if !t_click.is_finite() {
        return Err(invalid("t_click", "must be finite"));
    }
    let grid = *r.grid();
    let transmission = filter.transmission_on(&grid)?;
    let points: Vec<f64> = grid.points().collect();
    let dnu = grid.spacing();
    // b(ν) = F(ν) e^{-iνt}; the kernel contains b*(ν) Γ(ν − ν′) b(ν′).
    let b: Vec<Complex64> = transmission
        .iter()
        .zip(&points)
        .map(|(f, nu)| f * Complex64::from_polar(1.0, -nu * t_click))
        .collect();
    let n = grid.len();

    match (r, detector.response) {
        (ParametricKernel::Beamsplitter { reflectivity, .. }, DetectorResponse::Slow) => {
            let power = transmission.iter().map(|f| f.norm_sqr()).collect();
            KernelOperator::diagonal(grid, power, reflectivity * reflectivity * detector.efficiency)
        }
        (ParametricKernel::Beamsplitter { reflectivity, .. }, _) => {
            let h = DMatrix::from_fn(n, n, |i, j| {
                let gamma = detector
                    .spectral_response(points[i] - points[j])
                    .expect("time-resolving detector");
                b[i].conj() * b[j] * gamma
            });
            KernelOperator::dense(grid, h, reflectivity * reflectivity * detector.efficiency)
        }
        (ParametricKernel::Dense { shape, coupling, .. }, DetectorResponse::Slow) => {
            let weights: Vec<f64> = transmission.iter().map(|f| f.norm_sqr() * dnu).collect();
            let h = hermitian_part(&weighted_gram(shape, &weights));
            KernelOperator::dense(grid, h, coupling * coupling * detector.efficiency)
        }
        (ParametricKernel::Dense { shape, coupling, .. }, DetectorResponse::Instant) => {
            // Γ is constant, so the kernel is rank one: (1/2π) x*(ω) x(ω′)
            // with x(ω) = Σ_ν R(ν, ω) b(ν) Δν.
            let gamma = detector.spectral_response(0.0).expect("instant detector");
            let bvec = nalgebra::DVector::from_iterator(n, b.iter().map(|v| v * dnu));
            let x = shape.transpose() * bvec;
            let h = DMatrix::from_fn(n, n, |i, j| x[i].conj() * x[j] * gamma);
            KernelOperator::dense(grid, h, coupling * coupling * detector.efficiency)
        }
        (ParametricKernel::Dense { shape, coupling, .. }, DetectorResponse::GaussianJitter { .. }) => {
            let m = DMatrix::from_fn(n, n, |a, c| {
                let gamma = detector
                    .spectral_response(points[a] - points[c])
                    .expect("time-resolving detector");
                b[a].conj() * b[c] * (gamma * dnu * dnu)
            });
            let h = hermitian_part(&sandwich(shape, &m));
            KernelOperator::dense(grid, h, coupling * coupling * detector.efficiency)
        }
    }
}

/// Relative Frobenius distance `‖A − B‖ / ‖B‖` between two operator matrices.
pub fn relative_frobenius(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Largest entry magnitude of a dense kernel, zero for diagonal ones.
pub fn dense_peak(kernel: &KernelOperator) -> f64 {
    match kernel.matrix() {
        KernelMatrix::Dense(h) => max_abs(h),
        KernelMatrix::Diagonal(_) => 0.0,
    }
}
