//! Decomposition of subtraction kernels into subtraction modes `v_j` and
//! efficiencies `σ_j`, plus the closed-form Gaussian decompositions.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, require_positive, Error, Result};
use crate::grid::{inner_product, FrequencyGrid, SpectralAmplitude};
use crate::kernels::{KernelMatrix, KernelOperator};
use crate::linalg::{hermitian_eigen, DEGENERACY_TOL};
use crate::modes::hermite_gaussian;

/// Default relative truncation threshold for [`decompose`].
pub const DEFAULT_TRUNCATION: f64 = 1e-10;

/// Tolerance for orthonormality of the stored modes.
const ORTHONORMALITY_TOL: f64 = 1e-8;

/// `S = Σ_j σ_j v_j v_j†`, efficiencies in descending order up to numerical ties.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    modes: Vec<SpectralAmplitude>,
    efficiencies: Vec<f64>,
}

impl SchmidtDecomposition {
    /// Validates ordering, nonnegativity and orthonormality of the modes.
    pub fn new(modes: Vec<SpectralAmplitude>, efficiencies: Vec<f64>) -> Result<Self> {
        if modes.len() != efficiencies.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} modes for {} efficiencies",
                modes.len(),
                efficiencies.len()
            )));
        }
        if efficiencies.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(invalid("efficiencies", "must be finite and nonnegative"));
        }
        let tol = DEGENERACY_TOL * efficiencies.first().copied().unwrap_or(0.0);
        if efficiencies.windows(2).any(|w| w[1] > w[0] + tol) {
            return Err(invalid("efficiencies", "must be sorted in descending order"));
        }
        for (i, a) in modes.iter().enumerate() {
            for (j, b) in modes.iter().enumerate().skip(i) {
                let overlap = inner_product(a, b)?;
                let target = if i == j { 1.0 } else { 0.0 };
                if (overlap - target).norm() > ORTHONORMALITY_TOL {
                    return Err(invalid(
                        "modes",
                        format!("not orthonormal: <v_{i}, v_{j}> = {overlap}"),
                    ));
                }
            }
        }
        Ok(Self {
            modes,
            efficiencies,
        })
    }

    pub fn modes(&self) -> &[SpectralAmplitude] {
        &self.modes
    }

    pub fn efficiencies(&self) -> &[f64] {
        &self.efficiencies
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn grid(&self) -> Option<&FrequencyGrid> {
        self.modes.first().map(|m| m.grid())
    }

    pub fn total_efficiency(&self) -> f64 {
        self.efficiencies.iter().sum()
    }

    /// Participation ratio `K = (Σσ)² / Σσ²`.
    pub fn schmidt_number(&self) -> Result<f64> {
        schmidt_number(&self.efficiencies)
    }

    /// Keeps the `count` leading modes.
    pub fn truncated(&self, count: usize) -> Self {
        let count = count.min(self.len());
        Self {
            modes: self.modes[..count].to_vec(),
            efficiencies: self.efficiencies[..count].to_vec(),
        }
    }

    /// Operator matrix `Σ_j σ_j Δω v_j v_j†` on the modes' grid, comparable
    /// with [`KernelOperator::operator_matrix`].
    pub fn operator_matrix(&self) -> Option<DMatrix<Complex64>> {
        let grid = self.grid()?;
        let n = grid.len();
        let dw = grid.spacing();
        let mut out = DMatrix::zeros(n, n);
        for (mode, sigma) in self.modes.iter().zip(&self.efficiencies) {
            let v = nalgebra::DVector::from_column_slice(mode.values());
            out += &v * v.adjoint() * Complex64::new(sigma * dw, 0.0);
        }
        Some(out)
    }
}

/// Participation ratio `(Σσ)² / Σσ²` of nonnegative weights.
pub fn schmidt_number(efficiencies: &[f64]) -> Result<f64> {
    let sum: f64 = efficiencies.iter().sum();
    let sum_sq: f64 = efficiencies.iter().map(|s| s * s).sum();
    if sum_sq == 0.0 || !sum_sq.is_finite() {
        return Err(invalid("efficiencies", "no positive efficiency"));
    }
    Ok(sum * sum / sum_sq)
}

/// Number of leading values to keep: the dropped tail has 2-norm at most
/// `threshold` times the 2-norm of all values.
fn retained_count(values: &[f64], threshold: f64) -> usize {
    let total: f64 = values.iter().map(|s| s * s).sum();
    let budget = threshold * threshold * total;
    let mut tail = 0.0;
    let mut keep = values.len();
    while keep > 1 {
        let next = tail + values[keep - 1] * values[keep - 1];
        if next > budget {
            break;
        }
        tail = next;
        keep -= 1;
    }
    keep
}

/// Eigendecomposition of a kernel into subtraction modes and efficiencies.
///
/// The efficiencies are eigenvalues of the discretized operator, so they
/// include `Δω` and the kernel scale and sum to [`KernelOperator::trace`].
/// Modes come back with unit norm, largest sample real positive. Trailing
/// modes are dropped while the dropped efficiencies have 2-norm at most
/// `truncation` times that of all efficiencies, which bounds the relative
/// Frobenius error of the reconstruction by `truncation`.
pub fn decompose(kernel: &KernelOperator, truncation: f64) -> Result<SchmidtDecomposition> {
    if !(truncation > 0.0 && truncation < 1.0) {
        return Err(invalid("truncation", format!("must lie in (0, 1), got {truncation}")));
    }
    let grid = *kernel.grid();
    let dw = grid.spacing();
    let weight = kernel.scale();

    let (values, vectors): (Vec<f64>, Vec<Vec<Complex64>>) = match kernel.matrix() {
        KernelMatrix::Diagonal(d) => {
            // Eigenvectors are grid delta functions; ties keep grid order.
            let mut order: Vec<usize> = (0..d.len()).collect();
            order.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));
            let scale = 1.0 / dw.sqrt();
            order
                .into_iter()
                .map(|i| {
                    let mut v = vec![Complex64::new(0.0, 0.0); d.len()];
                    v[i] = Complex64::new(scale, 0.0);
                    (weight * d[i], v)
                })
                .unzip()
        }
        KernelMatrix::Dense(h) => {
            let eig = hermitian_eigen(h)?;
            let scale = 1.0 / dw.sqrt();
            eig.values
                .iter()
                .zip(eig.vectors)
                .map(|(value, v)| (weight * dw * value, v.iter().map(|x| x * scale).collect()))
                .unzip()
        }
    };

    let largest = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if largest == 0.0 {
        return SchmidtDecomposition::new(Vec::new(), Vec::new());
    }
    if let Some(min) = values.last() {
        if *min < -1e-10 * largest {
            return Err(invalid(
                "kernel",
                format!("not positive semidefinite: eigenvalue {min:e} vs largest {largest:e}"),
            ));
        }
    }
    let clamped: Vec<f64> = values.iter().map(|v| v.max(0.0)).collect();
    let keep = retained_count(&values, truncation);

    let modes = vectors
        .into_iter()
        .take(keep)
        .map(|v| SpectralAmplitude::new(grid, v))
        .collect::<Result<Vec<_>>>()?;
    SchmidtDecomposition::new(modes, clamped[..keep].to_vec())
}

/// Closed-form decomposition with Hermite–Gaussian modes of width
/// `mode_width` and geometric efficiencies `σ_j = σ_total (1 − ρ) ρ^j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticDecomposition {
    pub sigma_total: f64,
    pub ratio: f64,
    pub mode_width: f64,
}

impl AnalyticDecomposition {
    pub fn efficiency(&self, j: usize) -> f64 {
        self.sigma_total * (1.0 - self.ratio) * self.ratio.powi(j as i32)
    }

    pub fn efficiencies(&self, count: usize) -> Vec<f64> {
        (0..count).map(|j| self.efficiency(j)).collect()
    }

    /// `K = (1 + ρ) / (1 − ρ)`, the participation ratio of the infinite series.
    pub fn schmidt_number(&self) -> f64 {
        (1.0 + self.ratio) / (1.0 - self.ratio)
    }

    pub fn mode(&self, j: usize, grid: &FrequencyGrid) -> Result<SpectralAmplitude> {
        hermite_gaussian(j, self.mode_width, grid)
    }

    /// The first `count` modes and efficiencies as a [`SchmidtDecomposition`].
    pub fn to_decomposition(&self, count: usize, grid: &FrequencyGrid) -> Result<SchmidtDecomposition> {
        let modes = (0..count)
            .map(|j| self.mode(j, grid))
            .collect::<Result<Vec<_>>>()?;
        SchmidtDecomposition::new(modes, self.efficiencies(count))
    }
}

/// Beamsplitter with Gaussian filter `ω_f` and Gaussian detector jitter
/// `τ_d`. With `ε = τ_d ω_f`:
/// `σ_j = r² t^{2j+1}`, `t = ε / (1 + √(1+ε²))`, `K = √(1+ε²)`,
/// mode width `τ = ω_f⁻¹ (1+ε²)^{1/4}`.
pub fn analytic_bs_decomposition(omega_f: f64, tau_d: f64, r: f64) -> Result<AnalyticDecomposition> {
    require_positive("omega_f", omega_f)?;
    require_positive("tau_d", tau_d)?;
    if !(r.is_finite() && r >= 0.0) {
        return Err(invalid("reflectivity", format!("must be nonnegative, got {r}")));
    }
    let eps = tau_d * omega_f;
    let s = (1.0 + eps * eps).sqrt();
    let t = eps / (1.0 + s);
    Ok(AnalyticDecomposition {
        sigma_total: r * r * eps / 2.0,
        ratio: t * t,
        mode_width: s.sqrt() / omega_f,
    })
}

/// Gaussian up-conversion: gate `τ_g`, phase matching `ω_ph`, optional
/// Gaussian filter `ω_f` on the converted light, coupling `C`.
///
/// With `q = τ_g⁻² (ω_ph⁻² + ω_f⁻²)`: `K = √(1 + 1/q)`,
/// `σ_j = (2√π |C|²/τ_g) t^{2j+1}` with `t = √(1+q) − √q`,
/// mode width `τ = τ_g (q/(1+q))^{1/4}`.
pub fn analytic_upconversion_decomposition(
    tau_g: f64,
    omega_ph: f64,
    omega_f: Option<f64>,
    coupling: f64,
) -> Result<AnalyticDecomposition> {
    require_positive("tau_g", tau_g)?;
    require_positive("omega_ph", omega_ph)?;
    if let Some(w) = omega_f {
        require_positive("omega_f", w)?;
    }
    if !(coupling.is_finite() && coupling >= 0.0) {
        return Err(invalid("coupling", format!("must be nonnegative, got {coupling}")));
    }
    let c = omega_ph.powi(-2) + omega_f.map_or(0.0, |w| w.powi(-2));
    let q = c / (tau_g * tau_g);
    let t = (1.0 + q).sqrt() - q.sqrt();
    Ok(AnalyticDecomposition {
        sigma_total: coupling * coupling * (std::f64::consts::PI / c).sqrt(),
        ratio: t * t,
        mode_width: tau_g * (q / (1.0 + q)).powf(0.25),
    })
}
