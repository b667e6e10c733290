//! Multimode squeezed vacuum in its eigenmode basis.

use num_complex::Complex64;

use crate::error::{invalid, require_positive, Error, Result};
use crate::grid::{inner_product, FrequencyGrid, SpectralAmplitude};
use crate::modes::hermite_gaussian_set;

const ORTHONORMALITY_TOL: f64 = 1e-8;

/// How mean photon numbers are obtained from squeezing parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhotonNumberMode {
    /// `n = sinh²|ξ|`.
    #[default]
    Exact,
    /// `n = |ξ|²`, the weak-squeezing (two-photon truncation) value.
    Weak,
}

/// Independent squeezers `ξ_k = r_k e^{iθ_k}` on orthonormal modes `u_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultimodeSqueezedState {
    basis: Vec<SpectralAmplitude>,
    xi: Vec<Complex64>,
}

impl MultimodeSqueezedState {
    pub fn new(basis: Vec<SpectralAmplitude>, xi: Vec<Complex64>) -> Result<Self> {
        if basis.is_empty() {
            return Err(invalid("basis", "at least one mode is required"));
        }
        if basis.len() != xi.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} modes for {} squeezing parameters",
                basis.len(),
                xi.len()
            )));
        }
        if xi.iter().any(|x| !x.is_finite()) {
            return Err(invalid("xi", "non-finite squeezing parameter"));
        }
        let grid = basis[0].grid();
        if basis.iter().any(|u| u.grid() != grid) {
            return Err(Error::GridMismatch);
        }
        let deviation = gram_deviation(&basis)?;
        if deviation > ORTHONORMALITY_TOL {
            return Err(invalid(
                "basis",
                format!("not orthonormal (max Gram deviation {deviation:e})"),
            ));
        }
        Ok(Self { basis, xi })
    }

    pub fn basis(&self) -> &[SpectralAmplitude] {
        &self.basis
    }

    pub fn xi(&self) -> &[Complex64] {
        &self.xi
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn grid(&self) -> &FrequencyGrid {
        self.basis[0].grid()
    }

    pub fn photon_numbers(&self, mode: PhotonNumberMode) -> Vec<f64> {
        photon_numbers(&self.xi, mode)
    }
}

/// Largest `|⟨u_i, u_j⟩ − δ_ij|`.
pub fn gram_deviation(basis: &[SpectralAmplitude]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((inner_product(a, b)? - target).norm());
        }
    }
    Ok(worst)
}

/// Mean photon number of each squeezer.
pub fn photon_numbers(xi: &[Complex64], mode: PhotonNumberMode) -> Vec<f64> {
    xi.iter()
        .map(|x| match mode {
            PhotonNumberMode::Exact => x.norm().sinh().powi(2),
            PhotonNumberMode::Weak => x.norm_sqr(),
        })
        .collect()
}

/// Effective number of squeezed modes `(Σn)² / Σn²`.
pub fn effective_mode_number(n: &[f64]) -> Result<f64> {
    if n.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(invalid("n", "photon numbers must be finite and nonnegative"));
    }
    let sum: f64 = n.iter().sum();
    let sum_sq: f64 = n.iter().map(|v| v * v).sum();
    if sum_sq == 0.0 {
        return Err(invalid("n", "all photon numbers vanish"));
    }
    Ok(sum * sum / sum_sq)
}

/// Hermite–Gaussian modes `u_0 … u_{N−1}` of width `tau` squeezed with
/// `ξ_k = (−1)^k √n_k`, so that even and odd modes are squeezed in
/// orthogonal quadratures.
#[derive(Debug, Clone, PartialEq)]
pub struct HGSqueezedEnsemble {
    photons: Vec<f64>,
    tau: f64,
}

impl HGSqueezedEnsemble {
    pub fn new(photons: Vec<f64>, tau: f64) -> Result<Self> {
        if photons.is_empty() {
            return Err(invalid("n_modes", "at least one squeezed mode is required"));
        }
        if photons.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(invalid("photons", "must be finite and nonnegative"));
        }
        require_positive("tau", tau)?;
        Ok(Self { photons, tau })
    }

    pub fn equal(n_modes: usize, photons: f64, tau: f64) -> Result<Self> {
        Self::new(vec![photons; n_modes], tau)
    }

    pub fn n_modes(&self) -> usize {
        self.photons.len()
    }

    pub fn photons(&self) -> &[f64] {
        &self.photons
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn xi(&self) -> Vec<Complex64> {
        self.photons
            .iter()
            .enumerate()
            .map(|(k, n)| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(sign * n.sqrt(), 0.0)
            })
            .collect()
    }

    pub fn state(&self, grid: &FrequencyGrid) -> Result<MultimodeSqueezedState> {
        let basis = hermite_gaussian_set(self.n_modes(), self.tau, grid)?;
        MultimodeSqueezedState::new(basis, self.xi())
    }
}

/// `N` Hermite–Gaussian modes each carrying `n` photons.
pub fn equal_hg_ensemble(
    n_modes: usize,
    photons: f64,
    tau: f64,
    grid: &FrequencyGrid,
) -> Result<MultimodeSqueezedState> {
    HGSqueezedEnsemble::equal(n_modes, photons, tau)?.state(grid)
}
