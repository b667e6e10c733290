//! Spectral mode functions, filters and detector models.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{invalid, require_positive, require_probability, Error, Result};
use crate::grid::{FrequencyGrid, SpectralAmplitude};

/// Highest Hermite–Gaussian order supported.
pub const MAX_HERMITE_ORDER: usize = 200;

/// Gaussian fit constant of `sinc(x) ≈ exp(-γx²)`.
pub const SINC_GAUSSIAN_FIT: f64 = 0.193;

/// Normalized Hermite functions `ψ_0(x) … ψ_{max_order}(x)` at one point.
///
/// Uses the three-term recurrence of the normalized functions, so no
/// Hermite polynomial or factorial is ever formed.
pub fn hermite_functions(max_order: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_order + 1);
    let psi0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(psi0);
    if max_order == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * psi0);
    for j in 1..max_order {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * x * out[j] - (jf / (jf + 1.0)).sqrt() * out[j - 1];
        out.push(next);
    }
    out
}

/// Normalized Hermite function `ψ_k(x)`.
pub fn hermite_function(k: usize, x: f64) -> f64 {
    hermite_functions(k, x)[k]
}

/// Half-extent a grid needs to hold the order-`k` mode of time scale `tau`.
pub fn required_half_extent(k: usize, tau: f64) -> f64 {
    (((2 * k + 1) as f64).sqrt() + 4.0) / tau
}

fn check_fits(k: usize, tau: f64, grid: &FrequencyGrid) -> Result<()> {
    if k > MAX_HERMITE_ORDER {
        return Err(invalid(
            "k",
            format!("order {k} exceeds the supported maximum {MAX_HERMITE_ORDER}"),
        ));
    }
    let need = required_half_extent(k, tau);
    if grid.half_extent() < need {
        return Err(Error::GridTooSmall(format!(
            "order {k} mode with tau={tau} needs half-extent {need:.4}, grid has {:.4}",
            grid.half_extent()
        )));
    }
    Ok(())
}

/// Sample count of the default grid.
pub const DEFAULT_GRID_POINTS: usize = 1024;
/// Half-extent of the default grid in units of the largest frequency scale.
pub const DEFAULT_EXTENT_FACTOR: f64 = 8.0;

/// Symmetric grid for working with the modes `u_0 … u_{max_order}` of width
/// `tau`.
///
/// The half-extent is `extent_factor/τ`, widened so the highest mode fits
/// with a margin of two extra `1/τ`. The spacing is at most `0.05/τ` and at
/// most a third of `finest` (e.g. a filter bandwidth); the point count is
/// raised from `min_points` as needed and made odd so that `ω = 0` is a node.
pub fn mode_grid(
    tau: f64,
    max_order: usize,
    finest: Option<f64>,
    extent_factor: f64,
    min_points: usize,
) -> Result<FrequencyGrid> {
    require_positive("tau", tau)?;
    require_positive("extent_factor", extent_factor)?;
    if let Some(f) = finest {
        require_positive("finest", f)?;
    }
    if max_order > MAX_HERMITE_ORDER {
        return Err(invalid(
            "max_order",
            format!("order {max_order} exceeds the supported maximum {MAX_HERMITE_ORDER}"),
        ));
    }
    let half = (extent_factor / tau).max(required_half_extent(max_order, tau) + 2.0 / tau);
    let h_max = finest.map_or(0.05 / tau, |f| (0.05 / tau).min(f / 3.0));
    let needed = (2.0 * half / h_max).ceil() as usize + 1;
    let mut n = needed.max(min_points);
    if n.is_multiple_of(2) {
        n += 1;
    }
    FrequencyGrid::symmetric(half, n)
}

/// Frequency-domain Hermite–Gaussian mode `u_k(ω) = √τ ψ_k(τω)`, unit norm.
pub fn hermite_gaussian(k: usize, tau: f64, grid: &FrequencyGrid) -> Result<SpectralAmplitude> {
    require_positive("tau", tau)?;
    check_fits(k, tau, grid)?;
    let s = tau.sqrt();
    Ok(SpectralAmplitude::from_real_fn(*grid, |w| {
        s * hermite_function(k, tau * w)
    }))
}

/// Modes `u_0 … u_{count-1}` in one recurrence pass per grid point.
pub fn hermite_gaussian_set(
    count: usize,
    tau: f64,
    grid: &FrequencyGrid,
) -> Result<Vec<SpectralAmplitude>> {
    require_positive("tau", tau)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    check_fits(count - 1, tau, grid)?;
    let s = tau.sqrt();
    let mut columns = vec![Vec::with_capacity(grid.len()); count];
    for w in grid.points() {
        for (k, value) in hermite_functions(count - 1, tau * w).into_iter().enumerate() {
            columns[k].push(Complex64::new(s * value, 0.0));
        }
    }
    columns
        .into_iter()
        .map(|values| SpectralAmplitude::new(*grid, values))
        .collect()
}

/// Gaussian gate spectrum `α(ω) ∝ exp(-τ_g²ω²/2)` with `∫|α|² dω = 1`.
pub fn gaussian_gate(tau_g: f64, grid: &FrequencyGrid) -> Result<SpectralAmplitude> {
    require_positive("tau_g", tau_g)?;
    let norm = (tau_g * tau_g / PI).powf(0.25);
    Ok(SpectralAmplitude::from_real_fn(*grid, |w| {
        norm * (-0.5 * tau_g * tau_g * w * w).exp()
    }))
}

/// Gaussian phase-matching function `Φ(ω) = exp(-ω²/2ω_ph²)`, peak value 1.
pub fn gaussian_phasematch(omega_ph: f64, grid: &FrequencyGrid) -> Result<SpectralAmplitude> {
    require_positive("omega_ph", omega_ph)?;
    Ok(SpectralAmplitude::from_real_fn(*grid, |w| {
        (-0.5 * w * w / (omega_ph * omega_ph)).exp()
    }))
}

/// Phase-matching width of a type-I degenerate up-conversion crystal of
/// length `length`, from the Gaussian fit of the sinc phase-matching curve.
///
/// `v_signal` and `v_converted` are group velocities; the width is
/// `1 / (√(γ/2) |1/v_c − 1/v_s| l)`.
pub fn phase_matching_width(length: f64, v_signal: f64, v_converted: f64) -> Result<f64> {
    require_positive("length", length)?;
    require_positive("v_signal", v_signal)?;
    require_positive("v_converted", v_converted)?;
    let walkoff = (1.0 / v_converted - 1.0 / v_signal).abs() * length;
    if walkoff == 0.0 {
        return Err(invalid(
            "group_velocities",
            "equal group velocities give unbounded phase-matching width",
        ));
    }
    Ok(1.0 / ((SINC_GAUSSIAN_FIT / 2.0).sqrt() * walkoff))
}

/// Spectral filter transmission `F(ω)`.
#[derive(Debug, Clone, PartialEq)]
pub enum FilterModel {
    /// `F ≡ 1`.
    Flat,
    /// `F(ω) = exp(-ω²/2ω_f²)`.
    Gaussian { omega_f: f64 },
    /// Transmission sampled on a grid; `|F| ≤ 1` is enforced on construction.
    Sampled(SpectralAmplitude),
}

impl FilterModel {
    pub fn gaussian(omega_f: f64) -> Result<Self> {
        require_positive("omega_f", omega_f)?;
        Ok(Self::Gaussian { omega_f })
    }

    pub fn sampled(transmission: SpectralAmplitude) -> Result<Self> {
        if let Some(v) = transmission.values().iter().find(|v| v.norm() > 1.0 + 1e-12) {
            return Err(invalid(
                "transmission",
                format!("|F| must not exceed 1, found {}", v.norm()),
            ));
        }
        if transmission.values().iter().any(|v| v.im != 0.0) {
            log::warn!("complex filter transmission: phase filters are not validated against closed forms");
        }
        Ok(Self::Sampled(transmission))
    }

    /// `F(ω_i)` on every point of `grid`.
    pub fn transmission_on(&self, grid: &FrequencyGrid) -> Result<Vec<Complex64>> {
        match self {
            Self::Flat => Ok(vec![Complex64::new(1.0, 0.0); grid.len()]),
            Self::Gaussian { omega_f } => Ok(grid
                .points()
                .map(|w| Complex64::new((-0.5 * w * w / (omega_f * omega_f)).exp(), 0.0))
                .collect()),
            Self::Sampled(f) => {
                if f.grid() != grid {
                    return Err(Error::GridMismatch);
                }
                Ok(f.values().to_vec())
            }
        }
    }

    /// `|F(ω_i)|²` on every point of `grid`.
    pub fn power_on(&self, grid: &FrequencyGrid) -> Result<Vec<f64>> {
        Ok(self
            .transmission_on(grid)?
            .into_iter()
            .map(|f| f.norm_sqr())
            .collect())
    }
}

/// Temporal response `γ(t)` of the photodetector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorResponse {
    /// Projection on an instantaneous single-photon state, `γ(t) = δ(t)`.
    Instant,
    /// Jittered click, `γ(t) = exp(-t²/τ_d²)`.
    GaussianJitter { tau_d: f64 },
    /// Time non-resolving detector, `γ ≡ 1`.
    Slow,
}

/// Photodetector: temporal response and quantum efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel {
    pub response: DetectorResponse,
    pub efficiency: f64,
}

impl DetectorModel {
    pub fn new(response: DetectorResponse, efficiency: f64) -> Result<Self> {
        require_probability("efficiency", efficiency)?;
        if let DetectorResponse::GaussianJitter { tau_d } = response {
            require_positive("tau_d", tau_d)?;
        }
        Ok(Self {
            response,
            efficiency,
        })
    }

    pub fn slow() -> Self {
        Self {
            response: DetectorResponse::Slow,
            efficiency: 1.0,
        }
    }

    pub fn instant() -> Self {
        Self {
            response: DetectorResponse::Instant,
            efficiency: 1.0,
        }
    }

    pub fn jitter(tau_d: f64) -> Result<Self> {
        Self::new(DetectorResponse::GaussianJitter { tau_d }, 1.0)
    }

    /// `Γ(ω) = (1/2π) ∫ γ(t) e^{iωt} dt` for the time-resolving responses.
    /// Returns `None` for the slow detector, whose `Γ` is `δ(ω)`.
    pub fn spectral_response(&self, omega: f64) -> Option<f64> {
        match self.response {
            DetectorResponse::Instant => Some(1.0 / (2.0 * PI)),
            DetectorResponse::GaussianJitter { tau_d } => {
                Some(tau_d / (2.0 * PI.sqrt()) * (-0.25 * tau_d * tau_d * omega * omega).exp())
            }
            DetectorResponse::Slow => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{inner_product, make_grid};

    fn default_grid() -> FrequencyGrid {
        make_grid(8.0, 1024, 1.0).unwrap()
    }

    #[test]
    fn ground_mode_is_normalized() {
        let u0 = hermite_gaussian(0, 1.0, &default_grid()).unwrap();
        assert!((inner_product(&u0, &u0).unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn first_modes_are_orthogonal() {
        let g = default_grid();
        let u0 = hermite_gaussian(0, 1.0, &g).unwrap();
        let u1 = hermite_gaussian(1, 1.0, &g).unwrap();
        let u2 = hermite_gaussian(2, 1.0, &g).unwrap();
        assert!(inner_product(&u0, &u1).unwrap().norm() <= 1e-12);
        assert!(inner_product(&u0, &u2).unwrap().norm() <= 1e-12);
    }

    #[test]
    fn mode_parity_is_exact() {
        let g = FrequencyGrid::symmetric(14.0, 1001).unwrap();
        for k in [0, 1, 5, 12, 33] {
            let u = hermite_gaussian(k, 1.3, &g).unwrap();
            let v = u.values();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            for i in 0..g.len() {
                assert_eq!(v[g.len() - 1 - i], v[i] * sign);
            }
        }
    }

    #[test]
    fn mode_that_does_not_fit_is_rejected() {
        let g = make_grid(4.0, 256, 1.0).unwrap();
        assert!(matches!(hermite_gaussian(40, 1.0, &g), Err(Error::GridTooSmall(_))));
        assert!(hermite_gaussian(201, 1.0, &FrequencyGrid::symmetric(40.0, 4096).unwrap()).is_err());
    }

    #[test]
    fn mode_grid_fits_requested_modes() {
        let g = mode_grid(1.0, 40, None, DEFAULT_EXTENT_FACTOR, DEFAULT_GRID_POINTS).unwrap();
        assert!(g.len() >= DEFAULT_GRID_POINTS && g.len() % 2 == 1);
        let modes = hermite_gaussian_set(41, 1.0, &g).unwrap();
        assert!((inner_product(&modes[40], &modes[40]).unwrap().re - 1.0).abs() <= 1e-8);
        let narrow = mode_grid(1.0, 9, Some(0.01), DEFAULT_EXTENT_FACTOR, 64).unwrap();
        assert!(narrow.spacing() <= 0.01 / 3.0);
        assert_eq!(narrow.point(narrow.len() / 2), 0.0);
    }

    #[test]
    fn set_matches_individual_modes() {
        let g = FrequencyGrid::symmetric(12.0, 512).unwrap();
        let set = hermite_gaussian_set(20, 0.9, &g).unwrap();
        for (k, u) in set.iter().enumerate() {
            let single = hermite_gaussian(k, 0.9, &g).unwrap();
            assert_eq!(u, &single);
        }
    }

    #[test]
    fn gaussian_filter_overlap_matches_closed_form() {
        // With ω_f = 1/τ the k=k'=0 closed form reduces to (2α²)^{-1/2} with α² = 1.
        let g = default_grid();
        let u0 = hermite_gaussian(0, 1.0, &g).unwrap();
        let filter = FilterModel::gaussian(1.0).unwrap();
        let power = filter.power_on(&g).unwrap();
        let f = SpectralAmplitude::new(g, power.iter().map(|p| Complex64::new(*p, 0.0)).collect()).unwrap();
        let filtered = u0.pointwise_mul(&f).unwrap();
        let value = inner_product(&u0, &filtered).unwrap();
        assert!((value.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn gate_and_phasematch_conventions() {
        let g = default_grid();
        let gate = gaussian_gate(1.0, &g).unwrap();
        assert!((gate.norm_sqr() - 1.0).abs() < 1e-12);
        let odd = FrequencyGrid::symmetric(8.0, 1025).unwrap();
        let phi = gaussian_phasematch(0.7, &odd).unwrap();
        let centre = phi.value_at(0.0);
        assert!((centre.re - 1.0).abs() < 1e-12);
        assert!(gaussian_gate(0.0, &g).is_err());
        assert!(gaussian_phasematch(-1.0, &g).is_err());
    }

    #[test]
    fn phase_matching_width_positive_for_walkoff() {
        let w = phase_matching_width(2.0, 1.0, 0.9).unwrap();
        let expected = 1.0 / ((0.193f64 / 2.0).sqrt() * (1.0 / 0.9 - 1.0) * 2.0);
        assert!((w - expected).abs() < 1e-12);
        assert!(w > 0.0);
        assert!(phase_matching_width(2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn filter_bounds() {
        let g = default_grid();
        let gauss = FilterModel::gaussian(0.3).unwrap();
        assert!(gauss.power_on(&g).unwrap().iter().all(|&p| p <= 1.0));
        let too_big = SpectralAmplitude::from_real_fn(g, |_| 1.5);
        assert!(FilterModel::sampled(too_big).is_err());
        let other = FrequencyGrid::symmetric(3.0, 100).unwrap();
        let sampled = FilterModel::sampled(SpectralAmplitude::from_real_fn(other, |_| 0.5)).unwrap();
        assert!(matches!(sampled.transmission_on(&g), Err(Error::GridMismatch)));
    }

    #[test]
    fn detector_validation() {
        assert!(DetectorModel::jitter(0.0).is_err());
        assert!(DetectorModel::new(DetectorResponse::Slow, 1.2).is_err());
        let d = DetectorModel::jitter(2.0).unwrap();
        // ∫Γ dω = γ(0) = 1
        let h = 0.001;
        let total: f64 = (-20000..=20000).map(|i| d.spectral_response(i as f64 * h).unwrap()).sum::<f64>() * h;
        assert!((total - 1.0).abs() < 1e-10);
        assert!(DetectorModel::slow().spectral_response(0.0).is_none());
    }
}
