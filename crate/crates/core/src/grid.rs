//! Uniform angular-frequency grids and complex mode functions sampled on them.
//!
//! Integrals over frequency are evaluated with uniform weights `Δω`. All mode
//! functions used here decay like Gaussians, so the endpoint samples are
//! negligible and the rule coincides with the trapezoid rule; for such
//! integrands it converges faster than any power of `Δω`.

use num_complex::Complex64;

use crate::error::{invalid, require_positive, Error, Result};

/// Smallest number of samples accepted for a grid.
pub const MIN_GRID_POINTS: usize = 64;
/// Smallest half-extent, in units of the characteristic frequency.
pub const MIN_EXTENT_FACTOR: f64 = 4.0;

/// Uniform sampling of `[omega_min, omega_max]` with `n_points` samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    omega_min: f64,
    omega_max: f64,
    n_points: usize,
}

impl FrequencyGrid {
    pub fn new(omega_min: f64, omega_max: f64, n_points: usize) -> Result<Self> {
        if n_points < MIN_GRID_POINTS {
            return Err(invalid(
                "n_points",
                format!("need at least {MIN_GRID_POINTS} points, got {n_points}"),
            ));
        }
        if !(omega_min.is_finite() && omega_max.is_finite() && omega_max > omega_min) {
            return Err(invalid(
                "omega_range",
                format!("need finite omega_min < omega_max, got [{omega_min}, {omega_max}]"),
            ));
        }
        Ok(Self {
            omega_min,
            omega_max,
            n_points,
        })
    }

    /// Grid symmetric about zero covering `±half_extent`.
    pub fn symmetric(half_extent: f64, n_points: usize) -> Result<Self> {
        require_positive("half_extent", half_extent)?;
        Self::new(-half_extent, half_extent, n_points)
    }

    pub fn omega_min(&self) -> f64 {
        self.omega_min
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sample spacing `Δω`.
    pub fn spacing(&self) -> f64 {
        (self.omega_max - self.omega_min) / (self.n_points - 1) as f64
    }

    /// Largest `W` with `[-W, W]` inside the grid.
    pub fn half_extent(&self) -> f64 {
        self.omega_max.min(-self.omega_min)
    }

    /// The `i`-th sample. Computed as `center + offset·Δω` so that samples of a
    /// symmetric grid come in exact `±ω` pairs.
    pub fn point(&self, i: usize) -> f64 {
        let center = 0.5 * (self.omega_min + self.omega_max);
        let offset = i as f64 - 0.5 * (self.n_points - 1) as f64;
        center + offset * self.spacing()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }
}

/// Builds the symmetric grid `[-extent_factor·scale, extent_factor·scale]`.
///
/// `scale` is the characteristic frequency of the problem (e.g. `1/τ`).
pub fn make_grid(extent_factor: f64, n_points: usize, scale: f64) -> Result<FrequencyGrid> {
    require_positive("scale", scale)?;
    if extent_factor.is_nan() || extent_factor < MIN_EXTENT_FACTOR {
        return Err(invalid(
            "extent_factor",
            format!("must be at least {MIN_EXTENT_FACTOR}, got {extent_factor}"),
        ));
    }
    FrequencyGrid::symmetric(extent_factor * scale, n_points)
}

/// Complex function of angular frequency sampled on a [`FrequencyGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralAmplitude {
    grid: FrequencyGrid,
    values: Vec<Complex64>,
}

impl SpectralAmplitude {
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("values", "non-finite sample"));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: FrequencyGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn from_real_fn(grid: FrequencyGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |w| Complex64::new(f(w), 0.0))
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `Σ|f_i|² Δω`.
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Returns the function scaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(invalid("amplitude", "cannot normalize a zero function"));
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Pointwise product with another function on the same grid.
    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// Value at an arbitrary frequency by four-point Lagrange interpolation,
    /// zero outside the grid. Exact at grid nodes.
    pub fn value_at(&self, omega: f64) -> Complex64 {
        let h = self.grid.spacing();
        let pos = (omega - self.grid.point(0)) / h;
        let n = self.values.len();
        if !(pos > -1.0 && pos < n as f64) {
            return Complex64::new(0.0, 0.0);
        }
        let nearest = pos.round();
        if (pos - nearest).abs() < 1e-9 {
            let i = nearest as usize;
            return if i < n { self.values[i] } else { Complex64::new(0.0, 0.0) };
        }
        let base = pos.floor() as isize;
        let frac = pos - base as f64;
        let sample = |i: isize| {
            if i < 0 || i as usize >= n {
                Complex64::new(0.0, 0.0)
            } else {
                self.values[i as usize]
            }
        };
        // Nodes at -1, 0, 1, 2 relative to `base`.
        let t = frac;
        let w_m1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
        let w_0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        let w_1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        let w_2 = (t + 1.0) * t * (t - 1.0) / 6.0;
        sample(base - 1) * w_m1 + sample(base) * w_0 + sample(base + 1) * w_1 + sample(base + 2) * w_2
    }

    /// Index of the sample with the largest magnitude (first one on ties).
    pub fn peak_index(&self) -> usize {
        peak_index(&self.values)
    }
}

pub(crate) fn peak_index(values: &[Complex64]) -> usize {
    let mut best = 0;
    let mut best_mag = f64::NEG_INFINITY;
    for (i, v) in values.iter().enumerate() {
        let mag = v.norm_sqr();
        if mag > best_mag * (1.0 + 1e-12) {
            best = i;
            best_mag = mag;
        }
    }
    best
}

/// `⟨a, b⟩ = ∫ a*(ω) b(ω) dω`, antilinear in the first argument.
pub fn inner_product(a: &SpectralAmplitude, b: &SpectralAmplitude) -> Result<Complex64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let sum: Complex64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(sum * a.grid.spacing())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_grid_covers_requested_range() {
        let tau = 1.0;
        let grid = make_grid(8.0, 1024, 1.0 / tau).unwrap();
        assert_eq!(grid.omega_min(), -8.0);
        assert_eq!(grid.omega_max(), 8.0);
        assert_eq!(grid.len(), 1024);
        assert!((grid.spacing() - 16.0 / 1023.0).abs() < 1e-15);

        let grid = make_grid(4.0, 64, 1.0).unwrap();
        assert_eq!((grid.omega_min(), grid.omega_max(), grid.len()), (-4.0, 4.0, 64));
    }

    #[test]
    fn make_grid_rejects_bad_input() {
        assert!(make_grid(8.0, 1024, 0.0).is_err());
        assert!(make_grid(8.0, 1024, -1.0).is_err());
        assert!(make_grid(8.0, 63, 1.0).is_err());
        assert!(make_grid(3.9, 1024, 1.0).is_err());
    }

    #[test]
    fn symmetric_grid_points_pair_exactly() {
        for n in [64, 65, 1000, 1001] {
            let grid = FrequencyGrid::symmetric(7.3, n).unwrap();
            for i in 0..n {
                assert_eq!(grid.point(i), -grid.point(n - 1 - i));
            }
            assert!((grid.point(0) + 7.3).abs() < 1e-12);
        }
    }

    #[test]
    fn inner_product_is_conjugate_symmetric() {
        let grid = FrequencyGrid::symmetric(6.0, 128).unwrap();
        let a = SpectralAmplitude::from_fn(grid, |w| Complex64::new((-w * w).exp(), w * (-w * w).exp()));
        let b = SpectralAmplitude::from_fn(grid, |w| Complex64::new(0.0, 1.0) * (-(w - 0.5).powi(2)).exp());
        let ab = inner_product(&a, &b).unwrap();
        let ba = inner_product(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-15);
    }

    #[test]
    fn inner_product_rejects_grid_mismatch() {
        let g1 = FrequencyGrid::symmetric(6.0, 128).unwrap();
        let g2 = FrequencyGrid::symmetric(6.0, 129).unwrap();
        let a = SpectralAmplitude::from_real_fn(g1, |w| (-w * w).exp());
        let b = SpectralAmplitude::from_real_fn(g2, |w| (-w * w).exp());
        assert!(matches!(inner_product(&a, &b), Err(Error::GridMismatch)));
    }

    #[test]
    fn interpolation_is_exact_on_nodes_and_accurate_between() {
        let grid = FrequencyGrid::symmetric(8.0, 400).unwrap();
        let f = SpectralAmplitude::from_real_fn(grid, |w| (-w * w / 2.0).exp());
        assert_eq!(f.value_at(grid.point(17)), f.values()[17]);
        for w in [-1.234, 0.0101, 0.77, 2.5] {
            assert!((f.value_at(w).re - (-w * w / 2.0).exp()).abs() < 1e-6);
        }
        assert_eq!(f.value_at(100.0), Complex64::new(0.0, 0.0));
    }
}
