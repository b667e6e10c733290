//! Single-mode Wigner functions of the photon-subtracted marginals.
//!
//! Convention: `∫ W d²α = 1` with `d²α = d(Re α) d(Im α)`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, require_probability, Result};

/// Smallest accepted phase-space half-extent.
pub const MIN_HALF_EXTENT: f64 = 4.0;
/// Smallest accepted number of samples per axis.
pub const MIN_SAMPLES: usize = 101;

/// Square grid over `α = x + iy`, `x, y ∈ [−A, A]`, with an odd number of
/// samples per axis so the origin is a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceGrid {
    half_extent: f64,
    samples: usize,
}

impl PhaseSpaceGrid {
    pub fn new(half_extent: f64, samples: usize) -> Result<Self> {
        if !(half_extent.is_finite() && half_extent >= MIN_HALF_EXTENT) {
            return Err(invalid(
                "half_extent",
                format!("must be at least {MIN_HALF_EXTENT}, got {half_extent}"),
            ));
        }
        if samples < MIN_SAMPLES || samples.is_multiple_of(2) {
            return Err(invalid(
                "samples",
                format!("need an odd count of at least {MIN_SAMPLES}, got {samples}"),
            ));
        }
        Ok(Self {
            half_extent,
            samples,
        })
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / (self.samples - 1) as f64
    }

    /// Axis coordinate of sample `i`; exact zero at the centre.
    pub fn coordinate(&self, i: usize) -> f64 {
        (i as f64 - ((self.samples - 1) / 2) as f64) * self.spacing()
    }

    pub fn centre_index(&self) -> usize {
        (self.samples - 1) / 2
    }
}

/// Grid that holds the squeezed marginal for `ξ` well within 1e-6 in
/// normalization: half-extent `max(5, 3.25 e^{|ξ|})` and spacing at most
/// `min(0.05, 0.2 e^{−|ξ|})`, the narrow quadrature having width `e^{−|ξ|}/2`.
pub fn adequate_grid(xi: Complex64) -> Result<PhaseSpaceGrid> {
    let r = xi.norm();
    if !r.is_finite() {
        return Err(invalid("xi", "non-finite squeezing parameter"));
    }
    let half_extent = (3.25 * r.exp()).max(5.0);
    let h = (0.2 * (-r).exp()).min(0.05);
    let mut samples = ((2.0 * half_extent / h).ceil() as usize + 1).max(MIN_SAMPLES);
    if samples.is_multiple_of(2) {
        samples += 1;
    }
    PhaseSpaceGrid::new(half_extent, samples)
}

/// Real field sampled on a [`PhaseSpaceGrid`], row-major with rows along
/// `Im α`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerField {
    grid: PhaseSpaceGrid,
    values: Vec<f64>,
}

impl WignerField {
    /// Evaluates `f(α)` on every grid node, one row per worker task.
    pub fn from_fn(grid: PhaseSpaceGrid, f: impl Fn(Complex64) -> f64 + Sync) -> Self {
        let n = grid.samples();
        let mut values = vec![0.0; n * n];
        values.par_chunks_mut(n).enumerate().for_each(|(iy, row)| {
            let y = grid.coordinate(iy);
            for (ix, out) in row.iter_mut().enumerate() {
                *out = f(Complex64::new(grid.coordinate(ix), y));
            }
        });
        Self { grid, values }
    }

    pub fn grid(&self) -> &PhaseSpaceGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at `α = coordinate(ix) + i·coordinate(iy)`.
    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid.samples() + ix]
    }

    pub fn origin_value(&self) -> f64 {
        let c = self.grid.centre_index();
        self.value(c, c)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Σ W h²`.
    pub fn integral(&self) -> f64 {
        let h = self.grid.spacing();
        self.values.iter().sum::<f64>() * h * h
    }

    /// Writes `re_alpha,im_alpha,w` rows.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "re_alpha,im_alpha,w")?;
        let n = self.grid.samples();
        for iy in 0..n {
            for ix in 0..n {
                writeln!(
                    out,
                    "{},{},{}",
                    self.grid.coordinate(ix),
                    self.grid.coordinate(iy),
                    self.value(ix, iy)
                )?;
            }
        }
        Ok(())
    }
}

/// `α̃ = α cosh r − α* e^{iθ} sinh r` for `ξ = r e^{iθ}`.
pub fn squeezed_coordinate(alpha: Complex64, xi: Complex64) -> Complex64 {
    let r = xi.norm();
    let phase = if r > 0.0 { xi / r } else { Complex64::new(1.0, 0.0) };
    alpha * r.cosh() - alpha.conj() * phase * r.sinh()
}

/// Vacuum Wigner function `(2/π) e^{−2|α|²}`.
pub fn vacuum_wigner(alpha: Complex64) -> f64 {
    2.0 / PI * (-2.0 * alpha.norm_sqr()).exp()
}

/// Single-photon Wigner function `(2/π)(4|α|² − 1) e^{−2|α|²}`.
pub fn single_photon_wigner(alpha: Complex64) -> f64 {
    let a2 = alpha.norm_sqr();
    2.0 / PI * (4.0 * a2 - 1.0) * (-2.0 * a2).exp()
}

/// `p W⁻(α̃) + (1 − p) W(α̃)` at one point.
pub fn marginal_wigner_value(p: f64, xi: Complex64, alpha: Complex64) -> f64 {
    let a = squeezed_coordinate(alpha, xi);
    let a2 = a.norm_sqr();
    2.0 / PI * (p * (4.0 * a2 - 1.0) + (1.0 - p)) * (-2.0 * a2).exp()
}

/// Wigner function of the single-mode marginal: a mixture with weight `p_s`
/// of the photon-subtracted and (1 − `p_s`) of the plain squeezed vacuum.
pub fn marginal_wigner(p_s: f64, xi: Complex64, grid: &PhaseSpaceGrid) -> Result<WignerField> {
    require_probability("p_s", p_s)?;
    if !xi.is_finite() {
        return Err(invalid("xi", "non-finite squeezing parameter"));
    }
    Ok(WignerField::from_fn(*grid, |alpha| marginal_wigner_value(p_s, xi, alpha)))
}

/// `p_f |1⟩⟨1| + (1 − p_f) |0⟩⟨0|`.
pub fn fock_mixture_wigner(p_f: f64, grid: &PhaseSpaceGrid) -> Result<WignerField> {
    marginal_wigner(p_f, Complex64::new(0.0, 0.0), grid)
}

/// Whether a mixture with single-photon weight `p` is negative at the origin.
pub fn negative_at_origin(p: f64) -> bool {
    p > 0.5
}
