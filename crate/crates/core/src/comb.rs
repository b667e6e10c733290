//! Frequency-comb (pulse-train) extension: per-pulse photon numbers and the
//! temporal mode of the heralded photon.
//!
//! Comb supermodes are trains `Σ_l ψ_k(t − lT₀) e^{ilθ}`; photon numbers are
//! counted per pulse by averaging the modal number over `θ ∈ [−π, π]`.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, require_positive, require_probability, Result};
use crate::modes::hermite_functions;
use crate::subtraction::SubtractionReport;

/// Default number of Simpson intervals for θ-averages.
pub const THETA_INTERVALS: usize = 20_000;
/// Pulses whose envelope weight falls below this are omitted.
const ENVELOPE_CUTOFF: f64 = 1e-9;

/// Pulse train with period `T₀`, cavity field decay rate `γ_c` and
/// Hermite–Gaussian pulse shapes of duration `pulse_tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombSpec {
    pub period: f64,
    pub cavity_decay: f64,
    pub pulse_tau: f64,
}

impl CombSpec {
    pub fn new(period: f64, cavity_decay: f64, pulse_tau: f64) -> Result<Self> {
        require_positive("period", period)?;
        require_positive("cavity_decay", cavity_decay)?;
        require_positive("pulse_tau", pulse_tau)?;
        Ok(Self {
            period,
            cavity_decay,
            pulse_tau,
        })
    }

    /// `γ_c T₀`; its inverse is roughly the number of correlated pulses.
    pub fn decay_per_period(&self) -> f64 {
        self.cavity_decay * self.period
    }
}

/// `∫_{−π}^{π} n(θ) dθ / 2π` by composite Simpson with `intervals` panels.
pub fn per_pulse_photon_number_with(density: impl Fn(f64) -> f64, intervals: usize) -> Result<f64> {
    if intervals < 2 || intervals % 2 == 1 {
        return Err(invalid("intervals", format!("need an even count ≥ 2, got {intervals}")));
    }
    let h = 2.0 * PI / intervals as f64;
    let mut sum = density(-PI) + density(PI);
    for i in 1..intervals {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * density(-PI + i as f64 * h);
    }
    let value = sum * h / 3.0 / (2.0 * PI);
    if !value.is_finite() {
        return Err(invalid("density", "non-finite θ-average"));
    }
    Ok(value)
}

/// Per-pulse photon number `n_{k,0}`, the θ-average of the modal density.
pub fn per_pulse_photon_number(density: impl Fn(f64) -> f64) -> Result<f64> {
    per_pulse_photon_number_with(density, THETA_INTERVALS)
}

/// Squeezing density peaked at `θ = 0` with width set by the cavity:
/// `n(θ) = n_peak / (1 + (θ / γ_cT₀)²)²`.
pub fn cavity_squeezing_density(n_peak: f64, comb: &CombSpec) -> impl Fn(f64) -> f64 {
    let a = comb.decay_per_period();
    move |theta: f64| {
        let x = theta / a;
        n_peak / ((1.0 + x * x) * (1.0 + x * x))
    }
}

/// Subtraction report of a comb with per-pulse photon numbers `n_k0`.
pub fn comb_report(
    efficiencies: &[f64],
    c: &DMatrix<Complex64>,
    n_k0: &[f64],
    scale: f64,
) -> Result<SubtractionReport> {
    SubtractionReport::from_modes(efficiencies, c, n_k0, scale)
}

/// Single-mode subtraction probability when selectivity only covers a
/// phase band `Δθ` of the comb: `p_s Δθ / π`.
pub fn diluted_single_mode_probability(p_s: f64, delta_theta: f64) -> Result<f64> {
    require_probability("p_s", p_s)?;
    if !(delta_theta > 0.0 && delta_theta <= PI) {
        return Err(invalid("delta_theta", format!("must lie in (0, π], got {delta_theta}")));
    }
    Ok(p_s * delta_theta / PI)
}

/// Sampled complex time profile with the pulse weights it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalProfile {
    pub times: Vec<f64>,
    pub amplitudes: Vec<Complex64>,
    /// `(l, weight)` of each included pulse, normalized like the samples.
    pub pulse_weights: Vec<(i64, f64)>,
    pub step: f64,
}

impl TemporalProfile {
    /// `Σ |f(t_i)|² Δt`.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.step
    }

    /// Writes `t,re,im` rows.
    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "t,re,im")?;
        for (t, a) in self.times.iter().zip(&self.amplitudes) {
            writeln!(out, "{},{},{}", t, a.re, a.im)?;
        }
        Ok(())
    }
}

/// Time-domain pulse `Σ_k a_k ψ_k(t)` with `ψ_k(t) = τ^{−1/2} h_k(t/τ)`.
fn pulse_shape(coeffs: &[Complex64], tau: f64, t: f64) -> Complex64 {
    let h = hermite_functions(coeffs.len() - 1, t / tau);
    let s = 1.0 / tau.sqrt();
    coeffs.iter().zip(h).map(|(a, v)| a * (s * v)).sum()
}

/// Temporal mode of the heralded photon: copies of the pulse shape at
/// `t = lT₀` weighted by `e^{−γ_c |lT₀ − t_click|}`, normalized to unit norm.
///
/// Samples are spaced `T₀ / samples_per_period` and anchored at `t_click`.
pub fn heralded_temporal_mode(
    comb: &CombSpec,
    pulse_coeffs: &[Complex64],
    t_click: f64,
    samples_per_period: usize,
) -> Result<TemporalProfile> {
    if pulse_coeffs.is_empty() || pulse_coeffs.iter().all(|a| a.norm() == 0.0) {
        return Err(invalid("pulse_coeffs", "need at least one nonzero coefficient"));
    }
    if !t_click.is_finite() {
        return Err(invalid("t_click", "must be finite"));
    }
    if samples_per_period < 8 {
        return Err(invalid("samples_per_period", "need at least 8 samples per period"));
    }
    let t0 = comb.period;
    let gamma = comb.cavity_decay;
    let reach = -ENVELOPE_CUTOFF.ln() / gamma;
    let l_min = ((t_click - reach) / t0).ceil() as i64;
    let l_max = ((t_click + reach) / t0).floor() as i64;
    let mut pulses: Vec<(i64, f64)> = (l_min..=l_max)
        .map(|l| (l, (-gamma * (l as f64 * t0 - t_click).abs()).exp()))
        .collect();
    if pulses.is_empty() {
        // Click far from any pulse: keep the nearest one.
        let l = (t_click / t0).round() as i64;
        pulses.push((l, (-gamma * (l as f64 * t0 - t_click).abs()).exp()));
    }

    // Pulse shape support, with the same margin used for spectral grids.
    let order = pulse_coeffs.len() - 1;
    let support = (((2 * order + 1) as f64).sqrt() + 6.0) * comb.pulse_tau;
    let step = t0 / samples_per_period as f64;
    let t_lo = pulses[0].0 as f64 * t0 - support;
    let t_hi = pulses[pulses.len() - 1].0 as f64 * t0 + support;
    let i_lo = ((t_lo - t_click) / step).floor() as i64;
    let i_hi = ((t_hi - t_click) / step).ceil() as i64;
    let times: Vec<f64> = (i_lo..=i_hi).map(|i| t_click + i as f64 * step).collect();

    let mut amplitudes = vec![Complex64::new(0.0, 0.0); times.len()];
    for &(l, w) in &pulses {
        let centre = l as f64 * t0;
        for (t, a) in times.iter().zip(amplitudes.iter_mut()) {
            let dt = t - centre;
            if dt.abs() <= support {
                *a += pulse_shape(pulse_coeffs, comb.pulse_tau, dt) * w;
            }
        }
    }
    let norm = (amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * step).sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(invalid("profile", "heralded temporal mode vanishes on the sampling grid"));
    }
    for a in amplitudes.iter_mut() {
        *a /= norm;
    }
    Ok(TemporalProfile {
        times,
        amplitudes,
        pulse_weights: pulses.into_iter().map(|(l, w)| (l, w / norm)).collect(),
        step,
    })
}
