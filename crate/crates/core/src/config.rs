//! JSON run configuration for the figure sweeps.
//!
//! Times are in units of the squeezed-mode duration `τ` and frequencies in
//! units of `1/τ`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Beamsplitter,
    Upconversion,
    Comb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Filter bandwidth times mode duration, `ω_f τ`.
    OmegaFTau,
    /// Number of squeezed modes `N`.
    NModes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepConfig {
    /// Sweep values in order. `n_modes` sweeps are rounded to distinct integers.
    pub fn values(&self) -> Vec<f64> {
        let raw: Vec<f64> = if self.points == 1 {
            vec![self.start]
        } else {
            (0..self.points)
                .map(|i| {
                    let t = i as f64 / (self.points - 1) as f64;
                    match self.spacing {
                        Spacing::Linear => self.start + t * (self.stop - self.start),
                        Spacing::Log => (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp(),
                    }
                })
                .collect()
        };
        match self.variable {
            SweepVariable::OmegaFTau => raw,
            SweepVariable::NModes => {
                let mut out: Vec<f64> = Vec::new();
                for v in raw {
                    let r = v.round();
                    if out.last() != Some(&r) {
                        out.push(r);
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    /// Squeezed-mode counts `N` evaluated at every sweep point.
    pub modes: Vec<usize>,
    /// Mean photon number per squeezed mode.
    pub photons: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamsplitterConfig {
    pub reflectivity: f64,
    /// Detector jitter; `null` for a slow detector.
    pub tau_d: Option<f64>,
    /// Filter bandwidth when it is not the sweep variable.
    pub omega_f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UpconversionConfig {
    pub tau_g: f64,
    pub omega_ph: f64,
    /// Filter on the converted light; `null` for none.
    pub omega_f: Option<f64>,
    pub coupling: f64,
    /// Number of subtraction-mode profiles written out.
    pub profile_modes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombConfig {
    pub period: f64,
    pub cavity_decay: f64,
    pub pulse_tau: f64,
    pub t_click: f64,
    pub samples_per_period: usize,
    /// Real Hermite–Gaussian coefficients of the pulse shape.
    pub pulse_coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerConfig {
    /// Weight of the photon-subtracted component.
    pub p: f64,
    pub xi_re: f64,
    pub xi_im: f64,
    pub half_extent: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub extent_factor: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub scheme: Scheme,
    pub sweep: SweepConfig,
    pub state: StateConfig,
    pub beamsplitter: BeamsplitterConfig,
    pub upconversion: UpconversionConfig,
    pub comb: CombConfig,
    pub wigner: WignerConfig,
    pub grid: GridConfig,
    pub output: PathBuf,
    /// Recorded in the output provenance hash; all current runners are
    /// deterministic and draw no random numbers.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::Beamsplitter,
            sweep: SweepConfig {
                variable: SweepVariable::OmegaFTau,
                start: 0.01,
                stop: 30.0,
                points: 25,
                spacing: Spacing::Log,
            },
            state: StateConfig {
                modes: vec![10, 20, 40],
                photons: 0.01,
                tau: 1.0,
            },
            beamsplitter: BeamsplitterConfig {
                reflectivity: 0.1,
                tau_d: None,
                omega_f: 1.0,
            },
            upconversion: UpconversionConfig {
                tau_g: 1.0,
                // K = 1.5 with a gate matched to u_0.
                omega_ph: 1.0 / 0.8f64.sqrt(),
                omega_f: None,
                coupling: 1.0,
                profile_modes: 4,
            },
            comb: CombConfig {
                period: 10.0,
                cavity_decay: 0.02,
                pulse_tau: 1.0,
                t_click: 0.0,
                samples_per_period: 64,
                pulse_coeffs: vec![1.0],
            },
            wigner: WignerConfig {
                p: 0.8,
                xi_re: 0.3,
                xi_im: 0.0,
                half_extent: 5.0,
                samples: 201,
            },
            grid: GridConfig {
                extent_factor: 8.0,
                n_points: 1024,
            },
            output: PathBuf::from("out.csv"),
            seed: 0,
        }
    }
}

fn config_error(field: &str, reason: impl std::fmt::Display) -> Error {
    Error::Config(format!("`{field}`: {reason}"))
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(config_error(field, format!("must be positive, got {v}")))
    }
}

impl RunConfig {
    /// Defaults for the up-conversion N sweep.
    pub fn upconversion_default() -> Self {
        Self {
            scheme: Scheme::Upconversion,
            sweep: SweepConfig {
                variable: SweepVariable::NModes,
                start: 1.0,
                stop: 40.0,
                points: 40,
                spacing: Spacing::Linear,
            },
            ..Self::default()
        }
    }

    pub fn comb_default() -> Self {
        Self {
            scheme: Scheme::Comb,
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the compact JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let compact = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(compact.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.sweep;
        if s.points == 0 {
            return Err(config_error("sweep.points", "range must be nonempty"));
        }
        if !(s.start.is_finite() && s.stop.is_finite()) {
            return Err(config_error("sweep", "start and stop must be finite"));
        }
        if s.spacing == Spacing::Log {
            positive("sweep.start", s.start)?;
            positive("sweep.stop", s.stop)?;
        }
        match s.variable {
            SweepVariable::OmegaFTau => {
                positive("sweep.start", s.start)?;
                positive("sweep.stop", s.stop)?;
            }
            SweepVariable::NModes => {
                if s.start < 0.5 || s.stop < 0.5 {
                    return Err(config_error("sweep", "n_modes sweep needs values of at least 1"));
                }
            }
        }
        let st = &self.state;
        if st.modes.is_empty() || st.modes.contains(&0) {
            return Err(config_error("state.modes", "need a nonempty list of positive mode counts"));
        }
        positive("state.photons", st.photons)?;
        positive("state.tau", st.tau)?;

        let bs = &self.beamsplitter;
        if !(bs.reflectivity.is_finite() && bs.reflectivity > 0.0 && bs.reflectivity <= 1.0) {
            return Err(config_error("beamsplitter.reflectivity", "must lie in (0, 1]"));
        }
        if let Some(t) = bs.tau_d {
            positive("beamsplitter.tau_d", t)?;
        }
        positive("beamsplitter.omega_f", bs.omega_f)?;

        let uc = &self.upconversion;
        positive("upconversion.tau_g", uc.tau_g)?;
        positive("upconversion.omega_ph", uc.omega_ph)?;
        if let Some(w) = uc.omega_f {
            positive("upconversion.omega_f", w)?;
        }
        positive("upconversion.coupling", uc.coupling)?;

        let c = &self.comb;
        positive("comb.period", c.period)?;
        positive("comb.cavity_decay", c.cavity_decay)?;
        positive("comb.pulse_tau", c.pulse_tau)?;
        if !c.t_click.is_finite() {
            return Err(config_error("comb.t_click", "must be finite"));
        }
        if c.samples_per_period < 8 {
            return Err(config_error("comb.samples_per_period", "must be at least 8"));
        }
        if c.pulse_coeffs.is_empty() || c.pulse_coeffs.iter().all(|v| *v == 0.0) {
            return Err(config_error("comb.pulse_coeffs", "need a nonzero coefficient"));
        }

        let w = &self.wigner;
        if !(0.0..=1.0).contains(&w.p) {
            return Err(config_error("wigner.p", "must lie in [0, 1]"));
        }
        if w.half_extent < 4.0 || !w.half_extent.is_finite() {
            return Err(config_error("wigner.half_extent", "must be at least 4"));
        }
        if w.samples < 101 || w.samples.is_multiple_of(2) {
            return Err(config_error("wigner.samples", "must be odd and at least 101"));
        }

        if self.grid.extent_factor.is_nan() || self.grid.extent_factor < 4.0 {
            return Err(config_error("grid.extent_factor", "must be at least 4"));
        }
        if self.grid.n_points < 64 {
            return Err(config_error("grid.n_points", "must be at least 64"));
        }
        Ok(())
    }

    /// Fails unless the configuration selects `scheme`.
    pub fn require_scheme(&self, scheme: Scheme) -> Result<()> {
        if self.scheme == scheme {
            Ok(())
        } else {
            Err(config_error(
                "scheme",
                format!("this run needs {scheme:?}, configuration has {:?}", self.scheme),
            ))
        }
    }
}
