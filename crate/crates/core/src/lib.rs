//! Conditional single-photon subtraction from multimode squeezed light.
//!
//! Builds subtraction kernels for beamsplitter and up-conversion schemes,
//! decomposes them into subtraction modes, and evaluates purities,
//! subtraction and heralding probabilities and Wigner negativity of the
//! conditioned states.

pub mod comb;
pub mod config;
pub mod error;
pub mod fock;
pub mod experiments;
pub mod grid;
pub mod kernels;
pub mod linalg;
pub mod modes;
pub mod schmidt;
pub mod squeezed;
pub mod subtraction;
pub mod wigner;

pub use error::{Error, Result};
pub use grid::{inner_product, make_grid, FrequencyGrid, SpectralAmplitude};
pub use kernels::{KernelMatrix, KernelOperator, ParametricKernel};
pub use modes::{DetectorModel, DetectorResponse, FilterModel};
pub use schmidt::{decompose, AnalyticDecomposition, SchmidtDecomposition};
pub use squeezed::{equal_hg_ensemble, HGSqueezedEnsemble, MultimodeSqueezedState, PhotonNumberMode};
pub use subtraction::{herald, project_kernel, BasisSubtractionMatrix, HeraldReport, SubtractionReport};
pub use wigner::{adequate_grid, PhaseSpaceGrid, WignerField};
pub use comb::{CombSpec, TemporalProfile};
pub use config::RunConfig;
