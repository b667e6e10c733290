//! Brute-force simulation in a truncated Fock space of a few modes.
//!
//! Independent of the closed-form machinery in [`crate::subtraction`]: states
//! are explicit amplitude vectors, subtraction is applied with ladder
//! operators, and all figures of merit come from traces and diagonalization.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::linalg::hermitian_eigen;

pub const MAX_MODES: usize = 4;
pub const MAX_CUTOFF: usize = 6;
/// Cutoff used by default; enough for the two-photon weak-squeezing state.
pub const DEFAULT_CUTOFF: usize = 4;

/// Product space of `modes` oscillators, each truncated at `cutoff` photons.
/// Basis index is mixed-radix with mode 0 most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    modes: usize,
    cutoff: usize,
}

impl FockSpace {
    pub fn new(modes: usize, cutoff: usize) -> Result<Self> {
        if modes == 0 || modes > MAX_MODES {
            return Err(invalid("modes", format!("need 1..={MAX_MODES} modes, got {modes}")));
        }
        if cutoff > MAX_CUTOFF {
            return Err(invalid("cutoff", format!("at most {MAX_CUTOFF} photons per mode, got {cutoff}")));
        }
        Ok(Self { modes, cutoff })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        (self.cutoff + 1).pow(self.modes as u32)
    }

    fn stride(&self, mode: usize) -> usize {
        (self.cutoff + 1).pow((self.modes - 1 - mode) as u32)
    }

    pub fn index(&self, occupations: &[usize]) -> usize {
        occupations
            .iter()
            .enumerate()
            .map(|(k, n)| n * self.stride(k))
            .sum()
    }

    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let base = self.cutoff + 1;
        let mut occ = vec![0; self.modes];
        for k in (0..self.modes).rev() {
            occ[k] = index % base;
            index /= base;
        }
        occ
    }

    /// `â_k` applied to an amplitude vector.
    pub fn annihilate(&self, mode: usize, v: &DVector<Complex64>) -> DVector<Complex64> {
        let stride = self.stride(mode);
        let mut out = DVector::zeros(v.len());
        for idx in 0..v.len() {
            let n = (idx / stride) % (self.cutoff + 1);
            if n > 0 {
                out[idx - stride] += v[idx] * (n as f64).sqrt();
            }
        }
        out
    }
}

/// Normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    space: FockSpace,
    amplitudes: DVector<Complex64>,
}

impl FockState {
    pub fn new(space: FockSpace, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a space of dimension {}",
                amplitudes.len(),
                space.dim()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(invalid("amplitudes", format!("state norm is {norm}, expected 1")));
        }
        Ok(Self { space, amplitudes })
    }

    pub fn vacuum(space: FockSpace) -> Self {
        let mut amplitudes = DVector::zeros(space.dim());
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { space, amplitudes }
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, occupations: &[usize]) -> Complex64 {
        self.amplitudes[self.space.index(occupations)]
    }

    /// `⟨â_k† â_k⟩`.
    pub fn photon_number(&self, mode: usize) -> f64 {
        self.space.annihilate(mode, &self.amplitudes).norm_squared()
    }
}

/// Density matrix on a [`FockSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: FockSpace,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|v| v.re).sum()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).diagonal().iter().map(|v| v.re).sum()
    }

    /// Reduced density matrix of one mode.
    pub fn partial_trace(&self, mode: usize) -> Result<DMatrix<Complex64>> {
        if mode >= self.space.modes() {
            return Err(Error::IndexOutOfRange {
                index: mode,
                len: self.space.modes(),
            });
        }
        let d = self.space.cutoff() + 1;
        let mut out = DMatrix::zeros(d, d);
        let dim = self.space.dim();
        for i in 0..dim {
            let oi = self.space.occupations(i);
            for j in 0..dim {
                let oj = self.space.occupations(j);
                let same_rest = (0..self.space.modes()).all(|k| k == mode || oi[k] == oj[k]);
                if same_rest {
                    out[(oi[mode], oj[mode])] += self.matrix[(i, j)];
                }
            }
        }
        Ok(out)
    }

    /// Block of `ρ` between states with one photon in a single mode,
    /// indexed by that mode.
    pub fn one_photon_block(&self) -> DMatrix<Complex64> {
        let m = self.space.modes();
        let idx: Vec<usize> = (0..m)
            .map(|k| {
                let mut occ = vec![0; m];
                occ[k] = 1;
                self.space.index(&occ)
            })
            .collect();
        DMatrix::from_fn(m, m, |a, b| self.matrix[(idx[a], idx[b])])
    }
}

/// `|0⟩ + (1/√2) Σ_k ξ_k |2_k⟩`, normalized.
pub fn weak_squeezed_vector(xi: &[Complex64], cutoff: usize) -> Result<FockState> {
    if cutoff < 2 {
        return Err(invalid("cutoff", "need at least 2 photons per mode to hold |2_k>"));
    }
    let space = FockSpace::new(xi.len(), cutoff)?;
    if let Some(x) = xi.iter().find(|x| x.norm() > 0.3) {
        log::warn!("|xi| = {} is outside the weak-squeezing range", x.norm());
    }
    let mut v = DVector::zeros(space.dim());
    v[0] = Complex64::new(1.0, 0.0);
    for (k, x) in xi.iter().enumerate() {
        let mut occ = vec![0; xi.len()];
        occ[k] = 2;
        v[space.index(&occ)] = x * std::f64::consts::FRAC_1_SQRT_2;
    }
    let norm = v.norm();
    FockState::new(space, v / Complex64::new(norm, 0.0))
}

/// `ρ⁻ = Σ_j σ_j ŝ_j |ψ⟩⟨ψ| ŝ_j† / P` with `ŝ_j = Σ_k c_jk â_k`.
/// Returns `ρ⁻` and `P = Σ_j σ_j ‖ŝ_j ψ‖²`.
pub fn conditioned_density(
    state: &FockState,
    sigma: &[f64],
    c: &DMatrix<Complex64>,
) -> Result<(DensityMatrix, f64)> {
    let space = *state.space();
    if c.nrows() != sigma.len() || c.ncols() != space.modes() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} overlaps for {} efficiencies and {} modes",
            c.nrows(),
            c.ncols(),
            sigma.len(),
            space.modes()
        )));
    }
    for j in 0..c.nrows() {
        let row: f64 = c.row(j).iter().map(|v| v.norm_sqr()).sum();
        if row > 1.0 + 1e-12 {
            return Err(invalid("c", format!("row {j} has squared norm {row} > 1")));
        }
    }
    if sigma.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return Err(invalid("sigma", "efficiencies must be nonnegative"));
    }
    let lowered: Vec<DVector<Complex64>> = (0..space.modes())
        .map(|k| space.annihilate(k, state.amplitudes()))
        .collect();
    let dim = space.dim();
    let mut rho = DMatrix::zeros(dim, dim);
    for (j, s) in sigma.iter().enumerate() {
        let mut phi = DVector::zeros(dim);
        for (k, a) in lowered.iter().enumerate() {
            phi += a * c[(j, k)];
        }
        rho += &phi * phi.adjoint() * Complex64::new(*s, 0.0);
    }
    let p: f64 = rho.diagonal().iter().map(|v| v.re).sum();
    if p.is_nan() || p <= 0.0 {
        return Err(Error::ZeroProbability);
    }
    rho /= Complex64::new(p, 0.0);
    Ok((DensityMatrix { space, matrix: rho }, p))
}

/// Figures of merit read off a conditioned density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMetrics {
    pub purity: f64,
    /// Single-photon population of the marginal of the chosen mode.
    pub p_s: f64,
    pub marginal: DMatrix<Complex64>,
    /// Largest eigenvalue of the one-photon block.
    pub p_f: f64,
}

pub fn oracle_metrics(rho: &DensityMatrix, mode: usize) -> Result<OracleMetrics> {
    let marginal = rho.partial_trace(mode)?;
    let p_s = if marginal.nrows() > 1 { marginal[(1, 1)].re } else { 0.0 };
    let block = rho.one_photon_block();
    let p_f = hermitian_eigen(&block)?.values[0];
    Ok(OracleMetrics {
        purity: rho.purity(),
        p_s,
        marginal,
        p_f,
    })
}

/// Randomly drawn weak-squeezing subtraction problem.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomInstance {
    pub seed: u64,
    pub xi: Vec<Complex64>,
    pub sigma: Vec<f64>,
    /// Rows of a random unitary restricted to the squeezed modes.
    pub c: DMatrix<Complex64>,
}

/// `modes` squeezers with `|ξ| ∈ [0.01, max_xi]`, one to three subtraction
/// modes with efficiencies in `(0, 1]`.
pub fn random_instance(seed: u64, modes: usize, max_xi: f64) -> Result<RandomInstance> {
    if modes == 0 || modes > MAX_MODES {
        return Err(invalid("modes", format!("need 1..={MAX_MODES} modes, got {modes}")));
    }
    if max_xi.is_nan() || max_xi <= 0.01 {
        return Err(invalid("max_xi", "must exceed 0.01"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xi = (0..modes)
        .map(|_| {
            let r = rng.gen_range(0.01..=max_xi);
            Complex64::from_polar(r, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        })
        .collect();
    let j_count = rng.gen_range(1..=3usize);
    let mut sigma: Vec<f64> = (0..j_count).map(|_| 1.0 - rng.gen::<f64>()).collect();
    sigma.sort_by(|a, b| b.total_cmp(a));
    let dim = j_count.max(modes);
    let ginibre = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let q = ginibre.qr().q();
    let c = q.view((0, 0), (j_count, modes)).into_owned();
    Ok(RandomInstance { seed, xi, sigma, c })
}
