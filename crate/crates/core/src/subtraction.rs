//! Figures of merit of the photon-subtracted state: subtraction probability,
//! purity, single-mode marginals and heralding.
//!
//! Everything here works on the subtraction matrix `S_kk′ = ⟨u_k, S u_k′⟩`
//! in the squeezing basis, or equivalently on efficiencies `σ_j` and overlaps
//! `c_jk = ⟨v_j, u_k⟩`, related by `S_kk′ = Σ_j σ_j c_jk* c_jk′`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::grid::inner_product;
use crate::kernels::{KernelMatrix, KernelOperator};
use crate::linalg::{check_hermitian, fix_phase, hermitian_eigen};
use crate::schmidt::{schmidt_number, SchmidtDecomposition};
use crate::squeezed::MultimodeSqueezedState;

/// Squeezing amplitude above which the weak-squeezing herald formulas are
/// no longer reliable.
pub const WEAK_SQUEEZING_LIMIT: f64 = 0.3;

/// Hermitian subtraction matrix in the squeezing basis.
///
/// Entries include the kernel prefactor; `scale` records that prefactor
/// (`r²` or `|C|²`) for normalized reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSubtractionMatrix {
    matrix: DMatrix<Complex64>,
    scale: f64,
}

impl BasisSubtractionMatrix {
    pub fn new(matrix: DMatrix<Complex64>, scale: f64) -> Result<Self> {
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(invalid("S", "non-finite entry"));
        }
        check_hermitian(&matrix, 1e-10)?;
        if !(scale.is_finite() && scale >= 0.0) {
            return Err(invalid("scale", format!("must be nonnegative, got {scale}")));
        }
        let n = matrix.nrows();
        let matrix = DMatrix::from_fn(n, n, |i, j| 0.5 * (matrix[(i, j)] + matrix[(j, i)].conj()));
        Ok(Self { matrix, scale })
    }

    /// `S_kk′ = Σ_j σ_j c_jk* c_jk′` from a decomposition and its overlaps.
    pub fn from_modes(efficiencies: &[f64], c: &DMatrix<Complex64>, scale: f64) -> Result<Self> {
        if c.nrows() != efficiencies.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} overlap rows for {} efficiencies",
                c.nrows(),
                efficiencies.len()
            )));
        }
        let m = c.ncols();
        let mut s = DMatrix::zeros(m, m);
        for (j, sigma) in efficiencies.iter().enumerate() {
            for k in 0..m {
                for kp in 0..m {
                    s[(k, kp)] += c[(j, k)].conj() * c[(j, kp)] * *sigma;
                }
            }
        }
        Self::new(s, scale)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn get(&self, k: usize, kp: usize) -> Complex64 {
        self.matrix[(k, kp)]
    }

    /// Same matrix with entries and scale multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        Self::new(&self.matrix * Complex64::new(factor, 0.0), self.scale * factor)
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigen(&self.matrix)?.values)
    }
}

/// `S_kk′ = ⟨u_k, S u_k′⟩`: a single quadrature for diagonal kernels, a double
/// one for dense kernels.
pub fn project_kernel(
    kernel: &KernelOperator,
    state: &MultimodeSqueezedState,
) -> Result<BasisSubtractionMatrix> {
    if state.grid() != kernel.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = kernel.grid();
    let n = grid.len();
    let m = state.len();
    let dw = grid.spacing();
    let u = DMatrix::from_fn(n, m, |i, k| state.basis()[k].values()[i]);
    let real_basis = u.iter().all(|v| v.im == 0.0);

    let s = match kernel.matrix() {
        KernelMatrix::Diagonal(d) => {
            let mut weighted = u.clone();
            for (mut row, w) in weighted.row_iter_mut().zip(d) {
                row *= Complex64::new(*w * dw, 0.0);
            }
            u.adjoint() * weighted
        }
        KernelMatrix::Dense(h) => {
            let real_kernel = h.iter().all(|v| v.im == 0.0);
            if real_basis && real_kernel {
                let ur = u.map(|v| v.re);
                let hr = h.map(|v| v.re);
                let s = ur.transpose() * (hr * &ur) * (dw * dw);
                s.map(|v| Complex64::new(v, 0.0))
            } else {
                u.adjoint() * (h * &u) * Complex64::new(dw * dw, 0.0)
            }
        }
    };
    BasisSubtractionMatrix::new(s * Complex64::new(kernel.scale(), 0.0), kernel.scale())
}

fn check_photon_numbers(s: &BasisSubtractionMatrix, n: &[f64]) -> Result<()> {
    if n.len() != s.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} photon numbers for a {}-mode subtraction matrix",
            n.len(),
            s.dim()
        )));
    }
    if n.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(invalid("n", "photon numbers must be finite and nonnegative"));
    }
    Ok(())
}

/// `P = Σ_k n_k S_kk`.
pub fn total_probability(s: &BasisSubtractionMatrix, n: &[f64]) -> Result<f64> {
    check_photon_numbers(s, n)?;
    Ok(n.iter().enumerate().map(|(k, nk)| nk * s.get(k, k).re).sum())
}

fn positive_probability(s: &BasisSubtractionMatrix, n: &[f64]) -> Result<f64> {
    let p = total_probability(s, n)?;
    if p > 0.0 {
        Ok(p)
    } else {
        Err(Error::ZeroProbability)
    }
}

/// `π = Σ_kk′ n_k n_k′ |S_kk′|² / P²`.
pub fn multimode_purity(s: &BasisSubtractionMatrix, n: &[f64]) -> Result<f64> {
    let p = positive_probability(s, n)?;
    let m = s.dim();
    let mut sum = 0.0;
    for k in 0..m {
        for kp in 0..m {
            sum += n[k] * n[kp] * s.get(k, kp).norm_sqr();
        }
    }
    Ok(sum / (p * p))
}

/// `p_s = n_s S_ss / P`.
pub fn single_mode_probability(s: &BasisSubtractionMatrix, n: &[f64], index: usize) -> Result<f64> {
    if index >= s.dim() {
        return Err(Error::IndexOutOfRange {
            index,
            len: s.dim(),
        });
    }
    let p = positive_probability(s, n)?;
    Ok(n[index] * s.get(index, index).re / p)
}

/// `π_s = p_s² + (1 − p_s)²`.
pub fn single_mode_purity(p_s: f64) -> f64 {
    p_s * p_s + (1.0 - p_s) * (1.0 - p_s)
}

/// `c_jk = ⟨v_j, u_k⟩`, rows indexed by subtraction mode.
pub fn overlaps(d: &SchmidtDecomposition, state: &MultimodeSqueezedState) -> Result<DMatrix<Complex64>> {
    let mut c = DMatrix::zeros(d.len(), state.len());
    for (j, v) in d.modes().iter().enumerate() {
        for (k, u) in state.basis().iter().enumerate() {
            c[(j, k)] = inner_product(v, u)?;
        }
    }
    Ok(c)
}

fn check_modes(efficiencies: &[f64], c: &DMatrix<Complex64>, n: &[f64]) -> Result<()> {
    if c.nrows() != efficiencies.len() || c.ncols() != n.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} overlaps for {} efficiencies and {} photon numbers",
            c.nrows(),
            c.ncols(),
            efficiencies.len(),
            n.len()
        )));
    }
    if n.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(invalid("n", "photon numbers must be finite and nonnegative"));
    }
    Ok(())
}

/// `P = Σ_jk σ_j |c_jk|² n_k`.
pub fn probability_from_modes(efficiencies: &[f64], c: &DMatrix<Complex64>, n: &[f64]) -> Result<f64> {
    check_modes(efficiencies, c, n)?;
    let mut p = 0.0;
    for (j, sigma) in efficiencies.iter().enumerate() {
        for (k, nk) in n.iter().enumerate() {
            p += sigma * c[(j, k)].norm_sqr() * nk;
        }
    }
    Ok(p)
}

/// `π = Σ_jj′ σ_j σ_j′ |Σ_k c_jk c_j′k* n_k|² / P²`.
pub fn purity_from_modes(efficiencies: &[f64], c: &DMatrix<Complex64>, n: &[f64]) -> Result<f64> {
    let p = probability_from_modes(efficiencies, c, n)?;
    if p <= 0.0 {
        return Err(Error::ZeroProbability);
    }
    let j_count = efficiencies.len();
    let mut sum = 0.0;
    for j in 0..j_count {
        for jp in 0..j_count {
            let inner: Complex64 = n
                .iter()
                .enumerate()
                .map(|(k, nk)| c[(j, k)] * c[(jp, k)].conj() * *nk)
                .sum();
            sum += efficiencies[j] * efficiencies[jp] * inner.norm_sqr();
        }
    }
    Ok(sum / (p * p))
}

/// `p_s = n_s Σ_j σ_j |c_js|² / P`.
pub fn single_mode_probability_from_modes(
    efficiencies: &[f64],
    c: &DMatrix<Complex64>,
    n: &[f64],
    index: usize,
) -> Result<f64> {
    let p = probability_from_modes(efficiencies, c, n)?;
    if index >= n.len() {
        return Err(Error::IndexOutOfRange { index, len: n.len() });
    }
    if p <= 0.0 {
        return Err(Error::ZeroProbability);
    }
    let s_ss: f64 = efficiencies
        .iter()
        .enumerate()
        .map(|(j, sigma)| sigma * c[(j, index)].norm_sqr())
        .sum();
    Ok(n[index] * s_ss / p)
}

/// Figures of merit of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SubtractionReport {
    /// Total subtraction probability `P`.
    pub probability: f64,
    /// `P / (n̄ · scale)` with `n̄` the mean photon number per squeezed mode.
    pub normalized_probability: f64,
    /// Description of the normalization used for `normalized_probability`.
    pub normalization: &'static str,
    pub purity: f64,
    pub schmidt_number: f64,
    /// Conditional subtraction probability for each squeezed mode.
    pub p_s: Vec<f64>,
    pub pi_s: Vec<f64>,
    /// `c_jk`, when the report was built from a decomposition.
    pub overlaps: Option<DMatrix<Complex64>>,
}

pub const NORMALIZATION_LABEL: &str = "P/(mean_n*scale)";

fn normalized(p: f64, n: &[f64], scale: f64) -> f64 {
    let mean = n.iter().sum::<f64>() / n.len() as f64;
    if mean > 0.0 && scale > 0.0 {
        p / (mean * scale)
    } else {
        0.0
    }
}

impl SubtractionReport {
    /// Report from the basis matrix. `schmidt` is the kernel's Schmidt
    /// number; when absent it is taken from the eigenvalues of `S_kk′`.
    pub fn from_basis(s: &BasisSubtractionMatrix, n: &[f64], schmidt: Option<f64>) -> Result<Self> {
        let probability = positive_probability(s, n)?;
        let purity = multimode_purity(s, n)?;
        let p_s = (0..s.dim())
            .map(|i| single_mode_probability(s, n, i))
            .collect::<Result<Vec<_>>>()?;
        let schmidt_number = match schmidt {
            Some(k) => k,
            None => {
                let values: Vec<f64> = s.eigenvalues()?.into_iter().map(|v| v.max(0.0)).collect();
                self::schmidt_number(&values)?
            }
        };
        Ok(Self {
            probability,
            normalized_probability: normalized(probability, n, s.scale()),
            normalization: NORMALIZATION_LABEL,
            purity,
            schmidt_number,
            pi_s: p_s.iter().map(|p| single_mode_purity(*p)).collect(),
            p_s,
            overlaps: None,
        })
    }

    /// Report from efficiencies and overlaps.
    pub fn from_modes(efficiencies: &[f64], c: &DMatrix<Complex64>, n: &[f64], scale: f64) -> Result<Self> {
        let probability = probability_from_modes(efficiencies, c, n)?;
        if probability <= 0.0 {
            return Err(Error::ZeroProbability);
        }
        let purity = purity_from_modes(efficiencies, c, n)?;
        let p_s = (0..n.len())
            .map(|i| single_mode_probability_from_modes(efficiencies, c, n, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            probability,
            normalized_probability: normalized(probability, n, scale),
            normalization: NORMALIZATION_LABEL,
            purity,
            schmidt_number: schmidt_number(efficiencies)?,
            pi_s: p_s.iter().map(|p| single_mode_purity(*p)).collect(),
            p_s,
            overlaps: Some(c.clone()),
        })
    }
}

/// Heralded single-photon modes in the weak-squeezing regime.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldReport {
    /// `L_kk′ = ξ_k* ξ_k′ S_kk′`.
    pub l: DMatrix<Complex64>,
    /// Eigenvalues of `L`, descending.
    pub lambdas: Vec<f64>,
    /// Heralded modes `w_l` as unit coefficient vectors over `u_k`.
    pub modes: Vec<DVector<Complex64>>,
    /// `Σ λ_l`, the weak-squeezing subtraction probability.
    pub probability: f64,
    /// Probability `λ_0 / Σλ` of a single photon in the dominant mode.
    pub p_f: f64,
}

/// Eigen-decomposition of `L_kk′ = ξ_k* ξ_k′ S_kk′`.
///
/// The heralded state is `Σ_l λ_l |1_{w_l}⟩⟨1_{w_l}| / P`; the mode
/// coefficients are the complex conjugates of the eigenvectors of `L`, so a
/// rank-one kernel `σ v v†` heralds `w ∝ Σ_k ξ_k ⟨v, u_k⟩ u_k`.
pub fn herald(s: &BasisSubtractionMatrix, xi: &[Complex64]) -> Result<HeraldReport> {
    if xi.len() != s.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} squeezing parameters for a {}-mode subtraction matrix",
            xi.len(),
            s.dim()
        )));
    }
    if let Some(x) = xi.iter().find(|x| x.norm() > WEAK_SQUEEZING_LIMIT) {
        log::warn!("|xi| = {} exceeds the weak-squeezing range", x.norm());
    }
    let m = s.dim();
    let l = DMatrix::from_fn(m, m, |k, kp| xi[k].conj() * xi[kp] * s.get(k, kp));
    let eig = hermitian_eigen(&l)?;
    let lambdas: Vec<f64> = eig.values.iter().map(|v| v.max(0.0)).collect();
    let probability: f64 = lambdas.iter().sum();
    if probability <= 0.0 {
        return Err(Error::ZeroProbability);
    }
    let modes = eig
        .vectors
        .into_iter()
        .map(|v| {
            let mut w = v.map(|x| x.conj());
            fix_phase(&mut w);
            w
        })
        .collect();
    Ok(HeraldReport {
        p_f: lambdas[0] / probability,
        l,
        lambdas,
        modes,
        probability,
    })
}
