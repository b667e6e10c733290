//! Configuration-driven sweeps producing CSV tables.
//!
//! Sweep points are evaluated in parallel; rows always come out in sweep
//! order, so identical configurations give byte-identical files.

use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::comb::{heralded_temporal_mode, CombSpec};
use crate::config::{RunConfig, Scheme, SweepVariable};
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::kernels::{beamsplitter_kernel_slow, time_resolved_kernel, upconversion_kernel, KernelOperator, ParametricKernel};
use crate::modes::{gaussian_gate, gaussian_phasematch, mode_grid, DetectorModel, FilterModel};
use crate::schmidt::{
    analytic_bs_decomposition, analytic_upconversion_decomposition, decompose, AnalyticDecomposition,
    SchmidtDecomposition, DEFAULT_TRUNCATION,
};
use crate::squeezed::HGSqueezedEnsemble;
use crate::subtraction::{herald, overlaps, project_kernel, BasisSubtractionMatrix, SubtractionReport};
use crate::wigner::{adequate_grid, marginal_wigner, PhaseSpaceGrid};

/// Rows of numbers under a header; `None` cells are written empty.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl CsvTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Writes `# config-hash: <hash>`, the header and the rows.
    pub fn write(&self, hash: &str, mut out: impl Write) -> Result<()> {
        writeln!(out, "# config-hash: {hash}")?;
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| c.map(|v| v.to_string()).unwrap_or_default())
                .collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Output of a run: the main table plus companion tables written next to
/// it as `<stem>_<suffix>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub main: CsvTable,
    pub companions: Vec<(String, CsvTable)>,
}

impl RunOutput {
    fn single(main: CsvTable) -> Self {
        Self {
            main,
            companions: Vec::new(),
        }
    }

    /// Paths the tables are written to for a main output `path`.
    pub fn paths(&self, path: &Path) -> Vec<PathBuf> {
        let mut out = vec![path.to_path_buf()];
        for (suffix, _) in &self.companions {
            out.push(companion_path(path, suffix));
        }
        out
    }

    pub fn write_files(&self, config: &RunConfig, path: &Path) -> Result<Vec<PathBuf>> {
        let hash = config.hash();
        let paths = self.paths(path);
        let tables = std::iter::once(&self.main).chain(self.companions.iter().map(|(_, t)| t));
        for (table, p) in tables.zip(&paths) {
            let file = std::fs::File::create(p)?;
            let mut w = std::io::BufWriter::new(file);
            table.write(&hash, &mut w)?;
            w.flush()?;
        }
        Ok(paths)
    }
}

fn companion_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}_{suffix}.csv"))
}

fn max_modes(config: &RunConfig) -> usize {
    config.state.modes.iter().copied().max().unwrap_or(1)
}

/// Projection of the slow beamsplitter kernel with filter `ω_f` on `N` HG
/// modes, on a grid resolving both.
fn beamsplitter_basis_matrix(config: &RunConfig, n_modes: usize, omega_f: f64) -> Result<BasisSubtractionMatrix> {
    let tau = config.state.tau;
    let grid = mode_grid(tau, n_modes - 1, Some(omega_f), config.grid.extent_factor, config.grid.n_points)?;
    let state = HGSqueezedEnsemble::equal(n_modes, config.state.photons, tau)?.state(&grid)?;
    let kernel = beamsplitter_kernel_slow(config.beamsplitter.reflectivity, &FilterModel::gaussian(omega_f)?, &grid)?;
    project_kernel(&kernel, &state)
}

fn omega_f_sweep(config: &RunConfig) -> Result<Vec<f64>> {
    config.require_scheme(Scheme::Beamsplitter)?;
    if config.sweep.variable != SweepVariable::OmegaFTau {
        return Err(Error::Config("`sweep.variable`: this run sweeps omega_f_tau".into()));
    }
    Ok(config.sweep.values())
}

fn sweep_jobs(config: &RunConfig, xs: &[f64]) -> Vec<(f64, usize)> {
    xs.iter()
        .flat_map(|&x| config.state.modes.iter().map(move |&n| (x, n)))
        .collect()
}

/// Purity and normalized subtraction probability against `ω_f τ` for each
/// mode count, slow detector.
pub fn run_fig3(config: &RunConfig) -> Result<RunOutput> {
    let xs = omega_f_sweep(config)?;
    let jobs = sweep_jobs(config, &xs);
    let tau = config.state.tau;
    let rows = jobs
        .par_iter()
        .map(|&(x, n_modes)| {
            let s = beamsplitter_basis_matrix(config, n_modes, x / tau)?;
            let n = vec![config.state.photons; n_modes];
            let report = SubtractionReport::from_basis(&s, &n, None)?;
            Ok(vec![
                Some(x),
                Some(n_modes as f64),
                Some(report.purity),
                Some(report.normalized_probability),
                Some(1.0 / n_modes as f64),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = CsvTable::new(
        ["omega_f_tau", "N", "purity", "P_normalized", "purity_no_filter"]
            .map(String::from)
            .to_vec(),
    );
    table.rows = rows;
    Ok(RunOutput::single(table))
}

/// First-mode subtraction probability, heralding probability and heralded
/// mode coefficients against `ω_f τ`.
///
/// Coefficients `w_k` are the real parts of the dominant heralded mode over
/// `u_k`; for the real Gaussian filters used here they are real.
pub fn run_fig4_fig5(config: &RunConfig) -> Result<RunOutput> {
    let xs = omega_f_sweep(config)?;
    let jobs = sweep_jobs(config, &xs);
    let tau = config.state.tau;
    let width = max_modes(config);
    let rows = jobs
        .par_iter()
        .map(|&(x, n_modes)| {
            let s = beamsplitter_basis_matrix(config, n_modes, x / tau)?;
            let ensemble = HGSqueezedEnsemble::equal(n_modes, config.state.photons, tau)?;
            let report = SubtractionReport::from_basis(&s, ensemble.photons(), None)?;
            let h = herald(&s, &ensemble.xi())?;
            let mut row = vec![Some(x), Some(n_modes as f64), Some(report.p_s[0]), Some(h.p_f)];
            row.extend((0..width).map(|k| h.modes[0].get(k).map(|w| w.re)));
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut columns: Vec<String> = ["omega_f_tau", "N", "p_s", "p_f"].map(String::from).to_vec();
    columns.extend((0..width).map(|k| format!("w_{k}")));
    let mut table = CsvTable::new(columns);
    table.rows = rows;
    Ok(RunOutput::single(table))
}

/// Grid for the up-conversion kernel and a basis of `max_order + 1` modes.
fn upconversion_grid(config: &RunConfig, max_order: usize) -> Result<FrequencyGrid> {
    let uc = &config.upconversion;
    let mut finest = uc.omega_ph.min(1.0 / uc.tau_g).min(1.0 / config.state.tau);
    if let Some(w) = uc.omega_f {
        finest = finest.min(w);
    }
    let tau = config.state.tau.min(uc.tau_g);
    mode_grid(tau, max_order, Some(finest), config.grid.extent_factor, 64)
}

fn upconversion_kernel_for(config: &RunConfig, grid: &FrequencyGrid) -> Result<KernelOperator> {
    let uc = &config.upconversion;
    let gate = gaussian_gate(uc.tau_g, grid)?;
    let phi = gaussian_phasematch(uc.omega_ph, grid)?;
    let filter = uc.omega_f.map(FilterModel::gaussian).transpose()?;
    upconversion_kernel(&gate, &phi, uc.coupling, filter.as_ref(), grid)
}

fn upconversion_analytic(config: &RunConfig) -> Result<AnalyticDecomposition> {
    let uc = &config.upconversion;
    analytic_upconversion_decomposition(uc.tau_g, uc.omega_ph, uc.omega_f, uc.coupling)
}

/// Up-conversion: purity, normalized probability, first-mode and heralding
/// probabilities against the number of squeezed modes, with companion
/// tables of subtraction-mode profiles (`modes`) and efficiencies
/// (`efficiencies`).
pub fn run_fig6_to_fig8(config: &RunConfig) -> Result<RunOutput> {
    config.require_scheme(Scheme::Upconversion)?;
    if config.sweep.variable != SweepVariable::NModes {
        return Err(Error::Config("`sweep.variable`: this run sweeps n_modes".into()));
    }
    let ns: Vec<usize> = config.sweep.values().into_iter().map(|v| v as usize).collect();
    let n_max = ns.iter().copied().max().unwrap_or(1);
    let grid = upconversion_grid(config, n_max - 1)?;
    let kernel = upconversion_kernel_for(config, &grid)?;
    let decomposition = decompose(&kernel, DEFAULT_TRUNCATION)?;
    let k = decomposition.schmidt_number()?;
    let tau = config.state.tau;
    let full = HGSqueezedEnsemble::equal(n_max, config.state.photons, tau)?;
    let state = full.state(&grid)?;
    let s_full = project_kernel(&kernel, &state)?;
    let c = overlaps(&decomposition, &state)?;

    let rows = ns
        .par_iter()
        .map(|&n_modes| {
            let s = leading_block(&s_full, n_modes)?;
            let ensemble = HGSqueezedEnsemble::equal(n_modes, config.state.photons, tau)?;
            let report = SubtractionReport::from_basis(&s, ensemble.photons(), Some(k))?;
            let h = herald(&s, &ensemble.xi())?;
            Ok(vec![
                Some(n_modes as f64),
                Some(report.purity),
                Some(report.normalized_probability),
                Some(report.p_s[0]),
                Some(h.p_f),
                Some(k),
                Some(1.0 / k),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut main = CsvTable::new(
        ["N", "purity", "P_normalized", "p_s", "p_f", "schmidt_number", "purity_limit"]
            .map(String::from)
            .to_vec(),
    );
    main.rows = rows;

    let analytic = upconversion_analytic(config)?;
    let profiles = config.upconversion.profile_modes.min(decomposition.len());
    let mut modes = CsvTable::new(
        std::iter::once("omega".to_string())
            .chain((0..profiles).map(|j| format!("v_{j}")))
            .chain(std::iter::once("u_0".to_string()))
            .collect(),
    );
    for (i, w) in grid.points().enumerate() {
        let mut row = vec![Some(w)];
        row.extend((0..profiles).map(|j| Some(decomposition.modes()[j].values()[i].re)));
        row.push(Some(state.basis()[0].values()[i].re));
        modes.rows.push(row);
    }

    let mut efficiencies = CsvTable::new(
        ["j", "sigma", "sigma_fraction", "sigma_analytic", "c_j0_sq"]
            .map(String::from)
            .to_vec(),
    );
    let total = decomposition.total_efficiency();
    for (j, sigma) in decomposition.efficiencies().iter().enumerate().take(profiles.max(1) * 4) {
        efficiencies.rows.push(vec![
            Some(j as f64),
            Some(*sigma),
            Some(sigma / total),
            Some(analytic.efficiency(j)),
            Some(c[(j, 0)].norm_sqr()),
        ]);
    }

    Ok(RunOutput {
        main,
        companions: vec![("modes".into(), modes), ("efficiencies".into(), efficiencies)],
    })
}

/// Temporal mode of the heralded photon in a pulse train.
pub fn run_fig9(config: &RunConfig) -> Result<RunOutput> {
    config.require_scheme(Scheme::Comb)?;
    let c = &config.comb;
    let spec = CombSpec::new(c.period, c.cavity_decay, c.pulse_tau)?;
    let coeffs: Vec<Complex64> = c.pulse_coeffs.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    let profile = heralded_temporal_mode(&spec, &coeffs, c.t_click, c.samples_per_period)?;
    let mut table = CsvTable::new(["t", "re", "im"].map(String::from).to_vec());
    table.rows = profile
        .times
        .iter()
        .zip(&profile.amplitudes)
        .map(|(t, a)| vec![Some(*t), Some(a.re), Some(a.im)])
        .collect();
    Ok(RunOutput::single(table))
}

/// Decomposes the configured kernel. Writes efficiencies (with the
/// closed-form values for the Gaussian models) and a `modes` companion table.
///
/// Beamsplitter: Gaussian filter `ω_f`, slow detector or jitter `τ_d`.
/// Up-conversion: Gaussian gate and phase matching, optional filter.
pub fn run_decompose(config: &RunConfig) -> Result<RunOutput> {
    let (grid, kernel, analytic): (FrequencyGrid, KernelOperator, Option<AnalyticDecomposition>) =
        match config.scheme {
            Scheme::Beamsplitter => {
                let bs = &config.beamsplitter;
                let filter = FilterModel::gaussian(bs.omega_f)?;
                match bs.tau_d {
                    Some(tau_d) => {
                        let a = analytic_bs_decomposition(bs.omega_f, tau_d, bs.reflectivity)?;
                        let orders = config.upconversion.profile_modes.max(1) - 1;
                        let grid = bs_jitter_grid(bs.omega_f, tau_d, orders, config.grid.extent_factor)?;
                        let r = ParametricKernel::beamsplitter(bs.reflectivity, grid)?;
                        let k = time_resolved_kernel(&r, &filter, &DetectorModel::jitter(tau_d)?, 0.0)?;
                        (grid, k, Some(a))
                    }
                    None => {
                        let grid = FrequencyGrid::symmetric(
                            config.grid.extent_factor * bs.omega_f,
                            config.grid.n_points,
                        )?;
                        (grid, beamsplitter_kernel_slow(bs.reflectivity, &filter, &grid)?, None)
                    }
                }
            }
            Scheme::Upconversion => {
                let orders = config.upconversion.profile_modes.max(1) - 1;
                let grid = upconversion_grid(config, orders)?;
                let k = upconversion_kernel_for(config, &grid)?;
                (grid, k, Some(upconversion_analytic(config)?))
            }
            Scheme::Comb => {
                return Err(Error::Config("`scheme`: decompose needs beamsplitter or upconversion".into()))
            }
        };
    let d = decompose(&kernel, DEFAULT_TRUNCATION)?;
    Ok(decomposition_tables(&d, &grid, analytic.as_ref(), config.upconversion.profile_modes))
}

/// Grid for the jittered beamsplitter kernel, whose modes are Hermite–Gaussian
/// with width `ω_f⁻¹ (1+τ_d²ω_f²)^{1/4}` and whose kernel varies on the
/// scale `1/τ_d` across the diagonal.
pub fn bs_jitter_grid(omega_f: f64, tau_d: f64, max_order: usize, extent_factor: f64) -> Result<FrequencyGrid> {
    let a = analytic_bs_decomposition(omega_f, tau_d, 1.0)?;
    let half = (extent_factor * omega_f).max(crate::modes::required_half_extent(max_order, a.mode_width) + 2.0 / a.mode_width);
    let h = (0.05 * omega_f).min(0.4 / tau_d);
    let mut n = (2.0 * half / h).ceil() as usize + 1;
    n = n.max(crate::grid::MIN_GRID_POINTS);
    if n.is_multiple_of(2) {
        n += 1;
    }
    FrequencyGrid::symmetric(half, n)
}

fn decomposition_tables(
    d: &SchmidtDecomposition,
    grid: &FrequencyGrid,
    analytic: Option<&AnalyticDecomposition>,
    profiles: usize,
) -> RunOutput {
    let mut eff = CsvTable::new(["j", "sigma", "sigma_analytic"].map(String::from).to_vec());
    let shown = d.len().min(profiles.max(1) * 4);
    for (j, s) in d.efficiencies().iter().enumerate().take(shown) {
        eff.rows.push(vec![Some(j as f64), Some(*s), analytic.map(|a| a.efficiency(j))]);
    }
    let profiles = profiles.min(d.len());
    let mut modes = CsvTable::new(
        std::iter::once("omega".to_string())
            .chain((0..profiles).map(|j| format!("v_{j}")))
            .collect(),
    );
    for (i, w) in grid.points().enumerate() {
        let mut row = vec![Some(w)];
        row.extend((0..profiles).map(|j| Some(d.modes()[j].values()[i].re)));
        modes.rows.push(row);
    }
    RunOutput {
        main: eff,
        companions: vec![("modes".into(), modes)],
    }
}

/// Wigner function of the single-mode marginal.
pub fn run_wigner(config: &RunConfig) -> Result<RunOutput> {
    let w = &config.wigner;
    let grid = PhaseSpaceGrid::new(w.half_extent, w.samples)?;
    let xi = Complex64::new(w.xi_re, w.xi_im);
    let needed = adequate_grid(xi)?;
    if grid.half_extent() < needed.half_extent() || grid.spacing() > needed.spacing() {
        log::warn!(
            "wigner grid (extent {}, spacing {}) is coarser than the extent {} / spacing {} needed for |xi| = {}",
            grid.half_extent(),
            grid.spacing(),
            needed.half_extent(),
            needed.spacing(),
            xi.norm()
        );
    }
    let field = marginal_wigner(w.p, xi, &grid)?;
    let n = grid.samples();
    let mut table = CsvTable::new(["re_alpha", "im_alpha", "w"].map(String::from).to_vec());
    for iy in 0..n {
        for ix in 0..n {
            table
                .rows
                .push(vec![Some(grid.coordinate(ix)), Some(grid.coordinate(iy)), Some(field.value(ix, iy))]);
        }
    }
    Ok(RunOutput::single(table))
}

/// Leading `n × n` block, i.e. the matrix for the first `n` basis modes.
pub fn leading_block(s: &BasisSubtractionMatrix, n: usize) -> Result<BasisSubtractionMatrix> {
    let block: DMatrix<Complex64> = s.matrix().view((0, 0), (n, n)).into_owned();
    BasisSubtractionMatrix::new(block, s.scale())
}
