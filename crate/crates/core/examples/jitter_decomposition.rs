//! Subtraction modes of a filtered beamsplitter seen by a detector with
//! Gaussian timing jitter, compared with the closed-form decomposition.

use photon_subtraction::experiments::bs_jitter_grid;
use photon_subtraction::kernels::time_resolved_kernel;
use photon_subtraction::schmidt::{analytic_bs_decomposition, DEFAULT_TRUNCATION};
use photon_subtraction::{decompose, inner_product, DetectorModel, FilterModel, ParametricKernel};

fn main() -> photon_subtraction::Result<()> {
    let omega_f = 1.0;
    let r = 0.1;
    for tau_d in [0.1, 1.0, 10.0] {
        let grid = bs_jitter_grid(omega_f, tau_d, 4, 8.0)?;
        let bs = ParametricKernel::beamsplitter(r, grid)?;
        let kernel = time_resolved_kernel(&bs, &FilterModel::gaussian(omega_f)?, &DetectorModel::jitter(tau_d)?, 0.0)?;
        let d = decompose(&kernel, DEFAULT_TRUNCATION)?;
        let a = analytic_bs_decomposition(omega_f, tau_d, r)?;
        println!(
            "tau_d = {tau_d}: K = {:.5} (closed form {:.5}), {} modes, trace {:.3e}",
            d.schmidt_number()?,
            a.schmidt_number(),
            d.len(),
            kernel.trace()
        );
        for j in 0..d.len().min(4) {
            let overlap = inner_product(&d.modes()[j], &a.mode(j, &grid)?)?.norm_sqr();
            println!(
                "  j={j} sigma={:.4e} closed form {:.4e} |<v_j, HG_j>|^2 = {overlap:.8}",
                d.efficiencies()[j],
                a.efficiency(j)
            );
        }
    }
    Ok(())
}
