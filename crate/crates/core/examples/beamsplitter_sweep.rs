//! Purity, heralding probability and normalized rate of beamsplitter
//! subtraction from N equally squeezed Hermite-Gaussian modes, as a function
//! of the Gaussian filter bandwidth.

use photon_subtraction::kernels::beamsplitter_kernel_slow;
use photon_subtraction::modes::mode_grid;
use photon_subtraction::{herald, project_kernel, FilterModel, HGSqueezedEnsemble, SubtractionReport};

fn main() -> photon_subtraction::Result<()> {
    let tau = 1.0;
    let photons = 0.01;
    let r = 0.1;
    println!("{:>8} {:>4} {:>10} {:>10} {:>10}", "w_f*tau", "N", "purity", "p_f", "P/(n r^2)");
    for n_modes in [10, 20, 40] {
        for omega_f_tau in [0.01, 0.1, 0.5, 1.0, 3.0, 30.0] {
            let omega_f = omega_f_tau / tau;
            let grid = mode_grid(tau, n_modes - 1, Some(omega_f), 8.0, 1024)?;
            let ensemble = HGSqueezedEnsemble::equal(n_modes, photons, tau)?;
            let kernel = beamsplitter_kernel_slow(r, &FilterModel::gaussian(omega_f)?, &grid)?;
            let s = project_kernel(&kernel, &ensemble.state(&grid)?)?;
            let report = SubtractionReport::from_basis(&s, ensemble.photons(), None)?;
            let h = herald(&s, &ensemble.xi())?;
            println!(
                "{omega_f_tau:>8} {n_modes:>4} {:>10.5} {:>10.5} {:>10.5}",
                report.purity, h.p_f, report.normalized_probability
            );
        }
    }
    Ok(())
}
