//! Heralded single-photon modes for a narrow and a wide filter: how much of
//! the heralded photon sits in the dominant mode and what that mode is made of.

use photon_subtraction::kernels::beamsplitter_kernel_slow;
use photon_subtraction::modes::mode_grid;
use photon_subtraction::{herald, project_kernel, FilterModel, HGSqueezedEnsemble};

fn main() -> photon_subtraction::Result<()> {
    let tau = 1.0;
    let n_modes = 10;
    let ensemble = HGSqueezedEnsemble::equal(n_modes, 0.01, tau)?;
    for omega_f in [0.05, 0.5, 5.0] {
        let grid = mode_grid(tau, n_modes - 1, Some(omega_f), 8.0, 1024)?;
        let kernel = beamsplitter_kernel_slow(0.1, &FilterModel::gaussian(omega_f)?, &grid)?;
        let s = project_kernel(&kernel, &ensemble.state(&grid)?)?;
        let h = herald(&s, &ensemble.xi())?;
        let w: Vec<String> = h.modes[0].iter().map(|c| format!("{:+.3}", c.re)).collect();
        println!("omega_f = {omega_f}: p_f = {:.5}, P = {:.3e}", h.p_f, h.probability);
        println!("  dominant mode over u_0..u_{}: [{}]", n_modes - 1, w.join(", "));
    }
    Ok(())
}
