//! Brute-force Fock-space check of the closed-form figures of merit on a few
//! random weakly squeezed three-mode problems.

use photon_subtraction::fock::{conditioned_density, oracle_metrics, random_instance, weak_squeezed_vector, DEFAULT_CUTOFF};
use photon_subtraction::subtraction::{multimode_purity, single_mode_probability, total_probability};
use photon_subtraction::{herald, BasisSubtractionMatrix};

fn main() -> photon_subtraction::Result<()> {
    println!("{:>4} {:>22} {:>22} {:>22}", "seed", "purity (formula/oracle)", "p_s", "p_f");
    for seed in 0..5 {
        let inst = random_instance(seed, 3, 0.1)?;
        let state = weak_squeezed_vector(&inst.xi, DEFAULT_CUTOFF)?;
        let (rho, _) = conditioned_density(&state, &inst.sigma, &inst.c)?;
        let oracle = oracle_metrics(&rho, 0)?;
        let n: Vec<f64> = (0..3).map(|k| state.photon_number(k)).collect();
        let s = BasisSubtractionMatrix::from_modes(&inst.sigma, &inst.c, 1.0)?;
        println!(
            "{seed:>4} {:>10.7}/{:<11.7} {:>10.7}/{:<11.7} {:>10.7}/{:<11.7}  P = {:.3e}",
            multimode_purity(&s, &n)?,
            oracle.purity,
            single_mode_probability(&s, &n, 0)?,
            oracle.p_s,
            herald(&s, &inst.xi)?.p_f,
            oracle.p_f,
            total_probability(&s, &n)?
        );
    }
    Ok(())
}
