//! Pulse-train subtraction: per-pulse photon numbers from a cavity-shaped
//! squeezing spectrum and the temporal mode of the heralded photon.

use num_complex::Complex64;
use photon_subtraction::comb::{cavity_squeezing_density, heralded_temporal_mode, per_pulse_photon_number};
use photon_subtraction::CombSpec;

fn main() -> photon_subtraction::Result<()> {
    for gamma in [0.02, 0.2, 2.0] {
        let comb = CombSpec::new(10.0, gamma, 1.0)?;
        let n = per_pulse_photon_number(cavity_squeezing_density(0.01, &comb))?;
        let profile = heralded_temporal_mode(&comb, &[Complex64::new(1.0, 0.0)], 0.0, 32)?;
        let central: Vec<String> = profile
            .pulse_weights
            .iter()
            .filter(|(l, _)| l.abs() <= 2)
            .map(|(l, w)| format!("{l}:{w:.4}"))
            .collect();
        println!(
            "gamma_c T0 = {:.2}: n per pulse = {n:.4e}, {} pulses, weights near the click [{}]",
            comb.decay_per_period(),
            profile.pulse_weights.len(),
            central.join(" ")
        );
    }
    Ok(())
}
