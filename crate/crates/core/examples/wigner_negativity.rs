//! Wigner function of the single-mode marginal after subtraction: value at
//! the origin, minimum and normalization for a few subtraction probabilities.

use num_complex::Complex64;
use photon_subtraction::wigner::{adequate_grid, marginal_wigner, negative_at_origin};

fn main() -> photon_subtraction::Result<()> {
    let xi = Complex64::new(0.3, 0.0);
    let grid = adequate_grid(xi)?;
    for p in [0.0, 0.3, 0.5, 0.7, 1.0] {
        let w = marginal_wigner(p, xi, &grid)?;
        println!(
            "p_s = {p:.1}: W(0) = {:+.5}  min W = {:+.5}  integral = {:.8}  negative at origin: {}",
            w.origin_value(),
            w.min(),
            w.integral(),
            negative_at_origin(p)
        );
    }
    let w = marginal_wigner(0.8, xi, &grid)?;
    let path = std::env::temp_dir().join("wigner_p08.csv");
    w.write_csv(std::fs::File::create(&path)?)?;
    println!("wrote {}", path.display());
    Ok(())
}
