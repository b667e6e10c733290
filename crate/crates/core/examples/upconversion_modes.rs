//! Gated up-conversion with K = 1.5: subtraction modes, efficiencies and the
//! purity as more squeezed modes are added.

use photon_subtraction::experiments::run_fig6_to_fig8;
use photon_subtraction::RunConfig;

fn main() -> photon_subtraction::Result<()> {
    let mut config = RunConfig::upconversion_default();
    config.sweep.points = 10;
    let out = run_fig6_to_fig8(&config)?;
    let column = |name: &str| out.main.column(name).unwrap_or_default();
    let (n, purity, p_s) = (column("N"), column("purity"), column("p_s"));
    let k = column("schmidt_number")[0].unwrap_or(f64::NAN);
    println!("kernel Schmidt number K = {k:.4}, large-N purity limit 1/K = {:.4}", 1.0 / k);
    for i in 0..n.len() {
        println!(
            "N = {:>4.0}  purity = {:.5}  p_s = {:.5}",
            n[i].unwrap_or(f64::NAN),
            purity[i].unwrap_or(f64::NAN),
            p_s[i].unwrap_or(f64::NAN)
        );
    }
    for (suffix, table) in &out.companions {
        if suffix == "efficiencies" {
            let sigma = table.column("sigma_fraction").unwrap_or_default();
            let shown: Vec<String> = sigma.iter().take(5).map(|v| format!("{:.4}", v.unwrap_or(f64::NAN))).collect();
            println!("leading efficiency fractions: {}", shown.join(", "));
        }
    }
    Ok(())
}
