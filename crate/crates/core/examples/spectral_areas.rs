//! Area under each spectral density, optionally written as CSV plus a gnuplot script.
//!
//!     cargo run --example spectral_areas -- out/areas

use std::path::PathBuf;

use ddsim::cli::output::{emit_area_tables, emit_plot_script, PlotStyle};
use ddsim::QuadratureSettings;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = QuadratureSettings::default();
    let alpha = 0.1;
    let s_values: Vec<f64> = (1..=60).map(|k| 0.1 * k as f64).collect();
    let gamma_values: Vec<f64> = (0..=30)
        .map(|k| 10f64.powf(-2.0 + 0.1 * k as f64))
        .collect();

    println!("{:>5} {:>12} {:>12} {:>10}", "s", "sharp", "exp", "ratio");
    for row in ddsim::cli::output::power_area_rows(alpha, &[0.5, 1.0, 2.0, 3.0, 5.0], &q)? {
        println!(
            "{:>5} {:>12.6} {:>12.6} {:>10.2}",
            row[0], row[1], row[2], row[3]
        );
    }
    println!("\n{:>8} {:>12}", "gamma", "area");
    for row in ddsim::cli::output::structured_area_rows(alpha, &[0.01, 0.1, 1.0, 10.0], &q)? {
        println!("{:>8} {:>12.6}", row[0], row[1]);
    }

    if let Some(dir) = std::env::args().nth(1).map(PathBuf::from) {
        let manifest = emit_area_tables(&dir, alpha, &s_values, &gamma_values, &q)?;
        let script = emit_plot_script(&manifest, &dir, PlotStyle::SpectralAreas)?;
        println!("\nwrote {}", script.display());
    }
    Ok(())
}
