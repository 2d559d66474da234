//! Low-frequency series for the sharp-cutoff exponent against the full integral.

use ddsim::{chi_n, chi_n_series, BathConfig, PulseSequence, QuadratureSettings, SpectralDensity};

fn main() -> ddsim::Result<()> {
    let q = QuadratureSettings::new(1e-11, 1e-30, 2000)?;
    let bath = BathConfig::from_temperature(10.0)?;
    for s in [3.0, 5.0] {
        let j = SpectralDensity::power_law_sharp(0.1, s)?;
        for n in [3, 6] {
            let exact = chi_n(&j, 1.0, &bath, &PulseSequence::udd(n), &q)?;
            print!("s={s} n={n}: exact {exact:.8e}");
            for terms in 1..=3 {
                let approx = chi_n_series(&j, 1.0, &bath, n, terms, &q)?;
                print!("  [{terms}] {:+.2e}", approx / exact - 1.0);
            }
            println!();
        }
    }
    Ok(())
}
