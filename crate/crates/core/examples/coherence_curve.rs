//! Ideal decay 1 - r_n(tau) under UDD for the three bath models.

use ddsim::{
    chi_n, one_minus_signal, BathConfig, PulseSequence, QuadratureSettings, SpectralDensity,
};

fn main() -> ddsim::Result<()> {
    let q = QuadratureSettings::default();
    let bath = BathConfig::from_temperature(10.0)?;
    let seq = PulseSequence::udd(3);
    let baths = [
        ("sharp s=1", SpectralDensity::power_law_sharp(0.1, 1.0)?),
        ("exp s=1", SpectralDensity::power_law_exponential(0.1, 1.0)?),
        ("structured g=1", SpectralDensity::structured(0.1, 1.0)?),
    ];
    print!("{:>5}", "tau");
    for (name, _) in &baths {
        print!(" {name:>15}");
    }
    println!();
    for k in 1..=20 {
        let tau = 0.1 * k as f64;
        print!("{tau:>5.1}");
        for (_, j) in &baths {
            print!(
                " {:>15.4e}",
                one_minus_signal(chi_n(j, tau, &bath, &seq, &q)?)
            );
        }
        println!();
    }
    Ok(())
}
