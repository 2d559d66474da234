//! Damped-mode bath: narrow resonances hurt, overdamped ones barely matter.

use ddsim::{
    run, spectral_area, BathConfig, JitterModel, QuadratureSettings, SequenceRule, SimulationPlan,
    SpectralDensity, TauGrid,
};

fn main() -> ddsim::Result<()> {
    let q = QuadratureSettings::default();
    println!(
        "{:>6} {:>10} {:>12} {:>10} {:>12}",
        "gamma", "area", "1-r jitter", "stderr", "R"
    );
    for gamma in [0.01, 0.1, 1.0, 10.0] {
        let density = SpectralDensity::structured(0.1, gamma)?;
        let plan = SimulationPlan {
            density,
            bath: BathConfig::from_temperature(10.0)?,
            rule: SequenceRule::Udd,
            pulses: 6,
            jitter: JitterModel::new(5e-4)?,
            realizations: 500,
            seed: 7,
            tau_grid: TauGrid::single(0.5)?,
            quadrature: q,
        };
        let p = run(&plan)?.points[0];
        println!(
            "{gamma:>6} {:>10.4} {:>12.4e} {:>10.1e} {:>12.9}",
            spectral_area(&density, &q)?,
            p.one_minus_r_pert_mean,
            p.r_pert_stderr,
            p.robustness
        );
    }
    Ok(())
}
