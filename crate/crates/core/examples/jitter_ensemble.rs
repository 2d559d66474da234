//! Monte Carlo average over timing-jittered UDD sequences at one total time.
//!
//!     cargo run --release --example jitter_ensemble -- 5000

use ddsim::{
    run, BathConfig, JitterModel, QuadratureSettings, SequenceRule, SimulationPlan,
    SpectralDensity, TauGrid,
};

fn main() -> ddsim::Result<()> {
    let realizations = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(1000);
    println!("N = {realizations}, sigma = 5e-4, T = 10, tau = 1");
    println!(
        "{:>5} {:>2} {:>12} {:>12} {:>10} {:>12}",
        "s", "n", "1-r ideal", "1-r jitter", "stderr", "R"
    );
    for n in [3, 6] {
        for s in [0.5, 1.0, 5.0] {
            let plan = SimulationPlan {
                density: SpectralDensity::power_law_sharp(0.1, s)?,
                bath: BathConfig::from_temperature(10.0)?,
                rule: SequenceRule::Udd,
                pulses: n,
                jitter: JitterModel::new(5e-4)?,
                realizations,
                seed: 1,
                tau_grid: TauGrid::single(1.0)?,
                quadrature: QuadratureSettings::default(),
            };
            let p = run(&plan)?.points[0];
            println!(
                "{s:>5} {n:>2} {:>12.4e} {:>12.4e} {:>10.1e} {:>12.9}",
                p.one_minus_r_ideal, p.one_minus_r_pert_mean, p.r_pert_stderr, p.robustness
            );
        }
    }
    Ok(())
}
