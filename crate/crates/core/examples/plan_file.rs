//! Expand a plan document, run it with a reduced ensemble and write the results.
//!
//!     cargo run --release --example plan_file -- out/demo

use std::path::PathBuf;

use ddsim::cli::output::{emit_csv, emit_plot_script, PlotStyle};
use ddsim::cli::plan::PlanDocument;
use ddsim::sweep;

const PLAN: &str = "
# exponential cutoff, three exponents, two pulse counts
spectral.kind = power_exp
sweep.s_values = 0.5, 1, 5
sequence.n = 3, 6
mc.seed = 42
sweep.tau_stop = 1.0
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| "out/plan_file".into());
    let mut doc = PlanDocument::parse(PLAN)?;
    doc.set("mc.realizations", "200")?;
    let set = doc.expand()?;
    println!("{} plans", set.plans.len());

    let mut done = Vec::new();
    for (plan, curve) in set.plans.iter().zip(sweep(&set.plans)?) {
        let curve = curve?;
        let last = curve.points.last().unwrap();
        println!(
            "n={} s={}: 1-r at tau={:.1} is {:.3e}",
            plan.pulses,
            plan.density.exponent().unwrap(),
            last.tau,
            last.one_minus_r_pert_mean
        );
        done.push((plan.clone(), curve));
    }
    let manifest = emit_csv(&done, &out)?;
    let script = emit_plot_script(&manifest, &out, PlotStyle::CoherencePanels)?;
    println!(
        "wrote {} files and {}",
        manifest.entries.len(),
        script.display()
    );
    Ok(())
}
