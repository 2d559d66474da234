//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ddsim::cli::{run_command, RunArgs};
use ddsim::{
    chi_free, chi_n, perturb, run, spectral_area, BathConfig, JitterModel, PulseSequence,
    QuadratureSettings, RngStream, SequenceRule, SignalPoint, SimulationPlan, SpectralDensity,
    SpectralKind, TauGrid,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("zero-temperature analytic oracle", c1_zero_temperature),
        ("spectral areas", c2_spectral_areas),
        ("filter order", c3_filter_order),
        ("n=0 reduction", c4_reduction),
        ("Riemann oracle", c5_riemann),
        ("sharp-cutoff thresholds", c6_thresholds),
        ("cutoff reversal", c7_reversal),
        ("structured bath", c8_structured),
        ("jitter statistics", c9_jitter),
        ("determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS [{name}] ({secs:.1}s) {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{name}] ({secs:.1}s) {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn hot() -> BathConfig {
    BathConfig::from_temperature(10.0).unwrap()
}

fn c1_zero_temperature() -> Outcome {
    let d = SpectralDensity::power_law_exponential(0.1, 1.0).unwrap();
    let bath = BathConfig::zero_temperature();
    let q = QuadratureSettings::default();
    let mut worst: f64 = 0.0;
    for t in [0.5, 1.0, 2.0, 5.0] {
        let got = chi_free(&d, t, &bath, &q).map_err(|e| e.to_string())?;
        worst = worst.max(rel(got, 0.05 * (1.0 + t * t).ln()));
    }
    ensure(worst < 1e-8, format!("max rel err {worst:.2e} (tol 1e-8)"))
}

fn c2_spectral_areas() -> Outcome {
    use statrs::function::gamma::gamma;
    let alpha = 0.1;
    let q = QuadratureSettings::default();
    let mut worst: f64 = 0.0;
    for s in [0.5, 1.0, 3.0, 5.0] {
        let sharp = spectral_area(&SpectralDensity::power_law_sharp(alpha, s).unwrap(), &q)
            .map_err(|e| e.to_string())?;
        let exp = spectral_area(
            &SpectralDensity::power_law_exponential(alpha, s).unwrap(),
            &q,
        )
        .map_err(|e| e.to_string())?;
        worst = worst
            .max(rel(sharp, 2.0 * alpha / (s + 1.0)))
            .max(rel(exp, 2.0 * alpha * gamma(s + 1.0)));
    }
    let ratios: Vec<f64> = (1..=12)
        .map(|k| {
            let s = 0.5 * k as f64;
            let a = spectral_area(&SpectralDensity::power_law_sharp(alpha, s).unwrap(), &q);
            let b = spectral_area(
                &SpectralDensity::power_law_exponential(alpha, s).unwrap(),
                &q,
            );
            b.unwrap() / a.unwrap()
        })
        .collect();
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let r5 = ratios[9];
    ensure(
        worst < 1e-6 && increasing && r5 > 100.0,
        format!("max rel err {worst:.2e} (tol 1e-6); exp/sharp ratio increasing in s: {increasing}; ratio at s=5: {r5:.1}"),
    )
}

/// Least-squares slope of log|y|^2 against log x on 21 log-spaced points in [1e-3, 1e-2].
fn filter_slope(seq: &PulseSequence) -> f64 {
    let pts: Vec<(f64, f64)> = (0..=20)
        .map(|i| {
            let x = 10f64.powf(-3.0 + i as f64 / 20.0);
            (x.ln(), seq.filter(x).magnitude_sq().ln())
        })
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn c3_filter_order() -> Outcome {
    let mut bad = Vec::new();
    let mut udd = Vec::new();
    let mut cpmg = Vec::new();
    for n in 2..=9 {
        let su = filter_slope(&PulseSequence::udd(n));
        let sc = filter_slope(&PulseSequence::cpmg(n).unwrap());
        if (su - (2 * n + 2) as f64).abs() > 0.05 {
            bad.push(format!("udd n={n} slope {su:.3}"));
        }
        if (sc - 4.0).abs() > 0.05 {
            bad.push(format!("cpmg n={n} slope {sc:.3}"));
        }
        udd.push(format!("{su:.2}"));
        cpmg.push(format!("{sc:.2}"));
    }
    let detail = format!(
        "udd slopes n=2..9 [{}]; cpmg slopes n=2..9 [{}]",
        udd.join(", "),
        cpmg.join(", ")
    );
    if bad.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; outside tolerance: {}", bad.join(", ")))
    }
}

fn random_density(rng: &mut ChaCha8Rng, kind: usize) -> SpectralDensity {
    let alpha = rng.random_range(0.01..0.5);
    match kind % 3 {
        0 => SpectralDensity::power_law_sharp(alpha, rng.random_range(0.5..5.0)).unwrap(),
        1 => SpectralDensity::power_law_exponential(alpha, rng.random_range(0.5..5.0)).unwrap(),
        _ => SpectralDensity::structured(alpha, 10f64.powf(rng.random_range(-2.0..1.0))).unwrap(),
    }
}

fn random_bath(rng: &mut ChaCha8Rng) -> BathConfig {
    if rng.random_bool(0.25) {
        BathConfig::zero_temperature()
    } else {
        BathConfig::from_temperature(rng.random_range(0.1..20.0)).unwrap()
    }
}

fn c4_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let q = QuadratureSettings::default();
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let d = random_density(&mut rng, i);
        let bath = random_bath(&mut rng);
        let tau = rng.random_range(0.1..5.0);
        let seq = if i % 2 == 0 {
            PulseSequence::udd(0)
        } else {
            PulseSequence::free()
        };
        let a = chi_n(&d, tau, &bath, &seq, &q).map_err(|e| e.to_string())?;
        let b = chi_free(&d, tau, &bath, &q).map_err(|e| e.to_string())?;
        worst = worst.max(rel(a, b));
    }
    ensure(
        worst < 1e-10,
        format!("10 draws, max rel diff {worst:.2e} (tol 1e-10)"),
    )
}

/// Composite midpoint rule with 10^6 uniform nodes. Uses its own spectral
/// formulas and thermal factor; the filter comes from the library.
fn midpoint_oracle(d: &SpectralDensity, tau: f64, bath: &BathConfig, seq: &PulseSequence) -> f64 {
    const NODES: usize = 1_000_000;
    let alpha = d.alpha();
    let coth = |w: f64| match bath.inv_temperature() {
        None => 1.0,
        Some(beta) => 1.0 / (0.5 * beta * w).tanh(),
    };
    let body = |w: f64, j: f64| j / (4.0 * w * w) * seq.filter(w * tau).magnitude_sq() * coth(w);
    match d.kind() {
        SpectralKind::PowerLawSharp => {
            let s = d.exponent().unwrap();
            let h = 1.0 / NODES as f64;
            (0..NODES)
                .map(|i| {
                    let w = (i as f64 + 0.5) * h;
                    body(w, 2.0 * alpha * w.powf(s))
                })
                .sum::<f64>()
                * h
        }
        SpectralKind::PowerLawExponential => {
            let s = d.exponent().unwrap();
            let h = 120.0 / NODES as f64;
            (0..NODES)
                .map(|i| {
                    let w = (i as f64 + 0.5) * h;
                    body(w, 2.0 * alpha * w.powf(s) * (-w).exp())
                })
                .sum::<f64>()
                * h
        }
        SpectralKind::StructuredEffective => {
            let g = d.damping().unwrap();
            let h = 1.0 / NODES as f64;
            (0..NODES)
                .map(|i| {
                    let u = (i as f64 + 0.5) * h;
                    let w = u / (1.0 - u);
                    let j = 2.0 * alpha * w / ((1.0 - w * w).powi(2) + 4.0 * w * w * g * g);
                    body(w, j) / ((1.0 - u) * (1.0 - u))
                })
                .sum::<f64>()
                * h
        }
    }
}

fn c5_riemann() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    // Tight absolute tolerance so tiny exponents are still resolved relatively.
    let q = QuadratureSettings::new(1e-11, 1e-30, 2000).unwrap();
    let mut worst: f64 = 0.0;
    let mut worst_case = String::new();
    let mut min_gamma = f64::INFINITY;
    for i in 0..20 {
        let mut d = random_density(&mut rng, i);
        if i == 2 {
            d = SpectralDensity::structured(d.alpha(), 0.01).unwrap();
        }
        let bath = random_bath(&mut rng);
        let n = rng.random_range(1..=9);
        let seq = if rng.random_bool(0.5) {
            PulseSequence::udd(n)
        } else {
            PulseSequence::cpmg(n).unwrap()
        };
        let tau = rng.random_range(0.5..5.0);
        if let Some(g) = d.damping() {
            min_gamma = min_gamma.min(g);
        }
        let got = chi_n(&d, tau, &bath, &seq, &q).map_err(|e| e.to_string())?;
        let want = midpoint_oracle(&d, tau, &bath, &seq);
        let r = rel(got, want);
        if r > worst {
            worst = r;
            worst_case = format!(
                "{} {:?}/{:?} n={n} tau={tau:.3}",
                d.kind().name(),
                d.exponent(),
                d.damping(),
            );
        }
    }
    ensure(
        worst < 1e-6,
        format!(
            "20 draws, min gamma {min_gamma}, max rel diff {worst:.2e} at {worst_case} (tol 1e-6)"
        ),
    )
}

const SIGMA: f64 = 5e-4;
const REALIZATIONS: u64 = 5000;

fn mc_point(density: SpectralDensity, pulses: usize, tau: f64) -> Result<SignalPoint, String> {
    let plan = SimulationPlan {
        density,
        bath: hot(),
        rule: SequenceRule::Udd,
        pulses,
        jitter: JitterModel::new(SIGMA).unwrap(),
        realizations: REALIZATIONS,
        seed: 1,
        tau_grid: TauGrid::single(tau).unwrap(),
        quadrature: QuadratureSettings::default(),
    };
    run(&plan).map(|c| c.points[0]).map_err(|e| e.to_string())
}

fn fmt_point(label: &str, p: &SignalPoint) -> String {
    format!(
        "{label}: 1-r={:.3e}+-{:.1e}",
        p.one_minus_r_pert_mean, p.r_pert_stderr
    )
}

/// `a > b` by more than three combined standard errors.
fn above(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 - b.0 > 3.0 * (a.1 * a.1 + b.1 * b.1).sqrt()
}

fn deficit(p: &SignalPoint) -> (f64, f64) {
    (p.one_minus_r_pert_mean, p.r_pert_stderr)
}

fn c6_thresholds() -> Outcome {
    let sharp = |s| SpectralDensity::power_law_sharp(0.1, s).unwrap();
    let mut lines = Vec::new();
    let mut ok = true;
    for s in [0.5, 1.0, 5.0] {
        let p = mc_point(sharp(s), 3, 1.0)?;
        let m = p.one_minus_r_pert_mean;
        let se = p.r_pert_stderr;
        ok &= m + 3.0 * se < 1e-4;
        if s == 0.5 {
            ok &= m - 3.0 * se > 1e-5;
        }
        lines.push(fmt_point(&format!("n=3 s={s}"), &p));
    }
    for s in [0.5, 1.0, 5.0] {
        let p = mc_point(sharp(s), 6, 1.0)?;
        let m = p.one_minus_r_pert_mean;
        let se = p.r_pert_stderr;
        ok &= if s == 5.0 {
            m + 3.0 * se < 1e-5
        } else {
            m - 3.0 * se > 1e-5
        };
        lines.push(fmt_point(&format!("n=6 s={s}"), &p));
    }
    ensure(ok, lines.join("; "))
}

fn c7_reversal() -> Outcome {
    let exp = |s| SpectralDensity::power_law_exponential(0.1, s).unwrap();
    let p05 = mc_point(exp(0.5), 6, 1.0)?;
    let p1 = mc_point(exp(1.0), 6, 1.0)?;
    let p5 = mc_point(exp(5.0), 6, 1.0)?;
    let high = above(deficit(&p5), deficit(&p1));
    let mid = above(deficit(&p1), deficit(&p05));
    ensure(
        high && mid,
        format!(
            "{}; {}; {}; s=5 > s=1: {high}; s=1 > s=0.5: {mid}",
            fmt_point("s=0.5", &p05),
            fmt_point("s=1", &p1),
            fmt_point("s=5", &p5)
        ),
    )
}

fn c8_structured() -> Outcome {
    let st = |g| SpectralDensity::structured(0.1, g).unwrap();
    let a = mc_point(st(0.01), 6, 0.5)?;
    let b = mc_point(st(1.0), 6, 0.5)?;
    let c = mc_point(st(10.0), 6, 0.5)?;
    let ordered = above(deficit(&a), deficit(&b)) && above(deficit(&b), deficit(&c));
    // R = 1 - |(1 - r_ideal) - mean(1 - r)|; its error is that of the mean.
    let robust = above(
        (c.robustness, c.r_pert_stderr),
        (a.robustness, a.r_pert_stderr),
    );
    let q = QuadratureSettings::default();
    let areas: Vec<f64> = [0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0]
        .iter()
        .map(|&g| spectral_area(&st(g), &q).unwrap())
        .collect();
    let decreasing = areas.windows(2).all(|w| w[1] < w[0]);
    ensure(
        ordered && robust && decreasing,
        format!(
            "{}; {}; {}; R(10)={:.8} R(0.01)={:.8}; ordering {ordered}, robustness {robust}, area decreasing {decreasing}",
            fmt_point("g=0.01", &a),
            fmt_point("g=1", &b),
            fmt_point("g=10", &c),
            c.robustness,
            a.robustness
        ),
    )
}

fn c9_jitter() -> Outcome {
    let seq = PulseSequence::udd(3);
    let model = JitterModel::new(SIGMA).unwrap();
    let draws = 100_000u64;
    let d1 = seq.fractions()[0];
    let devs: Vec<f64> = (0..draws)
        .map(|i| {
            perturb(&seq, 1.0, &model, RngStream::new(9, i))
                .unwrap()
                .sequence
                .fractions()[0]
                - d1
        })
        .collect();
    let n = draws as f64;
    let mean = devs.iter().sum::<f64>() / n;
    let std = (devs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let std_ok = rel(std, SIGMA) < 0.02;

    let plan = SimulationPlan {
        density: SpectralDensity::power_law_sharp(0.1, 1.0).unwrap(),
        bath: hot(),
        rule: SequenceRule::Udd,
        pulses: 3,
        jitter: JitterModel::new(0.0).unwrap(),
        realizations: 50,
        seed: 1,
        tau_grid: TauGrid::new(0.1, 2.0, 0.1).unwrap(),
        quadrature: QuadratureSettings::default(),
    };
    let curve = run(&plan).map_err(|e| e.to_string())?;
    let ideal_ok = curve
        .points
        .iter()
        .all(|p| p.robustness == 1.0 && p.r_pert_mean == p.r_ideal);
    ensure(
        std_ok && ideal_ok,
        format!("sample std {std:.5e} vs {SIGMA:e} (rel {:.2}%, tol 2%); zero-jitter R=1 at all {} points: {ideal_ok}", 100.0 * rel(std, SIGMA), curve.points.len()),
    )
}

fn run_defaults(planfile: &Path, out: &Path, threads: usize) -> Result<(), String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())?;
    let args = RunArgs {
        planfile: planfile.to_owned(),
        out: Some(out.to_owned()),
        seed: None,
        realizations: None,
        quiet: true,
    };
    pool.install(|| run_command(&args))
        .map(|_| ())
        .map_err(|e| e.diagnostic())
}

fn c10_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let planfile = dir.path().join("defaults.plan");
    fs::write(&planfile, "spectral.kind = power_sharp\nspectral.s = 1\n")
        .map_err(|e| e.to_string())?;
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let wide = std::thread::available_parallelism()
        .map_or(8, |n| n.get())
        .max(8);
    run_defaults(&planfile, &a, 1)?;
    run_defaults(&planfile, &b, wide)?;
    let mut files: Vec<_> = fs::read_dir(&a)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name())
        .collect();
    files.sort();
    let mut csvs = 0;
    for f in &files {
        let x = fs::read(a.join(f)).map_err(|e| e.to_string())?;
        let y = fs::read(b.join(f)).map_err(|e| format!("{}: {e}", f.to_string_lossy()))?;
        if x != y {
            return Err(format!(
                "{} differs between 1 and {wide} threads",
                f.to_string_lossy()
            ));
        }
        csvs += usize::from(f.to_string_lossy().ends_with(".csv"));
    }
    let rows = fs::read_to_string(a.join("plan_000.csv"))
        .map_err(|e| e.to_string())?
        .lines()
        .count()
        - 1;
    ensure(
        csvs == 1 && rows == 20,
        format!("{} files byte-identical between 1 and {wide} threads ({csvs} csv, {rows} rows, N=5000)", files.len()),
    )
}
