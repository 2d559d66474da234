use proptest::prelude::*;

use ddsim::{
    chi_n, run, BathConfig, JitterModel, PulseSequence, QuadratureSettings, SequenceRule,
    SimulationPlan, SpectralDensity, TauGrid,
};

fn hot() -> BathConfig {
    BathConfig::from_temperature(10.0).unwrap()
}

fn density(kind: u8, alpha: f64, shape: f64) -> SpectralDensity {
    match kind % 3 {
        0 => SpectralDensity::power_law_sharp(alpha, shape).unwrap(),
        1 => SpectralDensity::power_law_exponential(alpha, shape).unwrap(),
        _ => SpectralDensity::structured(alpha, shape).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exponent_is_non_negative(
        kind in 0u8..3,
        alpha in 0.01f64..1.0,
        shape in 0.05f64..6.0,
        n in 0usize..10,
        tau in 0.0f64..6.0,
        temperature in 0.0f64..20.0,
    ) {
        let d = density(kind, alpha, shape);
        let bath = BathConfig::from_temperature(temperature).unwrap();
        let chi = chi_n(&d, tau, &bath, &PulseSequence::udd(n), &QuadratureSettings::default()).unwrap();
        prop_assert!(chi >= 0.0);
    }

    #[test]
    fn jittered_sequences_stay_valid(n in 1usize..12, tau in 0.05f64..3.0, sigma in 0.0f64..0.01, index in any::<u64>()) {
        let p = ddsim::perturb(
            &PulseSequence::udd(n),
            tau,
            &JitterModel::new(sigma).unwrap(),
            ddsim::RngStream::new(0, index),
        );
        if let Ok(p) = p {
            let f = p.sequence.fractions();
            prop_assert!(f[0] > 0.0 && f[f.len() - 1] < 1.0);
            prop_assert!(f.windows(2).all(|w| w[1] > w[0]));
        }
    }
}

fn chi_at(d: SpectralDensity, n: usize, tau: f64) -> f64 {
    chi_n(
        &d,
        tau,
        &hot(),
        &PulseSequence::udd(n),
        &QuadratureSettings::new(1e-11, 1e-40, 4000).unwrap(),
    )
    .unwrap()
}

#[test]
fn sharp_cutoff_favours_large_exponents() {
    for n in [3, 6, 9] {
        let c: Vec<f64> = [0.5, 1.0, 5.0]
            .iter()
            .map(|&s| chi_at(SpectralDensity::power_law_sharp(0.1, s).unwrap(), n, 1.0))
            .collect();
        assert!(c[0] > c[1] && c[1] > c[2], "n={n}: {c:?}");
    }
}

#[test]
fn exponential_cutoff_reverses_the_order() {
    for n in [3, 6, 9] {
        let c: Vec<f64> = [0.5, 1.0, 5.0]
            .iter()
            .map(|&s| {
                chi_at(
                    SpectralDensity::power_law_exponential(0.1, s).unwrap(),
                    n,
                    1.0,
                )
            })
            .collect();
        assert!(c[2] > c[1] && c[1] > c[0], "n={n}: {c:?}");
    }
}

#[test]
fn more_ideal_pulses_help() {
    for tau in [0.5, 1.0, 2.0] {
        for n in 1..=8 {
            let d = || SpectralDensity::power_law_exponential(0.1, 1.0).unwrap();
            let (a, b) = (chi_at(d(), n, tau), chi_at(d(), n + 1, tau));
            assert!(b <= a, "tau={tau} n={n}: {b} > {a}");
        }
    }
}

fn plan(sigma: f64) -> SimulationPlan {
    SimulationPlan {
        density: SpectralDensity::power_law_sharp(0.1, 1.0).unwrap(),
        bath: hot(),
        rule: SequenceRule::Udd,
        pulses: 3,
        jitter: JitterModel::new(sigma).unwrap(),
        realizations: 400,
        seed: 3,
        tau_grid: TauGrid::new(0.5, 2.0, 0.5).unwrap(),
        quadrature: QuadratureSettings::default(),
    }
}

#[test]
fn smaller_jitter_tracks_the_ideal_signal_more_closely() {
    let worst = |sigma| {
        run(&plan(sigma))
            .unwrap()
            .points
            .iter()
            .map(|p| ((p.r_pert_mean - p.r_ideal).abs(), p.r_pert_stderr))
            .fold((0.0f64, 0.0f64), |acc, x| if x.0 > acc.0 { x } else { acc })
    };
    let devs: Vec<(f64, f64)> = [5e-4, 5e-5, 5e-6].into_iter().map(worst).collect();
    for w in devs.windows(2) {
        assert!(w[1].0 <= w[0].0 + 2.0 * w[0].1.hypot(w[1].1), "{devs:?}");
    }
}

#[test]
fn runs_are_bit_identical() {
    let p = plan(5e-4);
    assert_eq!(run(&p).unwrap(), run(&p).unwrap());
}

#[test]
fn curve_values_stay_in_range() {
    let c = run(&plan(5e-3)).unwrap();
    for p in &c.points {
        assert!(p.r_ideal > 0.0 && p.r_ideal <= 1.0);
        assert!(p.r_pert_mean > 0.0 && p.r_pert_mean <= 1.0);
        assert!((0.0..=1.0).contains(&p.robustness));
        assert!(p.r_pert_stderr >= 0.0);
    }
}
