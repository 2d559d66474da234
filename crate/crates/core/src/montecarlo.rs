//! Jittered-ensemble runs over a grid of total times.
//!
//! Realizations are evaluated in parallel, each on its own random stream
//! `(seed, index)`, and reduced sequentially in ascending index order, so a
//! plan yields bit-identical curves for any thread count.

use rayon::prelude::*;

use crate::decoherence::{chi_n, one_minus_signal, signal, BathConfig};
use crate::error::{Error, Result};
use crate::jitter::{perturb, JitterModel, RngStream};
use crate::quadrature::QuadratureSettings;
use crate::sequence::{PulseSequence, SequenceRule};
use crate::spectral::SpectralDensity;

/// Evenly spaced total times `start + k * step` up to and including `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauGrid {
    start: f64,
    stop: f64,
    step: f64,
}

impl TauGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start >= 0.0 && start.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tau_start",
                value: start,
                reason: "must be finite and non-negative",
            });
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tau_step",
                value: step,
                reason: "must be positive",
            });
        }
        if !(stop > start && stop.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tau_stop",
                value: stop,
                reason: "must exceed tau_start",
            });
        }
        Ok(Self { start, stop, step })
    }

    /// A grid holding the single time `tau`.
    pub fn single(tau: f64) -> Result<Self> {
        let g = Self::new(tau, tau + 1.0, 2.0)?;
        Ok(g)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn points(&self) -> Vec<f64> {
        // Small slack so that e.g. 0.1..=2.0 by 0.1 includes 2.0.
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=count)
            .map(|k| self.start + k as f64 * self.step)
            .collect()
    }
}

/// Everything needed to produce one signal curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPlan {
    pub density: SpectralDensity,
    pub bath: BathConfig,
    pub rule: SequenceRule,
    pub pulses: usize,
    pub jitter: JitterModel,
    pub realizations: u64,
    pub seed: u64,
    pub tau_grid: TauGrid,
    pub quadrature: QuadratureSettings,
}

impl SimulationPlan {
    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::InvalidParameter {
                name: "realizations",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        self.quadrature.validate()?;
        self.sequence().map(|_| ())
    }

    pub fn sequence(&self) -> Result<PulseSequence> {
        match self.rule {
            SequenceRule::Udd => Ok(PulseSequence::udd(self.pulses)),
            SequenceRule::Cpmg => PulseSequence::cpmg(self.pulses),
            SequenceRule::Explicit => Err(Error::InvalidSequence(
                "plans are built from a generating rule (udd or cpmg)".into(),
            )),
        }
    }
}

/// Ideal and ensemble-averaged signals at one total time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalPoint {
    pub tau: f64,
    pub chi_ideal: f64,
    pub r_ideal: f64,
    pub one_minus_r_ideal: f64,
    pub r_pert_mean: f64,
    pub r_pert_stderr: f64,
    pub one_minus_r_pert_mean: f64,
    /// `1 - |r_pert_mean - r_ideal|`.
    pub robustness: f64,
    /// Fraction of whole-vector jitter draws that were rejected.
    pub rejection_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SignalCurve {
    pub points: Vec<SignalPoint>,
}

/// Run a plan over its whole grid.
pub fn run(plan: &SimulationPlan) -> Result<SignalCurve> {
    plan.validate()?;
    let seq = plan.sequence()?;
    let points = plan
        .tau_grid
        .points()
        .into_iter()
        .map(|tau| run_point(plan, &seq, tau))
        .collect::<Result<Vec<_>>>()?;
    Ok(SignalCurve { points })
}

/// Ideal signal plus `plan.realizations` jittered realizations at `tau`.
pub fn run_point(plan: &SimulationPlan, seq: &PulseSequence, tau: f64) -> Result<SignalPoint> {
    if tau == 0.0 {
        return Ok(SignalPoint {
            tau,
            chi_ideal: 0.0,
            r_ideal: 1.0,
            one_minus_r_ideal: 0.0,
            r_pert_mean: 1.0,
            r_pert_stderr: 0.0,
            one_minus_r_pert_mean: 0.0,
            robustness: 1.0,
            rejection_rate: 0.0,
        });
    }

    let chi_ideal = chi_n(&plan.density, tau, &plan.bath, seq, &plan.quadrature).map_err(|e| {
        Error::IdealPoint {
            tau,
            source: Box::new(e),
        }
    })?;

    let one_minus_r_ideal = one_minus_signal(chi_ideal);
    let r_ideal = signal(chi_ideal);
    if plan.jitter.sigma() == 0.0 || seq.is_empty() {
        // Every realization would equal the ideal sequence.
        return Ok(SignalPoint {
            tau,
            chi_ideal,
            r_ideal,
            one_minus_r_ideal,
            r_pert_mean: r_ideal,
            r_pert_stderr: 0.0,
            one_minus_r_pert_mean: one_minus_r_ideal,
            robustness: 1.0,
            rejection_rate: 0.0,
        });
    }

    let samples: Vec<Result<(f64, f64, u32)>> = (0..plan.realizations)
        .into_par_iter()
        .map(|index| {
            let wrap = |e: Error| Error::Realization {
                tau,
                index,
                source: Box::new(e),
            };
            let p =
                perturb(seq, tau, &plan.jitter, RngStream::new(plan.seed, index)).map_err(wrap)?;
            let chi = chi_n(
                &plan.density,
                tau,
                &plan.bath,
                &p.sequence,
                &plan.quadrature,
            )
            .map_err(wrap)?;
            Ok((one_minus_signal(chi), signal(chi), p.attempts))
        })
        .collect();

    let n = plan.realizations as f64;
    let mut deficit_sum = 0.0;
    let mut r_sum = 0.0;
    let mut attempts: u64 = 0;
    let mut deficits = Vec::with_capacity(samples.len());
    for s in samples {
        let (deficit, r, a) = s?;
        deficit_sum += deficit;
        r_sum += r;
        attempts += u64::from(a);
        deficits.push(deficit);
    }
    let deficit_mean = deficit_sum / n;
    let r_mean = r_sum / n;
    let stderr = if deficits.len() > 1 {
        let ss: f64 = deficits.iter().map(|d| (d - deficit_mean).powi(2)).sum();
        (ss / (n - 1.0) / n).sqrt()
    } else {
        0.0
    };

    Ok(SignalPoint {
        tau,
        chi_ideal,
        r_ideal,
        one_minus_r_ideal,
        r_pert_mean: r_mean,
        r_pert_stderr: stderr,
        one_minus_r_pert_mean: deficit_mean,
        robustness: 1.0 - (one_minus_r_ideal - deficit_mean).abs(),
        rejection_rate: (attempts as f64 - n) / attempts as f64,
    })
}

/// Run several plans independently; one failing plan does not stop the others.
pub fn sweep(plans: &[SimulationPlan]) -> Result<Vec<Result<SignalCurve>>> {
    if plans.is_empty() {
        return Err(Error::EmptySweep);
    }
    Ok(plans.iter().map(run).collect())
}
