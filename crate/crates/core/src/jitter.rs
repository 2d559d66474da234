//! Gaussian timing jitter on pulse-application times.
//!
//! Each pulse time `delta_j * tau` is shifted by `a_j ~ N(0, sigma^2)`,
//! with `sigma` in the same dimensionless time units as `tau`. A draw is
//! accepted only if the perturbed fractions are still strictly increasing
//! and inside `(0, 1)`; otherwise the whole vector is redrawn.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::sequence::PulseSequence;

pub const DEFAULT_MAX_RESAMPLES: u32 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JitterModel {
    sigma: f64,
    max_resamples: u32,
}

impl JitterModel {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "sigma",
                value: sigma,
                reason: "must be finite and non-negative",
            });
        }
        Ok(Self {
            sigma,
            max_resamples: DEFAULT_MAX_RESAMPLES,
        })
    }

    pub fn with_max_resamples(mut self, max_resamples: u32) -> Self {
        self.max_resamples = max_resamples.max(1);
        self
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn max_resamples(&self) -> u32 {
        self.max_resamples
    }
}

/// Identifies one reproducible random stream: ChaCha8 keyed by `seed`,
/// stream number `index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub index: u64,
}

impl RngStream {
    pub fn new(seed: u64, index: u64) -> Self {
        Self { seed, index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.index);
        rng
    }
}

/// A perturbed sequence and the number of whole-vector draws it took.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub sequence: PulseSequence,
    pub attempts: u32,
}

pub fn perturb(
    seq: &PulseSequence,
    tau: f64,
    model: &JitterModel,
    stream: RngStream,
) -> Result<Perturbation> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            reason: "jitter needs a positive total time",
        });
    }
    if model.sigma == 0.0 || seq.is_empty() {
        return Ok(Perturbation {
            sequence: PulseSequence::explicit(seq.fractions().to_vec())?,
            attempts: 1,
        });
    }

    let scale = model.sigma / tau;
    let mut rng = stream.rng();
    let mut buf = vec![0.0; seq.len()];
    for attempt in 1..=model.max_resamples {
        for (out, &d) in buf.iter_mut().zip(seq.fractions()) {
            let z: f64 = StandardNormal.sample(&mut rng);
            *out = d + scale * z;
        }
        if is_admissible(&buf) {
            return Ok(Perturbation {
                sequence: PulseSequence::explicit(buf)?,
                attempts: attempt,
            });
        }
    }
    Err(Error::ResampleCapExceeded {
        cap: model.max_resamples,
        sigma: model.sigma,
        tau,
    })
}

fn is_admissible(fractions: &[f64]) -> bool {
    fractions.first().is_some_and(|&d| d > 0.0)
        && fractions.last().is_some_and(|&d| d < 1.0)
        && fractions.windows(2).all(|w| w[1] > w[0])
}
