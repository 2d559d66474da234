//! Decoherence exponents for free evolution and pulsed evolution, and the
//! signal `r = exp(-2 chi)`.

use crate::bessel::bessel_j;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureSettings};
use crate::sequence::PulseSequence;
use crate::spectral::{SpectralDensity, SpectralKind};

/// Bath temperature in units of the reference frequency.
///
/// `inv_temperature == None` is the zero-temperature limit, where the
/// thermal factor `coth(beta w / 2)` is identically one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathConfig {
    inv_temperature: Option<f64>,
    temperature: f64,
}

impl BathConfig {
    pub fn zero_temperature() -> Self {
        Self {
            inv_temperature: None,
            temperature: 0.0,
        }
    }

    /// `temperature == 0` selects the zero-temperature limit.
    pub fn from_temperature(temperature: f64) -> Result<Self> {
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "temperature",
                value: temperature,
                reason: "must be finite and non-negative",
            });
        }
        if temperature == 0.0 {
            Ok(Self::zero_temperature())
        } else {
            Ok(Self {
                inv_temperature: Some(1.0 / temperature),
                temperature,
            })
        }
    }

    pub fn inv_temperature(&self) -> Option<f64> {
        self.inv_temperature
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// `coth(beta w / 2)`, switching to `1/z + z/3` below `z = 1e-6` and to
    /// one above `z = 20`.
    pub fn thermal_factor(&self, omega: f64) -> f64 {
        let Some(beta) = self.inv_temperature else {
            return 1.0;
        };
        let z = 0.5 * beta * omega;
        if z < 1e-6 {
            1.0 / z + z / 3.0
        } else if z > 20.0 {
            1.0
        } else {
            1.0 / z.tanh()
        }
    }
}

/// `chi(t) = int J(w)/w^2 sin^2(w t / 2) coth(beta w / 2) dw`.
pub fn chi_free(
    density: &SpectralDensity,
    t: f64,
    bath: &BathConfig,
    q: &QuadratureSettings,
) -> Result<f64> {
    check_time("t", t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    density.integrate_weighted(
        |w| {
            let s = (0.5 * w * t).sin();
            s * s / (w * w) * bath.thermal_factor(w)
        },
        |w| bath.thermal_factor(w) / (w * w),
        q,
    )
}

/// `chi_n(tau) = int J(w)/(4 w^2) |y_n(w tau)|^2 coth(beta w / 2) dw`.
pub fn chi_n(
    density: &SpectralDensity,
    tau: f64,
    bath: &BathConfig,
    seq: &PulseSequence,
    q: &QuadratureSettings,
) -> Result<f64> {
    check_time("tau", tau)?;
    if tau == 0.0 {
        return Ok(0.0);
    }
    let bound = 0.25 * seq.filter_bound_sq();
    density.integrate_weighted(
        |w| seq.filter(w * tau).magnitude_sq() / (4.0 * w * w) * bath.thermal_factor(w),
        |w| bound * bath.thermal_factor(w) / (w * w),
        q,
    )
}

/// `r = exp(-2 chi)`.
pub fn signal(chi: f64) -> f64 {
    (-2.0 * chi).exp()
}

/// `1 - r` without cancellation for small `chi`.
pub fn one_minus_signal(chi: f64) -> f64 {
    -(-2.0 * chi).exp_m1()
}

/// Truncated small-argument expansion of `chi_n` for the sharp cutoff:
/// the filter replaced by its Bessel form and `coth` by its first
/// `terms` Laurent terms,
///
/// `8 (n+1)^2 alpha [ (2/beta) I(s-3) + (beta/6) I(s-1) - (beta^3/360) I(s+1) ]`
///
/// with `I(p) = int_0^1 w^p J_{n+1}(w tau / 2)^2 dw`.
pub fn chi_n_series(
    density: &SpectralDensity,
    tau: f64,
    bath: &BathConfig,
    n: usize,
    terms: usize,
    q: &QuadratureSettings,
) -> Result<f64> {
    if density.kind() != SpectralKind::PowerLawSharp {
        return Err(Error::InvalidParameter {
            name: "spectral.kind",
            value: f64::NAN,
            reason: "the series expansion applies to the sharp power-law cutoff only",
        });
    }
    if !(1..=3).contains(&terms) {
        return Err(Error::InvalidParameter {
            name: "terms",
            value: terms as f64,
            reason: "must be 1, 2 or 3",
        });
    }
    let Some(beta) = bath.inv_temperature() else {
        return Err(Error::InvalidParameter {
            name: "temperature",
            value: 0.0,
            reason: "the high-temperature expansion needs a positive temperature",
        });
    };
    check_time("tau", tau)?;
    if tau == 0.0 {
        return Ok(0.0);
    }

    let s = density.exponent().expect("power-law density");
    let order = n as u32 + 1;
    let coefficients = [2.0 / beta, beta / 6.0, -beta.powi(3) / 360.0];
    let powers = [s - 3.0, s - 1.0, s + 1.0];

    let mut bracket = 0.0;
    for term in 0..terms {
        let p = powers[term];
        let f = |w: f64| {
            let j = bessel_j(order, 0.5 * w * tau);
            w.powf(p) * j * j
        };
        let integral = integrate(f, 0.0, 1.0, q).map_err(|e| match e {
            Error::NotConverged {
                estimate,
                error_bound,
                ..
            } => Error::Divergent {
                term: term + 1,
                estimate,
                error_bound,
            },
            other => other,
        })?;
        bracket += coefficients[term] * integral.value;
    }
    let m = n as f64 + 1.0;
    Ok(8.0 * m * m * density.alpha() * bracket)
}

fn check_time(name: &'static str, t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: t,
            reason: "must be finite and non-negative",
        })
    }
}
