//! Qubit dephasing under pulsed dynamical decoupling in a bosonic bath.
//!
//! The coherence of a dephasing qubit after total time `tau` is
//! `r = exp(-2 chi)`, where `chi` integrates the bath spectral density
//! against the filter function of the applied pi-pulse sequence. This crate
//! evaluates `chi` for Uhrig (UDD) and equally spaced (CPMG) sequences,
//! ideal or with Gaussian pulse-timing jitter averaged over a Monte Carlo
//! ensemble.
//!
//! ```
//! use ddsim::{chi_n, signal, BathConfig, PulseSequence, QuadratureSettings, SpectralDensity};
//!
//! let j = SpectralDensity::power_law_sharp(0.1, 1.0)?;
//! let bath = BathConfig::from_temperature(10.0)?;
//! let chi = chi_n(&j, 1.0, &bath, &PulseSequence::udd(3), &QuadratureSettings::default())?;
//! assert!(1.0 - signal(chi) < 1e-5);
//! # Ok::<(), ddsim::Error>(())
//! ```

pub mod bessel;
pub mod cli;
pub mod decoherence;
pub mod error;
pub mod jitter;
pub mod montecarlo;
pub mod quadrature;
pub mod sequence;
pub mod spectral;

pub use decoherence::{chi_free, chi_n, chi_n_series, one_minus_signal, signal, BathConfig};
pub use error::{Error, Result};
pub use jitter::{perturb, JitterModel, Perturbation, RngStream};
pub use montecarlo::{run, run_point, sweep, SignalCurve, SignalPoint, SimulationPlan, TauGrid};
pub use quadrature::QuadratureSettings;
pub use sequence::{filter_bessel_approx, PulseSequence, SequenceRule};
pub use spectral::{spectral_area, SpectralDensity, SpectralKind};
