//! Bath spectral densities in dimensionless frequency units.
//!
//! Power-law densities are measured in units of the cutoff frequency, the
//! structured density in units of the intermediate oscillator frequency.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breakpoints, QuadratureSettings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectralKind {
    /// `2 alpha w^s` for `w <= 1`, zero above.
    PowerLawSharp,
    /// `2 alpha w^s exp(-w)`.
    PowerLawExponential,
    /// `2 alpha w / ((1 - w^2)^2 + 4 w^2 gamma^2)`.
    StructuredEffective,
}

impl SpectralKind {
    pub fn name(self) -> &'static str {
        match self {
            SpectralKind::PowerLawSharp => "power_sharp",
            SpectralKind::PowerLawExponential => "power_exp",
            SpectralKind::StructuredEffective => "structured",
        }
    }
}

/// A validated spectral density `J(w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    kind: SpectralKind,
    alpha: f64,
    /// Exponent `s` for the power laws, damping ratio `gamma` for the structured kind.
    shape: f64,
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

impl SpectralDensity {
    pub fn power_law_sharp(alpha: f64, s: f64) -> Result<Self> {
        Ok(Self {
            kind: SpectralKind::PowerLawSharp,
            alpha: positive("alpha", alpha)?,
            shape: positive("s", s)?,
        })
    }

    pub fn power_law_exponential(alpha: f64, s: f64) -> Result<Self> {
        Ok(Self {
            kind: SpectralKind::PowerLawExponential,
            alpha: positive("alpha", alpha)?,
            shape: positive("s", s)?,
        })
    }

    pub fn structured(alpha: f64, gamma: f64) -> Result<Self> {
        Ok(Self {
            kind: SpectralKind::StructuredEffective,
            alpha: positive("alpha", alpha)?,
            shape: positive("gamma", gamma)?,
        })
    }

    pub fn kind(&self) -> SpectralKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Power-law exponent `s`, if this is a power-law density.
    pub fn exponent(&self) -> Option<f64> {
        match self.kind {
            SpectralKind::StructuredEffective => None,
            _ => Some(self.shape),
        }
    }

    /// Damping ratio `gamma`, if this is the structured density.
    pub fn damping(&self) -> Option<f64> {
        match self.kind {
            SpectralKind::StructuredEffective => Some(self.shape),
            _ => None,
        }
    }

    /// `J(omega)` for `omega >= 0`. The sharp cutoff includes `omega == 1`.
    pub fn evaluate(&self, omega: f64) -> f64 {
        debug_assert!(omega >= 0.0);
        let a2 = 2.0 * self.alpha;
        match self.kind {
            SpectralKind::PowerLawSharp => {
                if omega <= 1.0 {
                    a2 * omega.powf(self.shape)
                } else {
                    0.0
                }
            }
            SpectralKind::PowerLawExponential => a2 * omega.powf(self.shape) * (-omega).exp(),
            SpectralKind::StructuredEffective => {
                let w2 = omega * omega;
                let g = self.shape;
                a2 * omega / ((1.0 - w2).powi(2) + 4.0 * w2 * g * g)
            }
        }
    }

    /// Upper integration limit for the exponential cutoff before tail checks.
    fn exponential_window(&self) -> f64 {
        50f64.max(10.0 * self.shape)
    }

    /// Bound on `int_W^inf J(w) dw` for the exponential cutoff, valid for `W > s`.
    fn exponential_tail(&self, w: f64) -> f64 {
        let s = self.shape;
        2.0 * self.alpha * w.powf(s) * (-w).exp() * w / (w - s)
    }

    /// `int_0^inf J(w) g(w) dw` using the domain handling for this kind.
    ///
    /// `g_tail_sup(W)` must bound `|g|` on `[W, inf)`; it is used to pick a
    /// finite window for the exponential cutoff such that the neglected tail
    /// stays below `abs_tol`.
    pub fn integrate_weighted<G, B>(
        &self,
        g: G,
        g_tail_sup: B,
        q: &QuadratureSettings,
    ) -> Result<f64>
    where
        G: Fn(f64) -> f64,
        B: Fn(f64) -> f64,
    {
        match self.kind {
            SpectralKind::PowerLawSharp => {
                let f = |w: f64| self.evaluate(w) * g(w);
                Ok(integrate_with_breakpoints(f, &[0.0, 1.0], q)?.value)
            }
            SpectralKind::PowerLawExponential => {
                let mut window = self.exponential_window();
                while self.exponential_tail(window) * g_tail_sup(window) > q.abs_tol {
                    window *= 2.0;
                    if window > 1e6 {
                        return Err(Error::InvalidParameter {
                            name: "tail",
                            value: window,
                            reason: "integration window could not bound the exponential tail",
                        });
                    }
                }
                let f = |w: f64| self.evaluate(w) * g(w);
                Ok(integrate_with_breakpoints(f, &[0.0, window], q)?.value)
            }
            SpectralKind::StructuredEffective => {
                // w = u / (1 - u) maps [0, 1) onto [0, inf).
                let f = |u: f64| {
                    let v = 1.0 - u;
                    let w = u / v;
                    self.evaluate(w) * g(w) / (v * v)
                };
                Ok(integrate_with_breakpoints(f, &self.structured_breakpoints(), q)?.value)
            }
        }
    }

    /// Breakpoints in `u` for the structured kind; narrow resonances get
    /// forced splits at `w = 1` and `w = 1 +- k gamma`, `k in {1, 3, 10}`.
    fn structured_breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![0.0, 1.0];
        let gamma = self.shape;
        if gamma < 0.1 {
            pts.push(0.5);
            for k in [1.0, 3.0, 10.0] {
                for w in [1.0 - k * gamma, 1.0 + k * gamma] {
                    if w > 0.0 {
                        pts.push(w / (1.0 + w));
                    }
                }
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

/// `int_0^inf J(w) dw`, by the same quadrature engine as the decoherence integrals.
pub fn spectral_area(density: &SpectralDensity, q: &QuadratureSettings) -> Result<f64> {
    density.integrate_weighted(|_| 1.0, |_| 1.0, q)
}
