//! Pulse-time fractions and the sequence filter function.

use std::f64::consts::PI;

use crate::bessel::bessel_j;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceRule {
    Udd,
    Cpmg,
    Explicit,
}

impl SequenceRule {
    pub fn name(self) -> &'static str {
        match self {
            SequenceRule::Udd => "udd",
            SequenceRule::Cpmg => "cpmg",
            SequenceRule::Explicit => "explicit",
        }
    }
}

/// Ordered pulse times `delta_1 < ... < delta_n` as fractions of the total
/// evolution time, each strictly inside `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    fractions: Vec<f64>,
    rule: SequenceRule,
    /// `(midpoint, half-width)` of each of the `n + 1` free-evolution
    /// intervals between `0`, the pulses and `1`.
    intervals: Vec<(f64, f64)>,
    /// Taylor coefficients `M_p / p!` of `y_n` about `x = 0`, for `p = 1..`,
    /// with exact moments `M_p`. Only set for Uhrig sequences.
    taylor: Option<Vec<f64>>,
}

/// Below this argument, Uhrig filters use the exact-moment Taylor series.
const TAYLOR_MAX_X: f64 = 1.0;
const TAYLOR_TERMS: usize = 48;
/// Largest `n + 1` for which the integer moments stay inside `i128`.
const TAYLOR_MAX_PERIOD: usize = 24;

impl PulseSequence {
    fn build(fractions: Vec<f64>, rule: SequenceRule) -> Self {
        let mut intervals = Vec::with_capacity(fractions.len() + 1);
        let mut prev = 0.0;
        for &t in fractions.iter().chain(std::iter::once(&1.0)) {
            intervals.push((0.5 * (prev + t), 0.5 * (t - prev)));
            prev = t;
        }
        let taylor = (rule == SequenceRule::Udd && fractions.len() < TAYLOR_MAX_PERIOD)
            .then(|| udd_taylor(fractions.len() + 1));
        Self {
            fractions,
            rule,
            intervals,
            taylor,
        }
    }

    /// No pulses: free evolution.
    pub fn free() -> Self {
        Self::build(Vec::new(), SequenceRule::Explicit)
    }

    /// Uhrig sequence `delta_j = sin^2(pi j / (2n + 2))`.
    pub fn udd(n: usize) -> Self {
        let denom = 2.0 * n as f64 + 2.0;
        let fractions = (1..=n)
            .map(|j| (PI * j as f64 / denom).sin().powi(2))
            .collect();
        Self::build(fractions, SequenceRule::Udd)
    }

    /// Equidistant sequence `delta_j = (j - 1/2) / n`.
    pub fn cpmg(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSequence(
                "CPMG needs at least one pulse".into(),
            ));
        }
        let fractions = (1..=n).map(|j| (j as f64 - 0.5) / n as f64).collect();
        Ok(Self::build(fractions, SequenceRule::Cpmg))
    }

    /// Arbitrary fractions; must be finite, strictly increasing and inside `(0, 1)`.
    pub fn explicit(fractions: Vec<f64>) -> Result<Self> {
        for (j, &d) in fractions.iter().enumerate() {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::InvalidSequence(format!(
                    "fraction {} = {d} is outside (0, 1)",
                    j + 1
                )));
            }
        }
        if let Some(j) = fractions.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSequence(format!(
                "fractions {} and {} are not strictly increasing",
                j + 1,
                j + 2
            )));
        }
        Ok(Self::build(fractions, SequenceRule::Explicit))
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    pub fn rule(&self) -> SequenceRule {
        self.rule
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    /// `y_n(x) = 1 + (-1)^(n+1) e^{ix} + 2 sum_j (-1)^j e^{i x delta_j}`.
    ///
    /// Evaluated as the equivalent sum over free-evolution intervals,
    /// `sum_k (-1)^k (e^{i x t_k} - e^{i x t_{k+1}})`, with each difference
    /// written as `-2i sin(x h_k) e^{i x m_k}`. This avoids the leading-order
    /// cancellation of the plain sum at small `x`.
    ///
    /// Uhrig sequences at `x < 1` instead sum a Taylor series whose moments
    /// are exact, since `|y_n|^2 ~ x^(2n+2)` falls below the rounding noise
    /// of any sum over rounded pulse times.
    pub fn filter(&self, x: f64) -> FilterValue {
        if let Some(coef) = self.taylor.as_deref().filter(|_| x.abs() < TAYLOR_MAX_X) {
            return taylor_filter(coef, x);
        }
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, &(mid, half)) in self.intervals.iter().enumerate() {
            let amp = (x * half).sin();
            let amp = if k % 2 == 0 { amp } else { -amp };
            let (s, c) = (x * mid).sin_cos();
            re += s * amp;
            im -= c * amp;
        }
        FilterValue {
            re: 2.0 * re,
            im: 2.0 * im,
        }
    }

    /// Upper bound on `|y_n|^2`: `2n + 2` unit-modulus phasors.
    pub fn filter_bound_sq(&self) -> f64 {
        let m = 2.0 * self.len() as f64 + 2.0;
        m * m
    }
}

fn taylor_filter(coef: &[f64], x: f64) -> FilterValue {
    let (mut re, mut im) = (0.0, 0.0);
    let mut xp = 1.0;
    for (i, &c) in coef.iter().enumerate() {
        let p = i + 1;
        xp *= x;
        if c == 0.0 {
            continue;
        }
        // i^p cycles through 1, i, -1, -i.
        match p % 4 {
            0 => re += c * xp,
            1 => im += c * xp,
            2 => re -= c * xp,
            _ => im -= c * xp,
        }
    }
    FilterValue { re, im }
}

fn binomials(max: usize) -> Vec<Vec<i128>> {
    let mut rows: Vec<Vec<i128>> = vec![vec![1]];
    for m in 1..=max {
        let prev = &rows[m - 1];
        let row = (0..=m)
            .map(|k| {
                let left = if k > 0 { prev[k - 1] } else { 0 };
                left + prev.get(k).copied().unwrap_or(0)
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// `M_p / p!` for the Uhrig sequence with `period - 1` pulses.
///
/// The sampling points are `t_k = (1 - cos(pi k / N)) / 2`, `k = 0..=N`,
/// weighted `1, -2, 2, ..., (-1)^N`. Expanding powers of the cosine into
/// harmonics reduces every moment to sums `sum_k w_k cos(m pi k / N)`,
/// which equal `2N` when `m = N (mod 2N)` and vanish otherwise. The scaled
/// moment `4^p M_p` is therefore an integer.
fn udd_taylor(period: usize) -> Vec<f64> {
    let c = binomials(TAYLOR_TERMS);
    let n = period as i128;
    let harmonic = |m: usize| if m % (2 * period) == period { 2 * n } else { 0 };
    // scaled[q] = 2^q sum_k w_k cos^q(pi k / N)
    let scaled: Vec<i128> = (0..=TAYLOR_TERMS)
        .map(|q| {
            (0..=q)
                .map(|r| c[q][r] * harmonic((q as isize - 2 * r as isize).unsigned_abs()))
                .sum()
        })
        .collect();
    let mut factorial = 1.0;
    (1..=TAYLOR_TERMS)
        .map(|p| {
            factorial *= p as f64;
            let moment: i128 = (0..=p)
                .map(|q| {
                    let term = c[p][q] * (1i128 << (p - q)) * scaled[q];
                    if q % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum();
            moment as f64 / 4f64.powi(p as i32) / factorial
        })
        .collect()
}

/// Complex value of the filter function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterValue {
    pub re: f64,
    pub im: f64,
}

impl FilterValue {
    pub fn magnitude_sq(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

pub fn udd_fractions(n: usize) -> PulseSequence {
    PulseSequence::udd(n)
}

pub fn cpmg_fractions(n: usize) -> Result<PulseSequence> {
    PulseSequence::cpmg(n)
}

pub fn filter(seq: &PulseSequence, x: f64) -> FilterValue {
    seq.filter(x)
}

/// Small-argument approximation `|y_n(x)|^2 ~ 16 (n+1)^2 J_{n+1}(x/2)^2`,
/// intended for `x / 2 < n + 1`.
pub fn filter_bessel_approx(n: usize, x: f64) -> f64 {
    let m = n as f64 + 1.0;
    let j = bessel_j(n as u32 + 1, 0.5 * x);
    16.0 * m * m * j * j
}
