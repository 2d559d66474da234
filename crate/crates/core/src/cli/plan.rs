//! Flat `key = value` plan files.
//!
//! ```text
//! # three exponents, three pulse counts
//! spectral.kind = power_sharp
//! sweep.s_values = 0.5, 1, 5
//! sequence.n = 3, 6, 9
//! ```
//!
//! List-valued keys (`sequence.n`, `sweep.s_values`, `sweep.gamma_values`)
//! expand into one plan per combination, `n` outermost.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::decoherence::BathConfig;
use crate::jitter::JitterModel;
use crate::montecarlo::{SimulationPlan, TauGrid};
use crate::quadrature::QuadratureSettings;
use crate::sequence::SequenceRule;
use crate::spectral::{SpectralDensity, SpectralKind};

pub const KNOWN_KEYS: &[&str] = &[
    "spectral.kind",
    "spectral.alpha",
    "spectral.s",
    "spectral.gamma",
    "bath.temperature",
    "sequence.kind",
    "sequence.n",
    "jitter.sigma",
    "mc.realizations",
    "mc.seed",
    "sweep.tau_start",
    "sweep.tau_stop",
    "sweep.tau_step",
    "sweep.s_values",
    "sweep.gamma_values",
    "output.path",
];

pub const DEFAULT_ALPHA: f64 = 0.1;
pub const DEFAULT_TEMPERATURE: f64 = 10.0;
pub const DEFAULT_SIGMA: f64 = 5e-4;
pub const DEFAULT_REALIZATIONS: u64 = 5000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_PULSES: usize = 3;
pub const DEFAULT_TAU_START: f64 = 0.1;
pub const DEFAULT_TAU_STOP: f64 = 2.0;
pub const DEFAULT_TAU_STEP: f64 = 0.1;
pub const DEFAULT_OUTPUT: &str = "out";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanError {
    /// 1-based line in the plan file; `None` for missing keys and overrides.
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl PlanError {
    fn new(line: Option<usize>, key: Option<&str>, message: impl Into<String>) -> Self {
        Self {
            line,
            key: key.map(str::to_owned),
            message: message.into(),
        }
    }
}

impl fmt::Display for PlanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "key `{key}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for PlanError {}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: Option<usize>,
}

/// Parsed but not yet validated plan file.
#[derive(Debug, Clone, Default)]
pub struct PlanDocument {
    entries: BTreeMap<String, Entry>,
}

/// The expanded family of plans plus where to write results.
#[derive(Debug, Clone)]
pub struct PlanSet {
    pub plans: Vec<SimulationPlan>,
    pub output: PathBuf,
}

impl PlanDocument {
    pub fn parse(text: &str) -> Result<Self, PlanError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(PlanError::new(Some(line), None, "expected `key = value`"));
            };
            let key = key.trim();
            let value = value.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(PlanError::new(Some(line), Some(key), "unknown key"));
            }
            if value.is_empty() {
                return Err(PlanError::new(Some(line), Some(key), "empty value"));
            }
            if let Some(prev) = entries.insert(
                key.to_owned(),
                Entry {
                    value: value.to_owned(),
                    line: Some(line),
                },
            ) {
                return Err(PlanError::new(
                    Some(line),
                    Some(key),
                    format!(
                        "duplicate key (first set on line {})",
                        prev.line.unwrap_or(0)
                    ),
                ));
            }
        }
        Ok(Self { entries })
    }

    /// Override a key, e.g. from a command-line flag.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), PlanError> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(PlanError::new(None, Some(key), "unknown key"));
        }
        self.entries.insert(
            key.to_owned(),
            Entry {
                value: value.into(),
                line: None,
            },
        );
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).and_then(|e| e.line)
    }

    fn err(&self, key: &str, message: impl Into<String>) -> PlanError {
        PlanError::new(self.line(key), Some(key), message)
    }

    fn number(&self, key: &str, default: Option<f64>) -> Result<f64, PlanError> {
        match self.get(key) {
            Some(v) => parse_decimal(v)
                .ok_or_else(|| self.err(key, format!("`{v}` is not a decimal number"))),
            None => default.ok_or_else(|| PlanError::new(None, Some(key), "missing required key")),
        }
    }

    fn integer(&self, key: &str, default: u64) -> Result<u64, PlanError> {
        match self.get(key) {
            Some(v) => v
                .parse::<u64>()
                .map_err(|_| self.err(key, format!("`{v}` is not a non-negative integer"))),
            None => Ok(default),
        }
    }

    fn number_list(&self, key: &str) -> Result<Option<Vec<f64>>, PlanError> {
        let Some(v) = self.get(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|item| {
                let item = item.trim();
                parse_decimal(item)
                    .ok_or_else(|| self.err(key, format!("`{item}` is not a decimal number")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    /// Validate and expand into concrete plans.
    pub fn expand(&self) -> Result<PlanSet, PlanError> {
        let kind = match self.get("spectral.kind") {
            Some("power_sharp") => SpectralKind::PowerLawSharp,
            Some("power_exp") => SpectralKind::PowerLawExponential,
            Some("structured") => SpectralKind::StructuredEffective,
            Some(other) => {
                return Err(self.err(
                    "spectral.kind",
                    format!("`{other}` is not one of power_sharp, power_exp, structured"),
                ))
            }
            None => {
                return Err(PlanError::new(
                    None,
                    Some("spectral.kind"),
                    "missing required key",
                ))
            }
        };

        let (shape_key, list_key, wrong) = match kind {
            SpectralKind::StructuredEffective => (
                "spectral.gamma",
                "sweep.gamma_values",
                ["spectral.s", "sweep.s_values"],
            ),
            _ => (
                "spectral.s",
                "sweep.s_values",
                ["spectral.gamma", "sweep.gamma_values"],
            ),
        };
        for key in wrong {
            if self.get(key).is_some() {
                return Err(self.err(
                    key,
                    format!("not allowed with spectral.kind = {}", kind.name()),
                ));
            }
        }
        let shapes = match (self.get(shape_key), self.number_list(list_key)?) {
            (Some(_), Some(_)) => {
                return Err(self.err(list_key, format!("conflicts with `{shape_key}`")));
            }
            (Some(_), None) => vec![(self.number(shape_key, None)?, shape_key)],
            (None, Some(list)) => list.into_iter().map(|v| (v, list_key)).collect(),
            (None, None) => {
                return Err(PlanError::new(
                    None,
                    Some(shape_key),
                    format!("missing required key (or `{list_key}`)"),
                ))
            }
        };

        let alpha = self.number("spectral.alpha", Some(DEFAULT_ALPHA))?;
        let temperature = self.number("bath.temperature", Some(DEFAULT_TEMPERATURE))?;
        let bath = BathConfig::from_temperature(temperature)
            .map_err(|e| self.err("bath.temperature", e.to_string()))?;

        let rule = match self.get("sequence.kind").unwrap_or("udd") {
            "udd" => SequenceRule::Udd,
            "cpmg" => SequenceRule::Cpmg,
            other => {
                return Err(self.err(
                    "sequence.kind",
                    format!("`{other}` is not one of udd, cpmg"),
                ))
            }
        };
        let pulse_counts: Vec<usize> = match self.get("sequence.n") {
            None => vec![DEFAULT_PULSES],
            Some(v) => v
                .split(',')
                .map(|item| {
                    let item = item.trim();
                    item.parse::<usize>().map_err(|_| {
                        self.err(
                            "sequence.n",
                            format!("`{item}` is not a non-negative integer"),
                        )
                    })
                })
                .collect::<Result<_, _>>()?,
        };
        if rule == SequenceRule::Cpmg && pulse_counts.contains(&0) {
            return Err(self.err("sequence.n", "CPMG needs at least one pulse"));
        }

        let sigma = self.number("jitter.sigma", Some(DEFAULT_SIGMA))?;
        let jitter =
            JitterModel::new(sigma).map_err(|e| self.err("jitter.sigma", e.to_string()))?;
        let realizations = self.integer("mc.realizations", DEFAULT_REALIZATIONS)?;
        if realizations == 0 {
            return Err(self.err("mc.realizations", "must be at least 1"));
        }
        let seed = self.integer("mc.seed", DEFAULT_SEED)?;

        let tau_start = self.number("sweep.tau_start", Some(DEFAULT_TAU_START))?;
        let tau_stop = self.number("sweep.tau_stop", Some(DEFAULT_TAU_STOP))?;
        let tau_step = self.number("sweep.tau_step", Some(DEFAULT_TAU_STEP))?;
        let tau_grid = TauGrid::new(tau_start, tau_stop, tau_step).map_err(|e| {
            let key = match &e {
                crate::Error::InvalidParameter { name, .. } => format!("sweep.{name}"),
                _ => "sweep.tau_start".to_owned(),
            };
            self.err(&key, e.to_string())
        })?;

        let output = PathBuf::from(self.get("output.path").unwrap_or(DEFAULT_OUTPUT));

        let mut plans = Vec::with_capacity(pulse_counts.len() * shapes.len());
        for &pulses in &pulse_counts {
            for &(shape, key) in &shapes {
                let density = match kind {
                    SpectralKind::PowerLawSharp => SpectralDensity::power_law_sharp(alpha, shape),
                    SpectralKind::PowerLawExponential => {
                        SpectralDensity::power_law_exponential(alpha, shape)
                    }
                    SpectralKind::StructuredEffective => SpectralDensity::structured(alpha, shape),
                }
                .map_err(|e| match &e {
                    crate::Error::InvalidParameter { name: "alpha", .. } => {
                        self.err("spectral.alpha", e.to_string())
                    }
                    _ => self.err(key, e.to_string()),
                })?;
                plans.push(SimulationPlan {
                    density,
                    bath,
                    rule,
                    pulses,
                    jitter,
                    realizations,
                    seed,
                    tau_grid,
                    quadrature: QuadratureSettings::default(),
                });
            }
        }
        Ok(PlanSet { plans, output })
    }
}

/// Finite decimal number; rejects `inf`, `nan` and friends.
fn parse_decimal(text: &str) -> Option<f64> {
    let ok = !text.is_empty()
        && text
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    if !ok {
        return None;
    }
    text.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parse and expand a plan document in one step.
pub fn parse_plan(document: &str) -> Result<Vec<SimulationPlan>, PlanError> {
    Ok(PlanDocument::parse(document)?.expand()?.plans)
}

/// The plan's settings in plan-file vocabulary, for manifests.
pub fn plan_parameters(plan: &SimulationPlan) -> Vec<(String, String)> {
    let d = &plan.density;
    let mut out = vec![
        ("spectral.kind".to_owned(), d.kind().name().to_owned()),
        ("spectral.alpha".to_owned(), d.alpha().to_string()),
    ];
    if let Some(s) = d.exponent() {
        out.push(("spectral.s".to_owned(), s.to_string()));
    }
    if let Some(g) = d.damping() {
        out.push(("spectral.gamma".to_owned(), g.to_string()));
    }
    out.extend([
        (
            "bath.temperature".to_owned(),
            plan.bath.temperature().to_string(),
        ),
        ("sequence.kind".to_owned(), plan.rule.name().to_owned()),
        ("sequence.n".to_owned(), plan.pulses.to_string()),
        ("jitter.sigma".to_owned(), plan.jitter.sigma().to_string()),
        ("mc.realizations".to_owned(), plan.realizations.to_string()),
        ("mc.seed".to_owned(), plan.seed.to_string()),
        (
            "sweep.tau_start".to_owned(),
            plan.tau_grid.start().to_string(),
        ),
        (
            "sweep.tau_stop".to_owned(),
            plan.tau_grid.stop().to_string(),
        ),
        (
            "sweep.tau_step".to_owned(),
            plan.tau_grid.step().to_string(),
        ),
    ]);
    out
}
