//! CSV results, the run manifest, and gnuplot scripts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::cli::plan::plan_parameters;
use crate::montecarlo::{SignalCurve, SimulationPlan};
use crate::quadrature::QuadratureSettings;
use crate::spectral::{spectral_area, SpectralDensity};

pub const CSV_HEADER: &str = "tau,chi_ideal,r_ideal,one_minus_r_ideal,r_pert_mean,r_pert_stderr,one_minus_r_pert_mean,robustness,rejection_rate";
pub const POWER_AREA_HEADER: &str = "s,area_sharp,area_exp,ratio";
pub const STRUCTURED_AREA_HEADER: &str = "gamma,area";
pub const MANIFEST_FILE: &str = "manifest.txt";

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("cannot write `{path}`: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("nothing to write: {0}")]
    Empty(&'static str),
    #[error("manifest references missing file `{0}`")]
    DanglingReference(String),
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error(transparent)]
    Numerical(#[from] crate::Error),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.to_owned(),
        source,
    }
}

/// 17 significant digits in scientific notation; parses back bit-exactly.
pub fn format_sci(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn curve_to_csv(curve: &SignalCurve) -> String {
    let mut out = String::with_capacity(64 + curve.points.len() * 220);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in &curve.points {
        let row = [
            p.tau,
            p.chi_ideal,
            p.r_ideal,
            p.one_minus_r_ideal,
            p.r_pert_mean,
            p.r_pert_stderr,
            p.one_minus_r_pert_mean,
            p.robustness,
            p.rejection_rate,
        ];
        let cells: Vec<String> = row.iter().map(|&v| format_sci(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// One manifest entry: a data file and the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub file: String,
    pub params: Vec<(String, String)>,
}

impl ManifestEntry {
    pub fn param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Key-value listing of every data file written by a run.
///
/// ```text
/// entries = 2
/// entry.0.file = plan_000.csv
/// entry.0.spectral.kind = power_sharp
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn to_text(&self) -> String {
        let mut out = String::from("# ddsim run manifest\n");
        let _ = writeln!(out, "entries = {}", self.entries.len());
        for (i, e) in self.entries.iter().enumerate() {
            let _ = writeln!(out, "entry.{i}.file = {}", e.file);
            for (k, v) in &e.params {
                let _ = writeln!(out, "entry.{i}.{k} = {v}");
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, OutputError> {
        let mut declared = None;
        let mut entries: Vec<ManifestEntry> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let bad = |message: &str| OutputError::Manifest {
                line,
                message: message.to_owned(),
            };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| bad("expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim().to_owned());
            if key == "entries" {
                declared = Some(value.parse::<usize>().map_err(|_| bad("bad entry count"))?);
                continue;
            }
            let rest = key
                .strip_prefix("entry.")
                .ok_or_else(|| bad("unknown key"))?;
            let (idx, field) = rest.split_once('.').ok_or_else(|| bad("unknown key"))?;
            let idx: usize = idx.parse().map_err(|_| bad("bad entry index"))?;
            if idx > entries.len() {
                return Err(bad("entry indices must be contiguous"));
            }
            if idx == entries.len() {
                if field != "file" {
                    return Err(bad("an entry must start with its `file`"));
                }
                entries.push(ManifestEntry {
                    file: value,
                    params: Vec::new(),
                });
            } else {
                entries[idx].params.push((field.to_owned(), value));
            }
        }
        if let Some(n) = declared {
            if n != entries.len() {
                return Err(OutputError::Manifest {
                    line: 0,
                    message: format!("declares {n} entries but lists {}", entries.len()),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn read(dir: &Path) -> Result<Self, OutputError> {
        let path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        Self::parse(&text)
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, OutputError> {
        let path = dir.join(MANIFEST_FILE);
        fs::write(&path, self.to_text()).map_err(io_err(&path))?;
        Ok(path)
    }

    fn check_files(&self, dir: &Path) -> Result<(), OutputError> {
        if self.entries.is_empty() {
            return Err(OutputError::Empty("manifest has no entries"));
        }
        for e in &self.entries {
            if !dir.join(&e.file).is_file() {
                return Err(OutputError::DanglingReference(e.file.clone()));
            }
        }
        Ok(())
    }
}

/// Write one CSV per plan (`plan_000.csv`, ...) and the manifest into `dir`.
pub fn emit_csv(
    results: &[(SimulationPlan, SignalCurve)],
    dir: &Path,
) -> Result<Manifest, OutputError> {
    if results.is_empty() {
        return Err(OutputError::Empty("no curves"));
    }
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut manifest = Manifest::default();
    for (i, (plan, curve)) in results.iter().enumerate() {
        let file = format!("plan_{i:03}.csv");
        let path = dir.join(&file);
        fs::write(&path, curve_to_csv(curve)).map_err(io_err(&path))?;
        let mut params = vec![("table".to_owned(), "signal_curve".to_owned())];
        params.extend(plan_parameters(plan));
        manifest.entries.push(ManifestEntry { file, params });
    }
    manifest.write(dir)?;
    Ok(manifest)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotStyle {
    /// Log-scale `1 - r` and linear robustness per pulse count.
    CoherencePanels,
    /// Spectral area against `s` (power laws) or `gamma` (structured).
    SpectralAreas,
}

impl PlotStyle {
    fn file_stem(self) -> &'static str {
        match self {
            PlotStyle::CoherencePanels => "coherence_panels",
            PlotStyle::SpectralAreas => "spectral_areas",
        }
    }
}

/// Write a gnuplot script for the manifest's data files into `dir`.
pub fn emit_plot_script(
    manifest: &Manifest,
    dir: &Path,
    style: PlotStyle,
) -> Result<PathBuf, OutputError> {
    manifest.check_files(dir)?;
    let script = match style {
        PlotStyle::CoherencePanels => coherence_script(manifest)?,
        PlotStyle::SpectralAreas => area_script(manifest)?,
    };
    let path = dir.join(format!("{}.gp", style.file_stem()));
    fs::write(&path, script).map_err(io_err(&path))?;
    Ok(path)
}

fn curve_label(e: &ManifestEntry) -> String {
    if let Some(s) = e.param("spectral.s") {
        format!("{} s={s}", e.param("spectral.kind").unwrap_or(""))
    } else if let Some(g) = e.param("spectral.gamma") {
        format!("gamma={g}")
    } else {
        e.file.clone()
    }
}

fn coherence_script(manifest: &Manifest) -> Result<String, OutputError> {
    // One panel row per (sequence kind, pulse count), curves overlaid.
    let mut panels: Vec<(String, Vec<&ManifestEntry>)> = Vec::new();
    for e in &manifest.entries {
        if e.param("table") != Some("signal_curve") {
            continue;
        }
        let key = format!(
            "{} n={}",
            e.param("sequence.kind").unwrap_or("?"),
            e.param("sequence.n").unwrap_or("?")
        );
        match panels.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(e),
            None => panels.push((key, vec![e])),
        }
    }
    if panels.is_empty() {
        return Err(OutputError::Empty("manifest has no signal curves"));
    }

    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script: coherence panels");
    let _ = writeln!(s, "set datafile separator \",\"");
    let _ = writeln!(s, "set terminal pngcairo size 1200,{}", 360 * panels.len());
    let _ = writeln!(s, "set output \"coherence_panels.png\"");
    let _ = writeln!(s, "set multiplot layout {},2", panels.len());
    let _ = writeln!(s, "set xlabel \"tau\"");
    for (i, (title, entries)) in panels.iter().enumerate() {
        let _ = writeln!(s, "\n# panel {}: {title}", i + 1);
        let _ = writeln!(s, "set title \"{title}\"");
        let _ = writeln!(s, "set logscale y");
        let _ = writeln!(s, "set ylabel \"1 - r\"");
        let mut parts = Vec::new();
        for e in entries {
            let label = curve_label(e);
            parts.push(format!(
                "\"{}\" using \"tau\":\"one_minus_r_ideal\" with lines title \"{label} ideal\"",
                e.file
            ));
            parts.push(format!(
                "\"{}\" using \"tau\":\"one_minus_r_pert_mean\":\"r_pert_stderr\" with yerrorbars title \"{label} jittered\"",
                e.file
            ));
        }
        let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
        let _ = writeln!(s, "unset logscale y");
        let _ = writeln!(s, "set ylabel \"R_n\"");
        let parts: Vec<String> = entries
            .iter()
            .map(|e| {
                format!(
                    "\"{}\" using \"tau\":\"robustness\" with linespoints title \"{}\"",
                    e.file,
                    curve_label(e)
                )
            })
            .collect();
        let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
    }
    let _ = writeln!(s, "\nunset multiplot");
    Ok(s)
}

fn area_script(manifest: &Manifest) -> Result<String, OutputError> {
    let tables: Vec<&ManifestEntry> = manifest
        .entries
        .iter()
        .filter(|e| matches!(e.param("table"), Some("power_areas" | "structured_areas")))
        .collect();
    if tables.is_empty() {
        return Err(OutputError::Empty("manifest has no area tables"));
    }
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script: spectral areas");
    let _ = writeln!(s, "set datafile separator \",\"");
    let _ = writeln!(s, "set terminal pngcairo size {},420", 560 * tables.len());
    let _ = writeln!(s, "set output \"spectral_areas.png\"");
    let _ = writeln!(s, "set multiplot layout 1,{}", tables.len());
    let _ = writeln!(s, "set ylabel \"area\"");
    for (i, e) in tables.iter().enumerate() {
        let _ = writeln!(s, "\n# panel {}", i + 1);
        if e.param("table") == Some("power_areas") {
            let _ = writeln!(s, "unset logscale x");
            let _ = writeln!(s, "set logscale y");
            let _ = writeln!(s, "set xlabel \"s\"");
            let _ = writeln!(
                s,
                "plot \"{0}\" using \"s\":\"area_sharp\" with lines title \"sharp cutoff\", \\\n     \"{0}\" using \"s\":\"area_exp\" with lines dashtype 2 title \"exponential cutoff\"",
                e.file
            );
        } else {
            let _ = writeln!(s, "set logscale xy");
            let _ = writeln!(s, "set xlabel \"gamma\"");
            let _ = writeln!(
                s,
                "plot \"{}\" using \"gamma\":\"area\" with linespoints title \"structured\"",
                e.file
            );
        }
    }
    let _ = writeln!(s, "\nunset multiplot");
    Ok(s)
}

/// Areas under both power-law densities for each exponent in `s_values`.
pub fn power_area_rows(
    alpha: f64,
    s_values: &[f64],
    q: &QuadratureSettings,
) -> Result<Vec<[f64; 4]>, crate::Error> {
    s_values
        .iter()
        .map(|&s| {
            let sharp = spectral_area(&SpectralDensity::power_law_sharp(alpha, s)?, q)?;
            let exp = spectral_area(&SpectralDensity::power_law_exponential(alpha, s)?, q)?;
            Ok([s, sharp, exp, exp / sharp])
        })
        .collect()
}

/// Area under the structured density for each damping ratio.
pub fn structured_area_rows(
    alpha: f64,
    gamma_values: &[f64],
    q: &QuadratureSettings,
) -> Result<Vec<[f64; 2]>, crate::Error> {
    gamma_values
        .iter()
        .map(|&g| {
            Ok([
                g,
                spectral_area(&SpectralDensity::structured(alpha, g)?, q)?,
            ])
        })
        .collect()
}

fn rows_to_csv<const N: usize>(header: &str, rows: &[[f64; N]]) -> String {
    let mut out = format!("{header}\n");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| format_sci(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Write `areas_power.csv` and/or `areas_structured.csv` plus a manifest.
pub fn emit_area_tables(
    dir: &Path,
    alpha: f64,
    s_values: &[f64],
    gamma_values: &[f64],
    q: &QuadratureSettings,
) -> Result<Manifest, OutputError> {
    if s_values.is_empty() && gamma_values.is_empty() {
        return Err(OutputError::Empty("no s or gamma values"));
    }
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut manifest = Manifest::default();
    let alpha_param = ("spectral.alpha".to_owned(), alpha.to_string());
    if !s_values.is_empty() {
        let rows = power_area_rows(alpha, s_values, q)?;
        let file = "areas_power.csv".to_owned();
        let path = dir.join(&file);
        fs::write(&path, rows_to_csv(POWER_AREA_HEADER, &rows)).map_err(io_err(&path))?;
        manifest.entries.push(ManifestEntry {
            file,
            params: vec![("table".into(), "power_areas".into()), alpha_param.clone()],
        });
    }
    if !gamma_values.is_empty() {
        let rows = structured_area_rows(alpha, gamma_values, q)?;
        let file = "areas_structured.csv".to_owned();
        let path = dir.join(&file);
        fs::write(&path, rows_to_csv(STRUCTURED_AREA_HEADER, &rows)).map_err(io_err(&path))?;
        manifest.entries.push(ManifestEntry {
            file,
            params: vec![("table".into(), "structured_areas".into()), alpha_param],
        });
    }
    manifest.write(dir)?;
    Ok(manifest)
}
