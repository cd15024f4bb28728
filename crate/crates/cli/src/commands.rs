//! Command implementations. Each returns the process exit code.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use kitaev::ed::checks::{run_oracle_checks, OracleReport};
use kitaev::ed::ClusterLinks;
use kitaev::scan::{
    derivative, find_peak, find_peak_in_window, phase_diagram_raster, scaling_fit,
    scan_two_bond_mi, scan_two_site_mi, FitMode, Quantity, ScalingFit, ScanConfig, ScanSeries,
};
use kitaev::spectrum::{classify_phase, energy_gap, ground_energy, LatticeSize};
use kitaev::Result;

use crate::output::{csv_header, sink, write_json};
use crate::{CouplingArgs, VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantityArg {
    Mi2,
    #[value(name = "dmi2")]
    DMi2,
    Mi4,
}

impl QuantityArg {
    fn tag(self) -> Quantity {
        match self {
            QuantityArg::Mi2 => Quantity::Mi2,
            QuantityArg::DMi2 => Quantity::DMi2,
            QuantityArg::Mi4 => Quantity::Mi4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

fn usage_error(e: impl std::fmt::Display) -> i32 {
    eprintln!("error: {e}");
    2
}

fn run_series(quantity: QuantityArg, cfg: &ScanConfig) -> Result<ScanSeries> {
    match quantity {
        QuantityArg::Mi2 => scan_two_site_mi(cfg),
        QuantityArg::DMi2 => derivative(&scan_two_site_mi(cfg)?),
        QuantityArg::Mi4 => scan_two_bond_mi(cfg),
    }
}

// ---------------------------------------------------------------- spectrum

#[derive(Serialize)]
struct SpectrumReport {
    version: &'static str,
    command: &'static str,
    jx: f64,
    jy: f64,
    jz: f64,
    l: usize,
    gap: f64,
    ground_energy: f64,
    phase: String,
}

pub fn spectrum(
    couplings: &CouplingArgs,
    size: usize,
    format: TextFormat,
    out: Option<&Path>,
) -> i32 {
    let j = match couplings.build() {
        Ok(j) => j,
        Err(e) => return usage_error(e),
    };
    let l = match LatticeSize::new(size) {
        Ok(l) => l,
        Err(e) => return usage_error(e),
    };
    let phase = match classify_phase(&j) {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    let report = SpectrumReport {
        version: VERSION,
        command: "spectrum",
        jx: j.jx,
        jy: j.jy,
        jz: j.jz,
        l: l.get(),
        gap: energy_gap(&j, l),
        ground_energy: ground_energy(&j, l),
        phase: phase.to_string(),
    };
    let mut w = match sink(out) {
        Ok(w) => w,
        Err(e) => return usage_error(e),
    };
    let res = match format {
        TextFormat::Json => write_json(&mut w, &report),
        TextFormat::Text => (|| {
            writeln!(w, "# kitaev {VERSION}")?;
            writeln!(
                w,
                "couplings=({}, {}, {}) L={}",
                report.jx, report.jy, report.jz, report.l
            )?;
            writeln!(w, "gap={}", report.gap)?;
            writeln!(w, "ground_energy={}", report.ground_energy)?;
            writeln!(w, "phase={}", report.phase)
        })(),
    };
    match res {
        Ok(()) => 0,
        Err(e) => usage_error(e),
    }
}

// -------------------------------------------------------------------- scan

#[derive(Serialize)]
struct ScanReport<'a> {
    version: &'static str,
    command: &'static str,
    quantity: String,
    l: usize,
    jz_min: f64,
    jz_max: f64,
    points: usize,
    e_floor: f64,
    series: &'a ScanSeries,
}

#[allow(clippy::too_many_arguments)]
pub fn scan(
    quantity: QuantityArg,
    size: usize,
    points: usize,
    jz_min: f64,
    jz_max: f64,
    e_floor: f64,
    format: TableFormat,
    out: Option<&Path>,
) -> i32 {
    let l = match LatticeSize::new(size) {
        Ok(l) => l,
        Err(e) => return usage_error(e),
    };
    let cfg = match ScanConfig::new(jz_min, jz_max, points, l, e_floor) {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    let series = match run_series(quantity, &cfg) {
        Ok(s) => s,
        Err(e) => return usage_error(e),
    };
    let mut w = match sink(out) {
        Ok(w) => w,
        Err(e) => return usage_error(e),
    };
    let res = match format {
        TableFormat::Json => write_json(
            &mut w,
            &ScanReport {
                version: VERSION,
                command: "scan",
                quantity: quantity.tag().to_string(),
                l: l.get(),
                jz_min,
                jz_max,
                points,
                e_floor,
                series: &series,
            },
        ),
        TableFormat::Csv => (|| {
            csv_header(
                &mut *w,
                "scan",
                &[
                    ("quantity", quantity.tag().to_string()),
                    ("L", l.get().to_string()),
                    ("jz_min", jz_min.to_string()),
                    ("jz_max", jz_max.to_string()),
                    ("points", points.to_string()),
                    ("e_floor", e_floor.to_string()),
                ],
            )?;
            writeln!(w, "jz,value,floored_points")?;
            for p in &series.points {
                writeln!(w, "{},{},{}", p.jz, p.value, p.floored_points)?;
            }
            Ok(())
        })(),
    };
    match res {
        Ok(()) => 0,
        Err(e) => usage_error(e),
    }
}

// --------------------------------------------------------------------- fit

#[derive(Serialize)]
struct FitReport {
    version: &'static str,
    command: &'static str,
    quantity: Option<String>,
    sizes: Vec<usize>,
    peaks: Vec<f64>,
    peak_locations: Option<Vec<f64>>,
    fit: ScalingFit,
}

fn read_peaks_file(path: &Path) -> std::io::Result<(Vec<usize>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)?;
    let mut sizes = Vec::new();
    let mut peaks = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || {
            std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("line {}: expected `L,peak`, got `{line}`", lineno + 1),
            )
        };
        let (a, b) = line.split_once(',').ok_or_else(bad)?;
        sizes.push(a.trim().parse::<usize>().map_err(|_| bad())?);
        peaks.push(b.trim().parse::<f64>().map_err(|_| bad())?);
    }
    Ok((sizes, peaks))
}

#[allow(clippy::too_many_arguments)]
pub fn fit(
    quantity: QuantityArg,
    sizes: Option<Vec<usize>>,
    input: Option<&Path>,
    points: usize,
    window: Option<(f64, f64)>,
    asymptote: Option<f64>,
    e_floor: f64,
    format: TextFormat,
    out: Option<&Path>,
) -> i32 {
    let (raw_sizes, peaks, locations, tag) = if let Some(path) = input {
        match read_peaks_file(path) {
            Ok((s, p)) => (s, p, None, None),
            Err(e) => return usage_error(e),
        }
    } else {
        let Some(raw_sizes) = sizes else {
            return usage_error("either --sizes or --input is required");
        };
        let mut peaks = Vec::with_capacity(raw_sizes.len());
        let mut locs = Vec::with_capacity(raw_sizes.len());
        for &s in &raw_sizes {
            let l = match LatticeSize::new(s) {
                Ok(l) => l,
                Err(e) => return usage_error(e),
            };
            let cfg = match ScanConfig::new(0.0, 1.0, points, l, e_floor) {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            let series = match run_series(quantity, &cfg) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            let peak = match window {
                Some((lo, hi)) => find_peak_in_window(&series, lo, hi),
                None => find_peak(&series),
            };
            match peak {
                Ok((jz, v)) => {
                    locs.push(jz);
                    peaks.push(v);
                }
                Err(e) => return usage_error(e),
            }
        }
        (
            raw_sizes,
            peaks,
            Some(locs),
            Some(quantity.tag().to_string()),
        )
    };

    let lattice_sizes: Vec<LatticeSize> = match raw_sizes
        .iter()
        .map(|&s| LatticeSize::new(s))
        .collect::<Result<_>>()
    {
        Ok(v) => v,
        Err(e) => return usage_error(e),
    };
    let mode = match asymptote {
        Some(a) => FitMode::FixedAsymptote(a),
        None => FitMode::FitAsymptote,
    };
    let fit = match scaling_fit(&lattice_sizes, &peaks, mode) {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    let report = FitReport {
        version: VERSION,
        command: "fit",
        quantity: tag,
        sizes: raw_sizes,
        peaks,
        peak_locations: locations,
        fit,
    };
    let mut w = match sink(out) {
        Ok(w) => w,
        Err(e) => return usage_error(e),
    };
    let res = match format {
        TextFormat::Json => write_json(&mut w, &report),
        TextFormat::Text => (|| {
            writeln!(w, "# kitaev {VERSION}")?;
            for (i, s) in report.sizes.iter().enumerate() {
                match &report.peak_locations {
                    Some(locs) => writeln!(w, "# L={s} peak={} at jz={}", report.peaks[i], locs[i])?,
                    None => writeln!(w, "# L={s} peak={}", report.peaks[i])?,
                }
            }
            writeln!(w, "asymptote={}", report.fit.asymptote)?;
            writeln!(w, "slope={}", report.fit.slope)?;
            writeln!(w, "intercept={}", report.fit.intercept)?;
            writeln!(w, "residual={}", report.fit.residual)?;
            if let Some(warn) = &report.fit.warning {
                writeln!(w, "warning={warn}")?;
            }
            Ok(())
        })(),
    };
    match res {
        Ok(()) => 0,
        Err(e) => usage_error(e),
    }
}

// ------------------------------------------------------------ oracle-check

#[derive(Serialize)]
struct OracleCheckReport {
    version: &'static str,
    command: &'static str,
    samples: usize,
    seed: u64,
    negative_control: bool,
    all_passed: bool,
    report: OracleReport,
}

pub fn oracle_check(
    samples: usize,
    seed: u64,
    format: TextFormat,
    negative_control: bool,
    out: Option<&Path>,
) -> i32 {
    if samples == 0 {
        return usage_error("need at least one sample");
    }
    let links = if negative_control {
        ClusterLinks::corrupted()
    } else {
        ClusterLinks::torus_2x2()
    };
    let report = run_oracle_checks(&links, samples, seed);
    let all_passed = report.all_passed();
    let full = OracleCheckReport {
        version: VERSION,
        command: "oracle-check",
        samples,
        seed,
        negative_control,
        all_passed,
        report,
    };
    let mut w = match sink(out) {
        Ok(w) => w,
        Err(e) => return usage_error(e),
    };
    let res = match format {
        TextFormat::Json => write_json(&mut w, &full),
        TextFormat::Text => (|| {
            writeln!(w, "# kitaev {VERSION}")?;
            if negative_control {
                writeln!(w, "# negative control: corrupted link table, failures expected")?;
            }
            for c in &full.report.checks {
                writeln!(
                    w,
                    "{} {:<28} {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                )?;
            }
            writeln!(w, "result: {}", if all_passed { "PASS" } else { "FAIL" })
        })(),
    };
    if let Err(e) = res {
        return usage_error(e);
    }
    if all_passed {
        0
    } else {
        1
    }
}

// ----------------------------------------------------------- phase-diagram

#[derive(Serialize)]
struct PhaseDiagramReport {
    version: &'static str,
    command: &'static str,
    resolution: usize,
    l: usize,
    cells: Vec<kitaev::scan::PhaseCell>,
}

pub fn phase_diagram(
    resolution: usize,
    size: usize,
    format: TableFormat,
    out: Option<&Path>,
) -> i32 {
    let l = match LatticeSize::new(size) {
        Ok(l) => l,
        Err(e) => return usage_error(e),
    };
    let cells = match phase_diagram_raster(resolution, l) {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    let mut w = match sink(out) {
        Ok(w) => w,
        Err(e) => return usage_error(e),
    };
    let res = match format {
        TableFormat::Json => write_json(
            &mut w,
            &PhaseDiagramReport {
                version: VERSION,
                command: "phase-diagram",
                resolution,
                l: l.get(),
                cells,
            },
        ),
        TableFormat::Csv => (|| {
            csv_header(
                &mut *w,
                "phase-diagram",
                &[
                    ("resolution", resolution.to_string()),
                    ("L", l.get().to_string()),
                ],
            )?;
            writeln!(w, "jx,jy,jz,gap,phase")?;
            for c in &cells {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    c.couplings.jx, c.couplings.jy, c.couplings.jz, c.gap, c.phase
                )?;
            }
            Ok(())
        })(),
    };
    match res {
        Ok(()) => 0,
        Err(e) => usage_error(e),
    }
}
