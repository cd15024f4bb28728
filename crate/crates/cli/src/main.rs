//! Command-line front end for the honeycomb-model engine.
//!
//! Exit codes: 0 success, 1 check failure (oracle suite), 2 usage or
//! configuration error. Output files are written only after the
//! configuration has validated, and their bytes depend only on the
//! scientific configuration — never on the worker count.

mod commands;
mod output;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Parse a real number given as a decimal or a fraction like `1/3`.
fn parse_real(s: &str) -> Result<f64, String> {
    let v = if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
        let d: f64 = den.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
        if d == 0.0 {
            return Err(format!("zero denominator in `{s}`"));
        }
        n / d
    } else {
        s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?
    };
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

fn parse_size_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad size `{t}`")))
        .collect()
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("window must be `lo,hi`, got `{s}`"))?;
    let lo = parse_real(a)?;
    let hi = parse_real(b)?;
    if lo >= hi {
        return Err(format!("window must satisfy lo < hi, got [{lo}, {hi}]"));
    }
    Ok((lo, hi))
}

#[derive(Parser)]
#[command(name = "kitaev", version, about = "Kitaev honeycomb model: exact ground-state quantities and mutual-information probes of the phase transition")]
struct Cli {
    /// Worker threads for sweeps (default: KITAEV_WORKERS or all cores).
    /// Results are bit-identical for any value.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CouplingArgs {
    /// x-bond coupling (decimal or fraction, e.g. 1/3)
    #[arg(long, value_parser = parse_real, default_value = "0", allow_hyphen_values = true)]
    jx: f64,
    /// y-bond coupling
    #[arg(long, value_parser = parse_real, default_value = "0", allow_hyphen_values = true)]
    jy: f64,
    /// z-bond coupling
    #[arg(long, value_parser = parse_real, default_value = "0", allow_hyphen_values = true)]
    jz: f64,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output file (stdout when omitted)
    #[arg(long, short = 'o')]
    output: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Energy gap, ground energy, and phase at one coupling point.
    Spectrum {
        #[command(flatten)]
        couplings: CouplingArgs,
        /// Unit cells per direction (2L² sites)
        #[arg(long = "size", short = 'L', visible_alias = "L")]
        size: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: commands::TextFormat,
        #[command(flatten)]
        out: OutputArgs,
    },

    /// Sweep a quantity along the line Jx = Jy = (1−Jz)/2.
    Scan {
        /// mi2 = two-site MI, dmi2 = its derivative, mi4 = two-bond MI
        #[arg(long, value_enum)]
        quantity: commands::QuantityArg,
        #[arg(long = "size", short = 'L', visible_alias = "L")]
        size: usize,
        /// Number of jz samples (uniform grid)
        #[arg(long, default_value_t = 1001)]
        points: usize,
        #[arg(long, value_parser = parse_real, default_value = "0")]
        jz_min: f64,
        #[arg(long, value_parser = parse_real, default_value = "1")]
        jz_max: f64,
        /// Momentum points with E below this are dropped (and counted)
        #[arg(long, value_parser = parse_real, default_value = "1e-12")]
        e_floor: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: commands::TableFormat,
        #[command(flatten)]
        out: OutputArgs,
    },

    /// Fit log2|peak − A| = slope·L + intercept over a list of sizes.
    Fit {
        /// Quantity whose sweep peaks are fitted (ignored with --input)
        #[arg(long, value_enum, default_value = "dmi2")]
        quantity: commands::QuantityArg,
        /// Comma-separated sizes, e.g. 40,50,60,70
        #[arg(long, value_parser = parse_size_list, conflicts_with = "input")]
        sizes: Option<Vec<usize>>,
        /// Read (L, peak) rows from a CSV file instead of scanning
        #[arg(long)]
        input: Option<std::path::PathBuf>,
        /// Jz samples per sweep
        #[arg(long, default_value_t = 1001)]
        points: usize,
        /// Restrict the peak search to a jz window `lo,hi`
        #[arg(long, value_parser = parse_window)]
        window: Option<(f64, f64)>,
        /// Fix the asymptote instead of searching for it
        #[arg(long, value_parser = parse_real)]
        asymptote: Option<f64>,
        #[arg(long, value_parser = parse_real, default_value = "1e-12")]
        e_floor: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: commands::TextFormat,
        #[command(flatten)]
        out: OutputArgs,
    },

    /// Run the 8-site exact-diagonalization check suite.
    OracleCheck {
        /// Number of sampled coupling points
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        report: commands::TextFormat,
        /// Run against a deliberately corrupted link table; the suite must
        /// fail (exit 1), proving the checks can catch a broken cluster.
        #[arg(long)]
        negative_control: bool,
        #[command(flatten)]
        out: OutputArgs,
    },

    /// Rasterize the simplex Jx + Jy + Jz = 1 with gap and phase per cell.
    PhaseDiagram {
        /// Barycentric subdivisions per edge
        #[arg(long)]
        resolution: usize,
        #[arg(long = "size", short = 'L', visible_alias = "L")]
        size: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: commands::TableFormat,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    let workers = cli.workers.or_else(|| {
        std::env::var("KITAEV_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = workers {
        if n == 0 {
            eprintln!("error: worker count must be positive");
            std::process::exit(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: could not configure worker pool: {e}");
            std::process::exit(2);
        }
    }

    let code = match cli.command {
        Command::Spectrum {
            couplings,
            size,
            format,
            out,
        } => commands::spectrum(&couplings, size, format, out.output.as_deref()),
        Command::Scan {
            quantity,
            size,
            points,
            jz_min,
            jz_max,
            e_floor,
            format,
            out,
        } => commands::scan(
            quantity,
            size,
            points,
            jz_min,
            jz_max,
            e_floor,
            format,
            out.output.as_deref(),
        ),
        Command::Fit {
            quantity,
            sizes,
            input,
            points,
            window,
            asymptote,
            e_floor,
            format,
            out,
        } => commands::fit(
            quantity,
            sizes,
            input.as_deref(),
            points,
            window,
            asymptote,
            e_floor,
            format,
            out.output.as_deref(),
        ),
        Command::OracleCheck {
            samples,
            seed,
            report,
            negative_control,
            out,
        } => commands::oracle_check(samples, seed, report, negative_control, out.output.as_deref()),
        Command::PhaseDiagram {
            resolution,
            size,
            format,
            out,
        } => commands::phase_diagram(resolution, size, format, out.output.as_deref()),
    };
    std::process::exit(code);
}

impl CouplingArgs {
    fn build(&self) -> Result<kitaev::spectrum::Couplings, kitaev::Error> {
        kitaev::spectrum::Couplings::new(self.jx, self.jy, self.jz)
    }
}
