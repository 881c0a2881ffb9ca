//! Command-line front end.
//!
//! Exit codes: 0 success, 1 data error, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::class::LesionClass;
use crate::color_constancy::NormOrder;
use crate::diagnosis::Strategy;
use crate::error::Error;
use crate::evaluation::AbsentMode;
use crate::pipeline::{self, PreprocessOptions, StageOrder};
use crate::synth::SynthConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Size {
    pub width: u32,
    pub height: u32,
}

fn parse_size(s: &str) -> Result<Size, String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got {s:?}"))?;
    let dim = |v: &str| match v.trim().parse::<u32>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("invalid dimension {v:?} in {s:?}")),
    };
    Ok(Size { width: dim(w)?, height: dim(h)? })
}

fn parse_p(s: &str) -> Result<NormOrder, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(f) if (0.0..=1.0).contains(&f) => Ok(f),
        _ => Err(format!("expected a fraction in [0, 1], got {s:?}")),
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    CorrectFirst,
    ResizeFirst,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    PixelMajority,
    FreqPriority,
    MalignancyPriority,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::PixelMajority => Strategy::PixelMajority,
            StrategyArg::FreqPriority => Strategy::FrequencyPriority,
            StrategyArg::MalignancyPriority => Strategy::MalignancyPriority,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AbsentArg {
    Exclude,
    Zero,
}

#[derive(Debug, Parser)]
#[command(name = "lesiondx", version, about = "Dermoscopic lesion segmentation post-processing and evaluation")]
struct Cli {
    /// Worker threads for per-file stages (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Color-correct (Shades of Gray) and resize every image in a directory.
    Preprocess {
        input: PathBuf,
        output: PathBuf,
        /// Minkowski norm order, or "inf".
        #[arg(long, default_value = "6", value_parser = parse_p)]
        p: NormOrder,
        #[arg(long, default_value = "500x375", value_parser = parse_size)]
        size: Size,
        #[arg(long, value_enum, default_value = "correct-first")]
        order: OrderArg,
    },
    /// Build indexed ground-truth masks from binary lesion masks and labels.
    MakeGt {
        manifest: PathBuf,
        masks: PathBuf,
        output: PathBuf,
        #[arg(long, default_value_t = crate::mask_io::DEFAULT_THRESHOLD)]
        threshold: u8,
    },
    /// Turn indexed label masks into a challenge-format submission CSV.
    Diagnose {
        masks: PathBuf,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Score a submission CSV against ground truth.
    Evaluate {
        predictions: PathBuf,
        truth: PathBuf,
        /// JSON report path; <stem>.txt and <stem>_per_class.csv are written alongside.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "exclude")]
        absent: AbsentArg,
    },
    /// Count single / empty / multiple detections in a mask directory.
    Stats { masks: PathBuf },
    /// Generate a seeded synthetic dataset.
    Synth {
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        output: PathBuf,
        #[arg(long, default_value = "128x96", value_parser = parse_size)]
        size: Size,
        #[arg(long, default_value = "0.15", value_parser = parse_fraction)]
        empty_fraction: f64,
        #[arg(long, default_value = "0.15", value_parser = parse_fraction)]
        two_class_fraction: f64,
    },
}

/// Parses `args` (including the program name) and runs the command, writing
/// normal output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_DATA;
        }
    };
    pool.install(|| match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    })
}

fn execute(command: Command, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32, Error> {
    match command {
        Command::Preprocess { input, output, p, size, order } => {
            let opts = PreprocessOptions {
                p,
                width: size.width,
                height: size.height,
                order: match order {
                    OrderArg::CorrectFirst => StageOrder::CorrectFirst,
                    OrderArg::ResizeFirst => StageOrder::ResizeFirst,
                },
            };
            let summary = pipeline::preprocess_dir(&input, &output, &opts)?;
            for (path, e) in &summary.failed {
                writeln!(err, "error: {}: {e}", path.display())?;
            }
            let total = summary.written.len() + summary.failed.len();
            writeln!(out, "preprocessed {} of {} images ({} failed)", summary.written.len(), total, summary.failed.len())?;
            Ok(if summary.failed.is_empty() { EXIT_OK } else { EXIT_DATA })
        }
        Command::MakeGt { manifest, masks, output, threshold } => {
            let n = pipeline::make_ground_truth(&manifest, &masks, &output, threshold)?;
            writeln!(out, "wrote {n} ground-truth masks to {}", output.display())?;
            Ok(EXIT_OK)
        }
        Command::Diagnose { masks, strategy, output } => {
            let strategy = Strategy::from(strategy);
            let rows = pipeline::diagnose_dir(&masks, strategy)?;
            pipeline::write_submission_file(&output, &rows)?;
            writeln!(out, "diagnosed {} masks with {strategy}", rows.len())?;
            Ok(EXIT_OK)
        }
        Command::Evaluate { predictions, truth, report, absent } => {
            let absent = match absent {
                AbsentArg::Exclude => AbsentMode::Exclude,
                AbsentArg::Zero => AbsentMode::Zero,
            };
            let result = pipeline::evaluate_files(&predictions, &truth, absent)?;
            if let Some(path) = report {
                pipeline::write_report(&path, &result)?;
            }
            writeln!(out, "{:.4}", result.normalized_multiclass_accuracy)?;
            Ok(EXIT_OK)
        }
        Command::Stats { masks } => {
            let (census, totals) = pipeline::stats_dir(&masks)?;
            writeln!(out, "single={} none={} multiple={}", census.single, census.none, census.multiple)?;
            for class in LesionClass::ALL {
                writeln!(out, "{}={}", class.code(), totals.count(class))?;
            }
            Ok(EXIT_OK)
        }
        Command::Synth { count, seed, output, size, empty_fraction, two_class_fraction } => {
            let cfg = SynthConfig {
                count: count as usize,
                seed,
                width: size.width,
                height: size.height,
                empty_fraction,
                two_class_fraction,
            };
            let samples = pipeline::synth_to_dir(&cfg, &output)?;
            let (single, empty, two) = cfg.split();
            writeln!(
                out,
                "generated {} samples (single={single} empty={empty} two-class={two}) in {}",
                samples.len(),
                output.display()
            )?;
            Ok(EXIT_OK)
        }
    }
}
