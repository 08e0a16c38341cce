//! `skinrule` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or format error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::dataset::{load_image, load_pair_records, pair_dataset, read_records_csv, write_records_csv, MaskMode};
use crate::error::Error;
use crate::eval::{count_pairs, render_mask, render_mask_lut, save_mask, EvalResult};
use crate::features::{build_histogram, ClassFilter, FeatureKind, DEFAULT_BINS};
use crate::lut::build_lut;
use crate::ranges::channel_ranges;
use crate::report::{compare, Rate};
use crate::rules::RuleKind;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "skinrule", version, about = "Explicit RGB skin-colour rules: classify, evaluate, compare")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MaskModeArg {
    Strict,
    Lenient,
}

impl From<MaskModeArg> for MaskMode {
    fn from(m: MaskModeArg) -> Self {
        match m {
            MaskModeArg::Strict => MaskMode::Strict,
            MaskModeArg::Lenient => MaskMode::Lenient,
        }
    }
}

fn parse_rule(s: &str) -> std::result::Result<RuleKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_named_dataset(s: &str) -> std::result::Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, dir)) if !name.is_empty() && !dir.is_empty() => Ok((name.to_owned(), PathBuf::from(dir))),
        _ => Err(format!("expected NAME=DIR, got `{s}`")),
    }
}

fn parse_feature(s: &str) -> std::result::Result<FeatureKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_class(s: &str) -> std::result::Result<ClassFilter, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a white-on-black skin mask for one image.
    Classify {
        #[arg(long, value_parser = parse_rule)]
        rule: RuleKind,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Classify through a precomputed 2^24 lookup table.
        #[arg(long)]
        lut: bool,
    },
    /// TP/FP of one rule over an images/ + masks/ dataset.
    Evaluate {
        #[arg(long, value_parser = parse_rule)]
        rule: RuleKind,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, value_enum, default_value = "strict")]
        mask_mode: MaskModeArg,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Comparison table of several rules over several named datasets.
    Compare {
        /// Comma-separated rule names.
        #[arg(long, value_delimiter = ',', value_parser = parse_rule, required = true)]
        rules: Vec<RuleKind>,
        /// Comma-separated NAME=DIR entries.
        #[arg(long, value_delimiter = ',', value_parser = parse_named_dataset, required = true)]
        datasets: Vec<(String, PathBuf)>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Flatten every image/mask pair into an R,G,B,label CSV.
    Transform {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Histogram of a ratio feature over a records CSV.
    Histogram {
        #[arg(long)]
        records: PathBuf,
        #[arg(long, value_parser = parse_feature)]
        feature: FeatureKind,
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
        #[arg(long, allow_negative_numbers = true)]
        lo: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        hi: Option<f64>,
        #[arg(long, value_parser = parse_class, default_value = "skin")]
        class: ClassFilter,
        #[arg(long)]
        output: PathBuf,
    },
    /// Exhaustive per-channel extent of a rule's skin region.
    Ranges {
        #[arg(long, value_parser = parse_rule)]
        rule: RuleKind,
    },
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    }
}

enum CliError {
    Usage(String),
    Data(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Data(e)
    }
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::Data(Error::io("<stdout>", e))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<(), CliError> {
    match command {
        Command::Classify { rule, input, output, lut } => {
            let image = load_image(&input)?;
            let mask = if lut {
                render_mask_lut(&build_lut(rule), &image)
            } else {
                render_mask(rule, &image)
            };
            save_mask(&mask, &output)?;
            writeln!(
                out,
                "{}: {} of {} pixels skin ({rule}) -> {}",
                input.display(),
                mask.skin_count(),
                mask.labels().len(),
                output.display()
            )
            .map_err(stdout_err)?;
        }
        Command::Evaluate { rule, dataset, mask_mode, format } => {
            let paired = pair_dataset(&dataset)?;
            warn_all(err, &paired.warnings);
            let totals = count_pairs(rule, &paired.pairs, mask_mode.into())?;
            if totals.non_canonical > 0 {
                let _ = writeln!(err, "warning: {} non-canonical mask pixels thresholded", totals.non_canonical);
            }
            let result = EvalResult::from_counts(totals.confusion)?;
            let text = match format {
                OutputFormat::Text => evaluation_text(rule, &dataset, &result),
                OutputFormat::Csv => evaluation_csv(rule, &dataset, &result),
            };
            out.write_all(text.as_bytes()).map_err(stdout_err)?;
        }
        Command::Compare { rules, datasets, format } => {
            let table = compare(&rules, &datasets, MaskMode::Strict)?;
            warn_all(err, &table.warnings);
            let text = match format {
                OutputFormat::Text => table.render_text(),
                OutputFormat::Csv => table.render_csv(),
            };
            out.write_all(text.as_bytes()).map_err(stdout_err)?;
        }
        Command::Transform { dataset, output } => {
            let paired = pair_dataset(&dataset)?;
            warn_all(err, &paired.warnings);
            let mut records = Vec::new();
            for pair in &paired.pairs {
                records.extend(load_pair_records(pair, MaskMode::Strict)?.0);
            }
            write_records_csv(&records, &output)?;
            let skin = records.iter().filter(|r| r.label.is_skin()).count();
            writeln!(
                out,
                "{} records ({skin} skin) from {} pairs -> {}",
                records.len(),
                paired.pairs.len(),
                output.display()
            )
            .map_err(stdout_err)?;
        }
        Command::Histogram { records, feature, bins, lo, hi, class, output } => {
            let (default_lo, default_hi) = feature.default_range();
            let lo = lo.unwrap_or(default_lo);
            let hi = hi.unwrap_or(default_hi);
            if bins == 0 || lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
                return Err(CliError::Usage(format!("--bins must be >= 1 and --lo < --hi (got {bins}, {lo}, {hi})")));
            }
            let recs = read_records_csv(&records)?;
            let hist = build_histogram(&recs, feature, bins, lo, hi, class)?;
            fs::write(&output, hist.to_csv()).map_err(|e| Error::io(&output, e))?;
            writeln!(out, "{} values binned -> {}", hist.total(), output.display()).map_err(stdout_err)?;
        }
        Command::Ranges { rule } => {
            writeln!(out, "{}", channel_ranges(rule)).map_err(stdout_err)?;
        }
    }
    Ok(())
}

fn warn_all(err: &mut dyn Write, warnings: &[String]) {
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
}

fn evaluation_text(rule: RuleKind, dataset: &std::path::Path, r: &EvalResult) -> String {
    let (tp, fp) = <(Rate, Rate)>::from(r);
    let c = r.counts;
    format!(
        "rule: {rule}\ndataset: {}\nN_pos: {}\nN_neg: {}\nI_pos: {}\nI_neg: {}\nTP: {tp}\nFP: {fp}\n",
        dataset.display(),
        c.n_pos,
        c.n_neg,
        c.i_pos,
        c.i_neg
    )
}

fn evaluation_csv(rule: RuleKind, dataset: &std::path::Path, r: &EvalResult) -> String {
    let (tp, fp) = <(Rate, Rate)>::from(r);
    let c = r.counts;
    format!(
        "rule,dataset,tp_pct,fp_pct,n_pos,n_neg,i_pos,i_neg\n{rule},{},{tp},{fp},{},{},{},{}\n",
        dataset.display(),
        c.n_pos,
        c.n_neg,
        c.i_pos,
        c.i_neg
    )
}

/// Shorthand for callers that only need the exit code and captured output.
pub fn run_captured<I, T>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

