//! Explicitly defined RGB skin-colour rules and the tooling to evaluate them.
//!
//! The crate is organised around four layers:
//!
//! - [`rules`]: pure per-pixel classifiers (Kovač, its rewritten form, Saleh,
//!   Swift and the RGB-ratio rule), the [`RuleLut`] accelerator and the
//!   exhaustive [`channel_ranges`] analysis.
//! - [`dataset`]: image/mask ingestion, flattening into labelled records and
//!   record CSV persistence.
//! - [`eval`] and [`report`]: TP/FP measurement, multi-dataset comparison
//!   tables and qualitative mask rendering.
//! - [`features`]: ratio features, histograms and threshold suggestions.
//!
//! ```
//! use skinrule::{classify, RgbPixel, RuleKind, SkinLabel};
//!
//! let px = RgbPixel::new(150, 100, 50);
//! assert_eq!(classify(RuleKind::RgbRatio, px), SkinLabel::Skin);
//! ```

pub mod cli;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod features;
pub mod lut;
pub mod pixel;
pub mod ranges;
pub mod report;
pub mod rules;

pub use dataset::{
    load_image, load_mask, pair_dataset, read_records_csv, transform_records, write_records_csv,
    DatasetPair, ImageBuffer, LabeledRecord, LoadedMask, MaskImage, MaskMode, PairedDataset,
};
pub use error::{Error, Result};
pub use eval::{
    count_confusion, count_pairs, evaluate_dataset, evaluate_records, render_mask, render_mask_lut,
    save_mask, ConfusionCounts, EvalResult, PairTotals,
};
pub use features::{
    build_histogram, compute_features, suggest_thresholds, ClassFilter, FeatureHistogram,
    FeatureKind, ThresholdSuggestion,
};
pub use lut::{build_lut, RuleLut};
pub use pixel::{RgbPixel, SkinLabel};
pub use ranges::{channel_ranges, ChannelRanges};
pub use report::{compare, Cell, Rate, ReportTable};
pub use rules::{
    classify, classify_kovac, classify_kovac_rewritten, classify_rgb_ratio, classify_saleh,
    classify_swift, RuleKind,
};
