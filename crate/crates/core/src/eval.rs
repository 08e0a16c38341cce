//! TP/FP measurement and qualitative mask rendering.

use std::ops::{Add, AddAssign};
use std::path::Path;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::dataset::{load_pair_records, pair_dataset, DatasetPair, ImageBuffer, LabeledRecord, MaskImage, MaskMode};
use crate::error::{Error, Result};
use crate::lut::RuleLut;
use crate::pixel::SkinLabel;
use crate::rules::{classify, RuleKind};

/// Raw confusion counts. Addition is exact, so partial counts from any
/// partition of the records sum to the same total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    /// Records labelled skin.
    pub n_pos: u64,
    /// Records labelled non-skin.
    pub n_neg: u64,
    /// Skin records detected as skin.
    pub i_pos: u64,
    /// Non-skin records detected as skin.
    pub i_neg: u64,
}

impl ConfusionCounts {
    #[inline]
    pub fn record(&mut self, truth: SkinLabel, detected: SkinLabel) {
        match truth {
            SkinLabel::Skin => {
                self.n_pos += 1;
                self.i_pos += detected.is_skin() as u64;
            }
            SkinLabel::NonSkin => {
                self.n_neg += 1;
                self.i_neg += detected.is_skin() as u64;
            }
        }
    }

    pub fn total(&self) -> u64 {
        self.n_pos + self.n_neg
    }
}

impl Add for ConfusionCounts {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        ConfusionCounts {
            n_pos: self.n_pos + o.n_pos,
            n_neg: self.n_neg + o.n_neg,
            i_pos: self.i_pos + o.i_pos,
            i_neg: self.i_neg + o.i_neg,
        }
    }
}

impl AddAssign for ConfusionCounts {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl std::iter::Sum for ConfusionCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ConfusionCounts::default(), Add::add)
    }
}

/// Confusion counts with both rates defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalResult {
    pub counts: ConfusionCounts,
    /// `i_pos / n_pos`
    pub tp_rate: Ratio<u64>,
    /// `i_neg / n_neg`
    pub fp_rate: Ratio<u64>,
}

impl EvalResult {
    /// Fails when either class is absent, since the matching rate is 0/0.
    pub fn from_counts(counts: ConfusionCounts) -> Result<Self> {
        if counts.total() == 0 {
            return Err(Error::EmptyInput);
        }
        if counts.n_pos == 0 {
            return Err(Error::DegenerateClass("no skin-labelled records, TP rate undefined"));
        }
        if counts.n_neg == 0 {
            return Err(Error::DegenerateClass("no non-skin-labelled records, FP rate undefined"));
        }
        Ok(EvalResult {
            counts,
            tp_rate: Ratio::new(counts.i_pos, counts.n_pos),
            fp_rate: Ratio::new(counts.i_neg, counts.n_neg),
        })
    }

    pub fn tp_f64(&self) -> f64 {
        self.counts.i_pos as f64 / self.counts.n_pos as f64
    }

    pub fn fp_f64(&self) -> f64 {
        self.counts.i_neg as f64 / self.counts.n_neg as f64
    }
}

pub fn count_confusion(rule: RuleKind, records: &[LabeledRecord]) -> ConfusionCounts {
    let predicate = rule.predicate();
    let mut counts = ConfusionCounts::default();
    for rec in records {
        counts.record(rec.label, predicate(rec.pixel));
    }
    counts
}

pub fn evaluate_records(rule: RuleKind, records: &[LabeledRecord]) -> Result<EvalResult> {
    EvalResult::from_counts(count_confusion(rule, records))
}

/// Totals from evaluating a rule over a set of image/mask pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairTotals {
    pub confusion: ConfusionCounts,
    /// Off-white/off-black mask pixels accepted in lenient mode.
    pub non_canonical: u64,
}

/// Sums confusion counts over already-paired files, one image at a time.
pub fn count_pairs(rule: RuleKind, pairs: &[DatasetPair], mode: MaskMode) -> Result<PairTotals> {
    pairs
        .par_iter()
        .map(|pair| {
            let (recs, non_canonical) = load_pair_records(pair, mode)?;
            Ok(PairTotals {
                confusion: count_confusion(rule, &recs),
                non_canonical,
            })
        })
        .try_reduce(PairTotals::default, |a, b| {
            Ok(PairTotals {
                confusion: a.confusion + b.confusion,
                non_canonical: a.non_canonical + b.non_canonical,
            })
        })
}

/// Evaluates a rule over every image/mask pair under `root`.
pub fn evaluate_dataset(rule: RuleKind, root: impl AsRef<Path>, mode: MaskMode) -> Result<EvalResult> {
    let dataset = pair_dataset(root)?;
    EvalResult::from_counts(count_pairs(rule, &dataset.pairs, mode)?.confusion)
}

/// Classifies every pixel: skin becomes white in the saved mask.
pub fn render_mask(rule: RuleKind, image: &ImageBuffer) -> MaskImage {
    let labels = image.pixels().iter().map(|&p| classify(rule, p)).collect();
    MaskImage::new(image.width(), image.height(), labels).expect("same dimensions as a valid image")
}

/// [`render_mask`] backed by a precomputed table.
pub fn render_mask_lut(lut: &RuleLut, image: &ImageBuffer) -> MaskImage {
    let labels = image.pixels().iter().map(|&p| lut.lookup(p)).collect();
    MaskImage::new(image.width(), image.height(), labels).expect("same dimensions as a valid image")
}

/// Writes the mask as an 8-bit RGB PNG, white = skin, black = non-skin.
pub fn save_mask(mask: &MaskImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    mask.to_rgb8()
        .save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| match e {
            image::ImageError::IoError(io) => Error::io(path, io),
            other => Error::format(path, other.to_string()),
        })
}
