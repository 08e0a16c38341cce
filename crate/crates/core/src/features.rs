//! Ratio features `(R−G)/(R+G)` and `B/(R+G)`, their histograms, and
//! coverage-based threshold suggestions.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::dataset::LabeledRecord;
use crate::error::{Error, Result};
use crate::pixel::{RgbPixel, SkinLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    /// `(R−G)/(R+G)`, always in `[−1, 1]`.
    RgRatio,
    /// `B/(R+G)`, non-negative and unbounded above (up to 255).
    BRatio,
}

impl FeatureKind {
    pub const fn name(self) -> &'static str {
        match self {
            FeatureKind::RgRatio => "rg-ratio",
            FeatureKind::BRatio => "b-ratio",
        }
    }

    /// Default binned range: `[−1, 1]` for the R/G ratio, `[0, 2]` for blue.
    pub const fn default_range(self) -> (f64, f64) {
        match self {
            FeatureKind::RgRatio => (-1.0, 1.0),
            FeatureKind::BRatio => (0.0, 2.0),
        }
    }

    pub fn value(self, p: RgbPixel) -> Option<f64> {
        compute_features(p).map(|(rg, b)| match self {
            FeatureKind::RgRatio => rg,
            FeatureKind::BRatio => b,
        })
    }
}

pub const DEFAULT_BINS: usize = 256;

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FeatureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rg-ratio" => Ok(FeatureKind::RgRatio),
            "b-ratio" => Ok(FeatureKind::BRatio),
            other => Err(Error::Parameter(format!("unknown feature `{other}` (expected rg-ratio or b-ratio)"))),
        }
    }
}

/// Which records a histogram draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClassFilter {
    #[default]
    Skin,
    NonSkin,
    All,
}

impl ClassFilter {
    pub fn accepts(self, label: SkinLabel) -> bool {
        match self {
            ClassFilter::Skin => label.is_skin(),
            ClassFilter::NonSkin => !label.is_skin(),
            ClassFilter::All => true,
        }
    }
}

impl FromStr for ClassFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skin" => Ok(ClassFilter::Skin),
            "non-skin" => Ok(ClassFilter::NonSkin),
            "all" => Ok(ClassFilter::All),
            other => Err(Error::Parameter(format!("unknown class `{other}` (expected skin, non-skin or all)"))),
        }
    }
}

/// Both ratio features, or `None` when `R + G = 0`.
pub fn compute_features(p: RgbPixel) -> Option<(f64, f64)> {
    let sum = p.r as u32 + p.g as u32;
    if sum == 0 {
        return None;
    }
    let sum = sum as f64;
    Some(((p.r as f64 - p.g as f64) / sum, p.b as f64 / sum))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureHistogram {
    pub feature: FeatureKind,
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    /// Records with `R + G = 0`.
    pub undefined: u64,
    /// Values below `lo`.
    pub underflow: u64,
    /// Values above `hi`.
    pub overflow: u64,
}

impl FeatureHistogram {
    pub fn new(feature: FeatureKind, bins: usize, lo: f64, hi: f64) -> Result<Self> {
        if bins == 0 {
            return Err(Error::Parameter("bin count must be at least 1".into()));
        }
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::Parameter(format!("histogram range requires lo < hi, got [{lo}, {hi}]")));
        }
        Ok(FeatureHistogram {
            feature,
            lo,
            hi,
            counts: vec![0; bins],
            undefined: 0,
            underflow: 0,
            overflow: 0,
        })
    }

    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    /// Lower and upper edge of bin `i`.
    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let n = self.counts.len() as f64;
        let edge = |k: usize| self.lo + (self.hi - self.lo) * (k as f64) / n;
        (edge(i), edge(i + 1))
    }

    pub fn add_value(&mut self, value: Option<f64>) {
        let Some(v) = value else {
            self.undefined += 1;
            return;
        };
        if v < self.lo {
            self.underflow += 1;
        } else if v > self.hi {
            self.overflow += 1;
        } else {
            let n = self.counts.len();
            let idx = ((v - self.lo) * n as f64 / (self.hi - self.lo)).floor() as usize;
            // v == hi lands in the last bin
            self.counts[idx.min(n - 1)] += 1;
        }
    }

    pub fn in_range(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Every record that passed the class filter.
    pub fn total(&self) -> u64 {
        self.in_range() + self.undefined + self.underflow + self.overflow
    }

    /// Element-wise sum with a histogram of identical shape.
    pub fn merge(&mut self, other: &FeatureHistogram) -> Result<()> {
        if self.feature != other.feature
            || self.lo != other.lo
            || self.hi != other.hi
            || self.counts.len() != other.counts.len()
        {
            return Err(Error::Parameter("cannot merge histograms with different binning".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.undefined += other.undefined;
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        Ok(())
    }

    /// `bin_lo,bin_hi,count` rows followed by `# undefined=`, `# underflow=`
    /// and `# overflow=` comment lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count\n");
        for (i, count) in self.counts.iter().enumerate() {
            let (a, b) = self.bin_edges(i);
            let _ = writeln!(out, "{a},{b},{count}");
        }
        let _ = writeln!(out, "# undefined={}", self.undefined);
        let _ = writeln!(out, "# underflow={}", self.underflow);
        let _ = writeln!(out, "# overflow={}", self.overflow);
        out
    }
}

/// Bins one feature over the records accepted by `class`. Rejected records
/// are not counted anywhere.
pub fn build_histogram(
    records: &[LabeledRecord],
    feature: FeatureKind,
    bins: usize,
    lo: f64,
    hi: f64,
    class: ClassFilter,
) -> Result<FeatureHistogram> {
    let mut hist = FeatureHistogram::new(feature, bins, lo, hi)?;
    for rec in records.iter().filter(|r| class.accepts(r.label)) {
        hist.add_value(feature.value(rec.pixel));
    }
    Ok(hist)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSuggestion {
    pub feature: FeatureKind,
    pub lo: f64,
    pub hi: f64,
    /// Fraction of the in-range mass inside `[lo, hi)`.
    pub coverage: f64,
}

/// Narrowest run of contiguous bins holding at least `coverage` of the
/// in-range mass. Among equally narrow runs the one starting lowest wins.
pub fn suggest_thresholds(hist: &FeatureHistogram, coverage: f64) -> Result<ThresholdSuggestion> {
    if !(coverage > 0.0 && coverage <= 1.0) {
        return Err(Error::Parameter(format!("coverage must be in (0, 1], got {coverage}")));
    }
    let total = hist.in_range();
    if total == 0 {
        return Err(Error::EmptyHistogram);
    }
    // absorb representation error in `coverage` (0.8 * 10 must ask for 8)
    let required = ((coverage * total as f64) * (1.0 - 1e-12)).ceil().max(1.0) as u64;

    let mut prefix = Vec::with_capacity(hist.counts.len() + 1);
    prefix.push(0u64);
    for c in &hist.counts {
        prefix.push(prefix.last().unwrap() + c);
    }
    let n = hist.counts.len();
    for width in 1..=n {
        for start in 0..=n - width {
            let mass = prefix[start + width] - prefix[start];
            if mass >= required {
                return Ok(ThresholdSuggestion {
                    feature: hist.feature,
                    lo: hist.bin_edges(start).0,
                    hi: hist.bin_edges(start + width - 1).1,
                    coverage: mass as f64 / total as f64,
                });
            }
        }
    }
    unreachable!("the full range always holds the whole in-range mass")
}
