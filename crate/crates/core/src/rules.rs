//! Per-pixel skin rules over 8-bit RGB.
//!
//! Every rule is a total, side-effect-free predicate. Arithmetic is done in
//! `i32` so that differences and sums never wrap.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::pixel::{RgbPixel, SkinLabel};

/// Selects one of the five rule implementations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Kovac,
    KovacRewritten,
    Saleh,
    Swift,
    RgbRatio,
}

impl RuleKind {
    pub const ALL: [RuleKind; 5] = [
        RuleKind::Kovac,
        RuleKind::KovacRewritten,
        RuleKind::Saleh,
        RuleKind::Swift,
        RuleKind::RgbRatio,
    ];

    /// The four rules of the published comparison, in table order.
    pub const COMPARED: [RuleKind; 4] = [
        RuleKind::Kovac,
        RuleKind::Saleh,
        RuleKind::Swift,
        RuleKind::RgbRatio,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            RuleKind::Kovac => "kovac",
            RuleKind::KovacRewritten => "kovac-rewritten",
            RuleKind::Saleh => "saleh",
            RuleKind::Swift => "swift",
            RuleKind::RgbRatio => "rgb-ratio",
        }
    }

    /// Numeric id used by the LUT cache file and the C ABI.
    pub const fn id(self) -> u8 {
        match self {
            RuleKind::Kovac => 0,
            RuleKind::KovacRewritten => 1,
            RuleKind::Saleh => 2,
            RuleKind::Swift => 3,
            RuleKind::RgbRatio => 4,
        }
    }

    pub const fn from_id(id: u8) -> Option<Self> {
        match id {
            0 => Some(RuleKind::Kovac),
            1 => Some(RuleKind::KovacRewritten),
            2 => Some(RuleKind::Saleh),
            3 => Some(RuleKind::Swift),
            4 => Some(RuleKind::RgbRatio),
            _ => None,
        }
    }

    /// Plain function pointer for the rule, handy in tight loops.
    pub const fn predicate(self) -> fn(RgbPixel) -> SkinLabel {
        match self {
            RuleKind::Kovac => classify_kovac,
            RuleKind::KovacRewritten => classify_kovac_rewritten,
            RuleKind::Saleh => classify_saleh,
            RuleKind::Swift => classify_swift,
            RuleKind::RgbRatio => classify_rgb_ratio,
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownRule(s.to_owned()))
    }
}

#[inline]
fn channels(p: RgbPixel) -> (i32, i32, i32) {
    (p.r as i32, p.g as i32, p.b as i32)
}

/// Kovač et al.: R>95, G>40, B>20; max−min>15; |R−G|>15; R>G and R>B.
#[inline]
pub fn classify_kovac(p: RgbPixel) -> SkinLabel {
    let (r, g, b) = channels(p);
    let spread = r.max(g).max(b) - r.min(g).min(b);
    SkinLabel::from_bool(
        r > 95 && g > 40 && b > 20 && spread > 15 && (r - g).abs() > 15 && r > g && r > b,
    )
}

/// Kovač with the spread and R−G conditions rewritten under the assumption
/// that R dominates: R−min(G,B)>15 and R−G>15.
#[inline]
pub fn classify_kovac_rewritten(p: RgbPixel) -> SkinLabel {
    let (r, g, b) = channels(p);
    SkinLabel::from_bool(
        r > 95 && g > 40 && b > 20 && r > g && r > b && r - g.min(b) > 15 && r - g > 15,
    )
}

/// Saleh: 20 < R−G < 80, blue ignored.
#[inline]
pub fn classify_saleh(p: RgbPixel) -> SkinLabel {
    let d = p.r as i32 - p.g as i32;
    SkinLabel::from_bool(d > 20 && d < 80)
}

/// Swift: non-skin if B>R, G<B, G>R, B<R/4 or B>200; skin otherwise.
///
/// `B < R/4` is tested as `4B < R` so no precision is lost to truncation.
#[inline]
pub fn classify_swift(p: RgbPixel) -> SkinLabel {
    let (r, g, b) = channels(p);
    let excluded = b > r || g < b || g > r || 4 * b < r || b > 200;
    SkinLabel::from_bool(!excluded)
}

/// RGB ratio: 0 ≤ (R−G)/(R+G) ≤ 0.5 and B/(R+G) ≤ 0.5.
///
/// Evaluated exactly as `G ≤ R ≤ 3G ∧ 2B ≤ R+G`. Pixels with R+G = 0 have no
/// defined ratio and are non-skin.
#[inline]
pub fn classify_rgb_ratio(p: RgbPixel) -> SkinLabel {
    let (r, g, b) = channels(p);
    SkinLabel::from_bool(r + g > 0 && g <= r && r <= 3 * g && 2 * b <= r + g)
}

/// Floating-point evaluation of the RGB-ratio rule, kept as a reference for
/// checking [`classify_rgb_ratio`]. Not used on any classification path.
pub fn classify_rgb_ratio_float(p: RgbPixel) -> SkinLabel {
    let (r, g, b) = (p.r as f64, p.g as f64, p.b as f64);
    let sum = r + g;
    if sum == 0.0 {
        return SkinLabel::NonSkin;
    }
    let f1 = (r - g) / sum;
    let f2 = b / sum;
    SkinLabel::from_bool((0.0..=0.5).contains(&f1) && f2 <= 0.5)
}

#[inline]
pub fn classify(rule: RuleKind, p: RgbPixel) -> SkinLabel {
    match rule {
        RuleKind::Kovac => classify_kovac(p),
        RuleKind::KovacRewritten => classify_kovac_rewritten(p),
        RuleKind::Saleh => classify_saleh(p),
        RuleKind::Swift => classify_swift(p),
        RuleKind::RgbRatio => classify_rgb_ratio(p),
    }
}
