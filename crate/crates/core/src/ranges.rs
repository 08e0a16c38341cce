//! Exhaustive per-channel extent of a rule's skin region.

use std::fmt;

use rayon::prelude::*;

use crate::pixel::RgbPixel;
use crate::rules::RuleKind;

/// Per-channel `[min, max]` over every colour a rule labels skin.
///
/// When `empty` is set no colour is skin and the bounds carry no meaning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelRanges {
    pub r_min: u8,
    pub r_max: u8,
    pub g_min: u8,
    pub g_max: u8,
    pub b_min: u8,
    pub b_max: u8,
    pub empty: bool,
}

impl ChannelRanges {
    pub const EMPTY: ChannelRanges = ChannelRanges {
        r_min: 255,
        r_max: 0,
        g_min: 255,
        g_max: 0,
        b_min: 255,
        b_max: 0,
        empty: true,
    };

    fn include(mut self, p: RgbPixel) -> Self {
        self.r_min = self.r_min.min(p.r);
        self.r_max = self.r_max.max(p.r);
        self.g_min = self.g_min.min(p.g);
        self.g_max = self.g_max.max(p.g);
        self.b_min = self.b_min.min(p.b);
        self.b_max = self.b_max.max(p.b);
        self.empty = false;
        self
    }

    fn merge(self, other: Self) -> Self {
        match (self.empty, other.empty) {
            (true, _) => other,
            (_, true) => self,
            _ => ChannelRanges {
                r_min: self.r_min.min(other.r_min),
                r_max: self.r_max.max(other.r_max),
                g_min: self.g_min.min(other.g_min),
                g_max: self.g_max.max(other.g_max),
                b_min: self.b_min.min(other.b_min),
                b_max: self.b_max.max(other.b_max),
                empty: false,
            },
        }
    }
}

impl fmt::Display for ChannelRanges {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return f.write_str("empty");
        }
        write!(
            f,
            "R:[{},{}] G:[{},{}] B:[{},{}]",
            self.r_min, self.r_max, self.g_min, self.g_max, self.b_min, self.b_max
        )
    }
}

/// Enumerates all 2^24 colours and records the channel extent of the skin set.
pub fn channel_ranges(rule: RuleKind) -> ChannelRanges {
    let predicate = rule.predicate();
    (0u32..256)
        .into_par_iter()
        .map(|r| {
            let base = r << 16;
            (0..1u32 << 16)
                .map(|gb| RgbPixel::from_index(base | gb))
                .filter(|&p| predicate(p).is_skin())
                .fold(ChannelRanges::EMPTY, ChannelRanges::include)
        })
        .reduce(|| ChannelRanges::EMPTY, ChannelRanges::merge)
}
