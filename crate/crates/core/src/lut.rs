//! Bit-packed lookup tables covering the full 24-bit colour cube.
//!
//! The in-memory table uses the cache-file layout directly: bit `i & 7` of
//! byte `i >> 3` holds the label for colour index `i`.
//!
//! Cache file: magic `SKLUT001`, one rule-id byte, then 2^21 table bytes.

use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pixel::{RgbPixel, SkinLabel};
use crate::rules::RuleKind;

pub const LUT_MAGIC: &[u8; 8] = b"SKLUT001";
pub const LUT_ENTRIES: usize = 1 << 24;
pub const LUT_BYTES: usize = LUT_ENTRIES / 8;
const HEADER_LEN: usize = LUT_MAGIC.len() + 1;
/// Bytes covering one red plane (256 × 256 colours).
const PLANE_BYTES: usize = 256 * 256 / 8;

#[derive(Clone, PartialEq, Eq)]
pub struct RuleLut {
    rule: RuleKind,
    table: Box<[u8]>,
}

impl std::fmt::Debug for RuleLut {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RuleLut")
            .field("rule", &self.rule)
            .field("skin_entries", &self.count_skin())
            .finish()
    }
}

/// Evaluates `rule` on every colour and packs the results.
///
/// Work is split per red plane; each plane owns a disjoint byte range, so
/// the table is identical for any thread count.
pub fn build_lut(rule: RuleKind) -> RuleLut {
    let predicate = rule.predicate();
    let mut table = vec![0u8; LUT_BYTES].into_boxed_slice();
    table
        .par_chunks_mut(PLANE_BYTES)
        .enumerate()
        .for_each(|(r, plane)| {
            let base = (r as u32) << 16;
            for (byte_idx, byte) in plane.iter_mut().enumerate() {
                let first = base | (byte_idx as u32) << 3;
                let mut bits = 0u8;
                for bit in 0..8 {
                    if predicate(RgbPixel::from_index(first + bit)).is_skin() {
                        bits |= 1 << bit;
                    }
                }
                *byte = bits;
            }
        });
    RuleLut { rule, table }
}

impl RuleLut {
    pub fn rule(&self) -> RuleKind {
        self.rule
    }

    #[inline]
    pub fn lookup(&self, p: RgbPixel) -> SkinLabel {
        let i = p.index() as usize;
        SkinLabel::from_bool(self.table[i >> 3] >> (i & 7) & 1 == 1)
    }

    /// Packed table bytes in cache-file order.
    pub fn as_bytes(&self) -> &[u8] {
        &self.table
    }

    pub fn count_skin(&self) -> u64 {
        self.table.iter().map(|b| b.count_ones() as u64).sum()
    }

    /// Labels a packed RGB8 buffer (`rgb.len()` must be a multiple of 3),
    /// writing one label per pixel into `out`.
    pub fn classify_rgb8(&self, rgb: &[u8], out: &mut [SkinLabel]) {
        assert_eq!(rgb.len(), out.len() * 3, "rgb buffer / output length mismatch");
        for (px, slot) in rgb.chunks_exact(3).zip(out.iter_mut()) {
            *slot = self.lookup(RgbPixel::new(px[0], px[1], px[2]));
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + LUT_BYTES);
        out.extend_from_slice(LUT_MAGIC);
        out.push(self.rule.id());
        out.extend_from_slice(&self.table);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> std::result::Result<Self, String> {
        if bytes.len() < HEADER_LEN || &bytes[..8] != LUT_MAGIC {
            return Err("missing SKLUT001 magic".into());
        }
        let rule = RuleKind::from_id(bytes[8]).ok_or_else(|| format!("unknown rule id {}", bytes[8]))?;
        let body = &bytes[HEADER_LEN..];
        if body.len() != LUT_BYTES {
            return Err(format!("expected {LUT_BYTES} table bytes, found {}", body.len()));
        }
        Ok(RuleLut {
            rule,
            table: body.to_vec().into_boxed_slice(),
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(&self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|source| Error::Input {
            path: path.to_owned(),
            source,
        })?;
        RuleLut::from_bytes(&bytes).map_err(|m| Error::format(path, m))
    }
}
