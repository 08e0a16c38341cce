//! C ABI over `skinrule`.
//!
//! Every fallible call returns a [`SkinStatus`]; on failure a description is
//! available from [`skin_last_error_message`] on the same thread. Rules are
//! passed as their numeric ids (0 kovac, 1 kovac-rewritten, 2 saleh,
//! 3 swift, 4 rgb-ratio). Lookup tables are opaque [`SkinLut`] handles owned
//! by the caller and released with [`skin_lut_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use skinrule::{
    channel_ranges, classify, count_confusion, count_pairs, pair_dataset, Error, LabeledRecord, MaskMode, RgbPixel,
    RuleKind, RuleLut, SkinLabel,
};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkinStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Missing or unreadable file.
    Input = 3,
    /// Undecodable image, malformed CSV or LUT file.
    Format = 4,
    /// Non-canonical mask pixel in strict mode.
    Annotation = 5,
    /// Dataset directory layout problem or empty dataset.
    Layout = 6,
    /// Image and mask sizes differ.
    Pairing = 7,
    /// No skin or no non-skin records, or no records at all.
    Degenerate = 8,
    Io = 9,
    Panic = 10,
}

/// Raw confusion counts; rates are `i_pos / n_pos` and `i_neg / n_neg`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SkinEvalCounts {
    pub n_pos: u64,
    pub n_neg: u64,
    pub i_pos: u64,
    pub i_neg: u64,
}

/// Per-channel extent of a rule's skin region; bounds are meaningless when
/// `empty` is non-zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SkinChannelRanges {
    pub r_min: u8,
    pub r_max: u8,
    pub g_min: u8,
    pub g_max: u8,
    pub b_min: u8,
    pub b_max: u8,
    pub empty: u8,
}

/// Opaque lookup table handle.
pub struct SkinLut(RuleLut);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn fail(status: SkinStatus, msg: impl Into<String>) -> SkinStatus {
    set_last_error(msg);
    status
}

fn status_of(e: &Error) -> SkinStatus {
    match e {
        Error::Input { .. } => SkinStatus::Input,
        Error::Format { .. } | Error::Record { .. } => SkinStatus::Format,
        Error::Annotation { .. } => SkinStatus::Annotation,
        Error::Layout { .. } | Error::EmptyDataset { .. } => SkinStatus::Layout,
        Error::Pairing { .. } => SkinStatus::Pairing,
        Error::DegenerateClass(_) | Error::EmptyInput | Error::EmptyHistogram => SkinStatus::Degenerate,
        Error::Parameter(_) | Error::UnknownRule(_) => SkinStatus::InvalidArgument,
        Error::Io { .. } => SkinStatus::Io,
    }
}

fn from_error(e: Error) -> SkinStatus {
    let status = status_of(&e);
    fail(status, e.to_string())
}

/// Runs `f`, converting a panic into [`SkinStatus::Panic`].
fn guard(f: impl FnOnce() -> SkinStatus) -> SkinStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(SkinStatus::Panic, "internal panic"))
}

fn rule_from_id(id: u32) -> Result<RuleKind, SkinStatus> {
    u8::try_from(id)
        .ok()
        .and_then(RuleKind::from_id)
        .ok_or_else(|| fail(SkinStatus::InvalidArgument, format!("unknown rule id {id}")))
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, SkinStatus> {
    if p.is_null() {
        return Err(fail(SkinStatus::NullPointer, "path is NULL"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(PathBuf::from)
        .map_err(|_| fail(SkinStatus::InvalidArgument, "path is not valid UTF-8"))
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn skin_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Resolves a rule name such as `"rgb-ratio"` to its id.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out_rule` must be writable.
#[no_mangle]
pub unsafe extern "C" fn skin_rule_from_name(name: *const c_char, out_rule: *mut u32) -> SkinStatus {
    guard(|| {
        if name.is_null() || out_rule.is_null() {
            return fail(SkinStatus::NullPointer, "name or out_rule is NULL");
        }
        let Ok(name) = CStr::from_ptr(name).to_str() else {
            return fail(SkinStatus::InvalidArgument, "rule name is not valid UTF-8");
        };
        match name.parse::<RuleKind>() {
            Ok(rule) => {
                *out_rule = rule.id() as u32;
                SkinStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Classifies one pixel; writes 1 (skin) or 0 to `out_label`.
///
/// # Safety
/// `out_label` must be writable.
#[no_mangle]
pub unsafe extern "C" fn skin_classify(rule: u32, r: u8, g: u8, b: u8, out_label: *mut u8) -> SkinStatus {
    guard(|| {
        if out_label.is_null() {
            return fail(SkinStatus::NullPointer, "out_label is NULL");
        }
        let rule = tri!(rule_from_id(rule));
        *out_label = classify(rule, RgbPixel::new(r, g, b)).as_u8();
        SkinStatus::Ok
    })
}

/// Builds the full 2^24 table for a rule. Returns NULL on an unknown id.
#[no_mangle]
pub extern "C" fn skin_lut_build(rule: u32) -> *mut SkinLut {
    let built = catch_unwind(|| rule_from_id(rule).map(|r| SkinLut(skinrule::build_lut(r))));
    match built {
        Ok(Ok(lut)) => Box::into_raw(Box::new(lut)),
        Ok(Err(_)) => ptr::null_mut(),
        Err(_) => {
            set_last_error("internal panic");
            ptr::null_mut()
        }
    }
}

/// Releases a table from [`skin_lut_build`] or [`skin_lut_load`]. NULL is a no-op.
///
/// # Safety
/// `lut` must be NULL or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn skin_lut_free(lut: *mut SkinLut) {
    if !lut.is_null() {
        drop(Box::from_raw(lut));
    }
}

/// Rule id the table was built for, or `u32::MAX` for NULL.
///
/// # Safety
/// `lut` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn skin_lut_rule(lut: *const SkinLut) -> u32 {
    lut.as_ref().map_or(u32::MAX, |l| l.0.rule().id() as u32)
}

/// Label of one colour: 1 skin, 0 non-skin. A NULL handle yields 0.
///
/// # Safety
/// `lut` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn skin_lut_lookup(lut: *const SkinLut, r: u8, g: u8, b: u8) -> u8 {
    lut.as_ref().map_or(0, |l| l.0.lookup(RgbPixel::new(r, g, b)).as_u8())
}

/// Classifies `n_pixels` packed RGB8 pixels, writing 255 (skin) or 0 per
/// pixel into `out_mask`.
///
/// # Safety
/// `rgb` must hold `3 * n_pixels` bytes and `out_mask` `n_pixels` bytes.
#[no_mangle]
pub unsafe extern "C" fn skin_lut_classify_rgb8(
    lut: *const SkinLut,
    rgb: *const u8,
    n_pixels: usize,
    out_mask: *mut u8,
) -> SkinStatus {
    guard(|| {
        let Some(lut) = lut.as_ref() else {
            return fail(SkinStatus::NullPointer, "lut is NULL");
        };
        if n_pixels == 0 {
            return SkinStatus::Ok;
        }
        if rgb.is_null() || out_mask.is_null() {
            return fail(SkinStatus::NullPointer, "rgb or out_mask is NULL");
        }
        let Some(len) = n_pixels.checked_mul(3) else {
            return fail(SkinStatus::InvalidArgument, "n_pixels overflows");
        };
        let rgb = std::slice::from_raw_parts(rgb, len);
        let out = std::slice::from_raw_parts_mut(out_mask, n_pixels);
        for (px, slot) in rgb.chunks_exact(3).zip(out) {
            *slot = if lut.0.lookup(RgbPixel::new(px[0], px[1], px[2])).is_skin() { 255 } else { 0 };
        }
        SkinStatus::Ok
    })
}

/// Writes the table in the `SKLUT001` cache format.
///
/// # Safety
/// `lut` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn skin_lut_save(lut: *const SkinLut, path: *const c_char) -> SkinStatus {
    guard(|| {
        let Some(lut) = lut.as_ref() else {
            return fail(SkinStatus::NullPointer, "lut is NULL");
        };
        let path = tri!(path_arg(path));
        match lut.0.save(path) {
            Ok(()) => SkinStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}

/// Reads a `SKLUT001` cache file into a new handle stored in `*out_lut`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out_lut` writable.
#[no_mangle]
pub unsafe extern "C" fn skin_lut_load(path: *const c_char, out_lut: *mut *mut SkinLut) -> SkinStatus {
    guard(|| {
        if out_lut.is_null() {
            return fail(SkinStatus::NullPointer, "out_lut is NULL");
        }
        *out_lut = ptr::null_mut();
        let path = tri!(path_arg(path));
        match RuleLut::load(path) {
            Ok(lut) => {
                *out_lut = Box::into_raw(Box::new(SkinLut(lut)));
                SkinStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Exhaustive channel ranges of a rule's skin region.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn skin_channel_ranges(rule: u32, out: *mut SkinChannelRanges) -> SkinStatus {
    guard(|| {
        if out.is_null() {
            return fail(SkinStatus::NullPointer, "out is NULL");
        }
        let rule = tri!(rule_from_id(rule));
        let r = channel_ranges(rule);
        *out = SkinChannelRanges {
            r_min: r.r_min,
            r_max: r.r_max,
            g_min: r.g_min,
            g_max: r.g_max,
            b_min: r.b_min,
            b_max: r.b_max,
            empty: r.empty as u8,
        };
        SkinStatus::Ok
    })
}

/// Confusion counts for `n` records given as packed RGB8 pixels and one
/// label byte (0 or 1) each. Counts are written even when a class is
/// absent; the status then reports [`SkinStatus::Degenerate`].
///
/// # Safety
/// `rgb` must hold `3 * n` bytes, `labels` `n` bytes, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn skin_evaluate_records(
    rule: u32,
    rgb: *const u8,
    labels: *const u8,
    n: usize,
    out: *mut SkinEvalCounts,
) -> SkinStatus {
    guard(|| {
        if out.is_null() {
            return fail(SkinStatus::NullPointer, "out is NULL");
        }
        let rule = tri!(rule_from_id(rule));
        if n > 0 && (rgb.is_null() || labels.is_null()) {
            return fail(SkinStatus::NullPointer, "rgb or labels is NULL");
        }
        let Some(len) = n.checked_mul(3) else {
            return fail(SkinStatus::InvalidArgument, "n overflows");
        };
        let (rgb, labels) = if n == 0 {
            (&[][..], &[][..])
        } else {
            (std::slice::from_raw_parts(rgb, len), std::slice::from_raw_parts(labels, n))
        };
        let mut records = Vec::with_capacity(n);
        for (i, (px, &l)) in rgb.chunks_exact(3).zip(labels).enumerate() {
            let Some(label) = SkinLabel::from_u8(l) else {
                return fail(SkinStatus::InvalidArgument, format!("label {l} at record {i} is not 0 or 1"));
            };
            records.push(LabeledRecord::new(px[0], px[1], px[2], label));
        }
        let c = count_confusion(rule, &records);
        *out = SkinEvalCounts {
            n_pos: c.n_pos,
            n_neg: c.n_neg,
            i_pos: c.i_pos,
            i_neg: c.i_neg,
        };
        match skinrule::EvalResult::from_counts(c) {
            Ok(_) => SkinStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}

/// Confusion counts of a rule over a `images/` + `masks/` dataset directory.
/// `lenient` non-zero thresholds off-value mask pixels instead of failing.
///
/// # Safety
/// `root` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn skin_evaluate_dataset(
    rule: u32,
    root: *const c_char,
    lenient: i32,
    out: *mut SkinEvalCounts,
) -> SkinStatus {
    guard(|| {
        if out.is_null() {
            return fail(SkinStatus::NullPointer, "out is NULL");
        }
        let rule = tri!(rule_from_id(rule));
        let root = tri!(path_arg(root));
        let mode = if lenient != 0 { MaskMode::Lenient } else { MaskMode::Strict };
        let totals = match pair_dataset(&root).and_then(|d| count_pairs(rule, &d.pairs, mode)) {
            Ok(t) => t.confusion,
            Err(e) => return from_error(e),
        };
        *out = SkinEvalCounts {
            n_pos: totals.n_pos,
            n_neg: totals.n_neg,
            i_pos: totals.i_pos,
            i_neg: totals.i_neg,
        };
        match skinrule::EvalResult::from_counts(totals) {
            Ok(_) => SkinStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}
