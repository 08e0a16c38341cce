//! Ground-truth ingestion: image/mask pairs, flattening into labelled
//! records, and the records CSV format.
//!
//! Layout on disk is `root/images/<stem>.{png,jpg,jpeg}` with a matching
//! `root/masks/<stem>.png`. Masks mark skin pure white and non-skin pure
//! black; 8-bit grayscale masks use 255 / 0.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use image::{ColorType, DynamicImage, ImageReader};

use crate::error::{Error, Result};
use crate::pixel::{RgbPixel, SkinLabel};

pub const RECORDS_HEADER: &str = "R,G,B,label";

/// Row-major 8-bit RGB image, top-left origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    width: u32,
    height: u32,
    pixels: Vec<RgbPixel>,
}

impl ImageBuffer {
    /// Returns `None` unless `pixels.len() == width * height` and both
    /// dimensions are non-zero.
    pub fn new(width: u32, height: u32, pixels: Vec<RgbPixel>) -> Option<Self> {
        (width > 0 && height > 0 && pixels.len() as u64 == width as u64 * height as u64)
            .then_some(Self { width, height, pixels })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[RgbPixel] {
        &self.pixels
    }

    pub fn to_rgb8(&self) -> image::RgbImage {
        let raw = self.pixels.iter().flat_map(|&p| <[u8; 3]>::from(p)).collect();
        image::RgbImage::from_raw(self.width, self.height, raw).expect("dimensions checked at construction")
    }
}

/// Row-major skin/non-skin labels for one image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskImage {
    width: u32,
    height: u32,
    labels: Vec<SkinLabel>,
}

impl MaskImage {
    pub fn new(width: u32, height: u32, labels: Vec<SkinLabel>) -> Option<Self> {
        (width > 0 && height > 0 && labels.len() as u64 == width as u64 * height as u64)
            .then_some(Self { width, height, labels })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn labels(&self) -> &[SkinLabel] {
        &self.labels
    }

    pub fn skin_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_skin()).count()
    }

    /// White for skin, black otherwise.
    pub fn to_rgb8(&self) -> image::RgbImage {
        let raw = self
            .labels
            .iter()
            .flat_map(|l| if l.is_skin() { [255u8; 3] } else { [0u8; 3] })
            .collect();
        image::RgbImage::from_raw(self.width, self.height, raw).expect("dimensions checked at construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaskMode {
    /// Only exact white / black pixels are accepted.
    #[default]
    Strict,
    /// Anything with every channel above 127 is skin; off-values are counted.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedMask {
    pub mask: MaskImage,
    /// Pixels that were neither pure white nor pure black (lenient mode only;
    /// strict mode fails on the first one).
    pub non_canonical: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetPair {
    pub stem: String,
    pub image_path: PathBuf,
    pub mask_path: PathBuf,
}

#[derive(Debug, Clone, Default)]
pub struct PairedDataset {
    pub pairs: Vec<DatasetPair>,
    pub warnings: Vec<String>,
}

/// One flattened pixel with its ground-truth label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LabeledRecord {
    pub pixel: RgbPixel,
    pub label: SkinLabel,
}

impl LabeledRecord {
    pub const fn new(r: u8, g: u8, b: u8, label: SkinLabel) -> Self {
        Self {
            pixel: RgbPixel::new(r, g, b),
            label,
        }
    }
}

fn open_decoded(path: &Path) -> Result<DynamicImage> {
    let file = fs::File::open(path).map_err(|source| Error::Input {
        path: path.to_owned(),
        source,
    })?;
    let reader = ImageReader::new(BufReader::new(file))
        .with_guessed_format()
        .map_err(|e| Error::format(path, e.to_string()))?;
    if reader.format().is_none() {
        return Err(Error::format(path, "unrecognised image format"));
    }
    let img = reader.decode().map_err(|e| Error::format(path, e.to_string()))?;
    if img.width() == 0 || img.height() == 0 {
        return Err(Error::format(path, "image has zero size"));
    }
    Ok(img)
}

fn require_8bit(path: &Path, color: ColorType) -> Result<()> {
    match color {
        ColorType::L8 | ColorType::La8 | ColorType::Rgb8 | ColorType::Rgba8 => Ok(()),
        other => Err(Error::format(
            path,
            format!("unsupported pixel format {other:?}; only 8-bit channels are accepted"),
        )),
    }
}

/// Decodes a PNG or JPEG into an RGB buffer. Alpha is discarded; anything
/// other than 8 bits per channel is rejected.
pub fn load_image(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let path = path.as_ref();
    let img = open_decoded(path)?;
    require_8bit(path, img.color())?;
    let rgb = img.into_rgb8();
    let (width, height) = rgb.dimensions();
    let pixels = rgb.pixels().map(|p| RgbPixel::from(p.0)).collect();
    Ok(ImageBuffer { width, height, pixels })
}

/// Reads a ground-truth mask. Accepts 8-bit RGB(A) or grayscale(+alpha).
pub fn load_mask(path: impl AsRef<Path>, mode: MaskMode) -> Result<LoadedMask> {
    let path = path.as_ref();
    let img = open_decoded(path)?;
    require_8bit(path, img.color())?;
    let rgb = img.into_rgb8();
    let (width, height) = rgb.dimensions();
    let mut labels = Vec::with_capacity(width as usize * height as usize);
    let mut non_canonical = 0u64;
    for (x, y, p) in rgb.enumerate_pixels() {
        let [r, g, b] = p.0;
        let label = match (r, g, b) {
            (255, 255, 255) => SkinLabel::Skin,
            (0, 0, 0) => SkinLabel::NonSkin,
            _ => match mode {
                MaskMode::Strict => {
                    return Err(Error::Annotation {
                        path: path.to_owned(),
                        x,
                        y,
                        r,
                        g,
                        b,
                    })
                }
                MaskMode::Lenient => {
                    non_canonical += 1;
                    SkinLabel::from_bool(r > 127 && g > 127 && b > 127)
                }
            },
        };
        labels.push(label);
    }
    Ok(LoadedMask {
        mask: MaskImage { width, height, labels },
        non_canonical,
    })
}

fn has_extension(path: &Path, allowed: &[&str]) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| allowed.iter().any(|a| e.eq_ignore_ascii_case(a)))
}

/// Files in `dir` with one of the given extensions, keyed by stem. When two
/// files share a stem the lexicographically first name wins.
fn files_by_stem(dir: &Path, allowed: &[&str], warnings: &mut Vec<String>) -> Result<BTreeMap<String, PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::Layout {
        path: dir.to_owned(),
        message: format!("cannot read directory: {e}"),
    })?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && has_extension(&path, allowed) {
            paths.push(path);
        }
    }
    paths.sort();
    let mut by_stem: BTreeMap<String, PathBuf> = BTreeMap::new();
    for path in paths {
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()).map(str::to_owned) else {
            warnings.push(format!("{}: skipping non UTF-8 file name", path.display()));
            continue;
        };
        if let Some(kept) = by_stem.get(&stem) {
            warnings.push(format!(
                "{}: duplicate stem `{stem}`, using {}",
                path.display(),
                kept.display()
            ));
            continue;
        }
        by_stem.insert(stem, path);
    }
    Ok(by_stem)
}

/// Matches `root/images` against `root/masks` by file stem, sorted by stem.
pub fn pair_dataset(root: impl AsRef<Path>) -> Result<PairedDataset> {
    let root = root.as_ref();
    let images_dir = root.join("images");
    let masks_dir = root.join("masks");
    for dir in [&images_dir, &masks_dir] {
        if !dir.is_dir() {
            return Err(Error::Layout {
                path: root.to_owned(),
                message: format!("missing subdirectory `{}`", dir.file_name().unwrap().to_string_lossy()),
            });
        }
    }

    let mut warnings = Vec::new();
    let images = files_by_stem(&images_dir, &["png", "jpg", "jpeg"], &mut warnings)?;
    let mut masks = files_by_stem(&masks_dir, &["png"], &mut warnings)?;

    let mut pairs = Vec::new();
    for (stem, image_path) in images {
        match masks.remove(&stem) {
            Some(mask_path) => pairs.push(DatasetPair {
                stem,
                image_path,
                mask_path,
            }),
            None => warnings.push(format!("{}: no mask for image", image_path.display())),
        }
    }
    for mask_path in masks.into_values() {
        warnings.push(format!("{}: no image for mask", mask_path.display()));
    }

    if pairs.is_empty() {
        return Err(Error::EmptyDataset { path: root.to_owned() });
    }
    Ok(PairedDataset { pairs, warnings })
}

/// Flattens an image and its mask into one record per pixel, row-major.
pub fn transform_records(image: &ImageBuffer, mask: &MaskImage) -> Result<Vec<LabeledRecord>> {
    if image.width != mask.width || image.height != mask.height {
        return Err(Error::Pairing {
            context: String::new(),
            image_width: image.width,
            image_height: image.height,
            mask_width: mask.width,
            mask_height: mask.height,
        });
    }
    Ok(image
        .pixels
        .iter()
        .zip(&mask.labels)
        .map(|(&pixel, &label)| LabeledRecord { pixel, label })
        .collect())
}

/// Loads both halves of a pair and flattens them. Also returns the mask's
/// non-canonical pixel count.
pub fn load_pair_records(pair: &DatasetPair, mode: MaskMode) -> Result<(Vec<LabeledRecord>, u64)> {
    let image = load_image(&pair.image_path)?;
    let loaded = load_mask(&pair.mask_path, mode)?;
    let records = transform_records(&image, &loaded.mask).map_err(|e| match e {
        Error::Pairing { image_width, image_height, mask_width, mask_height, .. } => Error::Pairing {
            context: format!("{}: ", pair.mask_path.display()),
            image_width,
            image_height,
            mask_width,
            mask_height,
        },
        other => other,
    })?;
    Ok((records, loaded.non_canonical))
}

pub fn write_records<W: Write>(records: &[LabeledRecord], out: W) -> std::io::Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{RECORDS_HEADER}")?;
    for rec in records {
        let p = rec.pixel;
        writeln!(out, "{},{},{},{}", p.r, p.g, p.b, rec.label.as_u8())?;
    }
    out.flush()
}

pub fn write_records_csv(records: &[LabeledRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_records(records, file).map_err(|e| Error::io(path, e))
}

fn parse_record(line: &str) -> std::result::Result<LabeledRecord, String> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 4 {
        return Err(format!("expected 4 fields, found {}", fields.len()));
    }
    let channel = |name: &str, s: &str| -> std::result::Result<u8, String> {
        let v: u32 = s.parse().map_err(|_| format!("{name} value `{s}` is not an integer"))?;
        u8::try_from(v).map_err(|_| format!("{name} value {v} outside 0-255"))
    };
    let r = channel("R", fields[0])?;
    let g = channel("G", fields[1])?;
    let b = channel("B", fields[2])?;
    let label = match fields[3] {
        "0" => SkinLabel::NonSkin,
        "1" => SkinLabel::Skin,
        other => return Err(format!("label `{other}` is not 0 or 1")),
    };
    Ok(LabeledRecord::new(r, g, b, label))
}

/// Parses records CSV from any reader; `path` is only used in messages.
pub fn read_records<R: BufRead>(reader: R, path: &Path) -> Result<Vec<LabeledRecord>> {
    let mut lines = reader.lines();
    let err = |line: usize, message: String| Error::Record {
        path: path.to_owned(),
        line,
        message,
    };
    match lines.next() {
        Some(Ok(h)) if h == RECORDS_HEADER => {}
        Some(Ok(h)) => return Err(err(1, format!("expected header `{RECORDS_HEADER}`, found `{h}`"))),
        Some(Err(e)) => return Err(Error::io(path, e)),
        None => return Err(err(1, "missing header".into())),
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        records.push(parse_record(&line).map_err(|m| err(i + 2, m))?);
    }
    Ok(records)
}

pub fn read_records_csv(path: impl AsRef<Path>) -> Result<Vec<LabeledRecord>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|source| Error::Input {
        path: path.to_owned(),
        source,
    })?;
    read_records(BufReader::new(file), path)
}
