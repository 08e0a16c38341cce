#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skinrule::{render_mask, save_mask, ImageBuffer, RgbPixel, RuleKind};

pub const SYNTHETIC_STEMS: [&str; 3] = ["indoor", "outdoor", "portrait"];
pub const SYNTHETIC_W: u32 = 80;
pub const SYNTHETIC_H: u32 = 60;

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/synthetic")
}

pub fn write_png(path: &Path, w: u32, h: u32, px: &[(u8, u8, u8)]) {
    let raw: Vec<u8> = px.iter().flat_map(|&(r, g, b)| [r, g, b]).collect();
    image::RgbImage::from_raw(w, h, raw).unwrap().save(path).unwrap();
}

pub fn write_gray_png(path: &Path, w: u32, h: u32, px: &[u8]) {
    image::GrayImage::from_raw(w, h, px.to_vec()).unwrap().save(path).unwrap();
}

pub fn buffer(w: u32, h: u32, px: &[(u8, u8, u8)]) -> ImageBuffer {
    ImageBuffer::new(w, h, px.iter().map(|&(r, g, b)| RgbPixel::new(r, g, b)).collect()).unwrap()
}

/// Creates `root/images` and `root/masks`.
pub fn dataset_dirs(root: &Path) -> (PathBuf, PathBuf) {
    let images = root.join("images");
    let masks = root.join("masks");
    fs::create_dir_all(&images).unwrap();
    fs::create_dir_all(&masks).unwrap();
    (images, masks)
}

/// One image: left half skin-like tones, right half arbitrary colours.
fn synthetic_image(seed: u64) -> ImageBuffer {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pixels = Vec::with_capacity((SYNTHETIC_W * SYNTHETIC_H) as usize);
    for _y in 0..SYNTHETIC_H {
        for x in 0..SYNTHETIC_W {
            let p = if x < SYNTHETIC_W / 2 {
                let r: u8 = rng.gen_range(90..=255);
                let g = (r as f64 * rng.gen_range(0.45..0.95)) as u8;
                let b = (g as f64 * rng.gen_range(0.4..1.1)).min(255.0) as u8;
                RgbPixel::new(r, g, b)
            } else {
                RgbPixel::new(rng.gen(), rng.gen(), rng.gen())
            };
            pixels.push(p);
        }
    }
    ImageBuffer::new(SYNTHETIC_W, SYNTHETIC_H, pixels).unwrap()
}

/// Deterministic dataset whose masks are the RGB-ratio rule's own output.
pub fn write_synthetic_dataset(root: &Path) {
    let (images, masks) = dataset_dirs(root);
    for (i, stem) in SYNTHETIC_STEMS.iter().enumerate() {
        let img = synthetic_image(0x5eed + i as u64);
        img.to_rgb8().save(images.join(format!("{stem}.png"))).unwrap();
        save_mask(&render_mask(RuleKind::RgbRatio, &img), masks.join(format!("{stem}.png"))).unwrap();
    }
}
