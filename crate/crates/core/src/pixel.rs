use std::fmt;

/// One 8-bit-per-channel colour sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RgbPixel {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl RgbPixel {
    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b }
    }

    /// Position of this colour in the 24-bit cube, `R·65536 + G·256 + B`.
    #[inline]
    pub const fn index(self) -> u32 {
        ((self.r as u32) << 16) | ((self.g as u32) << 8) | self.b as u32
    }

    /// Inverse of [`RgbPixel::index`]; bits above 24 are ignored.
    #[inline]
    pub const fn from_index(index: u32) -> Self {
        Self {
            r: (index >> 16) as u8,
            g: (index >> 8) as u8,
            b: index as u8,
        }
    }

    /// Iterates every colour of the 24-bit cube in index order.
    pub fn all() -> impl Iterator<Item = RgbPixel> {
        (0..1u32 << 24).map(RgbPixel::from_index)
    }
}

impl From<[u8; 3]> for RgbPixel {
    fn from([r, g, b]: [u8; 3]) -> Self {
        Self { r, g, b }
    }
}

impl From<RgbPixel> for [u8; 3] {
    fn from(p: RgbPixel) -> Self {
        [p.r, p.g, p.b]
    }
}

impl fmt::Display for RgbPixel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.g, self.b)
    }
}

/// Binary ground-truth or classifier output. Serialises as `1` / `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SkinLabel {
    NonSkin = 0,
    Skin = 1,
}

impl SkinLabel {
    #[inline]
    pub const fn from_bool(skin: bool) -> Self {
        if skin {
            SkinLabel::Skin
        } else {
            SkinLabel::NonSkin
        }
    }

    #[inline]
    pub const fn is_skin(self) -> bool {
        matches!(self, SkinLabel::Skin)
    }

    #[inline]
    pub const fn as_u8(self) -> u8 {
        self as u8
    }

    pub const fn from_u8(v: u8) -> Option<Self> {
        match v {
            0 => Some(SkinLabel::NonSkin),
            1 => Some(SkinLabel::Skin),
            _ => None,
        }
    }

    pub const fn flipped(self) -> Self {
        match self {
            SkinLabel::Skin => SkinLabel::NonSkin,
            SkinLabel::NonSkin => SkinLabel::Skin,
        }
    }
}

impl From<bool> for SkinLabel {
    fn from(skin: bool) -> Self {
        SkinLabel::from_bool(skin)
    }
}
