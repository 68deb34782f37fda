//! The bundled 5×5 binary glyphs for the 26 capital letters.

use alloc::vec::Vec;

use crate::codec::ImageSample;

const GLYPHS: &str = include_str!("../data/letters5x5.txt");

pub const LETTER_ROWS: usize = 5;
pub const LETTER_COLS: usize = 5;

/// Letters A–Z in order, ids 0–25.
pub fn letters() -> Vec<ImageSample> {
    GLYPHS
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(id, line)| {
            let pixels: Vec<f64> = line
                .split_whitespace()
                .skip(1)
                .flat_map(|row| row.bytes().map(|b| f64::from(b - b'0')))
                .collect();
            ImageSample::new(id, LETTER_ROWS, LETTER_COLS, pixels)
                .expect("bundled glyph data is well formed")
        })
        .collect()
}
