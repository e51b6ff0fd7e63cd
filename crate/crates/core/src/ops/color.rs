//! Photometric kernels.

use super::quantize;
use crate::frame::Frame;

/// Integer Rec.601 luma, rounded.
#[inline]
pub(crate) fn luma(p: &[u8]) -> u32 {
    (p[0] as u32 * 299 + p[1] as u32 * 587 + p[2] as u32 * 114 + 500) / 1000
}

#[inline]
fn blend(degenerate: f32, value: f32, factor: f32) -> f32 {
    degenerate + factor * (value - degenerate)
}

fn map_lut(frame: &Frame, lut: &[u8; 256]) -> Frame {
    frame.same_shape(frame.data().iter().map(|&v| lut[v as usize]).collect())
}

fn map_channel_luts(frame: &Frame, luts: &[[u8; 256]; 3]) -> Frame {
    let mut data = frame.data().to_vec();
    for px in data.chunks_exact_mut(3) {
        for c in 0..3 {
            px[c] = luts[c][px[c] as usize];
        }
    }
    frame.same_shape(data)
}

fn lut_from(f: impl Fn(u8) -> u8) -> [u8; 256] {
    let mut lut = [0u8; 256];
    for (i, slot) in lut.iter_mut().enumerate() {
        *slot = f(i as u8);
    }
    lut
}

pub(crate) fn invert(frame: &Frame) -> Frame {
    map_lut(frame, &lut_from(|v| 255 - v))
}

/// Inverts every channel value `>= threshold`; 256 leaves the frame alone.
pub(crate) fn solarize(frame: &Frame, threshold: u32) -> Frame {
    map_lut(frame, &lut_from(|v| if v as u32 >= threshold { 255 - v } else { v }))
}

/// Keeps the top `bits` bits of each channel.
pub(crate) fn posterize(frame: &Frame, bits: u32) -> Frame {
    let bits = bits.min(8);
    let mask = if bits == 0 { 0 } else { !((1u16 << (8 - bits)) - 1) as u8 };
    map_lut(frame, &lut_from(|v| v & mask))
}

pub(crate) fn brightness(frame: &Frame, factor: f32) -> Frame {
    map_lut(frame, &lut_from(|v| quantize(blend(0.0, v as f32, factor))))
}

/// Blend toward the frame's mean luma.
pub(crate) fn contrast(frame: &Frame, factor: f32) -> Frame {
    let pixels = frame.data().len() / 3;
    let sum: u64 = frame.data().chunks_exact(3).map(|p| luma(p) as u64).sum();
    let mean = (sum as f64 / pixels as f64) as f32;
    map_lut(frame, &lut_from(|v| quantize(blend(mean, v as f32, factor))))
}

/// Blend toward the per-pixel grayscale image.
pub(crate) fn saturation(frame: &Frame, factor: f32) -> Frame {
    let mut data = frame.data().to_vec();
    for px in data.chunks_exact_mut(3) {
        let l = luma(px) as f32;
        for v in px.iter_mut() {
            *v = quantize(blend(l, *v as f32, factor));
        }
    }
    frame.same_shape(data)
}

/// Blend toward a 3x3 box blur. Border pixels have no full neighbourhood
/// and are left untouched.
pub(crate) fn sharpness(frame: &Frame, factor: f32) -> Frame {
    let (w, h) = (frame.width() as usize, frame.height() as usize);
    let src = frame.data();
    let mut data = src.to_vec();
    if w < 3 || h < 3 {
        return frame.same_shape(data);
    }
    let stride = w * 3;
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            for c in 0..3 {
                let mut sum = 0u32;
                for row in y - 1..=y + 1 {
                    let base = row * stride + c;
                    sum += src[base + (x - 1) * 3] as u32
                        + src[base + x * 3] as u32
                        + src[base + (x + 1) * 3] as u32;
                }
                let i = y * stride + x * 3 + c;
                data[i] = quantize(blend(sum as f32 / 9.0, src[i] as f32, factor));
            }
        }
    }
    frame.same_shape(data)
}

/// Per-channel linear stretch of `[min, max]` onto `[0, 255]`.
pub(crate) fn autocontrast(frame: &Frame) -> Frame {
    let mut lo = [255u8; 3];
    let mut hi = [0u8; 3];
    for px in frame.data().chunks_exact(3) {
        for c in 0..3 {
            lo[c] = lo[c].min(px[c]);
            hi[c] = hi[c].max(px[c]);
        }
    }
    let luts = [0, 1, 2].map(|c| {
        if hi[c] <= lo[c] {
            lut_from(|v| v)
        } else {
            let scale = 255.0 / (hi[c] - lo[c]) as f32;
            let low = lo[c] as f32;
            lut_from(|v| quantize((v as f32 - low) * scale))
        }
    });
    map_channel_luts(frame, &luts)
}

/// Per-channel histogram equalization (cumulative histogram LUT).
pub(crate) fn equalize(frame: &Frame) -> Frame {
    let mut hist = [[0u64; 256]; 3];
    for px in frame.data().chunks_exact(3) {
        for c in 0..3 {
            hist[c][px[c] as usize] += 1;
        }
    }
    let luts = hist.map(|h| {
        let Some(last) = h.iter().rposition(|&n| n > 0) else {
            return lut_from(|v| v);
        };
        let total: u64 = h.iter().sum();
        let step = (total - h[last]) / 255;
        if step == 0 {
            return lut_from(|v| v);
        }
        let mut lut = [0u8; 256];
        let mut acc = step / 2;
        for (slot, &count) in lut.iter_mut().zip(h.iter()) {
            *slot = (acc / step).min(255) as u8;
            acc += count;
        }
        lut
    });
    map_channel_luts(frame, &luts)
}

/// RGB in `[0, 1]` to HSV with hue in `[0, 1)`.
#[inline]
fn rgb_to_hsv(r: f32, g: f32, b: f32) -> (f32, f32, f32) {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let chroma = max - min;
    if chroma == 0.0 {
        return (0.0, 0.0, max);
    }
    let s = chroma / max;
    let h = if max == r {
        (g - b) / chroma
    } else if max == g {
        2.0 + (b - r) / chroma
    } else {
        4.0 + (r - g) / chroma
    };
    ((h / 6.0).rem_euclid(1.0), s, max)
}

#[inline]
fn hsv_to_rgb(h: f32, s: f32, v: f32) -> (f32, f32, f32) {
    let h6 = h * 6.0;
    let sector = h6.floor();
    let f = h6 - sector;
    let p = v * (1.0 - s);
    let q = v * (1.0 - s * f);
    let t = v * (1.0 - s * (1.0 - f));
    match (sector as i32).rem_euclid(6) {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    }
}

/// Rotates hue by `shift` turns.
pub(crate) fn hue_shift(frame: &Frame, shift: f32) -> Frame {
    let mut data = frame.data().to_vec();
    for px in data.chunks_exact_mut(3) {
        let (h, s, v) = rgb_to_hsv(
            px[0] as f32 / 255.0,
            px[1] as f32 / 255.0,
            px[2] as f32 / 255.0,
        );
        let (r, g, b) = hsv_to_rgb((h + shift).rem_euclid(1.0), s, v);
        px[0] = quantize(r * 255.0);
        px[1] = quantize(g * 255.0);
        px[2] = quantize(b * 255.0);
    }
    frame.same_shape(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn posterize_masks_low_bits() {
        let f = Frame::new(1, 1, vec![255, 130, 7]).unwrap();
        assert_eq!(posterize(&f, 4).data(), &[240, 128, 0]);
        assert_eq!(posterize(&f, 8).data(), f.data());
        assert_eq!(posterize(&f, 2).data(), &[192, 128, 0]);
    }

    #[test]
    fn autocontrast_stretches_each_channel() {
        let f = Frame::new(2, 1, vec![50, 10, 9, 150, 20, 9]).unwrap();
        assert_eq!(autocontrast(&f).data(), &[0, 0, 9, 255, 255, 9]);
    }

    #[test]
    fn equalize_flat_histogram_is_identity() {
        let f = Frame::filled(4, 4, [77, 77, 77]).unwrap();
        assert_eq!(equalize(&f).data(), f.data());
    }

    #[test]
    fn equalize_stretches_and_preserves_order() {
        let f = Frame::from_fn(64, 16, |x, _| [x as u8 * 2, 100, x as u8]).unwrap();
        let out = equalize(&f);
        let row: Vec<u8> = (0..64).map(|x| out.pixel(x, 0)[0]).collect();
        assert!(row.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(row[0], 0);
        assert!(row[63] >= 250);
        // single-level channel stays put
        assert!((0..64).all(|x| out.pixel(x, 2)[1] == 100));
    }

    #[test]
    fn hue_shift_primary_colours() {
        let red = Frame::new(1, 1, vec![255, 0, 0]).unwrap();
        assert_eq!(hue_shift(&red, 1.0 / 3.0).data(), &[0, 255, 0]);
        assert_eq!(hue_shift(&red, -1.0 / 3.0).data(), &[0, 0, 255]);
        assert_eq!(hue_shift(&red, 0.0).data(), &[255, 0, 0]);
    }

    #[test]
    fn grayscale_blend_endpoints() {
        let f = Frame::new(1, 1, vec![200, 100, 50]).unwrap();
        let l = luma(f.data()) as u8;
        assert_eq!(saturation(&f, 0.0).data(), &[l, l, l]);
        assert_eq!(saturation(&f, 1.0).data(), f.data());
    }
}
